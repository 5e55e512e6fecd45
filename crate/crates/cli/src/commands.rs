use std::path::Path;

use lpp_core::demand::optimal_demand;
use lpp_core::game::{bankruptcy_game, optimistic_resource_game, pessimistic_resource_game};
use lpp_core::generate::{GeneratorParams, RegimeTarget};
use lpp_core::io::{read_instance, write_instance, InstanceDocument};
use lpp_core::rational::format_rational;
use lpp_core::solution::{owen_set_vertices, scarce_pool_allocation};
use lpp_core::stability::{stability_report, Certificate};
use lpp_core::{
    characteristic_game, check_core_membership, compute_m_min, core_nonempty, lpp_game_from_resource_game,
    optimistic_game, owen_allocation, partition_function_game, pessimistic_and_optimistic_views,
    pessimistic_game, Allocation, BuiltinRule, CharacteristicGame, Coalition, CoreReport, DemandProfile,
    Error, LppInstance, PartitionFunctionGame, Provenance, Rational, ReductionSemantics,
};
use serde_json::{json, Map, Value};

use crate::render::{Numbers, Table};
use crate::{Format, GlobalOpts, Model, Semantics};

pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Report to print before exiting, e.g. the violation list of `validate`.
    pub stdout: Option<String>,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into(), stdout: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Structure(_) => 2,
            Error::Domain(_)
            | Error::Precondition(_)
            | Error::PartitionCap { .. }
            | Error::RuleViolation { .. }
            | Error::GeneratorExhausted { .. } => 3,
            Error::Lp(_) | Error::LpStatus { .. } => 1,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn json_text(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn exact(value: &Rational) -> Value {
    Value::String(format_rational(value))
}

fn with_footer(mut text: String, numbers: &Numbers) -> String {
    if let Some(note) = numbers.footer() {
        text.push('\n');
        text.push_str(&note);
        text.push('\n');
    }
    text
}

fn load(file: &Path) -> Result<InstanceDocument, Failure> {
    let doc = read_instance(file)?;
    let violations = doc.instance.validate();
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| format!("  - {v}")).collect();
        return Err(Failure::new(
            2,
            format!("{} violates the model assumptions:\n{}", file.display(), list.join("\n")),
        ));
    }
    Ok(doc)
}

fn load_with_profile(file: &Path) -> Result<(InstanceDocument, DemandProfile), Failure> {
    let doc = load(file)?;
    let profile = DemandProfile::compute(&doc.instance)?;
    Ok((doc, profile))
}

pub fn validate(file: &Path, opts: &GlobalOpts) -> Outcome {
    let doc = read_instance(file)?;
    let inst = &doc.instance;
    let violations = inst.validate();
    let text = match opts.format {
        Format::Json => json_text(json!({
            "valid": violations.is_empty(),
            "n": inst.n(),
            "q": inst.q(),
            "g": inst.g(),
            "violations": violations,
        })),
        Format::Table => {
            let mut out = format!("n = {}, q = {}, g = {}\n", inst.n(), inst.q(), inst.g());
            if violations.is_empty() {
                out.push_str("valid\n");
            } else {
                for v in &violations {
                    out.push_str(&format!("violation: {v}\n"));
                }
            }
            out
        }
    };
    if violations.is_empty() {
        Ok(text)
    } else {
        Err(Failure {
            code: 2,
            message: format!("{} violation(s)", violations.len()),
            stdout: Some(text),
        })
    }
}

pub fn demands(file: &Path, coalition: Option<&str>, opts: &GlobalOpts) -> Outcome {
    let numbers = Numbers { decimals: opts.decimals };
    let doc = load(file)?;
    let inst = &doc.instance;
    let n = inst.n();
    let (coalitions, profile) = match coalition {
        Some(text) => {
            let s = Coalition::parse_key(text, n)?;
            let d = optimal_demand(inst, s)?;
            (vec![(s, d.amount, d.profit)], None)
        }
        None => {
            let profile = DemandProfile::compute(inst)?;
            let game = CharacteristicGame::from_fn(n, |_| Ok(Rational::default()))?;
            let rows = game
                .coalitions()
                .into_iter()
                .map(|s| (s, profile.demand(s).clone(), profile.profit(s).clone()))
                .collect();
            (rows, Some(profile))
        }
    };
    match opts.format {
        Format::Json => {
            let mut d = Map::new();
            let mut v = Map::new();
            for (s, amount, profit) in &coalitions {
                d.insert(s.key(n), exact(amount));
                v.insert(s.key(n), exact(profit));
            }
            let mut out = json!({ "n": n, "r": exact(inst.stock()), "demand": d, "value_at_demand": v });
            if let Some(p) = &profile {
                out["singleton_total"] = exact(&p.singleton_total());
            }
            Ok(json_text(out))
        }
        Format::Table => {
            let mut table = Table::new(["coalition", "d_S", "value(S; d_S)"]);
            for (s, amount, profit) in &coalitions {
                table.row([s.to_string(), numbers.show(amount), numbers.show(profit)]);
            }
            let mut out = format!("r = {}\n", numbers.show(inst.stock()));
            out.push_str(&table.render());
            if let Some(p) = &profile {
                out.push_str(&format!("sum of singleton demands = {}\n", numbers.show(&p.singleton_total())));
            }
            Ok(with_footer(out, &numbers))
        }
    }
}

pub fn classify(file: &Path, opts: &GlobalOpts) -> Outcome {
    let numbers = Numbers { decimals: opts.decimals };
    let (doc, profile) = load_with_profile(file)?;
    let inst = &doc.instance;
    let report = compute_m_min(inst, &profile, opts.partition_cap)?;
    let regime = format!("{:?}", report.regime);
    match opts.format {
        Format::Json => {
            let m_min: Vec<Value> = report
                .m_min
                .iter()
                .map(|p| json!({ "partition": p.to_string(), "demand": exact(&profile.partition_demand(p)) }))
                .collect();
            Ok(json_text(json!({
                "regime": regime,
                "r": exact(inst.stock()),
                "grand_demand": exact(profile.grand_demand()),
                "m_min": m_min,
            })))
        }
        Format::Table => {
            let mut out = format!(
                "regime: {regime}\nr = {}, d_N = {}\n",
                numbers.show(inst.stock()),
                numbers.show(profile.grand_demand())
            );
            if report.m_min.is_empty() {
                out.push_str("M^min is empty\n");
            } else {
                let mut table = Table::new(["M^min partition", "d(P)"]);
                for p in &report.m_min {
                    table.row([p.to_string(), numbers.show(&profile.partition_demand(p))]);
                }
                out.push_str(&table.render());
            }
            Ok(with_footer(out, &numbers))
        }
    }
}

fn rule_of(model: Model, rule: Option<&str>) -> Result<Option<BuiltinRule>, Failure> {
    match (model, rule) {
        (Model::Partition, Some(r)) => Ok(Some(r.parse::<BuiltinRule>()?)),
        (Model::Partition, None) => Err(Failure::new(2, "--model partition needs --rule")),
        (_, Some(_)) => Err(Failure::new(2, "--rule only applies to --model partition")),
        (_, None) => Ok(None),
    }
}

enum Built {
    Characteristic(CharacteristicGame),
    Partition(PartitionFunctionGame),
}

fn build(doc: &InstanceDocument, profile: &DemandProfile, model: Model, rule: Option<BuiltinRule>, cap: usize) -> Result<Built, Failure> {
    let inst = &doc.instance;
    Ok(Built::Characteristic(match model {
        Model::Characteristic => characteristic_game(inst, profile, cap)?,
        Model::Optimistic => optimistic_game(inst, profile)?,
        Model::Pessimistic => pessimistic_game(inst, profile, cap)?,
        Model::ResourceOpt => optimistic_resource_game(inst, profile),
        Model::ResourcePes => pessimistic_resource_game(inst, profile, cap)?,
        Model::Bankruptcy => {
            let claims: Vec<Rational> = (0..inst.n()).map(|i| profile.demand(Coalition::singleton(i)).clone()).collect();
            bankruptcy_game(inst.stock(), &claims)?
        }
        Model::UserResource => {
            let r = user_resource(doc)?;
            lpp_game_from_resource_game(inst, r)?
        }
        Model::Partition => {
            let rule = rule.expect("checked by rule_of");
            return Ok(Built::Partition(partition_function_game(inst, profile, &rule, cap)?));
        }
    }))
}

fn user_resource(doc: &InstanceDocument) -> Result<&CharacteristicGame, Failure> {
    doc.resource_game
        .as_ref()
        .ok_or_else(|| Failure::new(2, "the instance file has no resource game \"R\""))
}

fn model_name(model: Model, rule: Option<BuiltinRule>) -> String {
    let base = match model {
        Model::Characteristic => "characteristic",
        Model::Optimistic => "optimistic",
        Model::Pessimistic => "pessimistic",
        Model::ResourceOpt => "resource-opt",
        Model::ResourcePes => "resource-pes",
        Model::Partition => "partition",
        Model::Bankruptcy => "bankruptcy",
        Model::UserResource => "user-resource",
    };
    match rule {
        Some(r) => format!("{base}/{r}"),
        None => base.to_string(),
    }
}

fn game_table(game: &CharacteristicGame, label: &str, numbers: &Numbers) -> String {
    let mut table = Table::new(["coalition", label]);
    for s in game.coalitions() {
        table.row([s.to_string(), numbers.show(game.worth(s))]);
    }
    table.render()
}

pub fn game(file: &Path, model: Model, rule: Option<&str>, opts: &GlobalOpts) -> Outcome {
    let numbers = Numbers { decimals: opts.decimals };
    let rule = rule_of(model, rule)?;
    let (doc, profile) = load_with_profile(file)?;
    let name = model_name(model, rule);
    match build(&doc, &profile, model, rule, opts.partition_cap)? {
        Built::Characteristic(g) => match opts.format {
            Format::Json => {
                let mut out = g.to_json();
                out["model"] = Value::String(name);
                Ok(json_text(out))
            }
            Format::Table => Ok(with_footer(format!("model: {name}\n{}", game_table(&g, "worth", &numbers)), &numbers)),
        },
        Built::Partition(v) => {
            let (low, high) = pessimistic_and_optimistic_views(&v);
            match opts.format {
                Format::Json => {
                    let mut out = v.to_json();
                    out["model"] = Value::String(name);
                    out["v_minus"] = low.worth_json();
                    out["v_plus"] = high.worth_json();
                    Ok(json_text(out))
                }
                Format::Table => {
                    let mut table = Table::new(["coalition", "partition", "V(S|P)"]);
                    for (p, worths) in v.entries() {
                        for (s, w) in p.blocks().iter().zip(worths) {
                            table.row([s.to_string(), p.to_string(), numbers.show(w)]);
                        }
                    }
                    let mut views = Table::new(["coalition", "v-", "v+"]);
                    for s in low.coalitions() {
                        views.row([s.to_string(), numbers.show(low.worth(s)), numbers.show(high.worth(s))]);
                    }
                    let out = format!("model: {name}\n{}\n{}", table.render(), views.render());
                    Ok(with_footer(out, &numbers))
                }
            }
        }
    }
}

fn report_json(report: &CoreReport, n: usize) -> Value {
    let witness = report.witness.as_ref().map(|x| allocation_json(x, n));
    json!({
        "verdict": report.verdict,
        "witness": witness,
        "provenance": report.provenance,
    })
}

fn allocation_json(x: &Allocation, n: usize) -> Value {
    let mut map = Map::new();
    for (i, v) in x.iter().enumerate() {
        map.insert(Coalition::singleton(i).key(n), exact(v));
    }
    Value::Object(map)
}

fn report_lines(label: &str, report: &CoreReport, numbers: &Numbers) -> String {
    let mut out = format!("{label}: {:?}\n", report.verdict);
    if let Some(x) = &report.witness {
        let provenance = report.provenance.map(|p| format!(" ({p:?})")).unwrap_or_default();
        out.push_str(&format!("witness{provenance}:\n"));
        let mut table = Table::new(["player", "payoff"]);
        for (i, v) in x.iter().enumerate() {
            table.row([(i + 1).to_string(), numbers.show(v)]);
        }
        out.push_str(&table.render());
    }
    out
}

pub fn core(file: &Path, model: Model, rule: Option<&str>, opts: &GlobalOpts) -> Outcome {
    let numbers = Numbers { decimals: opts.decimals };
    let rule = rule_of(model, rule)?;
    let (doc, profile) = load_with_profile(file)?;
    let n = doc.instance.n();
    let name = model_name(model, rule);
    let reports: Vec<(&str, CoreReport)> = match build(&doc, &profile, model, rule, opts.partition_cap)? {
        Built::Characteristic(g) => vec![("core", core_nonempty(&g)?)],
        Built::Partition(v) => {
            let (low, high) = pessimistic_and_optimistic_views(&v);
            vec![("core (via v-)", core_nonempty(&low)?), ("strict core (via v+)", core_nonempty(&high)?)]
        }
    };
    match opts.format {
        Format::Json => {
            let mut out = json!({ "model": name });
            match reports.as_slice() {
                [(_, only)] => {
                    let body = report_json(only, n);
                    for (k, v) in body.as_object().unwrap() {
                        out[k] = v.clone();
                    }
                }
                [(_, low), (_, high)] => {
                    out["core"] = report_json(low, n);
                    out["strict_core"] = report_json(high, n);
                }
                _ => unreachable!(),
            }
            Ok(json_text(out))
        }
        Format::Table => {
            let mut out = format!("model: {name}\n");
            for (label, report) in &reports {
                out.push_str(&report_lines(label, report, &numbers));
            }
            Ok(with_footer(out, &numbers))
        }
    }
}

pub fn owen(file: &Path, enumerate: bool, opts: &GlobalOpts) -> Outcome {
    let numbers = Numbers { decimals: opts.decimals };
    let (doc, profile) = load_with_profile(file)?;
    let inst = &doc.instance;
    let n = inst.n();
    let (x, provenance, game, against) = if profile.grand_demand() <= inst.stock() {
        let x = owen_allocation(inst, &profile)?;
        (x, Provenance::OwenConstruction, optimistic_game(inst, &profile)?, "optimistic")
    } else {
        match (&doc.resource_game, &doc.core_point) {
            (Some(r), Some(u)) => {
                let x = scarce_pool_allocation(inst, &profile, r, &Allocation(u.clone()))?;
                (x, Provenance::ScarcePoolConstruction, lpp_game_from_resource_game(inst, r)?, "user-resource")
            }
            _ => {
                return Err(Failure::new(
                    3,
                    format!(
                        "d_N = {} exceeds r = {}: the dual-price allocation needs d_N <= r; \
                         supply a resource game \"R\" and a core point \"u\" of it to use the scarce-pool construction",
                        format_rational(profile.grand_demand()),
                        format_rational(inst.stock())
                    ),
                ))
            }
        }
    };
    let member = check_core_membership(&game, &x)?.is_member();
    let vertices = if enumerate { Some(owen_set_vertices(inst, &profile)?) } else { None };
    match opts.format {
        Format::Json => {
            let mut out = json!({
                "allocation": allocation_json(&x, n),
                "provenance": provenance,
                "checked_against": against,
                "in_core": member,
            });
            if let Some(vs) = &vertices {
                out["dual_vertices"] = Value::Array(
                    vs.iter()
                        .map(|e| {
                            json!({
                                "prices": e.prices.iter().map(exact).collect::<Vec<_>>(),
                                "allocation": allocation_json(&e.allocation, n),
                                "in_core": check_core_membership(&game, &e.allocation).map(|m| m.is_member()).unwrap_or(false),
                            })
                        })
                        .collect(),
                );
            }
            Ok(json_text(out))
        }
        Format::Table => {
            let mut out = format!("construction: {provenance:?}\n");
            let mut table = Table::new(["player", "payoff"]);
            for (i, v) in x.iter().enumerate() {
                table.row([(i + 1).to_string(), numbers.show(v)]);
            }
            out.push_str(&table.render());
            out.push_str(&format!("in the core of the {against} game: {}\n", if member { "yes" } else { "no" }));
            if let Some(vs) = &vertices {
                out.push_str(&format!("\n{} optimal dual vertices\n", vs.len()));
                let mut header = vec!["prices".to_string()];
                header.extend((1..=n).map(|i| format!("x_{i}")));
                header.push("in core".into());
                let mut table = Table::new(header);
                for e in vs {
                    let prices: Vec<String> = e.prices.iter().map(|p| numbers.show(p)).collect();
                    let mut row = vec![format!("({})", prices.join(", "))];
                    row.extend(e.allocation.iter().map(|v| numbers.show(v)));
                    let ok = check_core_membership(&game, &e.allocation)?.is_member();
                    row.push(if ok { "yes" } else { "no" }.into());
                    table.row(row);
                }
                out.push_str(&table.render());
            }
            Ok(with_footer(out, &numbers))
        }
    }
}

pub fn stability(file: &Path, semantics: Semantics, opts: &GlobalOpts) -> Outcome {
    let (doc, profile) = load_with_profile(file)?;
    let inst = &doc.instance;
    let n = inst.n();
    let sem = match semantics {
        Semantics::Capped => ReductionSemantics::CappedSubcoalitions,
        Semantics::Block => ReductionSemantics::BlockLevelCap,
    };
    let report = stability_report(inst, &profile, sem, opts.partition_cap)?;
    let stable: Vec<String> = report.iter().filter(|v| v.is_stable()).map(|v| v.partition.to_string()).collect();
    match opts.format {
        Format::Json => Ok(json_text(json!({
            "semantics": format!("{sem:?}"),
            "stable": stable,
            "partitions": report.iter().map(|v| v.to_json(n)).collect::<Vec<_>>(),
        }))),
        Format::Table => {
            let mut table = Table::new(["partition", "stable", "reason"]);
            for v in &report {
                let reason = match &v.certificate {
                    Certificate::Stable { .. } => "every block core non-empty, no merger has a core".to_string(),
                    Certificate::EmptyBlockCore { block } => format!("reduced game on {block} has an empty core"),
                    Certificate::ProfitableMerger { blocks, .. } => {
                        let names: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
                        format!("merging {} gives a non-empty core", names.join(" + "))
                    }
                };
                table.row([v.partition.to_string(), if v.is_stable() { "yes" } else { "no" }.into(), reason]);
            }
            let head = if stable.is_empty() { "none".to_string() } else { stable.join(", ") };
            Ok(format!("semantics: {sem:?}\nstable partitions: {head}\n{}", table.render()))
        }
    }
}

pub fn generate(n: usize, q: usize, g: usize, seed: u64, regime: &str, output: Option<&Path>) -> Outcome {
    let target: RegimeTarget = regime.parse()?;
    let inst: LppInstance = lpp_core::generate::generate(&GeneratorParams::new(n, q, g, target), seed)?;
    let text = write_instance(&inst);
    match output {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}
