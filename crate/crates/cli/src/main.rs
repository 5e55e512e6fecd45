mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lpp_core::DEFAULT_PARTITION_CAP;

#[derive(Parser)]
#[command(
    name = "lpp",
    version,
    about = "Linear production situations with a managed common-pool resource"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args, Clone, Debug)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Also print decimal approximations with this many places (table
    /// output only; JSON is always exact).
    #[arg(long, value_name = "K", global = true)]
    pub decimals: Option<usize>,

    /// Largest n for which partitions are enumerated.
    #[arg(long, value_name = "M", default_value_t = DEFAULT_PARTITION_CAP,
          value_parser = clap::builder::ValueParser::new(parse_cap), global = true)]
    pub partition_cap: usize,
}

fn parse_cap(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(m) if (1..=20).contains(&m) => Ok(m),
        _ => Err("expected an integer between 1 and 20".into()),
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// v(S) = value(S; d_S), v(N) = value(N; min{d_N, r}); needs M^min ⊆ {{N}}.
    Characteristic,
    /// v^opt(S) = value(S; min{d_S, r}).
    Optimistic,
    /// v^pes(S) = value(S; R^pes(S)).
    Pessimistic,
    /// R^opt(S) = min{d_S, r}.
    ResourceOpt,
    /// R^pes(S): what the other coalitions leave in the worst partition.
    ResourcePes,
    /// Partition-function game V(S|P) under --rule.
    Partition,
    /// Bankruptcy game with estate r and the singleton demands as claims.
    Bankruptcy,
    /// v^R from the resource game "R" in the instance file.
    UserResource,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    /// Every subcoalition T of U is capped at min{d_T, r_U}.
    Capped,
    /// Only U itself is capped; subcoalitions keep their demand.
    Block,
}

#[derive(Subcommand)]
enum Command {
    /// Check the model assumptions.
    Validate { file: PathBuf },
    /// Optimal demands d_S and the values they attain.
    Demands {
        file: PathBuf,
        /// Single coalition, e.g. 1,3.
        #[arg(long)]
        coalition: Option<String>,
    },
    /// Minimal over-demanding partitions and the resulting regime.
    Classify { file: PathBuf },
    /// Build a game.
    Game {
        file: PathBuf,
        #[arg(long, value_enum)]
        model: Model,
        /// Allocation rule for --model partition: proportional, optimistic or pessimistic.
        #[arg(long)]
        rule: Option<String>,
    },
    /// Decide whether a game's core is empty, with a witness if not.
    Core {
        file: PathBuf,
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        rule: Option<String>,
    },
    /// Core allocation priced at the grand coalition's dual prices.
    Owen {
        file: PathBuf,
        /// List the allocation of every optimal dual vertex (n <= 3).
        #[arg(long)]
        enumerate: bool,
    },
    /// Partitionally stable coalition structures.
    Stability {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Semantics::Capped)]
        semantics: Semantics,
    },
    /// Write a random instance in a requested regime.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        seed: u64,
        /// unconstrained, grand-only, general, sufficient, scarce or scarce-with-claims.
        #[arg(long)]
        regime: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = &cli.global;
    let result = match cli.command {
        Command::Validate { file } => commands::validate(&file, opts),
        Command::Demands { file, coalition } => commands::demands(&file, coalition.as_deref(), opts),
        Command::Classify { file } => commands::classify(&file, opts),
        Command::Game { file, model, rule } => commands::game(&file, model, rule.as_deref(), opts),
        Command::Core { file, model, rule } => commands::core(&file, model, rule.as_deref(), opts),
        Command::Owen { file, enumerate } => commands::owen(&file, enumerate, opts),
        Command::Stability { file, semantics } => commands::stability(&file, semantics, opts),
        Command::Generate { n, q, g, seed, regime, output } => {
            commands::generate(n, q, g, seed, &regime, output.as_deref())
        }
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Some(text) = &failure.stdout {
                print!("{text}");
            }
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
