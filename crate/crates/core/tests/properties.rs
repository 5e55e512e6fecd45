mod common;

use common::oracle::reference;
use lpp_core::demand::{optimal_demand, positivity_scan};
use lpp_core::generate::{generate, GeneratorParams, RegimeTarget};
use lpp_core::io::{parse_instance, write_instance};
use lpp_core::lp::{solve, solve_with_value_constraint, Direction, LpStatus, StandardLp};
use lpp_core::rational::{int, ratio};
use lpp_core::solution::owen_set_vertices;
use lpp_core::{
    characteristic_game, check_core_membership, core_nonempty, optimistic_game, owen_allocation,
    partition_core, partition_function_game, value_of, BuiltinRule, Coalition, DemandProfile,
    LppInstance, PartitionCoreMode, PartitionFunctionGame, Rational, Verdict, DEFAULT_PARTITION_CAP,
};
use proptest::prelude::*;

const CAP: usize = DEFAULT_PARTITION_CAP;

const TARGETS: [RegimeTarget; 6] = [
    RegimeTarget::Unconstrained,
    RegimeTarget::GrandOnly,
    RegimeTarget::General,
    RegimeTarget::Sufficient,
    RegimeTarget::Scarce,
    RegimeTarget::ScarceWithClaims,
];

fn instance(target: RegimeTarget, shape: usize, seed: u64) -> Option<(LppInstance, DemandProfile)> {
    let (n, q, g) = common::shape(shape);
    let mut params = GeneratorParams::new(n, q, g, target);
    params.attempts = 40;
    let inst = generate(&params, seed).ok()?;
    let profile = DemandProfile::compute(&inst).unwrap();
    Some((inst, profile))
}

fn any_instance() -> impl Strategy<Value = Option<(LppInstance, DemandProfile)>> {
    (0..TARGETS.len(), 0usize..36, any::<u64>()).prop_map(|(t, shape, seed)| instance(TARGETS[t], shape, seed))
}

fn targeted(target: RegimeTarget) -> impl Strategy<Value = Option<(LppInstance, DemandProfile)>> {
    (0usize..36, any::<u64>()).prop_map(move |(shape, seed)| instance(target, shape, seed))
}

fn small_lp() -> impl Strategy<Value = StandardLp> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(nv, rows)| {
        (
            prop::collection::vec(-3i64..=5, nv),
            prop::collection::vec((prop::collection::vec(-3i64..=5, nv), -4i64..=12, any::<bool>()), rows),
        )
            .prop_map(|(obj, rows)| {
                let mut lp = StandardLp::new(obj.into_iter().map(int).collect());
                for (row, rhs, ge) in rows {
                    let row = row.into_iter().map(int).collect();
                    if ge {
                        lp.add_ge(row, int(rhs));
                    } else {
                        lp.add_le(row, int(rhs));
                    }
                }
                lp
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplex_matches_enumeration_and_certifies(lp in small_lp()) {
        let got = solve(&lp).unwrap();
        let want = reference(&lp);
        prop_assert_eq!(got.status, want.status);
        prop_assert_eq!(&got.value, &want.value);
        if got.status == LpStatus::Optimal {
            prop_assert!(lp.certifies(&got));
            // Complementary slackness, exactly.
            for (i, row) in lp.matrix.iter().enumerate() {
                let slack = &lp.rhs[i] - row.iter().zip(&got.primal).map(|(a, x)| a * x).sum::<Rational>();
                prop_assert!(slack == int(0) || got.dual[i] == int(0));
            }
        }
        prop_assert_eq!(solve(&lp).unwrap(), got);
    }

    #[test]
    fn value_constraint_with_same_objective_is_idempotent(lp in small_lp()) {
        let got = solve(&lp).unwrap();
        if let Some(v) = got.value {
            let again = solve_with_value_constraint(&lp, &v, &lp.objective, Direction::Maximize).unwrap();
            prop_assert_eq!(again.value, Some(v));
        }
    }

    #[test]
    fn generated_instances_are_valid_and_round_trip(pair in any_instance()) {
        if let Some((inst, _)) = pair {
            prop_assert!(inst.is_valid(), "{:?}", inst.validate());
            let text = write_instance(&inst);
            prop_assert_eq!(parse_instance(&text).unwrap().instance, inst);
        }
    }

    #[test]
    fn value_is_monotone_concave_and_flat_past_demand(pair in any_instance()) {
        let Some((inst, profile)) = pair else { return Ok(()) };
        for s in inst.grand().subsets() {
            let d = profile.demand(s).clone();
            prop_assert!(d > int(0));
            let grid: Vec<Rational> = (0..=8).map(|k| &d * ratio(k, 6)).collect();
            let vals: Vec<Rational> = grid.iter().map(|z| value_of(&inst, s, z).unwrap()).collect();
            prop_assert_eq!(&vals[0], &int(0));
            for w in vals.windows(2) {
                prop_assert!(w[1] >= w[0]);
            }
            for w in vals.windows(3) {
                // Equally spaced grid: concavity means non-increasing steps.
                prop_assert!(&w[1] - &w[0] >= &w[2] - &w[1]);
            }
            prop_assert_eq!(&vals[6], profile.profit(s));
            prop_assert_eq!(&vals[7], profile.profit(s));
            prop_assert_eq!(&vals[8], profile.profit(s));
            prop_assert_eq!(optimal_demand(&inst, s).unwrap().amount, d);
        }
    }

    #[test]
    fn larger_coalitions_do_no_worse(pair in any_instance(), z in 0i64..40) {
        let Some((inst, _)) = pair else { return Ok(()) };
        let z = ratio(z, 2);
        for t in inst.grand().subsets() {
            for s in t.subsets() {
                prop_assert!(value_of(&inst, t, &z).unwrap() >= value_of(&inst, s, &z).unwrap());
            }
        }
    }

    #[test]
    fn resources_add_over_disjoint_coalitions(pair in any_instance()) {
        let Some((inst, _)) = pair else { return Ok(()) };
        let grand = inst.grand();
        for s in grand.subsets() {
            let rest = grand.minus(s);
            if rest.is_empty() {
                continue;
            }
            let sum: Vec<Rational> = inst.coalition_resources(s).unwrap().iter()
                .zip(inst.coalition_resources(rest).unwrap())
                .map(|(a, b)| a + b)
                .collect();
            prop_assert_eq!(sum, inst.coalition_resources(grand).unwrap());
        }
        prop_assert!(inst.coalition_resources(Coalition::EMPTY).is_err());
    }

    #[test]
    fn values_are_positive_below_any_profitable_amount(pair in any_instance()) {
        let Some((inst, profile)) = pair else { return Ok(()) };
        for s in inst.grand().subsets() {
            prop_assert!(positivity_scan(&inst, s, profile.demand(s), 5).unwrap());
        }
    }

    #[test]
    fn dual_prices_give_a_core_point_when_the_stock_never_binds(pair in targeted(RegimeTarget::Unconstrained)) {
        let Some((inst, profile)) = pair else { return Ok(()) };
        let v = characteristic_game(&inst, &profile, CAP).unwrap();
        let x = owen_allocation(&inst, &profile).unwrap();
        prop_assert!(check_core_membership(&v, &x).unwrap().is_member());
        let pf = PartitionFunctionGame::from_characteristic(&v, CAP).unwrap();
        for mode in [PartitionCoreMode::Pessimistic, PartitionCoreMode::Optimistic] {
            prop_assert_eq!(partition_core(&pf, mode).unwrap().verdict, Verdict::NonEmpty);
        }
    }

    #[test]
    fn sufficient_stock_keeps_both_partition_cores(pair in targeted(RegimeTarget::Sufficient)) {
        let Some((inst, profile)) = pair else { return Ok(()) };
        for rule in BuiltinRule::ALL {
            let v = partition_function_game(&inst, &profile, &rule, CAP).unwrap();
            for mode in [PartitionCoreMode::Pessimistic, PartitionCoreMode::Optimistic] {
                prop_assert_eq!(partition_core(&v, mode).unwrap().verdict, Verdict::NonEmpty);
            }
        }
    }

    #[test]
    fn every_dual_vertex_prices_a_core_point(pair in targeted(RegimeTarget::Sufficient)) {
        let Some((inst, profile)) = pair else { return Ok(()) };
        if inst.n() > 3 {
            prop_assert!(owen_set_vertices(&inst, &profile).is_err());
            return Ok(());
        }
        let v_opt = optimistic_game(&inst, &profile).unwrap();
        let vertices = owen_set_vertices(&inst, &profile).unwrap();
        prop_assert!(!vertices.is_empty());
        prop_assert!(vertices.iter().any(|e| e.allocation == owen_allocation(&inst, &profile).unwrap()));
        for e in vertices {
            prop_assert!(check_core_membership(&v_opt, &e.allocation).unwrap().is_member());
        }
    }

    #[test]
    fn core_witnesses_are_members(pair in any_instance()) {
        let Some((inst, profile)) = pair else { return Ok(()) };
        let v_opt = optimistic_game(&inst, &profile).unwrap();
        let report = core_nonempty(&v_opt).unwrap();
        prop_assert_eq!(report.witness.is_some(), report.verdict == Verdict::NonEmpty);
        if let Some(x) = report.witness {
            prop_assert!(check_core_membership(&v_opt, &x).unwrap().is_member());
        }
    }
}
