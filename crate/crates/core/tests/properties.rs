use proptest::prelude::*;

use spe_core::arena::expand;
use spe_core::gen::{self, ArenaShape};
use spe_core::oracle::{self, SearchMode, DEFAULT_CAP};
use spe_core::prefs::{
    antagonistic_extension, find_spe_killer, incomparability_is_equivalence, pareto_optimal, validate_relation,
    OutcomeSet, Relation, RelationKind,
};
use spe_core::profiles::is_spe;
use spe_core::solver::solve_two_player_swo;
use spe_core::Error;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// A strict partial order from arbitrary pairs: closed, cycles dropped.
fn partial_order(n: usize, raw: &[(usize, usize)]) -> Relation {
    let mut rel = Relation::empty(n);
    for &(x, y) in raw {
        let (x, y) = (x % n, y % n);
        if x == y {
            continue;
        }
        let mut next = rel.clone();
        next.insert(x, y);
        let next = next.transitive_closure();
        if next.is_irreflexive() {
            rel = next;
        }
    }
    rel
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn antagonistic_extension_is_a_compatible_chain(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = gen::rng(seed);
        let ra = Relation::levels(n, &gen::random_levels(&mut r, n));
        let rb = Relation::levels(n, &gen::random_levels(&mut r, n));
        prop_assume!(ra.intersection(&rb).is_empty());
        let order = antagonistic_extension(&ra, &rb, (1u64 << n) - 1).unwrap();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        let lin = Relation::chain(n, &order);
        prop_assert!(lin.contains(&ra));
        prop_assert!(lin.contains(&rb.inverse()));
    }

    #[test]
    fn strict_weak_check_agrees_with_incomparability(n in 2usize..=6, raw in prop::collection::vec((0usize..6, 0usize..6), 0..12)) {
        let rel = partial_order(n, &raw);
        let set = OutcomeSet::new(gen::outcome_names(n)).unwrap();
        let validated = validate_relation(&rel.pairs(), RelationKind::StrictWeak, &set).unwrap().is_ok();
        prop_assert_eq!(validated, incomparability_is_equivalence(&rel));
    }

    #[test]
    fn pareto_front_is_a_nonempty_subset(seed in any::<u64>(), n in 1usize..=6, players in 1usize..=3, subset in 1u64..64) {
        let mut r = gen::rng(seed);
        let levels: Vec<_> = (0..players).map(|_| gen::random_levels(&mut r, n)).collect();
        let prefs = gen::levels_profile(&levels, n);
        let subset = subset & ((1u64 << n) - 1);
        prop_assume!(subset != 0);
        let front = pareto_optimal(subset, &prefs);
        prop_assert!(front != 0);
        prop_assert_eq!(front & !subset, 0);
    }
}

proptest! {
    #![proptest_config(config(120))]

    #[test]
    fn swo_solver_agrees_with_oracle(seed in any::<u64>()) {
        let (arena, prefs) = oracle::random_swo_game(seed);
        let ex = expand(&arena).unwrap();
        prop_assume!(find_spe_killer(&prefs).is_none());
        prop_assume!(oracle::profile_space(&ex) <= 20_000);
        let cert = solve_two_player_swo(&ex, &prefs).unwrap();
        prop_assert!(is_spe(&ex, &cert.profile, &prefs));
        let roots = oracle::spe_root_outcomes(&ex, &prefs).unwrap();
        prop_assert!(roots.contains(&cert.root_outcome(&ex)));
    }

    #[test]
    fn memory_only_adds_equilibria(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let ex = expand(&gen::random_arena(&mut r, ArenaShape { vertices: 4, players: 2, outcomes: 3 })).unwrap();
        let levels: Vec<_> = (0..2).map(|_| gen::random_levels(&mut r, 3)).collect();
        let prefs = gen::levels_profile(&levels, 3);
        let positional = oracle::search("", &ex, &prefs, SearchMode::Spe, None, DEFAULT_CAP).unwrap().spe_count;
        let one = oracle::search("", &ex, &prefs, SearchMode::Spe, Some(1), DEFAULT_CAP).unwrap().spe_count;
        prop_assert_eq!(positional > 0, one > 0);
        match oracle::search("", &ex, &prefs, SearchMode::Spe, Some(2), 200_000) {
            Ok(two) => prop_assert!(one == 0 || two.spe_count > 0),
            Err(Error::Resource(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let (arena, prefs) = oracle::random_swo_game(seed);
        let ex = expand(&arena).unwrap();
        prop_assume!(oracle::profile_space(&ex) <= 20_000);
        let a = oracle::search("g", &ex, &prefs, SearchMode::GpSpe, None, DEFAULT_CAP).unwrap();
        let b = oracle::search("g", &ex, &prefs, SearchMode::GpSpe, None, DEFAULT_CAP).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
