use super::*;
use crate::arena::{expand, tests::stop_game};
use crate::gen::{self, ArenaShape};
use crate::prefs::{PreferenceRelation, OutcomeSet};
use crate::profiles::is_spe;

fn swo(levels: &[Vec<Vec<OutcomeId>>], n: usize) -> PreferenceProfile {
    gen::levels_profile(levels, n)
}

#[test]
fn antagonist_stop_game() {
    // x=0 y=1 z=2; a: z < y < x, b inverse
    let ex = expand(&stop_game()).unwrap();
    let prefs = gen::linear_profile(&[vec![2, 1, 0], vec![0, 1, 2]], 3);
    let cert = solve_antagonist(&ex, &prefs).unwrap();
    assert_eq!(cert.mode, SolveMode::GpSpe);
    assert!(is_spe(&ex, &cert.profile, &prefs));
    cert.verify(&ex, &prefs).unwrap();
}

#[test]
fn killer_is_rejected() {
    // a: z < y < x, b: x < z < y
    let ex = expand(&stop_game()).unwrap();
    let prefs = gen::linear_profile(&[vec![2, 1, 0], vec![0, 2, 1]], 3);
    match solve(&ex, &prefs, &SolveOptions::default()) {
        Err(Error::Killer(_)) => {}
        other => panic!("expected killer, got {other:?}"),
    }
}

#[test]
fn quasi_antagonist_checks() {
    let prefs = gen::linear_profile(&[vec![1, 2, 0], vec![1, 0, 2]], 3);
    check_quasi_antagonist(&prefs, 1).unwrap();
    assert!(matches!(check_quasi_antagonist(&prefs, 0), Err(Error::Precondition(_))));
    let ex = expand(&stop_game()).unwrap();
    assert!(matches!(solve_quasi_antagonist_stop(&ex, &prefs, 1), Err(Error::Precondition(_))));
    let cert = solve_difference_recursion(&ex, &prefs, 1).unwrap();
    cert.verify(&ex, &prefs).unwrap();
}

#[test]
fn swo_without_linear_extension_is_solved() {
    // a: {x,y} < z, b: z < {x,y}
    let prefs = swo(&[vec![vec![0, 1], vec![2]], vec![vec![2], vec![0, 1]]], 3);
    let ex = expand(&stop_game()).unwrap();
    let cert = solve(&ex, &prefs, &SolveOptions::default()).unwrap();
    assert_eq!(cert.mode, SolveMode::SpeWithSuitability);
    cert.verify(&ex, &prefs).unwrap();
}

#[test]
fn three_player_partial_orders_are_unsupported() {
    let prefs = swo(&[vec![vec![0, 1], vec![2]], vec![vec![2], vec![0, 1]], vec![vec![0], vec![1, 2]]], 3);
    let ex = expand(&stop_game()).unwrap();
    assert!(matches!(solve(&ex, &prefs, &SolveOptions::default()), Err(Error::Unsupported(_))));
}

#[test]
fn po_pattern_is_matched_up_to_renaming() {
    let pat = PoPattern { a: 1, b: 0, x: 3, y: 0, z: 5, alpha: 1, beta: 4, gamma: 2 };
    let (ra, rb) = pat.relations(6);
    let set = OutcomeSet::new(gen::outcome_names(6)).unwrap();
    let rels = vec![
        PreferenceRelation::classify(rb.clone()).unwrap(),
        PreferenceRelation::classify(ra.clone()).unwrap(),
    ];
    let prefs = PreferenceProfile::new(gen::player_names(2), set, rels).unwrap();
    let found = match_po_pattern(&prefs).unwrap();
    let (fa, fb) = found.relations(6);
    assert_eq!((prefs.rel(found.a), prefs.rel(found.b)), (&fa, &fb));
    let [(xa, xb), (aa, ab)] = po_extensions(&pat, 6);
    let keep = |rel: &Relation, drop: OutcomeId| {
        Relation::from_pairs(6, &rel.pairs().into_iter().filter(|&(u, v)| u != drop && v != drop).collect::<Vec<_>>())
    };
    assert!(xa.contains(&keep(&ra, pat.x)) && xb.contains(&keep(&rb, pat.x)));
    assert!(aa.contains(&keep(&ra, pat.alpha)) && ab.contains(&keep(&rb, pat.alpha)));
    assert!(crate::oracle::killer_between(&xa, &xb).is_none());
    assert!(crate::oracle::killer_between(&aa, &ab).is_none());
}

fn random_linear(seed: u64, players: usize) -> (ExpandedArena, PreferenceProfile) {
    let mut r = gen::rng(seed);
    let shape = ArenaShape { vertices: 3 + (seed as usize % 5), players, outcomes: 3 + (seed as usize % 2) };
    let arena = gen::random_arena(&mut r, shape);
    let chains: Vec<Vec<OutcomeId>> = (0..players).map(|_| gen::random_chain(&mut r, shape.outcomes)).collect();
    (expand(&arena).unwrap(), gen::linear_profile(&chains, shape.outcomes))
}

#[test]
fn random_linear_games_without_killer_are_solved() {
    let mut solved = 0;
    for seed in 0..400 {
        let players = 1 + (seed as usize % 3);
        let (ex, prefs) = random_linear(seed, players);
        match solve(&ex, &prefs, &SolveOptions::default()) {
            Ok(cert) => {
                cert.verify(&ex, &prefs).unwrap();
                solved += 1;
            }
            Err(Error::Killer(_)) => assert!(find_spe_killer(&prefs).is_some()),
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    assert!(solved > 100);
}

#[test]
fn random_two_player_swo_games_are_solved() {
    let mut solved = 0;
    for seed in 0..400 {
        let mut r = gen::rng(1000 + seed);
        let shape = ArenaShape { vertices: 3 + (seed as usize % 5), players: 2, outcomes: 3 + (seed as usize % 2) };
        let arena = gen::random_arena(&mut r, shape);
        let levels: Vec<_> = (0..2).map(|_| gen::random_levels(&mut r, shape.outcomes)).collect();
        let prefs = swo(&levels, shape.outcomes);
        let ex = expand(&arena).unwrap();
        match solve(&ex, &prefs, &SolveOptions::default()) {
            Ok(cert) => {
                cert.verify(&ex, &prefs).unwrap();
                solved += 1;
            }
            Err(Error::Killer(_)) => {}
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    assert!(solved > 100);
}

#[test]
fn work_game_applies_b_chooses() {
    // x=0 y=1 z=2, y worst; a: z < x, b: x < z
    let prefs = gen::linear_profile(&[vec![1, 2, 0], vec![1, 0, 2]], 3);
    let ex = expand(&stop_game()).unwrap();
    let mut w = WorkGame::new(&ex, &prefs, 1).unwrap();
    assert_eq!(w.xn, 2);
    let a = (0..ex.len()).find(|&s| ex.owner(s) == Some(0)).unwrap();
    assert!(matches!(w.apply(TransformationKind::BChooses, a), Err(Error::Precondition(_))));
    let b = (0..ex.len()).find(|&s| ex.owner(s) == Some(1)).unwrap();
    w.apply(TransformationKind::BChooses, b).unwrap();
    assert_eq!(w.quasi.allowed[b].len(), 1);
    assert_eq!(w.trace.len(), 1);
}

fn po_profile(pat: &PoPattern) -> PreferenceProfile {
    let (ra, rb) = pat.relations(6);
    let mut rels = vec![None, None];
    rels[pat.a] = Some(PreferenceRelation::classify(ra).unwrap());
    rels[pat.b] = Some(PreferenceRelation::classify(rb).unwrap());
    let set = OutcomeSet::new(gen::outcome_names(6)).unwrap();
    PreferenceProfile::new(gen::player_names(2), set, rels.into_iter().map(Option::unwrap).collect()).unwrap()
}

#[test]
fn random_po_pattern_games_are_solved() {
    let pat = PoPattern { a: 0, b: 1, x: 0, y: 1, z: 2, alpha: 3, beta: 4, gamma: 5 };
    let prefs = po_profile(&pat);
    for seed in 0..300 {
        let mut r = gen::rng(5000 + seed);
        let shape = ArenaShape { vertices: 3 + (seed as usize % 6), players: 2, outcomes: 6 };
        let ex = expand(&gen::random_arena(&mut r, shape)).unwrap();
        let cert = solve(&ex, &prefs, &SolveOptions::default()).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        cert.verify(&ex, &prefs).unwrap();
    }
}

#[test]
fn larger_random_swo_games() {
    for seed in 0..150 {
        let mut r = gen::rng(9000 + seed);
        let shape = ArenaShape { vertices: 6 + (seed as usize % 5), players: 2, outcomes: 5 };
        let arena = gen::random_arena(&mut r, shape);
        let levels: Vec<_> = (0..2).map(|_| gen::random_levels(&mut r, shape.outcomes)).collect();
        let prefs = swo(&levels, shape.outcomes);
        let ex = expand(&arena).unwrap();
        match solve(&ex, &prefs, &SolveOptions::default()) {
            Ok(cert) => cert.verify(&ex, &prefs).unwrap(),
            Err(Error::Killer(_)) => {}
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
}
