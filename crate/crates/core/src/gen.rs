//! Seeded random arenas and preference profiles for property suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arena::{Arena, Formula, InfiniteRule, Rule, Vertex};
use crate::prefs::{OutcomeId, OutcomeSet, PreferenceProfile, PreferenceRelation, Relation, RelationKind};

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct ArenaShape {
    pub vertices: usize,
    pub players: usize,
    pub outcomes: usize,
}

/// A random pruned arena; every vertex is reachable from vertex 0.
///
/// Between one and `vertices / 2` vertices are terminals. The infinite-play
/// rule has up to two entries over single `visited` atoms or their negation.
pub fn random_arena(rng: &mut Rng64, shape: ArenaShape) -> Arena {
    let n = shape.vertices.max(2);
    let terminals = rng.gen_range(1..=(n / 2).max(1));
    let inner = n - terminals;
    let mut vertices = Vec::with_capacity(n);
    for i in 0..inner {
        vertices.push(Vertex {
            name: format!("v{i}"),
            owner: Some(rng.gen_range(0..shape.players)),
            successors: Vec::new(),
            outcome: None,
        });
    }
    for i in 0..terminals {
        vertices.push(Vertex {
            name: format!("t{i}"),
            owner: None,
            successors: Vec::new(),
            outcome: Some(rng.gen_range(0..shape.outcomes)),
        });
    }
    // spanning tree from the root keeps everything reachable
    let mut order: Vec<usize> = (1..n).collect();
    order.shuffle(rng);
    let mut placed = vec![0usize];
    for &v in &order {
        let parents: Vec<usize> = placed.iter().copied().filter(|&p| p < inner).collect();
        let p = *parents.choose(rng).unwrap();
        vertices[p].successors.push(v);
        if v < inner {
            placed.push(v);
        }
    }
    for v in 0..inner {
        let extra = rng.gen_range(0..=2);
        for _ in 0..extra {
            let w = rng.gen_range(0..n);
            if !vertices[v].successors.contains(&w) {
                vertices[v].successors.push(w);
            }
        }
        if vertices[v].successors.is_empty() {
            vertices[v].successors.push(rng.gen_range(0..n));
        }
    }
    let rule_count = rng.gen_range(0..=2);
    let rules = (0..rule_count)
        .map(|_| {
            let atom = Formula::Visited(rng.gen_range(0..inner));
            let when = if rng.gen_bool(0.3) { Formula::Not(Box::new(atom)) } else { atom };
            Rule { when, outcome: rng.gen_range(0..shape.outcomes) }
        })
        .collect();
    let rule = InfiniteRule { rules, default: rng.gen_range(0..shape.outcomes) };
    Arena::new(vertices, 0, rule, shape.players, shape.outcomes).expect("generator produced an invalid arena")
}

pub fn outcome_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("o{i}")).collect()
}

pub fn player_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Uniform random permutation as a chain, worst first.
pub fn random_chain(rng: &mut Rng64, n: usize) -> Vec<OutcomeId> {
    let mut v: Vec<OutcomeId> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Random strict weak order given as levels, worst first.
pub fn random_levels(rng: &mut Rng64, n: usize) -> Vec<Vec<OutcomeId>> {
    let order = random_chain(rng, n);
    let mut levels: Vec<Vec<OutcomeId>> = Vec::new();
    for o in order {
        if levels.is_empty() || rng.gen_bool(0.5) {
            levels.push(vec![o]);
        } else {
            levels.last_mut().unwrap().push(o);
        }
    }
    levels
}

pub fn linear_profile(chains: &[Vec<OutcomeId>], outcomes: usize) -> PreferenceProfile {
    let set = OutcomeSet::new(outcome_names(outcomes)).unwrap();
    let rels = chains
        .iter()
        .map(|c| PreferenceRelation::new(&Relation::chain(outcomes, c).pairs(), RelationKind::Linear, &set).unwrap())
        .collect();
    PreferenceProfile::new(player_names(chains.len()), set, rels).unwrap()
}

pub fn levels_profile(levels: &[Vec<Vec<OutcomeId>>], outcomes: usize) -> PreferenceProfile {
    let set = OutcomeSet::new(outcome_names(outcomes)).unwrap();
    let rels = levels
        .iter()
        .map(|l| PreferenceRelation::classify(Relation::levels(outcomes, l)).unwrap())
        .collect();
    PreferenceProfile::new(player_names(levels.len()), set, rels).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::expand;

    #[test]
    fn generated_arenas_are_valid_and_deterministic() {
        for seed in 0..200 {
            let shape = ArenaShape { vertices: 2 + (seed as usize % 5), players: 2, outcomes: 3 };
            let a = random_arena(&mut rng(seed), shape);
            let b = random_arena(&mut rng(seed), shape);
            assert_eq!(a, b);
            assert!(expand(&a).is_ok());
        }
    }
}
