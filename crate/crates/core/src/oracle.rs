//! Ground truth by exhaustion over positional and bounded-memory profiles.
//!
//! Positional here means positional on the expanded arena, i.e. a choice per
//! `(vertex, visited)` state. Deviations are never restricted: the checks in
//! [`crate::profiles`] quantify over all strategies of the deviating player.
//! Nonexistence verdicts are therefore scoped to the enumerated class.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arena::{expand, Arena, ExpandedArena, Formula, InfiniteRule, Rule, StateId, Vertex, VertexId};
use crate::error::{Error, Result};
use crate::gen;
use crate::prefs::{
    OutcomeId, OutcomeSet, PlayerId, PreferenceProfile, PreferenceRelation, Relation, SpeKillerWitness,
};
use crate::profiles::{is_nash, pareto_violation, spe_violation, StrategyProfile};
use crate::solver::{solve, SolveOptions};

pub const DEFAULT_CAP: u64 = 10_000_000;

/// Largest outcome set accepted by [`extension_enumeration`].
pub const EXTENSION_LIMIT: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Ne,
    Spe,
    GpSpe,
}

/// Memory update table: `table[m][e]` is the next memory after edge `e` in memory `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryStructure {
    pub edges: Vec<(VertexId, VertexId)>,
    pub table: Vec<Vec<usize>>,
}

impl MemoryStructure {
    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn update(&self, memory: usize, from: VertexId, to: VertexId) -> usize {
        match self.edges.iter().position(|&e| e == (from, to)) {
            Some(e) => self.table[memory][e],
            None => memory,
        }
    }

    /// Product of the expanded arena with this structure, starting in memory 0.
    pub fn product(&self, expanded: &ExpandedArena, cap: usize) -> Result<ExpandedArena> {
        expanded.with_memory(
            |m, s, t| self.update(m, expanded.state(s).vertex, expanded.state(t).vertex),
            cap,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exemplar {
    pub mode: SearchMode,
    pub profile: StrategyProfile,
    /// Present for bounded-memory searches; the profile is then over the product.
    pub memory: Option<MemoryStructure>,
    pub root_outcome: OutcomeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub game: String,
    pub mode: SearchMode,
    pub profile_space: u64,
    pub ne_count: u64,
    pub spe_count: u64,
    pub gp_spe_count: u64,
    /// Root outcomes of the profiles counted for `mode`, ascending.
    pub root_outcomes: Vec<OutcomeId>,
    pub exemplars: Vec<Exemplar>,
    pub memory_bound: Option<usize>,
    pub scope: String,
}

impl SearchReport {
    fn empty(game: &str, mode: SearchMode, memory_bound: Option<usize>) -> Self {
        let scope = match memory_bound {
            None => "positional profiles on the expanded arena".to_string(),
            Some(m) => format!("profiles with shared memory of size at most {m} over arena edges"),
        };
        SearchReport {
            game: game.to_string(),
            mode,
            profile_space: 0,
            ne_count: 0,
            spe_count: 0,
            gp_spe_count: 0,
            root_outcomes: Vec::new(),
            exemplars: Vec::new(),
            memory_bound,
            scope,
        }
    }

    pub fn count(&self) -> u64 {
        match self.mode {
            SearchMode::Ne => self.ne_count,
            SearchMode::Spe => self.spe_count,
            SearchMode::GpSpe => self.gp_spe_count,
        }
    }

    fn merge(&mut self, other: SearchReport) {
        self.profile_space += other.profile_space;
        self.ne_count += other.ne_count;
        self.spe_count += other.spe_count;
        self.gp_spe_count += other.gp_spe_count;
        let roots: BTreeSet<OutcomeId> = self.root_outcomes.iter().chain(&other.root_outcomes).copied().collect();
        self.root_outcomes = roots.into_iter().collect();
        for e in other.exemplars {
            if !self.exemplars.iter().any(|x| x.mode == e.mode) {
                self.exemplars.push(e);
            }
        }
    }
}

/// Number of positional profiles, saturating.
pub fn profile_space(expanded: &ExpandedArena) -> u64 {
    (0..expanded.len())
        .map(|s| expanded.successors(s).len().max(1) as u64)
        .fold(1u64, |acc, d| acc.saturating_mul(d))
}

fn cap_error(space: u64, cap: u64) -> Error {
    Error::Resource(format!(
        "profile space of {space} exceeds the cap of {cap}; lower the memory bound or sample instead"
    ))
}

fn search_positional(
    expanded: &ExpandedArena,
    prefs: &PreferenceProfile,
    mode: SearchMode,
    memory: Option<&MemoryStructure>,
) -> SearchReport {
    let mut report = SearchReport::empty("", mode, None);
    report.profile_space = profile_space(expanded);
    let inner: Vec<StateId> = (0..expanded.len()).filter(|&s| !expanded.is_terminal(s)).collect();
    let mut digits = vec![0usize; inner.len()];
    let mut choice: Vec<Option<StateId>> = vec![None; expanded.len()];
    let mut roots = BTreeSet::new();
    loop {
        for (i, &s) in inner.iter().enumerate() {
            choice[s] = Some(expanded.successors(s)[digits[i]]);
        }
        let profile = StrategyProfile { choice: choice.clone() };
        let ne = is_nash(expanded, &profile, expanded.root(), prefs);
        let spe = ne && spe_violation(expanded, &profile, prefs).is_none();
        let gp = spe && pareto_violation(expanded, &profile, prefs).is_none();
        let hits = [(SearchMode::Ne, ne), (SearchMode::Spe, spe), (SearchMode::GpSpe, gp)];
        report.ne_count += ne as u64;
        report.spe_count += spe as u64;
        report.gp_spe_count += gp as u64;
        let root_outcome = crate::profiles::induced_outcomes(expanded, &profile)[expanded.root()];
        for (m, hit) in hits {
            if !hit {
                continue;
            }
            if m == mode {
                roots.insert(root_outcome);
            }
            if !report.exemplars.iter().any(|e| e.mode == m) {
                report.exemplars.push(Exemplar {
                    mode: m,
                    profile: profile.clone(),
                    memory: memory.cloned(),
                    root_outcome,
                });
            }
        }
        // mixed-radix increment
        let mut i = 0;
        loop {
            if i == inner.len() {
                report.root_outcomes = roots.into_iter().collect();
                return report;
            }
            digits[i] += 1;
            if digits[i] < expanded.successors(inner[i]).len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

pub fn exhaustive_search(expanded: &ExpandedArena, prefs: &PreferenceProfile, mode: SearchMode) -> Result<SearchReport> {
    exhaustive_search_with_cap(expanded, prefs, mode, DEFAULT_CAP)
}

pub fn exhaustive_search_with_cap(
    expanded: &ExpandedArena,
    prefs: &PreferenceProfile,
    mode: SearchMode,
    cap: u64,
) -> Result<SearchReport> {
    let space = profile_space(expanded);
    if space > cap {
        return Err(cap_error(space, cap));
    }
    Ok(search_positional(expanded, prefs, mode, None))
}

/// Edges between non-terminal vertices; updates on other edges are irrelevant.
fn memory_alphabet(arena: &Arena) -> Vec<(VertexId, VertexId)> {
    let mut edges = Vec::new();
    for (v, vert) in arena.vertices().iter().enumerate() {
        for &w in &vert.successors {
            if arena.vertex(w).outcome.is_none() {
                edges.push((v, w));
            }
        }
    }
    edges
}

/// Update tables with at most `m` memories, one per isomorphism class of
/// their reachable part: memories are numbered in order of first appearance
/// when the rows are read in order, starting from the initial memory 0.
pub fn canonical_memory_structures(arena: &Arena, m: usize) -> Vec<MemoryStructure> {
    let edges = memory_alphabet(arena);
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    if edges.is_empty() {
        out.push(MemoryStructure { edges, table: vec![Vec::new()] });
        return out;
    }
    let e = edges.len();
    let mut flat: Vec<usize> = Vec::new();
    fn rec(flat: &mut Vec<usize>, hi: usize, m: usize, e: usize, edges: &[(VertexId, VertexId)], out: &mut Vec<MemoryStructure>) {
        let pos = flat.len();
        if pos % e == 0 && pos / e > hi {
            let table = flat.chunks(e).map(|c| c.to_vec()).collect();
            out.push(MemoryStructure { edges: edges.to_vec(), table });
            return;
        }
        for v in 0..=(hi + 1).min(m - 1) {
            flat.push(v);
            rec(flat, hi.max(v), m, e, edges, out);
            flat.pop();
        }
    }
    rec(&mut flat, 0, m, e, &edges, &mut out);
    out
}

/// Shared finite memory for the whole profile, updated along arena edges.
/// Counts are over pairs of a canonical memory structure and a positional
/// profile of the corresponding product.
pub fn bounded_memory_search(
    expanded: &ExpandedArena,
    prefs: &PreferenceProfile,
    memory_bound: usize,
    mode: SearchMode,
    cap: u64,
) -> Result<SearchReport> {
    if memory_bound == 0 {
        return Err(Error::input("memory bound must be at least 1"));
    }
    let structures = canonical_memory_structures(expanded.arena(), memory_bound);
    let state_cap = usize::try_from(cap).unwrap_or(usize::MAX);
    let mut products = Vec::with_capacity(structures.len());
    let mut total: u64 = 0;
    for ms in structures {
        let product = ms.product(expanded, state_cap)?;
        total = total.saturating_add(profile_space(&product));
        if total > cap {
            return Err(cap_error(total, cap));
        }
        products.push((ms, product));
    }
    let mut report = SearchReport::empty("", mode, Some(memory_bound));
    for (ms, product) in &products {
        report.merge(search_positional(product, prefs, mode, Some(ms)));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionKind {
    Linear,
    StrictWeak,
}

fn permutations(items: &[OutcomeId]) -> Vec<Vec<OutcomeId>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Ordered set partitions of `items`, worst block first.
fn ordered_partitions(items: &[OutcomeId]) -> Vec<Vec<Vec<OutcomeId>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let n = items.len();
    let mut out = Vec::new();
    // choose the lowest block as any non-empty subset
    for mask in 1u32..(1 << n) {
        let block: Vec<OutcomeId> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| items[i]).collect();
        let rest: Vec<OutcomeId> = (0..n).filter(|i| mask & (1 << i) == 0).map(|i| items[i]).collect();
        for tail in ordered_partitions(&rest) {
            let mut p = vec![block.clone()];
            p.extend(tail);
            out.push(p);
        }
    }
    out
}

/// All strict linear or strict weak orders on the outcomes of `rel` that contain it.
pub fn extension_enumeration(rel: &Relation, kind: ExtensionKind) -> Result<Vec<Relation>> {
    let n = rel.size();
    if n > EXTENSION_LIMIT {
        return Err(Error::Resource(format!(
            "extension enumeration is limited to {EXTENSION_LIMIT} outcomes, got {n}"
        )));
    }
    let items: Vec<OutcomeId> = (0..n).collect();
    let candidates: Vec<Relation> = match kind {
        ExtensionKind::Linear => permutations(&items).iter().map(|p| Relation::chain(n, p)).collect(),
        ExtensionKind::StrictWeak => ordered_partitions(&items).iter().map(|p| Relation::levels(n, p)).collect(),
    };
    Ok(candidates.into_iter().filter(|c| c.contains(rel)).collect())
}

/// A killer between the two relations, in either role assignment.
pub fn killer_between(rel_0: &Relation, rel_1: &Relation) -> Option<SpeKillerWitness> {
    let n = rel_0.size();
    for (a, b, ra, rb) in [(0, 1, rel_0, rel_1), (1, 0, rel_1, rel_0)] {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let w = SpeKillerWitness { a, b, x, y, z };
                    if x != y && y != z && x != z && w.holds(ra, rb) {
                        return Some(w);
                    }
                }
            }
        }
    }
    None
}

/// Whether every pair of extensions of the given kind contains the killer.
pub fn killer_in_every_extension(rel_a: &Relation, rel_b: &Relation, kind: ExtensionKind) -> Result<bool> {
    let ea = extension_enumeration(rel_a, kind)?;
    let eb = extension_enumeration(rel_b, kind)?;
    Ok(ea.iter().all(|x| eb.iter().all(|y| killer_between(x, y).is_some())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Expectation {
    /// Positional search and memory search up to the bound find no SPE.
    NoPositionalSpe { memory: usize },
    /// The killer is present with these player and outcome names (a, b, x, y, z).
    Killer { witness: [String; 5] },
    NoKiller,
    /// The solver emits a verified certificate and the oracle agrees on the root outcome.
    HasSpe,
    KillerInEveryExtension { extension: ExtensionKind },
    /// On a random game, the solver's root outcome is among the oracle's SPE root outcomes.
    OracleAgrees { seed: u64 },
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub arena: Arena,
    pub prefs: PreferenceProfile,
    pub expectations: Vec<Expectation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusResult {
    pub id: String,
    pub expectation: Expectation,
    pub passed: bool,
    pub detail: String,
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn vertex(name: &str, owner: Option<PlayerId>, successors: Vec<VertexId>, outcome: Option<OutcomeId>) -> Vertex {
    Vertex { name: name.into(), owner, successors, outcome }
}

fn profile(players: &[&str], outcomes: &[&str], rels: Vec<Relation>) -> PreferenceProfile {
    let set = OutcomeSet::new(names(outcomes)).expect("fixture outcomes");
    let rels = rels.into_iter().map(|r| PreferenceRelation::classify(r).expect("fixture relation")).collect();
    PreferenceProfile::new(names(players), set, rels).expect("fixture profile")
}

/// a and b alternately may stop; never stopping yields x.
/// Outcomes: x=0, y=1, z=2.
pub fn stop_arena() -> Arena {
    Arena::new(
        vec![
            vertex("a1", Some(0), vec![1, 2], None),
            vertex("b1", Some(1), vec![0, 3], None),
            vertex("stop_y", None, vec![], Some(1)),
            vertex("stop_z", None, vec![], Some(2)),
        ],
        0,
        InfiniteRule::constant(0),
        2,
        3,
    )
    .expect("fixture arena")
}

pub fn stop_killer_prefs() -> PreferenceProfile {
    // z <a y <a x, x <b z <b y
    profile(&["a", "b"], &["x", "y", "z"], vec![Relation::chain(3, &[2, 1, 0]), Relation::chain(3, &[0, 2, 1])])
}

pub fn stop_antagonist_prefs() -> PreferenceProfile {
    profile(&["a", "b"], &["x", "y", "z"], vec![Relation::chain(3, &[2, 1, 0]), Relation::chain(3, &[0, 1, 2])])
}

/// Three players stop in turn at a, b, c with outcomes y, z, t; never stopping yields x.
/// Outcomes: x=0, y=1, z=2, t=3.
pub fn three_player_arena() -> Arena {
    Arena::new(
        vec![
            vertex("a1", Some(0), vec![1, 3], None),
            vertex("b1", Some(1), vec![2, 4], None),
            vertex("c1", Some(2), vec![0, 5], None),
            vertex("stop_y", None, vec![], Some(1)),
            vertex("stop_z", None, vec![], Some(2)),
            vertex("stop_t", None, vec![], Some(3)),
        ],
        0,
        InfiniteRule::constant(0),
        3,
        4,
    )
    .expect("fixture arena")
}

pub fn three_player_prefs() -> PreferenceProfile {
    let (x, y, z, t) = (0, 1, 2, 3);
    profile(
        &["a", "b", "c"],
        &["x", "y", "z", "t"],
        vec![
            Relation::levels(4, &[vec![z], vec![y, t], vec![x]]),
            Relation::levels(4, &[vec![t], vec![z, x], vec![y]]),
            Relation::levels(4, &[vec![x], vec![t], vec![y, z]]),
        ],
    )
}

/// Outcomes: x=0, y=1, z=2, t=3.
pub fn swo_lin_ext_arena() -> Arena {
    Arena::new(
        vec![
            vertex("a1", Some(0), vec![1, 3, 4], None),
            vertex("b1", Some(1), vec![0, 2, 5], None),
            vertex("a2", Some(0), vec![1, 6], None),
            vertex("stop_y", None, vec![], Some(1)),
            vertex("stop_t", None, vec![], Some(3)),
            vertex("stop_z", None, vec![], Some(2)),
            vertex("stop_t2", None, vec![], Some(3)),
        ],
        0,
        InfiniteRule {
            rules: vec![Rule { when: Formula::Visited(2), outcome: 1 }],
            default: 0,
        },
        2,
        4,
    )
    .expect("fixture arena")
}

pub fn swo_lin_ext_prefs() -> PreferenceProfile {
    let (x, y, z, t) = (0, 1, 2, 3);
    // z,t <a x,y and y <b z <b x <b t
    profile(
        &["a", "b"],
        &["x", "y", "z", "t"],
        vec![Relation::levels(4, &[vec![z, t], vec![x, y]]), Relation::chain(4, &[y, z, x, t])],
    )
}

/// Outcomes: x=0, y=1, z=2, alpha=3, beta=4, gamma=5.
pub fn po_arena() -> Arena {
    Arena::new(
        vec![
            vertex("a1", Some(0), vec![1, 4, 5], None),
            vertex("b1", Some(1), vec![0, 2, 6], None),
            vertex("a2", Some(0), vec![3, 7], None),
            vertex("b2", Some(1), vec![2, 8], None),
            vertex("stop_gamma", None, vec![], Some(5)),
            vertex("stop_alpha", None, vec![], Some(3)),
            vertex("stop_z", None, vec![], Some(2)),
            vertex("stop_x", None, vec![], Some(0)),
            vertex("stop_beta", None, vec![], Some(4)),
        ],
        0,
        InfiniteRule {
            rules: vec![Rule { when: Formula::Visited(2), outcome: 1 }],
            default: 0,
        },
        2,
        6,
    )
    .expect("fixture arena")
}

pub fn po_prefs() -> PreferenceProfile {
    let pat = crate::solver::PoPattern { a: 0, b: 1, x: 0, y: 1, z: 2, alpha: 3, beta: 4, gamma: 5 };
    let (ra, rb) = pat.relations(6);
    profile(&["a", "b"], &["x", "y", "z", "alpha", "beta", "gamma"], vec![ra, rb])
}

pub fn counterexample_corpus() -> Vec<CorpusEntry> {
    let w = |v: [&str; 5]| Expectation::Killer { witness: v.map(String::from) };
    vec![
        CorpusEntry {
            id: "stop-killer",
            description: "two players alternately may stop; no SPE",
            arena: stop_arena(),
            prefs: stop_killer_prefs(),
            expectations: vec![Expectation::NoPositionalSpe { memory: 3 }, w(["a", "b", "x", "y", "z"])],
        },
        CorpusEntry {
            id: "stop-antagonist",
            description: "the same arena with inverse preferences",
            arena: stop_arena(),
            prefs: stop_antagonist_prefs(),
            expectations: vec![Expectation::NoKiller, Expectation::HasSpe],
        },
        CorpusEntry {
            id: "three-player-stop",
            description: "three players with strict weak orders; no killer and no SPE",
            arena: three_player_arena(),
            prefs: three_player_prefs(),
            expectations: vec![Expectation::NoKiller, Expectation::NoPositionalSpe { memory: 2 }],
        },
        CorpusEntry {
            id: "swo-lin-ext",
            description: "killer-free strict weak orders whose linear extensions all contain the killer",
            arena: swo_lin_ext_arena(),
            prefs: swo_lin_ext_prefs(),
            expectations: vec![
                Expectation::NoKiller,
                Expectation::KillerInEveryExtension { extension: ExtensionKind::Linear },
                Expectation::HasSpe,
            ],
        },
        CorpusEntry {
            id: "po-pattern",
            description: "partial orders whose strict weak extensions all contain the killer",
            arena: po_arena(),
            prefs: po_prefs(),
            expectations: vec![
                Expectation::NoKiller,
                Expectation::KillerInEveryExtension { extension: ExtensionKind::StrictWeak },
                Expectation::HasSpe,
            ],
        },
    ]
}

fn check_expectation(entry: &CorpusEntry, expanded: &ExpandedArena, exp: &Expectation) -> Result<(bool, String)> {
    let prefs = &entry.prefs;
    Ok(match exp {
        Expectation::NoPositionalSpe { memory } => {
            let positional = exhaustive_search(expanded, prefs, SearchMode::Spe)?;
            let bounded = bounded_memory_search(expanded, prefs, *memory, SearchMode::Spe, DEFAULT_CAP)?;
            (
                positional.spe_count == 0 && bounded.spe_count == 0,
                format!(
                    "SPE count {} over {} positional profiles, {} over {} memory-{} profiles",
                    positional.spe_count, positional.profile_space, bounded.spe_count, bounded.profile_space, memory
                ),
            )
        }
        Expectation::Killer { witness } => match crate::prefs::find_spe_killer(prefs) {
            Some(k) => {
                let found = [
                    prefs.players[k.a].clone(),
                    prefs.players[k.b].clone(),
                    prefs.outcomes.name(k.x).to_string(),
                    prefs.outcomes.name(k.y).to_string(),
                    prefs.outcomes.name(k.z).to_string(),
                ];
                (&found == witness, format!("killer {}", k.describe(prefs)))
            }
            None => (false, "no killer found".into()),
        },
        Expectation::NoKiller => match crate::prefs::find_spe_killer(prefs) {
            Some(k) => (false, format!("unexpected killer {}", k.describe(prefs))),
            None => (true, "no killer".into()),
        },
        Expectation::HasSpe => {
            let cert = solve(expanded, prefs, &SolveOptions::default())?;
            cert.verify(expanded, prefs)?;
            let root = cert.root_outcome(expanded);
            let report = exhaustive_search(expanded, prefs, SearchMode::Spe)?;
            (
                report.root_outcomes.contains(&root),
                format!(
                    "solver root outcome {}; oracle found {} SPE",
                    prefs.outcomes.name(root),
                    report.spe_count
                ),
            )
        }
        Expectation::OracleAgrees { .. } => unreachable!("random checks have no corpus entry"),
        Expectation::KillerInEveryExtension { extension } => {
            let every = killer_in_every_extension(prefs.rel(0), prefs.rel(1), *extension)?;
            (every, format!("killer in every {extension:?} extension pair: {every}"))
        }
    })
}

/// Checks every expectation of every corpus entry.
pub fn run_corpus() -> Result<Vec<CorpusResult>> {
    let mut out = Vec::new();
    for entry in counterexample_corpus() {
        let expanded = expand(&entry.arena)?;
        for exp in &entry.expectations {
            let (passed, detail) = match check_expectation(&entry, &expanded, exp) {
                Ok(r) => r,
                Err(e) => (false, e.to_string()),
            };
            out.push(CorpusResult { id: entry.id.to_string(), expectation: exp.clone(), passed, detail });
        }
    }
    Ok(out)
}

/// Random two-player strict weak order games on small arenas.
pub fn random_swo_game(seed: u64) -> (Arena, PreferenceProfile) {
    let mut r = gen::rng(seed);
    let outcomes = 2 + (seed % 3) as usize;
    let shape = gen::ArenaShape { vertices: 2 + (seed % 5) as usize, players: 2, outcomes };
    let arena = gen::random_arena(&mut r, shape);
    let levels: Vec<_> = (0..2).map(|_| gen::random_levels(&mut r, outcomes)).collect();
    (arena, gen::levels_profile(&levels, outcomes))
}

/// Solver/oracle agreement on `count` seeded random games.
pub fn random_agreement_checks(seed: u64, count: u64) -> Result<Vec<CorpusResult>> {
    let mut out = Vec::new();
    for i in 0..count {
        let s = seed.wrapping_add(i);
        let (arena, prefs) = random_swo_game(s);
        let expanded = expand(&arena)?;
        let (passed, detail) = match solve(&expanded, &prefs, &SolveOptions::default()) {
            Ok(cert) => {
                let root = cert.root_outcome(&expanded);
                let roots = spe_root_outcomes(&expanded, &prefs)?;
                let verified = cert.verify(&expanded, &prefs).is_ok();
                (
                    verified && roots.contains(&root),
                    format!("solver root outcome {}; oracle root outcomes {:?}", prefs.outcomes.name(root), roots),
                )
            }
            Err(Error::Killer(w)) => (true, format!("rejected: {}", w.describe(&prefs))),
            Err(e) => (false, e.to_string()),
        };
        out.push(CorpusResult {
            id: format!("random-{s}"),
            expectation: Expectation::OracleAgrees { seed: s },
            passed,
            detail,
        });
    }
    Ok(out)
}

/// Report for a named game: positional when `memory` is `None`.
pub fn search(
    game: &str,
    expanded: &ExpandedArena,
    prefs: &PreferenceProfile,
    mode: SearchMode,
    memory: Option<usize>,
    cap: u64,
) -> Result<SearchReport> {
    let mut report = match memory {
        None => exhaustive_search_with_cap(expanded, prefs, mode, cap)?,
        Some(m) => bounded_memory_search(expanded, prefs, m, mode, cap)?,
    };
    report.game = game.to_string();
    Ok(report)
}

/// Root outcomes of the positional SPE.
pub fn spe_root_outcomes(expanded: &ExpandedArena, prefs: &PreferenceProfile) -> Result<Vec<OutcomeId>> {
    Ok(exhaustive_search(expanded, prefs, SearchMode::Spe)?.root_outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_extensions_of_empty_pair() {
        let ext = extension_enumeration(&Relation::empty(2), ExtensionKind::Linear).unwrap();
        assert_eq!(ext.len(), 2);
        let weak = extension_enumeration(&Relation::empty(3), ExtensionKind::StrictWeak).unwrap();
        assert_eq!(weak.len(), 13);
        assert!(matches!(
            extension_enumeration(&Relation::empty(8), ExtensionKind::Linear),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn canonical_structures() {
        let arena = stop_arena();
        assert_eq!(canonical_memory_structures(&arena, 1).len(), 1);
        // two edges between a1 and b1; tables over {0,1} in first-appearance form
        let two = canonical_memory_structures(&arena, 2);
        assert!(two.iter().all(|m| m.table[0].len() == 2));
        let set: BTreeSet<_> = two.iter().map(|m| m.table.clone()).collect();
        assert_eq!(set.len(), two.len());
    }

    #[test]
    fn memory_one_matches_positional() {
        let ex = expand(&stop_arena()).unwrap();
        let prefs = stop_antagonist_prefs();
        let p = exhaustive_search(&ex, &prefs, SearchMode::Spe).unwrap();
        let m = bounded_memory_search(&ex, &prefs, 1, SearchMode::Spe, DEFAULT_CAP).unwrap();
        assert_eq!((p.spe_count, p.profile_space), (m.spe_count, m.profile_space));
        assert!(p.spe_count >= 1);
    }

    #[test]
    fn cap_is_enforced() {
        let ex = expand(&stop_arena()).unwrap();
        let r = exhaustive_search_with_cap(&ex, &stop_killer_prefs(), SearchMode::Spe, 2);
        assert!(matches!(r, Err(Error::Resource(_))));
    }

    #[test]
    fn corpus_expectations_hold() {
        for r in run_corpus().unwrap() {
            eprintln!("{} {:?}: {}", r.id, r.expectation, r.detail);
            assert!(r.passed, "{} {:?}: {}", r.id, r.expectation, r.detail);
        }
    }
}
