//! Construction of equilibrium certificates.
//!
//! All named operations share one layered region engine; they differ in the
//! preconditions they check, the preference relations they hand to it and
//! the guarantees verified on the result.

mod engine;
mod po;
mod work;

use serde::{Deserialize, Serialize};

use crate::arena::{classify_outcome_set, is_weak_stop, ExpandedArena, StateId, Topology};
use crate::error::{Error, Result};
use crate::prefs::{
    bit, bits, find_spe_killer, interval_partition, suitability_blocks, OutcomeId, OutcomeMask, PreferenceProfile,
    Relation, RelationKind,
};
use crate::profiles::{induced_outcomes, pareto_violation, spe_violation, StrategyProfile};

pub(crate) use engine::Engine;
pub use po::{match_po_pattern, po_extensions, solve_po_pattern, PoPattern};
pub use work::WorkGame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMode {
    GpSpe,
    SpeWithSuitability,
    Spe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformationKind {
    /// A region free of the worst label solved and relabeled.
    WeakToStrong,
    /// Edges into regions that only stay forever at the worst label.
    EmptyInterior,
    BChooses,
    AIgnores,
    AChooses,
    /// Staying forever replaced by a fresh common worst label.
    Collapse,
    CutTopBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformationRecord {
    pub kind: TransformationKind,
    pub states: Vec<StateId>,
    pub removed: Vec<(StateId, StateId)>,
    pub fixed: Vec<(StateId, StateId)>,
    pub relabel: Option<OutcomeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveCertificate {
    pub profile: StrategyProfile,
    pub induced: Vec<OutcomeId>,
    pub mode: SolveMode,
    /// Per state, the index (worst first) of the suitability block holding the induced outcome.
    pub suitability: Option<Vec<usize>>,
    pub trace: Vec<TransformationRecord>,
}

impl SolveCertificate {
    pub fn root_outcome(&self, expanded: &ExpandedArena) -> OutcomeId {
        self.induced[expanded.root()]
    }

    /// Re-checks every guarantee the certificate claims.
    pub fn verify(&self, expanded: &ExpandedArena, prefs: &PreferenceProfile) -> Result<()> {
        let profile = StrategyProfile::new(expanded, self.profile.choice.clone())?;
        if induced_outcomes(expanded, &profile) != self.induced {
            return Err(Error::Internal("recorded induced outcomes do not match the profile".into()));
        }
        if let Some(d) = spe_violation(expanded, &profile, prefs) {
            return Err(Error::Internal(format!(
                "player {} improves on {} at {}",
                prefs.players[d.player],
                prefs.outcomes.name(d.induced),
                expanded.state_label(d.state)
            )));
        }
        if self.mode == SolveMode::GpSpe {
            if let Some(v) = pareto_violation(expanded, &profile, prefs) {
                return Err(Error::Internal(format!(
                    "outcome {} is not Pareto-optimal at {}",
                    prefs.outcomes.name(v.induced),
                    expanded.state_label(v.state)
                )));
            }
        }
        if let Some(suit) = &self.suitability {
            let expected = suitability_indices(expanded, prefs, &self.induced)?;
            if &expected != suit {
                return Err(Error::Internal("suitability indices do not match".into()));
            }
            for s in 0..expanded.len() {
                let blocks = compute_suitability_partition(expanded, s, prefs.rel(0), prefs.rel(1));
                if suit[s] + 1 != blocks.len() {
                    return Err(Error::Internal(format!(
                        "induced outcome misses the top block at {}",
                        expanded.state_label(s)
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Guarantee to insist on; `None` accepts whatever the dispatcher produces.
    pub mode: Option<SolveMode>,
    pub step_cap: Option<usize>,
}

/// Finest ordered partition of the outcomes achievable at `state`, worst first.
pub fn compute_suitability_partition(
    expanded: &ExpandedArena,
    state: StateId,
    rel_a: &Relation,
    rel_b: &Relation,
) -> Vec<OutcomeMask> {
    suitability_blocks(rel_a, rel_b, expanded.achievable(state))
}

fn suitability_indices(expanded: &ExpandedArena, prefs: &PreferenceProfile, induced: &[OutcomeId]) -> Result<Vec<usize>> {
    (0..expanded.len())
        .map(|s| {
            compute_suitability_partition(expanded, s, prefs.rel(0), prefs.rel(1))
                .iter()
                .position(|&b| b & bit(induced[s]) != 0)
                .ok_or_else(|| Error::Internal("induced outcome is not achievable".into()))
        })
        .collect()
}

pub(crate) fn run_engine(
    expanded: &ExpandedArena,
    rels: Vec<Relation>,
    options: &SolveOptions,
    prepare: impl FnOnce(&mut Engine),
) -> Result<(StrategyProfile, Vec<TransformationRecord>)> {
    let mut engine = Engine::new(expanded, rels);
    if let Some(cap) = options.step_cap {
        engine.set_step_cap(cap);
    }
    prepare(&mut engine);
    engine.run()?;
    let profile = StrategyProfile::new(expanded, engine.choice.clone())?;
    Ok((profile, engine.trace))
}

pub(crate) fn certify(
    expanded: &ExpandedArena,
    prefs: &PreferenceProfile,
    profile: StrategyProfile,
    trace: Vec<TransformationRecord>,
    mode: SolveMode,
) -> Result<SolveCertificate> {
    let induced = induced_outcomes(expanded, &profile);
    let suitability = match mode {
        SolveMode::SpeWithSuitability => Some(suitability_indices(expanded, prefs, &induced)?),
        _ => None,
    };
    let cert = SolveCertificate { profile, induced, mode, suitability, trace };
    cert.verify(expanded, prefs)?;
    Ok(cert)
}

fn player_rels(prefs: &PreferenceProfile) -> Vec<Relation> {
    (0..prefs.player_count()).map(|p| prefs.rel(p).clone()).collect()
}

fn expect_players(prefs: &PreferenceProfile, n: usize) -> Result<()> {
    if prefs.player_count() != n {
        return Err(Error::Precondition(format!("expected {n} players, got {}", prefs.player_count())));
    }
    Ok(())
}

/// Two players whose linear preferences are mutually inverse.
pub fn solve_antagonist(expanded: &ExpandedArena, prefs: &PreferenceProfile) -> Result<SolveCertificate> {
    expect_players(prefs, 2)?;
    if !prefs.all_kind(RelationKind::Linear) || prefs.rel(1) != &prefs.rel(0).inverse() {
        return Err(Error::Precondition("preferences are not inverse linear orders".into()));
    }
    let (profile, trace) = run_engine(expanded, player_rels(prefs), &SolveOptions::default(), |_| {})?;
    certify(expanded, prefs, profile, trace, SolveMode::GpSpe)
}

/// `y` is the common minimum and the other outcomes are ordered inversely.
pub fn check_quasi_antagonist(prefs: &PreferenceProfile, y: OutcomeId) -> Result<()> {
    expect_players(prefs, 2)?;
    let n = prefs.outcomes.len();
    if y >= n {
        return Err(Error::Precondition(format!("outcome {y} does not exist")));
    }
    let others = prefs.outcomes.full_mask() & !bit(y);
    for p in 0..2 {
        if prefs.rel(p).above(y) != others {
            return Err(Error::Precondition(format!(
                "{} is not the worst outcome of {}",
                prefs.outcomes.name(y),
                prefs.players[p]
            )));
        }
    }
    for x in bits(others) {
        for z in bits(others) {
            let inverse = prefs.prefers(0, x, z) == prefs.prefers(1, z, x);
            let total = prefs.prefers(0, x, z) || prefs.prefers(0, z, x);
            if x != z && !(inverse && total) {
                return Err(Error::Precondition("outcomes other than the worst are not ordered inversely".into()));
            }
        }
    }
    Ok(())
}

/// Weak-stop game: every play avoiding pseudo-leaves yields `y`.
pub fn solve_quasi_antagonist_stop(
    expanded: &ExpandedArena,
    prefs: &PreferenceProfile,
    y: OutcomeId,
) -> Result<SolveCertificate> {
    check_quasi_antagonist(prefs, y)?;
    if !is_weak_stop(expanded, y) {
        return Err(Error::Precondition("the game is not weak-stop".into()));
    }
    let (profile, trace) = run_engine(expanded, player_rels(prefs), &SolveOptions::default(), |_| {})?;
    certify(expanded, prefs, profile, trace, SolveMode::GpSpe)
}

/// The plays with outcome `y` are the union of an open and a closed set.
pub fn solve_open_union_closed(
    expanded: &ExpandedArena,
    prefs: &PreferenceProfile,
    y: OutcomeId,
) -> Result<SolveCertificate> {
    check_quasi_antagonist(prefs, y)?;
    if classify_outcome_set(expanded, y).class == Topology::Higher {
        return Err(Error::Precondition(
            "outcome set is above open-union-closed; use solve_difference_recursion".into(),
        ));
    }
    let (profile, trace) = run_engine(expanded, player_rels(prefs), &SolveOptions::default(), |_| {})?;
    certify(expanded, prefs, profile, trace, SolveMode::GpSpe)
}

/// Any occurrence-set rule; the recursion runs along the layers of the expanded arena.
pub fn solve_difference_recursion(
    expanded: &ExpandedArena,
    prefs: &PreferenceProfile,
    y: OutcomeId,
) -> Result<SolveCertificate> {
    check_quasi_antagonist(prefs, y)?;
    let (profile, trace) = run_engine(expanded, player_rels(prefs), &SolveOptions::default(), |_| {})?;
    certify(expanded, prefs, profile, trace, SolveMode::GpSpe)
}

fn reject_killer(prefs: &PreferenceProfile) -> Result<()> {
    match find_spe_killer(prefs) {
        Some(w) => Err(Error::Killer(w)),
        None => Ok(()),
    }
}

pub fn solve_linear_multiplayer(expanded: &ExpandedArena, prefs: &PreferenceProfile) -> Result<SolveCertificate> {
    solve_linear_with(expanded, prefs, &SolveOptions::default())
}

fn solve_linear_with(
    expanded: &ExpandedArena,
    prefs: &PreferenceProfile,
    options: &SolveOptions,
) -> Result<SolveCertificate> {
    if !prefs.all_kind(RelationKind::Linear) {
        return Err(Error::Precondition("all preferences must be linear".into()));
    }
    reject_killer(prefs)?;
    interval_partition(prefs)?;
    let (profile, trace) = run_engine(expanded, player_rels(prefs), options, |_| {})?;
    certify(expanded, prefs, profile, trace, SolveMode::GpSpe)
}

pub fn solve_two_player_swo(expanded: &ExpandedArena, prefs: &PreferenceProfile) -> Result<SolveCertificate> {
    solve_swo_with(expanded, prefs, &SolveOptions::default())
}

fn is_swo(prefs: &PreferenceProfile, p: usize) -> bool {
    matches!(prefs.relations[p].kind, RelationKind::Linear | RelationKind::StrictWeak)
}

fn solve_swo_with(expanded: &ExpandedArena, prefs: &PreferenceProfile, options: &SolveOptions) -> Result<SolveCertificate> {
    if prefs.player_count() > 2 {
        return Err(Error::Unsupported(
            "strict weak orders with three or more players: killer-freeness does not guarantee an SPE".into(),
        ));
    }
    expect_players(prefs, 2)?;
    if !is_swo(prefs, 0) || !is_swo(prefs, 1) {
        return Err(Error::Precondition("both preferences must be strict weak orders".into()));
    }
    reject_killer(prefs)?;
    let (profile, trace) = run_engine(expanded, player_rels(prefs), options, |_| {})?;
    certify(expanded, prefs, profile, trace, SolveMode::SpeWithSuitability)
}

/// Topological order of a strict partial order, worst first.
fn linear_extension(rel: &Relation, n: usize) -> Vec<OutcomeId> {
    let mut rest: OutcomeMask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut order = Vec::with_capacity(n);
    while rest != 0 {
        let x = bits(rel.minimal(rest)).next().expect("acyclic relation");
        order.push(x);
        rest &= !bit(x);
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Linear,
    SinglePlayer,
    TwoPlayerSwo,
    PoPattern,
    Unsupported,
}

/// The construction [`solve`] uses for these preferences.
pub fn construction(prefs: &PreferenceProfile) -> Construction {
    let k = prefs.player_count();
    if prefs.all_kind(RelationKind::Linear) {
        Construction::Linear
    } else if k == 1 {
        Construction::SinglePlayer
    } else if k >= 3 {
        Construction::Unsupported
    } else if is_swo(prefs, 0) && is_swo(prefs, 1) {
        Construction::TwoPlayerSwo
    } else if match_po_pattern(prefs).is_some() {
        Construction::PoPattern
    } else {
        Construction::Unsupported
    }
}

/// Dispatches on player count and relation kinds.
pub fn solve(expanded: &ExpandedArena, prefs: &PreferenceProfile, options: &SolveOptions) -> Result<SolveCertificate> {
    let mut cert = match construction(prefs) {
        Construction::Linear => solve_linear_with(expanded, prefs, options)?,
        Construction::SinglePlayer => {
            let order = linear_extension(prefs.rel(0), prefs.outcomes.len());
            let chain = Relation::chain(prefs.outcomes.len(), &order);
            let (profile, trace) = run_engine(expanded, vec![chain], options, |_| {})?;
            certify(expanded, prefs, profile, trace, SolveMode::GpSpe)?
        }
        Construction::TwoPlayerSwo => solve_swo_with(expanded, prefs, options)?,
        Construction::PoPattern => solve_po_pattern(expanded, prefs)?,
        Construction::Unsupported if prefs.player_count() >= 3 => {
            return Err(Error::Unsupported(
                "three or more players with non-linear preferences: games without the killer may still lack an SPE"
                    .into(),
            ))
        }
        Construction::Unsupported => {
            reject_killer(prefs)?;
            return Err(Error::Unsupported("two-player partial orders outside the supported pattern".into()));
        }
    };
    if options.mode == Some(SolveMode::GpSpe) && cert.mode != SolveMode::GpSpe {
        if pareto_violation(expanded, &cert.profile, prefs).is_some() {
            return Err(Error::Unsupported("no global-Pareto construction for these preferences".into()));
        }
        cert.mode = SolveMode::GpSpe;
        cert.suitability = None;
    }
    Ok(cert)
}

#[cfg(test)]
mod tests;
