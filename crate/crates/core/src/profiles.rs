//! Positional strategy profiles on the expanded arena, equilibrium checks,
//! and the decomposition of a game along a quasi-profile.

use serde::{Deserialize, Serialize};

use crate::arena::{tarjan, ExpandedArena, StateId};
use crate::error::{Error, Result};
use crate::prefs::{bit, bits, pareto_optimal, OutcomeId, OutcomeMask, PlayerId, PreferenceProfile};

/// One successor per non-terminal state; `None` exactly at terminals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub choice: Vec<Option<StateId>>,
}

impl StrategyProfile {
    pub fn new(expanded: &ExpandedArena, choice: Vec<Option<StateId>>) -> Result<Self> {
        if choice.len() != expanded.len() {
            return Err(Error::input(format!(
                "profile has {} entries for {} states",
                choice.len(),
                expanded.len()
            )));
        }
        for (s, c) in choice.iter().enumerate() {
            match c {
                None if expanded.is_terminal(s) => {}
                None => return Err(Error::input(format!("no choice at state {}", expanded.state_label(s)))),
                Some(t) if expanded.successors(s).contains(t) => {}
                Some(_) => {
                    return Err(Error::input(format!("choice at {} is not a successor", expanded.state_label(s))))
                }
            }
        }
        Ok(StrategyProfile { choice })
    }

    /// Every state picks its first successor.
    pub fn first_successor(expanded: &ExpandedArena) -> Self {
        StrategyProfile { choice: (0..expanded.len()).map(|s| expanded.successors(s).first().copied()).collect() }
    }

    pub fn at(&self, s: StateId) -> Option<StateId> {
        self.choice[s]
    }
}

/// Non-empty allowed successor sets per non-terminal state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiProfile {
    pub allowed: Vec<Vec<StateId>>,
}

impl QuasiProfile {
    pub fn full(expanded: &ExpandedArena) -> Self {
        QuasiProfile { allowed: (0..expanded.len()).map(|s| expanded.successors(s).to_vec()).collect() }
    }

    pub fn validate(&self, expanded: &ExpandedArena) -> Result<()> {
        if self.allowed.len() != expanded.len() {
            return Err(Error::input("quasi-profile size does not match the state count"));
        }
        for (s, a) in self.allowed.iter().enumerate() {
            if a.is_empty() != expanded.is_terminal(s) || a.iter().any(|t| !expanded.successors(s).contains(t)) {
                return Err(Error::input(format!("invalid allowance at {}", expanded.state_label(s))));
            }
        }
        Ok(())
    }

    /// Drops `target` from the allowance of `state`; refuses to empty it.
    pub fn ignore(&mut self, state: StateId, target: StateId) -> Result<()> {
        let a = &mut self.allowed[state];
        if a.len() == 1 && a[0] == target {
            return Err(Error::Precondition("cannot remove the last allowed successor".into()));
        }
        a.retain(|&t| t != target);
        Ok(())
    }

    pub fn fix(&mut self, state: StateId, target: StateId) {
        self.allowed[state] = vec![target];
    }
}

/// A lasso: `stem` then `cycle` repeated forever (empty cycle at terminals).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayTrace {
    pub stem: Vec<StateId>,
    pub cycle: Vec<StateId>,
    pub outcome: OutcomeId,
}

pub fn induced_play(expanded: &ExpandedArena, profile: &StrategyProfile, state: StateId) -> PlayTrace {
    let mut path = vec![state];
    let mut pos = vec![usize::MAX; expanded.len()];
    pos[state] = 0;
    let mut cur = state;
    while let Some(next) = profile.choice[cur] {
        if pos[next] != usize::MAX {
            let cycle = path.split_off(pos[next]);
            let outcome = expanded.layer_outcome(expanded.layer(next));
            return PlayTrace { stem: path, cycle, outcome };
        }
        pos[next] = path.len();
        path.push(next);
        cur = next;
    }
    let outcome = expanded.terminal_outcome(cur).expect("play stops only at terminals");
    PlayTrace { stem: path, cycle: Vec::new(), outcome }
}

/// Induced outcome at every state.
pub fn induced_outcomes(expanded: &ExpandedArena, profile: &StrategyProfile) -> Vec<OutcomeId> {
    let n = expanded.len();
    let mut out: Vec<Option<OutcomeId>> = vec![None; n];
    let mut on_path = vec![false; n];
    for start in 0..n {
        if out[start].is_some() {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        let value = loop {
            if let Some(v) = out[cur] {
                break v;
            }
            if on_path[cur] {
                break expanded.layer_outcome(expanded.layer(cur));
            }
            on_path[cur] = true;
            path.push(cur);
            match profile.choice[cur] {
                Some(next) => cur = next,
                None => {
                    break expanded.terminal_outcome(cur).expect("terminal outcome");
                }
            }
        };
        for s in path {
            on_path[s] = false;
            out[s] = Some(value);
        }
    }
    out.into_iter().map(|o| o.unwrap()).collect()
}

/// For every state, the outcomes `player` can reach when only their own choices change.
pub fn deviation_table(expanded: &ExpandedArena, profile: &StrategyProfile, player: PlayerId) -> Vec<OutcomeMask> {
    let n = expanded.len();
    let succ = |s: StateId| -> Vec<StateId> {
        if expanded.owner(s) == Some(player) {
            expanded.successors(s).to_vec()
        } else {
            profile.choice[s].into_iter().collect()
        }
    };
    let sccs = tarjan(n, succ, |_| true);
    let mut table = vec![0u64; n];
    for comp in &sccs {
        let cyclic = comp.len() > 1 || succ(comp[0]).contains(&comp[0]);
        let mut m = 0;
        for &s in comp {
            if let Some(o) = expanded.terminal_outcome(s) {
                m |= bit(o);
            }
            for t in succ(s) {
                m |= table[t];
            }
        }
        if cyclic {
            m |= bit(expanded.layer_outcome(expanded.layer(comp[0])));
        }
        for &s in comp {
            table[s] = m;
        }
    }
    table
}

pub fn deviation_outcomes(
    expanded: &ExpandedArena,
    profile: &StrategyProfile,
    state: StateId,
    player: PlayerId,
) -> OutcomeMask {
    deviation_table(expanded, profile, player)[state]
}

/// A profitable deviation: at `state`, `player` can reach `better` instead of `induced`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deviation {
    pub state: StateId,
    pub player: PlayerId,
    pub induced: OutcomeId,
    pub better: OutcomeId,
}

pub fn is_nash(expanded: &ExpandedArena, profile: &StrategyProfile, state: StateId, prefs: &PreferenceProfile) -> bool {
    let induced = induced_play(expanded, profile, state).outcome;
    (0..prefs.player_count())
        .all(|p| deviation_outcomes(expanded, profile, state, p) & prefs.rel(p).above(induced) == 0)
}

/// First state (in id order) where some player profits from deviating.
pub fn spe_violation(expanded: &ExpandedArena, profile: &StrategyProfile, prefs: &PreferenceProfile) -> Option<Deviation> {
    let induced = induced_outcomes(expanded, profile);
    let tables: Vec<Vec<OutcomeMask>> =
        (0..prefs.player_count()).map(|p| deviation_table(expanded, profile, p)).collect();
    for s in 0..expanded.len() {
        for (p, table) in tables.iter().enumerate() {
            let better = table[s] & prefs.rel(p).above(induced[s]);
            if better != 0 {
                return Some(Deviation { state: s, player: p, induced: induced[s], better: bits(better).next().unwrap() });
            }
        }
    }
    None
}

pub fn is_spe(expanded: &ExpandedArena, profile: &StrategyProfile, prefs: &PreferenceProfile) -> bool {
    spe_violation(expanded, profile, prefs).is_none()
}

/// A state whose induced outcome is not Pareto-optimal among its achievable outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParetoViolation {
    pub state: StateId,
    pub induced: OutcomeId,
    pub achievable: OutcomeMask,
}

pub fn pareto_violation(
    expanded: &ExpandedArena,
    profile: &StrategyProfile,
    prefs: &PreferenceProfile,
) -> Option<ParetoViolation> {
    let induced = induced_outcomes(expanded, profile);
    (0..expanded.len()).find_map(|s| {
        let ach = expanded.achievable(s);
        (pareto_optimal(ach, prefs) & bit(induced[s]) == 0)
            .then_some(ParetoViolation { state: s, induced: induced[s], achievable: ach })
    })
}

pub fn is_gp_spe(expanded: &ExpandedArena, profile: &StrategyProfile, prefs: &PreferenceProfile) -> bool {
    is_spe(expanded, profile, prefs) && pareto_violation(expanded, profile, prefs).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub root: StateId,
    pub states: Vec<StateId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub pieces: Vec<Piece>,
    /// Piece index of every state.
    pub piece_of: Vec<usize>,
}

/// Splits the game at the root and at every state some allowance excludes.
///
/// Distinct histories can merge into one expanded state; a state reached from
/// two piece roots is promoted to a piece root of its own, which keeps the
/// pieces disjoint.
pub fn decompose(expanded: &ExpandedArena, quasi: &QuasiProfile) -> Decomposition {
    let n = expanded.len();
    let mut is_root = vec![false; n];
    is_root[expanded.root()] = true;
    for s in 0..n {
        for &t in expanded.successors(s) {
            if !quasi.allowed[s].contains(&t) {
                is_root[t] = true;
            }
        }
    }
    loop {
        let mut owner = vec![usize::MAX; n];
        let mut promoted = false;
        let current: Vec<StateId> = (0..n).filter(|&r| is_root[r]).collect();
        for r in current {
            let mut stack = vec![r];
            let mut seen = vec![false; n];
            seen[r] = true;
            while let Some(s) = stack.pop() {
                if owner[s] != usize::MAX && owner[s] != r {
                    if !is_root[s] {
                        is_root[s] = true;
                        promoted = true;
                    }
                    continue;
                }
                owner[s] = r;
                for &t in &quasi.allowed[s] {
                    if !seen[t] && !is_root[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        if promoted {
            continue;
        }
        let roots: Vec<StateId> = (0..n).filter(|&r| is_root[r]).collect();
        let index_of = |r: StateId| roots.iter().position(|&x| x == r).unwrap();
        let mut pieces: Vec<Piece> = roots.iter().map(|&r| Piece { root: r, states: Vec::new() }).collect();
        let mut piece_of = vec![0; n];
        for s in 0..n {
            let i = index_of(owner[s]);
            pieces[i].states.push(s);
            piece_of[s] = i;
        }
        return Decomposition { pieces, piece_of };
    }
}

/// Pastes per-piece choices into one profile. Entry `i` of `parts` supplies
/// the choices for the states of piece `i`; other entries are ignored.
pub fn glue(
    expanded: &ExpandedArena,
    decomposition: &Decomposition,
    parts: &[Vec<Option<StateId>>],
) -> Result<StrategyProfile> {
    if parts.len() != decomposition.pieces.len() {
        return Err(Error::input(format!(
            "expected {} piece profiles, got {}",
            decomposition.pieces.len(),
            parts.len()
        )));
    }
    let mut choice = vec![None; expanded.len()];
    for (i, piece) in decomposition.pieces.iter().enumerate() {
        for &s in &piece.states {
            if expanded.is_terminal(s) {
                continue;
            }
            match parts[i].get(s).copied().flatten() {
                Some(t) => choice[s] = Some(t),
                None => {
                    return Err(Error::input(format!(
                        "piece {i} has no choice at {}",
                        expanded.state_label(s)
                    )))
                }
            }
        }
    }
    StrategyProfile::new(expanded, choice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{expand, tests::stop_game};
    use crate::prefs::PreferenceProfile;

    fn choice_by_vertex(ex: &ExpandedArena, pick: impl Fn(&str) -> &'static str) -> StrategyProfile {
        let arena = ex.arena();
        let choice = (0..ex.len())
            .map(|s| {
                let succ = ex.successors(s);
                if succ.is_empty() {
                    return None;
                }
                let want = pick(&arena.vertex(ex.state(s).vertex).name);
                succ.iter().copied().find(|&t| arena.vertex(ex.state(t).vertex).name == want)
            })
            .collect();
        StrategyProfile::new(ex, choice).unwrap()
    }

    fn continue_all(ex: &ExpandedArena) -> StrategyProfile {
        choice_by_vertex(ex, |v| if v == "A1" { "B1" } else { "A1" })
    }

    fn killer() -> PreferenceProfile {
        PreferenceProfile::linear(&["a", "b"], &["x", "y", "z"], &[&["z", "y", "x"], &["x", "z", "y"]]).unwrap()
    }

    fn antagonist() -> PreferenceProfile {
        PreferenceProfile::linear(&["a", "b"], &["x", "y", "z"], &[&["z", "y", "x"], &["x", "y", "z"]]).unwrap()
    }

    #[test]
    fn induced_play_loop_and_stop() {
        let ex = expand(&stop_game()).unwrap();
        let p = continue_all(&ex);
        let play = induced_play(&ex, &p, 0);
        assert_eq!(play.outcome, 0);
        assert_eq!(play.cycle.len(), 2);
        let stop = choice_by_vertex(&ex, |v| if v == "A1" { "Ty" } else { "A1" });
        let play = induced_play(&ex, &stop, 0);
        assert_eq!(play.outcome, 1);
        assert!(play.cycle.is_empty());
        assert_eq!(play.stem.len(), 2);
    }

    #[test]
    fn deviation_examples() {
        let ex = expand(&stop_game()).unwrap();
        let p = continue_all(&ex);
        assert_eq!(deviation_outcomes(&ex, &p, 0, 1), 0b101);
        let b_stops = choice_by_vertex(&ex, |v| if v == "A1" { "B1" } else { "Tz" });
        assert_eq!(deviation_outcomes(&ex, &b_stops, 0, 0), 0b110);
    }

    #[test]
    fn no_positional_spe_for_killer() {
        let ex = expand(&stop_game()).unwrap();
        let prefs = killer();
        let inner: Vec<StateId> = (0..ex.len()).filter(|&s| !ex.is_terminal(s)).collect();
        let mut found = 0;
        for mask in 0..(1u32 << inner.len()) {
            let mut choice = vec![None; ex.len()];
            for (i, &s) in inner.iter().enumerate() {
                choice[s] = Some(ex.successors(s)[((mask >> i) & 1) as usize]);
            }
            let p = StrategyProfile::new(&ex, choice).unwrap();
            if is_spe(&ex, &p, &prefs) {
                found += 1;
            }
            let differential = (0..ex.len()).all(|s| is_nash(&ex, &p, s, &prefs));
            assert_eq!(differential, is_spe(&ex, &p, &prefs));
        }
        assert_eq!(found, 0);
    }

    #[test]
    fn both_stop_is_spe_for_antagonist() {
        let ex = expand(&stop_game()).unwrap();
        let p = choice_by_vertex(&ex, |v| if v == "A1" { "Ty" } else { "Tz" });
        assert!(is_spe(&ex, &p, &antagonist()));
        assert!(is_gp_spe(&ex, &p, &antagonist()));
    }

    #[test]
    fn dominated_outcome_fails_pareto() {
        // both players prefer y to x, yet the profile loops forever
        let prefs =
            PreferenceProfile::linear(&["a", "b"], &["x", "y", "z"], &[&["z", "x", "y"], &["z", "x", "y"]]).unwrap();
        let ex = expand(&stop_game()).unwrap();
        let p = continue_all(&ex);
        assert!(pareto_violation(&ex, &p, &prefs).is_some());
        assert!(!is_gp_spe(&ex, &p, &prefs));
    }

    #[test]
    fn decompose_and_glue_roundtrip() {
        let ex = expand(&stop_game()).unwrap();
        let full = QuasiProfile::full(&ex);
        assert_eq!(decompose(&ex, &full).pieces.len(), 1);
        let mut q = full.clone();
        let b1 = (0..ex.len()).find(|&s| ex.arena().vertex(ex.state(s).vertex).name == "B1").unwrap();
        let tz = ex.successors(b1).iter().copied().find(|&t| ex.is_terminal(t)).unwrap();
        q.ignore(b1, tz).unwrap();
        q.validate(&ex).unwrap();
        let d = decompose(&ex, &q);
        assert_eq!(d.pieces.len(), 2);
        let total: usize = d.pieces.iter().map(|p| p.states.len()).sum();
        assert_eq!(total, 6);
        let p = continue_all(&ex);
        let parts = vec![p.choice.clone(); 2];
        assert_eq!(glue(&ex, &d, &parts).unwrap(), p);
        assert!(glue(&ex, &d, &parts[..1]).is_err());
    }
}
