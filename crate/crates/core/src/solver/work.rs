//! Step-by-step application of the stop-game transformations on an explicit
//! quasi-profile with an outcome overlay.
//!
//! Preferences must have the quasi-antagonist shape: `y` worst for both and
//! `x_n <a ... <a x_1`, `x_1 <b ... <b x_n` on the rest. Player 0 plays `a`.

use std::collections::VecDeque;

use crate::arena::{tarjan, ExpandedArena, StateId};
use crate::error::{Error, Result};
use crate::prefs::{bit, bits, OutcomeId, OutcomeMask, PreferenceProfile};
use crate::profiles::QuasiProfile;

use super::{check_quasi_antagonist, run_engine, SolveOptions, TransformationKind, TransformationRecord};

pub struct WorkGame<'a> {
    pub expanded: &'a ExpandedArena,
    pub prefs: &'a PreferenceProfile,
    pub y: OutcomeId,
    /// a's least outcome other than `y`, b's favourite.
    pub xn: OutcomeId,
    pub quasi: QuasiProfile,
    /// States whose subgame has been relabeled to a constant outcome.
    pub overlay: Vec<Option<OutcomeId>>,
    /// Choices fixed inside relabeled subgames.
    pub partial: Vec<Option<StateId>>,
    pub trace: Vec<TransformationRecord>,
}

fn precondition(msg: &str) -> Error {
    Error::Precondition(msg.to_string())
}

impl<'a> WorkGame<'a> {
    pub fn new(expanded: &'a ExpandedArena, prefs: &'a PreferenceProfile, y: OutcomeId) -> Result<Self> {
        check_quasi_antagonist(prefs, y)?;
        let others = prefs.outcomes.full_mask() & !bit(y);
        let xn = bits(prefs.rel(0).minimal(others))
            .next()
            .ok_or_else(|| precondition("at least one outcome besides the worst is needed"))?;
        let n = expanded.len();
        Ok(WorkGame {
            expanded,
            prefs,
            y,
            xn,
            quasi: QuasiProfile::full(expanded),
            overlay: vec![None; n],
            partial: vec![None; n],
            trace: Vec::new(),
        })
    }

    fn moves(&self, s: StateId) -> Vec<StateId> {
        if self.overlay[s].is_some() {
            Vec::new()
        } else {
            self.quasi.allowed[s].clone()
        }
    }

    /// Outcomes reachable from every state under the current allowances.
    pub fn achievable(&self) -> Vec<OutcomeMask> {
        let ex = self.expanded;
        let n = ex.len();
        let mut ach = vec![0u64; n];
        for comp in tarjan(n, |s| self.moves(s), |_| true) {
            let mut m = 0;
            let cyclic = comp.len() > 1 || self.moves(comp[0]).contains(&comp[0]);
            for &s in &comp {
                if let Some(o) = self.overlay[s].or(ex.terminal_outcome(s)) {
                    m |= bit(o);
                }
                for t in self.moves(s) {
                    m |= ach[t];
                }
            }
            if cyclic {
                m |= bit(ex.layer_outcome(ex.layer(comp[0])));
            }
            for &s in &comp {
                ach[s] = m;
            }
        }
        ach
    }

    fn reachable(&self, from: StateId) -> Vec<StateId> {
        let mut seen = vec![false; self.expanded.len()];
        let mut out = vec![from];
        seen[from] = true;
        let mut i = 0;
        while i < out.len() {
            for t in self.moves(out[i]) {
                if !seen[t] {
                    seen[t] = true;
                    out.push(t);
                }
            }
            i += 1;
        }
        out
    }

    fn is_a(&self, s: StateId) -> bool {
        self.expanded.owner(s) == Some(0)
    }

    fn is_b(&self, s: StateId) -> bool {
        self.expanded.owner(s) == Some(1)
    }

    /// Successors of `s` whose subgame yields the single outcome `x`.
    fn pseudo_leaf_moves(&self, ach: &[OutcomeMask], s: StateId, x: impl Fn(OutcomeId) -> bool) -> Vec<StateId> {
        self.moves(s)
            .into_iter()
            .filter(|&d| ach[d].count_ones() == 1 && x(ach[d].trailing_zeros() as usize))
            .collect()
    }

    fn is_ak(&self, ach: &[OutcomeMask], s: StateId) -> bool {
        self.is_a(s) && !self.pseudo_leaf_moves(ach, s, |o| o != self.y && o != self.xn).is_empty()
    }

    fn is_an(&self, ach: &[OutcomeMask], s: StateId) -> bool {
        self.is_a(s) && !self.pseudo_leaf_moves(ach, s, |o| o == self.xn).is_empty()
    }

    fn is_b_stop(&self, ach: &[OutcomeMask], s: StateId) -> bool {
        self.is_b(s) && !self.pseudo_leaf_moves(ach, s, |o| o != self.y).is_empty()
    }

    fn reaches(&self, from: StateId, pred: impl Fn(StateId) -> bool) -> bool {
        self.reachable(from).into_iter().any(pred)
    }

    pub fn apply(&mut self, kind: TransformationKind, location: StateId) -> Result<()> {
        let ach = self.achievable();
        let y = self.y;
        let involves_y = |s: StateId| ach[s] & bit(y) != 0;
        let mut record =
            TransformationRecord { kind, states: vec![location], removed: Vec::new(), fixed: Vec::new(), relabel: None };
        match kind {
            TransformationKind::WeakToStrong => {
                if ach[location].count_ones() < 2 || involves_y(location) {
                    return Err(precondition("subgame must involve several outcomes but not the worst one"));
                }
                let region: Vec<StateId> = self
                    .reachable(location)
                    .into_iter()
                    .filter(|&s| self.overlay[s].is_none() && !self.expanded.is_terminal(s))
                    .collect();
                let rels = (0..2).map(|p| self.prefs.rel(p).clone()).collect();
                let overlay = self.overlay.clone();
                let quasi = self.quasi.clone();
                let (profile, _) = run_engine(self.expanded, rels, &SolveOptions::default(), |e| {
                    for s in 0..e.ex.len() {
                        e.kept[s] = quasi.allowed[s].clone();
                        if let Some(o) = overlay[s] {
                            e.ind[s] = Some(o);
                        }
                    }
                    let outside: Vec<StateId> = (0..e.ex.len())
                        .filter(|&s| e.ind[s].is_none() && !region.contains(&s))
                        .collect();
                    // states outside the subgame are irrelevant here
                    for s in outside {
                        e.ind[s] = Some(e.ex.layer_outcome(e.ex.layer(s)));
                        e.choice[s] = e.kept[s].first().copied();
                    }
                })?;
                let induced = crate::profiles::induced_outcomes(self.expanded, &profile);
                for &s in &region {
                    self.partial[s] = profile.choice[s];
                    record.fixed.push((s, profile.choice[s].unwrap()));
                }
                self.overlay[location] = Some(induced[location]);
                record.relabel = Some(induced[location]);
            }
            TransformationKind::EmptyInterior => {
                if ach[location] != bit(y) {
                    return Err(precondition("location is not a pseudo-leaf of the worst outcome"));
                }
                if location != self.expanded.root() {
                    for p in 0..self.expanded.len() {
                        if self.quasi.allowed[p].len() > 1 && self.quasi.allowed[p].contains(&location) {
                            self.quasi.ignore(p, location)?;
                            record.removed.push((p, location));
                        }
                    }
                }
            }
            TransformationKind::BChooses => {
                if !self.is_b(location) {
                    return Err(precondition("location is not owned by b"));
                }
                let Some(&d) = self.pseudo_leaf_moves(&ach, location, |o| o == self.xn).first() else {
                    return Err(precondition("location has no pseudo-leaf of b's favourite outcome"));
                };
                self.quasi.fix(location, d);
                record.fixed.push((location, d));
            }
            TransformationKind::AIgnores => {
                if !involves_y(location) {
                    return Err(precondition("subgame does not involve the worst outcome"));
                }
                if self.reaches(location, |s| self.is_b_stop(&ach, s)) {
                    return Err(precondition("subgame has a b-stop node"));
                }
                let below = self.reachable(location);
                if below.iter().any(|&s| involves_y(s) && !self.reaches(s, |t| self.is_ak(&ach, t))) {
                    return Err(precondition("some subgame involving the worst outcome has no a_k node"));
                }
                for s in below {
                    if self.is_a(s) {
                        for d in self.pseudo_leaf_moves(&ach, s, |o| o == self.xn) {
                            if self.quasi.allowed[s].len() > 1 {
                                self.quasi.ignore(s, d)?;
                                record.removed.push((s, d));
                            }
                        }
                    }
                }
            }
            TransformationKind::AChooses => {
                if !involves_y(location) {
                    return Err(precondition("subgame does not involve the worst outcome"));
                }
                let below = self.reachable(location);
                if below.iter().any(|&s| self.is_ak(&ach, s)) {
                    return Err(precondition("subgame has an a_k node"));
                }
                if below.iter().any(|&s| involves_y(s) && !self.reaches(s, |t| self.is_an(&ach, t))) {
                    return Err(precondition("some subgame involving the worst outcome has no a_n node"));
                }
                // walk every state of the subgame to the nearest xn pseudo-leaf
                let inside: Vec<bool> = {
                    let mut m = vec![false; self.expanded.len()];
                    for &s in &below {
                        m[s] = true;
                    }
                    m
                };
                let mut next: Vec<Option<StateId>> = vec![None; self.expanded.len()];
                let mut done = vec![false; self.expanded.len()];
                let mut queue = VecDeque::new();
                for &s in &below {
                    if ach[s] == bit(self.xn) {
                        done[s] = true;
                        queue.push_back(s);
                    }
                }
                while let Some(t) = queue.pop_front() {
                    for &s in &below {
                        if !done[s] && inside[s] && self.moves(s).contains(&t) {
                            done[s] = true;
                            next[s] = Some(t);
                            queue.push_back(s);
                        }
                    }
                }
                for &s in &below {
                    if let Some(t) = next[s] {
                        self.partial[s] = Some(t);
                        record.fixed.push((s, t));
                    }
                }
                self.overlay[location] = Some(self.xn);
                record.relabel = Some(self.xn);
            }
            TransformationKind::Collapse | TransformationKind::CutTopBlock => {
                return Err(precondition("not a stop-game transformation"));
            }
        }
        self.trace.push(record);
        Ok(())
    }
}
