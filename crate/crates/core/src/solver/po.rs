//! Two players with the six-outcome partial orders
//! γ ≺a y ≺a x, z ≺a β ≺a α and x ≺b z ≺b y, α ≺b γ ≺b β.
//!
//! Every strict weak order extension of the pair contains the killer, but the
//! games without x, or without α, admit killer-free extensions. Both x and α
//! are maximal for a and minimal for b, so a is allowed to settle on them and
//! b to ignore them before the remaining game is handed to the engine.

use serde::{Deserialize, Serialize};

use crate::arena::{ExpandedArena, StateId};
use crate::error::{Error, Result};
use crate::prefs::{OutcomeId, PlayerId, PreferenceProfile, Relation};

use super::{certify, run_engine, Engine, SolveCertificate, SolveMode, SolveOptions, TransformationKind, TransformationRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoPattern {
    pub a: PlayerId,
    pub b: PlayerId,
    pub x: OutcomeId,
    pub y: OutcomeId,
    pub z: OutcomeId,
    pub alpha: OutcomeId,
    pub beta: OutcomeId,
    pub gamma: OutcomeId,
}

impl PoPattern {
    pub fn relations(&self, size: usize) -> (Relation, Relation) {
        let (x, y, z, al, be, ga) = (self.x, self.y, self.z, self.alpha, self.beta, self.gamma);
        let a = Relation::from_pairs(size, &[(ga, y), (y, x), (ga, x), (z, be), (be, al), (z, al)]);
        let b = Relation::from_pairs(size, &[(x, z), (z, y), (x, y), (al, ga), (ga, be), (al, be)]);
        (a, b)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Renaming of the outcomes and players onto the pattern, if one exists.
pub fn match_po_pattern(prefs: &PreferenceProfile) -> Option<PoPattern> {
    if prefs.player_count() != 2 || prefs.outcomes.len() != 6 {
        return None;
    }
    for (a, b) in [(0, 1), (1, 0)] {
        for p in permutations(6) {
            let pat = PoPattern { a, b, x: p[0], y: p[1], z: p[2], alpha: p[3], beta: p[4], gamma: p[5] };
            let (ra, rb) = pat.relations(6);
            if prefs.rel(a) == &ra && prefs.rel(b) == &rb {
                return Some(pat);
            }
        }
    }
    None
}

/// Killer-free strict weak extensions of the pattern once x (first) or α
/// (second) is gone; the missing outcome is left unrelated.
pub fn po_extensions(pat: &PoPattern, size: usize) -> [(Relation, Relation); 2] {
    let (x, y, z, al, be, ga) = (pat.x, pat.y, pat.z, pat.alpha, pat.beta, pat.gamma);
    [
        (
            Relation::levels(size, &[vec![z], vec![ga, be], vec![y, al]]),
            Relation::levels(size, &[vec![z, al], vec![ga], vec![y, be]]),
        ),
        (
            Relation::levels(size, &[vec![ga], vec![z, y], vec![be, x]]),
            Relation::levels(size, &[vec![ga, x], vec![z], vec![be, y]]),
        ),
    ]
}

/// a settles on terminals labeled x or α wherever it can force them; b
/// never enters that region.
fn eliminate(engine: &mut Engine, pat: &PoPattern) {
    let ex = engine.ex;
    let n = ex.len();
    let target = |s: StateId| matches!(ex.terminal_outcome(s), Some(o) if o == pat.x || o == pat.alpha);
    let mut rank = vec![usize::MAX; n];
    for s in 0..n {
        if target(s) {
            rank[s] = 0;
        }
    }
    let mut round = 0;
    loop {
        round += 1;
        let joining: Vec<StateId> = (0..n)
            .filter(|&s| rank[s] == usize::MAX && !ex.is_terminal(s))
            .filter(|&s| {
                let inside = |d: &StateId| rank[*d] < round;
                if ex.owner(s) == Some(pat.a) {
                    ex.successors(s).iter().any(inside)
                } else {
                    ex.successors(s).iter().all(inside)
                }
            })
            .collect();
        if joining.is_empty() {
            break;
        }
        for s in joining {
            rank[s] = round;
        }
    }
    let mut fixed = Vec::new();
    let mut removed = Vec::new();
    for s in 0..n {
        if ex.is_terminal(s) {
            continue;
        }
        if rank[s] != usize::MAX {
            if ex.owner(s) == Some(pat.a) {
                let d = *ex.successors(s).iter().min_by_key(|&&d| rank[d]).unwrap();
                engine.kept[s] = vec![d];
                fixed.push((s, d));
            }
        } else if ex.owner(s) == Some(pat.b) {
            for &d in ex.successors(s) {
                if rank[d] != usize::MAX {
                    removed.push((s, d));
                }
            }
            engine.kept[s].retain(|&d| rank[d] == usize::MAX);
        }
    }
    if !fixed.is_empty() {
        let states = fixed.iter().map(|e| e.0).collect();
        engine.trace.push(TransformationRecord {
            kind: TransformationKind::AChooses,
            states,
            removed: Vec::new(),
            fixed,
            relabel: None,
        });
    }
    if !removed.is_empty() {
        let states = removed.iter().map(|e| e.0).collect();
        engine.trace.push(TransformationRecord {
            kind: TransformationKind::AIgnores,
            states,
            removed,
            fixed: Vec::new(),
            relabel: None,
        });
    }
}

pub fn solve_po_pattern(expanded: &ExpandedArena, prefs: &PreferenceProfile) -> Result<SolveCertificate> {
    let pat = match_po_pattern(prefs)
        .ok_or_else(|| Error::Precondition("preferences do not match the six-outcome pattern".into()))?;
    let mut failures = Vec::new();
    for (ext_a, ext_b) in po_extensions(&pat, prefs.outcomes.len()) {
        let mut rels = vec![Relation::empty(6); 2];
        rels[pat.a] = ext_a;
        rels[pat.b] = ext_b;
        let attempt = run_engine(expanded, rels, &SolveOptions::default(), |e| eliminate(e, &pat))
            .and_then(|(profile, trace)| certify(expanded, prefs, profile, trace, SolveMode::Spe));
        match attempt {
            Ok(cert) => return Ok(cert),
            Err(e) => failures.push(e.to_string()),
        }
    }
    Err(Error::Internal(format!("no extension yields a verified equilibrium: {}", failures.join("; "))))
}
