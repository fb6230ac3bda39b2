//! Layered region solver shared by every construction.
//!
//! States are solved bottom-up along the strongly connected components of the
//! current allowance graph. A solved state acts as a leaf labeled with the
//! outcome it induces. Cyclic components are solved by an antagonist
//! threshold procedure, by an attractor construction when one player has only
//! two levels, or by the stop procedure when staying forever is the common
//! worst label.

use std::collections::VecDeque;

use crate::arena::{tarjan, ExpandedArena, StateId};
use crate::error::{Error, Result};
use crate::prefs::{antagonistic_extension, bit, bits, two_block_split, OutcomeId, OutcomeMask, PlayerId, Relation};

use super::{TransformationKind, TransformationRecord};

pub(crate) type Label = usize;
/// Fresh label strictly below every outcome for every player.
pub(crate) const Y: Label = usize::MAX;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Labels {
    pub out: OutcomeMask,
    pub y: bool,
}

impl Labels {
    fn single(l: Label) -> Self {
        if l == Y {
            Labels { out: 0, y: true }
        } else {
            Labels { out: bit(l), y: false }
        }
    }

    fn union(self, o: Labels) -> Labels {
        Labels { out: self.out | o.out, y: self.y || o.y }
    }

    fn contains(self, l: Label) -> bool {
        if l == Y {
            self.y
        } else {
            self.out & bit(l) != 0
        }
    }

    fn intersects(self, o: Labels) -> bool {
        self.out & o.out != 0 || (self.y && o.y)
    }
}

/// Players split into two camps on a set of labels.
#[derive(Debug, Clone)]
struct Teams {
    in_b: Vec<bool>,
    rel_a: Relation,
    rel_b: Relation,
}

impl Teams {
    fn swapped(&self) -> Teams {
        Teams { in_b: self.in_b.iter().map(|b| !b).collect(), rel_a: self.rel_b.clone(), rel_b: self.rel_a.clone() }
    }
}

fn restrict(rel: &Relation, within: OutcomeMask) -> Relation {
    let pairs: Vec<_> =
        rel.pairs().into_iter().filter(|&(x, y)| within & bit(x) != 0 && within & bit(y) != 0).collect();
    Relation::from_pairs(rel.size(), &pairs)
}

enum Outcome {
    Done,
    Retry,
}

pub(crate) struct Engine<'a> {
    pub ex: &'a ExpandedArena,
    pub rels: Vec<Relation>,
    joint: Relation,
    pub kept: Vec<Vec<StateId>>,
    pub stay: Vec<Label>,
    pub ind: Vec<Option<Label>>,
    pub choice: Vec<Option<StateId>>,
    pub trace: Vec<TransformationRecord>,
    steps: usize,
    cap: usize,
}

impl<'a> Engine<'a> {
    pub fn new(ex: &'a ExpandedArena, rels: Vec<Relation>) -> Self {
        let n = ex.len();
        let joint = rels.iter().fold(Relation::empty(ex.arena().outcome_count()), |acc, r| acc.union(r));
        let edges: usize = (0..n).map(|s| ex.successors(s).len()).sum();
        Engine {
            ex,
            rels,
            joint,
            kept: (0..n).map(|s| ex.successors(s).to_vec()).collect(),
            stay: (0..n).map(|s| ex.layer_outcome(ex.layer(s))).collect(),
            ind: (0..n).map(|s| ex.terminal_outcome(s)).collect(),
            choice: vec![None; n],
            trace: Vec::new(),
            steps: 0,
            cap: (10 * edges * ex.arena().outcome_count()).max(1000),
        }
    }

    pub fn set_step_cap(&mut self, cap: usize) {
        self.cap = cap;
    }

    /// Solves every state that is still open.
    pub fn run(&mut self) -> Result<()> {
        let open: Vec<StateId> = (0..self.ex.len()).filter(|&s| self.ind[s].is_none()).collect();
        self.solve_region(&open)?;
        if let Some(s) = (0..self.ex.len()).find(|&s| self.ind[s].is_none()) {
            return Err(Error::Internal(format!("state {} left unsolved", self.ex.state_label(s))));
        }
        Ok(())
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.cap {
            return Err(Error::Internal(format!("step cap {} exceeded", self.cap)));
        }
        Ok(())
    }

    fn record(
        &mut self,
        kind: TransformationKind,
        states: Vec<StateId>,
        removed: Vec<(StateId, StateId)>,
        fixed: Vec<(StateId, StateId)>,
    ) {
        self.trace.push(TransformationRecord { kind, states, removed, fixed, relabel: None });
    }

    fn owner(&self, s: StateId) -> PlayerId {
        self.ex.owner(s).expect("open states have owners")
    }

    fn lt(&self, p: PlayerId, x: Label, y: Label) -> bool {
        match (x == Y, y == Y) {
            (_, true) => false,
            (true, false) => true,
            _ => self.rels[p].lt(x, y),
        }
    }

    /// Minimal upper block of a label set; `Y` only survives alone.
    fn top(&self, s: Labels) -> Labels {
        if s.out == 0 {
            return s;
        }
        let empty = Relation::empty(self.joint.size());
        let out = two_block_split(&self.joint, &empty, s.out).map(|(u, _)| u).unwrap_or(s.out);
        Labels { out, y: false }
    }

    fn mask(&self, nodes: &[StateId]) -> Vec<bool> {
        let mut m = vec![false; self.ex.len()];
        for &s in nodes {
            m[s] = true;
        }
        m
    }

    fn components(&self, inset: &[bool]) -> Vec<Vec<StateId>> {
        tarjan(self.ex.len(), |s| self.kept[s].clone(), |s| inset[s])
    }

    fn is_cyclic(&self, comp: &[StateId]) -> bool {
        comp.len() > 1 || self.kept[comp[0]].contains(&comp[0])
    }

    fn leaf(&self, s: StateId) -> Label {
        self.ind[s].expect("successor outside the region must be solved")
    }

    fn achievable(&self, inset: &[bool]) -> Vec<Labels> {
        let mut ach = vec![Labels::default(); self.ex.len()];
        for comp in self.components(inset) {
            let mut m = Labels::default();
            for &s in &comp {
                for &t in &self.kept[s] {
                    m = m.union(if inset[t] { ach[t] } else { Labels::single(self.leaf(t)) });
                }
            }
            if self.is_cyclic(&comp) {
                m = m.union(Labels::single(self.stay[comp[0]]));
            }
            for &s in &comp {
                ach[s] = m;
            }
        }
        ach
    }

    pub fn solve_region(&mut self, nodes: &[StateId]) -> Result<()> {
        let mut nodes: Vec<StateId> = nodes.to_vec();
        loop {
            nodes.retain(|&s| self.ind[s].is_none());
            if nodes.is_empty() {
                return Ok(());
            }
            let inset = self.mask(&nodes);
            self.cut_to_top_blocks(&nodes, &inset)?;
            let mut retry = false;
            for comp in self.components(&inset) {
                if self.is_cyclic(&comp) {
                    if let Outcome::Retry = self.solve_component(&comp)? {
                        retry = true;
                        break;
                    }
                } else {
                    self.pick_best(comp[0]);
                }
            }
            if !retry {
                return Ok(());
            }
        }
    }

    /// Drops every edge whose target cannot reach the top block of its source.
    fn cut_to_top_blocks(&mut self, nodes: &[StateId], inset: &[bool]) -> Result<()> {
        loop {
            let ach = self.achievable(inset);
            let mut cuts = Vec::new();
            let mut interior = Vec::new();
            for &g in nodes {
                let t = self.top(ach[g]);
                for &d in &self.kept[g] {
                    let ad = if inset[d] { ach[d] } else { Labels::single(self.leaf(d)) };
                    if !ad.intersects(t) {
                        if ad == Labels::single(Y) {
                            interior.push((g, d));
                        } else {
                            cuts.push((g, d));
                        }
                    }
                }
            }
            if cuts.is_empty() && interior.is_empty() {
                return Ok(());
            }
            self.tick()?;
            for &(g, d) in cuts.iter().chain(&interior) {
                self.kept[g].retain(|&t| t != d);
                if self.kept[g].is_empty() {
                    return Err(Error::Internal(format!("cut emptied state {}", self.ex.state_label(g))));
                }
            }
            if !cuts.is_empty() {
                let states = cuts.iter().map(|e| e.0).collect();
                self.record(TransformationKind::CutTopBlock, states, cuts, Vec::new());
            }
            if !interior.is_empty() {
                let states = interior.iter().map(|e| e.1).collect();
                self.record(TransformationKind::EmptyInterior, states, interior, Vec::new());
            }
        }
    }

    /// Acyclic state: the owner takes a successor whose label nothing beats.
    fn pick_best(&mut self, g: StateId) {
        let p = self.owner(g);
        let labels: Vec<(StateId, Label)> = self.kept[g].iter().map(|&d| (d, self.leaf(d))).collect();
        let &(d, l) = labels
            .iter()
            .find(|&&(_, l)| labels.iter().all(|&(_, m)| !self.lt(p, l, m)))
            .expect("some successor is maximal");
        self.choice[g] = Some(d);
        self.ind[g] = Some(l);
    }

    fn settle(&mut self, g: StateId, d: StateId, l: Label) {
        self.choice[g] = Some(d);
        self.ind[g] = Some(l);
    }

    fn solve_component(&mut self, comp: &[StateId]) -> Result<Outcome> {
        self.tick()?;
        let inc = self.mask(comp);
        let mut u = Labels::single(self.stay[comp[0]]);
        for &g in comp {
            for &d in &self.kept[g] {
                if !inc[d] {
                    u = u.union(Labels::single(self.leaf(d)));
                }
            }
        }
        let t = self.top(u);
        let mut removed = Vec::new();
        for &g in comp {
            let drop: Vec<StateId> =
                self.kept[g].iter().copied().filter(|&d| !inc[d] && !t.contains(self.leaf(d))).collect();
            for d in drop {
                self.kept[g].retain(|&x| x != d);
                removed.push((g, d));
            }
        }
        if !removed.is_empty() {
            let states = removed.iter().map(|e| e.0).collect();
            self.record(TransformationKind::CutTopBlock, states, removed, Vec::new());
        }
        if !t.contains(self.stay[comp[0]]) {
            for &g in comp {
                self.stay[g] = Y;
            }
            self.record(TransformationKind::Collapse, comp.to_vec(), Vec::new(), Vec::new());
        }
        let stay = self.stay[comp[0]];
        let u1 = t.out;
        match u1.count_ones() {
            0 => {
                for &g in comp {
                    let d = *self.kept[g].iter().find(|&&d| inc[d]).expect("cyclic component");
                    self.settle(g, d, Y);
                }
                Ok(Outcome::Done)
            }
            1 if stay != Y => {
                for &g in comp {
                    let d = self.kept[g][0];
                    self.settle(g, d, stay);
                }
                Ok(Outcome::Done)
            }
            1 => {
                let l = bits(u1).next().unwrap();
                self.paths_to_exits(comp, &inc, |_| true, |x| x == l)?;
                Ok(Outcome::Done)
            }
            _ if stay != Y => {
                self.solve_with_stay(comp, &inc, u1, stay)?;
                Ok(Outcome::Done)
            }
            _ => self.stop_step(comp, &inc, u1),
        }
    }

    fn teams(&self, u1: OutcomeMask) -> Result<Teams> {
        let k = self.rels.len();
        let rel_a = restrict(&self.rels[0], u1);
        match k {
            1 => Ok(Teams { in_b: vec![false], rel_b: Relation::empty(rel_a.size()), rel_a }),
            2 => Ok(Teams { in_b: vec![false, true], rel_b: restrict(&self.rels[1], u1), rel_a }),
            _ => {
                let inverse = rel_a.inverse();
                let mut in_b = Vec::with_capacity(k);
                for r in &self.rels {
                    let r = restrict(r, u1);
                    if r == rel_a {
                        in_b.push(false);
                    } else if r == inverse {
                        in_b.push(true);
                    } else {
                        return Err(Error::Internal("players neither agree nor disagree on a top block".into()));
                    }
                }
                let rel_b = if in_b.iter().any(|&b| b) { inverse } else { Relation::empty(rel_a.size()) };
                Ok(Teams { in_b, rel_a, rel_b })
            }
        }
    }

    fn in_b(&self, teams: &Teams, g: StateId) -> bool {
        teams.in_b[self.owner(g)]
    }

    fn solve_with_stay(&mut self, comp: &[StateId], inc: &[bool], u1: OutcomeMask, c: Label) -> Result<()> {
        let teams = self.teams(u1)?;
        if teams.rel_a.intersection(&teams.rel_b).is_empty() {
            if let Ok(order) = antagonistic_extension(&teams.rel_a, &teams.rel_b, u1) {
                return self.antagonist(comp, inc, &teams, &order, c);
            }
        }
        self.two_level(comp, inc, &teams, u1, c)
    }

    /// Attractor of one camp towards solved successors whose label passes `target`.
    /// Returns the rank at which each state of `inset` joined, `usize::MAX` otherwise.
    fn attractor(
        &self,
        nodes: &[StateId],
        inset: &[bool],
        teams: &Teams,
        b_attracts: bool,
        target: impl Fn(Label) -> bool,
    ) -> Vec<usize> {
        let mut rank = vec![usize::MAX; self.ex.len()];
        let mut round = 0;
        loop {
            round += 1;
            let joining: Vec<StateId> = nodes
                .iter()
                .copied()
                .filter(|&g| rank[g] == usize::MAX)
                .filter(|&g| {
                    let good = |d: &StateId| {
                        if inset[*d] {
                            rank[*d] < round
                        } else {
                            target(self.leaf(*d))
                        }
                    };
                    if self.in_b(teams, g) == b_attracts {
                        self.kept[g].iter().any(good)
                    } else {
                        self.kept[g].iter().all(good)
                    }
                })
                .collect();
            if joining.is_empty() {
                return rank;
            }
            for g in joining {
                rank[g] = round;
            }
        }
    }

    fn attractor_move(&self, g: StateId, rank: &[usize], inset: &[bool], target: impl Fn(Label) -> bool) -> StateId {
        self.kept[g]
            .iter()
            .copied()
            .find(|&d| !inset[d] && target(self.leaf(d)))
            .or_else(|| self.kept[g].iter().copied().filter(|&d| inset[d] && rank[d] < rank[g]).min_by_key(|&d| rank[d]))
            .expect("attractor state has a move")
    }

    /// Threshold attractors for an antagonist component; `order` is worst first for camp a.
    fn antagonist(&mut self, comp: &[StateId], inc: &[bool], teams: &Teams, order: &[OutcomeId], c: Label) -> Result<()> {
        let m = order.len();
        let mut rank_of = vec![usize::MAX; self.joint.size()];
        for (i, &o) in order.iter().enumerate() {
            rank_of[o] = i;
        }
        let rc = rank_of[c];
        let mut val = vec![0usize; self.ex.len()];
        let mut ranks: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (t, slot) in ranks.iter_mut().enumerate().skip(1) {
            let attr = if rc >= t {
                self.attractor(comp, inc, teams, true, |l| rank_of[l] < t)
            } else {
                self.attractor(comp, inc, teams, false, |l| rank_of[l] >= t)
            };
            for &g in comp {
                let winning = if rc >= t { attr[g] == usize::MAX } else { attr[g] != usize::MAX };
                if winning {
                    val[g] = t;
                }
            }
            *slot = attr;
        }
        let value = |d: StateId| if inc[d] { val[d] } else { rank_of[self.leaf(d)] };
        let mut fixed = Vec::new();
        for &g in comp {
            let w = val[g];
            let b = self.in_b(teams, g);
            let d = if w == rc || (w < rc && !b) || (w > rc && b) {
                self.kept[g].iter().copied().find(|&d| value(d) == w)
            } else if w < rc {
                Some(self.attractor_move(g, &ranks[w + 1], inc, |l| rank_of[l] <= w))
            } else {
                Some(self.attractor_move(g, &ranks[w], inc, |l| rank_of[l] >= w))
            };
            let d = d.ok_or_else(|| Error::Internal("antagonist value has no witness move".into()))?;
            fixed.push((g, d));
        }
        for &(g, d) in &fixed {
            self.settle(g, d, order[val[g]]);
        }
        self.trace.push(TransformationRecord {
            kind: TransformationKind::WeakToStrong,
            states: comp.to_vec(),
            removed: Vec::new(),
            fixed,
            relabel: None,
        });
        Ok(())
    }

    /// One camp has at most two levels and some `w` is its minimum and the
    /// other camp's maximum.
    fn two_level(&mut self, comp: &[StateId], inc: &[bool], teams: &Teams, u1: OutcomeMask, c: Label) -> Result<()> {
        let mut found = None;
        for t in [teams.clone(), teams.swapped()] {
            let a0 = t.rel_a.minimal(u1);
            let rest = u1 & !a0;
            let two = rest == 0 || t.rel_a.minimal(rest) == rest;
            let cand = a0 & t.rel_b.maximal(u1);
            if two && cand != 0 {
                found = Some((t, a0, bits(cand).next().unwrap()));
                break;
            }
        }
        let Some((t, a0, w)) = found else {
            return Err(Error::Internal("no construction applies to the top block".into()));
        };
        let hi = u1 & !a0;

        // b settles on w wherever it can force it
        let wr = self.attractor(comp, inc, &t, true, |l| l == w);
        let mut fixed = Vec::new();
        for &g in comp {
            if wr[g] != usize::MAX {
                let d = if self.in_b(&t, g) { self.attractor_move(g, &wr, inc, |l| l == w) } else { self.kept[g][0] };
                fixed.push((g, d));
            }
        }
        for &(g, d) in &fixed {
            self.settle(g, d, w);
        }
        if !fixed.is_empty() {
            let states = fixed.iter().map(|e| e.0).collect();
            self.record(TransformationKind::BChooses, states, Vec::new(), fixed);
        }
        let mut removed = Vec::new();
        for &g in comp {
            if wr[g] == usize::MAX && !self.in_b(&t, g) {
                let drop: Vec<StateId> = self.kept[g]
                    .iter()
                    .copied()
                    .filter(|&d| wr[d] != usize::MAX || (!inc[d] && self.leaf(d) == w))
                    .collect();
                for d in drop {
                    self.kept[g].retain(|&x| x != d);
                    removed.push((g, d));
                }
            }
        }
        if !removed.is_empty() {
            let states = removed.iter().map(|e| e.0).collect();
            self.record(TransformationKind::AIgnores, states, removed, Vec::new());
        }
        let mut open: Vec<StateId> = comp.iter().copied().filter(|&g| wr[g] == usize::MAX).collect();
        if open.is_empty() {
            return Ok(());
        }
        if c != w {
            return self.solve_region(&open);
        }
        loop {
            self.tick()?;
            let inset = self.mask(&open);
            let hr = self.attractor(&open, &inset, &t, false, |l| l != Y && hi & bit(l) != 0);
            let h: Vec<StateId> = open.iter().copied().filter(|&g| hr[g] != usize::MAX).collect();
            if !h.is_empty() {
                let mut removed = Vec::new();
                for &g in &h {
                    if !self.in_b(&t, g) {
                        let drop: Vec<StateId> = self.kept[g]
                            .iter()
                            .copied()
                            .filter(|&d| {
                                if inset[d] {
                                    hr[d] >= hr[g]
                                } else {
                                    let l = self.leaf(d);
                                    l == Y || hi & bit(l) == 0
                                }
                            })
                            .collect();
                        for d in drop {
                            self.kept[g].retain(|&x| x != d);
                            removed.push((g, d));
                        }
                    }
                }
                self.record(TransformationKind::AChooses, h.clone(), removed, Vec::new());
                self.solve_region(&h)?;
            }
            open.retain(|&g| self.ind[g].is_none());
            let reach = self.reaches_cycle(&open);
            let q: Vec<StateId> = open.iter().copied().filter(|&g| !reach[g]).collect();
            if !q.is_empty() {
                self.solve_region(&q)?;
                open.retain(|&g| self.ind[g].is_none());
            }
            if h.is_empty() && q.is_empty() {
                break;
            }
        }
        // the rest follows plays that stay forever
        let inset = self.mask(&open);
        let mut fixed = Vec::new();
        for comp in self.components(&inset) {
            let cyclic = self.is_cyclic(&comp);
            let cm = self.mask(&comp);
            for &g in &comp {
                let d = if cyclic {
                    self.kept[g].iter().copied().find(|&d| cm[d])
                } else {
                    self.kept[g].iter().copied().find(|&d| inset[d])
                };
                let d = d.ok_or_else(|| Error::Internal("no move towards a cycle".into()))?;
                fixed.push((g, d));
            }
        }
        for &(g, d) in &fixed {
            self.kept[g] = vec![d];
            self.settle(g, d, w);
        }
        Ok(())
    }

    fn reaches_cycle(&self, nodes: &[StateId]) -> Vec<bool> {
        let inset = self.mask(nodes);
        let mut reach = vec![false; self.ex.len()];
        for comp in self.components(&inset) {
            let r = self.is_cyclic(&comp) || comp.iter().any(|&g| self.kept[g].iter().any(|&d| inset[d] && reach[d]));
            for &g in &comp {
                reach[g] = r;
            }
        }
        reach
    }

    /// Every state of `comp` walks to the nearest exit whose label passes `target`;
    /// only states passing `mover` may take such an exit directly.
    fn paths_to_exits(
        &mut self,
        comp: &[StateId],
        inc: &[bool],
        mover: impl Fn(StateId) -> bool,
        target: impl Fn(Label) -> bool,
    ) -> Result<Vec<(StateId, StateId)>> {
        let mut assigned: Vec<Option<(StateId, Label)>> = vec![None; self.ex.len()];
        let mut queue = VecDeque::new();
        for &g in comp {
            if !mover(g) {
                continue;
            }
            if let Some(&d) = self.kept[g].iter().find(|&&d| !inc[d] && target(self.leaf(d))) {
                assigned[g] = Some((d, self.leaf(d)));
                queue.push_back(g);
            }
        }
        while let Some(x) = queue.pop_front() {
            let l = assigned[x].unwrap().1;
            for &g in comp {
                if assigned[g].is_none() && self.kept[g].contains(&x) {
                    assigned[g] = Some((x, l));
                    queue.push_back(g);
                }
            }
        }
        let mut fixed = Vec::new();
        for &g in comp {
            let (d, l) = assigned[g].ok_or_else(|| Error::Internal("state cannot reach a target exit".into()))?;
            fixed.push((g, d));
            self.settle(g, d, l);
        }
        Ok(fixed)
    }

    /// Staying forever is the common worst label and the exits form an
    /// unsplittable block.
    fn stop_step(&mut self, comp: &[StateId], inc: &[bool], u1: OutcomeMask) -> Result<Outcome> {
        let teams = self.teams(u1)?;
        let mut found = None;
        for t in [teams.clone(), teams.swapped()] {
            let a0 = t.rel_a.minimal(u1);
            let btop = t.rel_b.maximal(u1);
            if a0 & btop != 0 {
                found = Some((t, a0, btop));
                break;
            }
        }
        let Some((t, a0, btop)) = found else {
            return Err(Error::Internal("no outcome is minimal for one camp and maximal for the other".into()));
        };
        let has = |m: OutcomeMask, l: Label| l != Y && m & bit(l) != 0;

        let mut fixed = Vec::new();
        for &g in comp {
            if self.in_b(&t, g) {
                if let Some(&d) = self.kept[g].iter().find(|&&d| !inc[d] && has(btop, self.leaf(d))) {
                    fixed.push((g, d));
                }
            }
        }
        if !fixed.is_empty() {
            for &(g, d) in &fixed {
                self.kept[g] = vec![d];
            }
            let states = fixed.iter().map(|e| e.0).collect();
            self.record(TransformationKind::BChooses, states, Vec::new(), fixed);
            return Ok(Outcome::Retry);
        }

        let a_k = comp.iter().any(|&g| {
            !self.in_b(&t, g) && self.kept[g].iter().any(|&d| !inc[d] && !has(a0, self.leaf(d)))
        });
        if a_k {
            let mut removed = Vec::new();
            for &g in comp {
                if !self.in_b(&t, g) {
                    let drop: Vec<StateId> =
                        self.kept[g].iter().copied().filter(|&d| !inc[d] && has(a0, self.leaf(d))).collect();
                    for d in drop {
                        self.kept[g].retain(|&x| x != d);
                        removed.push((g, d));
                    }
                }
            }
            if removed.is_empty() {
                return Err(Error::Internal("stop procedure made no progress".into()));
            }
            let states = removed.iter().map(|e| e.0).collect();
            self.record(TransformationKind::AIgnores, states, removed, Vec::new());
            return Ok(Outcome::Retry);
        }

        let xstar = a0 & btop;
        let in_b = t.in_b.clone();
        let ex = self.ex;
        let fixed = self.paths_to_exits(comp, inc, |g| !in_b[ex.owner(g).unwrap()], |l| has(xstar, l))?;
        let states = fixed.iter().map(|e| e.0).collect();
        self.record(TransformationKind::AChooses, states, Vec::new(), fixed);
        Ok(Outcome::Done)
    }
}
