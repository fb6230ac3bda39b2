//! Preference relations over a finite outcome set.
//!
//! Relations are stored transitively closed as one bit row per outcome, so
//! every pair query is a single mask test. Outcome sets are limited to 64
//! elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type OutcomeId = usize;
pub type PlayerId = usize;

/// Bit set over outcome ids.
pub type OutcomeMask = u64;

pub const MAX_OUTCOMES: usize = 64;

pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

/// Declared outcomes. The order only matters for tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeSet {
    names: Vec<String>,
}

impl OutcomeSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::input("outcome set is empty"));
        }
        if names.len() > MAX_OUTCOMES {
            return Err(Error::input(format!("at most {MAX_OUTCOMES} outcomes are supported")));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::input(format!("duplicate outcome `{n}`")));
            }
        }
        Ok(OutcomeSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: OutcomeId) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<OutcomeId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn full_mask(&self) -> OutcomeMask {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn mask_names(&self, mask: OutcomeMask) -> Vec<String> {
        bits(mask).map(|i| self.names[i].clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    Linear,
    StrictWeak,
    Partial,
}

/// A binary relation `x ≺ y` over `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    rows: Vec<u64>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        Relation { size, rows: vec![0; size] }
    }

    /// Builds the relation from raw pairs without closing it.
    pub fn from_pairs(size: usize, pairs: &[(OutcomeId, OutcomeId)]) -> Self {
        let mut r = Relation::empty(size);
        for &(x, y) in pairs {
            r.rows[x] |= bit(y);
        }
        r
    }

    /// Strict linear order listed from worst to best.
    pub fn chain(size: usize, ascending: &[OutcomeId]) -> Self {
        let mut r = Relation::empty(size);
        for (i, &x) in ascending.iter().enumerate() {
            for &y in &ascending[i + 1..] {
                r.rows[x] |= bit(y);
            }
        }
        r
    }

    /// Strict weak order from indifference levels listed from worst to best.
    pub fn levels(size: usize, ascending: &[Vec<OutcomeId>]) -> Self {
        let mut r = Relation::empty(size);
        for (i, lo) in ascending.iter().enumerate() {
            for hi in &ascending[i + 1..] {
                for &x in lo {
                    for &y in hi {
                        r.rows[x] |= bit(y);
                    }
                }
            }
        }
        r
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn lt(&self, x: OutcomeId, y: OutcomeId) -> bool {
        self.rows[x] & bit(y) != 0
    }

    /// Outcomes strictly above `x`.
    #[inline]
    pub fn above(&self, x: OutcomeId) -> OutcomeMask {
        self.rows[x]
    }

    /// Outcomes strictly below `x`.
    pub fn below(&self, x: OutcomeId) -> OutcomeMask {
        (0..self.size).filter(|&y| self.lt(y, x)).fold(0, |m, y| m | bit(y))
    }

    pub fn insert(&mut self, x: OutcomeId, y: OutcomeId) {
        self.rows[x] |= bit(y);
    }

    pub fn pairs(&self) -> Vec<(OutcomeId, OutcomeId)> {
        let mut out = Vec::new();
        for x in 0..self.size {
            for y in bits(self.rows[x]) {
                out.push((x, y));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn transitive_closure(&self) -> Self {
        let mut rows = self.rows.clone();
        for k in 0..self.size {
            for x in 0..self.size {
                if rows[x] & bit(k) != 0 {
                    rows[x] |= rows[k];
                }
            }
        }
        Relation { size: self.size, rows }
    }

    pub fn inverse(&self) -> Self {
        let mut r = Relation::empty(self.size);
        for (x, y) in self.pairs() {
            r.rows[y] |= bit(x);
        }
        r
    }

    pub fn union(&self, other: &Relation) -> Self {
        Relation {
            size: self.size,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &Relation) -> Self {
        Relation {
            size: self.size,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn contains(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| b & !a == 0)
    }

    /// Neither `x ≺ y` nor `y ≺ x`.
    pub fn incomparable(&self, x: OutcomeId, y: OutcomeId) -> bool {
        !self.lt(x, y) && !self.lt(y, x)
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.size).all(|x| !self.lt(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.size).all(|x| bits(self.rows[x]).all(|y| self.rows[y] & !self.rows[x] == 0))
    }

    /// Elements of `within` with nothing of `within` above them.
    pub fn maximal(&self, within: OutcomeMask) -> OutcomeMask {
        bits(within).filter(|&x| self.rows[x] & within == 0).fold(0, |m, x| m | bit(x))
    }

    /// Elements of `within` with nothing of `within` below them.
    pub fn minimal(&self, within: OutcomeMask) -> OutcomeMask {
        bits(within)
            .filter(|&x| bits(within).all(|y| !self.lt(y, x)))
            .fold(0, |m, x| m | bit(x))
    }
}

/// A validated, transitively closed preference relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceRelation {
    pub kind: RelationKind,
    pub rel: Relation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Irreflexivity,
    Totality,
    NegativeTransitivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Validation {
    Ok,
    Violation { axiom: Axiom, witness: Vec<OutcomeId> },
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        matches!(self, Validation::Ok)
    }
}

/// Checks the raw pairs against the axioms of `kind`.
///
/// Transitivity is never reported: the relation is closed first, and a pair
/// `(x, y), (y, x)` surfaces as an irreflexivity violation of the closure.
pub fn validate_relation(
    pairs: &[(OutcomeId, OutcomeId)],
    kind: RelationKind,
    outcomes: &OutcomeSet,
) -> Result<Validation> {
    let n = outcomes.len();
    if let Some(&(x, y)) = pairs.iter().find(|(x, y)| *x >= n || *y >= n) {
        return Err(Error::input(format!("unknown outcome index in pair ({x}, {y})")));
    }
    let raw = Relation::from_pairs(n, pairs);
    let closed = raw.transitive_closure();
    Ok(validate_closed(&raw, &closed, kind))
}

fn validate_closed(raw: &Relation, closed: &Relation, kind: RelationKind) -> Validation {
    let n = closed.size();
    if let Some(x) = (0..n).find(|&x| closed.lt(x, x)) {
        // Find a raw pair on the offending cycle for a readable witness.
        let y = bits(raw.above(x))
            .find(|&y| y == x || closed.lt(y, x))
            .unwrap_or(x);
        return Validation::Violation { axiom: Axiom::Irreflexivity, witness: vec![x, y] };
    }
    match kind {
        RelationKind::Partial => Validation::Ok,
        RelationKind::StrictWeak => match negative_transitivity_witness(closed) {
            Some(w) => Validation::Violation { axiom: Axiom::NegativeTransitivity, witness: w },
            None => Validation::Ok,
        },
        RelationKind::Linear => {
            for x in 0..n {
                for y in x + 1..n {
                    if closed.incomparable(x, y) {
                        return Validation::Violation { axiom: Axiom::Totality, witness: vec![x, y] };
                    }
                }
            }
            Validation::Ok
        }
    }
}

/// Triple `(x, y, z)` with `¬x≺y`, `¬y≺z` but `x≺z`.
fn negative_transitivity_witness(rel: &Relation) -> Option<Vec<OutcomeId>> {
    let n = rel.size();
    for x in 0..n {
        for z in bits(rel.above(x)) {
            for y in 0..n {
                if !rel.lt(x, y) && !rel.lt(y, z) {
                    return Some(vec![x, y, z]);
                }
            }
        }
    }
    None
}

/// Alternative strict-weak test: incomparability is an equivalence relation.
pub fn incomparability_is_equivalence(rel: &Relation) -> bool {
    let n = rel.size();
    for x in 0..n {
        for y in 0..n {
            if !rel.incomparable(x, y) {
                continue;
            }
            for z in 0..n {
                if rel.incomparable(y, z) && !rel.incomparable(x, z) {
                    return false;
                }
            }
        }
    }
    true
}

impl PreferenceRelation {
    /// Closes `pairs` and checks the axioms of `kind`.
    pub fn new(pairs: &[(OutcomeId, OutcomeId)], kind: RelationKind, outcomes: &OutcomeSet) -> Result<Self> {
        match validate_relation(pairs, kind, outcomes)? {
            Validation::Ok => Ok(PreferenceRelation {
                kind,
                rel: Relation::from_pairs(outcomes.len(), pairs).transitive_closure(),
            }),
            Validation::Violation { axiom, witness } => Err(Error::input(format!(
                "relation violates {axiom:?}; witness {:?}",
                witness.iter().map(|&o| outcomes.name(o)).collect::<Vec<_>>()
            ))),
        }
    }

    /// Wraps an already closed relation, classifying it by the strongest kind it satisfies.
    pub fn classify(rel: Relation) -> Result<Self> {
        let closed = rel.transitive_closure();
        if closed != rel || !rel.is_irreflexive() {
            return Err(Error::input("relation is not a strict partial order"));
        }
        let kind = [RelationKind::Linear, RelationKind::StrictWeak]
            .into_iter()
            .find(|&k| validate_closed(&rel, &rel, k).is_ok())
            .unwrap_or(RelationKind::Partial);
        Ok(PreferenceRelation { kind, rel })
    }
}

/// One relation per player over a shared outcome set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    pub players: Vec<String>,
    pub outcomes: OutcomeSet,
    pub relations: Vec<PreferenceRelation>,
}

impl PreferenceProfile {
    pub fn new(players: Vec<String>, outcomes: OutcomeSet, relations: Vec<PreferenceRelation>) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::input("player list is empty"));
        }
        if players.len() != relations.len() {
            return Err(Error::input("every player needs exactly one preference relation"));
        }
        for (i, p) in players.iter().enumerate() {
            if players[..i].contains(p) {
                return Err(Error::input(format!("duplicate player `{p}`")));
            }
        }
        if relations.iter().any(|r| r.rel.size() != outcomes.len()) {
            return Err(Error::input("relation size does not match the outcome set"));
        }
        Ok(PreferenceProfile { players, outcomes, relations })
    }

    /// Builds a profile from strict linear orders listed worst to best.
    pub fn linear(players: &[&str], outcomes: &[&str], chains: &[&[&str]]) -> Result<Self> {
        let set = OutcomeSet::new(outcomes.iter().copied())?;
        let rels = chains
            .iter()
            .map(|c| {
                let ids = c
                    .iter()
                    .map(|n| set.id(n).ok_or_else(|| Error::input(format!("unknown outcome `{n}`"))))
                    .collect::<Result<Vec<_>>>()?;
                PreferenceRelation::new(&Relation::chain(set.len(), &ids).pairs(), RelationKind::Linear, &set)
            })
            .collect::<Result<Vec<_>>>()?;
        PreferenceProfile::new(players.iter().map(|s| s.to_string()).collect(), set, rels)
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    #[inline]
    pub fn prefers(&self, player: PlayerId, worse: OutcomeId, better: OutcomeId) -> bool {
        self.relations[player].rel.lt(worse, better)
    }

    pub fn all_kind(&self, kind: RelationKind) -> bool {
        self.relations.iter().all(|r| match kind {
            RelationKind::Linear => r.kind == RelationKind::Linear,
            RelationKind::StrictWeak => r.kind != RelationKind::Partial,
            RelationKind::Partial => true,
        })
    }

    pub fn rel(&self, player: PlayerId) -> &Relation {
        &self.relations[player].rel
    }
}

/// Players `(a, b)` and outcomes `(x, y, z)` with `z ≺a y ≺a x` and `x ≺b z ≺b y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeKillerWitness {
    pub a: PlayerId,
    pub b: PlayerId,
    pub x: OutcomeId,
    pub y: OutcomeId,
    pub z: OutcomeId,
}

impl SpeKillerWitness {
    pub fn holds(&self, rel_a: &Relation, rel_b: &Relation) -> bool {
        let SpeKillerWitness { x, y, z, .. } = *self;
        rel_a.lt(z, y) && rel_a.lt(y, x) && rel_b.lt(x, z) && rel_b.lt(z, y)
    }

    pub fn describe(&self, profile: &PreferenceProfile) -> String {
        let o = |i| profile.outcomes.name(i);
        let p = |i: PlayerId| profile.players[i].as_str();
        format!(
            "{z} <{a} {y} <{a} {x} and {x} <{b} {z} <{b} {y}",
            a = p(self.a),
            b = p(self.b),
            x = o(self.x),
            y = o(self.y),
            z = o(self.z)
        )
    }
}

impl fmt::Display for SpeKillerWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "players ({}, {}), outcomes ({}, {}, {})", self.a, self.b, self.x, self.y, self.z)
    }
}

/// Killer search over one pair of relations.
pub fn killer_between(rel_a: &Relation, rel_b: &Relation) -> Option<(OutcomeId, OutcomeId, OutcomeId)> {
    let n = rel_a.size();
    for x in 0..n {
        for y in 0..n {
            if !rel_a.lt(y, x) {
                continue;
            }
            for z in 0..n {
                if rel_a.lt(z, y) && rel_b.lt(x, z) && rel_b.lt(z, y) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// First killer in declared player/outcome order, by plain scan.
pub fn find_spe_killer(profile: &PreferenceProfile) -> Option<SpeKillerWitness> {
    let k = profile.player_count();
    for a in 0..k {
        for b in 0..k {
            if let Some((x, y, z)) = killer_between(profile.rel(a), profile.rel(b)) {
                return Some(SpeKillerWitness { a, b, x, y, z });
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Same,
    Inverse,
}

/// Ordered blocks (worst first) with per-player orientation relative to player 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalPartition {
    pub blocks: Vec<Vec<OutcomeId>>,
    /// `orientation[player][block]`.
    pub orientation: Vec<Vec<Orientation>>,
}

impl IntervalPartition {
    pub fn block_of(&self, o: OutcomeId) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&o))
    }

    pub fn block_mask(&self, i: usize) -> OutcomeMask {
        self.blocks[i].iter().fold(0, |m, &o| m | bit(o))
    }
}

/// Groups outcomes into the classes of `x ∼ y ⟺ ∃a,b. x ≤a y ≤b x`.
pub fn interval_partition(profile: &PreferenceProfile) -> Result<IntervalPartition> {
    if !profile.all_kind(RelationKind::Linear) {
        return Err(Error::Precondition("interval partition needs linear preferences".into()));
    }
    if let Some(w) = find_spe_killer(profile) {
        return Err(Error::Killer(w));
    }
    let n = profile.outcomes.len();
    let k = profile.player_count();
    let le = |p: PlayerId, x: OutcomeId, y: OutcomeId| x == y || profile.prefers(p, x, y);
    let mut class: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        c[x] = r;
        r
    }
    for x in 0..n {
        for y in x + 1..n {
            let related = (0..k).any(|a| (0..k).any(|b| le(a, x, y) && le(b, y, x)));
            if related {
                let (rx, ry) = (find(&mut class, x), find(&mut class, y));
                class[rx.max(ry)] = rx.min(ry);
            }
        }
    }
    let mut blocks: Vec<Vec<OutcomeId>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for x in 0..n {
        let r = find(&mut class, x);
        match roots.iter().position(|&q| q == r) {
            Some(i) => blocks[i].push(x),
            None => {
                roots.push(r);
                blocks.push(vec![x]);
            }
        }
    }
    let reference = profile.rel(0);
    blocks.sort_by(|p, q| {
        if reference.lt(p[0], q[0]) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let orientation = (0..k)
        .map(|p| {
            blocks
                .iter()
                .map(|blk| {
                    let inverse = blk.iter().any(|&x| {
                        blk.iter().any(|&y| reference.lt(x, y) && profile.prefers(p, y, x))
                    });
                    if inverse {
                        Orientation::Inverse
                    } else {
                        Orientation::Same
                    }
                })
                .collect()
        })
        .collect();
    Ok(IntervalPartition { blocks, orientation })
}

/// Checks the block-ordering and same-or-inverse conditions, including the declared flags.
pub fn check_partition(profile: &PreferenceProfile, partition: &IntervalPartition) -> bool {
    let n = profile.outcomes.len();
    let k = profile.player_count();
    let mut seen = 0u64;
    for blk in &partition.blocks {
        for &o in blk {
            if o >= n || seen & bit(o) != 0 {
                return false;
            }
            seen |= bit(o);
        }
    }
    if seen != profile.outcomes.full_mask() || partition.orientation.len() != k {
        return false;
    }
    for (i, lo) in partition.blocks.iter().enumerate() {
        for hi in &partition.blocks[i + 1..] {
            for p in 0..k {
                if !lo.iter().all(|&x| hi.iter().all(|&y| profile.prefers(p, x, y))) {
                    return false;
                }
            }
        }
    }
    let reference = profile.rel(0);
    for (bi, blk) in partition.blocks.iter().enumerate() {
        for p in 0..k {
            let Some(&flag) = partition.orientation[p].get(bi) else {
                return false;
            };
            for &x in blk {
                for &y in blk {
                    let expected = match flag {
                        Orientation::Same => reference.lt(x, y),
                        Orientation::Inverse => reference.lt(y, x),
                    };
                    if profile.prefers(p, x, y) != expected {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Smallest set of `within` closed upwards under `≺a ∪ ≺b`, containing `seed`.
fn up_closure(rel_a: &Relation, rel_b: &Relation, within: OutcomeMask, seed: OutcomeId) -> OutcomeMask {
    let mut set = bit(seed);
    let mut frontier = vec![seed];
    while let Some(x) = frontier.pop() {
        let next = (rel_a.above(x) | rel_b.above(x)) & within & !set;
        set |= next;
        frontier.extend(bits(next));
    }
    set
}

/// Split of `within` into an upper part no player ranks below the lower part,
/// with the smallest upper part. Ties go to the set listed first in outcome order.
pub fn two_block_split(
    rel_a: &Relation,
    rel_b: &Relation,
    within: OutcomeMask,
) -> Option<(OutcomeMask, OutcomeMask)> {
    bits(within)
        .map(|x| up_closure(rel_a, rel_b, within, x))
        .filter(|&u| u != within)
        .min_by(|&u, &v| {
            u.count_ones()
                .cmp(&v.count_ones())
                .then_with(|| bits(u).collect::<Vec<_>>().cmp(&bits(v).collect::<Vec<_>>()))
        })
        .map(|u| (u, within & !u))
}

/// Ordered blocks of `within`, worst first, obtained by repeatedly peeling the minimal upper block.
pub fn suitability_blocks(rel_a: &Relation, rel_b: &Relation, within: OutcomeMask) -> Vec<OutcomeMask> {
    let mut top_down = Vec::new();
    let mut rest = within;
    while rest != 0 {
        match two_block_split(rel_a, rel_b, rest) {
            Some((u, l)) => {
                top_down.push(u);
                rest = l;
            }
            None => {
                top_down.push(rest);
                rest = 0;
            }
        }
    }
    top_down.reverse();
    top_down
}

/// Linear order `<` (worst first) with `≺a ⊆ <` and `≺b ⊆ <⁻¹`, restricted to `within`.
pub fn antagonistic_extension(
    rel_a: &Relation,
    rel_b: &Relation,
    within: OutcomeMask,
) -> Result<Vec<OutcomeId>> {
    for x in bits(within) {
        let common = rel_a.above(x) & rel_b.above(x) & within;
        if common != 0 {
            let y = common.trailing_zeros();
            return Err(Error::Precondition(format!("relations share the pair ({x}, {y})")));
        }
    }
    let mut rest = within;
    let mut top_down = Vec::new();
    while rest != 0 {
        let candidates = rel_b.minimal(rel_a.maximal(rest));
        let Some(x) = bits(candidates).next() else {
            return Err(Error::Precondition("relations are not strict partial orders".into()));
        };
        top_down.push(x);
        rest &= !bit(x);
    }
    top_down.reverse();
    let order = Relation::chain(rel_a.size(), &top_down);
    let mask_rel = |r: &Relation| {
        let mut m = Relation::empty(r.size());
        for (x, y) in r.pairs() {
            if within & bit(x) != 0 && within & bit(y) != 0 {
                m.insert(x, y);
            }
        }
        m
    };
    if !order.contains(&mask_rel(rel_a)) || !order.inverse().contains(&mask_rel(rel_b)) {
        return Err(Error::Precondition("no antagonistic extension: inputs are not strict weak orders".into()));
    }
    Ok(top_down)
}

/// Outcomes of `subset` that no player can improve on without hurting another.
pub fn pareto_optimal(subset: OutcomeMask, profile: &PreferenceProfile) -> OutcomeMask {
    let k = profile.player_count();
    bits(subset)
        .filter(|&x| {
            bits(subset).all(|y| {
                (0..k).all(|a| !profile.prefers(a, x, y) || (0..k).any(|b| profile.prefers(b, y, x)))
            })
        })
        .fold(0, |m, x| m | bit(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> OutcomeSet {
        OutcomeSet::new(names.iter().copied()).unwrap()
    }

    fn ids(s: &OutcomeSet, names: &[&str]) -> Vec<OutcomeId> {
        names.iter().map(|n| s.id(n).unwrap()).collect()
    }

    #[test]
    fn validate_two_element_linear() {
        let s = set(&["x", "y"]);
        assert_eq!(validate_relation(&[(0, 1)], RelationKind::Linear, &s).unwrap(), Validation::Ok);
    }

    #[test]
    fn validate_cycle_is_irreflexivity_violation() {
        let s = set(&["x", "y"]);
        let v = validate_relation(&[(0, 1), (1, 0)], RelationKind::Partial, &s).unwrap();
        assert_eq!(v, Validation::Violation { axiom: Axiom::Irreflexivity, witness: vec![0, 1] });
    }

    #[test]
    fn validate_chain_as_strict_weak() {
        let s = set(&["x", "y", "z", "t"]);
        let c = ids(&s, &["y", "z", "x", "t"]);
        let pairs = vec![(c[0], c[1]), (c[1], c[2]), (c[2], c[3])];
        assert!(validate_relation(&pairs, RelationKind::StrictWeak, &s).unwrap().is_ok());
        let r = PreferenceRelation::new(&pairs, RelationKind::StrictWeak, &s).unwrap();
        assert_eq!(r.rel.len(), 6);
    }

    #[test]
    fn validate_rejects_unknown_outcome() {
        let s = set(&["x"]);
        assert!(matches!(validate_relation(&[(0, 3)], RelationKind::Partial, &s), Err(Error::Input(_))));
    }

    #[test]
    fn validate_non_total_and_non_weak() {
        let s = set(&["x", "y", "z"]);
        let v = validate_relation(&[(0, 1)], RelationKind::Linear, &s).unwrap();
        assert!(matches!(v, Validation::Violation { axiom: Axiom::Totality, .. }));
        // x < y only, z incomparable to both: not negatively transitive
        let v = validate_relation(&[(0, 1)], RelationKind::StrictWeak, &s).unwrap();
        assert!(matches!(v, Validation::Violation { axiom: Axiom::NegativeTransitivity, .. }));
    }

    #[test]
    fn killer_motivating_example() {
        let p = PreferenceProfile::linear(&["a", "b"], &["x", "y", "z"], &[&["z", "y", "x"], &["x", "z", "y"]])
            .unwrap();
        let w = find_spe_killer(&p).unwrap();
        assert_eq!(w, SpeKillerWitness { a: 0, b: 1, x: 0, y: 1, z: 2 });
        assert!(w.holds(p.rel(0), p.rel(1)));
    }

    #[test]
    fn killer_absent_for_identical_orders() {
        let p = PreferenceProfile::linear(&["a", "b"], &["x", "y", "z"], &[&["z", "y", "x"], &["z", "y", "x"]])
            .unwrap();
        assert_eq!(find_spe_killer(&p), None);
    }

    #[test]
    fn killer_absent_in_three_player_weak_orders() {
        let s = set(&["x", "y", "z", "t"]);
        let [x, y, z, t] = [0, 1, 2, 3];
        let a = PreferenceRelation::classify(Relation::levels(4, &[vec![z], vec![y, t], vec![x]])).unwrap();
        let b = PreferenceRelation::classify(Relation::levels(4, &[vec![t], vec![z, x], vec![y]])).unwrap();
        let c = PreferenceRelation::classify(Relation::levels(4, &[vec![x], vec![t], vec![y, z]])).unwrap();
        assert_eq!(a.kind, RelationKind::StrictWeak);
        let p = PreferenceProfile::new(vec!["a".into(), "b".into(), "c".into()], s, vec![a, b, c]).unwrap();
        assert_eq!(find_spe_killer(&p), None);
    }

    #[test]
    fn partition_two_antagonists() {
        let p = PreferenceProfile::linear(&["a", "b"], &["x", "y"], &[&["x", "y"], &["y", "x"]]).unwrap();
        let part = interval_partition(&p).unwrap();
        assert_eq!(part.blocks, vec![vec![0, 1]]);
        assert_eq!(part.orientation[1], vec![Orientation::Inverse]);
        assert!(check_partition(&p, &part));
    }

    #[test]
    fn partition_identical_orders() {
        let p = PreferenceProfile::linear(&["a", "b"], &["x", "y"], &[&["x", "y"], &["x", "y"]]).unwrap();
        let part = interval_partition(&p).unwrap();
        assert_eq!(part.blocks, vec![vec![0], vec![1]]);
    }

    #[test]
    fn partition_mixed() {
        let p = PreferenceProfile::linear(&["a", "b"], &["x", "y", "z"], &[&["x", "y", "z"], &["y", "x", "z"]])
            .unwrap();
        let part = interval_partition(&p).unwrap();
        assert_eq!(part.blocks, vec![vec![0, 1], vec![2]]);
        assert_eq!(part.orientation[1][0], Orientation::Inverse);
        assert!(check_partition(&p, &part));
    }

    #[test]
    fn partition_rejects_killer() {
        let p = PreferenceProfile::linear(&["a", "b"], &["x", "y", "z"], &[&["z", "y", "x"], &["x", "z", "y"]])
            .unwrap();
        assert!(matches!(interval_partition(&p), Err(Error::Killer(_))));
    }

    #[test]
    fn check_partition_failures() {
        let p = PreferenceProfile::linear(&["a"], &["x", "y"], &[&["y", "x"]]).unwrap();
        let bad = IntervalPartition { blocks: vec![vec![0], vec![1]], orientation: vec![vec![Orientation::Same; 2]] };
        assert!(!check_partition(&p, &bad));
        let q = PreferenceProfile::linear(&["a", "b"], &["x", "y"], &[&["x", "y"], &["x", "y"]]).unwrap();
        let wrong_flag = IntervalPartition {
            blocks: vec![vec![0, 1]],
            orientation: vec![vec![Orientation::Same], vec![Orientation::Inverse]],
        };
        assert!(!check_partition(&q, &wrong_flag));
    }

    #[test]
    fn split_common_top_and_antagonists() {
        let a = Relation::chain(2, &[1, 0]);
        assert_eq!(two_block_split(&a, &a, 0b11), Some((0b01, 0b10)));
        let b = a.inverse();
        assert_eq!(two_block_split(&a, &b, 0b11), None);
    }

    #[test]
    fn split_matches_enumeration() {
        let [x, y, z, t] = [0, 1, 2, 3];
        let a = Relation::levels(4, &[vec![t, z], vec![x, y]]);
        let b = Relation::chain(4, &[y, z, x, t]);
        // brute force over every proper non-empty upper part
        let mut best: Option<u64> = None;
        for u in 1u64..15 {
            let l = 15 & !u;
            let ok = bits(u).all(|p| bits(l).all(|q| !a.lt(p, q) && !b.lt(p, q)));
            if ok && best.map_or(true, |bu| u.count_ones() < bu.count_ones()) {
                best = Some(u);
            }
        }
        assert_eq!(two_block_split(&a, &b, 15).map(|s| s.0), best);
    }

    #[test]
    fn extension_examples() {
        let a = Relation::from_pairs(2, &[(0, 1)]);
        let b = Relation::from_pairs(2, &[(1, 0)]);
        assert_eq!(antagonistic_extension(&a, &b, 0b11).unwrap(), vec![0, 1]);
        let [x, y, z] = [0, 1, 2];
        let b = Relation::chain(3, &[y, z, x]);
        assert_eq!(antagonistic_extension(&Relation::empty(3), &b, 0b111).unwrap(), vec![x, z, y]);
        let err = antagonistic_extension(&a, &a, 0b11).unwrap_err();
        assert!(matches!(err, Error::Precondition(m) if m.contains("(0, 1)")));
    }

    #[test]
    fn pareto_examples() {
        let opp = PreferenceProfile::linear(&["a", "b"], &["x", "y"], &[&["y", "x"], &["x", "y"]]).unwrap();
        assert_eq!(pareto_optimal(0b11, &opp), 0b11);
        let same = PreferenceProfile::linear(&["a", "b"], &["x", "y"], &[&["y", "x"], &["y", "x"]]).unwrap();
        assert_eq!(pareto_optimal(0b11, &same), 0b01);
        let killer = PreferenceProfile::linear(&["a", "b"], &["x", "y", "z"], &[&["z", "y", "x"], &["x", "z", "y"]])
            .unwrap();
        assert_eq!(pareto_optimal(0b111, &killer), 0b011);
    }
}
