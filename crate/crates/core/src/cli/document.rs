//! JSON documents for games, profiles and command results.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arena::{Arena, ExpandedArena, Formula, InfiniteRule, OutcomeClassification, Rule, Topology, Vertex};
use crate::error::{Error, Result};
use crate::oracle::{CorpusResult, SearchReport};
use crate::prefs::{Orientation, OutcomeId, OutcomeSet, PreferenceProfile, PreferenceRelation, RelationKind, SpeKillerWitness};
use crate::profiles::StrategyProfile;
use crate::solver::{SolveCertificate, SolveMode, TransformationRecord};

/// Identifiers starting with this prefix are reserved for internal outcomes.
pub const RESERVED_PREFIX: &str = "__collapsed_";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub players: Vec<String>,
    pub outcomes: Vec<String>,
    pub preferences: Vec<PreferenceEntry>,
    pub arena: ArenaEntry,
    pub infinite_rule: RuleEntry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferenceEntry {
    pub player: String,
    pub kind: RelationKind,
    /// Pairs written `"x < y"`.
    pub pairs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaEntry {
    pub root: String,
    pub vertices: Vec<VertexEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub successors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleEntry {
    #[serde(default)]
    pub rules: Vec<RuleLine>,
    pub default: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleLine {
    pub when: String,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

pub fn schema_error(errors: &[SchemaError]) -> Error {
    Error::Input(errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))
}

/// A validated game.
#[derive(Debug, Clone)]
pub struct Game {
    pub arena: Arena,
    pub prefs: PreferenceProfile,
}

/// First line mentioning `"name"`, as a best-effort position.
fn line_of(text: &str, name: &str) -> Option<usize> {
    let quoted = format!("\"{name}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

/// Parses and validates a game document.
pub fn parse(text: &str) -> std::result::Result<(GameDocument, Game), Vec<SchemaError>> {
    let doc: GameDocument = serde_json::from_str(text)
        .map_err(|e| vec![SchemaError { line: Some(e.line()), message: e.to_string() }])?;
    let game = doc.build(text)?;
    Ok((doc, game))
}

pub fn parse_game(text: &str) -> Result<Game> {
    parse(text).map(|(_, g)| g).map_err(|e| schema_error(&e))
}

impl GameDocument {
    fn build(&self, text: &str) -> std::result::Result<Game, Vec<SchemaError>> {
        let mut errors = Vec::new();
        let mut err = |name: Option<&str>, message: String| {
            errors.push(SchemaError { line: name.and_then(|n| line_of(text, n)), message });
        };
        if self.players.is_empty() {
            err(Some("players"), "player list is empty".into());
        }
        let all_names = self
            .players
            .iter()
            .chain(&self.outcomes)
            .chain(self.arena.vertices.iter().map(|v| &v.name));
        for name in all_names {
            if name.starts_with(RESERVED_PREFIX) {
                err(Some(name), format!("identifier `{name}` uses the reserved prefix `{RESERVED_PREFIX}`"));
            }
        }
        let index = |list: &[String]| -> HashMap<String, usize> {
            list.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect()
        };
        let players = index(&self.players);
        let outcomes = index(&self.outcomes);
        let vertex_names: Vec<String> = self.arena.vertices.iter().map(|v| v.name.clone()).collect();
        let vertices = index(&vertex_names);
        for (list, what) in [(&self.players, "player"), (&self.outcomes, "outcome"), (&vertex_names, "vertex")] {
            if index(list).len() != list.len() {
                err(Some(what), format!("duplicate {what} name"));
            }
        }
        let outcome_of = |name: &str, err: &mut dyn FnMut(Option<&str>, String)| -> Option<OutcomeId> {
            let o = outcomes.get(name).copied();
            if o.is_none() {
                err(Some(name), format!("unknown outcome `{name}`"));
            }
            o
        };

        let mut arena_vertices = Vec::new();
        for v in &self.arena.vertices {
            let owner = match &v.owner {
                Some(p) => match players.get(p) {
                    Some(&i) => Some(i),
                    None => {
                        err(Some(p), format!("vertex `{}` has unknown owner `{p}`", v.name));
                        None
                    }
                },
                None => None,
            };
            let mut successors = Vec::new();
            for w in &v.successors {
                match vertices.get(w) {
                    Some(&i) => successors.push(i),
                    None => err(Some(w), format!("edge from `{}` to unknown vertex `{w}`", v.name)),
                }
            }
            let outcome = v.outcome.as_deref().and_then(|o| outcome_of(o, &mut err));
            arena_vertices.push(Vertex { name: v.name.clone(), owner, successors, outcome });
        }
        let root = vertices.get(&self.arena.root).copied();
        if root.is_none() {
            err(Some(&self.arena.root), format!("unknown root vertex `{}`", self.arena.root));
        }
        let mut rules = Vec::new();
        for r in &self.infinite_rule.rules {
            let when = Formula::parse(&r.when, |n| vertices.get(n).copied());
            let outcome = outcome_of(&r.outcome, &mut err);
            match (when, outcome) {
                (Ok(when), Some(outcome)) => rules.push(Rule { when, outcome }),
                (Err(e), _) => err(Some(&r.when), e.to_string()),
                _ => {}
            }
        }
        let default = outcome_of(&self.infinite_rule.default, &mut err);

        let mut relations: Vec<Option<PreferenceRelation>> = vec![None; self.players.len()];
        let set = OutcomeSet::new(self.outcomes.clone());
        if let Err(e) = &set {
            err(Some("outcomes"), e.to_string());
        }
        for entry in &self.preferences {
            let Some(&p) = players.get(&entry.player) else {
                err(Some(&entry.player), format!("preference for unknown player `{}`", entry.player));
                continue;
            };
            if relations[p].is_some() {
                err(Some(&entry.player), format!("second preference for player `{}`", entry.player));
                continue;
            }
            let mut pairs = Vec::new();
            for pair in &entry.pairs {
                let parts: Vec<&str> = pair.split('<').map(str::trim).collect();
                if parts.len() != 2 {
                    err(Some(pair), format!("pair `{pair}` is not of the form `x < y`"));
                    continue;
                }
                if let (Some(x), Some(y)) = (outcome_of(parts[0], &mut err), outcome_of(parts[1], &mut err)) {
                    pairs.push((x, y));
                }
            }
            if let Ok(set) = &set {
                match PreferenceRelation::new(&pairs, entry.kind, set) {
                    Ok(r) => relations[p] = Some(r),
                    Err(e) => err(Some(&entry.player), format!("preference of `{}`: {e}", entry.player)),
                }
            }
        }
        for (p, r) in relations.iter().enumerate() {
            if r.is_none() && !self.preferences.iter().any(|e| e.player == self.players[p]) {
                err(Some(&self.players[p]), format!("no preference for player `{}`", self.players[p]));
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        let (Some(root), Some(default), Ok(set)) = (root, default, set) else {
            unreachable!("errors were recorded above");
        };
        let rule = InfiniteRule { rules, default };
        let arena = Arena::new(arena_vertices, root, rule, self.players.len(), self.outcomes.len())
            .map_err(|e| vec![SchemaError { line: None, message: e.to_string() }])?;
        let relations = relations.into_iter().map(|r| r.expect("checked above")).collect();
        let prefs = PreferenceProfile::new(self.players.clone(), set, relations)
            .map_err(|e| vec![SchemaError { line: None, message: e.to_string() }])?;
        Ok(Game { arena, prefs })
    }

    pub fn from_game(arena: &Arena, prefs: &PreferenceProfile) -> Self {
        let o = |i: OutcomeId| prefs.outcomes.name(i).to_string();
        let v = |i: usize| arena.vertex(i).name.clone();
        let names = arena.vertex_names();
        GameDocument {
            players: prefs.players.clone(),
            outcomes: prefs.outcomes.names().to_vec(),
            preferences: prefs
                .relations
                .iter()
                .enumerate()
                .map(|(p, r)| PreferenceEntry {
                    player: prefs.players[p].clone(),
                    kind: r.kind,
                    pairs: r.rel.pairs().into_iter().map(|(x, y)| format!("{} < {}", o(x), o(y))).collect(),
                })
                .collect(),
            arena: ArenaEntry {
                root: v(arena.root()),
                vertices: arena
                    .vertices()
                    .iter()
                    .map(|vx| VertexEntry {
                        name: vx.name.clone(),
                        owner: vx.owner.map(|p| prefs.players[p].clone()),
                        successors: vx.successors.iter().map(|&w| v(w)).collect(),
                        outcome: vx.outcome.map(o),
                    })
                    .collect(),
            },
            infinite_rule: RuleEntry {
                rules: arena
                    .infinite_rule()
                    .rules
                    .iter()
                    .map(|r| RuleLine { when: r.when.display(&names).to_string(), outcome: o(r.outcome) })
                    .collect(),
                default: o(arena.infinite_rule().default),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceEntry {
    pub state: String,
    pub next: String,
}

/// A positional profile keyed by state labels such as `a1@{a1,b1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub choices: Vec<ChoiceEntry>,
}

impl ProfileDocument {
    pub fn from_profile(expanded: &ExpandedArena, profile: &StrategyProfile) -> Self {
        let choices = (0..expanded.len())
            .filter_map(|s| {
                profile.choice[s].map(|t| ChoiceEntry { state: expanded.state_label(s), next: expanded.state_label(t) })
            })
            .collect();
        ProfileDocument { choices }
    }

    pub fn to_profile(&self, expanded: &ExpandedArena) -> Result<StrategyProfile> {
        let ids: HashMap<String, usize> = (0..expanded.len()).map(|s| (expanded.state_label(s), s)).collect();
        let lookup = |label: &str| {
            ids.get(label).copied().ok_or_else(|| Error::input(format!("unknown state `{label}` in profile")))
        };
        let mut choice = vec![None; expanded.len()];
        for c in &self.choices {
            let s = lookup(&c.state)?;
            if choice[s].is_some() {
                return Err(Error::input(format!("state `{}` has two choices", c.state)));
            }
            choice[s] = Some(lookup(&c.next)?);
        }
        StrategyProfile::new(expanded, choice)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateOutcome {
    pub state: String,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suitability: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub mode: SolveMode,
    pub root_outcome: String,
    pub profile: ProfileDocument,
    pub induced: Vec<StateOutcome>,
}

impl CertificateDocument {
    pub fn new(expanded: &ExpandedArena, prefs: &PreferenceProfile, cert: &SolveCertificate) -> Self {
        let induced = (0..expanded.len())
            .map(|s| StateOutcome {
                state: expanded.state_label(s),
                outcome: prefs.outcomes.name(cert.induced[s]).to_string(),
                suitability: cert.suitability.as_ref().map(|v| v[s]),
            })
            .collect();
        CertificateDocument {
            mode: cert.mode,
            root_outcome: prefs.outcomes.name(cert.root_outcome(expanded)).to_string(),
            profile: ProfileDocument::from_profile(expanded, &cert.profile),
            induced,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillerDocument {
    pub a: String,
    pub b: String,
    pub x: String,
    pub y: String,
    pub z: String,
    pub description: String,
}

impl KillerDocument {
    pub fn new(w: &SpeKillerWitness, prefs: &PreferenceProfile) -> Self {
        let o = |i| prefs.outcomes.name(i).to_string();
        KillerDocument {
            a: prefs.players[w.a].clone(),
            b: prefs.players[w.b].clone(),
            x: o(w.x),
            y: o(w.y),
            z: o(w.z),
            description: w.describe(prefs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDocument {
    pub blocks: Vec<Vec<String>>,
    pub orientation: Vec<Vec<Orientation>>,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub kinds: Vec<RelationKind>,
    pub killer: Option<KillerDocument>,
    pub partition: Option<PartitionDocument>,
    /// Why no partition is reported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition_note: Option<String>,
    pub po_pattern: bool,
    /// Which construction `solve` would use.
    pub solver: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationDocument {
    pub outcome: String,
    pub class: Topology,
    pub open_witness: Vec<String>,
    pub safety_region: Vec<String>,
}

impl ClassificationDocument {
    pub fn new(expanded: &ExpandedArena, prefs: &PreferenceProfile, c: &OutcomeClassification) -> Self {
        let labels = |v: &[usize]| v.iter().map(|&s| expanded.state_label(s)).collect();
        ClassificationDocument {
            outcome: prefs.outcomes.name(c.outcome).to_string(),
            class: c.class,
            open_witness: labels(&c.open_witness),
            safety_region: labels(&c.safety_region),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationDocument {
    pub state: String,
    pub player: String,
    pub induced: String,
    pub better: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    Killer(KillerDocument),
    Certificate(CertificateDocument),
    Deviation(DeviationDocument),
    Analysis(AnalysisDocument),
    Classification { outcomes: Vec<ClassificationDocument> },
    Report(SearchReport),
    Corpus { results: Vec<CorpusResult> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ok,
    Solved,
    Rejected,
    Unsupported,
    InputError,
    PreconditionFailed,
    ResourceExceeded,
    InternalError,
    Holds,
    Violated,
    Passed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub command: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TransformationRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub timing_us: u64,
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}
