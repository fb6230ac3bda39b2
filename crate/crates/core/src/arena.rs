//! Finite game arenas and their visited-set expansion.
//!
//! An [`Arena`] is a rooted graph with owned inner vertices and terminal
//! vertices carrying outcomes. An infinite play gets its outcome from an
//! ordered decision list evaluated on the set of vertices the play visits.
//! [`ExpandedArena`] pairs every vertex with the set of vertices visited so
//! far; two histories reaching the same pair have identical subgames, and
//! every infinite play eventually cycles inside one visited set (a layer).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prefs::{bit, bits, OutcomeId, OutcomeMask, PlayerId};

pub type VertexId = usize;
pub type StateId = usize;
pub type LayerId = usize;

/// Bit set over vertex ids.
pub type VertexMask = u64;

pub const MAX_VERTICES: usize = 64;
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Visited(VertexId),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn eval(&self, visited: VertexMask) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Visited(v) => visited & bit(*v) != 0,
            Formula::Not(f) => !f.eval(visited),
            Formula::And(fs) => fs.iter().all(|f| f.eval(visited)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(visited)),
        }
    }

    /// Parses `visited(v)`, `not`, `and`, `or`, `true`, `false` and parentheses.
    /// `!`, `&&` and `||` are accepted as synonyms.
    pub fn parse(text: &str, vertex: impl Fn(&str) -> Option<VertexId>) -> Result<Formula> {
        let tokens = tokenize(text)?;
        let mut p = FormulaParser { tokens, pos: 0, vertex: &vertex };
        let f = p.or()?;
        if p.pos != p.tokens.len() {
            return Err(Error::input(format!("trailing input in formula `{text}`")));
        }
        Ok(f)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, names }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    names: &'a [String],
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names;
        let sub = |g| FormulaDisplay { formula: g, names };
        match self.formula {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Visited(v) => write!(f, "visited({})", self.names[*v]),
            Formula::Not(g) => write!(f, "not ({})", sub(g)),
            Formula::And(gs) | Formula::Or(gs) => {
                let op = if matches!(self.formula, Formula::And(_)) { " and " } else { " or " };
                if gs.is_empty() {
                    return write!(f, "{}", if op == " and " { "true" } else { "false" });
                }
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    write!(f, "({})", sub(g))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Token::LParen);
            }
            ')' => {
                chars.next();
                out.push(Token::RParen);
            }
            '!' => {
                chars.next();
                out.push(Token::Ident("not".into()));
            }
            '&' | '|' => {
                chars.next();
                if chars.peek().map(|&(_, d)| d) != Some(c) {
                    return Err(Error::input(format!("expected `{c}{c}` at offset {i}")));
                }
                chars.next();
                out.push(Token::Ident(if c == '&' { "and" } else { "or" }.into()));
            }
            c if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' => {
                let mut s = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '-' || d == '.' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(s));
            }
            _ => return Err(Error::input(format!("unexpected `{c}` at offset {i} in formula"))),
        }
    }
    Ok(out)
}

struct FormulaParser<'a, F> {
    tokens: Vec<Token>,
    pos: usize,
    vertex: &'a F,
}

impl<F: Fn(&str) -> Option<VertexId>> FormulaParser<'_, F> {
    fn peek_ident(&self, word: &str) -> bool {
        matches!(self.tokens.get(self.pos), Some(Token::Ident(s)) if s == word)
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        if self.tokens.get(self.pos) == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::input(format!("expected {t:?} in formula")))
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut parts = vec![self.and()?];
        while self.peek_ident("or") {
            self.pos += 1;
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn and(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.peek_ident("and") {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::LParen) => {
                self.pos += 1;
                let f = self.or()?;
                self.expect(Token::RParen)?;
                Ok(f)
            }
            Some(Token::Ident(w)) => {
                self.pos += 1;
                match w.as_str() {
                    "not" => Ok(Formula::Not(Box::new(self.unary()?))),
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    "visited" => {
                        self.expect(Token::LParen)?;
                        let name = match self.tokens.get(self.pos) {
                            Some(Token::Ident(n)) => n.clone(),
                            _ => return Err(Error::input("expected a vertex name after `visited(`")),
                        };
                        self.pos += 1;
                        self.expect(Token::RParen)?;
                        let v = (self.vertex)(&name)
                            .ok_or_else(|| Error::input(format!("formula references unknown vertex `{name}`")))?;
                        Ok(Formula::Visited(v))
                    }
                    other => Err(Error::input(format!("unexpected `{other}` in formula"))),
                }
            }
            _ => Err(Error::input("unexpected end of formula")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub when: Formula,
    pub outcome: OutcomeId,
}

/// First matching entry wins; `default` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfiniteRule {
    pub rules: Vec<Rule>,
    pub default: OutcomeId,
}

impl InfiniteRule {
    pub fn constant(outcome: OutcomeId) -> Self {
        InfiniteRule { rules: Vec::new(), default: outcome }
    }

    pub fn outcome(&self, visited: VertexMask) -> OutcomeId {
        self.rules.iter().find(|r| r.when.eval(visited)).map_or(self.default, |r| r.outcome)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    /// `None` exactly at terminals.
    pub owner: Option<PlayerId>,
    pub successors: Vec<VertexId>,
    /// `Some` exactly at terminals.
    pub outcome: Option<OutcomeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    vertices: Vec<Vertex>,
    root: VertexId,
    infinite_rule: InfiniteRule,
    players: usize,
    outcomes: usize,
}

impl Arena {
    pub fn new(
        vertices: Vec<Vertex>,
        root: VertexId,
        infinite_rule: InfiniteRule,
        players: usize,
        outcomes: usize,
    ) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::input("arena has no vertices"));
        }
        if n > MAX_VERTICES {
            return Err(Error::input(format!("at most {MAX_VERTICES} vertices are supported")));
        }
        if root >= n {
            return Err(Error::input("root is not a vertex"));
        }
        for v in &vertices {
            if v.successors.iter().any(|&w| w >= n) {
                return Err(Error::input(format!("vertex `{}` has an edge to an unknown vertex", v.name)));
            }
            match (v.successors.is_empty(), v.owner, v.outcome) {
                (true, None, Some(o)) if o < outcomes => {}
                (true, _, None) => {
                    return Err(Error::input(format!(
                        "vertex `{}` has no successors and no outcome (arena must be pruned)",
                        v.name
                    )))
                }
                (true, _, Some(o)) if o >= outcomes => {
                    return Err(Error::input(format!("vertex `{}` has an unknown outcome", v.name)))
                }
                (true, Some(_), _) => {
                    return Err(Error::input(format!("terminal vertex `{}` must not have an owner", v.name)))
                }
                (false, Some(p), None) if p < players => {}
                (false, _, Some(_)) => {
                    return Err(Error::input(format!("vertex `{}` has successors and an outcome", v.name)))
                }
                (false, _, _) => {
                    return Err(Error::input(format!("vertex `{}` needs a known owner", v.name)))
                }
                _ => unreachable!(),
            }
        }
        let rule_outcomes = infinite_rule.rules.iter().map(|r| r.outcome).chain([infinite_rule.default]);
        if rule_outcomes.clone().any(|o| o >= outcomes) {
            return Err(Error::input("infinite-play rule uses an unknown outcome"));
        }
        let arena = Arena { vertices, root, infinite_rule, players, outcomes };
        let reach = arena.reachable_vertices();
        if let Some(v) = (0..n).find(|&v| reach & bit(v) == 0) {
            return Err(Error::input(format!("vertex `{}` is not reachable from the root", arena.vertices[v].name)));
        }
        Ok(arena)
    }

    fn reachable_vertices(&self) -> VertexMask {
        let mut seen = bit(self.root);
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            for &w in &self.vertices[v].successors {
                if seen & bit(w) == 0 {
                    seen |= bit(w);
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn infinite_rule(&self) -> &InfiniteRule {
        &self.infinite_rule
    }

    pub fn player_count(&self) -> usize {
        self.players
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn vertex_names(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.name.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State {
    pub vertex: VertexId,
    pub visited: VertexMask,
}

/// Reachable `(vertex, visited)` pairs of an arena.
#[derive(Debug, Clone)]
pub struct ExpandedArena {
    arena: Arena,
    states: Vec<State>,
    succ: Vec<Vec<StateId>>,
    pred: Vec<Vec<StateId>>,
    layer: Vec<LayerId>,
    layers: Vec<VertexMask>,
    layer_outcome: Vec<OutcomeId>,
    cyclic: Vec<bool>,
    achievable: Vec<OutcomeMask>,
    index: HashMap<State, StateId>,
    /// Memory component of each state when built as a product with a memory structure.
    memory: Option<Vec<usize>>,
}

/// Expands with the default state cap.
pub fn expand(arena: &Arena) -> Result<ExpandedArena> {
    expand_with_cap(arena, DEFAULT_STATE_CAP)
}

pub fn expand_with_cap(arena: &Arena, cap: usize) -> Result<ExpandedArena> {
    let root = State { vertex: arena.root, visited: bit(arena.root) };
    let mut states = vec![root];
    let mut index = HashMap::from([(root, 0)]);
    let mut succ: Vec<Vec<StateId>> = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let s = states[next];
        let mut out = Vec::with_capacity(arena.vertices[s.vertex].successors.len());
        for &w in &arena.vertices[s.vertex].successors {
            let t = State { vertex: w, visited: s.visited | bit(w) };
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    if states.len() >= cap {
                        return Err(Error::Resource(format!("expansion exceeds the cap of {cap} states")));
                    }
                    states.push(t);
                    index.insert(t, states.len() - 1);
                    states.len() - 1
                }
            };
            if !out.contains(&id) {
                out.push(id);
            }
        }
        succ.push(out);
        next += 1;
    }
    Ok(assemble(arena.clone(), states, succ, index, None))
}

fn assemble(
    arena: Arena,
    states: Vec<State>,
    succ: Vec<Vec<StateId>>,
    index: HashMap<State, StateId>,
    memory: Option<Vec<usize>>,
) -> ExpandedArena {
    let mut pred = vec![Vec::new(); states.len()];
    for (s, out) in succ.iter().enumerate() {
        for &t in out {
            pred[t].push(s);
        }
    }
    let mut layers: Vec<VertexMask> = Vec::new();
    let mut layer = Vec::with_capacity(states.len());
    for s in &states {
        let id = match layers.iter().position(|&l| l == s.visited) {
            Some(i) => i,
            None => {
                layers.push(s.visited);
                layers.len() - 1
            }
        };
        layer.push(id);
    }
    let layer_outcome = layers.iter().map(|&l| arena.infinite_rule.outcome(l)).collect();
    let mut ex = ExpandedArena {
        arena,
        states,
        succ,
        pred,
        layer,
        layers,
        layer_outcome,
        cyclic: Vec::new(),
        achievable: Vec::new(),
        index,
        memory,
    };
    let sccs = ex.sccs();
    ex.cyclic = vec![false; ex.states.len()];
    for comp in &sccs {
        let is_cycle = comp.len() > 1 || ex.succ[comp[0]].contains(&comp[0]);
        for &s in comp {
            ex.cyclic[s] = is_cycle;
        }
    }
    // Tarjan emits components sinks first.
    ex.achievable = vec![0; ex.states.len()];
    for comp in &sccs {
        let mut m = 0;
        for &s in comp {
            if let Some(o) = ex.terminal_outcome(s) {
                m |= bit(o);
            }
            if ex.cyclic[s] {
                m |= bit(ex.layer_outcome[ex.layer[s]]);
            }
            for &t in &ex.succ[s] {
                m |= ex.achievable[t];
            }
        }
        for &s in comp {
            ex.achievable[s] = m;
        }
    }
    ex
}

/// Strongly connected components of the subgraph on `keep`, sinks first.
pub(crate) fn tarjan(n: usize, succ: impl Fn(usize) -> Vec<usize>, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for start in 0..n {
        if index[start] != usize::MAX || !keep(start) {
            continue;
        }
        // iterative DFS: (node, successor list, next position)
        let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[start] = counter;
        low[start] = counter;
        counter += 1;
        stack.push(start);
        on_stack[start] = true;
        call.push((start, succ(start).into_iter().filter(|&w| keep(w)).collect(), 0));
        while let Some((v, ws, pos)) = call.last_mut() {
            let v = *v;
            if *pos < ws.len() {
                let w = ws[*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, succ(w).into_iter().filter(|&u| keep(u)).collect(), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    low[*parent] = low[*parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

impl ExpandedArena {
    fn sccs(&self) -> Vec<Vec<StateId>> {
        tarjan(self.states.len(), |s| self.succ[s].clone(), |_| true)
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn root(&self) -> StateId {
        0
    }

    pub fn state(&self, s: StateId) -> State {
        self.states[s]
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state_id(&self, state: State) -> Option<StateId> {
        self.index.get(&state).copied()
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.succ[s]
    }

    pub fn predecessors(&self, s: StateId) -> &[StateId] {
        &self.pred[s]
    }

    pub fn owner(&self, s: StateId) -> Option<PlayerId> {
        self.arena.vertices[self.states[s].vertex].owner
    }

    pub fn is_terminal(&self, s: StateId) -> bool {
        self.succ[s].is_empty()
    }

    pub fn terminal_outcome(&self, s: StateId) -> Option<OutcomeId> {
        self.arena.vertices[self.states[s].vertex].outcome
    }

    pub fn layer(&self, s: StateId) -> LayerId {
        self.layer[s]
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_set(&self, l: LayerId) -> VertexMask {
        self.layers[l]
    }

    /// Outcome of any play that stays in layer `l` forever.
    pub fn layer_outcome(&self, l: LayerId) -> OutcomeId {
        self.layer_outcome[l]
    }

    /// Whether the state lies on a cycle (necessarily inside its layer).
    pub fn is_cyclic(&self, s: StateId) -> bool {
        self.cyclic[s]
    }

    /// Layers with larger visited sets first, so every layer precedes the layers that reach it.
    pub fn layers_bottom_up(&self) -> Vec<LayerId> {
        let mut ls: Vec<LayerId> = (0..self.layers.len()).collect();
        ls.sort_by_key(|&l| (std::cmp::Reverse(self.layers[l].count_ones()), l));
        ls
    }

    pub fn layer_states(&self, l: LayerId) -> Vec<StateId> {
        (0..self.len()).filter(|&s| self.layer[s] == l).collect()
    }

    pub fn state_label(&self, s: StateId) -> String {
        let st = self.states[s];
        let names: Vec<&str> = bits(st.visited).map(|v| self.arena.vertices[v].name.as_str()).collect();
        let base = format!("{}@{{{}}}", self.arena.vertices[st.vertex].name, names.join(","));
        match &self.memory {
            Some(m) => format!("{base}#{}", m[s]),
            None => base,
        }
    }

    pub fn memory(&self, s: StateId) -> Option<usize> {
        self.memory.as_ref().map(|m| m[s])
    }

    /// Product with a memory structure that starts in memory 0 and moves to
    /// `update(memory, from, to)` along each edge. Only states reachable from
    /// the root are kept; each keeps the layer of its base state.
    pub fn with_memory(&self, update: impl Fn(usize, StateId, StateId) -> usize, cap: usize) -> Result<ExpandedArena> {
        let mut pairs = vec![(self.root(), 0usize)];
        let mut ids = HashMap::from([((self.root(), 0usize), 0usize)]);
        let mut succ: Vec<Vec<StateId>> = Vec::new();
        let mut next = 0;
        while next < pairs.len() {
            let (s, m) = pairs[next];
            let mut out = Vec::with_capacity(self.succ[s].len());
            for &t in &self.succ[s] {
                let key = (t, update(m, s, t));
                let id = match ids.get(&key) {
                    Some(&id) => id,
                    None => {
                        if pairs.len() >= cap {
                            return Err(Error::Resource(format!("product exceeds the cap of {cap} states")));
                        }
                        pairs.push(key);
                        ids.insert(key, pairs.len() - 1);
                        pairs.len() - 1
                    }
                };
                if !out.contains(&id) {
                    out.push(id);
                }
            }
            succ.push(out);
            next += 1;
        }
        let states: Vec<State> = pairs.iter().map(|&(s, _)| self.states[s]).collect();
        let mut index = HashMap::new();
        for (i, st) in states.iter().enumerate() {
            index.entry(*st).or_insert(i);
        }
        let memory = pairs.iter().map(|&(_, m)| m).collect();
        Ok(assemble(self.arena.clone(), states, succ, index, Some(memory)))
    }

    pub fn achievable(&self, s: StateId) -> OutcomeMask {
        self.achievable[s]
    }

    /// States reachable from `from` (inclusive).
    pub fn reachable_from(&self, from: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(s) = stack.pop() {
            for &t in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }
}

/// Outcomes of plays of the unfolding starting at `state`.
pub fn achievable_outcomes(expanded: &ExpandedArena, state: StateId) -> OutcomeMask {
    expanded.achievable(state)
}

/// Shortest states whose subgame only yields `x`.
pub fn pseudo_leaves(expanded: &ExpandedArena, x: OutcomeId) -> Vec<StateId> {
    (0..expanded.len())
        .filter(|&s| {
            expanded.achievable(s) == bit(x)
                && (s == expanded.root() || expanded.predecessors(s).iter().any(|&p| expanded.achievable(p) != bit(x)))
        })
        .collect()
}

/// States owned by `player` with an `x`-pseudo-leaf among their successors.
pub fn stop_nodes(expanded: &ExpandedArena, player: PlayerId, x: OutcomeId) -> Vec<StateId> {
    (0..expanded.len())
        .filter(|&s| {
            expanded.owner(s) == Some(player)
                && expanded.achievable(s) != bit(x)
                && expanded.successors(s).iter().any(|&t| expanded.achievable(t) == bit(x))
        })
        .collect()
}

fn is_singleton(m: OutcomeMask) -> bool {
    m.count_ones() == 1
}

/// Every infinite play that avoids pseudo-leaves has outcome `y`.
pub fn is_weak_stop(expanded: &ExpandedArena, y: OutcomeId) -> bool {
    (0..expanded.len()).all(|s| {
        !expanded.is_cyclic(s)
            || is_singleton(expanded.achievable(s))
            || expanded.layer_outcome(expanded.layer(s)) == y
    })
}

/// Weak-stop, and every state off the `y`-plays lies below a pseudo-leaf.
pub fn is_strong_stop(expanded: &ExpandedArena, y: OutcomeId) -> bool {
    is_weak_stop(expanded, y)
        && (0..expanded.len()).all(|s| {
            let a = expanded.achievable(s);
            a & bit(y) != 0 || is_singleton(a)
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    Open,
    Closed,
    OpenAndClosed,
    OpenUnionClosed,
    Higher,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeClassification {
    pub outcome: OutcomeId,
    pub class: Topology,
    /// Pseudo-leaves whose subtrees cover the open part.
    pub open_witness: Vec<StateId>,
    /// States from which the outcome is still achievable; the closed part never leaves them.
    pub safety_region: Vec<StateId>,
}

/// Topological class of the set of plays with outcome `x`.
pub fn classify_outcome_set(expanded: &ExpandedArena, x: OutcomeId) -> OutcomeClassification {
    let n = expanded.len();
    let leaf = |s: StateId| expanded.achievable(s) == bit(x);
    let open = (0..n).all(|s| !expanded.is_cyclic(s) || expanded.layer_outcome(expanded.layer(s)) != x || leaf(s));
    let closed = (0..n).all(|s| {
        !expanded.is_cyclic(s)
            || expanded.layer_outcome(expanded.layer(s)) == x
            || expanded.achievable(s) & bit(x) == 0
    });
    let class = match (open, closed) {
        (true, true) => Topology::OpenAndClosed,
        (true, false) => Topology::Open,
        (false, true) => Topology::Closed,
        (false, false) => {
            if residual_closed(expanded, x) {
                Topology::OpenUnionClosed
            } else {
                Topology::Higher
            }
        }
    };
    OutcomeClassification {
        outcome: x,
        class,
        open_witness: pseudo_leaves(expanded, x),
        safety_region: (0..n).filter(|&s| expanded.achievable(s) & bit(x) != 0).collect(),
    }
}

/// After deleting the `x`-pseudo-leaf subtrees, do the remaining `x`-plays form a closed set?
fn residual_closed(expanded: &ExpandedArena, x: OutcomeId) -> bool {
    let n = expanded.len();
    let keep = |s: StateId| expanded.achievable(s) != bit(x);
    let sccs = tarjan(n, |s| expanded.successors(s).to_vec(), keep);
    let mut reach_x = vec![false; n];
    for comp in &sccs {
        let cyclic = comp.len() > 1 || expanded.successors(comp[0]).contains(&comp[0]);
        let stay_x = cyclic && expanded.layer_outcome(expanded.layer(comp[0])) == x;
        let r = stay_x || comp.iter().any(|&s| expanded.successors(s).iter().any(|&t| keep(t) && reach_x[t]));
        for &s in comp {
            reach_x[s] = r;
        }
        if cyclic && !stay_x && r {
            return false;
        }
    }
    true
}

pub fn classify_all(expanded: &ExpandedArena) -> Vec<OutcomeClassification> {
    (0..expanded.arena().outcome_count()).map(|x| classify_outcome_set(expanded, x)).collect()
}

impl ExpandedArena {
    /// The state graph as an arena of its own, one vertex per state.
    ///
    /// Infinite plays are mapped to the outcome of the largest layer they
    /// visit, which is the layer they end in.
    pub fn to_arena(&self) -> Result<Arena> {
        if self.len() > MAX_VERTICES {
            return Err(Error::Resource(format!("state graph has more than {MAX_VERTICES} states")));
        }
        let vertices = (0..self.len())
            .map(|s| Vertex {
                name: format!("s{s}"),
                owner: self.owner(s),
                successors: self.succ[s].clone(),
                outcome: self.terminal_outcome(s),
            })
            .collect();
        let mut rules: Vec<Rule> = self
            .layers_bottom_up()
            .into_iter()
            .map(|l| Rule {
                when: Formula::Or(self.layer_states(l).into_iter().map(Formula::Visited).collect()),
                outcome: self.layer_outcome[l],
            })
            .collect();
        let default = rules.pop().map_or(0, |r| r.outcome);
        Arena::new(vertices, 0, InfiniteRule { rules, default }, self.arena.players, self.arena.outcomes)
    }
}
