//! Decision graphs: decisions, intermediates, and goals connected by tagged
//! strict or defeasible edges, with a Horn belief base that can block
//! defeasible edges.
//!
//! A node n is reachable from a node set N when, for some tag k, the sources
//! of the unblocked tag-k edges into n are exactly N, or every one of those
//! sources is itself reachable from N.  A decision meets a goal when the
//! goal is reachable from the singleton of the decision; this induces a
//! plain decision framework, and preferential decision graphs induce
//! preferential decision frameworks the same way.
//!
//! The module also compiles decision graphs to ABA: a reachability core
//! (edge/reach/unreachableSib/met rules, with defeasible edges as
//! assumptions and belief-base implications as rules) unioned with the
//! criterion components from the mapping crate.

pub mod fixtures;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use aba_engine::{AbaFramework, Rule, Sentence};
use aba_mappings::{
    dominant_component, preferred_set_component, strongly_dominant_component,
    weakly_dominant_component, FrameworkParts, MappedFramework,
};
use decision_core::{Adf, Criterion, GoalSetPreference, Pdf, PreferenceError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DgError {
    #[error("decision nodes must be nonempty")]
    EmptyDecisions,
    #[error("goal nodes must be nonempty")]
    EmptyGoals,
    #[error("node {0} declared more than once")]
    DuplicateNode(String),
    #[error("edge endpoint {0} is not a declared node")]
    UnknownNode(String),
    #[error("edge from {from} to {to} is not decision/intermediate -> intermediate/goal")]
    BadEdgeShape { from: String, to: String },
    #[error("more than one edge from {from} to {to}")]
    DuplicateEdge { from: String, to: String },
    #[error("edge tags must be at least 1")]
    ZeroTag,
    #[error("the graph has a cycle through {0}")]
    Cyclic(String),
    #[error(transparent)]
    Preference(#[from] PreferenceError),
    #[error(transparent)]
    Framework(#[from] decision_core::AdfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeKind {
    Strict,
    Defeasible,
}

/// A tagged edge.  Edges sharing a tag into the same target form a
/// conjunctive support group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
    pub tag: u32,
}

impl Edge {
    pub fn strict(from: impl Into<String>, to: impl Into<String>, tag: u32) -> Self {
        Edge { from: from.into(), to: to.into(), kind: EdgeKind::Strict, tag }
    }

    pub fn defeasible(from: impl Into<String>, to: impl Into<String>, tag: u32) -> Self {
        Edge { from: from.into(), to: to.into(), kind: EdgeKind::Defeasible, tag }
    }

    /// The `~dEdge(from,to,tag)` atom whose entailment blocks this edge.
    pub fn blocking_atom(&self) -> Sentence {
        Sentence::pred("dEdge", [&self.from, &self.to, &self.tag.to_string()]).negate()
    }
}

/// A Horn implication `body_1 ∧ ... ∧ body_n → head` (empty body = fact).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Implication {
    pub body: Vec<Sentence>,
    pub head: Sentence,
}

impl Implication {
    pub fn new(body: impl IntoIterator<Item = Sentence>, head: Sentence) -> Self {
        Implication { body: body.into_iter().collect(), head }
    }

    pub fn fact(head: Sentence) -> Self {
        Implication { body: Vec::new(), head }
    }
}

/// A propositional Horn belief base.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BeliefBase {
    pub implications: Vec<Implication>,
}

impl BeliefBase {
    pub fn new(implications: impl IntoIterator<Item = Implication>) -> Self {
        BeliefBase { implications: implications.into_iter().collect() }
    }

    /// All atoms derivable by forward chaining to a fixpoint.
    pub fn entailed_atoms(&self) -> BTreeSet<Sentence> {
        let mut derived: BTreeSet<Sentence> = BTreeSet::new();
        loop {
            let before = derived.len();
            for imp in &self.implications {
                if imp.body.iter().all(|b| derived.contains(b)) {
                    derived.insert(imp.head.clone());
                }
            }
            if derived.len() == before {
                return derived;
            }
        }
    }
}

/// True iff `atom` follows from the belief base by repeated modus ponens.
pub fn mp_entails(bb: &BeliefBase, atom: &Sentence) -> bool {
    bb.entailed_atoms().contains(atom)
}

/// A decision graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dg {
    decision_nodes: Vec<String>,
    intermediate_nodes: Vec<String>,
    goal_nodes: Vec<String>,
    edges: Vec<Edge>,
    belief_base: BeliefBase,
}

impl Dg {
    pub fn new<D, I, G>(
        decision_nodes: D,
        intermediate_nodes: I,
        goal_nodes: G,
        edges: impl IntoIterator<Item = Edge>,
        belief_base: BeliefBase,
    ) -> Result<Self, DgError>
    where
        D: IntoIterator,
        D::Item: Into<String>,
        I: IntoIterator,
        I::Item: Into<String>,
        G: IntoIterator,
        G::Item: Into<String>,
    {
        let dg = Dg {
            decision_nodes: decision_nodes.into_iter().map(Into::into).collect(),
            intermediate_nodes: intermediate_nodes.into_iter().map(Into::into).collect(),
            goal_nodes: goal_nodes.into_iter().map(Into::into).collect(),
            edges: edges.into_iter().collect(),
            belief_base,
        };
        dg.validate()?;
        Ok(dg)
    }

    fn validate(&self) -> Result<(), DgError> {
        if self.decision_nodes.is_empty() {
            return Err(DgError::EmptyDecisions);
        }
        if self.goal_nodes.is_empty() {
            return Err(DgError::EmptyGoals);
        }
        let mut seen = BTreeSet::new();
        for n in self.nodes() {
            if !seen.insert(n.clone()) {
                return Err(DgError::DuplicateNode(n.clone()));
            }
        }
        let decisions: BTreeSet<&String> = self.decision_nodes.iter().collect();
        let goals: BTreeSet<&String> = self.goal_nodes.iter().collect();
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            if e.tag == 0 {
                return Err(DgError::ZeroTag);
            }
            for endpoint in [&e.from, &e.to] {
                if !seen.contains(endpoint) {
                    return Err(DgError::UnknownNode(endpoint.clone()));
                }
            }
            if goals.contains(&e.from) || decisions.contains(&e.to) {
                return Err(DgError::BadEdgeShape { from: e.from.clone(), to: e.to.clone() });
            }
            if !pairs.insert((&e.from, &e.to)) {
                return Err(DgError::DuplicateEdge { from: e.from.clone(), to: e.to.clone() });
            }
        }
        // Cycle check by depth-first search over the edge relation.
        let mut state: BTreeMap<&String, u8> = BTreeMap::new();
        for start in self.nodes() {
            if state.contains_key(start) {
                continue;
            }
            let mut stack: Vec<(&String, bool)> = vec![(start, false)];
            while let Some((node, expanded)) = stack.pop() {
                if expanded {
                    state.insert(node, 2);
                    continue;
                }
                if state.get(node) == Some(&2) {
                    continue;
                }
                state.insert(node, 1);
                stack.push((node, true));
                for e in self.edges.iter().filter(|e| e.from == *node) {
                    match state.get(&e.to) {
                        Some(1) => return Err(DgError::Cyclic(e.to.clone())),
                        Some(2) => {}
                        _ => stack.push((&e.to, false)),
                    }
                }
            }
        }
        Ok(())
    }

    pub fn decision_nodes(&self) -> &[String] {
        &self.decision_nodes
    }

    pub fn intermediate_nodes(&self) -> &[String] {
        &self.intermediate_nodes
    }

    pub fn goal_nodes(&self) -> &[String] {
        &self.goal_nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn belief_base(&self) -> &BeliefBase {
        &self.belief_base
    }

    pub fn nodes(&self) -> impl Iterator<Item = &String> {
        self.decision_nodes
            .iter()
            .chain(&self.intermediate_nodes)
            .chain(&self.goal_nodes)
    }

    pub fn is_decision(&self, n: &str) -> bool {
        self.decision_nodes.iter().any(|d| d == n)
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges.iter().any(|e| e.from == from && e.to == to)
    }

    /// The defeasible edges whose `~dEdge` atom the belief base entails.
    pub fn blocked_edges(&self) -> Vec<&Edge> {
        let derived = self.belief_base.entailed_atoms();
        self.edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Defeasible && derived.contains(&e.blocking_atom()))
            .collect()
    }

    /// Sources of unblocked tag-`tag` edges into `to`.
    fn unblocked_sources(&self, to: &str, tag: u32) -> BTreeSet<&String> {
        let blocked: BTreeSet<(&String, &String)> =
            self.blocked_edges().iter().map(|e| (&e.from, &e.to)).collect();
        self.edges
            .iter()
            .filter(|e| e.to == to && e.tag == tag && !blocked.contains(&(&e.from, &e.to)))
            .map(|e| &e.from)
            .collect()
    }

    /// True when `n` is reachable from the node set `from`: for some tag k
    /// the nonempty set S of sources of unblocked tag-k edges into `n`
    /// either equals `from` or consists of nodes themselves reachable from
    /// `from`.
    pub fn reachable(&self, from: &BTreeSet<String>, n: &str) -> bool {
        let mut memo: BTreeMap<&str, bool> = BTreeMap::new();
        self.reachable_memo(from, n, &mut memo)
    }

    fn reachable_memo<'a>(
        &'a self,
        from: &BTreeSet<String>,
        n: &'a str,
        memo: &mut BTreeMap<&'a str, bool>,
    ) -> bool {
        if let Some(&r) = memo.get(n) {
            return r;
        }
        let tags: BTreeSet<u32> =
            self.edges.iter().filter(|e| e.to == n).map(|e| e.tag).collect();
        let mut result = false;
        for tag in tags {
            let sources = self.unblocked_sources(n, tag);
            if sources.is_empty() {
                continue;
            }
            if sources.iter().map(|s| s.as_str()).eq(from.iter().map(|s| s.as_str()))
                || sources
                    .iter()
                    .all(|m| self.reachable_memo(from, m, memo))
            {
                result = true;
                break;
            }
        }
        memo.insert(n, result);
        result
    }

    /// True when decision `d` meets goal `g`.
    pub fn meets(&self, d: &str, g: &str) -> Result<bool, DgError> {
        if !self.is_decision(d) {
            return Err(DgError::UnknownNode(d.to_string()));
        }
        if !self.goal_nodes.iter().any(|x| x == g) {
            return Err(DgError::UnknownNode(g.to_string()));
        }
        Ok(self.reachable(&BTreeSet::from([d.to_string()]), g))
    }

    /// DOT rendering: solid arrows for strict edges, dashed for defeasible,
    /// tag as edge label.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dg {\n");
        for d in &self.decision_nodes {
            let _ = writeln!(out, "  \"{d}\" [shape=box];");
        }
        for i in &self.intermediate_nodes {
            let _ = writeln!(out, "  \"{i}\" [shape=ellipse];");
        }
        for g in &self.goal_nodes {
            let _ = writeln!(out, "  \"{g}\" [shape=diamond];");
        }
        for e in &self.edges {
            let style = match e.kind {
                EdgeKind::Strict => "solid",
                EdgeKind::Defeasible => "dashed",
            };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [style={style}, label=\"{}\"];",
                e.from, e.to, e.tag
            );
        }
        out.push_str("}\n");
        out
    }
}

/// A preferential decision graph: a graph plus a preference over goal-node
/// subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdg {
    dg: Dg,
    preference: GoalSetPreference,
}

impl Pdg {
    pub fn new(dg: Dg, preference: GoalSetPreference) -> Result<Self, DgError> {
        let goals: BTreeSet<&String> = dg.goal_nodes.iter().collect();
        for s in preference.member_sets() {
            for g in &s {
                if !goals.contains(g) {
                    return Err(DgError::Preference(PreferenceError::UnknownGoal(g.clone())));
                }
            }
        }
        Ok(Pdg { dg, preference })
    }

    pub fn dg(&self) -> &Dg {
        &self.dg
    }

    pub fn preference(&self) -> &GoalSetPreference {
        &self.preference
    }
}

/// The induced plain decision framework: γ(d) = goals met by d.
pub fn dg_to_adf(dg: &Dg) -> Adf {
    let gamma: Vec<(String, Vec<String>)> = dg
        .decision_nodes()
        .iter()
        .map(|d| {
            let met: Vec<String> = dg
                .goal_nodes()
                .iter()
                .filter(|g| dg.meets(d, g).unwrap())
                .cloned()
                .collect();
            (d.clone(), met)
        })
        .collect();
    Adf::new(dg.decision_nodes().to_vec(), dg.goal_nodes().to_vec(), gamma)
        .expect("induced framework is valid")
}

/// The induced preferential decision framework.
pub fn pdg_to_pdf(pdg: &Pdg) -> Pdf {
    Pdf::new(dg_to_adf(pdg.dg()), pdg.preference().clone()).expect("goals carried over")
}

/// A graph with the same meets relation as a plain decision framework:
/// decisions and goals as nodes, one strict tag-1 edge per satisfied pair,
/// and an empty belief base.
pub fn adf_to_dg(adf: &Adf) -> Dg {
    // Each edge gets its own tag so no two edges into the same goal form a
    // conjunctive group.
    let edges: Vec<Edge> = adf
        .decisions()
        .iter()
        .flat_map(|d| adf.gamma(d).iter().map(|g| (d.clone(), g.clone())))
        .zip(1u32..)
        .map(|((d, g), tag)| Edge::strict(d, g, tag))
        .collect();
    Dg::new(
        adf.decisions().to_vec(),
        Vec::<String>::new(),
        adf.goals().to_vec(),
        edges,
        BeliefBase::default(),
    )
    .expect("induced graph is valid")
}

fn edge_atom(e: &Edge) -> Sentence {
    Sentence::pred("edge", [&e.from, &e.to, &e.tag.to_string()])
}

fn reach(n1: &str, n2: &str) -> Sentence {
    Sentence::pred("reach", [n1, n2])
}

fn unreachable_sib(n3: &str, n2: &str, tag: u32, n1: &str) -> Sentence {
    Sentence::pred("unreachableSib", [n3, n2, &tag.to_string(), n1])
}

/// Nodes reachable from `start` along edges, ignoring blocking; used to
/// restrict grounding of the transitive reach rules to live instances.
fn raw_reachable_from(dg: &Dg, start: &str) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = BTreeSet::new();
    let mut frontier = vec![start.to_string()];
    while let Some(n) = frontier.pop() {
        for e in dg.edges().iter().filter(|e| e.from == n) {
            if out.insert(e.to.clone()) {
                frontier.push(e.to.clone());
            }
        }
    }
    out
}

/// The reachability core of a decision graph as framework parts:
/// - facts `edge(n1,n2,t) <-` for strict edges, and for each defeasible
///   edge an assumption `dEdge(n1,n2,t)` (contrary `~dEdge(n1,n2,t)`) with
///   the bridging rule `edge(n1,n2,t) <- dEdge(n1,n2,t)`,
/// - belief-base implications as rules,
/// - `reach(n1,n2) <- edge(n1,n2,t)` per edge,
/// - `reach(n1,n2) <- reach(n1,n3), edge(n3,n2,t), ~unreachableSib(n3,n2,t,n1)`
///   for decisions n1 and non-decision n3 with an edge to n2, where n3 lies
///   on some path from n1 and (n1,n2) is not itself an edge,
/// - `unreachableSib(n3,n2,t,n1) <- edge(n4,n2,t), ~reach(n1,n4)` for each
///   `~unreachableSib` assumption used above and each sibling edge n4 ≠ n3
///   sharing the target and tag,
/// - `met(d,g) <- reach(d,g)` for every decision/goal pair, with the
///   `notMet(d,g)` assumptions (contrary `met(d,g)`).
pub fn core_dg_parts(dg: &Dg) -> FrameworkParts {
    let mut parts = FrameworkParts::default();
    for e in dg.edges() {
        match e.kind {
            EdgeKind::Strict => parts.rules.push(Rule::fact(edge_atom(e))),
            EdgeKind::Defeasible => {
                let d_edge = Sentence {
                    negated: false,
                    functor: "dEdge".into(),
                    args: edge_atom(e).args,
                };
                parts.rules.push(Rule::new(edge_atom(e), [d_edge.clone()]));
                parts
                    .contraries
                    .entry(d_edge.clone())
                    .or_default()
                    .insert(d_edge.negate());
                parts.assumptions.push(d_edge);
            }
        }
    }
    for imp in &dg.belief_base().implications {
        parts.rules.push(Rule::new(imp.head.clone(), imp.body.iter().cloned()));
    }
    for e in dg.edges() {
        parts.rules.push(Rule::new(reach(&e.from, &e.to), [edge_atom(e)]));
    }
    // Transitive reach rules, grounded for decision sources over nodes on
    // some path from them, and the sibling rules for the assumptions those
    // instances use.
    let mut sib_assumptions: BTreeSet<(String, String, u32, String)> = BTreeSet::new();
    for n1 in dg.decision_nodes() {
        let live = raw_reachable_from(dg, n1);
        for e in dg.edges() {
            let (n3, n2) = (&e.from, &e.to);
            if dg.is_decision(n3) || !live.contains(n3) {
                continue;
            }
            if n1 == n2 || n1 == n3 || dg.has_edge(n1, n2) {
                continue;
            }
            parts.rules.push(Rule::new(
                reach(n1, n2),
                [
                    reach(n1, n3),
                    edge_atom(e),
                    unreachable_sib(n3, n2, e.tag, n1).negate(),
                ],
            ));
            sib_assumptions.insert((n3.clone(), n2.clone(), e.tag, n1.clone()));
        }
    }
    let mut reach_assumptions: BTreeSet<(String, String)> = BTreeSet::new();
    for (n3, n2, tag, n1) in &sib_assumptions {
        for e in dg.edges() {
            if e.to == *n2 && e.tag == *tag && e.from != *n3 {
                parts.rules.push(Rule::new(
                    unreachable_sib(n3, n2, *tag, n1),
                    [edge_atom(e), reach(n1, &e.from).negate()],
                ));
                reach_assumptions.insert((n1.clone(), e.from.clone()));
            }
        }
        let a = unreachable_sib(n3, n2, *tag, n1).negate();
        parts
            .contraries
            .entry(a.clone())
            .or_default()
            .insert(unreachable_sib(n3, n2, *tag, n1));
        parts.assumptions.push(a);
    }
    for (n1, n4) in &reach_assumptions {
        let a = reach(n1, n4).negate();
        parts.contraries.entry(a.clone()).or_default().insert(reach(n1, n4));
        parts.assumptions.push(a);
    }
    for d in dg.decision_nodes() {
        for g in dg.goal_nodes() {
            parts.rules.push(Rule::new(
                Sentence::pred("met", [d, g]),
                [reach(d, g)],
            ));
            let a = Sentence::pred("notMet", [d, g]);
            parts
                .contraries
                .entry(a.clone())
                .or_default()
                .insert(Sentence::pred("met", [d, g]));
            parts.assumptions.push(a);
        }
    }
    parts
}

/// The reachability core as a standalone framework.
pub fn core_dg_aba(dg: &Dg) -> AbaFramework {
    core_dg_parts(dg).into_framework()
}

/// The strongly dominant, dominant, or weakly dominant framework drawn from
/// a decision graph: the reachability core unioned with the criterion
/// component over the graph's decisions and goals.
pub fn criterion_aba_dg(dg: &Dg, criterion: Criterion) -> MappedFramework {
    let component = match criterion {
        Criterion::StronglyDominant => {
            strongly_dominant_component(dg.decision_nodes(), dg.goal_nodes())
        }
        Criterion::Dominant => dominant_component(dg.decision_nodes(), dg.goal_nodes()),
        Criterion::WeaklyDominant => {
            weakly_dominant_component(dg.decision_nodes(), dg.goal_nodes())
        }
        Criterion::PreferredSet => {
            panic!("preferred-set frameworks require a preferential graph")
        }
    };
    MappedFramework::assemble(core_dg_parts(dg), component, criterion, dg.decision_nodes())
}

/// The preferred-set framework drawn from a preferential decision graph.
pub fn preferred_set_aba_pdg(pdg: &Pdg) -> MappedFramework {
    let component = preferred_set_component(pdg.dg().decision_nodes(), pdg.preference());
    MappedFramework::assemble(
        core_dg_parts(pdg.dg()),
        component,
        Criterion::PreferredSet,
        pdg.dg().decision_nodes(),
    )
}
