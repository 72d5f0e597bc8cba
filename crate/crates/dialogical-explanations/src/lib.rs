//! Dialogical explanations for decision criteria.
//!
//! A dialogical explanation is a dispute tree over the compiled
//! argumentation framework for a decision problem: a least-assumption
//! admissible tree when the decision satisfies the criterion, and a
//! best-effort maximal tree when it does not. Flat explanations can be
//! extracted from these trees; tabular sources (decision frameworks with or
//! without preferences) use leaf-scan rules, while graph sources use
//! ancestor conditions relative to opponent leaves, because met-arguments
//! drawn from a graph carry attackable support and may sit above further
//! dialogue. Trees can be rendered as a dialogue transcript, as DOT, or as
//! JSON.

use std::collections::BTreeSet;

use aba_engine::Sentence;
use decision_core::{Adf, Criterion, GoalSet, Pdf};
use decision_graphs::{criterion_aba_dg, dg_to_adf, pdg_to_pdf, preferred_set_aba_pdg, Dg, Pdg};
use dispute_trees::{
    admissible_dispute_tree, admissible_dispute_trees, best_effort_tree, greedy_deviation_trees,
    greedy_maximal_tree, least_assumption_tree, maximal_dispute_trees, DisputeError, DisputeNode,
    DisputeTree, Player,
};
use flat_explanations::{check_flat_explanation, Context, FlatExplanation};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExplainError {
    #[error("unknown decision {0:?}")]
    UnknownDecision(String),
    #[error("the preferred-set criterion needs a preference-equipped source")]
    NeedsPreference,
    #[error(transparent)]
    Dispute(#[from] DisputeError),
}

/// The decision problem an explanation is drawn from.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Adf(&'a Adf),
    Pdf(&'a Pdf),
    Dg(&'a Dg),
    Pdg(&'a Pdg),
}

/// Whether the problem is tabular (goals-met table) or graph-structured.
/// The two kinds use different flat-explanation extraction rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Tabular,
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfies,
    Violates,
}

/// A criterion verdict for one decision together with the dispute tree
/// justifying it.
#[derive(Debug, Clone)]
pub struct DialogicalExplanation {
    pub decision: String,
    pub criterion: Criterion,
    pub verdict: Verdict,
    pub tree: DisputeTree,
    pub source_kind: SourceKind,
}

/// Explains whether `d` satisfies `criterion` in `source`: compiles the
/// matching argumentation framework, decides the query argument, and
/// returns a least-assumption tree (satisfied) or a best-effort tree
/// (violated).
pub fn dialogical_explain(
    source: Source,
    criterion: Criterion,
    d: &str,
) -> Result<DialogicalExplanation, ExplainError> {
    let (mapped, source_kind, ctx) = match (source, criterion) {
        (Source::Adf(_), Criterion::PreferredSet) | (Source::Dg(_), Criterion::PreferredSet) => {
            return Err(ExplainError::NeedsPreference)
        }
        (Source::Adf(adf), c) => (
            tabular_framework(adf, c),
            SourceKind::Tabular,
            CheckerContext::Adf(adf.clone()),
        ),
        (Source::Pdf(pdf), Criterion::PreferredSet) => (
            aba_mappings::preferred_set_aba(pdf),
            SourceKind::Tabular,
            CheckerContext::Pdf(pdf.clone()),
        ),
        (Source::Pdf(pdf), c) => (
            tabular_framework(pdf.adf(), c),
            SourceKind::Tabular,
            CheckerContext::Adf(pdf.adf().clone()),
        ),
        (Source::Dg(dg), c) => (
            criterion_aba_dg(dg, c),
            SourceKind::Graph,
            CheckerContext::Adf(dg_to_adf(dg)),
        ),
        (Source::Pdg(pdg), Criterion::PreferredSet) => (
            preferred_set_aba_pdg(pdg),
            SourceKind::Graph,
            CheckerContext::Pdf(pdg_to_pdf(pdg)),
        ),
        (Source::Pdg(pdg), c) => (
            criterion_aba_dg(pdg.dg(), c),
            SourceKind::Graph,
            CheckerContext::Adf(dg_to_adf(pdg.dg())),
        ),
    };
    let query = mapped
        .query_argument(d)
        .ok_or_else(|| ExplainError::UnknownDecision(d.to_string()))?;
    let valid = |verdict: Verdict, tree: &DisputeTree| {
        let candidate = DialogicalExplanation {
            decision: d.to_string(),
            criterion,
            verdict,
            tree: tree.clone(),
            source_kind,
        };
        check_flat_explanation(ctx.as_context(), d, &flat_from_tree(&candidate))
    };
    let (verdict, tree) = match least_assumption_tree(&mapped.framework, query) {
        Ok(tree) => (
            Verdict::Satisfies,
            satisfied_tree(&mapped.framework, query, tree, |t| {
                valid(Verdict::Satisfies, t)
            }),
        ),
        Err(DisputeError::NotAdmissible) => (
            Verdict::Violates,
            violated_tree(&mapped.framework, query, |t| valid(Verdict::Violates, t))?,
        ),
        // Enumeration can exceed its budget before minimality is settled;
        // fall back to a guided construction for whichever verdict holds.
        Err(DisputeError::ExplosionBudgetExceeded) => {
            match admissible_dispute_tree(&mapped.framework, query) {
                Some(tree) => (Verdict::Satisfies, tree),
                None => (
                    Verdict::Violates,
                    violated_tree(&mapped.framework, query, |t| valid(Verdict::Violates, t))?,
                ),
            }
        }
        Err(e) => return Err(e.into()),
    };
    Ok(DialogicalExplanation {
        decision: d.to_string(),
        criterion,
        verdict,
        tree,
        source_kind,
    })
}

/// The decision framework a candidate flat explanation is validated
/// against.
enum CheckerContext {
    Adf(Adf),
    Pdf(Pdf),
}

impl CheckerContext {
    fn as_context(&self) -> Context<'_> {
        match self {
            CheckerContext::Adf(adf) => Context::Adf(adf),
            CheckerContext::Pdf(pdf) => Context::Pdf(pdf),
        }
    }
}

/// Picks an admissible dispute tree for a satisfied query. The
/// least-assumption tree may defend with a burden-shifting move (no rival
/// meets the goal) even where a direct met-claim also succeeds; ties
/// between subset-minimal assumption sets are broken in favour of a tree
/// whose extracted flat explanation validates.
fn satisfied_tree(
    framework: &aba_engine::AbaFramework,
    query: &aba_engine::Argument,
    best: DisputeTree,
    valid: impl Fn(&DisputeTree) -> bool,
) -> DisputeTree {
    if valid(&best) {
        return best;
    }
    if let Ok(all) = admissible_dispute_trees(framework, query) {
        for t in &all {
            let minimal = !all
                .iter()
                .any(|u| u.la().is_subset(&t.la()) && u.la() != t.la());
            if minimal && valid(t) {
                return t.clone();
            }
        }
    }
    best
}

/// Picks a maximal dispute tree for a violated query. Ties between
/// subset-minimal unanswered-opponent sets are broken in favour of a tree
/// whose extracted flat explanation validates: when a proponent move can
/// answer an attack either with a doomed direct claim or by shifting the
/// burden to a rival, only the latter surfaces the rival in the tree.
fn violated_tree(
    framework: &aba_engine::AbaFramework,
    query: &aba_engine::Argument,
    valid: impl Fn(&DisputeTree) -> bool,
) -> Result<DisputeTree, DisputeError> {
    let (best, capped) = match best_effort_tree(framework, query) {
        Ok(t) => (t, false),
        // Too many maximal trees to settle minimality; take the greedy one.
        Err(DisputeError::ExplosionBudgetExceeded) => {
            (greedy_maximal_tree(framework, query)?, true)
        }
        Err(e) => return Err(e),
    };
    if valid(&best) {
        return Ok(best);
    }
    if capped {
        // Full enumeration is over budget; try trees that deviate from the
        // greedy choice at a single opponent node.
        for t in greedy_deviation_trees(framework, query, 2000)? {
            if valid(&t) {
                return Ok(t);
            }
        }
    } else if let Ok(all) = maximal_dispute_trees(framework, query) {
        for t in &all {
            let minimal = !all
                .iter()
                .any(|u| u.lo().is_subset(&t.lo()) && u.lo() != t.lo());
            if minimal && valid(t) {
                return Ok(t.clone());
            }
        }
    }
    Ok(best)
}

fn tabular_framework(adf: &Adf, criterion: Criterion) -> aba_mappings::MappedFramework {
    match criterion {
        Criterion::StronglyDominant => aba_mappings::strongly_dominant_aba(adf),
        Criterion::Dominant => aba_mappings::dominant_aba(adf),
        Criterion::WeaklyDominant => aba_mappings::weakly_dominant_aba(adf),
        Criterion::PreferredSet => unreachable!("preferred-set needs a preference"),
    }
}

/// One tree node with its path, for pattern scans.
struct Scan<'a> {
    tree: &'a DisputeTree,
    nodes: Vec<(Vec<usize>, &'a DisputeNode)>,
    o_leaves: Vec<Vec<usize>>,
}

impl<'a> Scan<'a> {
    fn new(tree: &'a DisputeTree) -> Self {
        let nodes: Vec<(Vec<usize>, &'a DisputeNode)> = tree
            .paths()
            .into_iter()
            .map(|p| {
                let n = tree.node(&p).expect("path from the tree");
                (p, n)
            })
            .collect();
        let o_leaves = nodes
            .iter()
            .filter(|(_, n)| n.player == Player::Opponent && n.children.is_empty())
            .map(|(p, _)| p.clone())
            .collect();
        Scan {
            tree,
            nodes,
            o_leaves,
        }
    }

    fn has_o_leaf_below(&self, path: &[usize]) -> bool {
        self.o_leaves
            .iter()
            .any(|leaf| self.tree.is_ancestor(path, leaf))
    }

    /// A proponent claim holds when nothing below it remains unanswered.
    fn survives(&self, path: &[usize]) -> bool {
        !self.has_o_leaf_below(path)
    }

    /// An opponent attack stands when it is a leaf or shelters one.
    fn stands(&self, path: &[usize], node: &DisputeNode) -> bool {
        node.children.is_empty() || self.has_o_leaf_below(path)
    }
}

fn positive<'a>(s: &'a Sentence, functor: &str) -> Option<&'a [String]> {
    (!s.negated && s.functor == functor).then_some(s.args.as_slice())
}

fn support_args<'a>(
    node: &'a DisputeNode,
    functor: &'a str,
) -> impl Iterator<Item = &'a [String]> + 'a {
    node.argument
        .support
        .iter()
        .filter_map(move |s| positive(s, functor))
}

/// Decodes a goal-set name of the form `{g1,g2}` back into the set.
fn parse_set_name(name: &str) -> GoalSet {
    name.trim_start_matches('{')
        .trim_end_matches('}')
        .split(',')
        .filter(|g| !g.is_empty())
        .map(str::to_string)
        .collect()
}

/// Extracts the flat explanation encoded in an explanation's dispute tree.
///
/// Tabular sources scan leaves; graph sources use the ancestor conditions:
/// a proponent pattern counts when no opponent leaf lies below it, an
/// opponent pattern when it is a leaf or an opponent leaf lies below it.
pub fn flat_from_tree(expl: &DialogicalExplanation) -> FlatExplanation {
    let scan = Scan::new(&expl.tree);
    let d = expl.decision.as_str();
    let graph = expl.source_kind == SourceKind::Graph;
    // Pattern gates shared by the tabular (leaf-scan) and graph (ancestor)
    // readings of every clause.
    let p_counts = |path: &[usize], node: &DisputeNode, leaves_only: bool| {
        node.player == Player::Proponent
            && if graph {
                scan.survives(path)
            } else {
                !leaves_only || node.children.is_empty()
            }
    };
    let o_counts = |path: &[usize], node: &DisputeNode| {
        node.player == Player::Opponent
            && if graph {
                scan.stands(path, node)
            } else {
                node.children.is_empty()
            }
    };
    match (expl.criterion, expl.verdict) {
        (Criterion::StronglyDominant, Verdict::Satisfies) => {
            let mut goals = GoalSet::new();
            for (path, node) in &scan.nodes {
                if let Some([d0, g]) = positive(&node.argument.claim, "met") {
                    if d0 == d && p_counts(path, node, true) {
                        goals.insert(g.clone());
                    }
                }
            }
            FlatExplanation::SDPos(goals)
        }
        (Criterion::StronglyDominant, Verdict::Violates) => {
            let mut goals = GoalSet::new();
            for (path, node) in &scan.nodes {
                if positive(&node.argument.claim, "notSDom").map(|a| &a[0]) == Some(&d.to_string())
                    && o_counts(path, node)
                {
                    for [d0, g] in support_args(node, "notMet").map(two) {
                        if d0 == d {
                            goals.insert(g.clone());
                        }
                    }
                }
            }
            FlatExplanation::SDNeg(goals)
        }
        (Criterion::Dominant, Verdict::Satisfies) => {
            let mut met_goals = GoalSet::new();
            let mut unmet_goals = GoalSet::new();
            for (path, node) in &scan.nodes {
                if !p_counts(path, node, true) {
                    continue;
                }
                if let Some([d0, g]) = positive(&node.argument.claim, "met") {
                    if d0 == d {
                        met_goals.insert(g.clone());
                    }
                }
                if let Some([d0, g]) = positive(&node.argument.claim, "noOthers") {
                    if d0 == d {
                        unmet_goals.insert(g.clone());
                    }
                }
            }
            FlatExplanation::DPos {
                met_goals,
                unmet_goals,
            }
        }
        (Criterion::Dominant, Verdict::Violates) => {
            let mut pairs = BTreeSet::new();
            for (path, node) in &scan.nodes {
                if let Some([d2, g]) = positive(&node.argument.claim, "met") {
                    if d2 != d && o_counts(path, node) {
                        pairs.insert((d2.clone(), g.clone()));
                    }
                }
            }
            FlatExplanation::DNeg(pairs)
        }
        (Criterion::WeaklyDominant, Verdict::Satisfies) => {
            let mut core_goals = GoalSet::new();
            let mut witnesses = BTreeSet::new();
            for (path, node) in &scan.nodes {
                // Goal clauses read any qualifying node; the witness clause
                // reads leaves.
                if node.player != Player::Proponent || (graph && !scan.survives(path)) {
                    continue;
                }
                if let Some([d0, g]) = positive(&node.argument.claim, "met") {
                    if d0 == d {
                        core_goals.insert(g.clone());
                    }
                }
                if let Some([d0, d2]) = positive(&node.argument.claim, "more") {
                    if d0 == d {
                        for [dm, g] in support_args(node, "notMet").map(two) {
                            core_goals.insert(g.clone());
                            if dm == d2 && p_counts(path, node, true) {
                                witnesses.insert((g.clone(), d2.clone()));
                            }
                        }
                    }
                }
            }
            FlatExplanation::WDPos {
                core_goals,
                witnesses,
            }
        }
        (Criterion::WeaklyDominant, Verdict::Violates) => {
            let mut rivals = BTreeSet::new();
            for (path, node) in &scan.nodes {
                if !o_counts(path, node) {
                    continue;
                }
                if let Some([d2, _]) = positive(&node.argument.claim, "met") {
                    if d2 != d {
                        rivals.insert(d2.clone());
                    }
                }
                if positive(&node.argument.claim, "notWDom").map(|a| &a[0])
                    == Some(&d.to_string())
                {
                    for [d0, d2] in support_args(node, "notMore").map(two) {
                        if d0 == d {
                            rivals.insert(d2.clone());
                        }
                    }
                }
            }
            FlatExplanation::WDNeg(rivals)
        }
        (Criterion::PreferredSet, Verdict::Satisfies) => {
            let mut core_goals = GoalSet::new();
            let mut witnesses = BTreeSet::new();
            for (path, node) in &scan.nodes {
                // Beats-arguments carry a metSet assumption, so they are
                // interior nodes whenever that assumption is challenged;
                // any defended proponent node counts.
                if !p_counts(path, node, false) {
                    continue;
                }
                if let Some([d0, g]) = positive(&node.argument.claim, "met") {
                    if d0 == d {
                        core_goals.insert(g.clone());
                    }
                }
                if let Some(args) = positive(&node.argument.claim, "better") {
                    if args[0] == d {
                        let d2 = args[1].clone();
                        for [d0, s] in support_args(node, "metSet").map(two) {
                            if d0 == d {
                                witnesses.insert((parse_set_name(s), d2.clone()));
                            }
                        }
                    }
                }
            }
            FlatExplanation::PSPos {
                core_goals,
                witnesses,
            }
        }
        (Criterion::PreferredSet, Verdict::Violates) => {
            let mut rivals = BTreeSet::new();
            for (path, node) in &scan.nodes {
                if !o_counts(path, node) {
                    continue;
                }
                if graph {
                    if positive(&node.argument.claim, "notPS").map(|a| &a[0])
                        == Some(&d.to_string())
                    {
                        for args in support_args(node, "notBetter") {
                            if args[0] == d {
                                rivals.insert(args[1].clone());
                            }
                        }
                    }
                } else if let Some([d2, _]) = positive(&node.argument.claim, "met") {
                    if d2 != d {
                        rivals.insert(d2.clone());
                    }
                }
            }
            FlatExplanation::PSNeg(rivals)
        }
    }
}

fn two(args: &[String]) -> [&String; 2] {
    [&args[0], &args[1]]
}

/// One transcript line per node in depth-first order: the player, a prose
/// reading of the claim, and the assumptions the argument rests on.
pub fn render_dialogue(expl: &DialogicalExplanation) -> String {
    let mut lines = Vec::new();
    fn walk(node: &DisputeNode, lines: &mut Vec<String>) {
        let player = match node.player {
            Player::Proponent => "P",
            Player::Opponent => "O",
        };
        let mut line = format!("{player}: {}", claim_text(&node.argument.claim));
        if !node.argument.support.is_empty() {
            let assumed: Vec<String> = node
                .argument
                .support
                .iter()
                .map(ToString::to_string)
                .collect();
            line.push_str(&format!(" — assume {}", assumed.join(", ")));
        }
        if node.folded {
            line.push_str(" (repeats)");
        }
        lines.push(line);
        for c in &node.children {
            walk(c, lines);
        }
    }
    walk(&expl.tree.root, &mut lines);
    lines.join("\n")
}

/// Prose reading of a claim, keyed by its predicate.
fn claim_text(claim: &Sentence) -> String {
    let a = &claim.args;
    if claim.negated {
        if claim.functor == "dEdge" && a.len() == 3 {
            return format!(
                "the defeasible edge {}→{} (tag {}) is blocked",
                a[0], a[1], a[2]
            );
        }
        return format!("it is not the case that {}", claim.clone().negate());
    }
    match (claim.functor.as_str(), a.len()) {
        ("met", 2) => format!("{} meets {}", a[0], a[1]),
        ("sDom", 1) => format!("{} is strongly dominant", a[0]),
        ("notSDom", 1) => format!("{} is not strongly dominant", a[0]),
        ("dom", 1) => format!("{} is dominant", a[0]),
        ("notDom", 1) => format!("{} is not dominant", a[0]),
        ("wDom", 1) => format!("{} is weakly dominant", a[0]),
        ("notWDom", 1) => format!("{} is not weakly dominant", a[0]),
        ("pS", 1) => format!("{} is a preferred-set decision", a[0]),
        ("notPS", 1) => format!("{} is not a preferred-set decision", a[0]),
        ("noOthers", 2) => format!("no rival of {} meets {}", a[0], a[1]),
        ("more", 2) => format!("{} meets a goal that {} misses", a[0], a[1]),
        ("better", 3) => format!("{} beats {} against {}", a[0], a[1], a[2]),
        ("metSet", 2) => format!("{} meets all of {}", a[0], a[1]),
        ("notMetSet", 2) => format!("{} misses part of {}", a[0], a[1]),
        ("reach", 2) => format!("{} is reachable from {}", a[1], a[0]),
        ("unreachableSib", 4) => format!(
            "the sibling of {} into {} (tag {}) is unreachable from {}",
            a[0], a[1], a[2], a[3]
        ),
        _ => claim.to_string(),
    }
}

/// DOT rendering of the dispute tree: proponent nodes boxed, opponent nodes
/// oval, edges drawn child→parent, fold-back leaves dashed.
pub fn render_dot(expl: &DialogicalExplanation) -> String {
    let mut out = String::from("digraph dispute_tree {\n  rankdir=BT;\n");
    let scan = Scan::new(&expl.tree);
    let index_of = |path: &[usize]| {
        scan.nodes
            .iter()
            .position(|(p, _)| p == path)
            .expect("path is indexed")
    };
    for (i, (path, node)) in scan.nodes.iter().enumerate() {
        let (player, shape) = match node.player {
            Player::Proponent => ("P", "box"),
            Player::Opponent => ("O", "ellipse"),
        };
        let style = if node.folded { ", style=dashed" } else { "" };
        let label = format!("{player}: {}", node.argument).replace('"', "\\\"");
        out.push_str(&format!("  n{i} [label=\"{label}\", shape={shape}{style}];\n"));
        if !path.is_empty() {
            let parent = index_of(&path[..path.len() - 1]);
            out.push_str(&format!("  n{i} -> n{parent};\n"));
        }
    }
    out.push_str("}\n");
    out
}

/// JSON view of the tree: one entry per node in pre-order, with the player
/// label, claim, supporting assumptions, and child indices.
pub fn tree_to_json(expl: &DialogicalExplanation) -> Value {
    let scan = Scan::new(&expl.tree);
    let nodes: Vec<Value> = scan
        .nodes
        .iter()
        .map(|(path, node)| {
            let children: Vec<usize> = scan
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, (p, _))| {
                    p.len() == path.len() + 1 && p[..path.len()] == path[..]
                })
                .map(|(j, _)| j)
                .collect();
            json!({
                "label": match node.player { Player::Proponent => "P", Player::Opponent => "O" },
                "claim": node.argument.claim.to_string(),
                "support": node.argument.support.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "folded": node.folded,
                "children": children,
            })
        })
        .collect();
    json!({
        "decision": expl.decision,
        "criterion": expl.criterion.short_name(),
        "verdict": match expl.verdict { Verdict::Satisfies => "satisfies", Verdict::Violates => "violates" },
        "nodes": nodes,
    })
}
