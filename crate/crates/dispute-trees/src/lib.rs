//! Abstract dispute trees over flat ABA frameworks.
//!
//! A dispute tree argues for a root proponent argument: every proponent (P)
//! node has one opponent (O) child per attacker of its argument, and every O
//! node has at most one P child, which attacks a chosen culprit assumption in
//! the O argument's support.  Infinite regress (a P node repeating a P
//! ancestor's argument) is represented finitely by a fold-back leaf.
//!
//! The module builds admissible trees (every O node answered, no culprit in
//! the defence set), enumerates maximal trees (O leaves only where no
//! counter-argument exists), and selects least-assumption and best-effort
//! trees by subset-minimality of the LA and LO measures.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use aba_engine::{AbaFramework, Argument, Sentence};
use itertools::Itertools;
use thiserror::Error;

/// Cap on nodes explored during tree enumeration.
pub const ENUMERATION_BUDGET: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DisputeError {
    #[error("the argument is not admissible")]
    NotAdmissible,
    #[error("the argument is admissible; a best-effort tree is not defined for it")]
    IsAdmissible,
    #[error("tree enumeration exceeded the budget of {ENUMERATION_BUDGET} nodes")]
    ExplosionBudgetExceeded,
    #[error(transparent)]
    Framework(#[from] aba_engine::AbaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Player {
    Proponent,
    Opponent,
}

/// A node of a dispute tree.  `culprit` is set on O nodes with a child: the
/// assumption in this node's support that the P child attacks.  `folded`
/// marks a P leaf whose argument repeats a P ancestor's argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DisputeNode {
    pub player: Player,
    pub argument: Argument,
    pub culprit: Option<Sentence>,
    pub folded: bool,
    pub children: Vec<DisputeNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    Admissible,
    Maximal,
    Other,
}

/// Identifies a node by child indices from the root.
pub type NodePath = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisputeTree {
    pub root: DisputeNode,
    pub kind: TreeKind,
}

impl DisputeNode {
    fn leaf(player: Player, argument: Argument, folded: bool) -> Self {
        DisputeNode { player, argument, culprit: None, folded, children: Vec::new() }
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a DisputeNode)) {
        f(self);
        for c in &self.children {
            c.visit(f);
        }
    }
}

impl DisputeTree {
    pub fn node(&self, path: &[usize]) -> Option<&DisputeNode> {
        let mut cur = &self.root;
        for &i in path {
            cur = cur.children.get(i)?;
        }
        Some(cur)
    }

    /// Paths of all nodes in pre-order.
    pub fn paths(&self) -> Vec<NodePath> {
        let mut out = Vec::new();
        fn walk(node: &DisputeNode, path: &mut NodePath, out: &mut Vec<NodePath>) {
            out.push(path.clone());
            for (i, c) in node.children.iter().enumerate() {
                path.push(i);
                walk(c, path, out);
                path.pop();
            }
        }
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    /// True iff the node at `ancestor` lies strictly above the node at
    /// `descendant` (on the path from the root to its parent).
    pub fn is_ancestor(&self, ancestor: &[usize], descendant: &[usize]) -> bool {
        ancestor.len() < descendant.len() && descendant[..ancestor.len()] == *ancestor
    }

    /// For a fold-back leaf, the nearest P ancestor with the same argument.
    pub fn fold_target(&self, path: &[usize]) -> Option<NodePath> {
        let node = self.node(path)?;
        if !node.folded {
            return None;
        }
        for cut in (0..path.len()).rev() {
            let candidate = self.node(&path[..cut]).unwrap();
            if candidate.player == Player::Proponent && candidate.argument == node.argument {
                return Some(path[..cut].to_vec());
            }
        }
        None
    }

    /// The defence set: all assumptions in supports of P-node arguments.
    pub fn defence_set(&self) -> BTreeSet<Sentence> {
        let mut out = BTreeSet::new();
        self.root.visit(&mut |n| {
            if n.player == Player::Proponent {
                out.extend(n.argument.support.iter().cloned());
            }
        });
        out
    }

    /// The culprits: assumptions attacked by P children of O nodes.
    pub fn culprits(&self) -> BTreeSet<Sentence> {
        let mut out = BTreeSet::new();
        self.root.visit(&mut |n| {
            if let Some(c) = &n.culprit {
                out.insert(c.clone());
            }
        });
        out
    }

    /// LA: the union of the supports of the leaf-node arguments.  Fold-back
    /// leaves stand for infinite branches, which have no leaves, so they
    /// contribute nothing.
    pub fn la(&self) -> BTreeSet<Sentence> {
        let mut out = BTreeSet::new();
        self.root.visit(&mut |n| {
            if n.children.is_empty() && !n.folded {
                out.extend(n.argument.support.iter().cloned());
            }
        });
        out
    }

    /// LO: the opponent leaf nodes, as a set of arguments.
    pub fn lo(&self) -> BTreeSet<Argument> {
        let mut out = BTreeSet::new();
        self.root.visit(&mut |n| {
            if n.player == Player::Opponent && n.children.is_empty() {
                out.insert(n.argument.clone());
            }
        });
        out
    }

    /// Structural admissibility: every O node has exactly one child and no
    /// culprit belongs to the defence set.
    pub fn satisfies_admissible_conditions(&self) -> bool {
        let mut every_o_answered = true;
        self.root.visit(&mut |n| {
            if n.player == Player::Opponent && n.children.len() != 1 {
                every_o_answered = false;
            }
        });
        every_o_answered && self.culprits().is_disjoint(&self.defence_set())
    }

    /// Canonical indented text form, used for goldens and tie-breaking.
    pub fn to_text(&self) -> String {
        fn walk(node: &DisputeNode, depth: usize, out: &mut String) {
            let tag = match node.player {
                Player::Proponent => "P",
                Player::Opponent => "O",
            };
            let fold = if node.folded { " (fold)" } else { "" };
            let culprit = match &node.culprit {
                Some(c) => format!(" [culprit {c}]"),
                None => String::new(),
            };
            let _ = writeln!(out, "{}{tag}: {}{culprit}{fold}", "  ".repeat(depth), node.argument);
            for c in &node.children {
                walk(c, depth + 1, out);
            }
        }
        let mut out = String::new();
        walk(&self.root, 0, &mut out);
        out
    }
}

/// Precomputed attack structure shared by the constructions.
struct Arena {
    arguments: Vec<Argument>,
}

impl Arena {
    fn new(af: &AbaFramework) -> Result<Self, DisputeError> {
        Ok(Arena { arguments: af.all_arguments()? })
    }

    /// Arguments attacking `arg`.
    fn attackers<'a>(&'a self, af: &'a AbaFramework, arg: &'a Argument) -> Vec<&'a Argument> {
        self.arguments.iter().filter(|c| af.attacks(c, arg)).collect()
    }

    /// All (culprit, counter-argument) moves against an O argument.
    fn counter_moves<'a, 't>(
        &'a self,
        af: &AbaFramework,
        target: &'t Argument,
    ) -> Vec<(&'t Sentence, &'a Argument)> {
        let mut out = Vec::new();
        for alpha in &target.support {
            let contraries = af.contraries_of(alpha);
            for cand in &self.arguments {
                if contraries.contains(&cand.claim) {
                    out.push((alpha, cand));
                }
            }
        }
        out
    }
}

/// An admissible dispute tree for `arg`, if `arg` is admissible.
///
/// Construction is guided by an admissible assumption set containing the
/// argument's support: every O node is answered by a counter-argument
/// supported inside that set, which exists by admissibility and whose culprit
/// cannot lie in the set by conflict-freeness.
pub fn admissible_dispute_tree(af: &AbaFramework, arg: &Argument) -> Option<DisputeTree> {
    let shield = af.admissible_superset(&arg.support)?;
    let arena = Arena::new(af).ok()?;
    let mut p_ancestors: Vec<Argument> = Vec::new();
    let root = build_guided(af, &arena, &shield, arg, &mut p_ancestors);
    Some(DisputeTree { root, kind: TreeKind::Admissible })
}

fn build_guided(
    af: &AbaFramework,
    arena: &Arena,
    shield: &BTreeSet<Sentence>,
    arg: &Argument,
    p_ancestors: &mut Vec<Argument>,
) -> DisputeNode {
    if p_ancestors.contains(arg) {
        return DisputeNode::leaf(Player::Proponent, arg.clone(), true);
    }
    p_ancestors.push(arg.clone());
    let mut children = Vec::new();
    for attacker in arena.attackers(af, arg) {
        // Canonically smallest counter-move supported inside the shield.
        let (culprit, counter) = arena
            .counter_moves(af, attacker)
            .into_iter()
            .filter(|(_, cand)| cand.support.is_subset(shield))
            .min()
            .expect("admissible set attacks every attacker");
        let reply = build_guided(af, arena, shield, counter, p_ancestors);
        children.push(DisputeNode {
            player: Player::Opponent,
            argument: attacker.clone(),
            culprit: Some(culprit.clone()),
            folded: false,
            children: vec![reply],
        });
    }
    p_ancestors.pop();
    DisputeNode { player: Player::Proponent, argument: arg.clone(), culprit: None, folded: false, children }
}

/// A maximal dispute tree for `arg` built greedily, with no enumeration of
/// alternatives: every O node that has a counter-move is answered by the
/// smallest unattacked counter-argument when one exists (it ends the branch
/// cleanly), otherwise by the canonically smallest move. Carries no
/// minimality guarantee; intended as a fallback when full enumeration
/// exceeds the budget.
pub fn greedy_maximal_tree(
    af: &AbaFramework,
    arg: &Argument,
) -> Result<DisputeTree, DisputeError> {
    let arena = Arena::new(af)?;
    let mut builder = GreedyBuilder { af, arena: &arena, next_index: 0, deviation: None };
    let root = builder.p_node(arg, &mut Vec::new());
    Ok(finish_tree(root))
}

/// Greedy maximal trees deviating from the canonical greedy choice at a
/// single O node, up to `max` trees in depth-first node order. Candidates
/// for validity-driven tie-breaking when full enumeration is over budget.
pub fn greedy_deviation_trees(
    af: &AbaFramework,
    arg: &Argument,
    max: usize,
) -> Result<Vec<DisputeTree>, DisputeError> {
    let arena = Arena::new(af)?;
    // First pass records how many counter-moves each O node has.
    let mut base = GreedyBuilder { af, arena: &arena, next_index: 0, deviation: None };
    let mut option_counts = Vec::new();
    base.p_probe(arg, &mut Vec::new(), &mut option_counts);
    let mut out = Vec::new();
    'outer: for (index, options) in option_counts.into_iter().enumerate() {
        for choice in 1..options {
            if out.len() >= max {
                break 'outer;
            }
            let mut builder =
                GreedyBuilder { af, arena: &arena, next_index: 0, deviation: Some((index, choice)) };
            let root = builder.p_node(arg, &mut Vec::new());
            out.push(finish_tree(root));
        }
    }
    Ok(out)
}

fn finish_tree(root: DisputeNode) -> DisputeTree {
    let mut tree = DisputeTree { root, kind: TreeKind::Maximal };
    if tree.satisfies_admissible_conditions() {
        tree.kind = TreeKind::Admissible;
    }
    tree
}

struct GreedyBuilder<'a> {
    af: &'a AbaFramework,
    arena: &'a Arena,
    next_index: usize,
    deviation: Option<(usize, usize)>,
}

impl<'a> GreedyBuilder<'a> {
    /// Counter-moves for `attacker`, unattacked counters first, then by
    /// canonical order.
    fn ranked_moves(&self, attacker: &Argument) -> Vec<(Sentence, Argument)> {
        let mut moves: Vec<(bool, Sentence, Argument)> = self
            .arena
            .counter_moves(self.af, attacker)
            .into_iter()
            .map(|(culprit, counter)| {
                let attacked = !self.arena.attackers(self.af, counter).is_empty();
                (attacked, culprit.clone(), counter.clone())
            })
            .collect();
        moves.sort();
        moves.into_iter().map(|(_, culprit, counter)| (culprit, counter)).collect()
    }

    fn p_node(&mut self, arg: &Argument, p_ancestors: &mut Vec<Argument>) -> DisputeNode {
        if p_ancestors.contains(arg) {
            return DisputeNode::leaf(Player::Proponent, arg.clone(), true);
        }
        p_ancestors.push(arg.clone());
        let mut children = Vec::new();
        for attacker in self.arena.attackers(self.af, arg) {
            let attacker = attacker.clone();
            let index = self.next_index;
            self.next_index += 1;
            let moves = self.ranked_moves(&attacker);
            let node = if moves.is_empty() {
                DisputeNode::leaf(Player::Opponent, attacker, false)
            } else {
                let pick = match self.deviation {
                    Some((i, c)) if i == index => c.min(moves.len() - 1),
                    _ => 0,
                };
                let (culprit, counter) = moves[pick].clone();
                let reply = self.p_node(&counter, p_ancestors);
                DisputeNode {
                    player: Player::Opponent,
                    argument: attacker,
                    culprit: Some(culprit),
                    folded: false,
                    children: vec![reply],
                }
            };
            children.push(node);
        }
        p_ancestors.pop();
        DisputeNode {
            player: Player::Proponent,
            argument: arg.clone(),
            culprit: None,
            folded: false,
            children,
        }
    }

    /// Walks the canonical greedy tree recording each O node's option count.
    fn p_probe(
        &mut self,
        arg: &Argument,
        p_ancestors: &mut Vec<Argument>,
        counts: &mut Vec<usize>,
    ) {
        if p_ancestors.contains(arg) {
            return;
        }
        p_ancestors.push(arg.clone());
        for attacker in self.arena.attackers(self.af, arg) {
            let attacker = attacker.clone();
            let moves = self.ranked_moves(&attacker);
            counts.push(moves.len());
            if let Some((_, counter)) = moves.first() {
                let counter = counter.clone();
                self.p_probe(&counter, p_ancestors, counts);
            }
        }
        p_ancestors.pop();
    }
}

/// Whether O nodes without counter-moves may stand as leaves.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// O leaves allowed exactly when no counter-move exists (maximal trees).
    Maximal,
    /// Every O node must be answered (candidate admissible trees).
    Answered,
}

struct Enumerator<'a> {
    af: &'a AbaFramework,
    arena: &'a Arena,
    mode: Mode,
    explored: usize,
}

impl<'a> Enumerator<'a> {
    fn spend(&mut self) -> Result<(), DisputeError> {
        self.explored += 1;
        if self.explored > ENUMERATION_BUDGET {
            return Err(DisputeError::ExplosionBudgetExceeded);
        }
        Ok(())
    }

    /// All subtrees rooted at a P node for `arg`.
    fn p_subtrees(
        &mut self,
        arg: &Argument,
        p_ancestors: &mut Vec<Argument>,
    ) -> Result<Vec<DisputeNode>, DisputeError> {
        self.spend()?;
        if p_ancestors.contains(arg) {
            return Ok(vec![DisputeNode::leaf(Player::Proponent, arg.clone(), true)]);
        }
        p_ancestors.push(arg.clone());
        let attackers = self.arena.attackers(self.af, arg);
        let mut per_child: Vec<Vec<DisputeNode>> = Vec::new();
        let mut dead = false;
        for attacker in attackers {
            let subtrees = self.o_subtrees(attacker, p_ancestors)?;
            if subtrees.is_empty() {
                dead = true;
                break;
            }
            per_child.push(subtrees);
        }
        p_ancestors.pop();
        if dead {
            return Ok(Vec::new());
        }
        // Charge for the trees about to be materialized: the per-node budget
        // alone does not bound the cartesian product below.
        let count = per_child
            .iter()
            .map(|c| c.len())
            .try_fold(1usize, |a, b| a.checked_mul(b))
            .ok_or(DisputeError::ExplosionBudgetExceeded)?;
        self.explored = self
            .explored
            .checked_add(count)
            .ok_or(DisputeError::ExplosionBudgetExceeded)?;
        if self.explored > ENUMERATION_BUDGET {
            return Err(DisputeError::ExplosionBudgetExceeded);
        }
        let combos = per_child
            .iter()
            .map(|c| c.iter())
            .multi_cartesian_product()
            .map(|children| DisputeNode {
                player: Player::Proponent,
                argument: arg.clone(),
                culprit: None,
                folded: false,
                children: children.into_iter().cloned().collect(),
            })
            .collect();
        Ok(combos)
    }

    /// All subtrees rooted at an O node for `attacker`.
    fn o_subtrees(
        &mut self,
        attacker: &Argument,
        p_ancestors: &mut Vec<Argument>,
    ) -> Result<Vec<DisputeNode>, DisputeError> {
        self.spend()?;
        let moves = self.arena.counter_moves(self.af, attacker);
        if moves.is_empty() {
            return Ok(match self.mode {
                Mode::Maximal => vec![DisputeNode::leaf(Player::Opponent, attacker.clone(), false)],
                Mode::Answered => Vec::new(),
            });
        }
        let mut out = Vec::new();
        for (culprit, counter) in moves {
            let culprit = culprit.clone();
            let counter = counter.clone();
            for reply in self.p_subtrees(&counter, p_ancestors)? {
                out.push(DisputeNode {
                    player: Player::Opponent,
                    argument: attacker.clone(),
                    culprit: Some(culprit.clone()),
                    folded: false,
                    children: vec![reply],
                });
            }
        }
        Ok(out)
    }
}

fn enumerate(
    af: &AbaFramework,
    arg: &Argument,
    mode: Mode,
) -> Result<Vec<DisputeTree>, DisputeError> {
    let arena = Arena::new(af)?;
    let mut e = Enumerator { af, arena: &arena, mode, explored: 0 };
    let roots = e.p_subtrees(arg, &mut Vec::new())?;
    Ok(roots
        .into_iter()
        .map(|root| {
            let mut tree = DisputeTree { root, kind: TreeKind::Other };
            tree.kind = if tree.satisfies_admissible_conditions() {
                TreeKind::Admissible
            } else {
                TreeKind::Maximal
            };
            tree
        })
        .collect())
}

/// All maximal dispute trees for `arg`, up to fold-back equivalence: trees
/// whose O leaves have no counter-argument.
pub fn maximal_dispute_trees(
    af: &AbaFramework,
    arg: &Argument,
) -> Result<Vec<DisputeTree>, DisputeError> {
    enumerate(af, arg, Mode::Maximal)
}

/// All admissible dispute trees for `arg`, up to fold-back equivalence.
pub fn admissible_dispute_trees(
    af: &AbaFramework,
    arg: &Argument,
) -> Result<Vec<DisputeTree>, DisputeError> {
    let mut trees = enumerate(af, arg, Mode::Answered)?;
    trees.retain(|t| t.satisfies_admissible_conditions());
    for t in &mut trees {
        t.kind = TreeKind::Admissible;
    }
    Ok(trees)
}

/// Selects, among `candidates`, one whose measure is subset-minimal, breaking
/// ties by smallest canonical serialization.
fn select_minimal<M: Ord>(
    candidates: Vec<DisputeTree>,
    measure: impl Fn(&DisputeTree) -> BTreeSet<M>,
) -> Option<DisputeTree> {
    let measured: Vec<(BTreeSet<M>, DisputeTree)> =
        candidates.into_iter().map(|t| (measure(&t), t)).collect();
    measured
        .iter()
        .filter(|(m, _)| !measured.iter().any(|(m2, _)| m2.is_subset(m) && m2 != m))
        .min_by_key(|(m, t)| (m.len(), t.to_text()))
        .map(|(_, t)| t.clone())
}

/// An admissible tree for `arg` whose LA set is subset-minimal among all
/// admissible trees for `arg`.
pub fn least_assumption_tree(
    af: &AbaFramework,
    arg: &Argument,
) -> Result<DisputeTree, DisputeError> {
    let candidates = admissible_dispute_trees(af, arg)?;
    select_minimal(candidates, |t| t.la()).ok_or(DisputeError::NotAdmissible)
}

/// A maximal tree for a non-admissible `arg` whose LO set (opponent leaves,
/// as arguments) is subset-minimal among all maximal trees for `arg`.
pub fn best_effort_tree(af: &AbaFramework, arg: &Argument) -> Result<DisputeTree, DisputeError> {
    if af.is_admissible_argument(arg).is_some() {
        return Err(DisputeError::IsAdmissible);
    }
    let candidates = maximal_dispute_trees(af, arg)?;
    select_minimal(candidates, |t| t.lo())
        .ok_or(DisputeError::ExplosionBudgetExceeded)
}
