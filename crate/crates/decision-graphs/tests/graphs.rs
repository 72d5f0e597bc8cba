//! Decision-graph semantics (blocking, tagged reachability, meets), the
//! induced decision frameworks, the compiled ABA frameworks, and randomized
//! pipeline equivalence between graph-level ABA and the induced-framework
//! evaluation.

use std::collections::BTreeSet;

use aba_engine::Sentence;
use decision_core::{goal_set, Adf, Criterion, GoalSet, GoalSetPreference, Pdf};
use decision_graphs::fixtures::{
    investment_dg, investment_dg_strict, investment_pdg, two_route_dg,
};
use decision_graphs::{
    adf_to_dg, core_dg_aba, criterion_aba_dg, dg_to_adf, mp_entails, pdg_to_pdf,
    preferred_set_aba_pdg, BeliefBase, Dg, DgError, Edge, EdgeKind, Implication, Pdg,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn nodes(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|n| n.to_string()).collect()
}

#[test]
fn belief_base_entailment() {
    let dg = investment_dg();
    let blocked_atom = Sentence::pred("dEdge", ["ic", "50", "1"]).negate();
    let unblocked_atom = Sentence::pred("dEdge", ["ic", "inSK", "1"]).negate();
    assert!(mp_entails(dg.belief_base(), &blocked_atom));
    assert!(!mp_entails(dg.belief_base(), &unblocked_atom));
    assert!(!mp_entails(&BeliefBase::default(), &blocked_atom));
}

#[test]
fn blocked_edges_are_entailed_defeasible_edges() {
    let dg = investment_dg();
    let blocked: Vec<(&str, &str)> = dg
        .blocked_edges()
        .iter()
        .map(|e| (e.from.as_str(), e.to.as_str()))
        .collect();
    assert_eq!(blocked, vec![("ic", "50")]);
    assert!(investment_dg_strict().blocked_edges().is_empty());
}

#[test]
fn investment_reachability() {
    let dg = investment_dg();
    assert!(dg.reachable(&nodes(&["ritz"]), "cheap"));
    assert!(!dg.reachable(&nodes(&["ic"]), "cheap"));
    assert!(dg.reachable(&nodes(&["ic"]), "ct"));
    assert!(dg.reachable(&nodes(&["200", "dt"]), "cheap"));
    assert!(dg.reachable(&nodes(&["50"]), "cheap"));
    assert!(dg.reachable(&nodes(&["inSK"]), "ct"));
}

#[test]
fn investment_meets() {
    let dg = investment_dg();
    assert!(dg.meets("ic", "ct").unwrap());
    assert!(!dg.meets("ic", "cheap").unwrap());
    assert!(dg.meets("ritz", "cheap").unwrap());
    assert!(!dg.meets("ritz", "ct").unwrap());
    assert!(matches!(dg.meets("near", "ct"), Err(DgError::UnknownNode(_))));
    assert!(matches!(dg.meets("ic", "near"), Err(DgError::UnknownNode(_))));
}

#[test]
fn decision_without_edges_meets_nothing() {
    let dg = Dg::new(
        ["d"],
        Vec::<String>::new(),
        ["g"],
        [],
        BeliefBase::default(),
    )
    .unwrap();
    assert!(!dg.meets("d", "g").unwrap());
}

#[test]
fn induced_decision_framework() {
    let adf = dg_to_adf(&investment_dg());
    assert_eq!(adf.gamma("ic"), &goal_set(["ct"]));
    assert_eq!(adf.gamma("ritz"), &goal_set(["cheap"]));
    assert_eq!(adf.evaluate(Criterion::WeaklyDominant), vec!["ic", "ritz"]);
    // Unblocked, ic also reaches cheap through 50.
    let strict = dg_to_adf(&investment_dg_strict());
    assert_eq!(strict.gamma("ic"), &goal_set(["cheap", "ct"]));
}

#[test]
fn investment_pdg_preferred_set() {
    let pdf = pdg_to_pdf(&investment_pdg());
    assert_eq!(pdf.preferred_set_decisions(), vec!["ritz"]);
}

#[test]
fn framework_to_graph_round_trip() {
    let adf = Adf::new(
        ["jh", "ic", "ritz"],
        ["cheap", "near"],
        [("jh", vec!["near"]), ("ic", vec!["cheap", "near"])],
    )
    .unwrap();
    let dg = adf_to_dg(&adf);
    assert_eq!(dg.edges().len(), 3);
    for d in adf.decisions() {
        for g in adf.goals() {
            assert_eq!(dg.meets(d, g).unwrap(), adf.gamma(d).contains(g));
        }
    }
    assert_eq!(dg_to_adf(&dg), adf);
}

#[test]
fn validation_errors() {
    let bb = BeliefBase::default;
    assert!(matches!(
        Dg::new(Vec::<String>::new(), ["i"], ["g"], [], bb()),
        Err(DgError::EmptyDecisions)
    ));
    assert!(matches!(
        Dg::new(["d"], ["i"], Vec::<String>::new(), [], bb()),
        Err(DgError::EmptyGoals)
    ));
    assert!(matches!(
        Dg::new(["d"], ["d"], ["g"], [], bb()),
        Err(DgError::DuplicateNode(_))
    ));
    assert!(matches!(
        Dg::new(["d"], [] as [&str; 0], ["g"], [Edge::strict("d", "x", 1)], bb()),
        Err(DgError::UnknownNode(_))
    ));
    assert!(matches!(
        Dg::new(["d"], ["i"], ["g"], [Edge::strict("g", "i", 1)], bb()),
        Err(DgError::BadEdgeShape { .. })
    ));
    assert!(matches!(
        Dg::new(
            ["d"],
            ["i"],
            ["g"],
            [Edge::strict("d", "g", 1), Edge::strict("d", "g", 2)],
            bb()
        ),
        Err(DgError::DuplicateEdge { .. })
    ));
    assert!(matches!(
        Dg::new(["d"], ["i"], ["g"], [Edge::strict("d", "g", 0)], bb()),
        Err(DgError::ZeroTag)
    ));
    assert!(matches!(
        Dg::new(
            ["d"],
            ["i1", "i2"],
            ["g"],
            [Edge::strict("i1", "i2", 1), Edge::strict("i2", "i1", 1)],
            bb()
        ),
        Err(DgError::Cyclic(_))
    ));
    let pref = GoalSetPreference::new([(goal_set(["zzz"]), goal_set(["g"]))]).unwrap();
    let dg = Dg::new(["d"], [] as [&str; 0], ["g"], [], bb()).unwrap();
    assert!(matches!(Pdg::new(dg, pref), Err(DgError::Preference(_))));
}

#[test]
fn core_framework_contains_sibling_rule_and_blocking_argument() {
    let core = core_dg_aba(&investment_dg());
    let sib_rule = aba_engine::Rule::new(
        Sentence::pred("unreachableSib", ["dt", "cheap", "2", "ritz"]),
        [
            Sentence::pred("edge", ["200", "cheap", "2"]),
            Sentence::pred("reach", ["ritz", "200"]).negate(),
        ],
    );
    assert!(core.rules().contains(&sib_rule));
    let args = core.all_arguments().unwrap();
    let blocking = Sentence::pred("dEdge", ["ic", "50", "1"]).negate();
    assert!(args
        .iter()
        .any(|a| a.claim == blocking && a.support.is_empty()));
    // Strict-only graphs compile without any dEdge assumptions.
    let strict = core_dg_aba(&investment_dg_strict());
    assert!(strict
        .assumptions()
        .iter()
        .all(|a| a.functor != "dEdge"));
}

#[test]
fn investment_criterion_frameworks() {
    let dg = investment_dg();
    let sd = criterion_aba_dg(&dg, Criterion::StronglyDominant);
    assert!(!sd.is_selected("ic"));
    assert!(!sd.is_selected("ritz"));
    let wd = criterion_aba_dg(&dg, Criterion::WeaklyDominant);
    assert_eq!(wd.selected_decisions(), vec!["ic", "ritz"]);
    let ps = preferred_set_aba_pdg(&investment_pdg());
    assert!(ps.is_selected("ritz"));
    assert!(!ps.is_selected("ic"));
}

#[test]
fn two_route_strongly_dominant() {
    let dg = two_route_dg();
    assert_eq!(dg_to_adf(&dg).evaluate(Criterion::StronglyDominant), vec!["d2"]);
    let sd = criterion_aba_dg(&dg, Criterion::StronglyDominant);
    assert!(sd.is_selected("d2"));
    assert!(!sd.is_selected("d1"));
}

#[test]
fn dot_rendering() {
    let dot = investment_dg().to_dot();
    assert!(dot.contains("\"ic\" -> \"inSK\" [style=dashed, label=\"1\"];"));
    assert!(dot.contains("\"200\" -> \"cheap\" [style=solid, label=\"2\"];"));
}

/// Random acyclic graphs within the divergence-free regime: decision-sourced
/// edges carry tags unique among their target's in-edges, and a defeasible
/// decision-sourced edge is its target's only in-edge.
fn random_dg(rng: &mut ChaCha8Rng) -> Dg {
    loop {
        let nd = rng.gen_range(1..=2usize);
        let ni = rng.gen_range(0..=4usize);
        let ng = rng.gen_range(1..=2usize);
        let decisions: Vec<String> = (1..=nd).map(|i| format!("d{i}")).collect();
        let inters: Vec<String> = (1..=ni).map(|i| format!("a{i}")).collect();
        let goals: Vec<String> = (1..=ng).map(|i| format!("g{i}")).collect();
        // Non-decision nodes in a fixed order; edges only go forward in it,
        // so the graph is acyclic by construction.
        let order: Vec<String> = inters.iter().chain(&goals).cloned().collect();
        let mut edges: Vec<Edge> = Vec::new();
        let mut fresh_tag = 10u32;
        for _ in 0..rng.gen_range(0..=12usize) {
            let to_idx = rng.gen_range(0..order.len());
            let to = order[to_idx].clone();
            let from = if to_idx > 0 && rng.gen_bool(0.5) {
                order[rng.gen_range(0..to_idx)].clone()
            } else {
                decisions[rng.gen_range(0..nd)].clone()
            };
            if edges.iter().any(|e| e.from == from && e.to == to) {
                continue;
            }
            let tag = if decisions.contains(&from) {
                fresh_tag += 1;
                fresh_tag
            } else {
                rng.gen_range(1..=2u32)
            };
            edges.push(Edge::strict(from, to, tag));
        }
        // Mark up to three edges defeasible where the regime allows it.
        let mut defeasible_atoms: Vec<Sentence> = Vec::new();
        for _ in 0..rng.gen_range(0..=3usize) {
            if edges.is_empty() {
                break;
            }
            let i = rng.gen_range(0..edges.len());
            let (from, to) = (edges[i].from.clone(), edges[i].to.clone());
            let in_degree = edges.iter().filter(|e| e.to == to).count();
            if decisions.contains(&from) && in_degree > 1 {
                continue;
            }
            edges[i].kind = EdgeKind::Defeasible;
            defeasible_atoms.push(edges[i].blocking_atom());
        }
        // A small Horn belief base over scratch atoms and blocking atoms.
        let pool: Vec<Sentence> = [Sentence::atom("b1"), Sentence::atom("b2")]
            .into_iter()
            .chain(defeasible_atoms)
            .collect();
        // Bodies draw only from atoms earlier in the pool than the head, so
        // the implication dependencies stay acyclic.
        let mut implications = Vec::new();
        for _ in 0..rng.gen_range(0..=3usize) {
            let head_idx = rng.gen_range(0..pool.len());
            let body: Vec<Sentence> = if head_idx > 0 && rng.gen_bool(0.5) {
                vec![pool[rng.gen_range(0..head_idx)].clone()]
            } else {
                Vec::new()
            };
            implications.push(Implication::new(body, pool[head_idx].clone()));
        }
        if let Ok(dg) = Dg::new(decisions, inters, goals, edges, BeliefBase::new(implications)) {
            return dg;
        }
    }
}

/// Graph-level ABA and induced-framework evaluation agree on 100 random
/// graphs for the three plain criteria; the preferred-set query follows the
/// comparable-goal-set test against every rival (which coincides with the
/// direct preferred-set evaluation on weakly dominant decisions).
#[test]
fn pipeline_equivalence_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let dg = random_dg(&mut rng);
        let adf = dg_to_adf(&dg);
        for d in adf.decisions() {
            for g in adf.goals() {
                assert_eq!(dg.meets(d, g).unwrap(), adf.gamma(d).contains(g));
            }
        }
        for c in [Criterion::StronglyDominant, Criterion::Dominant, Criterion::WeaklyDominant] {
            assert_eq!(
                criterion_aba_dg(&dg, c).selected_decisions(),
                adf.evaluate(c),
                "criterion {c:?} disagrees on {dg:?}"
            );
        }
        // Random chain over goal subsets for the preferred-set pipeline.
        let mut subsets: Vec<GoalSet> = Vec::new();
        for _ in 0..rng.gen_range(0..=3usize) {
            let s: GoalSet = adf
                .goals()
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .cloned()
                .collect();
            if !s.is_empty() && !subsets.contains(&s) {
                subsets.push(s);
            }
        }
        let pref = GoalSetPreference::chain(subsets).unwrap();
        let pdg = Pdg::new(dg, pref.clone()).unwrap();
        let pdf = Pdf::new(adf, pref).unwrap();
        let mapped = preferred_set_aba_pdg(&pdg);
        let wd = pdf.adf().evaluate(Criterion::WeaklyDominant);
        for d in pdf.adf().decisions() {
            let beats_all = pdf
                .adf()
                .decisions()
                .iter()
                .filter(|d2| *d2 != d)
                .all(|d2| pdf.beats_on_comparable_sets(d, d2));
            assert_eq!(mapped.is_selected(d), beats_all);
            if wd.contains(d) {
                assert_eq!(mapped.is_selected(d), pdf.is_preferred_set(d));
            }
        }
    }
}

/// Removing an implication can only shrink the blocked set (forward
/// chaining is monotone in the belief base).
#[test]
fn blocking_is_monotone_in_the_belief_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let dg = random_dg(&mut rng);
        let implications = dg.belief_base().implications.clone();
        if implications.is_empty() {
            continue;
        }
        let full: BTreeSet<(String, String)> = dg
            .blocked_edges()
            .iter()
            .map(|e| (e.from.clone(), e.to.clone()))
            .collect();
        for drop in 0..implications.len() {
            let mut reduced = implications.clone();
            reduced.remove(drop);
            let dg2 = Dg::new(
                dg.decision_nodes().to_vec(),
                dg.intermediate_nodes().to_vec(),
                dg.goal_nodes().to_vec(),
                dg.edges().to_vec(),
                BeliefBase::new(reduced),
            )
            .unwrap();
            let shrunk: BTreeSet<(String, String)> = dg2
                .blocked_edges()
                .iter()
                .map(|e| (e.from.clone(), e.to.clone()))
                .collect();
            assert!(shrunk.is_subset(&full));
        }
    }
}
