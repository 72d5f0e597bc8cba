//! Dialogical explanations: verdicts, worked dispute trees, flat-explanation
//! extraction for tabular and graph sources, and rendering.

use std::collections::BTreeSet;

use aba_engine::Sentence;
use decision_core::fixtures::{
    clean_goal_adf, five_goal_pdf, london_adf, quiet_near_pdf, two_decision_adf,
};
use decision_core::{goal_set, Adf, Criterion, GoalSetPreference};
use decision_graphs::fixtures::{investment_dg, two_route_dg};
use decision_graphs::{dg_to_adf, pdg_to_pdf, BeliefBase, Dg, Edge, Pdg};
use dialogical_explanations::{
    dialogical_explain, flat_from_tree, render_dialogue, render_dot, tree_to_json, ExplainError,
    Source, Verdict,
};
use dispute_trees::Player;
use flat_explanations::{
    check_flat_explanation, flat_explain, flat_explain_preferred, Context, FlatExplanation,
};

fn met(d: &str, g: &str) -> Sentence {
    Sentence::pred("met", [d, g])
}

#[test]
fn strongly_dominant_satisfied_worked_tree() {
    let adf = london_adf();
    let expl = dialogical_explain(Source::Adf(&adf), Criterion::StronglyDominant, "ic").unwrap();
    assert_eq!(expl.verdict, Verdict::Satisfies);
    let paths = expl.tree.paths();
    assert_eq!(paths.len(), 5);
    // The two proponent leaves are the met-facts answering each attack.
    let leaf_claims: BTreeSet<String> = paths
        .iter()
        .filter_map(|p| expl.tree.node(p))
        .filter(|n| n.player == Player::Proponent && n.children.is_empty())
        .map(|n| {
            assert!(n.argument.support.is_empty());
            n.argument.claim.to_string()
        })
        .collect();
    assert_eq!(
        leaf_claims,
        BTreeSet::from([met("ic", "cheap").to_string(), met("ic", "near").to_string()])
    );
    let flat = flat_from_tree(&expl);
    assert_eq!(flat, FlatExplanation::SDPos(goal_set(["cheap", "near"])));
    assert_eq!(flat, flat_explain(&adf, "ic", Criterion::StronglyDominant).unwrap());
    assert!(check_flat_explanation(Context::Adf(&adf), "ic", &flat));
}

#[test]
fn strongly_dominant_violated_worked_tree() {
    let adf = london_adf();
    let expl = dialogical_explain(Source::Adf(&adf), Criterion::StronglyDominant, "jh").unwrap();
    assert_eq!(expl.verdict, Verdict::Violates);
    let has_unanswered = expl.tree.paths().iter().any(|p| {
        let n = expl.tree.node(p).unwrap();
        n.player == Player::Opponent
            && n.children.is_empty()
            && n.argument.claim == Sentence::pred("notSDom", ["jh"])
            && n.argument.support.contains(&Sentence::pred("notMet", ["jh", "cheap"]))
    });
    assert!(has_unanswered);
    let flat = flat_from_tree(&expl);
    assert_eq!(flat, FlatExplanation::SDNeg(goal_set(["cheap"])));
    assert_eq!(flat, flat_explain(&adf, "jh", Criterion::StronglyDominant).unwrap());
}

#[test]
fn dominant_explanations() {
    let adf = two_decision_adf();
    let pos = dialogical_explain(Source::Adf(&adf), Criterion::Dominant, "jh").unwrap();
    assert_eq!(pos.verdict, Verdict::Satisfies);
    assert_eq!(
        flat_from_tree(&pos),
        FlatExplanation::DPos { met_goals: goal_set(["near"]), unmet_goals: goal_set(["cheap"]) }
    );
    let neg = dialogical_explain(Source::Adf(&adf), Criterion::Dominant, "ritz").unwrap();
    assert_eq!(neg.verdict, Verdict::Violates);
    let flat = flat_from_tree(&neg);
    assert_eq!(
        flat,
        FlatExplanation::DNeg(BTreeSet::from([("jh".to_string(), "near".to_string())]))
    );
    assert_eq!(flat, flat_explain(&adf, "ritz", Criterion::Dominant).unwrap());
}

#[test]
fn weakly_dominant_explanations() {
    let adf = clean_goal_adf();
    let pos = dialogical_explain(Source::Adf(&adf), Criterion::WeaklyDominant, "ic").unwrap();
    assert_eq!(pos.verdict, Verdict::Satisfies);
    let flat = flat_from_tree(&pos);
    let FlatExplanation::WDPos { ref core_goals, ref witnesses } = flat else {
        panic!("expected a positive weak-dominance explanation, got {flat:?}");
    };
    // jh is only separated from ic by cheap, so the witness is forced.
    assert!(witnesses.contains(&("cheap".to_string(), "jh".to_string())));
    assert!(core_goals.contains("cheap"));
    assert!(check_flat_explanation(Context::Adf(&adf), "ic", &flat));

    let neg = dialogical_explain(Source::Adf(&adf), Criterion::WeaklyDominant, "ritz").unwrap();
    assert_eq!(neg.verdict, Verdict::Violates);
    let flat = flat_from_tree(&neg);
    assert_eq!(
        flat,
        FlatExplanation::WDNeg(BTreeSet::from(["ic".to_string(), "jh".to_string()]))
    );
    assert_eq!(flat, flat_explain(&adf, "ritz", Criterion::WeaklyDominant).unwrap());
}

#[test]
fn preferred_set_explanations() {
    let pdf = quiet_near_pdf();
    let pos = dialogical_explain(Source::Pdf(&pdf), Criterion::PreferredSet, "jh").unwrap();
    assert_eq!(pos.verdict, Verdict::Satisfies);
    let flat = flat_from_tree(&pos);
    assert!(check_flat_explanation(Context::Pdf(&pdf), "jh", &flat));
    let FlatExplanation::PSPos { core_goals, .. } = &flat else {
        panic!("expected a positive preferred-set explanation, got {flat:?}");
    };
    assert_eq!(*core_goals, goal_set(["near", "quiet"]));

    let neg = dialogical_explain(Source::Pdf(&pdf), Criterion::PreferredSet, "ic").unwrap();
    assert_eq!(neg.verdict, Verdict::Violates);
    let flat = flat_from_tree(&neg);
    assert_eq!(flat, FlatExplanation::PSNeg(BTreeSet::from(["jh".to_string()])));
    assert_eq!(flat, flat_explain_preferred(&pdf, "ic").unwrap());
}

/// Every tabular fixture, criterion, and decision: the verdict matches the
/// criterion, the extracted flat explanation passes the checker, and the
/// unique negative forms equal the canonical producer exactly.
#[test]
fn tabular_extraction_contracts() {
    let adfs = [london_adf(), two_decision_adf(), clean_goal_adf()];
    for adf in &adfs {
        for criterion in [Criterion::StronglyDominant, Criterion::Dominant, Criterion::WeaklyDominant] {
            for d in adf.decisions() {
                let expl = dialogical_explain(Source::Adf(adf), criterion, d).unwrap();
                assert_eq!(
                    expl.verdict == Verdict::Satisfies,
                    adf.satisfies(d, criterion),
                    "verdict mismatch for {d} under {criterion:?}"
                );
                let flat = flat_from_tree(&expl);
                assert!(
                    check_flat_explanation(Context::Adf(adf), d, &flat),
                    "extracted explanation rejected for {d} under {criterion:?}: {flat:?}"
                );
                if matches!(
                    flat,
                    FlatExplanation::SDPos(_)
                        | FlatExplanation::SDNeg(_)
                        | FlatExplanation::DNeg(_)
                        | FlatExplanation::WDNeg(_)
                ) {
                    assert_eq!(flat, flat_explain(adf, d, criterion).unwrap());
                }
            }
        }
    }
    for pdf in [quiet_near_pdf(), five_goal_pdf()] {
        for d in pdf.adf().decisions() {
            let expl = dialogical_explain(Source::Pdf(&pdf), Criterion::PreferredSet, d).unwrap();
            let flat = flat_from_tree(&expl);
            assert!(check_flat_explanation(Context::Pdf(&pdf), d, &flat));
            if let FlatExplanation::PSNeg(_) = flat {
                assert_eq!(flat, flat_explain_preferred(&pdf, d).unwrap());
            }
        }
    }
}

#[test]
fn source_criterion_mismatches() {
    let adf = london_adf();
    assert!(matches!(
        dialogical_explain(Source::Adf(&adf), Criterion::PreferredSet, "ic"),
        Err(ExplainError::NeedsPreference)
    ));
    assert!(matches!(
        dialogical_explain(Source::Adf(&adf), Criterion::StronglyDominant, "zzz"),
        Err(ExplainError::UnknownDecision(_))
    ));
    let dg = two_route_dg();
    assert!(matches!(
        dialogical_explain(Source::Dg(&dg), Criterion::PreferredSet, "d1"),
        Err(ExplainError::NeedsPreference)
    ));
}

// Graph fixtures: a two-decision graph over goals g1/g2, the same graph
// with an extra unmet goal g3, and a third variant where a new decision d3
// reaches g3 through a3.

fn three_goal_dg() -> Dg {
    Dg::new(
        ["d1", "d2"],
        ["a1", "a2"],
        ["g1", "g2", "g3"],
        [
            Edge::strict("d1", "g1", 1),
            Edge::strict("d2", "a1", 1),
            Edge::strict("d2", "a2", 1),
            Edge::strict("a1", "g1", 2),
            Edge::strict("a1", "g2", 1),
            Edge::strict("a2", "g2", 1),
        ],
        BeliefBase::default(),
    )
    .unwrap()
}

fn three_decision_dg() -> Dg {
    Dg::new(
        ["d1", "d2", "d3"],
        ["a1", "a2", "a3"],
        ["g1", "g2", "g3"],
        [
            Edge::strict("d1", "g1", 1),
            Edge::strict("d2", "a1", 1),
            Edge::strict("d2", "a2", 1),
            Edge::strict("a1", "g1", 2),
            Edge::strict("a1", "g2", 1),
            Edge::strict("a2", "g2", 1),
            Edge::strict("d3", "a3", 1),
            Edge::strict("a3", "g3", 1),
        ],
        BeliefBase::default(),
    )
    .unwrap()
}

fn three_decision_pdg() -> Pdg {
    let pref = GoalSetPreference::new([(goal_set(["g3"]), goal_set(["g1", "g2"]))]).unwrap();
    Pdg::new(three_decision_dg(), pref).unwrap()
}

#[test]
fn graph_strongly_dominant_extraction() {
    let dg = two_route_dg();
    let pos = dialogical_explain(Source::Dg(&dg), Criterion::StronglyDominant, "d2").unwrap();
    assert_eq!(pos.verdict, Verdict::Satisfies);
    assert_eq!(flat_from_tree(&pos), FlatExplanation::SDPos(goal_set(["g1", "g2"])));
    let neg = dialogical_explain(Source::Dg(&dg), Criterion::StronglyDominant, "d1").unwrap();
    assert_eq!(neg.verdict, Verdict::Violates);
    assert_eq!(flat_from_tree(&neg), FlatExplanation::SDNeg(goal_set(["g2"])));
}

#[test]
fn graph_dominant_extraction() {
    let dg = three_goal_dg();
    let adf = dg_to_adf(&dg);
    let pos = dialogical_explain(Source::Dg(&dg), Criterion::Dominant, "d2").unwrap();
    assert_eq!(pos.verdict, Verdict::Satisfies);
    assert_eq!(
        flat_from_tree(&pos),
        FlatExplanation::DPos { met_goals: goal_set(["g1", "g2"]), unmet_goals: goal_set(["g3"]) }
    );
    let neg = dialogical_explain(Source::Dg(&dg), Criterion::Dominant, "d1").unwrap();
    assert_eq!(neg.verdict, Verdict::Violates);
    let flat = flat_from_tree(&neg);
    assert_eq!(
        flat,
        FlatExplanation::DNeg(BTreeSet::from([("d2".to_string(), "g2".to_string())]))
    );
    assert_eq!(flat, flat_explain(&adf, "d1", Criterion::Dominant).unwrap());
}

#[test]
fn graph_weakly_dominant_extraction() {
    let dg = three_decision_dg();
    let adf = dg_to_adf(&dg);
    let neg = dialogical_explain(Source::Dg(&dg), Criterion::WeaklyDominant, "d1").unwrap();
    assert_eq!(neg.verdict, Verdict::Violates);
    let flat = flat_from_tree(&neg);
    assert_eq!(flat, FlatExplanation::WDNeg(BTreeSet::from(["d2".to_string()])));
    assert_eq!(flat, flat_explain(&adf, "d1", Criterion::WeaklyDominant).unwrap());

    let pos2 = dialogical_explain(Source::Dg(&dg), Criterion::WeaklyDominant, "d2").unwrap();
    assert_eq!(pos2.verdict, Verdict::Satisfies);
    let flat2 = flat_from_tree(&pos2);
    let FlatExplanation::WDPos { witnesses, .. } = &flat2 else {
        panic!("expected a positive weak-dominance explanation, got {flat2:?}");
    };
    // Each rival is covered by some separating goal.
    let covered: BTreeSet<&str> = witnesses.iter().map(|(_, r)| r.as_str()).collect();
    assert_eq!(covered, BTreeSet::from(["d1", "d3"]));
    assert!(check_flat_explanation(Context::Adf(&adf), "d2", &flat2));

    let pos3 = dialogical_explain(Source::Dg(&dg), Criterion::WeaklyDominant, "d3").unwrap();
    let flat3 = flat_from_tree(&pos3);
    let FlatExplanation::WDPos { ref core_goals, ref witnesses } = flat3 else {
        panic!("expected a positive weak-dominance explanation, got {flat3:?}");
    };
    assert_eq!(*core_goals, goal_set(["g3"]));
    assert_eq!(
        *witnesses,
        BTreeSet::from([
            ("g3".to_string(), "d1".to_string()),
            ("g3".to_string(), "d2".to_string())
        ])
    );
    assert!(check_flat_explanation(Context::Adf(&adf), "d3", &flat3));
}

#[test]
fn graph_preferred_set_extraction() {
    let pdg = three_decision_pdg();
    let pdf = pdg_to_pdf(&pdg);
    assert_eq!(pdf.preferred_set_decisions(), vec!["d3"]);

    let pos = dialogical_explain(Source::Pdg(&pdg), Criterion::PreferredSet, "d3").unwrap();
    assert_eq!(pos.verdict, Verdict::Satisfies);
    let flat = flat_from_tree(&pos);
    let FlatExplanation::PSPos { ref core_goals, ref witnesses } = flat else {
        panic!("expected a positive preferred-set explanation, got {flat:?}");
    };
    assert_eq!(*core_goals, goal_set(["g3"]));
    assert_eq!(
        *witnesses,
        BTreeSet::from([
            (goal_set(["g3"]), "d1".to_string()),
            (goal_set(["g3"]), "d2".to_string())
        ])
    );
    assert!(check_flat_explanation(Context::Pdf(&pdf), "d3", &flat));

    let neg1 = dialogical_explain(Source::Pdg(&pdg), Criterion::PreferredSet, "d1").unwrap();
    assert_eq!(neg1.verdict, Verdict::Violates);
    let flat1 = flat_from_tree(&neg1);
    assert_eq!(
        flat1,
        FlatExplanation::PSNeg(BTreeSet::from(["d2".to_string(), "d3".to_string()]))
    );
    assert_eq!(flat1, flat_explain_preferred(&pdf, "d1").unwrap());

    let neg2 = dialogical_explain(Source::Pdg(&pdg), Criterion::PreferredSet, "d2").unwrap();
    let flat2 = flat_from_tree(&neg2);
    assert_eq!(flat2, FlatExplanation::PSNeg(BTreeSet::from(["d3".to_string()])));
    assert_eq!(flat2, flat_explain_preferred(&pdf, "d2").unwrap());
}

/// The blocked defeasible edge surfaces as an opponent argument defeating
/// the proponent's reach-based met-argument.
#[test]
fn blocked_edge_defeats_graph_argument() {
    let dg = investment_dg();
    let neg = dialogical_explain(Source::Dg(&dg), Criterion::StronglyDominant, "ic").unwrap();
    assert_eq!(neg.verdict, Verdict::Violates);
    let blocking = Sentence::pred("dEdge", ["ic", "50", "1"]).negate();
    let has_blocking_opponent = neg.tree.paths().iter().any(|p| {
        let n = neg.tree.node(p).unwrap();
        n.player == Player::Opponent && n.argument.claim == blocking
    });
    assert!(has_blocking_opponent);
    assert_eq!(flat_from_tree(&neg), FlatExplanation::SDNeg(goal_set(["cheap"])));
}

#[test]
fn dialogue_transcript() {
    let adf = london_adf();
    let expl = dialogical_explain(Source::Adf(&adf), Criterion::StronglyDominant, "ic").unwrap();
    let transcript = render_dialogue(&expl);
    let lines: Vec<&str> = transcript.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "P: ic is strongly dominant — assume sDom(ic)");
    assert!(lines.iter().any(|l| *l == "P: ic meets cheap"));

    // A lone decision is weakly dominant with nothing to discuss.
    let single = Adf::new(["d1"], ["g1"], [("d1", vec![])]).unwrap();
    let expl = dialogical_explain(Source::Adf(&single), Criterion::WeaklyDominant, "d1").unwrap();
    assert_eq!(render_dialogue(&expl).lines().count(), 1);

    // A violated verdict leaves the opponent with the last word somewhere:
    // the transcript contains an unanswered opponent line.
    let neg = dialogical_explain(Source::Adf(&adf), Criterion::StronglyDominant, "jh").unwrap();
    let transcript = render_dialogue(&neg);
    assert!(transcript.lines().any(|l| l.starts_with("O: ")));
}

#[test]
fn dot_and_json_renderings() {
    let adf = london_adf();
    let expl = dialogical_explain(Source::Adf(&adf), Criterion::StronglyDominant, "ic").unwrap();
    let dot = render_dot(&expl);
    assert_eq!(dot.matches("[label=").count(), 5);
    assert_eq!(dot.matches(" -> ").count(), 4);
    assert!(dot.contains("shape=box"));
    assert!(dot.contains("shape=ellipse"));

    let json = tree_to_json(&expl);
    assert_eq!(json["decision"], "ic");
    assert_eq!(json["verdict"], "satisfies");
    let nodes = json["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 5);
    assert_eq!(nodes[0]["label"], "P");
    assert_eq!(nodes[0]["claim"], "sDom(ic)");
    assert_eq!(nodes[0]["children"].as_array().unwrap().len(), 2);
}
