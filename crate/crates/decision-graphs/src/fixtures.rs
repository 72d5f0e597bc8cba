//! Shared example graphs used across test suites.

use aba_engine::Sentence;
use decision_core::{goal_set, GoalSetPreference};

use crate::{BeliefBase, Dg, Edge, Implication, Pdg};

/// The two-hotel investment graph with defeasible edges: `ic` reaches
/// `convenient` through `inSK` and `near`, and would reach `cheap` through
/// `50` if the defeasible edge to `50` were not blocked during term time;
/// `ritz` reaches `cheap` through the tag-2 pair `{200, dt}`.
pub fn investment_dg() -> Dg {
    Dg::new(
        ["ic", "ritz"],
        ["inSK", "50", "inPic", "200", "dt", "near"],
        ["ct", "cheap"],
        [
            Edge::defeasible("ic", "inSK", 1),
            Edge::defeasible("ic", "50", 1),
            Edge::strict("ritz", "inPic", 1),
            Edge::strict("ritz", "dt", 1),
            Edge::strict("ritz", "200", 1),
            Edge::strict("inSK", "near", 1),
            Edge::strict("near", "ct", 1),
            Edge::strict("50", "cheap", 1),
            Edge::strict("200", "cheap", 2),
            Edge::strict("dt", "cheap", 2),
        ],
        BeliefBase::new([
            Implication::fact(Sentence::atom("termTime")),
            Implication::new(
                [Sentence::atom("termTime")],
                Sentence::pred("dEdge", ["ic", "50", "1"]).negate(),
            ),
        ]),
    )
    .unwrap()
}

/// The same graph with every edge strict and an empty belief base.
pub fn investment_dg_strict() -> Dg {
    let dg = investment_dg();
    let edges: Vec<Edge> = dg
        .edges()
        .iter()
        .map(|e| Edge::strict(e.from.clone(), e.to.clone(), e.tag))
        .collect();
    Dg::new(
        dg.decision_nodes().to_vec(),
        dg.intermediate_nodes().to_vec(),
        dg.goal_nodes().to_vec(),
        edges,
        BeliefBase::default(),
    )
    .unwrap()
}

/// The investment graph with `{ct}` strictly less preferred than `{cheap}`.
pub fn investment_pdg() -> Pdg {
    let pref = GoalSetPreference::new([(goal_set(["cheap"]), goal_set(["ct"]))]).unwrap();
    Pdg::new(investment_dg(), pref).unwrap()
}

/// Two decisions over two goals with a conjunctive tag-2 group: `d1` has a
/// direct edge to `g1` only, while `d2` reaches both goals through `a1` and
/// `a2`.
pub fn two_route_dg() -> Dg {
    Dg::new(
        ["d1", "d2"],
        ["a1", "a2"],
        ["g1", "g2"],
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
