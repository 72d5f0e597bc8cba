//! Small example frameworks used throughout the workspace's tests and
//! documentation: accommodation-choice tables and a five-goal preferential
//! framework.

use crate::{goal_set, Adf, GoalSetPreference, Pdf};

/// Three accommodations, two goals; `ic` meets both.
pub fn london_adf() -> Adf {
    Adf::new(
        ["jh", "ic", "ritz"],
        ["cheap", "near"],
        [("jh", vec!["near"]), ("ic", vec!["cheap", "near"]), ("ritz", vec![])],
    )
    .unwrap()
}

/// Two accommodations; nobody is cheap, `jh` is near.
pub fn two_decision_adf() -> Adf {
    Adf::new(["jh", "ritz"], ["cheap", "near"], [("jh", vec!["near"]), ("ritz", vec![])]).unwrap()
}

/// Three accommodations, three goals; everything is clean, `jh` and `ic`
/// split near/cheap.
pub fn clean_goal_adf() -> Adf {
    Adf::new(
        ["jh", "ic", "ritz"],
        ["cheap", "near", "clean"],
        [
            ("jh", vec!["near", "clean"]),
            ("ic", vec!["cheap", "clean"]),
            ("ritz", vec!["clean"]),
        ],
    )
    .unwrap()
}

/// Two decisions over five goals with the preference chain
/// {g5} < {g4} < {g3} < {g4,g5} < {g2} < {g1} (right side more preferred).
pub fn five_goal_pdf() -> Pdf {
    let adf = Adf::new(
        ["d1", "d2"],
        ["g1", "g2", "g3", "g4", "g5"],
        [("d1", vec!["g2", "g4", "g5"]), ("d2", vec!["g2", "g3"])],
    )
    .unwrap();
    let pref = GoalSetPreference::chain([
        goal_set(["g5"]),
        goal_set(["g4"]),
        goal_set(["g3"]),
        goal_set(["g4", "g5"]),
        goal_set(["g2"]),
        goal_set(["g1"]),
    ])
    .unwrap();
    Pdf::new(adf, pref).unwrap()
}

/// Every goals-met table over `n_decisions` decisions (d1, d2, …) and
/// `n_goals` goals (g1, g2, …): 2^(n_decisions * n_goals) frameworks.
/// Used by the exhaustive theorem and property suites.
pub fn all_small_adfs(n_decisions: usize, n_goals: usize) -> Vec<Adf> {
    let decisions: Vec<String> = (1..=n_decisions).map(|i| format!("d{i}")).collect();
    let goals: Vec<String> = (1..=n_goals).map(|i| format!("g{i}")).collect();
    let bits = n_decisions * n_goals;
    (0..1u32 << bits)
        .map(|mask| {
            let gamma: Vec<(String, Vec<String>)> = decisions
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    let met = goals
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| mask >> (i * n_goals + j) & 1 == 1)
                        .map(|(_, g)| g.clone())
                        .collect();
                    (d.clone(), met)
                })
                .collect();
            Adf::new(decisions.clone(), goals.clone(), gamma).unwrap()
        })
        .collect()
}

/// Two accommodations over cheap/near/quiet with the chain
/// {quiet} < {cheap} < {near} < {quiet,near}.
pub fn quiet_near_pdf() -> Pdf {
    let adf = Adf::new(
        ["jh", "ic"],
        ["cheap", "near", "quiet"],
        [("jh", vec!["near", "quiet"]), ("ic", vec!["cheap", "near"])],
    )
    .unwrap();
    let pref = GoalSetPreference::chain([
        goal_set(["quiet"]),
        goal_set(["cheap"]),
        goal_set(["near"]),
        goal_set(["quiet", "near"]),
    ])
    .unwrap();
    Pdf::new(adf, pref).unwrap()
}
