//! Comparable goal sets and preferred-set evaluation: worked examples,
//! validation, and randomized containment properties.

use decision_core::fixtures::{all_small_adfs, five_goal_pdf, london_adf, quiet_near_pdf};
use decision_core::{goal_set, Criterion, GoalSet, GoalSetPreference, Pdf, PreferenceError};
use proptest::prelude::*;

#[test]
fn five_goal_comparable_set() {
    let pdf = five_goal_pdf();
    let expected: Vec<GoalSet> = vec![
        goal_set(["g1"]),
        goal_set(["g2"]),
        goal_set(["g3"]),
        goal_set(["g4"]),
        goal_set(["g5"]),
        goal_set(["g4", "g5"]),
    ];
    let got: Vec<GoalSet> = pdf.comparable_goal_set().into_iter().collect();
    assert_eq!(got.len(), expected.len());
    for s in expected {
        assert!(got.contains(&s), "missing comparable set {s:?}");
    }
}

#[test]
fn empty_preference_has_empty_comparable_set() {
    let pdf = Pdf::new(london_adf(), GoalSetPreference::default()).unwrap();
    assert!(pdf.comparable_goal_set().is_empty());
}

#[test]
fn single_pair_comparable_set() {
    let adf = decision_core::Adf::new(["d"], ["a", "b"], [("d", vec!["a"])]).unwrap();
    let pref = GoalSetPreference::new([(goal_set(["a"]), goal_set(["b"]))]).unwrap();
    let pdf = Pdf::new(adf, pref).unwrap();
    let cg = pdf.comparable_goal_set();
    assert_eq!(cg.len(), 2);
    assert!(cg.contains(&goal_set(["a"])) && cg.contains(&goal_set(["b"])));
}

#[test]
fn five_goal_preferred_set_is_d1() {
    let pdf = five_goal_pdf();
    assert_eq!(pdf.preferred_set_decisions(), vec!["d1"]);
}

#[test]
fn quiet_near_preferred_set_is_jh() {
    let pdf = quiet_near_pdf();
    assert_eq!(pdf.preferred_set_decisions(), vec!["jh"]);
}

#[test]
fn chain_direction_is_right_more_preferred() {
    let pdf = five_goal_pdf();
    let p = pdf.preference();
    assert!(p.strictly_preferred(&goal_set(["g1"]), &goal_set(["g2"])));
    assert!(p.strictly_preferred(&goal_set(["g2"]), &goal_set(["g5"])), "transitive closure");
    assert!(!p.strictly_preferred(&goal_set(["g5"]), &goal_set(["g4"])));
    assert!(p.at_least_as_preferred(&goal_set(["g3"]), &goal_set(["g3"])));
}

#[test]
fn preference_validation() {
    assert_eq!(
        GoalSetPreference::new([(goal_set(["a"]), goal_set(["a"]))]),
        Err(PreferenceError::Reflexive(vec!["a".into()]))
    );
    let cyclic = GoalSetPreference::new([
        (goal_set(["a"]), goal_set(["b"])),
        (goal_set(["b"]), goal_set(["a"])),
    ]);
    assert!(matches!(cyclic, Err(PreferenceError::Cyclic(_))));
    let pref = GoalSetPreference::new([(goal_set(["zzz"]), goal_set(["b"]))]).unwrap();
    let adf = decision_core::Adf::new(["d"], ["b"], [("d", vec!["b"])]).unwrap();
    assert_eq!(Pdf::new(adf, pref), Err(PreferenceError::UnknownGoal("zzz".into())));
}

/// A uniquely strongly dominant decision is the unique preferred-set decision
/// under any preference: it is the sole weakly dominant decision, and the
/// comparable-goal-set test against no rivals passes vacuously.
#[test]
fn unique_strongly_dominant_survives_any_preference() {
    let subsets: Vec<GoalSet> = vec![
        goal_set(["g1"]),
        goal_set(["g2"]),
        goal_set(["g1", "g2"]),
        goal_set(["g3"]),
    ];
    for adf in all_small_adfs(3, 3) {
        let sd = adf.evaluate(Criterion::StronglyDominant);
        if sd.len() != 1 {
            continue;
        }
        let wd = adf.evaluate(Criterion::WeaklyDominant);
        if wd.len() != 1 {
            continue;
        }
        let pref = GoalSetPreference::chain(subsets.clone()).unwrap();
        let pdf = Pdf::new(adf, pref).unwrap();
        assert_eq!(pdf.preferred_set_decisions(), sd);
    }
}

fn arb_goal_subset() -> impl Strategy<Value = GoalSet> {
    proptest::collection::btree_set(prop_oneof!["g1", "g2", "g3"].prop_map(String::from), 1..=3)
}

proptest! {
    /// Preferred-set decisions are always weakly dominant.
    #[test]
    fn preferred_set_is_subset_of_weakly_dominant(
        mask in 0u32..512,
        chain in proptest::collection::vec(arb_goal_subset(), 0..4),
    ) {
        let adf = all_small_adfs(3, 3)[mask as usize].clone();
        // Drop duplicates so the chain stays irreflexive and acyclic.
        let mut seen = Vec::new();
        for s in chain {
            if !seen.contains(&s) {
                seen.push(s);
            }
        }
        let pref = GoalSetPreference::chain(seen).unwrap();
        let pdf = Pdf::new(adf, pref).unwrap();
        let wd = pdf.adf().evaluate(Criterion::WeaklyDominant);
        for d in pdf.preferred_set_decisions() {
            prop_assert!(wd.contains(&d));
        }
    }
}
