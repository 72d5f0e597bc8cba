//! Flat explanations: input-level justifications for a decision meeting or
//! missing each decision criterion, computed directly from the goals-met
//! table (and, for preferred-set, the goal-set preference).
//!
//! A flat explanation names the decisions, goals, and preferences that drive
//! the verdict. The positive weakly-dominant and preferred-set forms are not
//! unique, so this crate exposes both a canonical producer ([`flat_explain`],
//! [`flat_explain_preferred`]) and a validity checker
//! ([`check_flat_explanation`]) that accepts any payload satisfying the
//! definitional clauses — the checker, not payload equality, is the notion of
//! correctness for the non-unique forms.

use std::collections::BTreeSet;

use decision_core::{Adf, Criterion, GoalSet, Pdf};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExplanationError {
    #[error("unknown decision `{0}`")]
    UnknownDecision(String),
    #[error("criterion {0:?} needs a preferential framework")]
    NeedsPreference(Criterion),
}

/// A flat explanation; one positive and one negative form per criterion.
///
/// * `SDPos(G)` — d meets every goal in G, which is all of them.
/// * `SDNeg(G)` — the goals d misses.
/// * `DPos(met, unmet)` — d meets `met`; `unmet` is met by nobody.
/// * `DNeg(pairs)` — rival/goal pairs where the rival meets a goal d misses.
/// * `WDPos(coreGoals, witnesses)` — d meets `coreGoals`; each witness
///   `(g, d')` is a goal d meets and the rival d' misses. Every rival is
///   either confined to `coreGoals` or named in a witness.
/// * `WDNeg(rivals)` — the rivals meeting strictly more goals than d.
/// * `PSPos(coreGoals, witnesses)` — like `WDPos` but each witness pairs a
///   comparable goal set met by d (and not by the rival) that outranks
///   whatever comparable sets the rival holds over d.
/// * `PSNeg(rivals)` — rivals that strictly goal-dominate d or meet a
///   comparable set preferred to everything d meets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlatExplanation {
    SDPos(GoalSet),
    SDNeg(GoalSet),
    #[serde(rename_all = "camelCase")]
    DPos { met_goals: GoalSet, unmet_goals: GoalSet },
    DNeg(BTreeSet<(String, String)>),
    #[serde(rename_all = "camelCase")]
    WDPos { core_goals: GoalSet, witnesses: BTreeSet<(String, String)> },
    WDNeg(BTreeSet<String>),
    #[serde(rename_all = "camelCase")]
    PSPos { core_goals: GoalSet, witnesses: BTreeSet<(GoalSet, String)> },
    PSNeg(BTreeSet<String>),
}

/// The framework an explanation is checked against.
#[derive(Debug, Clone, Copy)]
pub enum Context<'a> {
    Adf(&'a Adf),
    Pdf(&'a Pdf),
}

impl<'a> Context<'a> {
    fn adf(&self) -> &'a Adf {
        match self {
            Context::Adf(a) => a,
            Context::Pdf(p) => p.adf(),
        }
    }
}

/// Canonical flat explanation for `d` under an ADF criterion. The positive
/// form is returned exactly when `d` satisfies the criterion.
pub fn flat_explain(
    adf: &Adf,
    d: &str,
    criterion: Criterion,
) -> Result<FlatExplanation, ExplanationError> {
    if !adf.is_decision(d) {
        return Err(ExplanationError::UnknownDecision(d.to_string()));
    }
    if criterion == Criterion::PreferredSet {
        return Err(ExplanationError::NeedsPreference(criterion));
    }
    let met = adf.gamma(d);
    let missed: GoalSet = adf.goal_set().difference(met).cloned().collect();
    Ok(match criterion {
        Criterion::StronglyDominant => {
            if adf.satisfies(d, criterion) {
                FlatExplanation::SDPos(adf.goal_set())
            } else {
                FlatExplanation::SDNeg(missed)
            }
        }
        Criterion::Dominant => {
            if adf.satisfies(d, criterion) {
                FlatExplanation::DPos { met_goals: met.clone(), unmet_goals: missed }
            } else {
                FlatExplanation::DNeg(dominant_counterexamples(adf, d))
            }
        }
        Criterion::WeaklyDominant => {
            if adf.satisfies(d, criterion) {
                FlatExplanation::WDPos {
                    core_goals: met.clone(),
                    witnesses: weakly_dominant_witnesses(adf, d),
                }
            } else {
                FlatExplanation::WDNeg(strict_dominators(adf, d))
            }
        }
        Criterion::PreferredSet => unreachable!(),
    })
}

/// Canonical flat explanation for `d` being (or not being) preferred-set.
pub fn flat_explain_preferred(pdf: &Pdf, d: &str) -> Result<FlatExplanation, ExplanationError> {
    let adf = pdf.adf();
    if !adf.is_decision(d) {
        return Err(ExplanationError::UnknownDecision(d.to_string()));
    }
    if pdf.is_preferred_set(d) {
        Ok(FlatExplanation::PSPos {
            core_goals: adf.gamma(d).clone(),
            witnesses: preferred_set_witnesses(pdf, d),
        })
    } else {
        Ok(FlatExplanation::PSNeg(preferred_set_rejectors(pdf, d)))
    }
}

/// Rival/goal pairs witnessing that `d` is not dominant: the rival meets a
/// goal that `d` misses. This set is the unique negative explanation.
pub fn dominant_counterexamples(adf: &Adf, d: &str) -> BTreeSet<(String, String)> {
    let met = adf.gamma(d);
    let mut out = BTreeSet::new();
    for di in adf.decisions() {
        for g in adf.goals() {
            if !met.contains(g) && adf.gamma(di).contains(g) {
                out.insert((di.clone(), g.clone()));
            }
        }
    }
    out
}

/// The rivals meeting strictly more goals than `d`; unique negative
/// explanation for weak dominance.
pub fn strict_dominators(adf: &Adf, d: &str) -> BTreeSet<String> {
    let met = adf.gamma(d);
    adf.decisions()
        .iter()
        .filter(|d2| {
            let other = adf.gamma(d2);
            met.len() < other.len() && met.is_subset(other)
        })
        .cloned()
        .collect()
}

/// Canonical witnesses for a weakly dominant `d`: for every rival not wholly
/// inside γ(d), the smallest goal d meets and the rival misses.
fn weakly_dominant_witnesses(adf: &Adf, d: &str) -> BTreeSet<(String, String)> {
    let met = adf.gamma(d);
    let mut out = BTreeSet::new();
    for d2 in adf.decisions() {
        if d2 == d || adf.gamma(d2).is_subset(met) {
            continue;
        }
        // d is weakly dominant, so γ(d) ⊄ γ(d2) and a separating goal exists.
        let g = met
            .iter()
            .find(|g| !adf.gamma(d2).contains(*g))
            .expect("weakly dominant decision must separate from uncovered rival");
        out.insert((g.clone(), d2.clone()));
    }
    out
}

/// The comparable sets the rival `d2` holds over `d`: met by `d2`, missed
/// by `d`.
fn problematic_sets(pdf: &Pdf, d: &str, d2: &str) -> Vec<GoalSet> {
    let met = pdf.adf().gamma(d);
    let met2 = pdf.adf().gamma(d2);
    pdf.comparable_goal_set()
        .into_iter()
        .filter(|s| !s.is_subset(met) && s.is_subset(met2))
        .collect()
}

/// Canonical witnesses for a preferred-set `d`: per uncovered rival, one
/// outranking comparable set per problematic set (or a bare separating goal
/// when the preference says nothing about the pair).
fn preferred_set_witnesses(pdf: &Pdf, d: &str) -> BTreeSet<(GoalSet, String)> {
    let adf = pdf.adf();
    let met = adf.gamma(d);
    let cgset = pdf.comparable_goal_set();
    let mut out = BTreeSet::new();
    for d2 in adf.decisions() {
        if d2 == d || adf.gamma(d2).is_subset(met) {
            continue;
        }
        let met2 = adf.gamma(d2);
        let probes = problematic_sets(pdf, d, d2);
        if probes.is_empty() {
            // Nothing comparable separates the pair; name a separating goal.
            let g = met
                .iter()
                .find(|g| !met2.contains(*g))
                .expect("preferred-set decision must separate from uncovered rival");
            out.insert((BTreeSet::from([g.clone()]), d2.clone()));
            continue;
        }
        for s in probes {
            let witness = cgset
                .iter()
                .find(|s2| {
                    pdf.preference().at_least_as_preferred(s2, &s)
                        && s2.is_subset(met)
                        && !s2.is_subset(met2)
                })
                .expect("preferred-set decision must outrank every problematic set");
            out.insert((witness.clone(), d2.clone()));
        }
    }
    out
}

/// The unique negative explanation for preferred-set: rivals that strictly
/// goal-dominate `d`, or meet a comparable set at least as preferred as
/// every comparable set inside γ(d).
pub fn preferred_set_rejectors(pdf: &Pdf, d: &str) -> BTreeSet<String> {
    let adf = pdf.adf();
    let met = adf.gamma(d);
    let cgset = pdf.comparable_goal_set();
    adf.decisions()
        .iter()
        .filter(|d2| *d2 != d)
        .filter(|d2| {
            let met2 = adf.gamma(d2);
            let dominates = met.len() < met2.len() && met.is_subset(met2);
            let outranks = cgset.iter().any(|s| {
                s.is_subset(met2)
                    && cgset
                        .iter()
                        .filter(|s2| s2.is_subset(met))
                        .all(|s2| pdf.preference().at_least_as_preferred(s, s2))
            });
            dominates || outranks
        })
        .cloned()
        .collect()
}

/// Checks a payload against every clause of the matching definition. The
/// positive/negative branch is decided by the criterion verdict, never by
/// payload shape.
pub fn check_flat_explanation(ctx: Context, d: &str, explanation: &FlatExplanation) -> bool {
    let adf = ctx.adf();
    if !adf.is_decision(d) {
        return false;
    }
    let met = adf.gamma(d);
    let missed: GoalSet = adf.goal_set().difference(met).cloned().collect();
    match explanation {
        FlatExplanation::SDPos(s) => {
            adf.satisfies(d, Criterion::StronglyDominant) && *s == adf.goal_set()
        }
        FlatExplanation::SDNeg(s) => {
            !adf.satisfies(d, Criterion::StronglyDominant) && *s == missed
        }
        FlatExplanation::DPos { met_goals, unmet_goals } => {
            adf.satisfies(d, Criterion::Dominant) && *met_goals == *met && *unmet_goals == missed
        }
        FlatExplanation::DNeg(pairs) => {
            !adf.satisfies(d, Criterion::Dominant) && *pairs == dominant_counterexamples(adf, d)
        }
        FlatExplanation::WDPos { core_goals, witnesses } => {
            adf.satisfies(d, Criterion::WeaklyDominant)
                && core_goals.is_subset(met)
                && witnesses.iter().all(|(g, d2)| {
                    d2 != d
                        && adf.is_decision(d2)
                        && met.contains(g)
                        && !adf.gamma(d2).contains(g)
                })
                && covered(adf, d, core_goals, witnesses.iter().map(|(_, d2)| d2.as_str()))
        }
        FlatExplanation::WDNeg(rivals) => {
            !adf.satisfies(d, Criterion::WeaklyDominant) && *rivals == strict_dominators(adf, d)
        }
        FlatExplanation::PSPos { core_goals, witnesses } => {
            let Context::Pdf(pdf) = ctx else { return false };
            pdf.is_preferred_set(d)
                && core_goals.is_subset(met)
                && witnesses.iter().all(|(s, d2)| {
                    d2 != d && adf.is_decision(d2) && s.is_subset(met) && !s.is_subset(adf.gamma(d2))
                })
                && covered(adf, d, core_goals, witnesses.iter().map(|(_, d2)| d2.as_str()))
                && adf.decisions().iter().filter(|d2| *d2 != d).all(|d2| {
                    // Every comparable set the rival holds over d must be
                    // outranked by some witness paired with that rival.
                    problematic_sets(pdf, d, d2).iter().all(|probe| {
                        witnesses.iter().any(|(s, dw)| {
                            dw == d2 && pdf.preference().at_least_as_preferred(s, probe)
                        })
                    })
                })
        }
        FlatExplanation::PSNeg(rivals) => {
            let Context::Pdf(pdf) = ctx else { return false };
            !pdf.is_preferred_set(d) && *rivals == preferred_set_rejectors(pdf, d)
        }
    }
}

/// Coverage clause shared by the positive weakly-dominant and preferred-set
/// forms: each rival is confined to the core goals or named in a witness.
fn covered<'a>(
    adf: &Adf,
    d: &str,
    core_goals: &GoalSet,
    witnessed: impl Iterator<Item = &'a str>,
) -> bool {
    let witnessed: BTreeSet<&str> = witnessed.collect();
    adf.decisions()
        .iter()
        .filter(|d2| *d2 != d)
        .all(|d2| adf.gamma(d2).is_subset(core_goals) || witnessed.contains(d2.as_str()))
}
