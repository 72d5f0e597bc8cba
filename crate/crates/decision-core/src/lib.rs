//! Abstract decision frameworks (ADFs), their preferential extension (PDFs),
//! and direct evaluation of the four decision criteria: strongly dominant,
//! dominant, weakly dominant, and preferred-set.
//!
//! Everything here evaluates criteria by plain set comparisons over the
//! goals-met table. This crate is the ground-truth oracle that the
//! argumentation-based pipeline elsewhere in the workspace is checked against,
//! so it deliberately contains no argumentation machinery.
//!
//! ```
//! use decision_core::{Adf, Criterion};
//!
//! let adf = Adf::new(
//!     ["jh", "ic", "ritz"],
//!     ["cheap", "near"],
//!     [("jh", vec!["near"]), ("ic", vec!["cheap", "near"]), ("ritz", vec![])],
//! )
//! .unwrap();
//! assert_eq!(adf.evaluate(Criterion::StronglyDominant), vec!["ic"]);
//! ```

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub mod fixtures;

/// A set of goal identifiers. Ordered so that derived output is deterministic.
pub type GoalSet = BTreeSet<String>;

/// Errors raised while validating an [`Adf`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdfError {
    #[error("an ADF needs at least one decision")]
    EmptyDecisions,
    #[error("an ADF needs at least one goal")]
    EmptyGoals,
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("goals-met table mentions unknown decision `{0}`")]
    UnknownDecisionInGamma(String),
    #[error("goals-met entry for `{decision}` mentions unknown goal `{goal}`")]
    UnknownGoalInGamma { decision: String, goal: String },
}

/// Errors raised while validating a [`GoalSetPreference`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PreferenceError {
    #[error("a goal set cannot be strictly preferred to itself: {0:?}")]
    Reflexive(Vec<String>),
    #[error("strict preference contains a cycle through {0:?}")]
    Cyclic(Vec<String>),
    #[error("preference mentions goal `{0}` not declared in the framework")]
    UnknownGoal(String),
}

/// The decision criteria.
///
/// `PreferredSet` additionally needs a preference over goal sets and is only
/// evaluated on a [`Pdf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    StronglyDominant,
    Dominant,
    WeaklyDominant,
    PreferredSet,
}

impl Criterion {
    /// Short lowercase name, as used by the command-line surface.
    pub fn short_name(self) -> &'static str {
        match self {
            Criterion::StronglyDominant => "sd",
            Criterion::Dominant => "d",
            Criterion::WeaklyDominant => "wd",
            Criterion::PreferredSet => "ps",
        }
    }
}

/// An abstract decision framework: decisions, goals, and the goals-met table
/// γ mapping each decision to the set of goals it meets.
///
/// Decisions and goals keep their declaration order; all result sets are
/// reported in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adf {
    decisions: Vec<String>,
    goals: Vec<String>,
    gamma: BTreeMap<String, GoalSet>,
}

impl Adf {
    /// Validates and builds an ADF. Missing γ entries default to the empty
    /// goal set; entries must reference declared identifiers only.
    pub fn new<D, G, T, TG>(decisions: D, goals: G, gamma: T) -> Result<Self, AdfError>
    where
        D: IntoIterator,
        D::Item: Into<String>,
        G: IntoIterator,
        G::Item: Into<String>,
        T: IntoIterator<Item = (TG, Vec<TG>)>,
        TG: Into<String>,
    {
        let decisions: Vec<String> = decisions.into_iter().map(Into::into).collect();
        let goals: Vec<String> = goals.into_iter().map(Into::into).collect();
        if decisions.is_empty() {
            return Err(AdfError::EmptyDecisions);
        }
        if goals.is_empty() {
            return Err(AdfError::EmptyGoals);
        }
        let mut seen = BTreeSet::new();
        for id in decisions.iter().chain(goals.iter()) {
            if !seen.insert(id.clone()) {
                return Err(AdfError::DuplicateId(id.clone()));
            }
        }
        let goal_set: BTreeSet<&String> = goals.iter().collect();
        let mut table: BTreeMap<String, GoalSet> =
            decisions.iter().map(|d| (d.clone(), GoalSet::new())).collect();
        for (d, gs) in gamma {
            let d: String = d.into();
            if !table.contains_key(&d) {
                return Err(AdfError::UnknownDecisionInGamma(d));
            }
            let mut met = GoalSet::new();
            for g in gs {
                let g: String = g.into();
                if !goal_set.contains(&g) {
                    return Err(AdfError::UnknownGoalInGamma { decision: d, goal: g });
                }
                met.insert(g);
            }
            table.insert(d, met);
        }
        Ok(Adf { decisions, goals, gamma: table })
    }

    /// Decisions in declaration order.
    pub fn decisions(&self) -> &[String] {
        &self.decisions
    }

    /// Goals in declaration order.
    pub fn goals(&self) -> &[String] {
        &self.goals
    }

    /// All goals as a set.
    pub fn goal_set(&self) -> GoalSet {
        self.goals.iter().cloned().collect()
    }

    /// The goals met by `d`. Panics if `d` is not a decision of this ADF.
    pub fn gamma(&self, d: &str) -> &GoalSet {
        &self.gamma[d]
    }

    pub fn is_decision(&self, d: &str) -> bool {
        self.gamma.contains_key(d)
    }

    /// Direct evaluation of the strongly dominant, dominant, or weakly
    /// dominant criterion. Results come back in declaration order.
    ///
    /// Panics on `Criterion::PreferredSet`; that criterion needs a [`Pdf`].
    pub fn evaluate(&self, criterion: Criterion) -> Vec<String> {
        self.decisions
            .iter()
            .filter(|d| self.satisfies(d, criterion))
            .cloned()
            .collect()
    }

    /// Whether a single decision satisfies the given (ADF) criterion.
    pub fn satisfies(&self, d: &str, criterion: Criterion) -> bool {
        let met = self.gamma(d);
        match criterion {
            // d meets every goal.
            Criterion::StronglyDominant => met.len() == self.goals.len(),
            // no goal missed by d is met by any decision.
            Criterion::Dominant => self
                .goals
                .iter()
                .filter(|g| !met.contains(*g))
                .all(|g| self.gamma.values().all(|other| !other.contains(g))),
            // no rival meets strictly more goals than d.
            Criterion::WeaklyDominant => self
                .decisions
                .iter()
                .all(|d2| d2 == d || !is_strict_subset(met, self.gamma(d2))),
            Criterion::PreferredSet => {
                panic!("preferred-set evaluation needs a Pdf; call Pdf::preferred_set_decisions")
            }
        }
    }
}

fn is_strict_subset(a: &GoalSet, b: &GoalSet) -> bool {
    a.len() < b.len() && a.is_subset(b)
}

/// A strict preference over goal sets: `prefer(A, B)` states that A is
/// strictly preferred to B. The non-strict order is the reflexive closure of
/// the transitive closure of the stored pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GoalSetPreference {
    strict: BTreeSet<(GoalSet, GoalSet)>,
}

impl GoalSetPreference {
    /// Builds a strict preference from (preferred, less-preferred) pairs and
    /// checks it is the strict part of a partial order (irreflexive, acyclic
    /// under transitive closure).
    pub fn new<I>(pairs: I) -> Result<Self, PreferenceError>
    where
        I: IntoIterator<Item = (GoalSet, GoalSet)>,
    {
        let strict: BTreeSet<(GoalSet, GoalSet)> = pairs.into_iter().collect();
        for (a, b) in &strict {
            if a == b {
                return Err(PreferenceError::Reflexive(a.iter().cloned().collect()));
            }
        }
        let pref = GoalSetPreference { strict };
        for s in pref.member_sets() {
            if pref.strictly_preferred(&s, &s) {
                return Err(PreferenceError::Cyclic(s.iter().cloned().collect()));
            }
        }
        Ok(pref)
    }

    pub fn is_empty(&self) -> bool {
        self.strict.is_empty()
    }

    /// The stored strict pairs (not transitively closed).
    pub fn strict_pairs(&self) -> impl Iterator<Item = &(GoalSet, GoalSet)> {
        self.strict.iter()
    }

    /// Every goal set mentioned on either side of the relation. This is the
    /// comparable goal set: exactly the sets related to some other set.
    pub fn member_sets(&self) -> BTreeSet<GoalSet> {
        self.strict
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    /// Transitive closure of the stored strict pairs: is `a` strictly
    /// preferred to `b`?
    pub fn strictly_preferred(&self, a: &GoalSet, b: &GoalSet) -> bool {
        let mut frontier = vec![a.clone()];
        let mut seen: BTreeSet<GoalSet> = BTreeSet::new();
        while let Some(x) = frontier.pop() {
            for (p, q) in &self.strict {
                if *p == x && seen.insert(q.clone()) {
                    if q == b {
                        return true;
                    }
                    frontier.push(q.clone());
                }
            }
        }
        false
    }

    /// Non-strict order: equality or strict preference.
    pub fn at_least_as_preferred(&self, a: &GoalSet, b: &GoalSet) -> bool {
        a == b || self.strictly_preferred(a, b)
    }

    /// Convenience constructor: a chain written from least preferred to most
    /// preferred, i.e. `chain([s1, s2, s3])` makes s3 the most preferred and
    /// stores the adjacent strict pairs.
    pub fn chain<I>(sets: I) -> Result<Self, PreferenceError>
    where
        I: IntoIterator<Item = GoalSet>,
    {
        let sets: Vec<GoalSet> = sets.into_iter().collect();
        Self::new(
            sets.windows(2)
                .map(|w| (w[1].clone(), w[0].clone()))
                .collect::<Vec<_>>(),
        )
    }
}

/// A preferential decision framework: an ADF plus a strict preference over
/// goal sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdf {
    adf: Adf,
    preference: GoalSetPreference,
}

impl Pdf {
    /// Validates that every goal mentioned by the preference is declared.
    pub fn new(adf: Adf, preference: GoalSetPreference) -> Result<Self, PreferenceError> {
        let declared: BTreeSet<&String> = adf.goals.iter().collect();
        for s in preference.member_sets() {
            for g in &s {
                if !declared.contains(g) {
                    return Err(PreferenceError::UnknownGoal(g.clone()));
                }
            }
        }
        Ok(Pdf { adf, preference })
    }

    pub fn adf(&self) -> &Adf {
        &self.adf
    }

    pub fn preference(&self) -> &GoalSetPreference {
        &self.preference
    }

    /// The comparable goal set: every goal set that the preference relates to
    /// some other goal set. Nothing outside the relation participates.
    pub fn comparable_goal_set(&self) -> BTreeSet<GoalSet> {
        self.preference.member_sets()
    }

    /// Whether `d` survives the comparable-goal-set test against rival `d2`:
    /// for every comparable set s met by `d2` but not by `d`, some comparable
    /// set s' at least as preferred as s is met by `d` but not by `d2`.
    pub fn beats_on_comparable_sets(&self, d: &str, d2: &str) -> bool {
        let met = self.adf.gamma(d);
        let met2 = self.adf.gamma(d2);
        let cgset = self.comparable_goal_set();
        cgset
            .iter()
            .filter(|s| !s.is_subset(met) && s.is_subset(met2))
            .all(|s| {
                cgset.iter().any(|s2| {
                    self.preference.at_least_as_preferred(s2, s)
                        && s2.is_subset(met)
                        && !s2.is_subset(met2)
                })
            })
    }

    /// Whether a single decision is preferred-set: weakly dominant, and
    /// passing the comparable-goal-set test against every other weakly
    /// dominant decision.
    pub fn is_preferred_set(&self, d: &str) -> bool {
        if !self.adf.satisfies(d, Criterion::WeaklyDominant) {
            return false;
        }
        self.adf
            .decisions
            .iter()
            .filter(|d2| *d2 != d && self.adf.satisfies(d2, Criterion::WeaklyDominant))
            .all(|d2| self.beats_on_comparable_sets(d, d2))
    }

    /// All preferred-set decisions, in declaration order.
    pub fn preferred_set_decisions(&self) -> Vec<String> {
        self.adf
            .decisions
            .iter()
            .filter(|d| self.is_preferred_set(d))
            .cloned()
            .collect()
    }
}

/// Builds a [`GoalSet`] from string-likes; mostly for tests and fixtures.
pub fn goal_set<I>(goals: I) -> GoalSet
where
    I: IntoIterator,
    I::Item: Into<String>,
{
    goals.into_iter().map(Into::into).collect()
}
