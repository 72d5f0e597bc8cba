//! Non-compensatory multi-attribute decision methods and their
//! structure-preserving translations to decision frameworks.
//!
//! Three classical selection methods are implemented as independent oracles:
//!
//! * the **conjunctive method** selects the alternatives whose attributes
//!   meet all of their matching requirements;
//! * **Pareto efficiency** (with the strict-superset order over goal sets)
//!   selects the decisions whose objective image is not strictly dominated;
//! * the **lexicographic method** eliminates alternatives one attribute at a
//!   time, in decreasing order of importance, skipping attributes held by
//!   nobody.
//!
//! Each method corresponds to a decision-framework criterion under the
//! translations below: conjunctive selection to strong dominance, Pareto
//! efficiency to weak dominance, and the lexicographic method to
//! preferred-set selection when the preference is a total order over
//! singleton goal sets.
//!
//! Decision tables can also be ingested from CSV: the header row names the
//! attributes, the first column names the alternatives, and cells are
//! either `0`/`1` or numeric values tested against per-attribute minimum
//! thresholds.

use std::collections::{BTreeMap, BTreeSet};

use decision_core::{
    goal_set, Adf, AdfError, GoalSet, GoalSetPreference, Pdf, PreferenceError,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("csv parse error: {0}")]
    Csv(#[from] csv::Error),
    #[error("table has no data rows or no attribute columns")]
    EmptyTable,
    #[error("duplicate alternative {0:?}")]
    DuplicateAlternative(String),
    #[error("attribute {0:?} has no matching requirement")]
    UnmatchedAttribute(String),
    #[error("no minimum threshold given for numeric column {0:?}")]
    MissingThreshold(String),
    #[error("cell {cell:?} for ({alternative:?}, {attribute:?}) is neither 0/1 nor numeric")]
    BadCell {
        alternative: String,
        attribute: String,
        cell: String,
    },
    #[error("preference is not a total order over singleton goal sets")]
    NotSingletonTotalOrder,
    #[error(transparent)]
    Framework(#[from] AdfError),
    #[error(transparent)]
    Preference(#[from] PreferenceError),
}

/// Alternatives carrying attributes, each attribute tested against one
/// matching requirement by a boolean requirement function (stored as the
/// set of passing pairs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjunctiveFramework {
    alternatives: Vec<String>,
    attributes_of: BTreeMap<String, BTreeSet<String>>,
    requirements: BTreeSet<String>,
    matching: BTreeMap<String, String>,
    passes: BTreeSet<(String, String)>,
}

impl ConjunctiveFramework {
    /// Builds and validates a conjunctive framework. `matching` must be
    /// total on every attribute used by some alternative, and every
    /// matching requirement must appear in `requirements`.
    pub fn new(
        alternatives: impl IntoIterator<Item = (String, BTreeSet<String>)>,
        requirements: impl IntoIterator<Item = String>,
        matching: impl IntoIterator<Item = (String, String)>,
        passes: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, ClassicalError> {
        let mut names = Vec::new();
        let mut attributes_of = BTreeMap::new();
        for (l, attrs) in alternatives {
            if attributes_of.insert(l.clone(), attrs).is_some() {
                return Err(ClassicalError::DuplicateAlternative(l));
            }
            names.push(l);
        }
        let requirements: BTreeSet<String> = requirements.into_iter().collect();
        let matching: BTreeMap<String, String> = matching.into_iter().collect();
        for attrs in attributes_of.values() {
            for t in attrs {
                match matching.get(t) {
                    Some(r) if requirements.contains(r) => {}
                    _ => return Err(ClassicalError::UnmatchedAttribute(t.clone())),
                }
            }
        }
        Ok(Self {
            alternatives: names,
            attributes_of,
            requirements,
            matching,
            passes: passes.into_iter().collect(),
        })
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn requirements(&self) -> &BTreeSet<String> {
        &self.requirements
    }

    /// True when attribute `t` passes its matching requirement.
    pub fn attribute_passes(&self, t: &str) -> bool {
        self.matching
            .get(t)
            .is_some_and(|r| self.passes.contains(&(t.to_string(), r.clone())))
    }
}

/// Alternatives whose attributes meet all of their matching requirements.
pub fn conjunctive_select(cf: &ConjunctiveFramework) -> Vec<String> {
    cf.alternatives
        .iter()
        .filter(|l| cf.attributes_of[*l].iter().all(|t| cf.attribute_passes(t)))
        .cloned()
        .collect()
}

/// Decision framework in which an alternative meets a requirement-goal
/// exactly when it carries an attribute that passes that requirement.
pub fn adf_from_conjunctive(cf: &ConjunctiveFramework) -> Result<Adf, AdfError> {
    let gamma: Vec<(String, Vec<String>)> = cf
        .alternatives
        .iter()
        .map(|l| {
            let met: Vec<String> = cf.attributes_of[l]
                .iter()
                .filter(|t| cf.attribute_passes(t))
                .map(|t| cf.matching[t].clone())
                .collect();
            (l.clone(), met)
        })
        .collect();
    Adf::new(
        cf.alternatives.clone(),
        cf.requirements.iter().cloned().collect::<Vec<_>>(),
        gamma,
    )
}

/// Conjunctive framework in which each decision carries one private
/// attribute per goal (named `decision:goal`), passing exactly when the
/// decision meets the goal.
pub fn conjunctive_from_adf(adf: &Adf) -> ConjunctiveFramework {
    let alternatives: Vec<(String, BTreeSet<String>)> = adf
        .decisions()
        .iter()
        .map(|d| {
            let attrs: BTreeSet<String> =
                adf.goals().iter().map(|g| format!("{d}:{g}")).collect();
            (d.clone(), attrs)
        })
        .collect();
    let mut matching = BTreeMap::new();
    let mut passes = BTreeSet::new();
    for d in adf.decisions() {
        for g in adf.goals() {
            let t = format!("{d}:{g}");
            matching.insert(t.clone(), g.clone());
            if adf.gamma(d).contains(g) {
                passes.insert((t, g.clone()));
            }
        }
    }
    ConjunctiveFramework::new(
        alternatives,
        adf.goals().iter().cloned(),
        matching,
        passes,
    )
    .expect("translated framework is valid")
}

/// A decision space with a goal-set-valued objective function, ordered by
/// strict superset (more goals met is better).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoFramework {
    decision_space: Vec<String>,
    goals: BTreeSet<String>,
    objective: BTreeMap<String, GoalSet>,
}

impl ParetoFramework {
    /// Builds a Pareto framework; the objective must be total on the
    /// decision space and land inside the powerset of `goals`.
    pub fn new(
        decision_space: impl IntoIterator<Item = String>,
        goals: impl IntoIterator<Item = String>,
        objective: impl IntoIterator<Item = (String, GoalSet)>,
    ) -> Result<Self, ClassicalError> {
        let decision_space: Vec<String> = decision_space.into_iter().collect();
        let goals: BTreeSet<String> = goals.into_iter().collect();
        let objective: BTreeMap<String, GoalSet> = objective.into_iter().collect();
        for d in &decision_space {
            match objective.get(d) {
                Some(img) if img.is_subset(&goals) => {}
                _ => return Err(ClassicalError::EmptyTable),
            }
        }
        Ok(Self {
            decision_space,
            goals,
            objective,
        })
    }

    pub fn decision_space(&self) -> &[String] {
        &self.decision_space
    }

    pub fn objective(&self, d: &str) -> &GoalSet {
        &self.objective[d]
    }
}

/// Decisions whose objective image lies on the Pareto front: no other
/// feasible image is a strict superset of theirs.
pub fn pareto_efficient(pf: &ParetoFramework) -> Vec<String> {
    pf.decision_space
        .iter()
        .filter(|d| {
            !pf.decision_space
                .iter()
                .any(|d2| pf.objective(d2).is_superset(pf.objective(d)) && pf.objective(d2) != pf.objective(d))
        })
        .cloned()
        .collect()
}

/// Pareto framework whose objective function is the goals-met map.
pub fn pareto_from_adf(adf: &Adf) -> ParetoFramework {
    ParetoFramework::new(
        adf.decisions().iter().cloned(),
        adf.goals().iter().cloned(),
        adf.decisions()
            .iter()
            .map(|d| (d.clone(), adf.gamma(d).clone())),
    )
    .expect("translated framework is valid")
}

/// Decision framework in which a decision meets a goal exactly when the
/// goal belongs to its objective image.
pub fn adf_from_pareto(pf: &ParetoFramework) -> Result<Adf, AdfError> {
    Adf::new(
        pf.decision_space.to_vec(),
        pf.goals.iter().cloned().collect::<Vec<_>>(),
        pf.decision_space
            .iter()
            .map(|d| (d.clone(), pf.objective(d).iter().cloned().collect::<Vec<_>>())),
    )
}

/// Alternatives with boolean lexicographic attributes, listed most
/// important first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexFramework {
    alternatives: Vec<String>,
    attributes: Vec<String>,
    has: BTreeSet<(String, String)>,
}

impl LexFramework {
    pub fn new(
        alternatives: impl IntoIterator<Item = String>,
        attributes: impl IntoIterator<Item = String>,
        has: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, ClassicalError> {
        let alternatives: Vec<String> = alternatives.into_iter().collect();
        let attributes: Vec<String> = attributes.into_iter().collect();
        if attributes.iter().collect::<BTreeSet<_>>().len() != attributes.len() {
            return Err(ClassicalError::DuplicateAlternative(
                "attribute order is not a list of distinct attributes".into(),
            ));
        }
        Ok(Self {
            alternatives,
            attributes,
            has: has.into_iter().collect(),
        })
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    /// Attributes in decreasing order of importance.
    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn has(&self, alternative: &str, attribute: &str) -> bool {
        self.has
            .contains(&(alternative.to_string(), attribute.to_string()))
    }
}

/// Survivors of the per-attribute elimination loop: each round keeps the
/// alternatives holding the current attribute, skips the round entirely if
/// nobody holds it, and stops early once a single survivor remains.
pub fn lexicographic_select(lf: &LexFramework) -> Vec<String> {
    let mut survivors: Vec<String> = lf.alternatives.to_vec();
    for x in &lf.attributes {
        if survivors.len() <= 1 {
            break;
        }
        let holders: Vec<String> = survivors
            .iter()
            .filter(|a| lf.has(a, x))
            .cloned()
            .collect();
        if !holders.is_empty() {
            survivors = holders;
        }
    }
    survivors
}

/// Preference-based decision framework whose goals are the lexicographic
/// attributes and whose preference is the total order over singleton goal
/// sets induced by attribute importance.
pub fn pdf_from_lex(lf: &LexFramework) -> Result<Pdf, ClassicalError> {
    let adf = Adf::new(
        lf.alternatives.to_vec(),
        lf.attributes.to_vec(),
        lf.alternatives.iter().map(|a| {
            let held: Vec<String> = lf
                .attributes
                .iter()
                .filter(|x| lf.has(a, x))
                .cloned()
                .collect();
            (a.clone(), held)
        }),
    )?;
    // The chain lists its members from least to most preferred.
    let singletons: Vec<GoalSet> = lf
        .attributes
        .iter()
        .rev()
        .map(|x| goal_set([x.clone()]))
        .collect();
    let preference = GoalSetPreference::chain(singletons)?;
    Ok(Pdf::new(adf, preference)?)
}

/// Inverse translation: requires the preference to be a total order over
/// exactly the singleton goal sets.
pub fn lex_from_pdf(pdf: &Pdf) -> Result<LexFramework, ClassicalError> {
    let goals = pdf.adf().goals();
    let singletons: Vec<GoalSet> = goals.iter().map(|g| goal_set([g.clone()])).collect();
    // A single-goal framework has no pairs to record, so an empty
    // preference is still a total order there.
    let members = pdf.preference().member_sets();
    if !members.iter().all(|m| singletons.contains(m)) {
        return Err(ClassicalError::NotSingletonTotalOrder);
    }
    for a in &singletons {
        for b in &singletons {
            if a != b
                && !pdf.preference().strictly_preferred(a, b)
                && !pdf.preference().strictly_preferred(b, a)
            {
                return Err(ClassicalError::NotSingletonTotalOrder);
            }
        }
    }
    let mut attributes: Vec<String> = goals.to_vec();
    attributes.sort_by(|a, b| {
        if pdf
            .preference()
            .strictly_preferred(&goal_set([a.clone()]), &goal_set([b.clone()]))
        {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let has: Vec<(String, String)> = pdf
        .adf()
        .decisions()
        .iter()
        .flat_map(|d| {
            pdf.adf()
                .gamma(d)
                .iter()
                .map(|g| (d.clone(), g.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    LexFramework::new(pdf.adf().decisions().to_vec(), attributes, has)
}

/// Parsed decision table: alternatives in row order, attributes in header
/// order, and the boolean outcome of each cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTable {
    pub alternatives: Vec<String>,
    pub attributes: Vec<String>,
    pub holds: BTreeSet<(String, String)>,
}

/// Reads a CSV decision table. The header row names the attributes and the
/// first column names the alternatives. A cell of `0` or `1` is taken as
/// is; any other numeric cell requires a minimum threshold for its column
/// and holds exactly when the value is at or above it.
pub fn table_from_csv(
    text: &str,
    minima: &BTreeMap<String, f64>,
) -> Result<DecisionTable, ClassicalError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.len() < 2 {
        return Err(ClassicalError::EmptyTable);
    }
    let attributes: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    let mut alternatives = Vec::new();
    let mut holds = BTreeSet::new();
    for record in reader.records() {
        let record = record?;
        let alt = record.get(0).unwrap_or_default().to_string();
        if alternatives.contains(&alt) {
            return Err(ClassicalError::DuplicateAlternative(alt));
        }
        for (attr, cell) in attributes.iter().zip(record.iter().skip(1)) {
            let held = match cell {
                "0" => false,
                "1" => true,
                other => {
                    let value: f64 = other.parse().map_err(|_| ClassicalError::BadCell {
                        alternative: alt.clone(),
                        attribute: attr.clone(),
                        cell: other.to_string(),
                    })?;
                    let min = minima
                        .get(attr)
                        .ok_or_else(|| ClassicalError::MissingThreshold(attr.clone()))?;
                    value >= *min
                }
            };
            if held {
                holds.insert((alt.clone(), attr.clone()));
            }
        }
        alternatives.push(alt);
    }
    if alternatives.is_empty() {
        return Err(ClassicalError::EmptyTable);
    }
    Ok(DecisionTable {
        alternatives,
        attributes,
        holds,
    })
}

/// Conjunctive framework from a CSV table: each alternative carries one
/// private attribute per column, matched to that column's requirement.
pub fn conjunctive_from_csv(
    text: &str,
    minima: &BTreeMap<String, f64>,
) -> Result<ConjunctiveFramework, ClassicalError> {
    let table = table_from_csv(text, minima)?;
    let mut matching = BTreeMap::new();
    let mut passes = BTreeSet::new();
    let mut alternatives = Vec::new();
    for alt in &table.alternatives {
        let mut attrs = BTreeSet::new();
        for col in &table.attributes {
            let t = format!("{alt}:{col}");
            matching.insert(t.clone(), col.clone());
            if table.holds.contains(&(alt.clone(), col.clone())) {
                passes.insert((t.clone(), col.clone()));
            }
            attrs.insert(t);
        }
        alternatives.push((alt.clone(), attrs));
    }
    ConjunctiveFramework::new(
        alternatives,
        table.attributes.iter().cloned(),
        matching,
        passes,
    )
}

/// Lexicographic framework from a CSV table: column order gives attribute
/// importance, most important first.
pub fn lex_from_csv(
    text: &str,
    minima: &BTreeMap<String, f64>,
) -> Result<LexFramework, ClassicalError> {
    let table = table_from_csv(text, minima)?;
    LexFramework::new(table.alternatives, table.attributes, table.holds)
}

/// Convenience check used by correspondence tests: conjunctive selection on
/// the translated framework against strong dominance on the original.
pub fn strongly_dominant_via_conjunctive(adf: &Adf) -> Vec<String> {
    conjunctive_select(&conjunctive_from_adf(adf))
}

/// Weak dominance computed through the Pareto translation.
pub fn weakly_dominant_via_pareto(adf: &Adf) -> Vec<String> {
    pareto_efficient(&pareto_from_adf(adf))
}
