//! Library backing the `decide` binary: JSON problem files, criterion
//! evaluation, explanation emission, and canonical ABA export.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use aba_engine::Sentence;
use aba_mappings::{
    dominant_aba, preferred_set_aba, strongly_dominant_aba, weakly_dominant_aba, MappedFramework,
};
use decision_core::{Adf, Criterion, GoalSetPreference, Pdf};
use decision_graphs::{
    criterion_aba_dg, dg_to_adf, pdg_to_pdf, preferred_set_aba_pdg, BeliefBase, Dg, Edge,
    Implication, Pdg,
};
use dialogical_explanations::{
    dialogical_explain, render_dialogue, render_dot, tree_to_json, ExplainError, Source, Verdict,
};
use flat_explanations::{flat_explain, flat_explain_preferred, ExplanationError, FlatExplanation};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

/// Errors surfaced to the command line. [`CliError::exit_code`] maps them to
/// the process exit status: 2 for user errors, 1 for internal ones.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read problem file: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("criterion `ps` needs a preference; give a pdf or pdg problem")]
    CriterionMismatch,
    #[error("unknown decision `{0}`")]
    UnknownDecision(String),
    #[error("{0}")]
    BadArgument(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            _ => 2,
        }
    }

    fn schema(message: impl fmt::Display) -> Self {
        CliError::Schema {
            line: 0,
            column: 0,
            message: message.to_string(),
        }
    }
}

/// A parsed problem file: one of the four framework kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    Adf(Adf),
    Pdf(Pdf),
    Dg(Dg),
    Pdg(Pdg),
}

#[derive(Debug, Serialize, Deserialize)]
struct PreferencePair {
    prefer: Vec<String>,
    over: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeSpec {
    from: String,
    to: String,
    tag: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    defeasible: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct ImplicationSpec {
    #[serde(default)]
    body: Vec<String>,
    head: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ProblemSpec {
    Adf {
        decisions: Vec<String>,
        goals: Vec<String>,
        gamma: BTreeMap<String, Vec<String>>,
    },
    Pdf {
        decisions: Vec<String>,
        goals: Vec<String>,
        gamma: BTreeMap<String, Vec<String>>,
        preference: Vec<PreferencePair>,
    },
    Dg {
        decisions: Vec<String>,
        intermediates: Vec<String>,
        goals: Vec<String>,
        edges: Vec<EdgeSpec>,
        #[serde(rename = "beliefBase", default)]
        belief_base: Vec<ImplicationSpec>,
    },
    Pdg {
        decisions: Vec<String>,
        intermediates: Vec<String>,
        goals: Vec<String>,
        edges: Vec<EdgeSpec>,
        #[serde(rename = "beliefBase", default)]
        belief_base: Vec<ImplicationSpec>,
        preference: Vec<PreferencePair>,
    },
}

/// Parses a sentence written as `functor`, `functor(a,b)`, or with a leading
/// `~` for its negation.
fn parse_sentence(text: &str) -> Result<Sentence, CliError> {
    let text = text.trim();
    let (negated, rest) = match text.strip_prefix('~') {
        Some(rest) => (true, rest.trim()),
        None => (false, text),
    };
    let sentence = match rest.split_once('(') {
        None => Sentence::atom(rest),
        Some((functor, args)) => {
            let args = args.strip_suffix(')').ok_or_else(|| {
                CliError::schema(format!("unbalanced parentheses in sentence `{text}`"))
            })?;
            Sentence::pred(functor.trim(), args.split(',').map(str::trim))
        }
    };
    if sentence.functor.is_empty() {
        return Err(CliError::schema(format!("empty sentence in `{text}`")));
    }
    Ok(if negated { sentence.negate() } else { sentence })
}

fn build_preference(pairs: &[PreferencePair]) -> Result<GoalSetPreference, CliError> {
    GoalSetPreference::new(pairs.iter().map(|p| {
        (
            p.prefer.iter().cloned().collect(),
            p.over.iter().cloned().collect(),
        )
    }))
    .map_err(CliError::schema)
}

fn build_adf(
    decisions: Vec<String>,
    goals: Vec<String>,
    gamma: BTreeMap<String, Vec<String>>,
) -> Result<Adf, CliError> {
    Adf::new(decisions, goals, gamma).map_err(CliError::schema)
}

fn build_dg(
    decisions: Vec<String>,
    intermediates: Vec<String>,
    goals: Vec<String>,
    edges: Vec<EdgeSpec>,
    belief_base: Vec<ImplicationSpec>,
) -> Result<Dg, CliError> {
    let edges = edges.into_iter().map(|e| {
        if e.defeasible {
            Edge::defeasible(e.from, e.to, e.tag)
        } else {
            Edge::strict(e.from, e.to, e.tag)
        }
    });
    let implications = belief_base
        .into_iter()
        .map(|i| {
            let body = i
                .body
                .iter()
                .map(|s| parse_sentence(s))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Implication::new(body, parse_sentence(&i.head)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Dg::new(
        decisions,
        intermediates,
        goals,
        edges.collect::<Vec<_>>(),
        BeliefBase::new(implications),
    )
    .map_err(CliError::schema)
}

/// Parses a JSON problem description.
pub fn parse_problem_str(text: &str) -> Result<Problem, CliError> {
    let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| CliError::Schema {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    match spec {
        ProblemSpec::Adf {
            decisions,
            goals,
            gamma,
        } => Ok(Problem::Adf(build_adf(decisions, goals, gamma)?)),
        ProblemSpec::Pdf {
            decisions,
            goals,
            gamma,
            preference,
        } => {
            let adf = build_adf(decisions, goals, gamma)?;
            let pref = build_preference(&preference)?;
            Ok(Problem::Pdf(Pdf::new(adf, pref).map_err(CliError::schema)?))
        }
        ProblemSpec::Dg {
            decisions,
            intermediates,
            goals,
            edges,
            belief_base,
        } => Ok(Problem::Dg(build_dg(
            decisions,
            intermediates,
            goals,
            edges,
            belief_base,
        )?)),
        ProblemSpec::Pdg {
            decisions,
            intermediates,
            goals,
            edges,
            belief_base,
            preference,
        } => {
            let dg = build_dg(decisions, intermediates, goals, edges, belief_base)?;
            let pref = build_preference(&preference)?;
            Ok(Problem::Pdg(Pdg::new(dg, pref).map_err(CliError::schema)?))
        }
    }
}

/// Reads and parses a problem file.
pub fn parse_problem(path: impl AsRef<Path>) -> Result<Problem, CliError> {
    parse_problem_str(&std::fs::read_to_string(path)?)
}

fn preference_pairs(pref: &GoalSetPreference) -> Vec<PreferencePair> {
    pref.strict_pairs()
        .map(|(more, less)| PreferencePair {
            prefer: more.iter().cloned().collect(),
            over: less.iter().cloned().collect(),
        })
        .collect()
}

fn adf_fields(adf: &Adf) -> (Vec<String>, Vec<String>, BTreeMap<String, Vec<String>>) {
    let gamma = adf
        .decisions()
        .iter()
        .map(|d| (d.clone(), adf.gamma(d).iter().cloned().collect()))
        .collect();
    (adf.decisions().to_vec(), adf.goals().to_vec(), gamma)
}

fn dg_fields(
    dg: &Dg,
) -> (
    Vec<String>,
    Vec<String>,
    Vec<String>,
    Vec<EdgeSpec>,
    Vec<ImplicationSpec>,
) {
    let edges = dg
        .edges()
        .iter()
        .map(|e| EdgeSpec {
            from: e.from.clone(),
            to: e.to.clone(),
            tag: e.tag,
            defeasible: e.kind == decision_graphs::EdgeKind::Defeasible,
        })
        .collect();
    let belief_base = dg
        .belief_base()
        .implications
        .iter()
        .map(|i| ImplicationSpec {
            body: i.body.iter().map(|s| s.to_string()).collect(),
            head: i.head.to_string(),
        })
        .collect();
    (
        dg.decision_nodes().to_vec(),
        dg.intermediate_nodes().to_vec(),
        dg.goal_nodes().to_vec(),
        edges,
        belief_base,
    )
}

/// Serializes a problem back to its JSON description. Parsing the result
/// yields an equal problem.
pub fn serialize_problem(problem: &Problem) -> Value {
    let spec = match problem {
        Problem::Adf(adf) => {
            let (decisions, goals, gamma) = adf_fields(adf);
            ProblemSpec::Adf {
                decisions,
                goals,
                gamma,
            }
        }
        Problem::Pdf(pdf) => {
            let (decisions, goals, gamma) = adf_fields(pdf.adf());
            ProblemSpec::Pdf {
                decisions,
                goals,
                gamma,
                preference: preference_pairs(pdf.preference()),
            }
        }
        Problem::Dg(dg) => {
            let (decisions, intermediates, goals, edges, belief_base) = dg_fields(dg);
            ProblemSpec::Dg {
                decisions,
                intermediates,
                goals,
                edges,
                belief_base,
            }
        }
        Problem::Pdg(pdg) => {
            let (decisions, intermediates, goals, edges, belief_base) = dg_fields(pdg.dg());
            ProblemSpec::Pdg {
                decisions,
                intermediates,
                goals,
                edges,
                belief_base,
                preference: preference_pairs(pdg.preference()),
            }
        }
    };
    serde_json::to_value(spec).expect("problem serialization cannot fail")
}

/// Parses a criterion short name.
pub fn parse_criterion(name: &str) -> Option<Criterion> {
    match name {
        "sd" => Some(Criterion::StronglyDominant),
        "d" => Some(Criterion::Dominant),
        "wd" => Some(Criterion::WeaklyDominant),
        "ps" => Some(Criterion::PreferredSet),
        _ => None,
    }
}

/// The tabular view of any problem: the ADF itself, or the framework induced
/// by a graph.
fn tabular_adf(problem: &Problem) -> Adf {
    match problem {
        Problem::Adf(adf) => adf.clone(),
        Problem::Pdf(pdf) => pdf.adf().clone(),
        Problem::Dg(dg) => dg_to_adf(dg),
        Problem::Pdg(pdg) => dg_to_adf(pdg.dg()),
    }
}

/// The preferential view, when the problem carries a preference.
fn tabular_pdf(problem: &Problem) -> Result<Pdf, CliError> {
    match problem {
        Problem::Pdf(pdf) => Ok(pdf.clone()),
        Problem::Pdg(pdg) => Ok(pdg_to_pdf(pdg)),
        Problem::Adf(_) | Problem::Dg(_) => Err(CliError::CriterionMismatch),
    }
}

/// Lists the decisions satisfying the criterion, one per line in declaration
/// order.
pub fn cmd_decide(problem: &Problem, criterion: Criterion) -> Result<String, CliError> {
    let selected = if criterion == Criterion::PreferredSet {
        tabular_pdf(problem)?.preferred_set_decisions()
    } else {
        tabular_adf(problem).evaluate(criterion)
    };
    Ok(selected
        .into_iter()
        .map(|d| d + "\n")
        .collect::<String>())
}

/// Output format for `explain`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    FlatJson,
    Dialogue,
    Dot,
    TreeJson,
}

impl Format {
    pub fn parse(name: &str) -> Option<Format> {
        match name {
            "flat-json" => Some(Format::FlatJson),
            "dialogue" => Some(Format::Dialogue),
            "dot" => Some(Format::Dot),
            "tree-json" => Some(Format::TreeJson),
            _ => None,
        }
    }
}

fn flat_to_json(decision: &str, criterion: Criterion, flat: &FlatExplanation) -> Value {
    let goals = |s: &std::collections::BTreeSet<String>| {
        Value::Array(s.iter().map(|g| json!(g)).collect())
    };
    let (kind, payload) = match flat {
        FlatExplanation::SDPos(g) => ("SDPos", goals(g)),
        FlatExplanation::SDNeg(g) => ("SDNeg", goals(g)),
        FlatExplanation::DPos {
            met_goals,
            unmet_goals,
        } => (
            "DPos",
            json!({ "met": goals(met_goals), "unmet": goals(unmet_goals) }),
        ),
        FlatExplanation::DNeg(pairs) => (
            "DNeg",
            Value::Array(
                pairs
                    .iter()
                    .map(|(d2, g)| json!({ "rival": d2, "goal": g }))
                    .collect(),
            ),
        ),
        FlatExplanation::WDPos {
            core_goals,
            witnesses,
        } => (
            "WDPos",
            json!({
                "core": goals(core_goals),
                "witnesses": witnesses
                    .iter()
                    .map(|(g, d2)| json!({ "goal": g, "rival": d2 }))
                    .collect::<Vec<_>>(),
            }),
        ),
        FlatExplanation::WDNeg(rivals) => ("WDNeg", goals(rivals)),
        FlatExplanation::PSPos {
            core_goals,
            witnesses,
        } => (
            "PSPos",
            json!({
                "core": goals(core_goals),
                "witnesses": witnesses
                    .iter()
                    .map(|(s, d2)| json!({ "set": s.iter().collect::<Vec<_>>(), "rival": d2 }))
                    .collect::<Vec<_>>(),
            }),
        ),
        FlatExplanation::PSNeg(rivals) => ("PSNeg", goals(rivals)),
    };
    json!({
        "decision": decision,
        "criterion": criterion.short_name(),
        "type": kind,
        "payload": payload,
    })
}

fn map_explain_error(e: ExplainError) -> CliError {
    match e {
        ExplainError::UnknownDecision(d) => CliError::UnknownDecision(d),
        ExplainError::NeedsPreference => CliError::CriterionMismatch,
        ExplainError::Dispute(e) => CliError::Internal(e.to_string()),
    }
}

fn map_flat_error(e: ExplanationError) -> CliError {
    match e {
        ExplanationError::UnknownDecision(d) => CliError::UnknownDecision(d),
        other => CliError::Internal(other.to_string()),
    }
}

/// Explains why a decision does or does not satisfy a criterion, in the
/// requested rendering.
pub fn cmd_explain(
    problem: &Problem,
    criterion: Criterion,
    decision: &str,
    format: Format,
) -> Result<String, CliError> {
    if format == Format::FlatJson {
        let flat = if criterion == Criterion::PreferredSet {
            let pdf = tabular_pdf(problem)?;
            flat_explain_preferred(&pdf, decision).map_err(map_flat_error)?
        } else {
            flat_explain(&tabular_adf(problem), decision, criterion).map_err(map_flat_error)?
        };
        let mut text = serde_json::to_string_pretty(&flat_to_json(decision, criterion, &flat))
            .expect("JSON rendering cannot fail");
        text.push('\n');
        return Ok(text);
    }
    let source = match problem {
        Problem::Adf(adf) => Source::Adf(adf),
        Problem::Pdf(pdf) => Source::Pdf(pdf),
        Problem::Dg(dg) => Source::Dg(dg),
        Problem::Pdg(pdg) => Source::Pdg(pdg),
    };
    let expl = dialogical_explain(source, criterion, decision).map_err(map_explain_error)?;
    Ok(match format {
        Format::FlatJson => unreachable!("handled above"),
        Format::Dialogue => {
            let verdict = match expl.verdict {
                Verdict::Satisfies => "satisfies",
                Verdict::Violates => "violates",
            };
            format!(
                "{} {} {}\n{}\n",
                expl.decision,
                verdict,
                criterion.short_name(),
                render_dialogue(&expl)
            )
        }
        Format::Dot => render_dot(&expl),
        Format::TreeJson => {
            let mut text = serde_json::to_string_pretty(&tree_to_json(&expl))
                .expect("JSON rendering cannot fail");
            text.push('\n');
            text
        }
    })
}

/// The assumption-based framework this problem compiles to under the given
/// criterion.
pub fn mapped_framework(problem: &Problem, criterion: Criterion) -> Result<MappedFramework, CliError> {
    Ok(match (problem, criterion) {
        (Problem::Adf(_) | Problem::Dg(_), Criterion::PreferredSet) => {
            return Err(CliError::CriterionMismatch)
        }
        (Problem::Pdf(pdf), Criterion::PreferredSet) => preferred_set_aba(pdf),
        (Problem::Pdg(pdg), Criterion::PreferredSet) => preferred_set_aba_pdg(pdg),
        (Problem::Adf(adf), c) => match c {
            Criterion::StronglyDominant => strongly_dominant_aba(adf),
            Criterion::Dominant => dominant_aba(adf),
            Criterion::WeaklyDominant => weakly_dominant_aba(adf),
            Criterion::PreferredSet => unreachable!("handled above"),
        },
        (Problem::Pdf(pdf), c) => match c {
            Criterion::StronglyDominant => strongly_dominant_aba(pdf.adf()),
            Criterion::Dominant => dominant_aba(pdf.adf()),
            Criterion::WeaklyDominant => weakly_dominant_aba(pdf.adf()),
            Criterion::PreferredSet => unreachable!("handled above"),
        },
        (Problem::Dg(dg), c) => criterion_aba_dg(dg, c),
        (Problem::Pdg(pdg), c) => criterion_aba_dg(pdg.dg(), c),
    })
}

/// Canonical text serialization of the compiled framework.
pub fn cmd_export_aba(problem: &Problem, criterion: Criterion) -> Result<String, CliError> {
    Ok(mapped_framework(problem, criterion)?.framework.to_text())
}
