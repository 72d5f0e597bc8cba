//! Compilation of decision frameworks into flat ABA frameworks, one per
//! decision criterion, such that a decision satisfies the criterion exactly
//! when its query argument (for example `{sDom(d)} |- sDom(d)`) is admissible
//! in the compiled framework.
//!
//! Each criterion contributes a *component* (rules, assumptions, contraries
//! over the criterion's own predicates) that is unioned with a *core*
//! describing which decisions meet which goals.  The core for plain decision
//! frameworks is built here; decision graphs supply their own reachability
//! core and reuse the same components.
//!
//! All rule schemata are grounded eagerly over the decisions, goals, and
//! (for preferred-set frameworks) the comparable goal sets.  Goal sets used
//! as term arguments are given canonical names listing their members in
//! sorted order, e.g. `{g4,g5}`.

use std::collections::{BTreeMap, BTreeSet};

use aba_engine::{AbaFramework, Argument, Derivation, Rule, Sentence};
use decision_core::{Adf, Criterion, GoalSet, GoalSetPreference, Pdf};

/// Canonical term name for a goal set: sorted members in braces.
pub fn goal_set_name(s: &GoalSet) -> String {
    let mut out = String::from("{");
    for (i, g) in s.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(g);
    }
    out.push('}');
    out
}

fn met(d: &str, g: &str) -> Sentence {
    Sentence::pred("met", [d, g])
}

fn not_met(d: &str, g: &str) -> Sentence {
    Sentence::pred("notMet", [d, g])
}

/// The query assumption whose admissibility encodes `criterion` for `d`.
pub fn query_atom(criterion: Criterion, d: &str) -> Sentence {
    let functor = match criterion {
        Criterion::StronglyDominant => "sDom",
        Criterion::Dominant => "dom",
        Criterion::WeaklyDominant => "wDom",
        Criterion::PreferredSet => "pS",
    };
    Sentence::pred(functor, [d])
}

/// Rules, assumptions, and contraries of a core or of a criterion component,
/// before they are unioned into a complete framework.
#[derive(Debug, Clone, Default)]
pub struct FrameworkParts {
    pub rules: Vec<Rule>,
    pub assumptions: Vec<Sentence>,
    pub contraries: BTreeMap<Sentence, BTreeSet<Sentence>>,
}

impl From<&AbaFramework> for FrameworkParts {
    fn from(af: &AbaFramework) -> Self {
        FrameworkParts {
            rules: af.rules().to_vec(),
            assumptions: af.assumptions().iter().cloned().collect(),
            contraries: af.contrary_map().clone(),
        }
    }
}

impl FrameworkParts {
    fn add_assumption(&mut self, a: Sentence, contraries: impl IntoIterator<Item = Sentence>) {
        self.contraries
            .entry(a.clone())
            .or_default()
            .extend(contraries);
        self.assumptions.push(a);
    }

    /// Unions this part with another: rules and assumptions are combined, and
    /// an assumption present in both keeps the union of its contrary sets
    /// (as in the dominant construction, where the contrary of `notMet(d,g)`
    /// gains `noOthers(d,g)` alongside the core `met(d,g)`).
    pub fn union(mut self, other: FrameworkParts) -> FrameworkParts {
        self.rules.extend(other.rules);
        self.assumptions.extend(other.assumptions);
        for (a, cs) in other.contraries {
            self.contraries.entry(a).or_default().extend(cs);
        }
        self
    }

    /// Builds the framework.  An assumption whose contrary set grounded to
    /// nothing (for example `noOthers(d,g)` with no rival decisions) keeps a
    /// dedicated underivable contrary atom so the framework stays
    /// well-formed; the atom heads no rule, so the assumption is
    /// unattackable, matching the empty grounding.
    pub fn into_framework(mut self) -> AbaFramework {
        for (a, cs) in self.contraries.iter_mut() {
            if cs.is_empty() {
                let mut guard = a.clone();
                guard.functor = format!("never_{}", guard.functor);
                cs.insert(guard);
            }
        }
        self.assumptions.sort();
        self.assumptions.dedup();
        AbaFramework::new(self.rules, self.assumptions, self.contraries)
            .expect("mapped frameworks are flat")
    }
}

/// A compiled framework together with the per-decision query arguments.
#[derive(Debug, Clone)]
pub struct MappedFramework {
    pub framework: AbaFramework,
    pub criterion: Criterion,
    queries: BTreeMap<String, Argument>,
    decision_order: Vec<String>,
}

impl MappedFramework {
    /// Unions a core with a criterion component and attaches the query
    /// arguments for `decisions`.
    pub fn assemble(
        core: FrameworkParts,
        component: FrameworkParts,
        criterion: Criterion,
        decisions: &[String],
    ) -> Self {
        let framework = core.union(component).into_framework();
        let queries = decisions
            .iter()
            .map(|d| {
                let a = query_atom(criterion, d);
                debug_assert!(framework.is_assumption(&a));
                let argument = Argument {
                    support: BTreeSet::from([a.clone()]),
                    claim: a.clone(),
                    derivation: Derivation::Assumption(a),
                };
                (d.clone(), argument)
            })
            .collect();
        MappedFramework {
            framework,
            criterion,
            queries,
            decision_order: decisions.to_vec(),
        }
    }

    /// The query argument whose admissibility encodes the criterion for `d`.
    pub fn query_argument(&self, decision: &str) -> Option<&Argument> {
        self.queries.get(decision)
    }

    /// True when the query argument for `decision` is admissible.
    pub fn is_selected(&self, decision: &str) -> bool {
        let Some(q) = self.queries.get(decision) else {
            return false;
        };
        self.framework.is_admissible_argument(q).is_some()
    }

    /// All decisions whose query is admissible, in declaration order.
    pub fn selected_decisions(&self) -> Vec<String> {
        self.decision_order
            .iter()
            .filter(|d| self.is_selected(d))
            .cloned()
            .collect()
    }
}

/// The core framework: facts `met(d,g) <-` exactly for g in γ(d), and one
/// assumption `notMet(d,g)` per decision/goal pair with contrary `met(d,g)`.
pub fn core_adf_aba(adf: &Adf) -> AbaFramework {
    core_adf_parts(adf).into_framework()
}

fn core_adf_parts(adf: &Adf) -> FrameworkParts {
    let mut parts = FrameworkParts::default();
    for d in adf.decisions() {
        for g in adf.goals() {
            if adf.gamma(d).contains(g) {
                parts.rules.push(Rule::fact(met(d, g)));
            }
            parts.add_assumption(not_met(d, g), [met(d, g)]);
        }
    }
    parts
}

/// Strongly dominant component: `notSDom(d) <- notMet(d,g)` rules plus
/// `sDom(d)` assumptions with contrary `notSDom(d)`.
pub fn strongly_dominant_component(decisions: &[String], goals: &[String]) -> FrameworkParts {
    let mut parts = FrameworkParts::default();
    for d in decisions {
        for g in goals {
            parts
                .rules
                .push(Rule::new(Sentence::pred("notSDom", [d]), [not_met(d, g)]));
        }
        parts.add_assumption(
            Sentence::pred("sDom", [d]),
            [Sentence::pred("notSDom", [d])],
        );
    }
    parts
}

/// Dominant component: `notDom(d) <- notMet(d,g)`; assumptions `dom(d)`
/// (contrary `notDom(d)`), `noOthers(d,g)` (contraries `met(d',g)` for every
/// other decision d'), and `notMet(d,g)` with contrary `noOthers(d,g)` —
/// unioned with the core's `met(d,g)` on assembly.
pub fn dominant_component(decisions: &[String], goals: &[String]) -> FrameworkParts {
    let mut parts = FrameworkParts::default();
    for d in decisions {
        for g in goals {
            parts
                .rules
                .push(Rule::new(Sentence::pred("notDom", [d]), [not_met(d, g)]));
            let no_others = Sentence::pred("noOthers", [d, g]);
            let rivals_meeting: Vec<Sentence> = decisions
                .iter()
                .filter(|d2| *d2 != d)
                .map(|d2| met(d2, g))
                .collect();
            parts.add_assumption(no_others.clone(), rivals_meeting);
            parts.add_assumption(not_met(d, g), [no_others]);
        }
        parts.add_assumption(
            Sentence::pred("dom", [d]),
            [Sentence::pred("notDom", [d])],
        );
    }
    parts
}

/// Weakly dominant component: rules
/// `notWDom(d) <- met(d',g), notMet(d,g), notMore(d,d')` and
/// `more(d,d') <- met(d,g), notMet(d',g)`; assumptions `wDom(d)` (contrary
/// `notWDom(d)`) and `notMore(d,d')` (contrary `more(d,d')`).
pub fn weakly_dominant_component(decisions: &[String], goals: &[String]) -> FrameworkParts {
    let mut parts = FrameworkParts::default();
    for d in decisions {
        for d2 in decisions {
            if d == d2 {
                continue;
            }
            for g in goals {
                parts.rules.push(Rule::new(
                    Sentence::pred("notWDom", [d]),
                    [
                        met(d2, g),
                        not_met(d, g),
                        Sentence::pred("notMore", [d, d2]),
                    ],
                ));
                parts.rules.push(Rule::new(
                    Sentence::pred("more", [d, d2]),
                    [met(d, g), not_met(d2, g)],
                ));
            }
            parts.add_assumption(
                Sentence::pred("notMore", [d, d2]),
                [Sentence::pred("more", [d, d2])],
            );
        }
        parts.add_assumption(
            Sentence::pred("wDom", [d]),
            [Sentence::pred("notWDom", [d])],
        );
    }
    parts
}

/// Preferred-set component over a preference's comparable goal sets:
/// - facts `pfr(s_t,s_r) <-` for comparable sets with s_t strictly preferred
///   to s_r,
/// - `notMetSet(d,s) <- notMet(d,g)` for each g in s,
/// - `better(d,d',s) <- metSet(d,s'), notMetSet(d',s'), pfr(s',s)`,
/// - `notPS(d) <- metSet(d',s), notMetSet(d,s), notBetter(d,d',s)`,
/// with assumptions `pS(d)`, `metSet(d,s)`, `notBetter(d,d',s)` and
/// contraries `notPS(d)`, `notMetSet(d,s)`, `better(d,d',s)`.
pub fn preferred_set_component(
    decisions: &[String],
    preference: &GoalSetPreference,
) -> FrameworkParts {
    let mut parts = FrameworkParts::default();
    let cgset: Vec<GoalSet> = preference.member_sets().into_iter().collect();
    let name = goal_set_name;
    for st in &cgset {
        for sr in &cgset {
            if preference.strictly_preferred(st, sr) {
                parts
                    .rules
                    .push(Rule::fact(Sentence::pred("pfr", [name(st), name(sr)])));
            }
        }
    }
    for d in decisions {
        for s in &cgset {
            for g in s.iter() {
                parts.rules.push(Rule::new(
                    Sentence::pred("notMetSet", [d.clone(), name(s)]),
                    [not_met(d, g)],
                ));
            }
            parts.add_assumption(
                Sentence::pred("metSet", [d.clone(), name(s)]),
                [Sentence::pred("notMetSet", [d.clone(), name(s)])],
            );
        }
        for d2 in decisions {
            if d == d2 {
                continue;
            }
            for s in &cgset {
                for s2 in &cgset {
                    if s == s2 {
                        continue;
                    }
                    parts.rules.push(Rule::new(
                        Sentence::pred("better", [d.clone(), d2.clone(), name(s)]),
                        [
                            Sentence::pred("metSet", [d.clone(), name(s2)]),
                            Sentence::pred("notMetSet", [d2.clone(), name(s2)]),
                            Sentence::pred("pfr", [name(s2), name(s)]),
                        ],
                    ));
                }
                parts.rules.push(Rule::new(
                    Sentence::pred("notPS", [d.clone()]),
                    [
                        Sentence::pred("metSet", [d2.clone(), name(s)]),
                        Sentence::pred("notMetSet", [d.clone(), name(s)]),
                        Sentence::pred("notBetter", [d.clone(), d2.clone(), name(s)]),
                    ],
                ));
                parts.add_assumption(
                    Sentence::pred("notBetter", [d.clone(), d2.clone(), name(s)]),
                    [Sentence::pred("better", [d.clone(), d2.clone(), name(s)])],
                );
            }
        }
        parts.add_assumption(
            Sentence::pred("pS", [d]),
            [Sentence::pred("notPS", [d])],
        );
    }
    parts
}

/// Strongly dominant framework for a plain decision framework.
pub fn strongly_dominant_aba(adf: &Adf) -> MappedFramework {
    MappedFramework::assemble(
        core_adf_parts(adf),
        strongly_dominant_component(adf.decisions(), adf.goals()),
        Criterion::StronglyDominant,
        adf.decisions(),
    )
}

/// Dominant framework for a plain decision framework.
pub fn dominant_aba(adf: &Adf) -> MappedFramework {
    MappedFramework::assemble(
        core_adf_parts(adf),
        dominant_component(adf.decisions(), adf.goals()),
        Criterion::Dominant,
        adf.decisions(),
    )
}

/// Weakly dominant framework for a plain decision framework.
pub fn weakly_dominant_aba(adf: &Adf) -> MappedFramework {
    MappedFramework::assemble(
        core_adf_parts(adf),
        weakly_dominant_component(adf.decisions(), adf.goals()),
        Criterion::WeaklyDominant,
        adf.decisions(),
    )
}

/// Preferred-set framework for a preferential decision framework.
pub fn preferred_set_aba(pdf: &Pdf) -> MappedFramework {
    let adf = pdf.adf();
    MappedFramework::assemble(
        core_adf_parts(adf),
        preferred_set_component(adf.decisions(), pdf.preference()),
        Criterion::PreferredSet,
        adf.decisions(),
    )
}

/// The predicate vocabulary a mapped framework may use.
pub const VOCABULARY: &[&str] = &[
    "met", "notMet", "sDom", "notSDom", "dom", "notDom", "noOthers", "wDom", "notWDom", "more",
    "notMore", "pS", "notPS", "metSet", "notMetSet", "better", "notBetter", "pfr",
];

/// True when every sentence of the framework uses the declared vocabulary
/// (the `never_`-prefixed guard atoms for empty contrary groundings aside).
pub fn respects_vocabulary(framework: &AbaFramework) -> bool {
    let ok = |s: &Sentence| {
        VOCABULARY.contains(&s.functor.as_str()) || s.functor.starts_with("never_")
    };
    framework.rules().iter().all(|r| ok(&r.head) && r.body.iter().all(ok))
        && framework.assumptions().iter().all(ok)
        && framework
            .contrary_map()
            .values()
            .all(|cs| cs.iter().all(ok))
}
