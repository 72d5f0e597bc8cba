//! A ground reasoner for flat assumption-based argumentation (ABA).
//!
//! A framework is a set of inference rules over ground sentences, a set of
//! assumption sentences that never appear as rule heads, and a contrary map
//! assigning each assumption at least one contrary sentence.  Arguments are
//! finite deductions from assumptions; one argument attacks another when its
//! claim is a contrary of an assumption in the other's support.  The engine
//! enumerates all arguments, decides attacks between arguments and between
//! assumption sets, and decides admissibility of assumption sets and of
//! single arguments.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

/// A ground sentence: a functor applied to zero or more constant arguments,
/// optionally negated (negation occurs only in belief-base style atoms such
/// as `~dEdge(a,b,1)`; the reasoner treats a negated sentence as an opaque
/// atom distinct from its positive form).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sentence {
    pub negated: bool,
    pub functor: String,
    pub args: Vec<String>,
}

impl Sentence {
    /// A plain 0-ary atom.
    pub fn atom(functor: impl Into<String>) -> Self {
        Sentence { negated: false, functor: functor.into(), args: Vec::new() }
    }

    /// A functor applied to arguments.
    pub fn pred<I, S>(functor: impl Into<String>, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Sentence {
            negated: false,
            functor: functor.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    /// The same sentence with the negation marker flipped.
    pub fn negate(&self) -> Self {
        Sentence { negated: !self.negated, ..self.clone() }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~")?;
        }
        write!(f, "{}", self.functor)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(","))?;
        }
        Ok(())
    }
}

/// An inference rule `head <- body`; an empty body makes the head a fact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Sentence,
    pub body: Vec<Sentence>,
}

impl Rule {
    pub fn new(head: Sentence, body: impl IntoIterator<Item = Sentence>) -> Self {
        Rule { head, body: body.into_iter().collect() }
    }

    pub fn fact(head: Sentence) -> Self {
        Rule { head, body: Vec::new() }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <-", self.head)?;
        for (i, s) in self.body.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, s)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbaError {
    #[error("assumption {0} occurs as a rule head; frameworks must be flat")]
    AssumptionAsHead(String),
    #[error("assumption {0} has no contrary")]
    MissingContrary(String),
    #[error("contrary map mentions {0}, which is not an assumption")]
    ContraryOfNonAssumption(String),
    #[error("rule dependencies are cyclic through {0}; arguments are not enumerable")]
    CyclicRuleDependency(String),
}

/// The derivation tree of an argument.  Leaves are assumptions or rule
/// applications with empty bodies (facts).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Derivation {
    /// A leaf labelled by an assumption.
    Assumption(Sentence),
    /// A rule application: the conclusion and one subtree per body sentence.
    /// No subtrees means the rule is a fact.
    Applied { conclusion: Sentence, premises: Vec<Derivation> },
}

impl Derivation {
    pub fn conclusion(&self) -> &Sentence {
        match self {
            Derivation::Assumption(s) => s,
            Derivation::Applied { conclusion, .. } => conclusion,
        }
    }

    fn collect_support(&self, out: &mut BTreeSet<Sentence>) {
        match self {
            Derivation::Assumption(s) => {
                out.insert(s.clone());
            }
            Derivation::Applied { premises, .. } => {
                for p in premises {
                    p.collect_support(out);
                }
            }
        }
    }
}

/// An argument: a claim, the assumptions supporting it, and one canonical
/// derivation of the claim from exactly those assumptions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Argument {
    pub support: BTreeSet<Sentence>,
    pub claim: Sentence,
    pub derivation: Derivation,
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} |- {}", self.support.iter().join(","), self.claim)
    }
}

/// A flat ABA framework.  Immutable after construction; all queries are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbaFramework {
    rules: Vec<Rule>,
    assumptions: BTreeSet<Sentence>,
    contraries: BTreeMap<Sentence, BTreeSet<Sentence>>,
}

impl AbaFramework {
    /// Builds and validates a framework.  Rules are deduplicated and kept in
    /// canonical (sorted) order so that downstream derivations and
    /// serializations are deterministic.
    pub fn new(
        rules: impl IntoIterator<Item = Rule>,
        assumptions: impl IntoIterator<Item = Sentence>,
        contraries: impl IntoIterator<Item = (Sentence, BTreeSet<Sentence>)>,
    ) -> Result<Self, AbaError> {
        let assumptions: BTreeSet<Sentence> = assumptions.into_iter().collect();
        let rules: Vec<Rule> = rules.into_iter().sorted().dedup().collect();
        let contraries: BTreeMap<Sentence, BTreeSet<Sentence>> = contraries.into_iter().collect();
        for rule in &rules {
            if assumptions.contains(&rule.head) {
                return Err(AbaError::AssumptionAsHead(rule.head.to_string()));
            }
        }
        for (a, cs) in &contraries {
            if !assumptions.contains(a) {
                return Err(AbaError::ContraryOfNonAssumption(a.to_string()));
            }
            if cs.is_empty() {
                return Err(AbaError::MissingContrary(a.to_string()));
            }
        }
        for a in &assumptions {
            if !contraries.contains_key(a) {
                return Err(AbaError::MissingContrary(a.to_string()));
            }
        }
        Ok(AbaFramework { rules, assumptions, contraries })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn assumptions(&self) -> &BTreeSet<Sentence> {
        &self.assumptions
    }

    pub fn is_assumption(&self, s: &Sentence) -> bool {
        self.assumptions.contains(s)
    }

    /// The contraries of an assumption (empty set for non-assumptions).
    pub fn contraries_of(&self, a: &Sentence) -> BTreeSet<Sentence> {
        self.contraries.get(a).cloned().unwrap_or_default()
    }

    pub fn contrary_map(&self) -> &BTreeMap<Sentence, BTreeSet<Sentence>> {
        &self.contraries
    }

    /// True when `s` is a contrary of some assumption in `of`.
    pub fn is_contrary_of_some(&self, s: &Sentence, of: &BTreeSet<Sentence>) -> bool {
        of.iter().any(|a| self.contraries.get(a).is_some_and(|cs| cs.contains(s)))
    }

    /// Errors when the ground head-to-body dependency graph has a cycle,
    /// which would make the argument set infinite.
    fn check_acyclic(&self) -> Result<Vec<Sentence>, AbaError> {
        // Dependency edges: rule head -> each body sentence.  A topological
        // order of this graph lets arguments be built bottom-up.
        let mut deps: BTreeMap<&Sentence, BTreeSet<&Sentence>> = BTreeMap::new();
        for rule in &self.rules {
            let entry = deps.entry(&rule.head).or_default();
            for b in &rule.body {
                entry.insert(b);
            }
            for b in &rule.body {
                deps.entry(b).or_default();
            }
        }
        // Depth-first search with a three-colour marking; grey re-entry is a
        // cycle.  Iterative to keep deep derivations off the call stack.
        let mut state: HashMap<&Sentence, u8> = HashMap::new();
        let mut order: Vec<Sentence> = Vec::new();
        for start in deps.keys() {
            if state.contains_key(*start) {
                continue;
            }
            let mut stack: Vec<(&Sentence, bool)> = vec![(start, false)];
            while let Some((node, expanded)) = stack.pop() {
                if expanded {
                    state.insert(node, 2);
                    order.push(node.clone());
                    continue;
                }
                match state.get(node) {
                    Some(2) => continue,
                    Some(1) => continue,
                    _ => {}
                }
                state.insert(node, 1);
                stack.push((node, true));
                if let Some(children) = deps.get(node) {
                    for child in children {
                        match state.get(*child) {
                            Some(1) => {
                                return Err(AbaError::CyclicRuleDependency(child.to_string()))
                            }
                            Some(2) => {}
                            _ => stack.push((child, false)),
                        }
                    }
                }
            }
        }
        Ok(order)
    }

    /// All arguments of the framework, one canonical derivation per
    /// (claim, support) pair.  Errors when rule dependencies are cyclic.
    pub fn all_arguments(&self) -> Result<Vec<Argument>, AbaError> {
        let order = self.check_acyclic()?;
        // args_for[s]: arguments claiming s, first (canonical) derivation per
        // support set.  Sentences are processed in dependency order, so every
        // body sentence of a rule is finished before its head.
        let mut args_for: BTreeMap<Sentence, Vec<Argument>> = BTreeMap::new();
        for a in &self.assumptions {
            args_for.insert(
                a.clone(),
                vec![Argument {
                    support: BTreeSet::from([a.clone()]),
                    claim: a.clone(),
                    derivation: Derivation::Assumption(a.clone()),
                }],
            );
        }
        for sentence in order {
            if self.assumptions.contains(&sentence) {
                continue;
            }
            let mut seen: BTreeSet<BTreeSet<Sentence>> = BTreeSet::new();
            let mut out: Vec<Argument> = Vec::new();
            for rule in self.rules.iter().filter(|r| r.head == sentence) {
                let choices: Vec<&Vec<Argument>> = match rule
                    .body
                    .iter()
                    .map(|b| args_for.get(b))
                    .collect::<Option<Vec<_>>>()
                {
                    Some(c) => c,
                    None => continue, // some body sentence has no argument
                };
                for combo in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
                    let mut support = BTreeSet::new();
                    let premises: Vec<Derivation> =
                        combo.iter().map(|arg| arg.derivation.clone()).collect();
                    for p in &premises {
                        p.collect_support(&mut support);
                    }
                    if seen.insert(support.clone()) {
                        out.push(Argument {
                            support,
                            claim: sentence.clone(),
                            derivation: Derivation::Applied {
                                conclusion: sentence.clone(),
                                premises,
                            },
                        });
                    }
                }
            }
            if !out.is_empty() {
                args_for.insert(sentence, out);
            }
        }
        Ok(args_for.into_values().flatten().sorted().collect())
    }

    /// True when `a` attacks `b`: the claim of `a` is a contrary of an
    /// assumption supporting `b`.
    pub fn attacks(&self, a: &Argument, b: &Argument) -> bool {
        self.is_contrary_of_some(&a.claim, &b.support)
    }

    /// True when some argument supported inside `s1` attacks some argument
    /// supported inside `s2`.  Since every assumption is itself an argument,
    /// this holds exactly when an argument from `s1` claims a contrary of a
    /// member of `s2`.
    pub fn set_attacks(&self, s1: &BTreeSet<Sentence>, s2: &BTreeSet<Sentence>) -> bool {
        let arguments = self.all_arguments().expect("validated framework");
        arguments
            .iter()
            .filter(|arg| arg.support.is_subset(s1))
            .any(|arg| self.is_contrary_of_some(&arg.claim, s2))
    }

    /// True when `s` does not attack itself and attacks (the support of)
    /// every argument attacking it.
    pub fn is_admissible_assumption_set(&self, s: &BTreeSet<Sentence>) -> bool {
        let arguments = self.all_arguments().expect("validated framework");
        self.is_admissible_with(&arguments, s)
    }

    fn is_admissible_with(&self, arguments: &[Argument], s: &BTreeSet<Sentence>) -> bool {
        if !s.iter().all(|a| self.assumptions.contains(a)) {
            return false;
        }
        let claims_from_s: BTreeSet<&Sentence> = arguments
            .iter()
            .filter(|arg| arg.support.is_subset(s))
            .map(|arg| &arg.claim)
            .collect();
        let attacks_set = |target: &BTreeSet<Sentence>| {
            claims_from_s.iter().any(|c| self.is_contrary_of_some(c, target))
        };
        if attacks_set(s) {
            return false;
        }
        for attacker in arguments {
            if self.is_contrary_of_some(&attacker.claim, s) && !attacks_set(&attacker.support) {
                return false;
            }
        }
        true
    }

    /// Some admissible assumption set containing the support of `arg`, if one
    /// exists.
    pub fn is_admissible_argument(&self, arg: &Argument) -> Option<BTreeSet<Sentence>> {
        self.admissible_superset(&arg.support)
    }

    /// Some admissible assumption set containing `seed`, if one exists.
    ///
    /// Backtracking search: the candidate set grows only by the supports of
    /// counter-arguments against attackers it does not yet defeat.  If any
    /// admissible superset T of the seed exists, every unanswered attacker of
    /// a candidate inside T also attacks T, so T supplies a counter-argument
    /// the search will try — the search is complete, and any returned set is
    /// conflict-free and defends itself by construction.
    pub fn admissible_superset(&self, seed: &BTreeSet<Sentence>) -> Option<BTreeSet<Sentence>> {
        let arguments = self.all_arguments().expect("validated framework");
        if !seed.iter().all(|a| self.assumptions.contains(a)) {
            return None;
        }
        let mut failed: HashSet<BTreeSet<Sentence>> = HashSet::new();
        self.extend_admissible(&arguments, seed.clone(), &mut failed)
    }

    fn extend_admissible(
        &self,
        arguments: &[Argument],
        candidate: BTreeSet<Sentence>,
        failed: &mut HashSet<BTreeSet<Sentence>>,
    ) -> Option<BTreeSet<Sentence>> {
        if failed.contains(&candidate) {
            return None;
        }
        let from_candidate: Vec<&Argument> = arguments
            .iter()
            .filter(|arg| arg.support.is_subset(&candidate))
            .collect();
        let attacks_set = |target: &BTreeSet<Sentence>| {
            from_candidate.iter().any(|a| self.is_contrary_of_some(&a.claim, target))
        };
        if attacks_set(&candidate) {
            failed.insert(candidate);
            return None;
        }
        let unanswered = arguments.iter().find(|attacker| {
            self.is_contrary_of_some(&attacker.claim, &candidate)
                && !attacks_set(&attacker.support)
        });
        let Some(attacker) = unanswered else {
            return Some(candidate);
        };
        for counter in arguments {
            if !self.is_contrary_of_some(&counter.claim, &attacker.support) {
                continue;
            }
            let mut grown = candidate.clone();
            grown.extend(counter.support.iter().cloned());
            if grown == candidate {
                continue; // would already answer the attacker
            }
            if let Some(found) = self.extend_admissible(arguments, grown, failed) {
                return Some(found);
            }
        }
        failed.insert(candidate);
        None
    }

    /// Canonical text form: one rule, assumption, or contrary per line.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        for rule in &self.rules {
            lines.push(rule.to_string());
        }
        for a in &self.assumptions {
            lines.push(format!("assumption: {a}"));
        }
        for (a, cs) in &self.contraries {
            for c in cs {
                lines.push(format!("contrary: {a} -> {c}"));
            }
        }
        lines.join("\n") + "\n"
    }
}
