//! Classical choice-theory oracle, written independently of the
//! argumentation engine so the two can be tested against each other.
//!
//! Provides lexicographic preference relations over per-pair attribute
//! comparisons, preference maximization, rationality checking (completeness +
//! transitivity), choice structures with the weak axiom of revealed
//! preference, and a seeded random-scenario generator for differential
//! testing.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::decision::{
    criterion_fact, same_att, AlternativeSet, CriterionOrder, CriterionSet, DecisionError,
    DecisionFramework,
};
use crate::lang::{EvidenceSet, Literal};

/// Largest alternative set that [`full_choice_structure`] will enumerate.
pub const FULL_STRUCTURE_CAP: usize = 12;

/// Errors raised by the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{name:?} is not a known alternative or criterion of this table")]
    UnknownName { name: String },
    #[error("no comparison recorded for ({a}, {b}) on criterion {criterion}")]
    MissingComparison {
        a: String,
        b: String,
        criterion: String,
    },
    #[error("cannot maximize over an empty set")]
    EmptyChoiceSet,
    #[error("preference relation does not relate {a} and {b}")]
    Incomplete { a: String, b: String },
    #[error("choice structures require non-empty experiments")]
    EmptyExperiment,
    #[error("experiment {{{experiment}}} has an empty choice set")]
    EmptyChoice { experiment: String },
    #[error("choice {name:?} lies outside its experiment")]
    ChoiceOutsideExperiment { name: String },
    #[error("cannot enumerate choice structures over {size} alternatives (cap {cap})")]
    CapExceeded { size: usize, cap: usize },
    #[error(transparent)]
    Decision(#[from] DecisionError),
}

/// How a pair compares on one criterion, relative to the pair's canonical
/// (lexicographic) orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    FavorsFirst,
    FavorsSecond,
    Equal,
}

impl Comparison {
    fn flip(self) -> Self {
        match self {
            Comparison::FavorsFirst => Comparison::FavorsSecond,
            Comparison::FavorsSecond => Comparison::FavorsFirst,
            Comparison::Equal => Comparison::Equal,
        }
    }
}

/// Per-pair, per-criterion comparison table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeTable {
    alternatives: BTreeSet<String>,
    criteria: BTreeSet<String>,
    entries: BTreeMap<(String, String, String), Comparison>,
}

impl AttributeTable {
    pub fn new(
        alternatives: impl IntoIterator<Item = impl Into<String>>,
        criteria: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        AttributeTable {
            alternatives: alternatives.into_iter().map(Into::into).collect(),
            criteria: criteria.into_iter().map(Into::into).collect(),
            entries: BTreeMap::new(),
        }
    }

    fn check_names(&self, a: &str, b: &str, criterion: &str) -> Result<(), OracleError> {
        for name in [a, b] {
            if !self.alternatives.contains(name) {
                return Err(OracleError::UnknownName { name: name.into() });
            }
        }
        if !self.criteria.contains(criterion) {
            return Err(OracleError::UnknownName {
                name: criterion.into(),
            });
        }
        Ok(())
    }

    /// Records how `a` compares to `b` on a criterion; the orientation is
    /// normalized internally.
    pub fn set(
        &mut self,
        a: &str,
        b: &str,
        criterion: &str,
        cmp: Comparison,
    ) -> Result<(), OracleError> {
        self.check_names(a, b, criterion)?;
        let (key, cmp) = if a <= b {
            ((a.into(), b.into(), criterion.into()), cmp)
        } else {
            ((b.into(), a.into(), criterion.into()), cmp.flip())
        };
        self.entries.insert(key, cmp);
        Ok(())
    }

    /// How `a` compares to `b` on a criterion.
    pub fn get(&self, a: &str, b: &str, criterion: &str) -> Result<Comparison, OracleError> {
        self.check_names(a, b, criterion)?;
        let (key, flip) = if a <= b {
            ((a.into(), b.into(), criterion.into()), false)
        } else {
            ((b.into(), a.into(), criterion.into()), true)
        };
        let cmp =
            self.entries
                .get(&key)
                .copied()
                .ok_or_else(|| OracleError::MissingComparison {
                    a: a.into(),
                    b: b.into(),
                    criterion: criterion.into(),
                })?;
        Ok(if flip { cmp.flip() } else { cmp })
    }

    pub fn alternatives(&self) -> &BTreeSet<String> {
        &self.alternatives
    }

    pub fn criteria(&self) -> &BTreeSet<String> {
        &self.criteria
    }
}

/// A weak preference relation with derived strict and indifference views.
/// Reflexivity is built in: every element weakly prefers itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceRelation {
    domain: BTreeSet<String>,
    weak: BTreeSet<(String, String)>,
}

impl PreferenceRelation {
    pub fn new(
        domain: impl IntoIterator<Item = impl Into<String>>,
        weak: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, OracleError> {
        let domain: BTreeSet<String> = domain.into_iter().map(Into::into).collect();
        let weak: BTreeSet<(String, String)> = weak.into_iter().collect();
        for (a, b) in &weak {
            for name in [a, b] {
                if !domain.contains(name) {
                    return Err(OracleError::UnknownName { name: name.clone() });
                }
            }
        }
        Ok(PreferenceRelation { domain, weak })
    }

    pub fn domain(&self) -> &BTreeSet<String> {
        &self.domain
    }

    pub fn weakly_prefers(&self, x: &str, y: &str) -> bool {
        x == y || self.weak.contains(&(x.to_string(), y.to_string()))
    }

    pub fn strictly_prefers(&self, x: &str, y: &str) -> bool {
        self.weakly_prefers(x, y) && !self.weakly_prefers(y, x)
    }

    pub fn indifferent(&self, x: &str, y: &str) -> bool {
        self.weakly_prefers(x, y) && self.weakly_prefers(y, x)
    }
}

/// Builds the lexicographic preference relation over an attribute table:
/// the highest-priority criterion on which a pair differs decides it, and
/// pairs differing nowhere are indifferent.
pub fn lex_preference(
    table: &AttributeTable,
    order: &CriterionOrder,
) -> Result<PreferenceRelation, OracleError> {
    let names: Vec<&String> = table.alternatives().iter().collect();
    let mut weak = BTreeSet::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let (a, b) = (names[i].as_str(), names[j].as_str());
            let mut decided = None;
            for criterion in order.as_slice() {
                match table.get(a, b, criterion)? {
                    Comparison::FavorsFirst => {
                        decided = Some((a, b));
                        break;
                    }
                    Comparison::FavorsSecond => {
                        decided = Some((b, a));
                        break;
                    }
                    Comparison::Equal => {}
                }
            }
            match decided {
                Some((winner, loser)) => {
                    weak.insert((winner.to_string(), loser.to_string()));
                }
                None => {
                    weak.insert((a.to_string(), b.to_string()));
                    weak.insert((b.to_string(), a.to_string()));
                }
            }
        }
    }
    Ok(PreferenceRelation {
        domain: table.alternatives().clone(),
        weak,
    })
}

/// Preference maximization: the members of `b` weakly preferred to every
/// member of `b`.
pub fn c_star(
    b: &BTreeSet<String>,
    r: &PreferenceRelation,
) -> Result<BTreeSet<String>, OracleError> {
    if b.is_empty() {
        return Err(OracleError::EmptyChoiceSet);
    }
    let members: Vec<&String> = b.iter().collect();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let (x, y) = (members[i].as_str(), members[j].as_str());
            if !r.weakly_prefers(x, y) && !r.weakly_prefers(y, x) {
                return Err(OracleError::Incomplete {
                    a: x.into(),
                    b: y.into(),
                });
            }
        }
    }
    Ok(b.iter()
        .filter(|x| b.iter().all(|y| r.weakly_prefers(x, y)))
        .cloned()
        .collect())
}

/// Rationality on a ground set: completeness over all pairs plus
/// transitivity of weak preference.
pub fn is_rational(r: &PreferenceRelation, x: &BTreeSet<String>) -> bool {
    let members: Vec<&String> = x.iter().collect();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let (a, b) = (members[i].as_str(), members[j].as_str());
            if !r.weakly_prefers(a, b) && !r.weakly_prefers(b, a) {
                return false;
            }
        }
    }
    for a in &members {
        for b in &members {
            for c in &members {
                if r.weakly_prefers(a, b) && r.weakly_prefers(b, c) && !r.weakly_prefers(a, c) {
                    return false;
                }
            }
        }
    }
    true
}

/// A family of experiments with their observed choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceStructure {
    choices: BTreeMap<BTreeSet<String>, BTreeSet<String>>,
}

impl ChoiceStructure {
    pub fn new(
        choices: impl IntoIterator<Item = (BTreeSet<String>, BTreeSet<String>)>,
    ) -> Result<Self, OracleError> {
        let choices: BTreeMap<BTreeSet<String>, BTreeSet<String>> = choices.into_iter().collect();
        for (experiment, chosen) in &choices {
            if experiment.is_empty() {
                return Err(OracleError::EmptyExperiment);
            }
            if chosen.is_empty() {
                return Err(OracleError::EmptyChoice {
                    experiment: experiment.iter().cloned().collect::<Vec<_>>().join(", "),
                });
            }
            if let Some(outside) = chosen.iter().find(|name| !experiment.contains(*name)) {
                return Err(OracleError::ChoiceOutsideExperiment {
                    name: outside.clone(),
                });
            }
        }
        Ok(ChoiceStructure { choices })
    }

    pub fn experiments(&self) -> impl Iterator<Item = (&BTreeSet<String>, &BTreeSet<String>)> {
        self.choices.iter()
    }

    pub fn choice(&self, experiment: &BTreeSet<String>) -> Option<&BTreeSet<String>> {
        self.choices.get(experiment)
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }
}

/// The weak axiom of revealed preference: if x is ever chosen while y is
/// available, then wherever both are available and y is chosen, x must be
/// chosen too.
pub fn satisfies_warp(cs: &ChoiceStructure) -> bool {
    for (b1, c1) in cs.experiments() {
        for (b2, c2) in cs.experiments() {
            for x in c1 {
                if !b2.contains(x) {
                    continue;
                }
                for y in c2 {
                    if b1.contains(y) && !c2.contains(x) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Evaluates a decision framework on every non-empty subset of its
/// alternatives, producing the full choice structure.
pub fn full_choice_structure(adf: &DecisionFramework) -> Result<ChoiceStructure, OracleError> {
    let names: Vec<String> = adf.alternatives().iter().map(String::from).collect();
    let n = names.len();
    if n > FULL_STRUCTURE_CAP {
        return Err(OracleError::CapExceeded {
            size: n,
            cap: FULL_STRUCTURE_CAP,
        });
    }
    let mut choices = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let experiment: BTreeSet<String> = names
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, name)| name.clone())
            .collect();
        let chosen = adf.acceptable_alternatives(&experiment)?;
        choices.push((experiment, chosen));
    }
    ChoiceStructure::new(choices)
}

/// A randomly generated decision scenario together with the attribute table
/// that justifies its evidence.
#[derive(Debug, Clone)]
pub struct GeneratedScenario {
    pub alternatives: AlternativeSet,
    pub criteria: CriterionSet,
    pub order: CriterionOrder,
    pub evidence: EvidenceSet,
    pub table: AttributeTable,
}

impl GeneratedScenario {
    pub fn framework(&self) -> Result<DecisionFramework, DecisionError> {
        DecisionFramework::new(
            self.alternatives.clone(),
            self.criteria.clone(),
            self.order.clone(),
            self.evidence.clone(),
        )
    }
}

/// Draws a random scenario: 2–6 alternatives, 1–4 criteria, a uniform
/// priority permutation, and a random attribute value per alternative and
/// criterion, so every pair is oriented or tied on each criterion by value
/// comparison. Pairs tying everywhere receive a `same_att` fact, other pairs
/// one fact per differing criterion, so the evidence is always licensed and
/// decides every pair.
///
/// Comparisons derive from underlying values rather than per-pair coin
/// flips: value-based orientations are what attribute comparison can
/// actually produce, while independent per-pair draws can orient one
/// criterion cyclically (x over y over z over x), a situation no set of
/// attribute values realizes.
pub fn random_scenario<R: Rng + ?Sized>(rng: &mut R) -> GeneratedScenario {
    let n = rng.random_range(2..=6);
    let m = rng.random_range(1..=4);
    let alt_names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let crit_names: Vec<String> = (1..=m).map(|i| format!("c{i}")).collect();

    let mut ranking = crit_names.clone();
    ranking.shuffle(rng);

    // One small integer score per alternative and criterion; the narrow
    // range keeps ties (and hence `same_att` pairs) common.
    let scores: Vec<Vec<u8>> = alt_names
        .iter()
        .map(|_| crit_names.iter().map(|_| rng.random_range(0..3)).collect())
        .collect();

    let mut table = AttributeTable::new(alt_names.iter().cloned(), crit_names.iter().cloned());
    let mut facts: Vec<Literal> = Vec::new();
    for i in 0..alt_names.len() {
        for j in i + 1..alt_names.len() {
            let (a, b) = (alt_names[i].as_str(), alt_names[j].as_str());
            let outcomes: Vec<Comparison> = (0..crit_names.len())
                .map(|k| match scores[i][k].cmp(&scores[j][k]) {
                    std::cmp::Ordering::Greater => Comparison::FavorsFirst,
                    std::cmp::Ordering::Less => Comparison::FavorsSecond,
                    std::cmp::Ordering::Equal => Comparison::Equal,
                })
                .collect();
            if outcomes.iter().all(|&o| o == Comparison::Equal) {
                facts.push(same_att(a, b));
            } else {
                for (criterion, &outcome) in crit_names.iter().zip(&outcomes) {
                    match outcome {
                        Comparison::FavorsFirst => facts.push(criterion_fact(criterion, a, b)),
                        Comparison::FavorsSecond => facts.push(criterion_fact(criterion, b, a)),
                        Comparison::Equal => {}
                    }
                }
            }
            for (criterion, &outcome) in crit_names.iter().zip(&outcomes) {
                table
                    .set(a, b, criterion, outcome)
                    .expect("generated names are table members");
            }
        }
    }

    GeneratedScenario {
        alternatives: AlternativeSet::new(alt_names).expect("generated names are valid"),
        criteria: CriterionSet::new(crit_names).expect("generated names are valid"),
        order: CriterionOrder::new(ranking).expect("shuffled ranking has no duplicates"),
        evidence: EvidenceSet::new(facts).expect("generated facts are positive and distinct"),
        table,
    }
}
