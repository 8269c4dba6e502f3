//! Multi-criteria decision layer on top of the argumentation engine.
//!
//! Alternatives are compared pairwise on named criteria. From a set of
//! alternatives, a criterion set, a strict priority order, and pairwise
//! evidence facts, this module generates:
//!
//! - a schema working set arguing `better`/`~better` claims from criterion
//!   facts (plus `same_att` ties),
//! - a structure-preference function that ranks structures by the priority of
//!   the criteria they mention,
//! - ground decision rules (single-winner and tied-pair shapes) over a choice
//!   experiment,
//! - the selection procedure returning the acceptable alternatives of an
//!   experiment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::engine::{
    ArgStructure, Argument, ConflictRelation, DafInstance, EngineError, PrefFn, PrefOutcome,
    WorkingSet,
};
use crate::lang::{EvidenceSet, LangError, Literal};

/// Predicate reserved for comparative claims.
pub const BETTER: &str = "better";
/// Predicate reserved for all-criteria ties.
pub const SAME_ATT: &str = "same_att";

/// Errors raised by the decision layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error("alternative set must not be empty")]
    EmptyAlternatives,
    #[error("criterion set must not be empty")]
    EmptyCriteria,
    #[error("symbol {name:?} is empty or contains characters outside [A-Za-z0-9_]")]
    InvalidSymbol { name: String },
    #[error("name {name:?} is reserved for generated claims")]
    ReservedName { name: String },
    #[error("priority order lists {name:?} twice")]
    DuplicateInOrder { name: String },
    #[error("priority order is not a permutation of the criterion set")]
    OrderMismatch,
    #[error("evidence fact {0} is negated; only positive facts are licensed")]
    NegatedFact(Literal),
    #[error("evidence fact {0} must relate exactly two alternatives")]
    FactArity(Literal),
    #[error("evidence fact {0} uses a predicate that is neither a criterion nor {SAME_ATT}")]
    UnknownFactPredicate(Literal),
    #[error("evidence fact {0} mentions an unknown alternative")]
    UnknownFactAlternative(Literal),
    #[error("evidence fact {0} compares an alternative with itself")]
    SelfComparison(Literal),
    #[error("evidence facts {first} and {second} state both orientations of one criterion")]
    ConflictingOrientation { first: Literal, second: Literal },
    #[error("evidence fact {same_att} ties a pair that {criterion} also compares")]
    SameAttWithCriterion {
        same_att: Literal,
        criterion: Literal,
    },
    #[error("evidence fact {0} must name the lexicographically smaller alternative first")]
    SameAttOrientation(Literal),
    #[error("choice experiment must not be empty")]
    EmptyExperiment,
    #[error("alternative {name:?} is not part of the framework")]
    UnknownAlternative { name: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Evidence(#[from] LangError),
}

fn check_symbol(name: &str) -> Result<(), DecisionError> {
    let valid = !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid {
        return Err(DecisionError::InvalidSymbol {
            name: name.to_string(),
        });
    }
    if name == BETTER || name == SAME_ATT {
        return Err(DecisionError::ReservedName {
            name: name.to_string(),
        });
    }
    Ok(())
}

/// The finite set of alternatives under consideration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternativeSet {
    ids: BTreeSet<String>,
}

impl AlternativeSet {
    pub fn new(ids: impl IntoIterator<Item = impl Into<String>>) -> Result<Self, DecisionError> {
        let ids: BTreeSet<String> = ids.into_iter().map(Into::into).collect();
        if ids.is_empty() {
            return Err(DecisionError::EmptyAlternatives);
        }
        for id in &ids {
            check_symbol(id)?;
        }
        Ok(AlternativeSet { ids })
    }

    pub fn contains(&self, id: &str) -> bool {
        self.ids.contains(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(String::as_str)
    }

    pub fn as_set(&self) -> &BTreeSet<String> {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Sorted unordered pairs (a, b) with a < b.
    pub fn pairs(&self) -> Vec<(&str, &str)> {
        let v: Vec<&str> = self.ids.iter().map(String::as_str).collect();
        let mut out = Vec::new();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                out.push((v[i], v[j]));
            }
        }
        out
    }
}

/// The named criteria on which alternatives are compared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionSet {
    names: BTreeSet<String>,
}

impl CriterionSet {
    pub fn new(names: impl IntoIterator<Item = impl Into<String>>) -> Result<Self, DecisionError> {
        let names: BTreeSet<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(DecisionError::EmptyCriteria);
        }
        for name in &names {
            check_symbol(name)?;
        }
        Ok(CriterionSet { names })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Strict total priority order over criteria, most important first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionOrder {
    ranking: Vec<String>,
}

impl CriterionOrder {
    pub fn new(
        ranking: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, DecisionError> {
        let ranking: Vec<String> = ranking.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for name in &ranking {
            check_symbol(name)?;
            if !seen.insert(name.clone()) {
                return Err(DecisionError::DuplicateInOrder { name: name.clone() });
            }
        }
        Ok(CriterionOrder { ranking })
    }

    /// Position in the ranking; lower is more important.
    pub fn rank(&self, name: &str) -> Option<usize> {
        self.ranking.iter().position(|n| n == name)
    }

    /// Whether `a` outranks `b`; false when either is unranked.
    pub fn outranks(&self, a: &str, b: &str) -> bool {
        matches!((self.rank(a), self.rank(b)), (Some(ra), Some(rb)) if ra < rb)
    }

    /// Whether the ranking is a permutation of the criterion set.
    pub fn matches(&self, criteria: &CriterionSet) -> bool {
        self.ranking.len() == criteria.len() && self.ranking.iter().all(|n| criteria.contains(n))
    }

    pub fn as_slice(&self) -> &[String] {
        &self.ranking
    }
}

impl fmt::Display for CriterionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ranking.join(" > "))
    }
}

/// `better(x, y)`.
pub fn better(x: &str, y: &str) -> Literal {
    Literal::positive(BETTER, [x, y])
}

/// `~better(x, y)`.
pub fn not_better(x: &str, y: &str) -> Literal {
    Literal::negative(BETTER, [x, y])
}

/// `same_att(x, y)` in canonical orientation.
pub fn same_att(x: &str, y: &str) -> Literal {
    Literal::positive(SAME_ATT, [x, y])
}

/// `c(x, y)`: alternative x beats y on criterion c.
pub fn criterion_fact(c: &str, x: &str, y: &str) -> Literal {
    Literal::positive(c, [x, y])
}

/// Generates the comparison working set: per unordered pair and criterion,
/// four arguments reading a criterion fact as a comparative claim, plus two
/// arguments per pair reading a tie as mutual non-betterness.
pub fn build_working_set(x: &AlternativeSet, c: &CriterionSet) -> WorkingSet {
    let mut ws = WorkingSet::new();
    let mut push = |premise: Literal, claim: Literal| {
        ws.insert(Argument::new([premise], claim).expect("schema arguments are well-shaped"));
    };
    for (a, b) in x.pairs() {
        for crit in c.iter() {
            push(criterion_fact(crit, a, b), better(a, b));
            push(criterion_fact(crit, a, b), not_better(b, a));
            push(criterion_fact(crit, b, a), better(b, a));
            push(criterion_fact(crit, b, a), not_better(a, b));
        }
        push(same_att(a, b), not_better(a, b));
        push(same_att(a, b), not_better(b, a));
    }
    ws
}

/// Criterion names mentioned by the premises of a structure's arguments.
pub fn dlits(s: &ArgStructure, ws: &WorkingSet, c: &CriterionSet) -> BTreeSet<String> {
    s.all_premises(ws)
        .iter()
        .map(|l| l.predicate().to_string())
        .filter(|p| c.contains(p))
        .collect()
}

/// Structure preference by criterion priority: a structure wins when every
/// criterion behind its rival is outranked by one of its own, and the
/// converse fails.
pub fn pref_dlits(
    s1: &ArgStructure,
    s2: &ArgStructure,
    ws: &WorkingSet,
    c: &CriterionSet,
    o: &CriterionOrder,
) -> PrefOutcome {
    let d1 = dlits(s1, ws, c);
    let d2 = dlits(s2, ws, c);
    let covers = |mine: &BTreeSet<String>, theirs: &BTreeSet<String>| {
        theirs.iter().all(|t| mine.iter().any(|m| o.outranks(m, t)))
    };
    match (covers(&d1, &d2), covers(&d2, &d1)) {
        (true, false) => PrefOutcome::First,
        (false, true) => PrefOutcome::Second,
        _ => PrefOutcome::Neither,
    }
}

/// Preference function closure over a generated working set.
fn dlits_pref(ws: Arc<WorkingSet>, c: CriterionSet, o: CriterionOrder) -> PrefFn {
    Arc::new(move |s1, s2| pref_dlits(s1, s2, &ws, &c, &o))
}

/// Checks that every evidence fact is a licensed pairwise comparison and that
/// orientations are consistent: at most one orientation per pair and
/// criterion, and ties only on pairs no criterion compares.
pub fn check_licensing(
    e: &EvidenceSet,
    x: &AlternativeSet,
    c: &CriterionSet,
) -> Result<(), DecisionError> {
    let mut oriented: BTreeMap<(String, String, String), Literal> = BTreeMap::new();
    let mut ties: Vec<Literal> = Vec::new();
    let mut criterion_facts: BTreeMap<(String, String), Literal> = BTreeMap::new();

    for fact in e.iter() {
        if fact.is_negated() {
            return Err(DecisionError::NegatedFact(fact.clone()));
        }
        let pred = fact.predicate();
        let is_tie = pred == SAME_ATT;
        if !is_tie && !c.contains(pred) {
            return Err(DecisionError::UnknownFactPredicate(fact.clone()));
        }
        let [a, b] = match fact.args() {
            [a, b] => [a.clone(), b.clone()],
            _ => return Err(DecisionError::FactArity(fact.clone())),
        };
        if !x.contains(&a) || !x.contains(&b) {
            return Err(DecisionError::UnknownFactAlternative(fact.clone()));
        }
        if a == b {
            return Err(DecisionError::SelfComparison(fact.clone()));
        }
        let (lo, hi) = if a < b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        if is_tie {
            if a > b {
                return Err(DecisionError::SameAttOrientation(fact.clone()));
            }
            ties.push(fact.clone());
        } else {
            let key = (lo.clone(), hi.clone(), pred.to_string());
            if let Some(prior) = oriented.get(&key) {
                if prior != fact {
                    return Err(DecisionError::ConflictingOrientation {
                        first: prior.clone(),
                        second: fact.clone(),
                    });
                }
            }
            oriented.insert(key, fact.clone());
            criterion_facts
                .entry((lo, hi))
                .or_insert_with(|| fact.clone());
        }
    }

    for tie in ties {
        let key = (tie.args()[0].clone(), tie.args()[1].clone());
        if let Some(criterion) = criterion_facts.get(&key) {
            return Err(DecisionError::SameAttWithCriterion {
                same_att: tie,
                criterion: criterion.clone(),
            });
        }
    }
    Ok(())
}

/// The argumentation instance generated from alternatives, criteria, a
/// priority order, and licensed pairwise evidence.
#[derive(Debug)]
pub struct EpistemicComponent {
    instance: DafInstance,
    justified: OnceLock<Result<BTreeSet<Literal>, EngineError>>,
}

impl Clone for EpistemicComponent {
    fn clone(&self) -> Self {
        EpistemicComponent {
            instance: self.instance.clone(),
            justified: OnceLock::new(),
        }
    }
}

/// Builds the epistemic component: generated working set, claim-complement
/// conflicts, and the criterion-priority preference function.
pub fn build_epistemic(
    x: &AlternativeSet,
    c: &CriterionSet,
    o: &CriterionOrder,
    e: EvidenceSet,
) -> Result<EpistemicComponent, DecisionError> {
    if !o.matches(c) {
        return Err(DecisionError::OrderMismatch);
    }
    check_licensing(&e, x, c)?;
    let ws = Arc::new(build_working_set(x, c));
    let conflicts = ConflictRelation::claim_complement(&ws);
    let pref = dlits_pref(Arc::clone(&ws), c.clone(), o.clone());
    let instance = DafInstance::new(e, ws, conflicts, pref)?;
    Ok(EpistemicComponent {
        instance,
        justified: OnceLock::new(),
    })
}

impl EpistemicComponent {
    pub fn instance(&self) -> &DafInstance {
        &self.instance
    }

    /// Justified conclusions, computed once per component.
    pub fn justified(&self) -> Result<&BTreeSet<Literal>, DecisionError> {
        self.justified
            .get_or_init(|| self.instance.justified_conclusions())
            .as_ref()
            .map_err(|e| DecisionError::Engine(e.clone()))
    }
}

/// The shape of a ground decision rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Chooses a single alternative shown better than some rival.
    Dominance,
    /// Chooses a pair shown mutually non-better.
    Indifference,
}

/// A ground decision rule over one experiment: choose `chosen` if every
/// precondition is justified and no constraint is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionRule {
    kind: RuleKind,
    chosen: BTreeSet<String>,
    experiment: BTreeSet<String>,
    preconditions: BTreeSet<Literal>,
    constraints: BTreeSet<Literal>,
}

impl DecisionRule {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn chosen(&self) -> &BTreeSet<String> {
        &self.chosen
    }

    pub fn experiment(&self) -> &BTreeSet<String> {
        &self.experiment
    }

    pub fn preconditions(&self) -> &BTreeSet<Literal> {
        &self.preconditions
    }

    pub fn constraints(&self) -> &BTreeSet<Literal> {
        &self.constraints
    }

    /// Whether the rule fires against a justified-conclusion set.
    pub fn is_applicable(&self, justified: &BTreeSet<Literal>) -> bool {
        self.preconditions.iter().all(|p| justified.contains(p))
            && self.constraints.iter().all(|t| !justified.contains(t))
    }
}

/// Whether a rule fires against an epistemic component's justified set.
pub fn is_applicable(r: &DecisionRule, k: &EpistemicComponent) -> Result<bool, DecisionError> {
    Ok(r.is_applicable(k.justified()?))
}

/// All ground rule instances over an experiment.
///
/// Dominance rules: for each ordered pair (w, y) of distinct members, choose
/// {w} if `better(w, y)` is justified and no `better(z, w)` is, z ranging
/// over the other members. Indifference rules: for each unordered pair
/// {w, y}, choose {w, y} if both non-betterness claims are justified and no
/// third member is justified better than either. A singleton experiment has
/// no two distinct members, so it yields no instances.
pub fn instantiate_rules(b: &BTreeSet<String>) -> Result<Vec<DecisionRule>, DecisionError> {
    if b.is_empty() {
        return Err(DecisionError::EmptyExperiment);
    }
    let members: Vec<&str> = b.iter().map(String::as_str).collect();
    let mut rules = Vec::new();
    for &w in &members {
        for &y in &members {
            if w == y {
                continue;
            }
            rules.push(DecisionRule {
                kind: RuleKind::Dominance,
                chosen: [w.to_string()].into_iter().collect(),
                experiment: b.clone(),
                preconditions: [better(w, y)].into_iter().collect(),
                constraints: members
                    .iter()
                    .filter(|&&z| z != w)
                    .map(|&z| better(z, w))
                    .collect(),
            });
        }
    }
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let (w, y) = (members[i], members[j]);
            rules.push(DecisionRule {
                kind: RuleKind::Indifference,
                chosen: [w.to_string(), y.to_string()].into_iter().collect(),
                experiment: b.clone(),
                preconditions: [not_better(w, y), not_better(y, w)].into_iter().collect(),
                constraints: members
                    .iter()
                    .filter(|&&z| z != w && z != y)
                    .flat_map(|&z| [better(z, w), better(z, y)])
                    .collect(),
            });
        }
    }
    Ok(rules)
}

/// A complete decision setup: alternatives, prioritized criteria, and the
/// epistemic component generated from pairwise evidence.
#[derive(Debug, Clone)]
pub struct DecisionFramework {
    alternatives: AlternativeSet,
    criteria: CriterionSet,
    order: CriterionOrder,
    epistemic: EpistemicComponent,
}

impl DecisionFramework {
    pub fn new(
        alternatives: AlternativeSet,
        criteria: CriterionSet,
        order: CriterionOrder,
        evidence: EvidenceSet,
    ) -> Result<Self, DecisionError> {
        let epistemic = build_epistemic(&alternatives, &criteria, &order, evidence)?;
        Ok(DecisionFramework {
            alternatives,
            criteria,
            order,
            epistemic,
        })
    }

    pub fn alternatives(&self) -> &AlternativeSet {
        &self.alternatives
    }

    pub fn criteria(&self) -> &CriterionSet {
        &self.criteria
    }

    pub fn order(&self) -> &CriterionOrder {
        &self.order
    }

    pub fn evidence(&self) -> &EvidenceSet {
        self.epistemic.instance().evidence()
    }

    pub fn epistemic(&self) -> &EpistemicComponent {
        &self.epistemic
    }

    pub fn justified(&self) -> Result<&BTreeSet<Literal>, DecisionError> {
        self.epistemic.justified()
    }

    /// The selection procedure: the empty experiment selects nothing, a
    /// singleton selects itself, and otherwise the union of the chosen sets
    /// of all applicable rule instances is selected.
    pub fn acceptable_alternatives(
        &self,
        b: &BTreeSet<String>,
    ) -> Result<BTreeSet<String>, DecisionError> {
        for name in b {
            if !self.alternatives.contains(name) {
                return Err(DecisionError::UnknownAlternative { name: name.clone() });
            }
        }
        if b.is_empty() {
            return Ok(BTreeSet::new());
        }
        if b.len() == 1 {
            return Ok(b.clone());
        }
        let justified = self.epistemic.justified()?;
        let mut selected = BTreeSet::new();
        for rule in instantiate_rules(b)? {
            if rule.is_applicable(justified) {
                selected.extend(rule.chosen().iter().cloned());
            }
        }
        Ok(selected)
    }

    /// Rebuilds the framework with evidence `(E \ remove) ∪ add`, re-running
    /// licensing and consistency checks.
    pub fn update_evidence(
        &self,
        add: &BTreeSet<Literal>,
        remove: &BTreeSet<Literal>,
    ) -> Result<Self, DecisionError> {
        let facts: BTreeSet<Literal> = self
            .evidence()
            .iter()
            .filter(|f| !remove.contains(f))
            .cloned()
            .chain(add.iter().cloned())
            .collect();
        DecisionFramework::new(
            self.alternatives.clone(),
            self.criteria.clone(),
            self.order.clone(),
            EvidenceSet::new(facts)?,
        )
    }
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;

    fn primitive_for(ws: &WorkingSet, premise: &str, claim: &str) -> ArgStructure {
        let premises = [lit(premise)].into_iter().collect();
        let id = ws
            .find(&premises, &lit(claim))
            .unwrap_or_else(|| panic!("no argument {claim} <- {{{premise}}}"));
        ArgStructure::primitive(id)
    }

    #[test]
    fn working_set_size_follows_the_schema() {
        let sizes = [(3usize, 3usize, 42usize), (2, 1, 6), (4, 2, 60)];
        for (n, m, expected) in sizes {
            let x = AlternativeSet::new((1..=n).map(|i| format!("a{i}"))).unwrap();
            let c = CriterionSet::new((1..=m).map(|i| format!("c{i}"))).unwrap();
            assert_eq!(build_working_set(&x, &c).len(), expected, "n={n} m={m}");
        }
    }

    #[test]
    fn working_set_contains_the_four_criterion_readings_and_two_tie_readings() {
        let x = AlternativeSet::new(["a", "b"]).unwrap();
        let c = CriterionSet::new(["speed"]).unwrap();
        let ws = build_working_set(&x, &c);
        for (premise, claim) in [
            ("speed(a,b)", "better(a,b)"),
            ("speed(a,b)", "~better(b,a)"),
            ("speed(b,a)", "better(b,a)"),
            ("speed(b,a)", "~better(a,b)"),
            ("same_att(a,b)", "~better(a,b)"),
            ("same_att(a,b)", "~better(b,a)"),
        ] {
            let premises = [lit(premise)].into_iter().collect();
            assert!(
                ws.find(&premises, &lit(claim)).is_some(),
                "missing {claim} <- {{{premise}}}"
            );
        }
    }

    #[test]
    fn reserved_and_invalid_names_are_rejected() {
        assert_eq!(
            AlternativeSet::new(["better"]).unwrap_err(),
            DecisionError::ReservedName {
                name: "better".into()
            }
        );
        assert_eq!(
            CriterionSet::new(["same_att"]).unwrap_err(),
            DecisionError::ReservedName {
                name: "same_att".into()
            }
        );
        assert!(matches!(
            AlternativeSet::new(["bad name"]).unwrap_err(),
            DecisionError::InvalidSymbol { .. }
        ));
        assert_eq!(
            AlternativeSet::new(Vec::<String>::new()).unwrap_err(),
            DecisionError::EmptyAlternatives
        );
        assert_eq!(
            CriterionOrder::new(["a", "a"]).unwrap_err(),
            DecisionError::DuplicateInOrder { name: "a".into() }
        );
    }

    #[test]
    fn dlits_projects_criterion_predicates_from_premises() {
        let (x, c, _) = storeroom_a();
        let ws = build_working_set(&x, &c);
        let s_store = primitive_for(&ws, "nearer_store(box2,box1)", "~better(box1,box2)");
        assert_eq!(dlits(&s_store, &ws, &c), names(&["nearer_store"]));
        let s_robot = primitive_for(&ws, "nearer_robot(box1,box2)", "better(box1,box2)");
        assert_eq!(dlits(&s_robot, &ws, &c), names(&["nearer_robot"]));
        let s_tie = primitive_for(&ws, "same_att(box1,box2)", "~better(box1,box2)");
        assert_eq!(dlits(&s_tie, &ws, &c), BTreeSet::new());
    }

    #[test]
    fn pref_dlits_ranks_by_criterion_priority() {
        let (x, c, _) = storeroom_a();
        let ws = build_working_set(&x, &c);
        let s_robot = primitive_for(&ws, "nearer_robot(box1,box2)", "better(box1,box2)");
        let s_store = primitive_for(&ws, "nearer_store(box2,box1)", "~better(box1,box2)");
        assert_eq!(
            pref_dlits(&s_robot, &s_store, &ws, &c, &robot_first()),
            PrefOutcome::First
        );
        assert_eq!(
            pref_dlits(&s_store, &s_robot, &ws, &c, &robot_first()),
            PrefOutcome::Second
        );
        // Same priority on both sides: strict order prefers neither.
        let s_store2 = primitive_for(&ws, "nearer_store(box2,box1)", "better(box2,box1)");
        assert_eq!(
            pref_dlits(&s_store, &s_store2, &ws, &c, &robot_first()),
            PrefOutcome::Neither
        );
    }

    #[test]
    fn pref_dlits_under_the_second_storeroom_order() {
        let (x, c, _) = storeroom_b();
        let ws = build_working_set(&x, &c);
        let s_small = primitive_for(&ws, "smaller(box4,box6)", "better(box4,box6)");
        let s_robot = primitive_for(&ws, "nearer_robot(box6,box4)", "~better(box4,box6)");
        assert_eq!(
            pref_dlits(&s_small, &s_robot, &ws, &c, &store_first()),
            PrefOutcome::Second
        );
        let s_store = primitive_for(&ws, "nearer_store(box4,box6)", "better(box4,box6)");
        assert_eq!(
            pref_dlits(&s_store, &s_robot, &ws, &c, &store_first()),
            PrefOutcome::First
        );
    }

    #[test]
    fn epistemic_component_matches_the_first_storeroom() {
        let (x, c, e) = storeroom_a();
        let k = build_epistemic(&x, &c, &robot_first(), e).unwrap();
        assert_eq!(k.instance().working().len(), 42);
        let active = k.instance().active_arguments();
        assert_eq!(active.len(), 16);
        // Conflicts restricted to active arguments: the two readings of the
        // box1/box2 stand-off, in both directions.
        let active_conflicts: Vec<_> = k
            .instance()
            .conflicts()
            .iter()
            .filter(|(a, b)| active.contains(a) && active.contains(b))
            .collect();
        assert_eq!(active_conflicts.len(), 4);
    }

    #[test]
    fn epistemic_component_matches_the_second_storeroom() {
        let (x, c, e) = storeroom_b();
        let k = build_epistemic(&x, &c, &store_first(), e).unwrap();
        assert_eq!(k.instance().active_arguments().len(), 14);
        assert_eq!(
            k.justified().unwrap().clone(),
            lits(&[
                "better(box4,box6)",
                "better(box5,box6)",
                "~better(box4,box5)",
                "~better(box5,box4)",
                "~better(box6,box4)",
                "~better(box6,box5)",
            ])
        );
    }

    #[test]
    fn licensing_rejects_malformed_evidence() {
        let (x, c, _) = storeroom_a();
        let build = |facts: &[&str]| {
            build_epistemic(
                &x,
                &c,
                &robot_first(),
                EvidenceSet::new(facts.iter().map(|s| lit(s))).unwrap(),
            )
        };
        assert_eq!(
            build(&["better(box1,box2)"]).unwrap_err(),
            DecisionError::UnknownFactPredicate(lit("better(box1,box2)"))
        );
        assert_eq!(
            build(&["smaller(box1)"]).unwrap_err(),
            DecisionError::FactArity(lit("smaller(box1)"))
        );
        assert_eq!(
            build(&["smaller(box1,box9)"]).unwrap_err(),
            DecisionError::UnknownFactAlternative(lit("smaller(box1,box9)"))
        );
        assert_eq!(
            build(&["smaller(box1,box1)"]).unwrap_err(),
            DecisionError::SelfComparison(lit("smaller(box1,box1)"))
        );
        assert_eq!(
            build(&["smaller(box1,box2)", "smaller(box2,box1)"]).unwrap_err(),
            DecisionError::ConflictingOrientation {
                first: lit("smaller(box1,box2)"),
                second: lit("smaller(box2,box1)"),
            }
        );
        assert_eq!(
            build(&["same_att(box1,box2)", "smaller(box1,box2)"]).unwrap_err(),
            DecisionError::SameAttWithCriterion {
                same_att: lit("same_att(box1,box2)"),
                criterion: lit("smaller(box1,box2)"),
            }
        );
        assert_eq!(
            build(&["same_att(box2,box1)"]).unwrap_err(),
            DecisionError::SameAttOrientation(lit("same_att(box2,box1)"))
        );
        let wrong_order = CriterionOrder::new(["smaller"]).unwrap();
        assert_eq!(
            build_epistemic(&x, &c, &wrong_order, EvidenceSet::empty()).unwrap_err(),
            DecisionError::OrderMismatch
        );
    }

    #[test]
    fn rule_instantiation_is_exhaustive_and_ground() {
        assert_eq!(
            instantiate_rules(&BTreeSet::new()).unwrap_err(),
            DecisionError::EmptyExperiment
        );
        assert!(instantiate_rules(&names(&["a1"])).unwrap().is_empty());

        let two = instantiate_rules(&names(&["a1", "a2"])).unwrap();
        let dominance: Vec<_> = two
            .iter()
            .filter(|r| r.kind() == RuleKind::Dominance)
            .collect();
        let ties: Vec<_> = two
            .iter()
            .filter(|r| r.kind() == RuleKind::Indifference)
            .collect();
        assert_eq!((dominance.len(), ties.len()), (2, 1));
        let first = dominance
            .iter()
            .find(|r| r.chosen() == &names(&["a1"]))
            .unwrap();
        assert_eq!(first.preconditions(), &lits(&["better(a1,a2)"]));
        assert_eq!(first.constraints(), &lits(&["better(a2,a1)"]));
        assert_eq!(ties[0].chosen(), &names(&["a1", "a2"]));
        assert_eq!(
            ties[0].preconditions(),
            &lits(&["~better(a1,a2)", "~better(a2,a1)"])
        );
        assert!(ties[0].constraints().is_empty());

        let three = instantiate_rules(&names(&["a1", "a2", "a3"])).unwrap();
        let dominance = three
            .iter()
            .filter(|r| r.kind() == RuleKind::Dominance)
            .count();
        let ties = three
            .iter()
            .filter(|r| r.kind() == RuleKind::Indifference)
            .count();
        assert_eq!((dominance, ties), (6, 3));
        // Constraints range over every non-chosen member of the experiment.
        let w1 = three
            .iter()
            .find(|r| r.kind() == RuleKind::Dominance && r.chosen() == &names(&["a1"]))
            .unwrap();
        assert_eq!(w1.constraints(), &lits(&["better(a2,a1)", "better(a3,a1)"]));
    }

    #[test]
    fn applicability_reads_the_justified_set() {
        let adf = framework(storeroom_a(), robot_first());
        let justified = adf.justified().unwrap();
        assert_eq!(
            justified,
            &lits(&[
                "better(box1,box2)",
                "better(box1,box3)",
                "better(box2,box3)",
                "~better(box2,box1)",
                "~better(box3,box1)",
                "~better(box3,box2)",
            ])
        );
        let b = names(&["box1", "box2", "box3"]);
        let rules = instantiate_rules(&b).unwrap();
        let applicable: Vec<_> = rules
            .iter()
            .filter(|r| r.is_applicable(justified))
            .collect();
        assert_eq!(applicable.len(), 2);
        assert!(applicable.iter().all(|r| r.chosen() == &names(&["box1"])));
        let w3 = rules
            .iter()
            .filter(|r| r.kind() == RuleKind::Dominance && r.chosen() == &names(&["box3"]))
            .collect::<Vec<_>>();
        assert!(w3.iter().all(|r| !r.is_applicable(justified)));
    }

    #[test]
    fn selection_follows_the_priority_order() {
        let b = names(&["box1", "box2", "box3"]);
        let adf = framework(storeroom_a(), robot_first());
        assert_eq!(adf.acceptable_alternatives(&b).unwrap(), names(&["box1"]));
        let adf = framework(storeroom_a(), store_first());
        assert_eq!(adf.acceptable_alternatives(&b).unwrap(), names(&["box2"]));

        let b2 = names(&["box4", "box5", "box6"]);
        let adf = framework(storeroom_b(), store_first());
        assert_eq!(
            adf.acceptable_alternatives(&b2).unwrap(),
            names(&["box4", "box5"])
        );
        let adf = framework(storeroom_b(), robot_first());
        assert_eq!(adf.acceptable_alternatives(&b2).unwrap(), names(&["box6"]));
    }

    #[test]
    fn selection_handles_degenerate_experiments() {
        let adf = framework(storeroom_a(), robot_first());
        assert_eq!(
            adf.acceptable_alternatives(&BTreeSet::new()).unwrap(),
            BTreeSet::new()
        );
        assert_eq!(
            adf.acceptable_alternatives(&names(&["box3"])).unwrap(),
            names(&["box3"])
        );
        assert_eq!(
            adf.acceptable_alternatives(&names(&["box7"])).unwrap_err(),
            DecisionError::UnknownAlternative {
                name: "box7".into()
            }
        );
    }

    #[test]
    fn evidence_updates_rebuild_the_framework() {
        let adf = framework(storeroom_b(), store_first());
        let b = names(&["box4", "box5", "box6"]);

        let same = adf
            .update_evidence(&BTreeSet::new(), &BTreeSet::new())
            .unwrap();
        assert_eq!(
            same.acceptable_alternatives(&b).unwrap(),
            adf.acceptable_alternatives(&b).unwrap()
        );

        // Breaking the tie in favor of box5 changes the selection.
        let updated = adf
            .update_evidence(
                &lits(&["smaller(box5,box4)"]),
                &lits(&["same_att(box4,box5)"]),
            )
            .unwrap();
        assert_eq!(
            updated.acceptable_alternatives(&b).unwrap(),
            names(&["box5"])
        );

        // Adding an unlicensed fact fails loudly.
        let err = adf
            .update_evidence(&lits(&["smaller(box4,box5)"]), &BTreeSet::new())
            .unwrap_err();
        assert_eq!(
            err,
            DecisionError::SameAttWithCriterion {
                same_att: lit("same_att(box4,box5)"),
                criterion: lit("smaller(box4,box5)"),
            }
        );
    }
}
