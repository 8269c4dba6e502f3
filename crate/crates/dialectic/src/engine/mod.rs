//! Generic defeasible-argumentation engine.
//!
//! A [`DafInstance`] bundles an evidence set, a finite working set of
//! arguments, a conflict relation, and an injected structure-preference
//! function. On top of that the engine computes:
//!
//! - active arguments (least fixpoint of coherence + premise support),
//! - well-formed argumental structures and their enumeration,
//! - defeat between structures,
//! - dialectical trees assembled from exhaustive acceptable argumentation
//!   lines, with skeptical marking and warrant,
//! - the set of justified conclusions.
//!
//! All set iteration is canonically ordered, so every derived artifact
//! (structure lists, trees, renderings) is deterministic.

mod dialectics;
mod structure;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::lang::{EvidenceSet, Literal};

pub use dialectics::{ActiveInstance, DialecticalTree, Mark, TreeNode};
pub use structure::ArgStructure;

/// Errors raised by engine constructors and bounded computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("argument must have at least one premise")]
    EmptyPremises,
    #[error("claim {0} appears among the premises")]
    ClaimAmongPremises(Literal),
    #[error("the complement of claim {0} appears among the premises")]
    ComplementOfClaimAmongPremises(Literal),
    #[error("premises contain the complementary pair {0} and {1}")]
    ComplementaryPremises(Literal, Literal),
    #[error("unknown argument identifier {0}")]
    UnknownArgument(ArgumentId),
    #[error("conflict relation omits the claim-complement pair ({0}, {1})")]
    MissingCorePair(ArgumentId, ArgumentId),
    #[error("support entry for {premise} points at an argument claiming {actual}")]
    BadSupport { premise: Literal, actual: Literal },
    #[error("support entry for {premise} is not reachable from the top argument")]
    UnreachableSupport { premise: Literal },
    #[error("structure enumeration exceeded the cap of {cap} candidates")]
    StructureCap { cap: usize },
    #[error("argumentation-line enumeration exceeded the cap of {cap} lines")]
    LineCap { cap: usize },
    #[error("dialectical trees require an active root structure")]
    InactiveRoot,
}

/// Stable identifier of an argument inside a [`WorkingSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgumentId(pub u32);

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The smallest reasoning step: a non-empty premise set supporting one claim.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Argument {
    premises: BTreeSet<Literal>,
    claim: Literal,
}

impl Argument {
    /// Validates the argument shape: premises non-empty, the claim and its
    /// complement absent from the premises, and no premise complementing
    /// another premise.
    pub fn new(
        premises: impl IntoIterator<Item = Literal>,
        claim: Literal,
    ) -> Result<Self, EngineError> {
        let premises: BTreeSet<Literal> = premises.into_iter().collect();
        if premises.is_empty() {
            return Err(EngineError::EmptyPremises);
        }
        if premises.contains(&claim) {
            return Err(EngineError::ClaimAmongPremises(claim));
        }
        if premises.contains(&claim.complement()) {
            return Err(EngineError::ComplementOfClaimAmongPremises(claim));
        }
        for p in &premises {
            let comp = p.complement();
            if premises.contains(&comp) {
                return Err(EngineError::ComplementaryPremises(p.clone(), comp));
            }
        }
        Ok(Argument { premises, claim })
    }

    pub fn premises(&self) -> &BTreeSet<Literal> {
        &self.premises
    }

    pub fn claim(&self) -> &Literal {
        &self.claim
    }
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <- {{", self.claim)?;
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// A finite, duplicate-free set of arguments with stable identifiers.
///
/// Identifiers are assigned in insertion order; inserting an argument that is
/// already present returns the existing identifier.
#[derive(Debug, Clone, Default)]
pub struct WorkingSet {
    args: Vec<Argument>,
    index: BTreeMap<Argument, ArgumentId>,
}

impl WorkingSet {
    pub fn new() -> Self {
        WorkingSet::default()
    }

    pub fn insert(&mut self, arg: Argument) -> ArgumentId {
        if let Some(&id) = self.index.get(&arg) {
            return id;
        }
        let id = ArgumentId(u32::try_from(self.args.len()).expect("working set exceeds u32 range"));
        self.args.push(arg.clone());
        self.index.insert(arg, id);
        id
    }

    /// Resolves an identifier produced by this set. Panics on foreign ids;
    /// identifiers never outlive the set that minted them.
    pub fn get(&self, id: ArgumentId) -> &Argument {
        &self.args[id.0 as usize]
    }

    pub fn contains_id(&self, id: ArgumentId) -> bool {
        (id.0 as usize) < self.args.len()
    }

    /// Looks an argument up by its interface.
    pub fn find(&self, premises: &BTreeSet<Literal>, claim: &Literal) -> Option<ArgumentId> {
        let probe = Argument {
            premises: premises.clone(),
            claim: claim.clone(),
        };
        self.index.get(&probe).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArgumentId, &Argument)> {
        self.args
            .iter()
            .enumerate()
            .map(|(i, a)| (ArgumentId(i as u32), a))
    }

    pub fn ids(&self) -> impl Iterator<Item = ArgumentId> + '_ {
        (0..self.args.len()).map(|i| ArgumentId(i as u32))
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }
}

/// Symmetric-at-the-core conflict relation over argument identifiers.
///
/// The claim-complement pairs form the mandatory core; callers may add
/// further pairs on top.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConflictRelation {
    pairs: BTreeSet<(ArgumentId, ArgumentId)>,
}

impl ConflictRelation {
    /// Builds the claim-complement core over a working set: every ordered
    /// pair of arguments whose claims are complementary. The result is
    /// symmetric because complementation is an involution.
    pub fn claim_complement(ws: &WorkingSet) -> Self {
        let mut by_claim: BTreeMap<&Literal, Vec<ArgumentId>> = BTreeMap::new();
        for (id, arg) in ws.iter() {
            by_claim.entry(arg.claim()).or_default().push(id);
        }
        let mut pairs = BTreeSet::new();
        for (id, arg) in ws.iter() {
            let comp = arg.claim().complement();
            if let Some(opponents) = by_claim.get(&comp) {
                for &other in opponents {
                    pairs.insert((id, other));
                    pairs.insert((other, id));
                }
            }
        }
        ConflictRelation { pairs }
    }

    /// Adds one ordered conflict pair beyond the core.
    pub fn insert(&mut self, a: ArgumentId, b: ArgumentId) {
        self.pairs.insert((a, b));
    }

    pub fn conflicts(&self, a: ArgumentId, b: ArgumentId) -> bool {
        self.pairs.contains(&(a, b))
    }

    /// Structure-level conflict: the top arguments are in the relation.
    pub fn structure_conflict(&self, s1: &ArgStructure, s2: &ArgStructure) -> bool {
        self.conflicts(s1.top(), s2.top())
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArgumentId, ArgumentId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Outcome of comparing two structures with a preference function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefOutcome {
    /// The first structure is strictly preferred.
    First,
    /// The second structure is strictly preferred.
    Second,
    /// Neither is preferred.
    Neither,
}

/// Injected structure-preference function.
pub type PrefFn = Arc<dyn Fn(&ArgStructure, &ArgStructure) -> PrefOutcome + Send + Sync>;

/// A preference function that never prefers either side; useful where defeat
/// should reduce to plain conflict never resolving.
pub fn indifferent_pref() -> PrefFn {
    Arc::new(|_, _| PrefOutcome::Neither)
}

/// Resource bounds for the exponential-in-the-worst-case enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineLimits {
    /// Maximum structure candidates generated by enumeration.
    pub max_structures: usize,
    /// Maximum exhaustive argumentation lines per dialectical tree.
    pub max_lines: usize,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            max_structures: 100_000,
            max_lines: 100_000,
        }
    }
}

/// An argumentation framework instance: evidence, working set, conflicts,
/// and a preference function, ready for querying.
///
/// Values are immutable after construction; queries cache the active-structure
/// enumeration internally.
pub struct DafInstance {
    evidence: EvidenceSet,
    working: Arc<WorkingSet>,
    conflicts: ConflictRelation,
    pref: PrefFn,
    limits: EngineLimits,
    active_cache: OnceLock<Result<Vec<ArgStructure>, EngineError>>,
}

impl fmt::Debug for DafInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DafInstance")
            .field("evidence", &self.evidence)
            .field("working", &self.working)
            .field("conflicts", &self.conflicts)
            .field("pref", &"<fn>")
            .field("limits", &self.limits)
            .finish()
    }
}

impl Clone for DafInstance {
    fn clone(&self) -> Self {
        DafInstance {
            evidence: self.evidence.clone(),
            working: Arc::clone(&self.working),
            conflicts: self.conflicts.clone(),
            pref: Arc::clone(&self.pref),
            limits: self.limits,
            active_cache: OnceLock::new(),
        }
    }
}

impl DafInstance {
    /// Validates and assembles an instance. The conflict relation must range
    /// over the working set and contain every claim-complement pair.
    pub fn new(
        evidence: EvidenceSet,
        working: Arc<WorkingSet>,
        conflicts: ConflictRelation,
        pref: PrefFn,
    ) -> Result<Self, EngineError> {
        for (a, b) in conflicts.iter() {
            for id in [a, b] {
                if !working.contains_id(id) {
                    return Err(EngineError::UnknownArgument(id));
                }
            }
        }
        let mut by_claim: BTreeMap<&Literal, Vec<ArgumentId>> = BTreeMap::new();
        for (id, arg) in working.iter() {
            by_claim.entry(arg.claim()).or_default().push(id);
        }
        for (a, arg_a) in working.iter() {
            if let Some(opponents) = by_claim.get(&arg_a.claim().complement()) {
                for &b in opponents {
                    if !conflicts.conflicts(a, b) {
                        return Err(EngineError::MissingCorePair(a, b));
                    }
                }
            }
        }
        Ok(DafInstance {
            evidence,
            working,
            conflicts,
            pref,
            limits: EngineLimits::default(),
            active_cache: OnceLock::new(),
        })
    }

    /// Replaces the resource limits.
    pub fn with_limits(mut self, limits: EngineLimits) -> Self {
        self.limits = limits;
        self.active_cache = OnceLock::new();
        self
    }

    pub fn evidence(&self) -> &EvidenceSet {
        &self.evidence
    }

    pub fn working(&self) -> &WorkingSet {
        &self.working
    }

    /// Shared handle to the working set, for preference closures that need
    /// to resolve identifiers.
    pub fn working_arc(&self) -> Arc<WorkingSet> {
        Arc::clone(&self.working)
    }

    pub fn conflicts(&self) -> &ConflictRelation {
        &self.conflicts
    }

    pub fn pref_fn(&self) -> PrefFn {
        Arc::clone(&self.pref)
    }

    pub fn limits(&self) -> EngineLimits {
        self.limits
    }

    /// Applies the injected preference function.
    pub fn pref(&self, s1: &ArgStructure, s2: &ArgStructure) -> PrefOutcome {
        (self.pref)(s1, s2)
    }

    /// Active arguments: the least fixpoint of "coherent, and every premise
    /// is evidence or the claim of an active argument".
    pub fn active_arguments(&self) -> BTreeSet<ArgumentId> {
        let coherent: Vec<ArgumentId> = self
            .working
            .iter()
            .filter(|(_, a)| is_coherent(a, &self.evidence))
            .map(|(id, _)| id)
            .collect();
        let mut active: BTreeSet<ArgumentId> = BTreeSet::new();
        let mut claimed: BTreeSet<Literal> = BTreeSet::new();
        loop {
            let mut changed = false;
            for &id in &coherent {
                if active.contains(&id) {
                    continue;
                }
                let arg = self.working.get(id);
                let supported = arg
                    .premises()
                    .iter()
                    .all(|p| self.evidence.contains(p) || claimed.contains(p));
                if supported {
                    active.insert(id);
                    claimed.insert(arg.claim().clone());
                    changed = true;
                }
            }
            if !changed {
                return active;
            }
        }
    }

    /// Whether a structure is active: all external premises are evidence and
    /// every member argument is coherent.
    pub fn is_active_structure(&self, s: &ArgStructure) -> bool {
        s.premises(&self.working)
            .iter()
            .all(|p| self.evidence.contains(p))
            && s.args(&self.working)
                .iter()
                .all(|&id| is_coherent(self.working.get(id), &self.evidence))
    }

    /// Sorted active structures, computed once per instance and cached.
    pub fn active_structures(&self) -> Result<&[ArgStructure], EngineError> {
        self.active_cache
            .get_or_init(|| {
                self.enumerate_structures(true)
                    .map(|set| set.into_iter().collect())
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }
}

/// Coherence of an argument with respect to evidence: the claim is neither
/// contradicted nor duplicated by the premises or the evidence.
pub fn is_coherent(a: &Argument, e: &EvidenceSet) -> bool {
    let claim = a.claim();
    let comp = claim.complement();
    !a.premises().contains(&comp)
        && !e.contains(&comp)
        && !a.premises().contains(claim)
        && !e.contains(claim)
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;

    #[test]
    fn argument_shape_is_validated() {
        assert_eq!(
            Argument::new([], lit("q")).unwrap_err(),
            EngineError::EmptyPremises
        );
        assert_eq!(
            Argument::new([lit("q")], lit("q")).unwrap_err(),
            EngineError::ClaimAmongPremises(lit("q"))
        );
        assert_eq!(
            Argument::new([lit("~q")], lit("q")).unwrap_err(),
            EngineError::ComplementOfClaimAmongPremises(lit("q"))
        );
        assert_eq!(
            Argument::new([lit("p"), lit("~p")], lit("q")).unwrap_err(),
            EngineError::ComplementaryPremises(lit("p"), lit("~p"))
        );
        assert!(Argument::new([lit("p")], lit("q")).is_ok());
    }

    #[test]
    fn working_set_deduplicates_and_finds() {
        let mut ws = WorkingSet::new();
        let a = arg(&mut ws, &["p"], "q");
        let b = arg(&mut ws, &["p"], "q");
        let c = arg(&mut ws, &["p"], "~q");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(ws.len(), 2);
        let premises: BTreeSet<Literal> = [lit("p")].into_iter().collect();
        assert_eq!(ws.find(&premises, &lit("q")), Some(a));
        assert_eq!(ws.find(&premises, &lit("r")), None);
    }

    #[test]
    fn coherence_checks_premises_and_evidence() {
        let a = Argument::new([lit("smaller(box1,box3)")], lit("better(box1,box3)")).unwrap();
        let e_r = EvidenceSet::new(
            [
                "smaller(box1,box3)",
                "smaller(box2,box3)",
                "nearer_store(box1,box3)",
                "nearer_store(box2,box1)",
                "nearer_store(box2,box3)",
                "nearer_robot(box1,box2)",
                "nearer_robot(box1,box3)",
                "nearer_robot(box2,box3)",
            ]
            .map(lit),
        )
        .unwrap();
        assert!(is_coherent(&a, &e_r));

        let b = Argument::new([lit("p")], lit("q")).unwrap();
        assert!(!is_coherent(&b, &EvidenceSet::new([lit("~q")]).unwrap()));
        assert!(!is_coherent(&b, &EvidenceSet::new([lit("q")]).unwrap()));
    }

    #[test]
    fn activation_chains_through_claims() {
        let mut ws = WorkingSet::new();
        let a1 = arg(&mut ws, &["p"], "q");
        let a2 = arg(&mut ws, &["q"], "r");
        let f = instance(ws, &["p"], indifferent_pref());
        let active = f.active_arguments();
        assert_eq!(active, [a1, a2].into_iter().collect());
    }

    #[test]
    fn activation_requires_coherence_and_support() {
        let mut ws = WorkingSet::new();
        let supported = arg(&mut ws, &["p"], "q");
        arg(&mut ws, &["r"], "s"); // unsupported premise
        arg(&mut ws, &["p"], "~t"); // incoherent: claim complement in evidence
        let f = instance(ws, &["p", "t"], indifferent_pref());
        assert_eq!(f.active_arguments(), [supported].into_iter().collect());
    }

    #[test]
    fn conflict_core_is_symmetric_and_complete() {
        let mut ws = WorkingSet::new();
        let a = arg(&mut ws, &["p"], "q");
        let b = arg(&mut ws, &["r"], "~q");
        let c = arg(&mut ws, &["s"], "t");
        let rel = ConflictRelation::claim_complement(&ws);
        assert!(rel.conflicts(a, b));
        assert!(rel.conflicts(b, a));
        assert!(!rel.conflicts(a, c));
        assert!(!rel.conflicts(a, a));
        assert_eq!(rel.len(), 2);
    }

    #[test]
    fn instance_rejects_foreign_ids_and_missing_core() {
        let mut ws = WorkingSet::new();
        let a = arg(&mut ws, &["p"], "q");
        let b = arg(&mut ws, &["r"], "~q");

        let mut bad = ConflictRelation::claim_complement(&ws);
        bad.insert(ArgumentId(99), a);
        let e = EvidenceSet::empty();
        let err =
            DafInstance::new(e.clone(), Arc::new(ws.clone()), bad, indifferent_pref()).unwrap_err();
        assert_eq!(err, EngineError::UnknownArgument(ArgumentId(99)));

        let err = DafInstance::new(
            e,
            Arc::new(ws),
            ConflictRelation::default(),
            indifferent_pref(),
        )
        .unwrap_err();
        assert_eq!(err, EngineError::MissingCorePair(a, b));
    }
}
