//! Argumental structures: trees of arguments supporting a top claim.
//!
//! A structure is stored as its top argument plus a support map from premise
//! literals to the argument claiming them. Keying support by literal makes
//! premise support uniform by construction: every occurrence of a literal in
//! the structure is supported the same way (or not at all).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::lang::Literal;

use super::{ArgumentId, ConflictRelation, DafInstance, EngineError, WorkingSet};

/// A tree of arguments rooted at a top argument.
///
/// Canonically ordered (top, then support map) so collections of structures
/// iterate deterministically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArgStructure {
    top: ArgumentId,
    support: BTreeMap<Literal, ArgumentId>,
}

impl ArgStructure {
    /// A single-argument structure.
    pub fn primitive(top: ArgumentId) -> Self {
        ArgStructure {
            top,
            support: BTreeMap::new(),
        }
    }

    /// Builds a structure from a top argument and a support map.
    ///
    /// Every support entry must point at an argument claiming the mapped
    /// literal and must be reachable from the top; cyclic support is
    /// representable (and then rejected by [`ArgStructure::is_well_formed`]).
    pub fn new(
        top: ArgumentId,
        support: BTreeMap<Literal, ArgumentId>,
        ws: &WorkingSet,
    ) -> Result<Self, EngineError> {
        for id in support.values().chain([&top]) {
            if !ws.contains_id(*id) {
                return Err(EngineError::UnknownArgument(*id));
            }
        }
        for (premise, &id) in &support {
            let claim = ws.get(id).claim();
            if claim != premise {
                return Err(EngineError::BadSupport {
                    premise: premise.clone(),
                    actual: claim.clone(),
                });
            }
        }
        let s = ArgStructure { top, support };
        let reachable = s.reachable_support_keys(ws);
        if let Some(dangling) = s.support.keys().find(|k| !reachable.contains(*k)) {
            return Err(EngineError::UnreachableSupport {
                premise: dangling.clone(),
            });
        }
        Ok(s)
    }

    pub fn top(&self) -> ArgumentId {
        self.top
    }

    pub fn support(&self) -> &BTreeMap<Literal, ArgumentId> {
        &self.support
    }

    /// Whether the structure consists of a single argument.
    pub fn is_primitive(&self) -> bool {
        self.support.is_empty()
    }

    /// The claim of the whole structure: its top argument's claim.
    pub fn claim<'w>(&self, ws: &'w WorkingSet) -> &'w Literal {
        ws.get(self.top).claim()
    }

    /// Support keys actually used by some argument reachable from the top.
    fn reachable_support_keys(&self, ws: &WorkingSet) -> BTreeSet<Literal> {
        let mut used = BTreeSet::new();
        let mut visited = BTreeSet::new();
        let mut stack = vec![self.top];
        while let Some(id) = stack.pop() {
            if !visited.insert(id) {
                continue;
            }
            for premise in ws.get(id).premises() {
                if let Some(&child) = self.support.get(premise) {
                    used.insert(premise.clone());
                    stack.push(child);
                }
            }
        }
        used
    }

    /// The set of member arguments: the closure of the top under support.
    pub fn args(&self, ws: &WorkingSet) -> BTreeSet<ArgumentId> {
        let mut visited = BTreeSet::new();
        let mut stack = vec![self.top];
        while let Some(id) = stack.pop() {
            if !visited.insert(id) {
                continue;
            }
            for premise in ws.get(id).premises() {
                if let Some(&child) = self.support.get(premise) {
                    stack.push(child);
                }
            }
        }
        visited
    }

    /// External premises: the union of member premises minus the union of
    /// member claims.
    pub fn premises(&self, ws: &WorkingSet) -> BTreeSet<Literal> {
        let members = self.args(ws);
        let mut premises: BTreeSet<Literal> = BTreeSet::new();
        let mut claims: BTreeSet<&Literal> = BTreeSet::new();
        for &id in &members {
            let arg = ws.get(id);
            premises.extend(arg.premises().iter().cloned());
            claims.insert(arg.claim());
        }
        premises.retain(|p| !claims.contains(p));
        premises
    }

    /// Union of member premises, external and internal alike.
    pub fn all_premises(&self, ws: &WorkingSet) -> BTreeSet<Literal> {
        let mut premises = BTreeSet::new();
        for id in self.args(ws) {
            premises.extend(ws.get(id).premises().iter().cloned());
        }
        premises
    }

    /// Well-formedness: premise consistency, internal consistency with the
    /// conflict relation, non-circular support, and uniform support (the
    /// last holds by construction of the literal-keyed support map).
    pub fn is_well_formed(&self, ws: &WorkingSet, conflicts: &ConflictRelation) -> bool {
        if self.has_circular_support(ws) {
            return false;
        }
        let premises = self.premises(ws);
        if premises.iter().any(|p| premises.contains(&p.complement())) {
            return false;
        }
        let members: Vec<ArgumentId> = self.args(ws).into_iter().collect();
        for &a in &members {
            for &b in &members {
                if conflicts.conflicts(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether some argument transitively supports itself.
    fn has_circular_support(&self, ws: &WorkingSet) -> bool {
        fn visit(
            id: ArgumentId,
            s: &ArgStructure,
            ws: &WorkingSet,
            path: &mut BTreeSet<ArgumentId>,
            done: &mut BTreeSet<ArgumentId>,
        ) -> bool {
            if done.contains(&id) {
                return false;
            }
            if !path.insert(id) {
                return true;
            }
            for premise in ws.get(id).premises() {
                if let Some(&child) = s.support.get(premise) {
                    if visit(child, s, ws, path, done) {
                        return true;
                    }
                }
            }
            path.remove(&id);
            done.insert(id);
            false
        }
        let mut path = BTreeSet::new();
        let mut done = BTreeSet::new();
        visit(self.top, self, ws, &mut path, &mut done)
    }

    /// Substructures: every structure over a subset of this structure's
    /// arguments that respects its support assignment. Includes the
    /// structure itself.
    pub fn substructures(&self, ws: &WorkingSet) -> BTreeSet<ArgStructure> {
        let keys: Vec<&Literal> = self.support.keys().collect();
        let mut result = BTreeSet::new();
        for &root in &self.args(ws) {
            // Each subset of retained support keys induces one candidate;
            // restricting the walk to retained keys prunes the tree there.
            for mask in 0u32..(1 << keys.len()) {
                let retained: BTreeSet<&Literal> = keys
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, k)| *k)
                    .collect();
                let mut support = BTreeMap::new();
                let mut visited = BTreeSet::new();
                let mut stack = vec![root];
                while let Some(id) = stack.pop() {
                    if !visited.insert(id) {
                        continue;
                    }
                    for premise in ws.get(id).premises() {
                        if retained.contains(premise) {
                            if let Some(&child) = self.support.get(premise) {
                                support.insert(premise.clone(), child);
                                stack.push(child);
                            }
                        }
                    }
                }
                // Skip masks with unreachable keys; a smaller mask already
                // produced the same walked structure.
                if support.len() == retained.len() {
                    result.insert(ArgStructure { top: root, support });
                }
            }
        }
        result
    }

    /// Renders as `claim <- {external premises}`.
    pub fn display<'a>(&'a self, ws: &'a WorkingSet) -> StructureDisplay<'a> {
        StructureDisplay { s: self, ws }
    }
}

/// Display adapter carrying the working set needed to resolve identifiers.
pub struct StructureDisplay<'a> {
    s: &'a ArgStructure,
    ws: &'a WorkingSet,
}

impl fmt::Display for StructureDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <- {{", self.s.claim(self.ws))?;
        for (i, p) in self.s.premises(self.ws).iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl DafInstance {
    /// Enumerates every well-formed structure buildable from the working set,
    /// or only the active ones.
    ///
    /// Fails with [`EngineError::StructureCap`] when the number of generated
    /// candidates exceeds the configured limit.
    pub fn enumerate_structures(
        &self,
        only_active: bool,
    ) -> Result<BTreeSet<ArgStructure>, EngineError> {
        let ws = self.working();
        let mut claimants: BTreeMap<&Literal, Vec<ArgumentId>> = BTreeMap::new();
        for (id, arg) in ws.iter() {
            claimants.entry(arg.claim()).or_default().push(id);
        }

        let cap = self.limits().max_structures;
        let mut generated = 0usize;
        let mut result = BTreeSet::new();
        for (top, _) in ws.iter() {
            let mut assignment: BTreeMap<Literal, ArgumentId> = BTreeMap::new();
            self.extend_assignment(
                top,
                &claimants,
                &mut assignment,
                &mut BTreeSet::new(),
                &mut |support| {
                    generated += 1;
                    if generated > cap {
                        return Err(EngineError::StructureCap { cap });
                    }
                    let candidate = ArgStructure {
                        top,
                        support: support.clone(),
                    };
                    if candidate.is_well_formed(ws, self.conflicts())
                        && (!only_active || self.is_active_structure(&candidate))
                    {
                        result.insert(candidate);
                    }
                    Ok(())
                },
            )?;
        }
        Ok(result)
    }

    /// Depth-first enumeration of support assignments: each premise literal
    /// needed by the structure so far is either left unsupported or assigned
    /// one claimant, recursively.
    fn extend_assignment(
        &self,
        top: ArgumentId,
        claimants: &BTreeMap<&Literal, Vec<ArgumentId>>,
        assignment: &mut BTreeMap<Literal, ArgumentId>,
        unsupported: &mut BTreeSet<Literal>,
        emit: &mut impl FnMut(&BTreeMap<Literal, ArgumentId>) -> Result<(), EngineError>,
    ) -> Result<(), EngineError> {
        // Premise literals needed by the current member set and not yet decided.
        let mut pending: Option<Literal> = None;
        let mut visited = BTreeSet::new();
        let mut stack = vec![top];
        'scan: while let Some(id) = stack.pop() {
            if !visited.insert(id) {
                continue;
            }
            for premise in self.working().get(id).premises() {
                if let Some(&child) = assignment.get(premise) {
                    stack.push(child);
                } else if !unsupported.contains(premise) {
                    pending = Some(premise.clone());
                    break 'scan;
                }
            }
        }
        let Some(premise) = pending else {
            return emit(assignment);
        };

        unsupported.insert(premise.clone());
        self.extend_assignment(top, claimants, assignment, unsupported, emit)?;
        unsupported.remove(&premise);

        if let Some(options) = claimants.get(&premise) {
            for &child in options {
                assignment.insert(premise.clone(), child);
                self.extend_assignment(top, claimants, assignment, unsupported, emit)?;
                assignment.remove(&premise);
            }
        }
        Ok(())
    }
}
