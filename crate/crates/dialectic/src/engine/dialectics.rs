//! Defeat, argumentation lines, dialectical trees, marking, and warrant.
//!
//! A dialectical tree is the prefix trie of every exhaustive acceptable
//! argumentation line rooted at a structure: each element defeats its
//! predecessor, no structure repeats within a line, and the pro side (even
//! depths) and con side (odd depths) each stay conflict-free. Trees are built
//! over active structures only, matching the scope on which warrant is
//! defined.

use std::collections::BTreeSet;

use crate::lang::Literal;

use super::{ArgStructure, DafInstance, EngineError, PrefOutcome, WorkingSet};

/// Skeptical marking outcome for one tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    /// Undefeated: every defeater is itself defeated.
    U,
    /// Defeated: some defeater stands.
    D,
}

impl std::fmt::Display for Mark {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mark::U => write!(f, "U"),
            Mark::D => write!(f, "D"),
        }
    }
}

/// One node of a dialectical tree.
#[derive(Debug, Clone)]
pub struct TreeNode {
    pub structure: ArgStructure,
    pub depth: usize,
    pub children: Vec<usize>,
    pub mark: Option<Mark>,
}

/// A dialectical tree in depth-first preorder; index 0 is the root.
#[derive(Debug, Clone)]
pub struct DialecticalTree {
    nodes: Vec<TreeNode>,
}

impl DialecticalTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Whether every node carries a mark.
    pub fn is_marked(&self) -> bool {
        self.nodes.iter().all(|n| n.mark.is_some())
    }

    /// Applies the skeptical marking: leaves are undefeated, and an inner
    /// node is defeated exactly when some child is undefeated.
    pub fn mark_skeptical(mut self) -> Self {
        // Children always follow their parent in the preorder vector, so a
        // reverse sweep marks children before parents.
        for i in (0..self.nodes.len()).rev() {
            let mark = if self.nodes[i].children.is_empty() {
                Mark::U
            } else if self.nodes[i]
                .children
                .iter()
                .any(|&c| self.nodes[c].mark == Some(Mark::U))
            {
                Mark::D
            } else {
                Mark::U
            };
            self.nodes[i].mark = Some(mark);
        }
        self
    }

    /// Deterministic indented rendering: one `claim <- {premises} [mark]`
    /// line per node, two spaces per depth level. Unmarked nodes render `-`.
    pub fn render(&self, ws: &WorkingSet) -> String {
        let mut out = String::new();
        for node in &self.nodes {
            let mark = node.mark.map_or_else(|| "-".to_string(), |m| m.to_string());
            out.push_str(&"  ".repeat(node.depth));
            out.push_str(&format!("{} [{}]\n", node.structure.display(ws), mark));
        }
        out
    }
}

/// The abstract framework induced by activity: the active structures and the
/// defeat relation restricted to them (as indices into `structures`).
#[derive(Debug, Clone)]
pub struct ActiveInstance {
    pub structures: Vec<ArgStructure>,
    pub defeats: BTreeSet<(usize, usize)>,
}

impl DafInstance {
    /// Whether `s1` defeats `s2`: some substructure of `s2` conflicts with
    /// `s1` and the preference function strictly favors `s1` over it.
    pub fn defeats(&self, s1: &ArgStructure, s2: &ArgStructure) -> bool {
        s2.substructures(self.working()).iter().any(|sub| {
            self.conflicts().structure_conflict(s1, sub) && self.pref(s1, sub) == PrefOutcome::First
        })
    }

    /// The active structures together with the defeat relation among them.
    pub fn active_instance(&self) -> Result<ActiveInstance, EngineError> {
        let structures: Vec<ArgStructure> = self.active_structures()?.to_vec();
        let mut defeats = BTreeSet::new();
        for (j, target) in structures.iter().enumerate() {
            let subs = target.substructures(self.working());
            for (i, attacker) in structures.iter().enumerate() {
                let hits = subs.iter().any(|sub| {
                    self.conflicts().structure_conflict(attacker, sub)
                        && self.pref(attacker, sub) == PrefOutcome::First
                });
                if hits {
                    defeats.insert((i, j));
                }
            }
        }
        Ok(ActiveInstance {
            structures,
            defeats,
        })
    }

    /// Builds the dialectical tree for an active structure: the prefix trie
    /// of every exhaustive acceptable argumentation line rooted there, over
    /// active structures.
    pub fn dialectical_tree(&self, root: &ArgStructure) -> Result<DialecticalTree, EngineError> {
        if !self.is_active_structure(root) {
            return Err(EngineError::InactiveRoot);
        }
        let actives = self.active_structures()?.to_vec();
        let mut nodes = vec![TreeNode {
            structure: root.clone(),
            depth: 0,
            children: Vec::new(),
            mark: None,
        }];
        let mut path = vec![root.clone()];
        let mut lines = 0usize;
        self.expand_node(0, &mut nodes, &mut path, &actives, &mut lines)?;
        Ok(DialecticalTree { nodes })
    }

    /// Appends every acceptable defeater of the node's structure, recursing
    /// depth-first; a node with no extension closes one exhaustive line.
    fn expand_node(
        &self,
        idx: usize,
        nodes: &mut Vec<TreeNode>,
        path: &mut Vec<ArgStructure>,
        actives: &[ArgStructure],
        lines: &mut usize,
    ) -> Result<(), EngineError> {
        let last = nodes[idx].structure.clone();
        let child_depth = nodes[idx].depth + 1;
        let subs = last.substructures(self.working());

        let mut extended = false;
        for candidate in actives {
            // Non-circularity: no structure repeats within a line.
            if path.contains(candidate) {
                continue;
            }
            // Concordance: the candidate joins the side of its depth parity
            // and must not conflict with any structure already on that side.
            let side_clash = path
                .iter()
                .enumerate()
                .filter(|(d, _)| d % 2 == child_depth % 2)
                .any(|(_, t)| {
                    self.conflicts().structure_conflict(candidate, t)
                        || self.conflicts().structure_conflict(t, candidate)
                });
            if side_clash {
                continue;
            }
            let defeats_last = subs.iter().any(|sub| {
                self.conflicts().structure_conflict(candidate, sub)
                    && self.pref(candidate, sub) == PrefOutcome::First
            });
            if !defeats_last {
                continue;
            }

            extended = true;
            let child_idx = nodes.len();
            nodes.push(TreeNode {
                structure: candidate.clone(),
                depth: child_depth,
                children: Vec::new(),
                mark: None,
            });
            nodes[idx].children.push(child_idx);
            path.push(candidate.clone());
            self.expand_node(child_idx, nodes, path, actives, lines)?;
            path.pop();
        }

        if !extended {
            *lines += 1;
            if *lines > self.limits().max_lines {
                return Err(EngineError::LineCap {
                    cap: self.limits().max_lines,
                });
            }
        }
        Ok(())
    }

    /// Whether an active structure's marked dialectical tree roots U.
    pub fn is_warranted(&self, s: &ArgStructure) -> Result<bool, EngineError> {
        let tree = self.dialectical_tree(s)?.mark_skeptical();
        Ok(tree.root().mark == Some(Mark::U))
    }

    /// All active structures whose dialectical trees root U.
    pub fn warranted_structures(&self) -> Result<Vec<ArgStructure>, EngineError> {
        let actives = self.active_structures()?.to_vec();
        let mut warranted = Vec::new();
        for s in actives {
            if self.is_warranted(&s)? {
                warranted.push(s);
            }
        }
        Ok(warranted)
    }

    /// Claims of warranted structures, duplicates collapsed.
    pub fn justified_conclusions(&self) -> Result<BTreeSet<Literal>, EngineError> {
        Ok(self
            .warranted_structures()?
            .into_iter()
            .map(|s| s.claim(self.working()).clone())
            .collect())
    }
}
