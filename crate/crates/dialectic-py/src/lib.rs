//! Python bindings: a thin `Framework` class over the decision engine.
//!
//! The module is a plain `cdylib`; build it with `cargo build -p dialectic-py`
//! and import the produced shared library as `dialectic_py` (see
//! `python/smoke_test.py` at the workspace root).

use std::collections::BTreeSet;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dialectic::decision::DecisionFramework;
use dialectic::lang::Literal;
use dialectic::scenario::load_scenario;

fn value_err(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// A decision framework loaded from a scenario document.
#[pyclass]
struct Framework {
    adf: DecisionFramework,
}

#[pymethods]
impl Framework {
    /// Loads a scenario document (geometric or raw mode); `order`, when
    /// given, overrides the document's criterion priority ranking.
    #[new]
    #[pyo3(signature = (document, order=None))]
    fn new(document: &str, order: Option<Vec<String>>) -> PyResult<Self> {
        let scenario = load_scenario(document).map_err(value_err)?;
        let adf = scenario
            .framework_with_order(order.as_deref())
            .map_err(value_err)?;
        Ok(Framework { adf })
    }

    /// The alternatives under consideration, sorted.
    fn alternatives(&self) -> Vec<String> {
        self.adf.alternatives().iter().map(String::from).collect()
    }

    /// The criterion priority ranking, most important first.
    fn order(&self) -> Vec<String> {
        self.adf.order().as_slice().to_vec()
    }

    /// Justified conclusions as rendered literals, sorted.
    fn justified(&self) -> PyResult<Vec<String>> {
        let mut out: Vec<String> = self
            .adf
            .justified()
            .map_err(value_err)?
            .iter()
            .map(Literal::to_string)
            .collect();
        out.sort();
        Ok(out)
    }

    /// Chooses from `experiment` (default: all alternatives), sorted.
    #[pyo3(signature = (experiment=None))]
    fn decide(&self, experiment: Option<Vec<String>>) -> PyResult<Vec<String>> {
        let members: BTreeSet<String> = match experiment {
            Some(list) => list.into_iter().collect(),
            None => self.adf.alternatives().iter().map(String::from).collect(),
        };
        Ok(self
            .adf
            .acceptable_alternatives(&members)
            .map_err(value_err)?
            .into_iter()
            .collect())
    }

    /// A new framework with `add` asserted and `remove` retracted; literals
    /// are written as rendered, e.g. `"smaller(box4,box6)"`.
    fn update(&self, add: Vec<String>, remove: Vec<String>) -> PyResult<Framework> {
        let parse = |items: &[String]| -> PyResult<BTreeSet<Literal>> {
            items
                .iter()
                .map(|s| s.parse::<Literal>().map_err(value_err))
                .collect()
        };
        let adf = self
            .adf
            .update_evidence(&parse(&add)?, &parse(&remove)?)
            .map_err(value_err)?;
        Ok(Framework { adf })
    }

    /// The marked dialectical tree of every active structure claiming
    /// `claim`, rendered as indented text.
    fn trace(&self, claim: &str) -> PyResult<String> {
        let claim: Literal = claim.parse().map_err(value_err)?;
        let instance = self.adf.epistemic().instance();
        let matching: Vec<_> = instance
            .active_structures()
            .map_err(value_err)?
            .iter()
            .filter(|s| s.claim(instance.working()) == &claim)
            .cloned()
            .collect();
        let mut out = String::new();
        for (i, structure) in matching.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let tree = instance
                .dialectical_tree(structure)
                .map_err(value_err)?
                .mark_skeptical();
            out.push_str(&tree.render(instance.working()));
        }
        Ok(out)
    }

    /// Number of active argumental structures.
    fn active_count(&self) -> PyResult<usize> {
        let instance = self.adf.epistemic().instance();
        Ok(instance.active_structures().map_err(value_err)?.len())
    }

    /// Number of warranted argumental structures.
    fn warranted_count(&self) -> PyResult<usize> {
        let instance = self.adf.epistemic().instance();
        Ok(instance.warranted_structures().map_err(value_err)?.len())
    }
}

#[pymodule]
fn dialectic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Framework>()?;
    Ok(())
}
