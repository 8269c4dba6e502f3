//! Scenario model and event replay.
//!
//! A scenario is either *geometric* — a robot, a store, and sized boxes on a
//! plane, from which pairwise evidence is derived (`smaller` by size,
//! `nearer_store`/`nearer_robot` by Euclidean distance, `same_att` when a
//! pair ties everywhere) — or *raw*, carrying explicit alternatives and
//! licensed evidence facts. Scenarios load from and save to a line-oriented
//! text format, and events (moving, resizing, adding, removing boxes;
//! setting or retracting facts) produce new scenario values.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::decision::{
    check_licensing, criterion_fact, same_att, AlternativeSet, CriterionOrder, CriterionSet,
    DecisionError, DecisionFramework,
};
use crate::lang::{EvidenceSet, LangError, Literal};
use crate::oracle::{AttributeTable, Comparison};

/// Criteria with a geometric interpretation.
pub const GEOMETRIC_CRITERIA: [&str; 3] = ["smaller", "nearer_store", "nearer_robot"];

/// Errors raised while loading, validating, or evolving scenarios.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("scenario is missing the {name:?} field")]
    MissingField { name: &'static str },
    #[error("box id {id:?} appears more than once")]
    DuplicateBox { id: String },
    #[error("no box named {id:?}")]
    UnknownBox { id: String },
    #[error("box {id:?} must have a positive, finite size")]
    InvalidSize { id: String },
    #[error("criterion {name:?} listed more than once")]
    DuplicateCriterion { name: String },
    #[error("criterion {name:?} has no geometric interpretation")]
    UnknownGeometricCriterion { name: String },
    #[error("alternative {name:?} listed more than once")]
    DuplicateAlternative { name: String },
    #[error("order must rank exactly the declared criteria")]
    OrderMismatch,
    #[error("event {event:?} does not apply to this scenario mode")]
    ModeMismatch { event: String },
    #[error("no fact {0} to retract")]
    UnknownFact(Literal),
    #[error(
        "evidence relates neither member of the pair ({a}, {b}); the comparison table is undefined"
    )]
    NotTotal { a: String, b: String },
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error(transparent)]
    Lang(#[from] LangError),
}

/// A position on the storeroom floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn squared_distance(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// One box: identifier, position, and size.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSpec {
    pub id: String,
    pub pos: Point,
    pub size: f64,
}

/// The two scenario forms.
#[derive(Debug, Clone, PartialEq)]
pub enum World {
    Geometric {
        robot: Point,
        store: Point,
        boxes: Vec<BoxSpec>,
    },
    Raw {
        alternatives: Vec<String>,
        facts: Vec<Literal>,
    },
}

/// A decision scenario: a world plus the criteria and their priority order.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub world: World,
    pub criteria: Vec<String>,
    pub order: Vec<String>,
}

/// An observable change to a scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    MoveBox { id: String, to: Point },
    ResizeBox { id: String, size: f64 },
    AddBox(BoxSpec),
    RemoveBox { id: String },
    SetFact(Literal),
    RetractFact(Literal),
}

impl Event {
    fn kind_name(&self) -> &'static str {
        match self {
            Event::MoveBox { .. } => "move_box",
            Event::ResizeBox { .. } => "resize_box",
            Event::AddBox(_) => "add_box",
            Event::RemoveBox { .. } => "remove_box",
            Event::SetFact(_) => "set_fact",
            Event::RetractFact(_) => "retract_fact",
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::MoveBox { id, to } => write!(f, "move_box {id} {} {}", to.x, to.y),
            Event::ResizeBox { id, size } => write!(f, "resize_box {id} {size}"),
            Event::AddBox(b) => write!(f, "add_box {} {} {} {}", b.id, b.pos.x, b.pos.y, b.size),
            Event::RemoveBox { id } => write!(f, "remove_box {id}"),
            Event::SetFact(l) => write!(f, "set_fact {l}"),
            Event::RetractFact(l) => write!(f, "retract_fact {l}"),
        }
    }
}

fn parse_number(token: &str, line: usize, what: &str) -> Result<f64, ScenarioError> {
    let value: f64 = token.parse().map_err(|_| ScenarioError::Parse {
        line,
        reason: format!("{what} {token:?} is not a number"),
    })?;
    if !value.is_finite() {
        return Err(ScenarioError::Parse {
            line,
            reason: format!("{what} must be finite"),
        });
    }
    Ok(value)
}

fn parse_point(value: &str, line: usize) -> Result<Point, ScenarioError> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(ScenarioError::Parse {
            line,
            reason: format!("expected two coordinates, found {:?}", value),
        });
    }
    Ok(Point::new(
        parse_number(parts[0], line, "coordinate")?,
        parse_number(parts[1], line, "coordinate")?,
    ))
}

/// Parses the line-oriented scenario document format.
pub fn load_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut mode: Option<String> = None;
    let mut robot: Option<Point> = None;
    let mut store: Option<Point> = None;
    let mut boxes: Vec<BoxSpec> = Vec::new();
    let mut criteria: Option<Vec<String>> = None;
    let mut order: Option<Vec<String>> = None;
    let mut alternatives: Option<Vec<String>> = None;
    let mut facts: Vec<Literal> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or_else(|| ScenarioError::Parse {
            line: line_no,
            reason: "expected 'key: value'".to_string(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        fn fill_once<T>(
            slot: &mut Option<T>,
            parsed: T,
            key: &str,
            line: usize,
        ) -> Result<(), ScenarioError> {
            if slot.is_some() {
                return Err(ScenarioError::Parse {
                    line,
                    reason: format!("field {key:?} given more than once"),
                });
            }
            *slot = Some(parsed);
            Ok(())
        }
        match key {
            "mode" => fill_once(&mut mode, value.to_string(), key, line_no)?,
            "robot" => fill_once(&mut robot, parse_point(value, line_no)?, key, line_no)?,
            "store" => fill_once(&mut store, parse_point(value, line_no)?, key, line_no)?,
            "box" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 4 {
                    return Err(ScenarioError::Parse {
                        line: line_no,
                        reason: format!("expected 'box: id x y size', found {value:?}"),
                    });
                }
                boxes.push(BoxSpec {
                    id: parts[0].to_string(),
                    pos: Point::new(
                        parse_number(parts[1], line_no, "coordinate")?,
                        parse_number(parts[2], line_no, "coordinate")?,
                    ),
                    size: parse_number(parts[3], line_no, "size")?,
                });
            }
            "criteria" => fill_once(
                &mut criteria,
                value.split_whitespace().map(String::from).collect(),
                key,
                line_no,
            )?,
            "order" => fill_once(
                &mut order,
                value
                    .split('>')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
                key,
                line_no,
            )?,
            "alternatives" => fill_once(
                &mut alternatives,
                value.split_whitespace().map(String::from).collect(),
                key,
                line_no,
            )?,
            "fact" => {
                facts.push(value.parse().map_err(|e: LangError| ScenarioError::Parse {
                    line: line_no,
                    reason: e.to_string(),
                })?);
            }
            other => {
                return Err(ScenarioError::Parse {
                    line: line_no,
                    reason: format!("unknown field {other:?}"),
                })
            }
        }
    }

    let mode = mode.ok_or(ScenarioError::MissingField { name: "mode" })?;
    let criteria = criteria.ok_or(ScenarioError::MissingField { name: "criteria" })?;
    let order = order.ok_or(ScenarioError::MissingField { name: "order" })?;
    let world = match mode.as_str() {
        "geometric" => World::Geometric {
            robot: robot.ok_or(ScenarioError::MissingField { name: "robot" })?,
            store: store.ok_or(ScenarioError::MissingField { name: "store" })?,
            boxes,
        },
        "raw" => World::Raw {
            alternatives: alternatives.ok_or(ScenarioError::MissingField {
                name: "alternatives",
            })?,
            facts,
        },
        other => {
            return Err(ScenarioError::Parse {
                line: 0,
                reason: format!("unknown mode {other:?}; expected geometric or raw"),
            })
        }
    };
    let scenario = Scenario {
        world,
        criteria,
        order,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Parses an events document: one event per line, `#` comments allowed.
pub fn parse_events(text: &str) -> Result<Vec<Event>, ScenarioError> {
    let mut events = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let wrong_shape = |expected: &str| ScenarioError::Parse {
            line: line_no,
            reason: format!("expected '{expected}', found {line:?}"),
        };
        let event = match parts[0] {
            "move_box" => {
                if parts.len() != 4 {
                    return Err(wrong_shape("move_box id x y"));
                }
                Event::MoveBox {
                    id: parts[1].to_string(),
                    to: Point::new(
                        parse_number(parts[2], line_no, "coordinate")?,
                        parse_number(parts[3], line_no, "coordinate")?,
                    ),
                }
            }
            "resize_box" => {
                if parts.len() != 3 {
                    return Err(wrong_shape("resize_box id size"));
                }
                Event::ResizeBox {
                    id: parts[1].to_string(),
                    size: parse_number(parts[2], line_no, "size")?,
                }
            }
            "add_box" => {
                if parts.len() != 5 {
                    return Err(wrong_shape("add_box id x y size"));
                }
                Event::AddBox(BoxSpec {
                    id: parts[1].to_string(),
                    pos: Point::new(
                        parse_number(parts[2], line_no, "coordinate")?,
                        parse_number(parts[3], line_no, "coordinate")?,
                    ),
                    size: parse_number(parts[4], line_no, "size")?,
                })
            }
            "remove_box" => {
                if parts.len() != 2 {
                    return Err(wrong_shape("remove_box id"));
                }
                Event::RemoveBox {
                    id: parts[1].to_string(),
                }
            }
            "set_fact" | "retract_fact" => {
                if parts.len() != 2 {
                    return Err(wrong_shape("set_fact literal"));
                }
                let literal = parts[1]
                    .parse()
                    .map_err(|e: LangError| ScenarioError::Parse {
                        line: line_no,
                        reason: e.to_string(),
                    })?;
                if parts[0] == "set_fact" {
                    Event::SetFact(literal)
                } else {
                    Event::RetractFact(literal)
                }
            }
            other => {
                return Err(ScenarioError::Parse {
                    line: line_no,
                    reason: format!("unknown event kind {other:?}"),
                })
            }
        };
        events.push(event);
    }
    Ok(events)
}

impl Scenario {
    /// Parses a scenario document; alias of [`load_scenario`].
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        load_scenario(text)
    }

    /// Renders the scenario in its document format; [`load_scenario`] of the
    /// result yields an equal value.
    pub fn render(&self) -> String {
        let mut out = String::new();
        match &self.world {
            World::Geometric {
                robot,
                store,
                boxes,
            } => {
                out.push_str("mode: geometric\n");
                out.push_str(&format!("robot: {} {}\n", robot.x, robot.y));
                out.push_str(&format!("store: {} {}\n", store.x, store.y));
                for b in boxes {
                    out.push_str(&format!(
                        "box: {} {} {} {}\n",
                        b.id, b.pos.x, b.pos.y, b.size
                    ));
                }
            }
            World::Raw {
                alternatives,
                facts,
            } => {
                out.push_str("mode: raw\n");
                out.push_str(&format!("alternatives: {}\n", alternatives.join(" ")));
                for fact in facts {
                    out.push_str(&format!("fact: {fact}\n"));
                }
            }
        }
        out.push_str(&format!("criteria: {}\n", self.criteria.join(" ")));
        out.push_str(&format!("order: {}\n", self.order.join(" > ")));
        out
    }

    /// Re-checks every structural invariant; used after parsing and after
    /// each event application.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut seen = BTreeSet::new();
        for c in &self.criteria {
            if !seen.insert(c.clone()) {
                return Err(ScenarioError::DuplicateCriterion { name: c.clone() });
            }
        }
        let order_set: BTreeSet<&String> = self.order.iter().collect();
        if order_set.len() != self.order.len()
            || order_set.len() != seen.len()
            || !self.order.iter().all(|o| seen.contains(o))
        {
            return Err(ScenarioError::OrderMismatch);
        }

        match &self.world {
            World::Geometric { boxes, .. } => {
                for c in &self.criteria {
                    if !GEOMETRIC_CRITERIA.contains(&c.as_str()) {
                        return Err(ScenarioError::UnknownGeometricCriterion { name: c.clone() });
                    }
                }
                let mut ids = BTreeSet::new();
                for b in boxes {
                    if !ids.insert(b.id.clone()) {
                        return Err(ScenarioError::DuplicateBox { id: b.id.clone() });
                    }
                    if !(b.size > 0.0 && b.size.is_finite()) {
                        return Err(ScenarioError::InvalidSize { id: b.id.clone() });
                    }
                }
                // Symbol validity via the decision-layer constructors.
                if !boxes.is_empty() {
                    AlternativeSet::new(boxes.iter().map(|b| b.id.clone()))?;
                }
                CriterionSet::new(self.criteria.clone())?;
            }
            World::Raw {
                alternatives,
                facts,
            } => {
                let mut names = BTreeSet::new();
                for a in alternatives {
                    if !names.insert(a.clone()) {
                        return Err(ScenarioError::DuplicateAlternative { name: a.clone() });
                    }
                }
                let x = AlternativeSet::new(alternatives.clone())?;
                let c = CriterionSet::new(self.criteria.clone())?;
                check_licensing(&EvidenceSet::new(facts.iter().cloned())?, &x, &c)?;
            }
        }
        Ok(())
    }

    /// The alternative identifiers of this scenario, sorted.
    pub fn alternative_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = match &self.world {
            World::Geometric { boxes, .. } => boxes.iter().map(|b| b.id.clone()).collect(),
            World::Raw { alternatives, .. } => alternatives.clone(),
        };
        ids.sort();
        ids
    }

    /// Derives the scenario's evidence: raw facts pass through, geometric
    /// worlds emit one strict-winner fact per differing criterion and pair,
    /// and a `same_att` fact for pairs tying on every criterion.
    pub fn derive_evidence(&self) -> Result<EvidenceSet, ScenarioError> {
        match &self.world {
            World::Raw { facts, .. } => Ok(EvidenceSet::new(facts.iter().cloned())?),
            World::Geometric {
                robot,
                store,
                boxes,
            } => {
                let mut sorted: Vec<&BoxSpec> = boxes.iter().collect();
                sorted.sort_by(|a, b| a.id.cmp(&b.id));
                let mut facts: Vec<Literal> = Vec::new();
                for i in 0..sorted.len() {
                    for j in i + 1..sorted.len() {
                        let (a, b) = (sorted[i], sorted[j]);
                        let mut any_difference = false;
                        for criterion in &self.criteria {
                            match geometric_comparison(criterion, a, b, robot, store) {
                                Comparison::FavorsFirst => {
                                    any_difference = true;
                                    facts.push(criterion_fact(criterion, &a.id, &b.id));
                                }
                                Comparison::FavorsSecond => {
                                    any_difference = true;
                                    facts.push(criterion_fact(criterion, &b.id, &a.id));
                                }
                                Comparison::Equal => {}
                            }
                        }
                        if !any_difference {
                            facts.push(same_att(&a.id, &b.id));
                        }
                    }
                }
                Ok(EvidenceSet::new(facts)?)
            }
        }
    }

    /// Builds the decision framework this scenario describes.
    pub fn framework(&self) -> Result<DecisionFramework, ScenarioError> {
        self.framework_with_order(None)
    }

    /// Builds the framework, optionally overriding the priority order.
    pub fn framework_with_order(
        &self,
        order: Option<&[String]>,
    ) -> Result<DecisionFramework, ScenarioError> {
        let ranking = order.unwrap_or(&self.order);
        Ok(DecisionFramework::new(
            AlternativeSet::new(self.alternative_ids())?,
            CriterionSet::new(self.criteria.clone())?,
            CriterionOrder::new(ranking.to_vec())?,
            self.derive_evidence()?,
        )?)
    }

    /// The pairwise comparison table this scenario implies, for the
    /// classical oracle. Geometric worlds are compared directly on geometry;
    /// raw worlds read their facts, requiring every pair to be decided by at
    /// least one fact or a `same_att` tie.
    pub fn attribute_table(&self) -> Result<AttributeTable, ScenarioError> {
        let ids = self.alternative_ids();
        let mut table = AttributeTable::new(ids.iter().cloned(), self.criteria.iter().cloned());
        match &self.world {
            World::Geometric {
                robot,
                store,
                boxes,
            } => {
                let mut sorted: Vec<&BoxSpec> = boxes.iter().collect();
                sorted.sort_by(|a, b| a.id.cmp(&b.id));
                for i in 0..sorted.len() {
                    for j in i + 1..sorted.len() {
                        let (a, b) = (sorted[i], sorted[j]);
                        for criterion in &self.criteria {
                            let cmp = geometric_comparison(criterion, a, b, robot, store);
                            table
                                .set(&a.id, &b.id, criterion, cmp)
                                .expect("ids and criteria are table members");
                        }
                    }
                }
            }
            World::Raw { facts, .. } => {
                let tied: BTreeSet<(String, String)> = facts
                    .iter()
                    .filter(|f| f.predicate() == crate::decision::SAME_ATT)
                    .map(|f| (f.args()[0].clone(), f.args()[1].clone()))
                    .collect();
                for i in 0..ids.len() {
                    for j in i + 1..ids.len() {
                        let (a, b) = (ids[i].as_str(), ids[j].as_str());
                        let mut decided = tied.contains(&(a.to_string(), b.to_string()));
                        for criterion in &self.criteria {
                            let favors_a = facts
                                .iter()
                                .any(|f| f.predicate() == criterion && f.args() == [a, b]);
                            let favors_b = facts
                                .iter()
                                .any(|f| f.predicate() == criterion && f.args() == [b, a]);
                            let cmp = match (favors_a, favors_b) {
                                (true, _) => Comparison::FavorsFirst,
                                (_, true) => Comparison::FavorsSecond,
                                _ => Comparison::Equal,
                            };
                            decided |= cmp != Comparison::Equal;
                            table
                                .set(a, b, criterion, cmp)
                                .expect("ids and criteria are table members");
                        }
                        if !decided {
                            return Err(ScenarioError::NotTotal {
                                a: a.to_string(),
                                b: b.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(table)
    }

    /// Applies one event, returning the changed scenario.
    pub fn apply_event(&self, event: &Event) -> Result<Scenario, ScenarioError> {
        let mut next = self.clone();
        match (&mut next.world, event) {
            (World::Geometric { boxes, .. }, Event::MoveBox { id, to }) => {
                let b = find_box(boxes, id)?;
                b.pos = *to;
            }
            (World::Geometric { boxes, .. }, Event::ResizeBox { id, size }) => {
                let b = find_box(boxes, id)?;
                b.size = *size;
            }
            (World::Geometric { boxes, .. }, Event::AddBox(spec)) => {
                if boxes.iter().any(|b| b.id == spec.id) {
                    return Err(ScenarioError::DuplicateBox {
                        id: spec.id.clone(),
                    });
                }
                boxes.push(spec.clone());
            }
            (World::Geometric { boxes, .. }, Event::RemoveBox { id }) => {
                let before = boxes.len();
                boxes.retain(|b| &b.id != id);
                if boxes.len() == before {
                    return Err(ScenarioError::UnknownBox { id: id.clone() });
                }
            }
            (World::Raw { facts, .. }, Event::SetFact(l)) => {
                if !facts.contains(l) {
                    facts.push(l.clone());
                }
            }
            (World::Raw { facts, .. }, Event::RetractFact(l)) => {
                let before = facts.len();
                facts.retain(|f| f != l);
                if facts.len() == before {
                    return Err(ScenarioError::UnknownFact(l.clone()));
                }
            }
            (_, ev) => {
                return Err(ScenarioError::ModeMismatch {
                    event: ev.kind_name().to_string(),
                })
            }
        }
        next.validate()?;
        Ok(next)
    }
}

fn find_box<'a>(boxes: &'a mut [BoxSpec], id: &str) -> Result<&'a mut BoxSpec, ScenarioError> {
    boxes
        .iter_mut()
        .find(|b| b.id == id)
        .ok_or_else(|| ScenarioError::UnknownBox { id: id.to_string() })
}

/// How box `a` compares to box `b` on one geometric criterion: smaller size
/// wins `smaller`, smaller squared Euclidean distance wins the two nearness
/// criteria, exact equality ties.
fn geometric_comparison(
    criterion: &str,
    a: &BoxSpec,
    b: &BoxSpec,
    robot: &Point,
    store: &Point,
) -> Comparison {
    let (va, vb) = match criterion {
        "smaller" => (a.size, b.size),
        "nearer_store" => (a.pos.squared_distance(store), b.pos.squared_distance(store)),
        "nearer_robot" => (a.pos.squared_distance(robot), b.pos.squared_distance(robot)),
        other => unreachable!("validated geometric criterion, got {other:?}"),
    };
    if va < vb {
        Comparison::FavorsFirst
    } else if vb < va {
        Comparison::FavorsSecond
    } else {
        Comparison::Equal
    }
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use crate::decision::test_support::{lits, names};

    #[test]
    fn loading_reads_geometry_and_order() {
        let s = scenario_a();
        match &s.world {
            World::Geometric { boxes, .. } => assert_eq!(boxes.len(), 3),
            World::Raw { .. } => panic!("expected geometric world"),
        }
        assert_eq!(s.order, vec!["nearer_robot", "nearer_store", "smaller"]);
    }

    #[test]
    fn first_storeroom_derives_its_evidence() {
        let e = scenario_a().derive_evidence().unwrap();
        let expected = lits(&[
            "smaller(box1,box3)",
            "smaller(box2,box3)",
            "nearer_store(box1,box3)",
            "nearer_store(box2,box1)",
            "nearer_store(box2,box3)",
            "nearer_robot(box1,box2)",
            "nearer_robot(box1,box3)",
            "nearer_robot(box2,box3)",
        ]);
        assert_eq!(
            e.iter().cloned().collect::<std::collections::BTreeSet<_>>(),
            expected
        );
    }

    #[test]
    fn second_storeroom_derives_its_evidence() {
        let e = scenario_b().derive_evidence().unwrap();
        let expected = lits(&[
            "smaller(box4,box6)",
            "smaller(box5,box6)",
            "nearer_store(box4,box6)",
            "nearer_store(box5,box6)",
            "nearer_robot(box6,box4)",
            "nearer_robot(box6,box5)",
            "same_att(box4,box5)",
        ]);
        assert_eq!(
            e.iter().cloned().collect::<std::collections::BTreeSet<_>>(),
            expected
        );
    }

    #[test]
    fn coincident_identical_boxes_tie_everywhere() {
        let text = "\
mode: geometric
robot: 0 0
store: 5 5
box: a 1 1 2
box: b 1 1 2
criteria: smaller nearer_store nearer_robot
order: smaller > nearer_store > nearer_robot
";
        let e = load_scenario(text).unwrap().derive_evidence().unwrap();
        assert_eq!(
            e.iter().cloned().collect::<std::collections::BTreeSet<_>>(),
            lits(&["same_att(a,b)"])
        );
    }

    #[test]
    fn duplicate_box_ids_are_rejected() {
        let text = "\
mode: geometric
robot: 0 0
store: 1 1
box: a 0 0 1
box: a 2 2 1
criteria: smaller
order: smaller
";
        assert_eq!(
            load_scenario(text).unwrap_err(),
            ScenarioError::DuplicateBox { id: "a".into() }
        );
    }

    #[test]
    fn raw_facts_must_be_licensed_at_load_time() {
        let text = "\
mode: raw
alternatives: a b
criteria: speed
order: speed
fact: better(a,b)
";
        match load_scenario(text).unwrap_err() {
            ScenarioError::Decision(DecisionError::UnknownFactPredicate(l)) => {
                assert_eq!(l.to_string(), "better(a,b)");
            }
            other => panic!("expected licensing error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "mode: geometric\nrobot 0 0\n";
        assert_eq!(
            load_scenario(text).unwrap_err(),
            ScenarioError::Parse {
                line: 2,
                reason: "expected 'key: value'".into()
            }
        );
        let text = "mode: geometric\nrobot: 0 east\n";
        assert!(matches!(
            load_scenario(text).unwrap_err(),
            ScenarioError::Parse { line: 2, .. }
        ));
    }

    #[test]
    fn geometric_criteria_are_restricted_and_order_must_match() {
        let text = "\
mode: geometric
robot: 0 0
store: 1 1
box: a 0 0 1
criteria: smaller weight
order: smaller > weight
";
        assert_eq!(
            load_scenario(text).unwrap_err(),
            ScenarioError::UnknownGeometricCriterion {
                name: "weight".into()
            }
        );
        let text = "\
mode: geometric
robot: 0 0
store: 1 1
box: a 0 0 1
criteria: smaller nearer_store
order: smaller
";
        assert_eq!(
            load_scenario(text).unwrap_err(),
            ScenarioError::OrderMismatch
        );
    }

    #[test]
    fn rendering_round_trips_both_modes() {
        let a = scenario_a();
        assert_eq!(load_scenario(&a.render()).unwrap(), a);

        let raw = load_scenario(
            "\
mode: raw
alternatives: a b c
fact: speed(a,b)
fact: cost(c,a)
criteria: speed cost
order: cost > speed
",
        )
        .unwrap();
        assert_eq!(load_scenario(&raw.render()).unwrap(), raw);
    }

    #[test]
    fn moving_a_box_changes_derived_evidence() {
        let s = scenario_b();
        let moved = s
            .apply_event(&Event::MoveBox {
                id: "box5".into(),
                to: Point::new(7.0, 5.0),
            })
            .unwrap();
        let expected = lits(&[
            "smaller(box4,box6)",
            "smaller(box5,box6)",
            "nearer_store(box4,box6)",
            "nearer_store(box5,box4)",
            "nearer_store(box5,box6)",
            "nearer_robot(box5,box4)",
            "nearer_robot(box5,box6)",
            "nearer_robot(box6,box4)",
        ]);
        assert_eq!(
            moved
                .derive_evidence()
                .unwrap()
                .iter()
                .cloned()
                .collect::<std::collections::BTreeSet<_>>(),
            expected
        );
        // The original is untouched.
        assert_eq!(s, scenario_b());
    }

    #[test]
    fn events_validate_references_and_mode() {
        let s = scenario_b();
        assert_eq!(
            s.apply_event(&Event::RemoveBox { id: "box9".into() })
                .unwrap_err(),
            ScenarioError::UnknownBox { id: "box9".into() }
        );
        assert_eq!(
            s.apply_event(&Event::AddBox(BoxSpec {
                id: "box4".into(),
                pos: Point::new(0.0, 0.0),
                size: 1.0,
            }))
            .unwrap_err(),
            ScenarioError::DuplicateBox { id: "box4".into() }
        );
        assert_eq!(
            s.apply_event(&Event::SetFact("speed(a,b)".parse().unwrap()))
                .unwrap_err(),
            ScenarioError::ModeMismatch {
                event: "set_fact".into()
            }
        );
        assert_eq!(
            s.apply_event(&Event::ResizeBox {
                id: "box4".into(),
                size: -1.0,
            })
            .unwrap_err(),
            ScenarioError::InvalidSize { id: "box4".into() }
        );

        let raw =
            load_scenario("mode: raw\nalternatives: a b\ncriteria: speed\norder: speed\n").unwrap();
        assert_eq!(
            raw.apply_event(&Event::MoveBox {
                id: "a".into(),
                to: Point::new(0.0, 0.0),
            })
            .unwrap_err(),
            ScenarioError::ModeMismatch {
                event: "move_box".into()
            }
        );
        let with_fact = raw
            .apply_event(&Event::SetFact("speed(a,b)".parse().unwrap()))
            .unwrap();
        assert_eq!(with_fact.derive_evidence().unwrap().len(), 1);
        assert_eq!(
            with_fact
                .apply_event(&Event::RetractFact("speed(b,a)".parse().unwrap()))
                .unwrap_err(),
            ScenarioError::UnknownFact("speed(b,a)".parse().unwrap())
        );
    }

    #[test]
    fn event_documents_parse() {
        let text = "\
# two changes
move_box box5 7 5
resize_box box4 3

remove_box box6
set_fact speed(a,b)
";
        let events = parse_events(text).unwrap();
        assert_eq!(events.len(), 4);
        assert_eq!(
            events[0],
            Event::MoveBox {
                id: "box5".into(),
                to: Point::new(7.0, 5.0),
            }
        );
        assert_eq!(events[0].to_string(), "move_box box5 7 5");
        assert!(matches!(
            parse_events("teleport box1\n").unwrap_err(),
            ScenarioError::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn attribute_tables_match_geometry() {
        let table = scenario_b().attribute_table().unwrap();
        assert_eq!(
            table.get("box4", "box5", "smaller").unwrap(),
            Comparison::Equal
        );
        assert_eq!(
            table.get("box4", "box6", "nearer_robot").unwrap(),
            Comparison::FavorsSecond
        );
        assert_eq!(
            table.get("box4", "box6", "nearer_store").unwrap(),
            Comparison::FavorsFirst
        );
    }

    #[test]
    fn raw_attribute_tables_require_decided_pairs() {
        let total = load_scenario(
            "\
mode: raw
alternatives: a b
criteria: speed
order: speed
fact: speed(b,a)
",
        )
        .unwrap();
        let table = total.attribute_table().unwrap();
        assert_eq!(
            table.get("a", "b", "speed").unwrap(),
            Comparison::FavorsSecond
        );

        let partial =
            load_scenario("mode: raw\nalternatives: a b\ncriteria: speed\norder: speed\n").unwrap();
        assert_eq!(
            partial.attribute_table().unwrap_err(),
            ScenarioError::NotTotal {
                a: "a".into(),
                b: "b".into(),
            }
        );
    }

    #[test]
    fn scenario_decisions_match_the_storerooms() {
        let adf = scenario_a().framework().unwrap();
        let b = names(&["box1", "box2", "box3"]);
        assert_eq!(adf.acceptable_alternatives(&b).unwrap(), names(&["box1"]));

        let adf = scenario_b().framework().unwrap();
        let b = names(&["box4", "box5", "box6"]);
        assert_eq!(
            adf.acceptable_alternatives(&b).unwrap(),
            names(&["box4", "box5"])
        );

        let order = ["nearer_robot", "nearer_store", "smaller"].map(String::from);
        let adf = scenario_b().framework_with_order(Some(&order)).unwrap();
        assert_eq!(adf.acceptable_alternatives(&b).unwrap(), names(&["box6"]));
    }
}
