//! Property-based invariants, exercised over generated literals, evidence
//! sets, scenarios, and event sequences.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dialectic::engine::Mark;
use dialectic::lang::{EvidenceSet, Literal};
use dialectic::oracle::random_scenario;
use dialectic::scenario::{load_scenario, BoxSpec, Event, Point, Scenario, World};

const SECOND_STOREROOM: &str = include_str!("../scenarios/storeroom_b.scenario");

/// A parseable predicate or constant symbol.
fn symbol() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,6}"
}

fn literal() -> impl Strategy<Value = Literal> {
    (
        symbol(),
        prop::collection::vec(symbol(), 0..3),
        any::<bool>(),
    )
        .prop_map(|(pred, args, negated)| {
            if negated {
                Literal::negative(pred, args)
            } else {
                Literal::positive(pred, args)
            }
        })
}

/// Literals drawn from a deliberately tiny alphabet so complementary pairs
/// are common.
fn colliding_literals() -> impl Strategy<Value = Vec<Literal>> {
    let one = ("[pq]", "[ab]", any::<bool>()).prop_map(|(pred, arg, negated)| {
        if negated {
            Literal::negative(pred, [arg])
        } else {
            Literal::positive(pred, [arg])
        }
    });
    prop::collection::vec(one, 0..8)
}

/// A dyadic coordinate: displays exactly and parses back to the same value.
fn coordinate() -> impl Strategy<Value = f64> {
    (-8000i32..8000).prop_map(|v| f64::from(v) / 8.0)
}

fn box_size() -> impl Strategy<Value = f64> {
    (1i32..800).prop_map(|v| f64::from(v) / 8.0)
}

fn geometric_scenario() -> impl Strategy<Value = Scenario> {
    let boxes =
        prop::collection::vec((coordinate(), coordinate(), box_size()), 1..6).prop_map(|specs| {
            specs
                .into_iter()
                .enumerate()
                .map(|(i, (x, y, size))| BoxSpec {
                    id: format!("crate{i}"),
                    pos: Point::new(x, y),
                    size,
                })
                .collect::<Vec<_>>()
        });
    let order = Just(vec![
        "smaller".to_string(),
        "nearer_store".to_string(),
        "nearer_robot".to_string(),
    ])
    .prop_shuffle();
    (
        coordinate(),
        coordinate(),
        coordinate(),
        coordinate(),
        boxes,
        order,
    )
        .prop_map(|(rx, ry, sx, sy, boxes, order)| Scenario {
            world: World::Geometric {
                robot: Point::new(rx, ry),
                store: Point::new(sx, sy),
                boxes,
            },
            criteria: order.clone(),
            order,
        })
}

/// Move and resize events against the bundled second storeroom.
fn storeroom_events() -> impl Strategy<Value = Vec<Event>> {
    let id = prop::sample::select(vec![
        "box4".to_string(),
        "box5".to_string(),
        "box6".to_string(),
    ]);
    let event = prop_oneof![
        (id.clone(), coordinate(), coordinate()).prop_map(|(id, x, y)| Event::MoveBox {
            id,
            to: Point::new(x, y),
        }),
        (id, box_size()).prop_map(|(id, size)| Event::ResizeBox { id, size }),
    ];
    prop::collection::vec(event, 0..6)
}

proptest! {
    #[test]
    fn complement_is_an_involution(l in literal()) {
        let complement = l.complement();
        prop_assert_ne!(&complement, &l);
        prop_assert_eq!(complement.complement(), l);
    }

    #[test]
    fn literal_display_round_trips(l in literal()) {
        let rendered = l.to_string();
        let reparsed: Literal = rendered.parse().expect("rendered literal must parse");
        prop_assert_eq!(reparsed, l);
    }

    #[test]
    fn evidence_accepts_exactly_the_complement_free_sets(facts in colliding_literals()) {
        let has_clash = facts
            .iter()
            .any(|l| facts.contains(&l.complement()));
        let result = EvidenceSet::new(facts);
        prop_assert_eq!(result.is_ok(), !has_clash);
    }

    #[test]
    fn generated_evidence_is_licensed_and_decides_every_pair(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let generated = random_scenario(&mut rng);
        // Licensing: framework construction validates every fact.
        let adf = generated.framework().expect("generated evidence must be licensed");
        // Totality: each pair either ties everywhere or is compared somewhere.
        let members: Vec<&str> = adf.alternatives().iter().collect();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let (a, b) = (members[i], members[j]);
                let tied = generated
                    .evidence
                    .contains(&Literal::positive("same_att", [a, b]));
                let compared = generated.criteria.iter().any(|c| {
                    generated.evidence.contains(&Literal::positive(c, [a, b]))
                        || generated.evidence.contains(&Literal::positive(c, [b, a]))
                });
                prop_assert!(tied ^ compared, "pair ({a}, {b}) must tie or be compared, not both");
                for criterion in generated.criteria.iter() {
                    prop_assert!(generated.table.get(a, b, criterion).is_ok());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marking_follows_the_skeptical_law(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let adf = random_scenario(&mut rng).framework().unwrap();
        let instance = adf.epistemic().instance();
        for structure in instance.active_structures().unwrap() {
            let tree = instance.dialectical_tree(structure).unwrap().mark_skeptical();
            prop_assert!(tree.is_marked());
            let nodes = tree.nodes();
            for node in nodes {
                let defeated_child = node
                    .children
                    .iter()
                    .any(|&c| nodes[c].mark == Some(Mark::U));
                let expected = if defeated_child { Mark::D } else { Mark::U };
                prop_assert_eq!(node.mark, Some(expected));
            }
        }
    }

    #[test]
    fn defeat_needs_conflict_and_strict_preference(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let adf = random_scenario(&mut rng).framework().unwrap();
        let instance = adf.epistemic().instance();
        let active = instance.active_instance().unwrap();
        for (i, s) in active.structures.iter().enumerate() {
            prop_assert!(!active.defeats.contains(&(i, i)), "no structure defeats itself");
            prop_assert!(!instance.defeats(s, s));
        }
        for &(i, j) in &active.defeats {
            prop_assert!(instance.defeats(&active.structures[i], &active.structures[j]));
            // With single-criterion supports, strict preference one way rules
            // out defeat the other way.
            prop_assert!(
                !active.defeats.contains(&(j, i)),
                "defeat between primitive structures must be one-directional"
            );
        }
    }

    #[test]
    fn justified_conclusions_are_the_warranted_claims(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let adf = random_scenario(&mut rng).framework().unwrap();
        let instance = adf.epistemic().instance();
        let from_warrant: BTreeSet<Literal> = instance
            .warranted_structures()
            .unwrap()
            .iter()
            .map(|s| s.claim(instance.working()).clone())
            .collect();
        prop_assert_eq!(adf.justified().unwrap(), &from_warrant);
    }

    #[test]
    fn identity_updates_change_nothing(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let adf = random_scenario(&mut rng).framework().unwrap();
        let nothing = BTreeSet::new();
        let updated = adf.update_evidence(&nothing, &nothing).unwrap();
        prop_assert_eq!(adf.justified().unwrap(), updated.justified().unwrap());
        let all: BTreeSet<String> = adf.alternatives().iter().map(String::from).collect();
        prop_assert_eq!(
            adf.acceptable_alternatives(&all).unwrap(),
            updated.acceptable_alternatives(&all).unwrap()
        );
    }

    #[test]
    fn geometric_documents_round_trip(scenario in geometric_scenario()) {
        let reloaded = load_scenario(&scenario.render()).expect("rendered document must load");
        prop_assert_eq!(reloaded, scenario);
    }

    #[test]
    fn raw_documents_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let generated = random_scenario(&mut rng);
        let scenario = Scenario {
            world: World::Raw {
                alternatives: generated.alternatives.iter().map(String::from).collect(),
                facts: generated.evidence.iter().cloned().collect(),
            },
            criteria: generated.criteria.iter().map(String::from).collect(),
            order: generated.order.as_slice().to_vec(),
        };
        let reloaded = load_scenario(&scenario.render()).expect("rendered document must load");
        prop_assert_eq!(&reloaded, &scenario);
        prop_assert_eq!(
            reloaded.derive_evidence().expect("raw evidence must validate"),
            generated.evidence
        );
    }

    #[test]
    fn event_replay_is_pure_and_deterministic(events in storeroom_events()) {
        let base = load_scenario(SECOND_STOREROOM).unwrap();
        let before = base.render();

        let mut first = base.clone();
        for event in &events {
            first = first.apply_event(event).unwrap();
        }
        let mut second = base.clone();
        for event in &events {
            second = second.apply_event(event).unwrap();
        }

        prop_assert_eq!(&first, &second, "replay must be deterministic");
        prop_assert_eq!(base.render(), before, "events must not mutate the source scenario");
        prop_assert_eq!(
            first.derive_evidence().unwrap(),
            second.derive_evidence().unwrap()
        );
    }
}
