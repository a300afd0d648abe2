//! The small worked instance used throughout the docs and tests.
//!
//! Plant: two routes into state 3/2 (`a'` directly, or `b a'` through the
//! unobservable `b`), from which `d'`/`d` respectively lead to the bad state
//! 4. The supervisor disables `d, d'` after `a'`, so 4 is never reached in
//! the closed loop. The damage automaton marks exactly `a' d'` and `b a' d`;
//! its dump state is left out, as it would be in a hand-drawn figure.

use crate::automata::{Event, Fsa};
use crate::universe::EventUniverse;

#[derive(Clone, Debug)]
pub struct Example {
    pub universe: EventUniverse,
    pub plant: Fsa<Event>,
    pub supervisor: Fsa<Event>,
    /// Partial: completion adds the dump state `6`.
    pub damage: Fsa<Event>,
}

/// Splits on whitespace into events.
pub fn word(s: &str) -> Vec<Event> {
    s.split_whitespace().map(Event::new).collect()
}

fn build(universe: &EventUniverse, initial: &str, edges: &[(&str, &str, &str)]) -> Fsa<Event> {
    let mut fsa = Fsa::new(universe.events().iter().cloned(), initial);
    for &(src, event, dst) in edges {
        let s = fsa.ensure_state(src);
        let t = fsa.ensure_state(dst);
        fsa.add_transition(s, Event::new(event), t)
            .expect("fixture is deterministic");
    }
    fsa
}

pub fn running_example() -> Example {
    let universe = EventUniverse::new(["a", "a'", "b", "c", "d", "d'"])
        .with_observable(["a", "a'", "c", "d", "d'"])
        .with_controllable(["a", "a'", "c", "d", "d'"])
        .with_attackable(["d", "d'"])
        .with_attacker_observable(["c", "d", "d'"]);

    let plant = build(
        &universe,
        "0",
        &[
            ("0", "a'", "3"),
            ("0", "b", "1"),
            ("1", "a'", "2"),
            ("2", "c", "5"),
            ("2", "d", "4"),
            ("3", "c", "5"),
            ("3", "d'", "4"),
            ("5", "a", "0"),
        ],
    );

    let supervisor = build(
        &universe,
        "0",
        &[
            ("0", "a'", "3"),
            ("0", "b", "0"),
            ("3", "b", "3"),
            ("3", "c", "5"),
            ("5", "b", "5"),
            ("5", "a", "0"),
        ],
    );

    let mut damage = build(
        &universe,
        "0",
        &[
            ("0", "a'", "3"),
            ("0", "b", "1"),
            ("1", "a'", "4"),
            ("3", "d'", "5"),
            ("4", "d", "2"),
        ],
    );
    for name in ["2", "5"] {
        let z = damage.state_id(name).expect("fixture state");
        damage.set_marked(z, true);
    }

    Example {
        universe,
        plant,
        supervisor,
        damage,
    }
}
