//! Seeded random instances for cross-checking the pipeline against the
//! oracle.
//!
//! An instance is only returned once the oracle is known to be exact on it:
//! the observation classes of all strings up to `check_len` must be
//! certified complete at some enumeration bound, and every state of the
//! synthesized attacker must be reached by the observation of such a string.
//! Rejected draws are simply redrawn from the same seeded stream.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attacked::AttackerMachine;
use crate::automata::{Event, EventSet, Fsa, StateId};
use crate::error::Error;
use crate::oracle::Oracle;
use crate::supervisory::{attacker_observation, validate_supervisor, SupervisorRealization};
use crate::synthesis::{synthesize, MooreAttacker, Synthesis, SynthesisOptions};
use crate::universe::EventUniverse;

const EVENT_NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub max_plant_states: usize,
    pub max_supervisor_states: usize,
    pub max_damage_states: usize,
    pub max_events: usize,
    /// Strings up to this length must have exactly computed observation classes.
    pub check_len: usize,
    /// Enumeration bounds tried for the class certificate.
    pub class_bounds: RangeInclusive<usize>,
    pub max_attempts: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_plant_states: 5,
            max_supervisor_states: 5,
            max_damage_states: 4,
            max_events: 5,
            check_len: 6,
            class_bounds: 6..=10,
            max_attempts: 10_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub seed: u64,
    pub universe: EventUniverse,
    pub plant: Fsa<Event>,
    pub supervisor: SupervisorRealization,
    /// Partial damage automaton.
    pub damage: Fsa<Event>,
    /// Enumeration bound at which the oracle's classes were certified.
    pub class_bound: usize,
    pub synthesis: Synthesis,
    /// Draws rejected before this instance was accepted.
    pub rejected: usize,
}

fn subset<'a, R: Rng>(rng: &mut R, from: impl IntoIterator<Item = &'a Event>, p: f64) -> EventSet {
    from.into_iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}

fn random_universe<R: Rng>(rng: &mut R, max_events: usize) -> EventUniverse {
    let n = rng.gen_range(2..=max_events.clamp(2, EVENT_NAMES.len()));
    let events: EventSet = EVENT_NAMES[..n].iter().map(|&e| Event::new(e)).collect();
    let observable = subset(rng, &events, 0.75);
    let controllable = subset(rng, &observable, 0.7);
    let attacker_observable = subset(rng, &observable, 0.75);
    let candidates: Vec<&Event> = controllable.intersection(&attacker_observable).collect();
    let attackable = subset(rng, candidates, 0.7);
    EventUniverse::new(events)
        .with_observable(observable)
        .with_controllable(controllable)
        .with_attacker_observable(attacker_observable)
        .with_attackable(attackable)
}

fn numbered(n: usize, alphabet: &EventSet) -> Fsa<Event> {
    let mut fsa = Fsa::new(alphabet.iter().cloned(), "0");
    for i in 1..n {
        fsa.add_state(i.to_string()).expect("fresh name");
    }
    fsa
}

fn random_plant<R: Rng>(rng: &mut R, u: &EventUniverse, max_states: usize) -> Fsa<Event> {
    let n = rng.gen_range(2..=max_states.max(2));
    let mut g = numbered(n, u.events());
    let states: Vec<StateId> = g.states().collect();
    for &q in &states {
        for e in u.events() {
            if rng.gen_bool(0.5) {
                let t = *states.choose(rng).expect("nonempty");
                g.add_transition(q, e.clone(), t).expect("fresh edge");
            }
        }
    }
    g
}

/// A normal supervisor: unobservable events self-loop everywhere,
/// uncontrollable observable events are defined everywhere.
fn random_supervisor<R: Rng>(rng: &mut R, u: &EventUniverse, max_states: usize) -> Fsa<Event> {
    let n = rng.gen_range(1..=max_states.max(1));
    let mut s = numbered(n, u.events());
    let states: Vec<StateId> = s.states().collect();
    for &x in &states {
        for e in u.events() {
            let target = if !u.is_observable(e) {
                Some(x)
            } else if !u.is_controllable(e) || rng.gen_bool(0.6) {
                Some(*states.choose(rng).expect("nonempty"))
            } else {
                None
            };
            if let Some(t) = target {
                s.add_transition(x, e.clone(), t).expect("fresh edge");
            }
        }
    }
    s
}

/// Random partial damage automaton. Most draws embed a short closed-loop
/// walk followed by a disabled attackable event into a dedicated last state,
/// the only marked one, so that a fair share of instances is attackable.
fn random_damage<R: Rng>(
    rng: &mut R,
    u: &EventUniverse,
    g: &Fsa<Event>,
    s: &Fsa<Event>,
    max_states: usize,
) -> Fsa<Event> {
    let n = rng.gen_range(2..=max_states.max(2));
    let mut h = numbered(n, u.events());
    let states: Vec<StateId> = h.states().collect();
    let embedded = rng.gen_bool(0.8) && (0..4).any(|_| embed_attack(rng, u, g, s, &mut h));
    let targets = if embedded { &states[..n - 1] } else { &states[..] };
    for &z in &states {
        for e in u.events() {
            if h.step(z, e).is_none() && rng.gen_bool(0.4) {
                let t = *targets.choose(rng).expect("nonempty");
                h.add_transition(z, e.clone(), t).expect("fresh edge");
            }
        }
    }
    if embedded {
        return h;
    }
    for &z in &states[1..] {
        if rng.gen_bool(0.4) {
            h.set_marked(z, true);
        }
    }
    if h.marked().is_empty() {
        let z = *states[1..].choose(rng).expect("at least two states");
        h.set_marked(z, true);
    }
    h
}

/// Walks up to three closed-loop steps from the initial states, then adds a
/// disabled attackable event into the last damage state and marks it.
fn embed_attack<R: Rng>(
    rng: &mut R,
    u: &EventUniverse,
    g: &Fsa<Event>,
    s: &Fsa<Event>,
    h: &mut Fsa<Event>,
) -> bool {
    let states: Vec<StateId> = h.states().collect();
    let last = *states.last().expect("nonempty");
    let inner = &states[..states.len() - 1];
    let (mut q, mut x, mut z) = (g.initial(), s.initial(), h.initial());
    for _ in 0..rng.gen_range(0..=3) {
        let moves: Vec<(&Event, StateId)> = g
            .outgoing(q)
            .filter(|(e, _)| s.step(x, e).is_some())
            .collect();
        let Some(&(e, q2)) = moves.choose(rng) else {
            break;
        };
        let e = e.clone();
        let z2 = match h.step(z, &e) {
            Some(z2) => z2,
            None => {
                let t = *inner.choose(rng).expect("nonempty");
                h.add_transition(z, e.clone(), t).expect("missing edge");
                t
            }
        };
        x = s.step(x, &e).expect("checked");
        q = q2;
        z = z2;
    }
    let attacks: Vec<&Event> = g
        .enabled(q)
        .filter(|e| u.is_attackable(e) && s.step(x, e).is_none())
        .collect();
    let Some(&sigma) = attacks.choose(rng) else {
        return false;
    };
    if h.step(z, sigma).is_some() {
        return false;
    }
    h.add_transition(z, sigma.clone(), last).expect("missing edge");
    h.set_marked(last, true);
    true
}

/// Checks that every attacker state is reached by the observation of some
/// closed-loop string of length at most `n`.
fn attacker_covered(oracle: &Oracle<'_>, g: &Fsa<Event>, sr: &SupervisorRealization, m: &MooreAttacker, n: usize) -> bool {
    let mut seen = BTreeSet::new();
    for s in oracle.closed_strings(n) {
        let obs = attacker_observation(g, sr, s).expect("closed-loop string");
        if let Some(y) = m.run(&obs) {
            seen.insert(y);
        }
    }
    seen.len() == m.fsa().num_states()
}

/// Draws the instance for `seed`. Panics only if `max_attempts` draws are
/// all rejected.
pub fn generate(seed: u64, config: &GeneratorConfig) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for rejected in 0..config.max_attempts {
        let universe = random_universe(&mut rng, config.max_events);
        if universe.attackable().is_empty() && rng.gen_bool(0.8) {
            continue;
        }
        let plant = random_plant(&mut rng, &universe, config.max_plant_states);
        let supervisor = random_supervisor(&mut rng, &universe, config.max_supervisor_states);
        let damage = random_damage(
            &mut rng,
            &universe,
            &plant,
            &supervisor,
            config.max_damage_states,
        );

        let sr = validate_supervisor(&supervisor, &universe, false)
            .expect("generated supervisors are normal");
        let synthesis = match synthesize(&plant, &sr, &damage, SynthesisOptions::default()) {
            Ok(syn) => syn,
            Err(Error::DamageOverlapsClosedLoop(_)) => continue,
            Err(e) => panic!("unexpected synthesis failure: {e}"),
        };
        let certified = config.class_bounds.clone().find_map(|bound| {
            let oracle = Oracle::new(&plant, &sr, &damage, bound).ok()?;
            oracle.certify_classes(config.check_len).ok()?;
            attacker_covered(&oracle, &plant, &sr, &synthesis.attacker, config.check_len)
                .then_some(bound)
        });
        let Some(class_bound) = certified else {
            continue;
        };
        return RandomInstance {
            seed,
            universe,
            plant,
            supervisor: sr,
            damage,
            class_bound,
            synthesis,
            rejected,
        };
    }
    panic!("no certified instance for seed {seed} in {} draws", config.max_attempts)
}

/// A random attacker whose enable sets are subsets of `Lf` and which, with
/// probability one half, also suppresses random attackable commands.
pub fn random_pruning<R: Rng>(rng: &mut R, m: &MooreAttacker) -> AttackerMachine {
    let disabling = rng.gen_bool(0.5);
    let mut enable = Vec::new();
    let mut disable = Vec::new();
    for y in m.fsa().states() {
        enable.push(subset(rng, m.lf(y), 0.5));
        disable.push(if disabling {
            subset(rng, m.attackable(), 0.3)
        } else {
            EventSet::new()
        });
    }
    AttackerMachine::with_decisions(m, enable, disable)
}

/// Deterministic stream for pruning draws tied to an instance seed.
pub fn pruning_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_9a11_0c0f_fee5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let cfg = GeneratorConfig::default();
        let a = generate(7, &cfg);
        let b = generate(7, &cfg);
        assert_eq!(a.plant, b.plant);
        assert_eq!(a.damage, b.damage);
        assert_eq!(a.supervisor, b.supervisor);
        assert_eq!(a.class_bound, b.class_bound);
    }

    #[test]
    fn instances_respect_size_limits() {
        let cfg = GeneratorConfig::default();
        for seed in 0..10 {
            let inst = generate(seed, &cfg);
            assert!(inst.plant.num_states() <= 5);
            assert!(inst.supervisor.fsa().num_states() <= 5);
            assert!(inst.damage.num_states() <= 4);
            assert!(inst.universe.events().len() <= 5);
            inst.universe.validate().unwrap();
        }
    }
}
