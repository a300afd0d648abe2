//! Supervisor realizations, control commands, natural projections, the
//! closed loop `S ‖ G`, and the observation map of the actuator attacker.

use std::fmt;

use crate::automata::{format_set, format_word, sync_product, reachable_trim, Event, EventSet, Fsa, StateId};
use crate::error::{Error, Result};
use crate::universe::EventUniverse;

/// A control command γ: the set of enabled events. Always contains Σuc.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ControlCommand(EventSet);

impl ControlCommand {
    pub fn new(enabled: EventSet, universe: &EventUniverse) -> Result<Self> {
        if let Some(e) = universe.uncontrollable().difference(&enabled).next() {
            return Err(Error::InvalidCommand(e.to_string()));
        }
        Ok(ControlCommand(enabled))
    }

    /// Callers guarantee Σuc ⊆ `enabled`.
    pub(crate) fn from_enabled(enabled: EventSet) -> Self {
        ControlCommand(enabled)
    }

    pub fn events(&self) -> &EventSet {
        &self.0
    }

    pub fn contains(&self, e: &Event) -> bool {
        self.0.contains(e)
    }

    /// γ ∩ Σc,A
    pub fn attackable_part(&self, universe: &EventUniverse) -> EventSet {
        self.0.intersection(universe.attackable()).cloned().collect()
    }
}

impl fmt::Display for ControlCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_set(&self.0))
    }
}

/// One letter `(P_{o,A}(σ), γ)` of the attacker's observation alphabet.
/// `event` is `None` when σ is invisible to the attacker.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObsLabel {
    pub event: Option<Event>,
    pub command: ControlCommand,
}

impl ObsLabel {
    /// The label the attacker records when the supervisor observes `event`
    /// and answers with `command`.
    pub fn observe(universe: &EventUniverse, event: &Event, command: ControlCommand) -> Self {
        ObsLabel {
            event: universe
                .is_attacker_observable(event)
                .then(|| event.clone()),
            command,
        }
    }
}

impl fmt::Display for ObsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.event {
            Some(e) => write!(f, "({e},{})", self.command),
            None => write!(f, "(ε,{})", self.command),
        }
    }
}

/// Renders an observation sequence by concatenating its labels.
pub fn format_observation(obs: &[ObsLabel]) -> String {
    if obs.is_empty() {
        "ε".to_string()
    } else {
        obs.iter().map(|l| l.to_string()).collect()
    }
}

/// A supervisor automaton `S = (X, Σ, ζ, x0)` checked against the
/// controllability and normal-observability constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupervisorRealization {
    fsa: Fsa<Event>,
    universe: EventUniverse,
}

impl SupervisorRealization {
    pub fn fsa(&self) -> &Fsa<Event> {
        &self.fsa
    }

    pub fn universe(&self) -> &EventUniverse {
        &self.universe
    }

    /// Events defined at `x`.
    pub fn enabled(&self, x: StateId) -> EventSet {
        self.fsa.enabled(x).cloned().collect()
    }

    /// The command issued while the supervisor sits in `x`.
    pub fn command_at(&self, x: StateId) -> ControlCommand {
        ControlCommand::from_enabled(self.enabled(x))
    }

    /// V(ε): the command standing before any observation.
    pub fn initial_command(&self) -> ControlCommand {
        self.command_at(self.fsa.initial())
    }
}

pub(crate) fn check_alphabet(name: &str, fsa: &Fsa<Event>, universe: &EventUniverse) -> Result<()> {
    if fsa.alphabet() == universe.events() {
        return Ok(());
    }
    let extra: Vec<_> = fsa.alphabet().difference(universe.events()).collect();
    let missing: Vec<_> = universe.events().difference(fsa.alphabet()).collect();
    Err(Error::AlphabetMismatch {
        automaton: name.to_string(),
        detail: format!("extra {}, missing {}", format_set(extra), format_set(missing)),
    })
}

/// Validates `s` as a normal supervisor over `u`.
///
/// With `repair` set, missing self-loops of unobservable events are added
/// before checking; a transition on an unobservable event that leaves its
/// state is never repaired, and neither is a missing observable
/// uncontrollable event.
pub fn validate_supervisor(
    s: &Fsa<Event>,
    u: &EventUniverse,
    repair: bool,
) -> Result<SupervisorRealization> {
    u.validate()?;
    check_alphabet("supervisor", s, u)?;
    let mut fsa = s.clone();
    let unobservable = u.unobservable();
    for x in s.states() {
        for e in &unobservable {
            match fsa.step(x, e) {
                Some(t) if t == x => {}
                None if repair => fsa.add_transition(x, e.clone(), x)?,
                _ => {
                    return Err(Error::ObservabilityViolation {
                        state: s.name(x).to_string(),
                        event: e.to_string(),
                    })
                }
            }
        }
    }
    let uncontrollable = u.uncontrollable();
    for x in fsa.states() {
        if let Some(e) = uncontrollable.iter().find(|e| fsa.step(x, e).is_none()) {
            return Err(Error::ControllabilityViolation {
                state: fsa.name(x).to_string(),
                event: e.to_string(),
            });
        }
    }
    Ok(SupervisorRealization {
        fsa,
        universe: u.clone(),
    })
}

/// The command V(w) for the observation w that leads the supervisor to `x`.
pub fn control_command(sr: &SupervisorRealization, x: StateId) -> Result<ControlCommand> {
    if x.index() >= sr.fsa.num_states() {
        return Err(Error::UnknownState(x.to_string()));
    }
    Ok(sr.command_at(x))
}

/// Natural projection: erase every symbol outside `onto`.
pub fn project(s: &[Event], onto: &EventSet) -> Vec<Event> {
    s.iter().filter(|e| onto.contains(*e)).cloned().collect()
}

/// `G ‖ S`, whose closed behavior is L(V/G). States are named `(q,x)`.
pub fn closed_loop(g: &Fsa<Event>, sr: &SupervisorRealization) -> Fsa<Event> {
    reachable_trim(&sync_product(g, &sr.fsa))
}

/// P̂(P_o(s)): one label per supervisor-observable event of `s`.
pub fn attacker_observation(
    g: &Fsa<Event>,
    sr: &SupervisorRealization,
    s: &[Event],
) -> Result<Vec<ObsLabel>> {
    let not_in_loop = || Error::StringNotInClosedLoop(format_word(s));
    let mut q = g.initial();
    let mut x = sr.fsa.initial();
    let mut labels = Vec::new();
    for e in s {
        q = g.step(q, e).ok_or_else(not_in_loop)?;
        x = sr.fsa.step(x, e).ok_or_else(not_in_loop)?;
        if sr.universe.is_observable(e) {
            labels.push(ObsLabel::observe(&sr.universe, e, sr.command_at(x)));
        }
    }
    Ok(labels)
}
