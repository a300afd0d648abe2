//! The closed loop under attack: plant, supervisor, damage tracker and a
//! finite-state actuator attacker composed into one automaton whose language
//! is the attacked closed behavior.
//!
//! Within the product, an event fires when the plant defines it and it is in
//! the attacked command `(γ − Σc,A) ∪ A(y)`. Firing an event the supervisor
//! does not define is an attack: the supervisor halts on it, so the loop moves
//! to the absorbing `DAMAGE` state when the extended string is damaging and to
//! `DETECTED_NO_DAMAGE` otherwise.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::automata::{format_set, format_word, Event, EventSet, Fsa, StateId};
use crate::error::{Error, Result};
use crate::supervisory::{check_alphabet, ControlCommand, ObsLabel, SupervisorRealization};
use crate::synthesis::{complete_damage_automaton, MooreAttacker};

pub const DAMAGE: &str = "DAMAGE";
pub const DETECTED_NO_DAMAGE: &str = "DETECTED_NO_DAMAGE";

/// A finite-state attacker that reads the attacker-observation labels and
/// rewrites the attackable part of each command.
///
/// The decision at `y` under command γ is
/// `((γ ∩ Σc,A) − disable(y)) ∪ enable(y)`, so an attacker with empty
/// `disable` sets is enabling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackerMachine {
    fsa: Fsa<ObsLabel>,
    attackable: EventSet,
    enable: Vec<EventSet>,
    disable: Vec<EventSet>,
}

impl AttackerMachine {
    /// Wraps an observation automaton; every set must lie inside `attackable`.
    pub fn new(
        fsa: Fsa<ObsLabel>,
        attackable: EventSet,
        enable: Vec<EventSet>,
        disable: Vec<EventSet>,
    ) -> Result<Self> {
        let n = fsa.num_states();
        if enable.len() != n || disable.len() != n {
            return Err(Error::InvalidCommand(format!(
                "attacker needs one decision per state ({n})"
            )));
        }
        for set in enable.iter().chain(&disable) {
            if let Some(e) = set.difference(&attackable).next() {
                return Err(Error::InvalidCommand(format!("{e} is not attackable")));
            }
        }
        Ok(AttackerMachine {
            fsa,
            attackable,
            enable,
            disable,
        })
    }

    /// The supremal successful attacker: enables `Lf(y)` on top of the
    /// commanded attackable events.
    pub fn from_supremal(m: &MooreAttacker) -> Self {
        let lf = m.fsa().states().map(|y| m.lf(y).clone()).collect();
        Self::with_decisions(m, lf, vec![EventSet::new(); m.fsa().num_states()])
    }

    /// Observes but never changes a command.
    pub fn passive(m: &MooreAttacker) -> Self {
        let n = m.fsa().num_states();
        Self::with_decisions(m, vec![EventSet::new(); n], vec![EventSet::new(); n])
    }

    /// Enables the same events after every observation.
    pub fn always_enabling(m: &MooreAttacker, events: EventSet) -> Result<Self> {
        let n = m.fsa().num_states();
        AttackerMachine::new(
            m.fsa().clone(),
            m.attackable().clone(),
            vec![events; n],
            vec![EventSet::new(); n],
        )
    }

    /// Same observation automaton as `m` with custom decisions.
    pub fn with_decisions(m: &MooreAttacker, enable: Vec<EventSet>, disable: Vec<EventSet>) -> Self {
        AttackerMachine::new(m.fsa().clone(), m.attackable().clone(), enable, disable)
            .expect("decisions drawn from the attackable events")
    }

    pub fn fsa(&self) -> &Fsa<ObsLabel> {
        &self.fsa
    }

    pub fn enable(&self, y: StateId) -> &EventSet {
        &self.enable[y.index()]
    }

    pub fn disable(&self, y: StateId) -> &EventSet {
        &self.disable[y.index()]
    }

    pub fn is_enabling(&self) -> bool {
        self.disable.iter().all(EventSet::is_empty)
    }

    /// A(y) under the current command γ.
    pub fn decide(&self, y: StateId, command: &ControlCommand) -> EventSet {
        let mut out: EventSet = command
            .events()
            .intersection(&self.attackable)
            .filter(|e| !self.disable[y.index()].contains(*e))
            .cloned()
            .collect();
        out.extend(self.enable[y.index()].iter().cloned());
        out
    }
}

/// Commands in force at one loop state.
#[derive(Clone, Debug, PartialEq, Eq)]
struct LoopState {
    names: [String; 3],
    plant_enabled: EventSet,
    command: EventSet,
    attack: EventSet,
    attacked_command: EventSet,
}

/// `(q, x, z, y)` component ids of a loop state.
pub type LoopComponents = (StateId, StateId, StateId, StateId);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackedLoop {
    fsa: Fsa<Event>,
    damage: StateId,
    detected: StateId,
    components: Vec<Option<LoopComponents>>,
    info: Vec<Option<LoopState>>,
}

impl AttackedLoop {
    /// Prefix-closed automaton of the attacked closed behavior.
    pub fn fsa(&self) -> &Fsa<Event> {
        &self.fsa
    }

    pub fn damage(&self) -> StateId {
        self.damage
    }

    pub fn detected(&self) -> StateId {
        self.detected
    }

    pub fn components(&self, v: StateId) -> Option<LoopComponents> {
        self.components[v.index()]
    }

    pub fn is_terminal(&self, v: StateId) -> bool {
        v == self.damage || v == self.detected
    }
}

/// Composes plant, supervisor, attacker and damage automaton. A partial
/// damage automaton is completed first.
pub fn build_attacked_loop(
    g: &Fsa<Event>,
    sr: &SupervisorRealization,
    attacker: &AttackerMachine,
    h: &Fsa<Event>,
) -> Result<AttackedLoop> {
    let u = sr.universe();
    check_alphabet("plant", g, u)?;
    check_alphabet("damage", h, u)?;
    let h = complete_damage_automaton(h);
    let s = sr.fsa();
    let a = &attacker.fsa;

    type Key = LoopComponents;
    let start: Key = (g.initial(), s.initial(), h.initial(), a.initial());
    let mut order = vec![start];
    let mut index: BTreeMap<Key, usize> = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([0usize]);
    // (from, event, Ok(target index) | Err(damaging))
    let mut edges: Vec<(usize, Event, std::result::Result<usize, bool>)> = Vec::new();
    let mut info = Vec::new();

    while let Some(i) = queue.pop_front() {
        let (q, x, z, y) = order[i];
        let command = sr.command_at(x);
        let attack = attacker.decide(y, &command);
        let attacked_command: EventSet = command
            .events()
            .iter()
            .filter(|e| !u.is_attackable(e))
            .chain(&attack)
            .cloned()
            .collect();
        for (e, q2) in g.outgoing(q) {
            if !attacked_command.contains(e) {
                continue;
            }
            let z2 = h.step(z, e).expect("completed damage automaton");
            let Some(x2) = s.step(x, e) else {
                edges.push((i, e.clone(), Err(h.is_marked(z2))));
                continue;
            };
            let y2 = if u.is_observable(e) {
                let label = ObsLabel::observe(u, e, sr.command_at(x2));
                a.step(y, &label).ok_or_else(|| {
                    Error::ObservationDesync(format!(
                        "attacker state {} has no move on {label}",
                        a.name(y)
                    ))
                })?
            } else {
                y
            };
            let next = (q2, x2, z2, y2);
            let j = *index.entry(next).or_insert_with(|| {
                order.push(next);
                queue.push_back(order.len() - 1);
                order.len() - 1
            });
            edges.push((i, e.clone(), Ok(j)));
        }
        info.push((command, attack, attacked_command, g.enabled(q).cloned().collect()));
    }

    let name = |k: &Key| {
        format!(
            "({},{},{},{})",
            g.name(k.0),
            s.name(k.1),
            h.name(k.2),
            a.name(k.3)
        )
    };
    let mut fsa = Fsa::new(u.events().iter().cloned(), name(&order[0]));
    let mut ids = vec![fsa.initial()];
    for k in &order[1..] {
        ids.push(fsa.add_fresh_state(name(k)));
    }
    let damage = fsa.add_fresh_state(DAMAGE.to_string());
    let detected = fsa.add_fresh_state(DETECTED_NO_DAMAGE.to_string());
    fsa.set_marked(damage, true);
    for (i, e, target) in edges {
        let dst = match target {
            Ok(j) => ids[j],
            Err(true) => damage,
            Err(false) => detected,
        };
        fsa.add_transition(ids[i], e, dst).expect("deterministic");
    }

    let mut state_info: Vec<Option<LoopState>> = order
        .iter()
        .zip(info)
        .map(|(k, (command, attack, attacked_command, plant_enabled))| {
            Some(LoopState {
                names: [
                    g.name(k.0).to_string(),
                    s.name(k.1).to_string(),
                    a.name(k.3).to_string(),
                ],
                plant_enabled,
                command: command.events().clone(),
                attack,
                attacked_command,
            })
        })
        .collect();
    state_info.extend([None, None]);
    let mut components: Vec<Option<Key>> = order.into_iter().map(Some).collect();
    components.extend([None, None]);
    Ok(AttackedLoop {
        fsa,
        damage,
        detected,
        components,
        info: state_info,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuccessReport {
    pub successful: bool,
    /// Shortest string reaching `DAMAGE`.
    pub damage_witness: Option<Vec<Event>>,
    /// Shortest string reaching `DETECTED_NO_DAMAGE`.
    pub detection_witness: Option<Vec<Event>>,
}

/// Successful iff `DAMAGE` is reachable and `DETECTED_NO_DAMAGE` is not.
pub fn check_success(lp: &AttackedLoop) -> SuccessReport {
    let damage_witness = lp.fsa.shortest_word_to(|v| v == lp.damage);
    let detection_witness = lp.fsa.shortest_word_to(|v| v == lp.detected);
    SuccessReport {
        successful: damage_witness.is_some() && detection_witness.is_none(),
        damage_witness,
        detection_witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "event", rename_all = "snake_case")]
pub enum ReplayOutcome {
    /// Every event fired; no verdict yet.
    Running,
    Damage,
    DetectedNoDamage,
    /// The plant does not define the event.
    PlantUndefined(Event),
    /// The plant defines the event but the attacked command excludes it.
    CommandDisabled(Event),
    /// The loop had already halted in a verdict state.
    Halted(Event),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub plant: String,
    pub supervisor: String,
    pub attacker: String,
    /// Command issued by the supervisor.
    pub command: String,
    /// Attacker decision A(y) on the attackable events.
    pub attack: String,
    /// Command actually applied to the plant.
    pub attacked_command: String,
    pub event: Event,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub outcome: ReplayOutcome,
}

impl Trace {
    pub fn verdict(&self) -> &'static str {
        match self.outcome {
            ReplayOutcome::Damage => DAMAGE,
            ReplayOutcome::DetectedNoDamage => DETECTED_NO_DAMAGE,
            ReplayOutcome::Running => "running",
            ReplayOutcome::PlantUndefined(_) => "plant_undefined",
            ReplayOutcome::CommandDisabled(_) => "command_disabled",
            ReplayOutcome::Halted(_) => "halted",
        }
    }
}

/// Feeds `s` through the loop one event at a time, stopping at the first
/// verdict or blocked event.
pub fn replay(lp: &AttackedLoop, s: &[Event]) -> Trace {
    let mut v = lp.fsa.initial();
    let mut steps = Vec::new();
    for e in s {
        let Some(info) = &lp.info[v.index()] else {
            return Trace {
                steps,
                outcome: ReplayOutcome::Halted(e.clone()),
            };
        };
        if !info.plant_enabled.contains(e) {
            return Trace {
                steps,
                outcome: ReplayOutcome::PlantUndefined(e.clone()),
            };
        }
        let Some(next) = lp.fsa.step(v, e) else {
            return Trace {
                steps,
                outcome: ReplayOutcome::CommandDisabled(e.clone()),
            };
        };
        let verdict = if next == lp.damage {
            DAMAGE
        } else if next == lp.detected {
            DETECTED_NO_DAMAGE
        } else {
            "running"
        };
        steps.push(TraceStep {
            plant: info.names[0].clone(),
            supervisor: info.names[1].clone(),
            attacker: info.names[2].clone(),
            command: format_set(&info.command),
            attack: format_set(&info.attack),
            attacked_command: format_set(&info.attacked_command),
            event: e.clone(),
            verdict: verdict.to_string(),
        });
        v = next;
    }
    let outcome = if v == lp.damage {
        ReplayOutcome::Damage
    } else if v == lp.detected {
        ReplayOutcome::DetectedNoDamage
    } else {
        ReplayOutcome::Running
    };
    Trace { steps, outcome }
}

impl std::fmt::Display for Trace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, st) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "{:>3}  q={} x={} y={}  γ={} A={} γ'={}  --{}--> {}",
                i + 1,
                st.plant,
                st.supervisor,
                st.attacker,
                st.command,
                st.attack,
                st.attacked_command,
                st.event,
                st.verdict
            )?;
        }
        match &self.outcome {
            ReplayOutcome::PlantUndefined(e) => write!(f, "blocked: plant does not define {e}"),
            ReplayOutcome::CommandDisabled(e) => write!(f, "blocked: {e} is disabled"),
            ReplayOutcome::Halted(e) => write!(f, "blocked: loop halted before {e}"),
            _ => write!(f, "verdict: {}", self.verdict()),
        }
    }
}

/// Renders a witness string for reports.
pub fn format_witness(w: &Option<Vec<Event>>) -> String {
    w.as_deref().map_or_else(|| "-".to_string(), format_word)
}
