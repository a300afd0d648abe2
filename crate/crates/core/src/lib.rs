//! Covert actuator attack synthesis for discrete-event systems under normal
//! supervisors.
//!
//! The crate decides whether a plant/supervisor pair can be driven into a
//! damaging behavior by an attacker that enables disabled actuator events
//! without ever being caught by the supervisor, and synthesizes the most
//! permissive such attacker as a Moore automaton. A brute-force oracle over
//! bounded strings cross-checks the construction.

pub mod attacked;
pub mod automata;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod format;
pub mod oracle;
pub mod random;
pub mod supervisory;
pub mod synthesis;
pub mod universe;
pub mod verify;

pub use attacked::{build_attacked_loop, check_success, replay, AttackedLoop, AttackerMachine};
pub use automata::{Event, EventSet, Fsa, StateId};
pub use error::{Error, Result};
pub use format::{parse_instance, serialize_instance, InstanceOptions, ProblemInstance};
pub use oracle::{AttackPair, Oracle};
pub use supervisory::{validate_supervisor, ControlCommand, ObsLabel, SupervisorRealization};
pub use synthesis::{synthesize, MooreAttacker, Synthesis, SynthesisOptions, Verdict};
pub use universe::EventUniverse;
