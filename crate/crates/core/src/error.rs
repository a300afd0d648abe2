use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which alphabet inclusion an [`EventUniverse`](crate::EventUniverse) breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NestingRule {
    /// A partition names an event that is not in the alphabet.
    UnknownEvent,
    /// Σc ⊆ Σo (normal supervisor).
    ControllableNotObservable,
    /// Σc,A ⊆ Σc.
    AttackableNotControllable,
    /// Σc,A ⊆ Σo,A (normal attacker).
    AttackableNotAttackerObservable,
    /// Σo,A ⊆ Σo.
    AttackerObservableNotObservable,
}

impl fmt::Display for NestingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NestingRule::UnknownEvent => "is not declared in the alphabet",
            NestingRule::ControllableNotObservable => "is controllable but not observable",
            NestingRule::AttackableNotControllable => "is attackable but not controllable",
            NestingRule::AttackableNotAttackerObservable => {
                "is attackable but not observable to the attacker"
            }
            NestingRule::AttackerObservableNotObservable => {
                "is observable to the attacker but not to the supervisor"
            }
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate state `{0}`")]
    DuplicateState(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("label `{0}` is not in the alphabet")]
    UnknownLabel(String),

    #[error("nondeterministic transition from `{state}` on `{label}`")]
    Nondeterministic { state: String, label: String },

    #[error("enumeration length {requested} exceeds the guard of {guard}")]
    EnumerationGuard { requested: usize, guard: usize },

    #[error("alphabet nesting violation: event `{event}` {rule}")]
    AlphabetNesting { event: String, rule: NestingRule },

    #[error("{automaton}: alphabet does not match the event universe ({detail})")]
    AlphabetMismatch { automaton: String, detail: String },

    #[error("controllability violation: uncontrollable event `{event}` is not defined at supervisor state `{state}`")]
    ControllabilityViolation { state: String, event: String },

    #[error("observability violation: unobservable event `{event}` must self-loop at supervisor state `{state}`")]
    ObservabilityViolation { state: String, event: String },

    #[error("control command misses uncontrollable event `{0}`")]
    InvalidCommand(String),

    #[error("string `{0}` is not in the closed-loop behavior")]
    StringNotInClosedLoop(String),

    #[error("damage automaton is incomplete: `{event}` undefined at state `{state}`")]
    IncompleteDamage { state: String, event: String },

    #[error("damaging string `{0}` is already generated by the closed loop")]
    DamageOverlapsClosedLoop(String),

    #[error("the plant/supervisor pair is not attackable")]
    NotAttackable,

    #[error("observation sequence `{0}` is not feasible")]
    ObservationNotFeasible(String),

    #[error("attacker is out of sync with the closed loop: {0}")]
    ObservationDesync(String),

    #[error("oracle enumeration exceeded {0} strings")]
    OracleBudget(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: {source}")]
    Located { line: usize, source: Box<Error> },
}

impl Error {
    /// Short machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateState(_) => "duplicate_state",
            Error::UnknownState(_) => "unknown_state",
            Error::UnknownLabel(_) => "unknown_label",
            Error::Nondeterministic { .. } => "nondeterministic",
            Error::EnumerationGuard { .. } => "enumeration_guard",
            Error::AlphabetNesting { .. } => "alphabet_nesting_violation",
            Error::AlphabetMismatch { .. } => "alphabet_mismatch",
            Error::ControllabilityViolation { .. } => "controllability_violation",
            Error::ObservabilityViolation { .. } => "observability_violation",
            Error::InvalidCommand(_) => "invalid_command",
            Error::StringNotInClosedLoop(_) => "string_not_in_closed_loop",
            Error::IncompleteDamage { .. } => "incomplete_damage",
            Error::DamageOverlapsClosedLoop(_) => "damage_overlaps_closed_loop",
            Error::NotAttackable => "not_attackable",
            Error::ObservationNotFeasible(_) => "observation_not_feasible",
            Error::ObservationDesync(_) => "observation_desync",
            Error::OracleBudget(_) => "oracle_budget",
            Error::Parse { .. } => "parse",
            Error::Located { source, .. } => source.kind(),
        }
    }

    /// Errors caused by ill-formed input rather than by a bug or a resource limit.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Located { source, .. } => source.is_validation(),
            _ => !matches!(self, Error::OracleBudget(_) | Error::EnumerationGuard { .. }),
        }
    }

    /// Strips any line information.
    pub fn root(&self) -> &Error {
        match self {
            Error::Located { source, .. } => source.root(),
            _ => self,
        }
    }
}
