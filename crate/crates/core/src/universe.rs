use crate::automata::{Event, EventSet};
use crate::error::{Error, NestingRule, Result};

/// The event alphabet Σ together with its control, observation and attack
/// partitions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventUniverse {
    events: EventSet,
    controllable: EventSet,
    observable: EventSet,
    attackable: EventSet,
    attacker_observable: EventSet,
}

fn to_set<I, E>(items: I) -> EventSet
where
    I: IntoIterator<Item = E>,
    E: Into<Event>,
{
    items.into_iter().map(Into::into).collect()
}

impl EventUniverse {
    pub fn new<I, E>(events: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: Into<Event>,
    {
        EventUniverse {
            events: to_set(events),
            ..Default::default()
        }
    }

    pub fn with_controllable<I: IntoIterator<Item = E>, E: Into<Event>>(mut self, e: I) -> Self {
        self.controllable = to_set(e);
        self
    }

    pub fn with_observable<I: IntoIterator<Item = E>, E: Into<Event>>(mut self, e: I) -> Self {
        self.observable = to_set(e);
        self
    }

    pub fn with_attackable<I: IntoIterator<Item = E>, E: Into<Event>>(mut self, e: I) -> Self {
        self.attackable = to_set(e);
        self
    }

    pub fn with_attacker_observable<I: IntoIterator<Item = E>, E: Into<Event>>(
        mut self,
        e: I,
    ) -> Self {
        self.attacker_observable = to_set(e);
        self
    }

    pub fn events(&self) -> &EventSet {
        &self.events
    }

    pub fn controllable(&self) -> &EventSet {
        &self.controllable
    }

    pub fn observable(&self) -> &EventSet {
        &self.observable
    }

    pub fn attackable(&self) -> &EventSet {
        &self.attackable
    }

    pub fn attacker_observable(&self) -> &EventSet {
        &self.attacker_observable
    }

    pub fn uncontrollable(&self) -> EventSet {
        self.events.difference(&self.controllable).cloned().collect()
    }

    pub fn unobservable(&self) -> EventSet {
        self.events.difference(&self.observable).cloned().collect()
    }

    pub fn is_controllable(&self, e: &Event) -> bool {
        self.controllable.contains(e)
    }

    pub fn is_observable(&self, e: &Event) -> bool {
        self.observable.contains(e)
    }

    pub fn is_attackable(&self, e: &Event) -> bool {
        self.attackable.contains(e)
    }

    pub fn is_attacker_observable(&self, e: &Event) -> bool {
        self.attacker_observable.contains(e)
    }

    /// Checks Σc ⊆ Σo, Σc,A ⊆ Σc, Σc,A ⊆ Σo,A and Σo,A ⊆ Σo, plus that every
    /// partition lives inside Σ. Reports the first violation found.
    pub fn validate(&self) -> Result<()> {
        let violation = |event: &Event, rule| {
            Err(Error::AlphabetNesting {
                event: event.to_string(),
                rule,
            })
        };
        for set in [
            &self.controllable,
            &self.observable,
            &self.attackable,
            &self.attacker_observable,
        ] {
            if let Some(e) = set.difference(&self.events).next() {
                return violation(e, NestingRule::UnknownEvent);
            }
        }
        if let Some(e) = self.controllable.difference(&self.observable).next() {
            return violation(e, NestingRule::ControllableNotObservable);
        }
        if let Some(e) = self.attackable.difference(&self.controllable).next() {
            return violation(e, NestingRule::AttackableNotControllable);
        }
        if let Some(e) = self.attackable.difference(&self.attacker_observable).next() {
            return violation(e, NestingRule::AttackableNotAttackerObservable);
        }
        if let Some(e) = self.attacker_observable.difference(&self.observable).next() {
            return violation(e, NestingRule::AttackerObservableNotObservable);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running_example() -> EventUniverse {
        EventUniverse::new(["a", "a'", "b", "c", "d", "d'"])
            .with_observable(["a", "a'", "c", "d", "d'"])
            .with_controllable(["a", "a'", "c", "d", "d'"])
            .with_attackable(["d", "d'"])
            .with_attacker_observable(["c", "d", "d'"])
    }

    #[test]
    fn running_example_nests() {
        let u = running_example();
        u.validate().unwrap();
        assert_eq!(u.unobservable(), to_set(["b"]));
        assert_eq!(u.uncontrollable(), to_set(["b"]));
    }

    #[test]
    fn attackable_must_be_attacker_observable() {
        let u = running_example().with_attacker_observable(["c", "d'"]);
        assert_eq!(
            u.validate(),
            Err(Error::AlphabetNesting {
                event: "d".into(),
                rule: NestingRule::AttackableNotAttackerObservable
            })
        );
    }

    #[test]
    fn controllable_must_be_observable() {
        let u = running_example().with_controllable(["a", "b"]);
        assert!(matches!(
            u.validate(),
            Err(Error::AlphabetNesting { rule: NestingRule::ControllableNotObservable, .. })
        ));
    }

    #[test]
    fn partitions_must_be_inside_sigma() {
        let u = running_example().with_observable(["a", "a'", "c", "d", "d'", "zz"]);
        assert!(matches!(
            u.validate(),
            Err(Error::AlphabetNesting { rule: NestingRule::UnknownEvent, .. })
        ));
    }
}
