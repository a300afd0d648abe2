//! Brute-force reference for attack pairs, `I` sets and `En` sets.
//!
//! Everything here works directly on strings: the closed behavior is
//! enumerated up to a length bound by stepping plant and supervisor side by
//! side, strings are grouped by the serialized attacker observation, and the
//! attack-pair conditions are tested on each group. Nothing from the
//! synthesis pipeline is used, so the two can be cross-checked.
//!
//! Results are exact only when every observation class is fully represented
//! by its strings within the bound. [`Oracle::certify_classes`] checks this
//! for all observations of short strings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::automata::{format_set, format_word, Event, EventSet, Fsa, StateId, Word};
use crate::error::{Error, Result};
use crate::supervisory::{format_observation, ObsLabel, SupervisorRealization};

/// Maximum number of closed-loop strings the oracle will enumerate.
pub const ORACLE_STRING_BUDGET: usize = 200_000;

/// A closed-loop string `s` and an attackable event σ such that `sσ` is
/// damaging and so is every plant-feasible `s'σ` with `s'` observation-equal
/// to `s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AttackPair {
    pub s: Vec<Event>,
    pub sigma: Event,
}

impl std::fmt::Display for AttackPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", format_word(&self.s), self.sigma)
    }
}

#[derive(Clone, Debug)]
struct Entry {
    s: Word<Event>,
    key: String,
    parent_key: Option<String>,
    q: StateId,
    x: StateId,
    /// `None` once the string has left the damage automaton's language.
    z: Option<StateId>,
}

/// Closed-loop strings up to a bound, grouped by observation.
#[derive(Clone, Debug)]
pub struct Oracle<'a> {
    g: &'a Fsa<Event>,
    sr: &'a SupervisorRealization,
    h: &'a Fsa<Event>,
    max_len: usize,
    entries: Vec<Entry>,
    by_string: BTreeMap<Word<Event>, usize>,
    classes: BTreeMap<String, Vec<usize>>,
}

/// Outcome of checking one candidate pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub valid: bool,
    /// A string `s'σ` that is plant-feasible but not damaging.
    pub counterexample: Option<Vec<Event>>,
    /// Condition on observation-equal strings was checked only up to this length.
    pub checked_up_to: usize,
}

impl<'a> Oracle<'a> {
    pub fn new(
        g: &'a Fsa<Event>,
        sr: &'a SupervisorRealization,
        h: &'a Fsa<Event>,
        max_len: usize,
    ) -> Result<Self> {
        let s = sr.fsa();
        let key_label = |e: &Event, x2: StateId| -> String {
            let enabled: EventSet = s.enabled(x2).cloned().collect();
            let shown = if sr.universe().is_attacker_observable(e) {
                e.name()
            } else {
                "ε"
            };
            format!("({shown},{})", format_set(&enabled))
        };

        let mut entries = vec![Entry {
            s: Vec::new(),
            key: String::new(),
            parent_key: None,
            q: g.initial(),
            x: s.initial(),
            z: Some(h.initial()),
        }];
        let mut frontier = 0..1;
        for _ in 0..max_len {
            let mut next = Vec::new();
            for i in frontier.clone() {
                let cur = &entries[i];
                for e in sr.universe().events() {
                    let (Some(q2), Some(x2)) = (g.step(cur.q, e), s.step(cur.x, e)) else {
                        continue;
                    };
                    let (key, parent_key) = if sr.universe().is_observable(e) {
                        (cur.key.clone() + &key_label(e, x2), Some(cur.key.clone()))
                    } else {
                        (cur.key.clone(), cur.parent_key.clone())
                    };
                    let mut word = cur.s.clone();
                    word.push(e.clone());
                    next.push(Entry {
                        s: word,
                        key,
                        parent_key,
                        q: q2,
                        x: x2,
                        z: cur.z.and_then(|z| h.step(z, e)),
                    });
                }
            }
            if entries.len() + next.len() > ORACLE_STRING_BUDGET {
                return Err(Error::OracleBudget(ORACLE_STRING_BUDGET));
            }
            let start = entries.len();
            entries.extend(next);
            frontier = start..entries.len();
        }

        let mut classes: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut by_string = BTreeMap::new();
        for (i, entry) in entries.iter().enumerate() {
            classes.entry(entry.key.clone()).or_default().push(i);
            by_string.insert(entry.s.clone(), i);
        }
        Ok(Oracle {
            g,
            sr,
            h,
            max_len,
            entries,
            by_string,
            classes,
        })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// All closed-loop strings of length at most `n` (n ≤ max_len), in
    /// length-lexicographic order.
    pub fn closed_strings(&self, n: usize) -> impl Iterator<Item = &Word<Event>> {
        self.entries.iter().map(|e| &e.s).filter(move |s| s.len() <= n)
    }

    pub fn contains(&self, s: &[Event]) -> bool {
        self.by_string.contains_key(s)
    }

    /// Serialized observation of a closed-loop string within the bound.
    pub fn observation_key(&self, s: &[Event]) -> Option<&str> {
        self.by_string.get(s).map(|&i| self.entries[i].key.as_str())
    }

    /// Whether `sσ` is damaging: plant-feasible and marked by the damage
    /// automaton.
    fn is_damaging(&self, e: &Entry, sigma: &Event) -> bool {
        self.g.step(e.q, sigma).is_some()
            && e.z
                .and_then(|z| self.h.step(z, sigma))
                .is_some_and(|z2| self.h.is_marked(z2))
    }

    fn check_class(&self, key: &str, sigma: &Event) -> Option<Vec<Event>> {
        for &i in &self.classes[key] {
            let e = &self.entries[i];
            if self.g.step(e.q, sigma).is_some() && !self.is_damaging(e, sigma) {
                let mut w = e.s.clone();
                w.push(sigma.clone());
                return Some(w);
            }
        }
        None
    }

    /// Both attack-pair conditions for `(s, σ)`; the second one over the
    /// enumerated members of the observation class of `s`.
    pub fn verify_attack_pair(&self, pair: &AttackPair) -> PairCheck {
        let invalid = |counterexample| PairCheck {
            valid: false,
            counterexample,
            checked_up_to: self.max_len,
        };
        let Some(&i) = self.by_string.get(&pair.s) else {
            return invalid(None);
        };
        let entry = &self.entries[i];
        if !self.sr.universe().is_attackable(&pair.sigma)
            || !self.is_damaging(entry, &pair.sigma)
        {
            let mut w = pair.s.clone();
            w.push(pair.sigma.clone());
            let feasible = self.g.step(entry.q, &pair.sigma).is_some();
            return invalid(feasible.then_some(w));
        }
        match self.check_class(&entry.key, &pair.sigma) {
            Some(w) => invalid(Some(w)),
            None => PairCheck {
                valid: true,
                counterexample: None,
                checked_up_to: self.max_len,
            },
        }
    }

    /// `I(w)`: attackable events that form an attack pair with some string
    /// observed as `w`.
    pub fn i_set(&self, key: &str) -> Result<EventSet> {
        let members = self
            .classes
            .get(key)
            .ok_or_else(|| Error::ObservationNotFeasible(display_key(key)))?;
        Ok(self
            .sr
            .universe()
            .attackable()
            .iter()
            .filter(|sigma| {
                members
                    .iter()
                    .any(|&i| self.is_damaging(&self.entries[i], sigma))
                    && self.check_class(key, sigma).is_none()
            })
            .cloned()
            .collect())
    }

    /// Every attack pair whose string is within the bound.
    pub fn attack_pairs(&self) -> BTreeSet<AttackPair> {
        self.attack_pairs_where(|_| true)
    }

    /// Attack pairs whose observation is also the observation of some string
    /// of length at most `n`.
    pub fn attack_pairs_observed_within(&self, n: usize) -> BTreeSet<AttackPair> {
        let keys = self.observations_within(n);
        self.attack_pairs_where(|key| keys.contains(key))
    }

    fn attack_pairs_where(&self, keep: impl Fn(&str) -> bool) -> BTreeSet<AttackPair> {
        let mut out = BTreeSet::new();
        for (key, members) in &self.classes {
            if !keep(key) {
                continue;
            }
            for sigma in self.i_set(key).expect("known class") {
                for &i in members {
                    let e = &self.entries[i];
                    if self.is_damaging(e, &sigma) {
                        out.insert(AttackPair {
                            s: e.s.clone(),
                            sigma: sigma.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// `En(s, σ)`: plant-feasible one-step σ-extensions `s'σ` of strings
    /// observation-equal to `s`, restricted to `|s'σ| ≤ n`.
    pub fn en(&self, pair: &AttackPair, n: usize) -> BTreeSet<Word<Event>> {
        let Some(key) = self.observation_key(&pair.s) else {
            return BTreeSet::new();
        };
        self.classes[key]
            .iter()
            .map(|&i| &self.entries[i])
            .filter(|e| e.s.len() < n && self.g.step(e.q, &pair.sigma).is_some())
            .map(|e| {
                let mut w = e.s.clone();
                w.push(pair.sigma.clone());
                w
            })
            .collect()
    }

    /// Observation keys of strings of length at most `n`.
    pub fn observations_within(&self, n: usize) -> BTreeSet<&str> {
        self.entries
            .iter()
            .filter(|e| e.s.len() <= n)
            .map(|e| e.key.as_str())
            .collect()
    }

    /// `(q, x, z)` states reached by the enumerated strings observed as `key`.
    fn reached(&self, key: &str) -> BTreeSet<(StateId, StateId, Option<StateId>)> {
        self.classes
            .get(key)
            .into_iter()
            .flatten()
            .map(|&i| {
                let e = &self.entries[i];
                (e.q, e.x, e.z)
            })
            .collect()
    }

    /// Checks that, for every observation of a string of length at most `n`,
    /// the enumerated class already reaches every state the unbounded class
    /// would: the reached set is closed under unobservable steps and contains
    /// the matching observable successors of the parent observation's set.
    /// Under this certificate the `I` sets of those observations are exact.
    pub fn certify_classes(&self, n: usize) -> std::result::Result<(), String> {
        let s = self.sr.fsa();
        let u = self.sr.universe();
        let step = |(q, x, z): (StateId, StateId, Option<StateId>), e: &Event| {
            let q2 = self.g.step(q, e)?;
            let x2 = s.step(x, e)?;
            Some((q2, x2, z.and_then(|z| self.h.step(z, e))))
        };
        for key in self.observations_within(n) {
            let reached = self.reached(key);
            for &t in &reached {
                for e in u.unobservable().iter() {
                    if let Some(t2) = step(t, e) {
                        if !reached.contains(&t2) {
                            return Err(format!(
                                "class {} misses an unobservable successor on {e}",
                                display_key(key)
                            ));
                        }
                    }
                }
            }
            let first = &self.entries[self.classes[key][0]];
            let Some(parent) = &first.parent_key else {
                if !reached.contains(&(self.g.initial(), s.initial(), Some(self.h.initial()))) {
                    return Err("initial class misses the initial state".into());
                }
                continue;
            };
            for &t in &self.reached(parent) {
                for e in u.observable().iter() {
                    let Some(t2) = step(t, e) else { continue };
                    let mut probe = parent.clone();
                    let enabled: EventSet = s.enabled(t2.1).cloned().collect();
                    let shown = if u.is_attacker_observable(e) { e.name() } else { "ε" };
                    probe += &format!("({shown},{})", format_set(&enabled));
                    if probe == key && !reached.contains(&t2) {
                        return Err(format!(
                            "class {} misses an observable successor on {e}",
                            display_key(key)
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn display_key(key: &str) -> String {
    if key.is_empty() {
        "ε".to_string()
    } else {
        key.to_string()
    }
}

/// Canonical key of an observation sequence; equal to the oracle's own
/// serialization of the same sequence.
pub fn observation_key(obs: &[ObsLabel]) -> String {
    if obs.is_empty() {
        String::new()
    } else {
        format_observation(obs)
    }
}

/// Attack pairs with `|s| ≤ max_len`.
pub fn oracle_attack_pairs(
    g: &Fsa<Event>,
    sr: &SupervisorRealization,
    h: &Fsa<Event>,
    max_len: usize,
) -> Result<BTreeSet<AttackPair>> {
    Ok(Oracle::new(g, sr, h, max_len)?.attack_pairs())
}

/// `I(obs)` over strings of length at most `max_len`.
pub fn oracle_i(
    g: &Fsa<Event>,
    sr: &SupervisorRealization,
    h: &Fsa<Event>,
    obs: &[ObsLabel],
    max_len: usize,
) -> Result<EventSet> {
    Oracle::new(g, sr, h, max_len)?.i_set(&observation_key(obs))
}

/// `En(s, σ)` over strings `s'σ` of length at most `max_len`.
pub fn oracle_en(
    g: &Fsa<Event>,
    sr: &SupervisorRealization,
    pair: &AttackPair,
    max_len: usize,
) -> Result<BTreeSet<Word<Event>>> {
    let no_damage = Fsa::new(sr.universe().events().iter().cloned(), "z");
    Ok(Oracle::new(g, sr, &no_damage, max_len)?.en(pair, max_len))
}

/// Checks both attack-pair conditions with observation-equal strings of
/// length at most `max_len`.
pub fn verify_attack_pair(
    g: &Fsa<Event>,
    sr: &SupervisorRealization,
    h: &Fsa<Event>,
    pair: &AttackPair,
    max_len: usize,
) -> Result<PairCheck> {
    Ok(Oracle::new(g, sr, h, max_len.max(pair.s.len()))?.verify_attack_pair(pair))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_example, word};
    use crate::supervisory::{attacker_observation, validate_supervisor};

    fn setup() -> (crate::fixtures::Example, SupervisorRealization) {
        let ex = running_example();
        let sr = validate_supervisor(&ex.supervisor, &ex.universe, false).unwrap();
        (ex, sr)
    }

    fn pair(s: &str, sigma: &str) -> AttackPair {
        AttackPair {
            s: word(s),
            sigma: Event::new(sigma),
        }
    }

    #[test]
    fn attack_pairs_of_running_example() {
        let (ex, sr) = setup();
        let pairs = oracle_attack_pairs(&ex.plant, &sr, &ex.damage, 4).unwrap();
        assert_eq!(pairs, [pair("a'", "d'"), pair("b a'", "d")].into());
    }

    #[test]
    fn damage_outside_the_plant_does_not_count() {
        let (ex, sr) = setup();
        let mut h = ex.damage.clone();
        let (z3, z5) = (h.state_id("3").unwrap(), h.state_id("5").unwrap());
        h.add_transition(z3, Event::new("a"), z5).unwrap();
        let pairs = oracle_attack_pairs(&ex.plant, &sr, &h, 4).unwrap();
        assert_eq!(pairs, [pair("a'", "d'"), pair("b a'", "d")].into());
        let o = Oracle::new(&ex.plant, &sr, &h, 4).unwrap();
        assert!(!o.verify_attack_pair(&pair("a'", "a")).valid);
    }

    #[test]
    fn empty_damage_has_no_pairs() {
        let (ex, sr) = setup();
        let h = Fsa::new(ex.universe.events().iter().cloned(), "z");
        assert!(oracle_attack_pairs(&ex.plant, &sr, &h, 6).unwrap().is_empty());
    }

    #[test]
    fn i_sets_of_running_example() {
        let (ex, sr) = setup();
        let obs = attacker_observation(&ex.plant, &sr, &word("a'")).unwrap();
        let i = oracle_i(&ex.plant, &sr, &ex.damage, &obs, 6).unwrap();
        assert_eq!(format_set(&i), "{d,d'}");
        let obs = attacker_observation(&ex.plant, &sr, &word("a' c")).unwrap();
        assert!(oracle_i(&ex.plant, &sr, &ex.damage, &obs, 6).unwrap().is_empty());
        let mut bogus = obs.clone();
        bogus.swap(0, 1);
        assert!(matches!(
            oracle_i(&ex.plant, &sr, &ex.damage, &bogus, 6),
            Err(Error::ObservationNotFeasible(_))
        ));
    }

    #[test]
    fn later_visits_of_the_same_states_are_not_attackable() {
        // after a full cycle the damage automaton has been left, so the same
        // plant/supervisor states no longer yield damaging extensions
        let (ex, sr) = setup();
        let obs = attacker_observation(&ex.plant, &sr, &word("a' c a a'")).unwrap();
        assert!(oracle_i(&ex.plant, &sr, &ex.damage, &obs, 8).unwrap().is_empty());
    }

    #[test]
    fn en_sets() {
        let (ex, sr) = setup();
        let en = oracle_en(&ex.plant, &sr, &pair("a'", "d'"), 4).unwrap();
        assert_eq!(en, [word("a' d'")].into());
        let en = oracle_en(&ex.plant, &sr, &pair("b a'", "d"), 4).unwrap();
        assert_eq!(en, [word("b a' d")].into());
    }

    #[test]
    fn verify_pairs() {
        let (ex, sr) = setup();
        let ok = verify_attack_pair(&ex.plant, &sr, &ex.damage, &pair("a'", "d'"), 6).unwrap();
        assert!(ok.valid);
        assert_eq!(ok.checked_up_to, 6);
        let bad = verify_attack_pair(&ex.plant, &sr, &ex.damage, &pair("a' c a b a'", "d"), 6)
            .unwrap();
        assert!(!bad.valid);
        assert_eq!(bad.counterexample, Some(word("a' c a b a' d")));
    }

    #[test]
    fn running_example_classes_are_certified() {
        let (ex, sr) = setup();
        let o = Oracle::new(&ex.plant, &sr, &ex.damage, 10).unwrap();
        o.certify_classes(6).unwrap();
        // `b a'` is missing from the class of `a'` at bound 1
        let short = Oracle::new(&ex.plant, &sr, &ex.damage, 1).unwrap();
        assert!(short.certify_classes(1).is_err());
    }

    #[test]
    fn keys_match_pipeline_serialization() {
        let (ex, sr) = setup();
        let o = Oracle::new(&ex.plant, &sr, &ex.damage, 6).unwrap();
        for s in o.closed_strings(6) {
            let obs = attacker_observation(&ex.plant, &sr, s).unwrap();
            assert_eq!(o.observation_key(s), Some(observation_key(&obs).as_str()));
        }
    }
}
