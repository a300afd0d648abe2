//! Deterministic partial automata, ε-NFAs, and the operations the synthesis
//! pipeline is assembled from: synchronous product, subset construction,
//! reachability trimming and bounded language enumeration.
//!
//! Automata are generic over their label type so that the same machinery
//! serves plain event alphabets as well as the composite labels of the
//! annotated supervisor, the generalized product and the attacker.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the length of enumerated strings.
pub const DEFAULT_ENUMERATION_GUARD: usize = 12;

/// An event name. Cheap to clone; ordered by name; serialized as a string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub struct Event(Arc<str>);

impl Event {
    pub fn new(name: impl AsRef<str>) -> Self {
        Event(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for Event {
    fn from(s: String) -> Self {
        Event(Arc::from(s))
    }
}

impl From<Event> for String {
    fn from(e: Event) -> Self {
        e.0.to_string()
    }
}

impl From<&str> for Event {
    fn from(s: &str) -> Self {
        Event::new(s)
    }
}

pub type EventSet = BTreeSet<Event>;

/// A finite string over some label type.
pub type Word<L> = Vec<L>;

/// Anything usable as a transition label.
pub trait Label: Clone + Ord + fmt::Debug + fmt::Display {}

impl<T> Label for T where T: Clone + Ord + fmt::Debug + fmt::Display {}

/// Renders a word as space-separated labels, `ε` for the empty word.
pub fn format_word<L: fmt::Display>(word: &[L]) -> String {
    if word.is_empty() {
        return "ε".to_string();
    }
    word.iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders a set as `{a,b,c}` in iteration order.
pub fn format_set<'a, L: fmt::Display + 'a>(items: impl IntoIterator<Item = &'a L>) -> String {
    let inner: Vec<String> = items.into_iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StateId(usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Unique state names with dense ids in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct StateTable {
    names: Vec<String>,
    lookup: BTreeMap<String, StateId>,
}

impl StateTable {
    fn insert(&mut self, name: String) -> Result<StateId> {
        if self.lookup.contains_key(&name) {
            return Err(Error::DuplicateState(name));
        }
        let id = StateId(self.names.len());
        self.lookup.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    fn ensure(&mut self, name: &str) -> (StateId, bool) {
        match self.lookup.get(name) {
            Some(&id) => (id, false),
            None => (self.insert(name.to_string()).expect("checked"), true),
        }
    }

    /// Inserts `base`, or `base#k` for the smallest free k when `base` is taken.
    fn insert_fresh(&mut self, base: String) -> StateId {
        if !self.lookup.contains_key(&base) {
            return self.insert(base).expect("checked");
        }
        let mut k = 1;
        loop {
            let candidate = format!("{base}#{k}");
            if !self.lookup.contains_key(&candidate) {
                return self.insert(candidate).expect("checked");
            }
            k += 1;
        }
    }

    fn len(&self) -> usize {
        self.names.len()
    }
}

/// A deterministic finite automaton with a partial transition function and
/// an optional marked (accepting) set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fsa<L> {
    states: StateTable,
    alphabet: BTreeSet<L>,
    delta: Vec<BTreeMap<L, StateId>>,
    initial: StateId,
    marked: BTreeSet<StateId>,
}

impl<L: Label> Fsa<L> {
    /// Creates an automaton whose only state is the initial one.
    pub fn new(alphabet: impl IntoIterator<Item = L>, initial: impl Into<String>) -> Self {
        let mut states = StateTable::default();
        let initial = states.insert(initial.into()).expect("empty table");
        Fsa {
            states,
            alphabet: alphabet.into_iter().collect(),
            delta: vec![BTreeMap::new()],
            initial,
            marked: BTreeSet::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let id = self.states.insert(name.into())?;
        self.delta.push(BTreeMap::new());
        Ok(id)
    }

    /// Returns the state called `name`, creating it if needed.
    pub fn ensure_state(&mut self, name: &str) -> StateId {
        let (id, created) = self.states.ensure(name);
        if created {
            self.delta.push(BTreeMap::new());
        }
        id
    }

    pub(crate) fn add_fresh_state(&mut self, base: String) -> StateId {
        let id = self.states.insert_fresh(base);
        self.delta.push(BTreeMap::new());
        id
    }

    pub fn add_transition(&mut self, from: StateId, label: L, to: StateId) -> Result<()> {
        self.check_state(from)?;
        self.check_state(to)?;
        if !self.alphabet.contains(&label) {
            return Err(Error::UnknownLabel(label.to_string()));
        }
        match self.delta[from.0].get(&label) {
            Some(&existing) if existing == to => Ok(()),
            Some(_) => Err(Error::Nondeterministic {
                state: self.name(from).to_string(),
                label: label.to_string(),
            }),
            None => {
                self.delta[from.0].insert(label, to);
                Ok(())
            }
        }
    }

    pub fn set_marked(&mut self, state: StateId, marked: bool) {
        if marked {
            self.marked.insert(state);
        } else {
            self.marked.remove(&state);
        }
    }

    fn check_state(&self, id: StateId) -> Result<()> {
        if id.0 < self.states.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(id.to_string()))
        }
    }

    pub fn alphabet(&self) -> &BTreeSet<L> {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn marked(&self) -> &BTreeSet<StateId> {
        &self.marked
    }

    pub fn is_marked(&self, state: StateId) -> bool {
        self.marked.contains(&state)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(BTreeMap::len).sum()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn name(&self, state: StateId) -> &str {
        &self.states.names[state.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.lookup.get(name).copied()
    }

    pub fn step(&self, state: StateId, label: &L) -> Option<StateId> {
        self.delta[state.0].get(label).copied()
    }

    /// Follows `word` from `from`; `None` as soon as a label is undefined.
    pub fn run<'a>(&self, from: StateId, word: impl IntoIterator<Item = &'a L>) -> Option<StateId>
    where
        L: 'a,
    {
        word.into_iter().try_fold(from, |q, l| self.step(q, l))
    }

    /// Membership in the closed behavior.
    pub fn accepts(&self, word: &[L]) -> bool {
        self.run(self.initial, word).is_some()
    }

    /// Membership in the marked behavior.
    pub fn accepts_marked(&self, word: &[L]) -> bool {
        self.run(self.initial, word)
            .is_some_and(|q| self.marked.contains(&q))
    }

    /// Transitions leaving `state`, in label order.
    pub fn outgoing(&self, state: StateId) -> impl Iterator<Item = (&L, StateId)> {
        self.delta[state.0].iter().map(|(l, &t)| (l, t))
    }

    pub fn enabled(&self, state: StateId) -> impl Iterator<Item = &L> {
        self.delta[state.0].keys()
    }

    /// All transitions ordered by source id, then label.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &L, StateId)> {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.iter().map(move |(l, &t)| (StateId(i), l, t)))
    }

    /// Every label of the alphabet is defined at every state.
    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(|m| m.len() == self.alphabet.len())
    }

    /// First `(state, label)` pair with no transition, if any.
    pub fn first_missing(&self) -> Option<(StateId, &L)> {
        self.states().find_map(|q| {
            self.alphabet
                .iter()
                .find(|l| !self.delta[q.0].contains_key(*l))
                .map(|l| (q, l))
        })
    }

    /// States reachable from the initial state, in id order.
    pub fn reachable(&self) -> BTreeSet<StateId> {
        let mut seen = BTreeSet::from([self.initial]);
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            for (_, t) in self.outgoing(q) {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Shortest word (ties broken by label order) from the initial state to any
    /// state satisfying `target`.
    pub fn shortest_word_to(&self, target: impl Fn(StateId) -> bool) -> Option<Word<L>> {
        let mut parent: BTreeMap<StateId, (StateId, L)> = BTreeMap::new();
        let mut seen = BTreeSet::from([self.initial]);
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            if target(q) {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, l)) = parent.get(&cur) {
                    word.push(l.clone());
                    cur = *p;
                }
                word.reverse();
                return Some(word);
            }
            for (l, t) in self.outgoing(q) {
                if seen.insert(t) {
                    parent.insert(t, (q, l.clone()));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Same states, names, initial and marked set over a new alphabet, with
    /// no transitions.
    pub(crate) fn with_states_of<M: Label>(&self, alphabet: BTreeSet<M>) -> Fsa<M> {
        Fsa {
            states: self.states.clone(),
            alphabet,
            delta: vec![BTreeMap::new(); self.states.len()],
            initial: self.initial,
            marked: self.marked.clone(),
        }
    }

    /// Relabels every transition; `f` must be injective on the alphabet.
    pub fn map_labels<M: Label>(&self, f: impl Fn(&L) -> M) -> Fsa<M> {
        Fsa {
            states: self.states.clone(),
            alphabet: self.alphabet.iter().map(&f).collect(),
            delta: self
                .delta
                .iter()
                .map(|m| m.iter().map(|(l, &t)| (f(l), t)).collect())
                .collect(),
            initial: self.initial,
            marked: self.marked.clone(),
        }
    }
}

/// A nondeterministic automaton with ε-moves. ε is kept apart from the
/// alphabet: it is represented by the dedicated `epsilon` edge table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonNfa<L> {
    states: StateTable,
    alphabet: BTreeSet<L>,
    edges: Vec<BTreeMap<L, BTreeSet<StateId>>>,
    epsilon: Vec<BTreeSet<StateId>>,
    initial: StateId,
}

impl<L: Label> EpsilonNfa<L> {
    pub fn new(alphabet: impl IntoIterator<Item = L>, initial: impl Into<String>) -> Self {
        let mut states = StateTable::default();
        let initial = states.insert(initial.into()).expect("empty table");
        EpsilonNfa {
            states,
            alphabet: alphabet.into_iter().collect(),
            edges: vec![BTreeMap::new()],
            epsilon: vec![BTreeSet::new()],
            initial,
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let id = self.states.insert(name.into())?;
        self.edges.push(BTreeMap::new());
        self.epsilon.push(BTreeSet::new());
        Ok(id)
    }

    pub fn ensure_state(&mut self, name: &str) -> StateId {
        let (id, created) = self.states.ensure(name);
        if created {
            self.edges.push(BTreeMap::new());
            self.epsilon.push(BTreeSet::new());
        }
        id
    }

    /// Adds `from --label--> to`; `None` is an ε-move.
    pub fn add_transition(&mut self, from: StateId, label: Option<L>, to: StateId) -> Result<()> {
        for s in [from, to] {
            if s.0 >= self.states.len() {
                return Err(Error::UnknownState(s.to_string()));
            }
        }
        match label {
            None => {
                self.epsilon[from.0].insert(to);
            }
            Some(l) => {
                if !self.alphabet.contains(&l) {
                    return Err(Error::UnknownLabel(l.to_string()));
                }
                self.edges[from.0].entry(l).or_default().insert(to);
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &BTreeSet<L> {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn name(&self, state: StateId) -> &str {
        &self.states.names[state.0]
    }

    pub fn epsilon_closure(&self, set: &BTreeSet<StateId>) -> BTreeSet<StateId> {
        let mut closure = set.clone();
        let mut stack: Vec<StateId> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &t in &self.epsilon[q.0] {
                if closure.insert(t) {
                    stack.push(t);
                }
            }
        }
        closure
    }

    /// Labelled successors of a set, ε-closure not applied.
    fn successors(&self, set: &BTreeSet<StateId>) -> BTreeMap<L, BTreeSet<StateId>> {
        let mut out: BTreeMap<L, BTreeSet<StateId>> = BTreeMap::new();
        for q in set {
            for (l, targets) in &self.edges[q.0] {
                out.entry(l.clone()).or_default().extend(targets.iter().copied());
            }
        }
        out
    }

    /// Direct simulation of the ε-NFA on `word` (closed behavior).
    pub fn accepts(&self, word: &[L]) -> bool {
        let mut current = self.epsilon_closure(&BTreeSet::from([self.initial]));
        for l in word {
            let next: BTreeSet<StateId> = current
                .iter()
                .filter_map(|q| self.edges[q.0].get(l))
                .flatten()
                .copied()
                .collect();
            if next.is_empty() {
                return false;
            }
            current = self.epsilon_closure(&next);
        }
        true
    }
}

/// Result of the subset construction: the deterministic automaton and, per
/// state, its members in the source ε-NFA (sorted by member name).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Determinized<L> {
    pub fsa: Fsa<L>,
    pub members: Vec<Vec<StateId>>,
}

/// Synchronous product. Shared labels fire only when defined on both sides,
/// private labels move their owner alone. Only reachable pairs are built;
/// a pair is marked when both components are.
pub fn sync_product<L: Label>(a: &Fsa<L>, b: &Fsa<L>) -> Fsa<L> {
    let alphabet: BTreeSet<L> = a.alphabet.union(&b.alphabet).cloned().collect();
    let pair_name = |p: (StateId, StateId)| format!("({},{})", a.name(p.0), b.name(p.1));

    let start = (a.initial, b.initial);
    let mut out = Fsa::new(alphabet.iter().cloned(), pair_name(start));
    let mut ids: BTreeMap<(StateId, StateId), StateId> = BTreeMap::from([(start, out.initial)]);
    let mut queue = VecDeque::from([start]);

    while let Some(pair) = queue.pop_front() {
        let src = ids[&pair];
        out.set_marked(src, a.is_marked(pair.0) && b.is_marked(pair.1));
        for l in &alphabet {
            let next_a = if a.alphabet.contains(l) { a.step(pair.0, l) } else { Some(pair.0) };
            let next_b = if b.alphabet.contains(l) { b.step(pair.1, l) } else { Some(pair.1) };
            let (Some(na), Some(nb)) = (next_a, next_b) else {
                continue;
            };
            let next = (na, nb);
            let dst = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    let id = out.add_fresh_state(pair_name(next));
                    ids.insert(next, id);
                    queue.push_back(next);
                    id
                }
            };
            out.add_transition(src, l.clone(), dst).expect("deterministic by construction");
        }
    }
    out
}

/// Subset construction with ε-closure. Result states are the nonempty
/// reachable subsets, named `{m1,m2,...}` with members sorted by name; the
/// empty subset is never materialized. States are numbered in breadth-first
/// order with labels explored in sorted order, so the output is reproducible.
pub fn determinize<L: Label>(n: &EpsilonNfa<L>) -> Determinized<L> {
    let canonical = |set: &BTreeSet<StateId>| -> Vec<StateId> {
        let mut v: Vec<StateId> = set.iter().copied().collect();
        v.sort_by(|x, y| n.name(*x).cmp(n.name(*y)));
        v
    };
    let subset_name = |members: &[StateId]| {
        let names: Vec<&str> = members.iter().map(|m| n.name(*m)).collect();
        format!("{{{}}}", names.join(","))
    };

    let start = n.epsilon_closure(&BTreeSet::from([n.initial]));
    let start_members = canonical(&start);
    let mut fsa = Fsa::new(n.alphabet.iter().cloned(), subset_name(&start_members));
    let mut members = vec![start_members];
    let mut ids: BTreeMap<BTreeSet<StateId>, StateId> = BTreeMap::from([(start.clone(), fsa.initial)]);
    let mut queue = VecDeque::from([start]);

    while let Some(set) = queue.pop_front() {
        let src = ids[&set];
        for (l, targets) in n.successors(&set) {
            let closed = n.epsilon_closure(&targets);
            let dst = match ids.get(&closed) {
                Some(&id) => id,
                None => {
                    let m = canonical(&closed);
                    let id = fsa.add_fresh_state(subset_name(&m));
                    members.push(m);
                    ids.insert(closed.clone(), id);
                    queue.push_back(closed);
                    id
                }
            };
            fsa.add_transition(src, l, dst).expect("deterministic by construction");
        }
    }
    Determinized { fsa, members }
}

/// All strings of the closed behavior up to `max_len`, length-lexicographic.
pub fn enumerate_language<L: Label>(a: &Fsa<L>, max_len: usize) -> Result<Vec<Word<L>>> {
    enumerate_language_guarded(a, max_len, DEFAULT_ENUMERATION_GUARD)
}

pub fn enumerate_language_guarded<L: Label>(
    a: &Fsa<L>,
    max_len: usize,
    guard: usize,
) -> Result<Vec<Word<L>>> {
    Ok(enumerate_with_states(a, max_len, guard)?
        .into_iter()
        .map(|(w, _)| w)
        .collect())
}

/// Marked strings up to `max_len`, length-lexicographic.
pub fn enumerate_marked<L: Label>(a: &Fsa<L>, max_len: usize) -> Result<Vec<Word<L>>> {
    Ok(enumerate_with_states(a, max_len, DEFAULT_ENUMERATION_GUARD)?
        .into_iter()
        .filter(|(_, q)| a.is_marked(*q))
        .map(|(w, _)| w)
        .collect())
}

fn enumerate_with_states<L: Label>(
    a: &Fsa<L>,
    max_len: usize,
    guard: usize,
) -> Result<Vec<(Word<L>, StateId)>> {
    if max_len > guard {
        return Err(Error::EnumerationGuard { requested: max_len, guard });
    }
    let mut out = vec![(Vec::new(), a.initial)];
    let mut level_start = 0;
    for _ in 0..max_len {
        let level_end = out.len();
        for i in level_start..level_end {
            let q = out[i].1;
            for (l, t) in a.outgoing(q) {
                let mut w = out[i].0.clone();
                w.push(l.clone());
                out.push((w, t));
            }
        }
        if out.len() == level_end {
            break;
        }
        level_start = level_end;
    }
    Ok(out)
}

/// Restriction to the states reachable from the initial state. Surviving
/// states keep their names and relative order.
pub fn reachable_trim<L: Label>(a: &Fsa<L>) -> Fsa<L> {
    let keep = a.reachable();
    if keep.len() == a.num_states() {
        return a.clone();
    }
    let mut out = Fsa::new(a.alphabet.iter().cloned(), a.name(a.initial));
    let mut map = BTreeMap::from([(a.initial, out.initial)]);
    for &q in &keep {
        if q != a.initial {
            map.insert(q, out.add_state(a.name(q)).expect("names are unique"));
        }
    }
    for &q in &keep {
        out.set_marked(map[&q], a.is_marked(q));
        for (l, t) in a.outgoing(q) {
            out.add_transition(map[&q], l.clone(), map[&t]).expect("copied from a");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> Event {
        Event::new(s)
    }

    fn sigma(names: &[&str]) -> Vec<Event> {
        names.iter().map(|n| ev(n)).collect()
    }

    fn word(s: &str) -> Vec<Event> {
        s.split_whitespace().map(ev).collect()
    }

    fn chain() -> Fsa<Event> {
        let mut a = Fsa::new(sigma(&["a", "b"]), "0");
        let s1 = a.add_state("1").unwrap();
        a.add_transition(a.initial(), ev("a"), s1).unwrap();
        a.add_transition(s1, ev("b"), a.initial()).unwrap();
        a
    }

    #[test]
    fn rejects_nondeterminism_and_unknown_labels() {
        let mut a = chain();
        let s2 = a.add_state("2").unwrap();
        let err = a.add_transition(a.initial(), ev("a"), s2).unwrap_err();
        assert!(matches!(err, Error::Nondeterministic { .. }));
        // re-adding the same edge is harmless
        let s1 = a.state_id("1").unwrap();
        a.add_transition(a.initial(), ev("a"), s1).unwrap();
        assert!(matches!(
            a.add_transition(s1, ev("z"), s2),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(a.add_state("1"), Err(Error::DuplicateState(_))));
    }

    #[test]
    fn product_with_universal_automaton_is_identity_on_language() {
        let g = chain();
        let mut all = Fsa::new(sigma(&["a", "b"]), "u");
        let u = all.initial();
        all.add_transition(u, ev("a"), u).unwrap();
        all.add_transition(u, ev("b"), u).unwrap();
        let p = sync_product(&all, &g);
        assert_eq!(
            enumerate_language(&p, 6).unwrap(),
            enumerate_language(&g, 6).unwrap()
        );
    }

    #[test]
    fn product_private_labels_interleave() {
        let mut a = Fsa::new(sigma(&["x"]), "0");
        let i = a.initial();
        a.add_transition(i, ev("x"), i).unwrap();
        let mut b = Fsa::new(sigma(&["y"]), "0");
        let j = b.add_state("1").unwrap();
        b.add_transition(b.initial(), ev("y"), j).unwrap();
        let p = sync_product(&a, &b);
        assert!(p.accepts(&word("x y x")));
        assert!(!p.accepts(&word("y y")));
        assert_eq!(p.num_states(), 2);
        assert_eq!(p.name(p.initial()), "(0,0)");
    }

    #[test]
    fn enumeration_is_length_lexicographic() {
        let mut a = Fsa::new(sigma(&["a", "b"]), "0");
        let i = a.initial();
        a.add_transition(i, ev("b"), i).unwrap();
        a.add_transition(i, ev("a"), i).unwrap();
        let words = enumerate_language(&a, 2).unwrap();
        let shown: Vec<String> = words.iter().map(|w| format_word(w)).collect();
        assert_eq!(shown, ["ε", "a", "b", "a a", "a b", "b a", "b b"]);
        assert_eq!(enumerate_language(&a, 0).unwrap(), vec![Vec::<Event>::new()]);
        assert!(matches!(
            enumerate_language(&a, 13),
            Err(Error::EnumerationGuard { requested: 13, guard: 12 })
        ));
    }

    #[test]
    fn trim_removes_isolated_state_only() {
        let a = chain();
        assert_eq!(reachable_trim(&a), a);
        let mut b = a.clone();
        let iso = b.add_state("iso").unwrap();
        b.add_transition(iso, ev("a"), iso).unwrap();
        let t = reachable_trim(&b);
        assert_eq!(t.num_states(), 2);
        assert!(t.state_id("iso").is_none());
        assert_eq!(enumerate_language(&t, 8).unwrap(), enumerate_language(&b, 8).unwrap());
    }

    #[test]
    fn determinize_deterministic_input_gives_singletons() {
        let g = chain();
        let mut n = EpsilonNfa::new(sigma(&["a", "b"]), "0");
        let s1 = n.add_state("1").unwrap();
        n.add_transition(n.initial(), Some(ev("a")), s1).unwrap();
        n.add_transition(s1, Some(ev("b")), n.initial()).unwrap();
        let d = determinize(&n);
        assert_eq!(d.fsa.num_states(), 2);
        assert!(d.members.iter().all(|m| m.len() == 1));
        assert_eq!(d.fsa.name(d.fsa.initial()), "{0}");
        assert_eq!(enumerate_language(&d.fsa, 8).unwrap(), enumerate_language(&g, 8).unwrap());
    }

    #[test]
    fn determinize_closes_over_epsilon() {
        let mut n = EpsilonNfa::new(sigma(&["a"]), "p");
        let q = n.add_state("q").unwrap();
        let r = n.add_state("r").unwrap();
        n.add_transition(n.initial(), None, q).unwrap();
        n.add_transition(q, Some(ev("a")), r).unwrap();
        n.add_transition(n.initial(), Some(ev("a")), n.initial()).unwrap();
        let d = determinize(&n);
        assert_eq!(d.fsa.name(d.fsa.initial()), "{p,q}");
        let after_a = d.fsa.step(d.fsa.initial(), &ev("a")).unwrap();
        assert_eq!(d.fsa.name(after_a), "{p,q,r}");
        assert!(n.accepts(&word("a a a")));
        assert!(d.fsa.accepts(&word("a a a")));
    }

    #[test]
    fn shortest_word_prefers_label_order() {
        let mut a = Fsa::new(sigma(&["a", "b"]), "0");
        let t = a.add_state("t").unwrap();
        a.add_transition(a.initial(), ev("b"), t).unwrap();
        a.add_transition(a.initial(), ev("a"), t).unwrap();
        assert_eq!(a.shortest_word_to(|q| q == t), Some(word("a")));
        assert_eq!(a.shortest_word_to(|q| q == a.initial()), Some(vec![]));
    }
}
