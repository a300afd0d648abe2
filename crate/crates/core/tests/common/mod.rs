//! Random automata as raw edge lists, plus reference simulators that work on
//! the edge lists directly. The library automata built from the same lists
//! are checked against these simulators.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use desa_core::automata::{determinize, reachable_trim, sync_product, EpsilonNfa};
use desa_core::{Event, Fsa};
use proptest::prelude::*;

pub const MAX_WORD: usize = 8;

#[derive(Clone, Debug)]
pub struct RawDfa {
    pub alphabet: Vec<&'static str>,
    pub n: usize,
    pub edges: BTreeMap<(usize, &'static str), usize>,
    pub marked: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct RawNfa {
    pub alphabet: Vec<&'static str>,
    pub n: usize,
    /// `None` labels are ε-moves.
    pub edges: Vec<(usize, Option<&'static str>, usize)>,
}

pub fn raw_dfa(alphabet: &'static [&'static str], max_states: usize) -> impl Strategy<Value = RawDfa> {
    (1..=max_states).prop_flat_map(move |n| {
        let slots = n * alphabet.len();
        (
            prop::collection::vec(prop::option::weighted(0.6, 0..n), slots),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(targets, marked)| {
                let mut edges = BTreeMap::new();
                for (i, t) in targets.into_iter().enumerate() {
                    if let Some(t) = t {
                        edges.insert((i / alphabet.len(), alphabet[i % alphabet.len()]), t);
                    }
                }
                RawDfa {
                    alphabet: alphabet.to_vec(),
                    n,
                    edges,
                    marked,
                }
            })
    })
}

pub fn raw_nfa(alphabet: &'static [&'static str], max_states: usize) -> impl Strategy<Value = RawNfa> {
    (1..=max_states).prop_flat_map(move |n| {
        let label = prop::option::weighted(0.75, prop::sample::select(alphabet.to_vec()));
        prop::collection::vec((0..n, label, 0..n), 0..=3 * n).prop_map(move |edges| RawNfa {
            alphabet: alphabet.to_vec(),
            n,
            edges,
        })
    })
}

fn name(i: usize) -> String {
    format!("s{i}")
}

pub fn build_dfa(raw: &RawDfa) -> Fsa<Event> {
    let mut fsa = Fsa::new(raw.alphabet.iter().map(|&a| Event::new(a)), name(0));
    for i in 1..raw.n {
        fsa.add_state(name(i)).unwrap();
    }
    for (&(s, a), &t) in &raw.edges {
        let (s, t) = (fsa.state_id(&name(s)).unwrap(), fsa.state_id(&name(t)).unwrap());
        fsa.add_transition(s, Event::new(a), t).unwrap();
    }
    for (i, &m) in raw.marked.iter().enumerate() {
        let q = fsa.state_id(&name(i)).unwrap();
        fsa.set_marked(q, m);
    }
    fsa
}

pub fn build_nfa(raw: &RawNfa) -> EpsilonNfa<Event> {
    let mut nfa = EpsilonNfa::new(raw.alphabet.iter().map(|&a| Event::new(a)), name(0));
    for i in 1..raw.n {
        nfa.add_state(name(i)).unwrap();
    }
    for &(s, a, t) in &raw.edges {
        let s = nfa.ensure_state(&name(s));
        let t = nfa.ensure_state(&name(t));
        nfa.add_transition(s, a.map(Event::new), t).unwrap();
    }
    nfa
}

/// Target state of `w` in the raw DFA, ignoring letters outside its alphabet.
pub fn dfa_run(raw: &RawDfa, w: &[&str]) -> Option<usize> {
    let mut q = 0;
    for a in w {
        if !raw.alphabet.contains(a) {
            continue;
        }
        q = *raw.edges.get(&(q, *raw.alphabet.iter().find(|x| *x == a)?))?;
    }
    Some(q)
}

/// Whether some path spells `w` in the raw ε-NFA.
pub fn nfa_generates(raw: &RawNfa, w: &[&str]) -> bool {
    let close = |mut set: BTreeSet<usize>| {
        loop {
            let more: BTreeSet<usize> = raw
                .edges
                .iter()
                .filter(|(s, a, _)| a.is_none() && set.contains(s))
                .map(|&(_, _, t)| t)
                .collect();
            if more.is_subset(&set) {
                return set;
            }
            set.extend(more);
        }
    };
    let mut cur = close(BTreeSet::from([0]));
    for a in w {
        let next: BTreeSet<usize> = raw
            .edges
            .iter()
            .filter(|(s, l, _)| cur.contains(s) && *l == Some(*a))
            .map(|&(_, _, t)| t)
            .collect();
        if next.is_empty() {
            return false;
        }
        cur = close(next);
    }
    true
}

pub fn all_words(alphabet: &[&'static str], max_len: usize) -> Vec<Vec<&'static str>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &a in alphabet {
                let mut v: Vec<&'static str> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn events(w: &[&str]) -> Vec<Event> {
    w.iter().map(|&a| Event::new(a)).collect()
}

/// Subset construction generates exactly the words the ε-NFA generates.
pub fn check_determinize(raw: &RawNfa) -> Result<(), String> {
    let det = determinize(&build_nfa(raw)).fsa;
    for w in all_words(&raw.alphabet, MAX_WORD) {
        if det.accepts(&events(&w)) != nfa_generates(raw, &w) {
            return Err(format!("determinize disagrees on {w:?} for {raw:?}"));
        }
    }
    Ok(())
}

/// Synchronous product generates the words whose projections both operands
/// generate, and marks the words both operands mark.
pub fn check_product(a: &RawDfa, b: &RawDfa) -> Result<(), String> {
    let p = sync_product(&build_dfa(a), &build_dfa(b));
    let mut alphabet: Vec<&'static str> = a.alphabet.clone();
    for x in &b.alphabet {
        if !alphabet.contains(x) {
            alphabet.push(x);
        }
    }
    for w in all_words(&alphabet, MAX_WORD) {
        let (ra, rb) = (dfa_run(a, &w), dfa_run(b, &w));
        let expected = ra.is_some() && rb.is_some();
        let expected_marked =
            expected && a.marked[ra.unwrap()] && b.marked[rb.unwrap()];
        let ew = events(&w);
        if p.accepts(&ew) != expected || p.accepts_marked(&ew) != expected_marked {
            return Err(format!("product disagrees on {w:?} for {a:?} x {b:?}"));
        }
    }
    Ok(())
}

/// Trimming keeps the generated and marked languages.
pub fn check_trim(raw: &RawDfa) -> Result<(), String> {
    let fsa = build_dfa(raw);
    let trimmed = reachable_trim(&fsa);
    if trimmed.num_states() > fsa.num_states() {
        return Err("trim added states".into());
    }
    for w in all_words(&raw.alphabet, MAX_WORD) {
        let ew = events(&w);
        if fsa.accepts(&ew) != trimmed.accepts(&ew)
            || fsa.accepts_marked(&ew) != trimmed.accepts_marked(&ew)
        {
            return Err(format!("trim changes the language on {w:?}"));
        }
    }
    Ok(())
}
