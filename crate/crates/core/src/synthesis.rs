//! Synthesis of the supremal successful enabling actuator attacker.
//!
//! The pipeline has three stages:
//!
//! 1. [`annotate_supervisor`] relabels every observable supervisor edge
//!    `(x, σ, x')` with the command issued on arrival, `(σ, γ(x'))`.
//! 2. [`generalized_product`] composes plant, annotated supervisor and the
//!    (complete) damage automaton. Its composite labels pair each plant event
//!    with what the attacker sees; one-step attacks on disabled attackable
//!    events lead to the verdict states ⊤ (damaging) or ⊥ (detected, harmless).
//! 3. [`subset_with_labels`] determinizes the product over the attacker's
//!    observation alphabet, treating unobservable steps as ε, and labels every
//!    subset `y` with `Lf(y)`: the attackable events that reach ⊤ from some
//!    member and reach nothing but ⊤ from every member where they are defined.
//!
//! The resulting Moore machine decides attackability (some reachable `Lf(y)`
//! is nonempty) and, combined with the supervisor's last command, yields the
//! supremal attack decision for every observation sequence.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::automata::{determinize, format_word, EpsilonNfa, Event, EventSet, Fsa, StateId};
use crate::error::{Error, Result};
use crate::oracle::AttackPair;
use crate::supervisory::{
    check_alphabet, format_observation, ControlCommand, ObsLabel, SupervisorRealization,
};
use crate::universe::EventUniverse;

/// Edge label of the annotated supervisor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnnotatedLabel {
    /// Observable event with the command issued after it.
    Observed { event: Event, command: ControlCommand },
    /// Unobservable event, carried over unchanged.
    Silent(Event),
}

impl AnnotatedLabel {
    pub fn event(&self) -> &Event {
        match self {
            AnnotatedLabel::Observed { event, .. } | AnnotatedLabel::Silent(event) => event,
        }
    }
}

impl fmt::Display for AnnotatedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnnotatedLabel::Observed { event, command } => write!(f, "({event},{command})"),
            AnnotatedLabel::Silent(event) => write!(f, "{event}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedSupervisor {
    fsa: Fsa<AnnotatedLabel>,
    universe: EventUniverse,
    initial_command: ControlCommand,
    // per state: event -> (label, successor)
    by_event: Vec<BTreeMap<Event, (AnnotatedLabel, StateId)>>,
}

impl AnnotatedSupervisor {
    pub fn fsa(&self) -> &Fsa<AnnotatedLabel> {
        &self.fsa
    }

    pub fn universe(&self) -> &EventUniverse {
        &self.universe
    }

    pub fn initial_command(&self) -> &ControlCommand {
        &self.initial_command
    }

    /// ζ(x, σ) together with its annotated label.
    pub fn step_event(&self, x: StateId, event: &Event) -> Option<&(AnnotatedLabel, StateId)> {
        self.by_event[x.index()].get(event)
    }

    /// Drops the annotations, recovering the plain supervisor automaton.
    pub fn strip(&self) -> Fsa<Event> {
        let mut out = self.fsa.with_states_of(self.universe.events().clone());
        for (x, l, t) in self.fsa.transitions() {
            out.add_transition(x, l.event().clone(), t)
                .expect("one edge per event");
        }
        out
    }
}

pub fn annotate_supervisor(sr: &SupervisorRealization) -> AnnotatedSupervisor {
    let s = sr.fsa();
    let u = sr.universe();
    let label_for = |x: StateId, e: &Event| -> AnnotatedLabel {
        let target = s.step(x, e).expect("edge exists");
        if u.is_observable(e) {
            AnnotatedLabel::Observed {
                event: e.clone(),
                command: sr.command_at(target),
            }
        } else {
            AnnotatedLabel::Silent(e.clone())
        }
    };
    let alphabet: BTreeSet<AnnotatedLabel> = s
        .transitions()
        .map(|(x, e, _)| label_for(x, e))
        .collect();
    let mut fsa = s.with_states_of(alphabet);
    let mut by_event = vec![BTreeMap::new(); s.num_states()];
    for (x, e, t) in s.transitions() {
        let label = label_for(x, e);
        fsa.add_transition(x, label.clone(), t)
            .expect("one label per supervisor edge");
        by_event[x.index()].insert(e.clone(), (label, t));
    }
    AnnotatedSupervisor {
        fsa,
        universe: u.clone(),
        initial_command: sr.initial_command(),
        by_event,
    }
}

/// Completes `h` with a fresh unmarked sink (the dump state) absorbing every
/// missing transition. A complete `h` is returned unchanged.
pub fn complete_damage_automaton(h: &Fsa<Event>) -> Fsa<Event> {
    if h.is_complete() {
        return h.clone();
    }
    let numeric_max = h
        .states()
        .map(|q| h.name(q).parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .ok()
        .and_then(|v| v.into_iter().max());
    let base = match numeric_max {
        Some(n) => (n + 1).to_string(),
        None => "dump".to_string(),
    };
    let mut out = h.clone();
    let dump = out.add_fresh_state(base);
    let alphabet: Vec<Event> = h.alphabet().iter().cloned().collect();
    for q in out.states().collect::<Vec<_>>() {
        for e in &alphabet {
            if out.step(q, e).is_none() {
                out.add_transition(q, e.clone(), dump).expect("missing edge");
            }
        }
    }
    out
}

/// Strict mode: rejects a damage automaton that is not complete.
pub fn require_complete_damage(h: &Fsa<Event>) -> Result<()> {
    match h.first_missing() {
        None => Ok(()),
        Some((q, e)) => Err(Error::IncompleteDamage {
            state: h.name(q).to_string(),
            event: e.to_string(),
        }),
    }
}

/// Edge label of the generalized product.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GpLabel {
    /// Supervisor-observable plant event and the attacker's observation of it.
    Observed { event: Event, label: ObsLabel },
    /// Unobservable plant event; the attacker sees nothing.
    Silent(Event),
    /// A disabled attackable event fired because of an attack.
    Attack(Event),
}

impl GpLabel {
    pub fn event(&self) -> &Event {
        match self {
            GpLabel::Observed { event, .. } | GpLabel::Silent(event) | GpLabel::Attack(event) => {
                event
            }
        }
    }
}

impl fmt::Display for GpLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GpLabel::Observed { event, label } => write!(f, "({event},{label})"),
            GpLabel::Silent(event) => write!(f, "({event},ε)"),
            GpLabel::Attack(event) => write!(f, "{event}"),
        }
    }
}

/// `(q, x, z)` plant/supervisor/damage state triple.
pub type Triple = (StateId, StateId, StateId);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedProduct {
    fsa: Fsa<GpLabel>,
    components: Vec<Option<Triple>>,
    bottom: StateId,
    top: StateId,
    universe: EventUniverse,
    initial_command: ControlCommand,
}

impl GeneralizedProduct {
    pub fn fsa(&self) -> &Fsa<GpLabel> {
        &self.fsa
    }

    /// ⊥: the attack fired a non-damaging string and was detected.
    pub fn bottom(&self) -> StateId {
        self.bottom
    }

    /// ⊤: the attack fired a damaging string.
    pub fn top(&self) -> StateId {
        self.top
    }

    /// Component states of `v`, `None` for ⊥ and ⊤.
    pub fn triple(&self, v: StateId) -> Option<Triple> {
        self.components[v.index()]
    }

    pub fn universe(&self) -> &EventUniverse {
        &self.universe
    }

    pub fn initial_command(&self) -> &ControlCommand {
        &self.initial_command
    }

    /// Where attacking with `sigma` from `v` leads, if the attack is possible.
    pub fn attack(&self, v: StateId, sigma: &Event) -> Option<StateId> {
        self.fsa.step(v, &GpLabel::Attack(sigma.clone()))
    }
}

/// Builds the reachable part of `GP(G, S^A, H)`; `h` must be complete.
///
/// Fails with [`Error::DamageOverlapsClosedLoop`] when some string of the
/// closed loop is already damaging, reporting the shortest such string.
pub fn generalized_product(
    g: &Fsa<Event>,
    sa: &AnnotatedSupervisor,
    h: &Fsa<Event>,
) -> Result<GeneralizedProduct> {
    let u = &sa.universe;
    check_alphabet("plant", g, u)?;
    check_alphabet("damage", h, u)?;
    require_complete_damage(h)?;

    let start: Triple = (g.initial(), sa.fsa.initial(), h.initial());
    let mut order = vec![start];
    let mut index: BTreeMap<Triple, usize> = BTreeMap::from([(start, 0)]);
    let mut parent: Vec<Option<(usize, Event)>> = vec![None];
    let mut edges: Vec<(usize, GpLabel, Option<usize>, bool)> = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(i) = queue.pop_front() {
        let (q, x, z) = order[i];
        if h.is_marked(z) {
            let mut word = Vec::new();
            let mut cur = i;
            while let Some((p, e)) = &parent[cur] {
                word.push(e.clone());
                cur = *p;
            }
            word.reverse();
            return Err(Error::DamageOverlapsClosedLoop(format_word(&word)));
        }
        for (e, q2) in g.outgoing(q) {
            let z2 = h.step(z, e).expect("damage automaton is complete");
            match sa.step_event(x, e) {
                Some((annotated, x2)) => {
                    let label = match annotated {
                        AnnotatedLabel::Observed { command, .. } => GpLabel::Observed {
                            event: e.clone(),
                            label: ObsLabel::observe(u, e, command.clone()),
                        },
                        AnnotatedLabel::Silent(_) => GpLabel::Silent(e.clone()),
                    };
                    let next = (q2, *x2, z2);
                    let j = *index.entry(next).or_insert_with(|| {
                        order.push(next);
                        parent.push(Some((i, e.clone())));
                        queue.push_back(order.len() - 1);
                        order.len() - 1
                    });
                    edges.push((i, label, Some(j), false));
                }
                None if u.is_attackable(e) => {
                    edges.push((i, GpLabel::Attack(e.clone()), None, h.is_marked(z2)));
                }
                None => {}
            }
        }
    }

    let alphabet: BTreeSet<GpLabel> = edges.iter().map(|(_, l, _, _)| l.clone()).collect();
    let name = |t: &Triple| format!("({},{},{})", g.name(t.0), sa.fsa.name(t.1), h.name(t.2));
    let mut fsa = Fsa::new(alphabet, name(&order[0]));
    let mut ids = vec![fsa.initial()];
    for t in &order[1..] {
        ids.push(fsa.add_fresh_state(name(t)));
    }
    let bottom = fsa.add_fresh_state("⊥".to_string());
    let top = fsa.add_fresh_state("⊤".to_string());
    fsa.set_marked(top, true);
    for (i, label, j, damaging) in edges {
        let dst = match j {
            Some(j) => ids[j],
            None if damaging => top,
            None => bottom,
        };
        fsa.add_transition(ids[i], label, dst).expect("deterministic by construction");
    }

    let mut components: Vec<Option<Triple>> = order.into_iter().map(Some).collect();
    components.extend([None, None]);
    Ok(GeneralizedProduct {
        fsa,
        components,
        bottom,
        top,
        universe: u.clone(),
        initial_command: sa.initial_command.clone(),
    })
}

/// `SUB(GP(G, S^A, H))` with its labeling `Lf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreAttacker {
    fsa: Fsa<ObsLabel>,
    members: Vec<Vec<StateId>>,
    member_names: Vec<Vec<String>>,
    lf: Vec<EventSet>,
    initial_command: ControlCommand,
    attackable: EventSet,
}

impl MooreAttacker {
    pub fn fsa(&self) -> &Fsa<ObsLabel> {
        &self.fsa
    }

    /// Members of `y` as generalized-product states, sorted by name.
    pub fn members(&self, y: StateId) -> &[StateId] {
        &self.members[y.index()]
    }

    pub fn member_names(&self, y: StateId) -> &[String] {
        &self.member_names[y.index()]
    }

    pub fn lf(&self, y: StateId) -> &EventSet {
        &self.lf[y.index()]
    }

    pub fn initial_command(&self) -> &ControlCommand {
        &self.initial_command
    }

    pub fn attackable(&self) -> &EventSet {
        &self.attackable
    }

    /// Δ^SUB(y0, obs).
    pub fn run(&self, obs: &[ObsLabel]) -> Option<StateId> {
        self.fsa.run(self.fsa.initial(), obs)
    }
}

/// Subset construction of the generalized product over the attacker's
/// observation alphabet, followed by the `Lf` labeling.
pub fn subset_with_labels(gp: &GeneralizedProduct) -> MooreAttacker {
    let gp_fsa = &gp.fsa;
    let obs_alphabet: BTreeSet<ObsLabel> = gp_fsa
        .alphabet()
        .iter()
        .filter_map(|l| match l {
            GpLabel::Observed { label, .. } => Some(label.clone()),
            _ => None,
        })
        .collect();

    // GPS²: drop ⊥/⊤ and attack edges, keep the observation component,
    // unobservable steps become ε-moves. Triple ids coincide with GP ids.
    let mut nfa = EpsilonNfa::new(obs_alphabet, gp_fsa.name(gp_fsa.initial()));
    let triples: Vec<StateId> = gp_fsa.states().filter(|v| gp.triple(*v).is_some()).collect();
    for &v in &triples[1..] {
        nfa.add_state(gp_fsa.name(v)).expect("unique names");
    }
    for (v, label, t) in gp_fsa.transitions() {
        let (from, to) = (v, t);
        match label {
            GpLabel::Observed { label, .. } => nfa.add_transition(from, Some(label.clone()), to),
            GpLabel::Silent(_) => nfa.add_transition(from, None, to),
            GpLabel::Attack(_) => Ok(()),
        }
        .expect("triple states only");
    }

    let det = determinize(&nfa);
    let attackable = gp.universe.attackable().clone();
    let lf: Vec<EventSet> = det
        .members
        .iter()
        .map(|members| {
            attackable
                .iter()
                .filter(|sigma| {
                    let outcomes: Vec<StateId> =
                        members.iter().filter_map(|&v| gp.attack(v, sigma)).collect();
                    outcomes.contains(&gp.top) && outcomes.iter().all(|&o| o == gp.top)
                })
                .cloned()
                .collect()
        })
        .collect();
    let member_names = det
        .members
        .iter()
        .map(|m| m.iter().map(|&v| gp_fsa.name(v).to_string()).collect())
        .collect();

    MooreAttacker {
        fsa: det.fsa,
        members: det.members,
        member_names,
        lf,
        initial_command: gp.initial_command.clone(),
        attackable,
    }
}

/// Evidence of attackability: the shortest observation sequence reaching a
/// subset state with nonempty `Lf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackWitness {
    pub observation: Vec<ObsLabel>,
    pub state: StateId,
    /// Smallest event of `attacked`.
    pub event: Event,
    /// `Lf` at the witness state.
    pub attacked: EventSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Attackable(AttackWitness),
    NotAttackable,
}

impl Verdict {
    pub fn is_attackable(&self) -> bool {
        matches!(self, Verdict::Attackable(_))
    }

    pub fn witness(&self) -> Option<&AttackWitness> {
        match self {
            Verdict::Attackable(w) => Some(w),
            Verdict::NotAttackable => None,
        }
    }
}

/// Attackable iff a reachable subset state has nonempty `Lf`. The witness is
/// found breadth-first, ties broken by label order.
pub fn is_attackable(m: &MooreAttacker) -> Verdict {
    let Some(observation) = m.fsa.shortest_word_to(|y| !m.lf[y.index()].is_empty()) else {
        return Verdict::NotAttackable;
    };
    let state = m.run(&observation).expect("path found by search");
    let attacked = m.lf(state).clone();
    Verdict::Attackable(AttackWitness {
        observation,
        event: attacked.first().expect("nonempty").clone(),
        state,
        attacked,
    })
}

/// A concrete attack pair `(s, σ)` behind the witness: `s` is a shortest
/// closed-loop string with the witness observation that ends in a member
/// from which attacking with σ reaches ⊤.
pub fn extract_attack_pair(m: &MooreAttacker, gp: &GeneralizedProduct) -> Result<AttackPair> {
    let Verdict::Attackable(w) = is_attackable(m) else {
        return Err(Error::NotAttackable);
    };
    let obs = &w.observation;
    let start = (gp.fsa.initial(), 0usize);
    let mut parent: BTreeMap<(StateId, usize), ((StateId, usize), Event)> = BTreeMap::new();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(node @ (v, pos)) = queue.pop_front() {
        if pos == obs.len() && gp.attack(v, &w.event) == Some(gp.top) {
            let mut s = Vec::new();
            let mut cur = node;
            while let Some((p, e)) = parent.get(&cur) {
                s.push(e.clone());
                cur = *p;
            }
            s.reverse();
            return Ok(AttackPair {
                s,
                sigma: w.event.clone(),
            });
        }
        for (label, t) in gp.fsa.outgoing(v) {
            let next = match label {
                GpLabel::Silent(_) => (t, pos),
                GpLabel::Observed { label, .. } if obs.get(pos) == Some(label) => (t, pos + 1),
                _ => continue,
            };
            if seen.insert(next) {
                parent.insert(next, (node, label.event().clone()));
                queue.push_back(next);
            }
        }
    }
    unreachable!("every member of a reachable subset has a witnessing string")
}

/// A^sup(obs) = (γ_last ∩ Σc,A) ∪ Lf(Δ^SUB(y0, obs)), where γ_last is the
/// command carried by the last label, or V(ε) for the empty sequence.
pub fn supremal_attack_decision(m: &MooreAttacker, obs: &[ObsLabel]) -> Result<EventSet> {
    let y = m
        .run(obs)
        .ok_or_else(|| Error::ObservationNotFeasible(format_observation(obs)))?;
    let last = obs.last().map_or(&m.initial_command, |l| &l.command);
    let mut decision: EventSet = last
        .events()
        .intersection(&m.attackable)
        .cloned()
        .collect();
    decision.extend(m.lf(y).iter().cloned());
    Ok(decision)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Reject a partial damage automaton instead of completing it.
    pub strict_damage: bool,
}

/// Every intermediate artifact of one synthesis run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synthesis {
    pub annotated: AnnotatedSupervisor,
    /// The completed damage automaton.
    pub damage: Fsa<Event>,
    pub product: GeneralizedProduct,
    pub attacker: MooreAttacker,
    pub verdict: Verdict,
}

impl Synthesis {
    pub fn attack_pair(&self) -> Result<AttackPair> {
        extract_attack_pair(&self.attacker, &self.product)
    }
}

/// Runs the whole pipeline on a plant, a validated supervisor and a damage
/// automaton.
pub fn synthesize(
    g: &Fsa<Event>,
    sr: &SupervisorRealization,
    h: &Fsa<Event>,
    options: SynthesisOptions,
) -> Result<Synthesis> {
    check_alphabet("damage", h, sr.universe())?;
    let damage = if options.strict_damage {
        require_complete_damage(h)?;
        h.clone()
    } else {
        complete_damage_automaton(h)
    };
    let annotated = annotate_supervisor(sr);
    let product = generalized_product(g, &annotated, &damage)?;
    let attacker = subset_with_labels(&product);
    let verdict = is_attackable(&attacker);
    Ok(Synthesis {
        annotated,
        damage,
        product,
        attacker,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{enumerate_language, enumerate_marked, format_set};
    use crate::fixtures::{running_example, word};
    use crate::supervisory::{attacker_observation, validate_supervisor};

    fn run_example() -> (crate::fixtures::Example, SupervisorRealization, Synthesis) {
        let ex = running_example();
        let sr = validate_supervisor(&ex.supervisor, &ex.universe, false).unwrap();
        let syn = synthesize(&ex.plant, &sr, &ex.damage, SynthesisOptions::default()).unwrap();
        (ex, sr, syn)
    }

    #[test]
    fn annotation_carries_successor_commands() {
        let (_, sr, syn) = run_example();
        let sa = syn.annotated.fsa();
        let shown: Vec<String> = sa
            .transitions()
            .map(|(x, l, t)| format!("{} {} {}", sa.name(x), l, sa.name(t)))
            .collect();
        assert_eq!(
            shown,
            [
                "0 (a',{b,c}) 3",
                "0 b 0",
                "3 (c,{a,b}) 5",
                "3 b 3",
                "5 (a,{a',b}) 0",
                "5 b 5",
            ]
        );
        assert_eq!(&syn.annotated.strip(), sr.fsa());
    }

    #[test]
    fn permissive_supervisor_annotates_with_full_alphabet() {
        let ex = running_example();
        let mut s = Fsa::new(ex.universe.events().iter().cloned(), "x");
        let x = s.initial();
        for e in ex.universe.events() {
            s.add_transition(x, e.clone(), x).unwrap();
        }
        let sr = validate_supervisor(&s, &ex.universe, false).unwrap();
        let sa = annotate_supervisor(&sr);
        let all = format_set(ex.universe.events());
        for (_, l, _) in sa.fsa().transitions() {
            if let AnnotatedLabel::Observed { command, .. } = l {
                assert_eq!(command.to_string(), all);
            }
        }
    }

    #[test]
    fn damage_completion_adds_numbered_dump() {
        let ex = running_example();
        assert!(require_complete_damage(&ex.damage).is_err());
        let h = complete_damage_automaton(&ex.damage);
        let dump = h.state_id("6").expect("dump state named 6");
        assert!(h.is_complete());
        assert!(!h.is_marked(dump));
        assert_eq!(
            enumerate_marked(&h, 4).unwrap(),
            enumerate_marked(&ex.damage, 4).unwrap()
        );
        assert_eq!(complete_damage_automaton(&h), h);
        let shown: Vec<String> = enumerate_marked(&h, 4)
            .unwrap()
            .iter()
            .map(|w| format_word(w))
            .collect();
        assert_eq!(shown, ["a' d'", "b a' d"]);
    }

    #[test]
    fn damage_completion_with_no_marked_states() {
        let mut h = Fsa::new([Event::new("a")], "p");
        let q = h.add_state("q").unwrap();
        h.add_transition(h.initial(), Event::new("a"), q).unwrap();
        let c = complete_damage_automaton(&h);
        assert_eq!(c.state_id("dump").map(StateId::index), Some(2));
        assert!(c.marked().is_empty());
        assert_eq!(enumerate_language(&c, 5).unwrap().len(), 6);
    }

    #[test]
    fn generalized_product_of_running_example() {
        let (_, _, syn) = run_example();
        let gp = &syn.product;
        let f = gp.fsa();
        for name in ["(3,3,3)", "(2,3,4)"] {
            let v = f.state_id(name).unwrap();
            let attacks: Vec<String> = f
                .outgoing(v)
                .filter(|(l, _)| matches!(l, GpLabel::Attack(_)))
                .map(|(l, t)| format!("{l}->{}", f.name(t)))
                .collect();
            let expected = if name == "(3,3,3)" { "d'->⊤" } else { "d->⊤" };
            assert_eq!(attacks, [expected]);
        }
        // after the loop back through `a`, the damage automaton sits in its dump
        let v = f.state_id("(2,3,6)").unwrap();
        assert_eq!(gp.attack(v, &Event::new("d")), Some(gp.bottom()));
        assert!(f.states().all(|v| !f.name(v).starts_with("(4,")));
    }

    #[test]
    fn no_attackable_events_means_no_verdict_edges() {
        let mut ex = running_example();
        ex.universe = ex.universe.clone().with_attackable(Vec::<&str>::new());
        let sr = validate_supervisor(&ex.supervisor, &ex.universe, false).unwrap();
        let syn = synthesize(&ex.plant, &sr, &ex.damage, SynthesisOptions::default()).unwrap();
        let f = syn.product.fsa();
        assert!(f.transitions().all(|(_, _, t)| t != syn.product.top() && t != syn.product.bottom()));
        assert_eq!(syn.verdict, Verdict::NotAttackable);
        assert!(matches!(syn.attack_pair(), Err(Error::NotAttackable)));
    }

    #[test]
    fn overlap_with_closed_loop_is_rejected() {
        let ex = running_example();
        let sr = validate_supervisor(&ex.supervisor, &ex.universe, false).unwrap();
        let mut h = ex.damage.clone();
        let z3 = h.state_id("3").unwrap();
        h.set_marked(z3, true);
        let err = synthesize(&ex.plant, &sr, &h, SynthesisOptions::default()).unwrap_err();
        assert_eq!(err, Error::DamageOverlapsClosedLoop("a'".into()));
    }

    #[test]
    fn strict_mode_rejects_partial_damage() {
        let ex = running_example();
        let sr = validate_supervisor(&ex.supervisor, &ex.universe, false).unwrap();
        let err = synthesize(&ex.plant, &sr, &ex.damage, SynthesisOptions { strict_damage: true })
            .unwrap_err();
        assert!(matches!(err, Error::IncompleteDamage { .. }));
    }

    #[test]
    fn subset_construction_of_running_example() {
        let (ex, sr, syn) = run_example();
        let m = &syn.attacker;
        assert_eq!(m.fsa().num_states(), 5);
        assert_eq!(m.fsa().name(m.fsa().initial()), "{(0,0,0),(1,0,1)}");
        let obs = attacker_observation(&ex.plant, &sr, &word("a'")).unwrap();
        let y = m.run(&obs).unwrap();
        assert_eq!(m.member_names(y), ["(2,3,4)", "(3,3,3)"]);
        assert_eq!(format_set(m.lf(y)), "{d,d'}");
        let labelled: Vec<StateId> = m.fsa().states().filter(|y| !m.lf(*y).is_empty()).collect();
        assert_eq!(labelled, [y]);
    }

    #[test]
    fn verdict_and_witness_of_running_example() {
        let (_, _, syn) = run_example();
        let Verdict::Attackable(w) = &syn.verdict else {
            panic!("running example is attackable")
        };
        assert_eq!(format_observation(&w.observation), "(ε,{b,c})");
        assert_eq!(w.event, Event::new("d"));
        let pair = syn.attack_pair().unwrap();
        assert_eq!((pair.s, pair.sigma), (word("b a'"), Event::new("d")));
    }

    #[test]
    fn supremal_decision_of_running_example() {
        let (ex, sr, syn) = run_example();
        let obs = attacker_observation(&ex.plant, &sr, &word("a'")).unwrap();
        let d = supremal_attack_decision(&syn.attacker, &obs).unwrap();
        assert_eq!(format_set(&d), "{d,d'}");
        let obs = attacker_observation(&ex.plant, &sr, &word("a' c")).unwrap();
        assert!(supremal_attack_decision(&syn.attacker, &obs).unwrap().is_empty());
        assert!(supremal_attack_decision(&syn.attacker, &[]).unwrap().is_empty());
        let bogus = vec![obs[1].clone()];
        assert!(matches!(
            supremal_attack_decision(&syn.attacker, &bogus),
            Err(Error::ObservationNotFeasible(_))
        ));
    }

    #[test]
    fn empty_damage_is_not_attackable() {
        let ex = running_example();
        let sr = validate_supervisor(&ex.supervisor, &ex.universe, false).unwrap();
        let h = Fsa::new(ex.universe.events().iter().cloned(), "z");
        let syn = synthesize(&ex.plant, &sr, &h, SynthesisOptions::default()).unwrap();
        assert_eq!(syn.verdict, Verdict::NotAttackable);
        let m = &syn.attacker;
        assert!(m.fsa().states().all(|y| m.lf(y).is_empty()));
    }

    #[test]
    fn pipeline_is_bit_stable() {
        let (_, _, a) = run_example();
        let (_, _, b) = run_example();
        assert_eq!(a, b);
    }
}
