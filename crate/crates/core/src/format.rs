//! The `.desa` instance format.
//!
//! ```text
//! # comments run to the end of the line
//! [events]
//! a   c o ca oa      # controllable, observable, attackable, attacker-observable
//! b
//!
//! [plant]
//! initial 0
//! states 0 1         # optional; fixes the state order
//! 0 -> 1 : a
//!
//! [supervisor]
//! initial 0
//! 0 -> 0 : b
//!
//! [damage]
//! initial 0
//! marked 1
//! 0 -> 1 : a
//!
//! [options]
//! repair_selfloops = false
//! max_oracle_len = 6
//! strict_damage = false
//! ```
//!
//! Sections may appear in any order; `[options]` is optional. Serialization
//! is canonical: events sorted by name, states in id order, transitions by
//! source state and event.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::automata::{Event, EventSet, Fsa};
use crate::error::{Error, Result};
use crate::supervisory::{validate_supervisor, SupervisorRealization};
use crate::synthesis::{synthesize, Synthesis, SynthesisOptions};
use crate::universe::EventUniverse;

pub const DEFAULT_MAX_ORACLE_LEN: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceOptions {
    /// Add missing self-loops of unobservable events to the supervisor.
    pub repair_selfloops: bool,
    pub max_oracle_len: usize,
    /// Reject a partial damage automaton instead of completing it.
    pub strict_damage: bool,
}

impl Default for InstanceOptions {
    fn default() -> Self {
        InstanceOptions {
            repair_selfloops: false,
            max_oracle_len: DEFAULT_MAX_ORACLE_LEN,
            strict_damage: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    pub universe: EventUniverse,
    pub plant: Fsa<Event>,
    pub supervisor: Fsa<Event>,
    /// May be partial.
    pub damage: Fsa<Event>,
    pub options: InstanceOptions,
}

impl ProblemInstance {
    pub fn parse(text: &str) -> Result<Self> {
        parse_instance(text)
    }

    pub fn to_text(&self) -> String {
        serialize_instance(self)
    }

    /// Validates the supervisor against the universe, repairing self-loops
    /// when the instance options ask for it.
    pub fn supervisor_realization(&self) -> Result<SupervisorRealization> {
        validate_supervisor(
            &self.supervisor,
            &self.universe,
            self.options.repair_selfloops,
        )
    }

    pub fn synthesize(&self) -> Result<Synthesis> {
        let sr = self.supervisor_realization()?;
        synthesize(
            &self.plant,
            &sr,
            &self.damage,
            SynthesisOptions {
                strict_damage: self.options.strict_damage,
            },
        )
    }
}

const SECTIONS: [&str; 5] = ["events", "plant", "supervisor", "damage", "options"];

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn at(line: usize, e: Error) -> Error {
    Error::Located {
        line,
        source: Box::new(e),
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '#' | ',' | '(' | ')' | '{' | '}'))
        && name != "->"
        && name != ":"
}

type Lines<'a> = Vec<(usize, Vec<&'a str>)>;

struct Section<'a> {
    header_line: usize,
    lines: Lines<'a>,
}

pub fn parse_instance(text: &str) -> Result<ProblemInstance> {
    let mut sections: BTreeMap<&str, Section<'_>> = BTreeMap::new();
    let mut current: Option<&str> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|c| c.strip_suffix(']')) {
            let name = name.trim();
            let Some(&name) = SECTIONS.iter().find(|&&s| s == name) else {
                return Err(parse_err(line, format!("unknown section [{name}]")));
            };
            if sections.contains_key(name) {
                return Err(parse_err(line, format!("duplicate section [{name}]")));
            }
            sections.insert(
                name,
                Section {
                    header_line: line,
                    lines: Vec::new(),
                },
            );
            current = Some(name);
            continue;
        }
        let Some(name) = current else {
            return Err(parse_err(line, "content before the first section header"));
        };
        let section = sections.get_mut(name).expect("current section exists");
        section.lines.push((line, content.split_whitespace().collect()));
    }

    let last_line = text.lines().count().max(1);
    let require = |name: &str| -> Result<&Section<'_>> {
        sections
            .get(name)
            .ok_or_else(|| parse_err(last_line, format!("missing section [{name}]")))
    };

    let (universe, event_lines) = parse_events(require("events")?)?;
    let plant = parse_automaton("plant", require("plant")?, &universe, false)?;
    let supervisor = parse_automaton("supervisor", require("supervisor")?, &universe, false)?;
    let damage = parse_automaton("damage", require("damage")?, &universe, true)?;
    let options = match sections.get("options") {
        Some(s) => parse_options(s)?,
        None => InstanceOptions::default(),
    };

    if let Err(e) = universe.validate() {
        let line = match &e {
            Error::AlphabetNesting { event, .. } => event_lines.get(event.as_str()).copied(),
            _ => None,
        };
        return Err(match line {
            Some(line) => at(line, e),
            None => e,
        });
    }

    Ok(ProblemInstance {
        universe,
        plant,
        supervisor,
        damage,
        options,
    })
}

fn parse_events<'a>(section: &Section<'a>) -> Result<(EventUniverse, BTreeMap<&'a str, usize>)> {
    let mut lines = BTreeMap::new();
    let mut sets: [EventSet; 5] = Default::default();
    for (line, tokens) in &section.lines {
        let name = tokens[0];
        if !valid_name(name) {
            return Err(parse_err(*line, format!("invalid event name `{name}`")));
        }
        if lines.insert(name, *line).is_some() {
            return Err(parse_err(*line, format!("duplicate event `{name}`")));
        }
        let event = Event::new(name);
        sets[0].insert(event.clone());
        let mut seen = BTreeSet::new();
        for &flag in &tokens[1..] {
            let slot = match flag {
                "c" => 1,
                "o" => 2,
                "ca" => 3,
                "oa" => 4,
                _ => return Err(parse_err(*line, format!("unknown event flag `{flag}`"))),
            };
            if !seen.insert(flag) {
                return Err(parse_err(*line, format!("repeated flag `{flag}`")));
            }
            sets[slot].insert(event.clone());
        }
    }
    let [events, c, o, ca, oa] = sets;
    let universe = EventUniverse::new(events)
        .with_controllable(c)
        .with_observable(o)
        .with_attackable(ca)
        .with_attacker_observable(oa);
    Ok((universe, lines))
}

fn parse_automaton(
    name: &str,
    section: &Section<'_>,
    universe: &EventUniverse,
    allow_marked: bool,
) -> Result<Fsa<Event>> {
    let mut initial = None;
    let mut declared: Vec<(usize, &str)> = Vec::new();
    let mut marked: Vec<(usize, &str)> = Vec::new();
    let mut edges = Vec::new();
    for (line, tokens) in &section.lines {
        let line = *line;
        match tokens[0] {
            "initial" => {
                if initial.is_some() {
                    return Err(parse_err(line, "initial state given twice"));
                }
                let [_, state] = tokens[..] else {
                    return Err(parse_err(line, "expected `initial <state>`"));
                };
                initial = Some(state);
            }
            "states" => declared.extend(tokens[1..].iter().map(|&t| (line, t))),
            "marked" if allow_marked => marked.extend(tokens[1..].iter().map(|&t| (line, t))),
            "marked" => {
                return Err(parse_err(
                    line,
                    format!("marked states are only allowed in [damage], not [{name}]"),
                ))
            }
            _ => {
                let [src, "->", dst, ":", event] = tokens[..] else {
                    return Err(parse_err(
                        line,
                        format!("expected `src -> dst : event`, found `{}`", tokens.join(" ")),
                    ));
                };
                edges.push((line, src, dst, event));
            }
        }
    }
    let initial = initial.ok_or_else(|| {
        parse_err(section.header_line, format!("[{name}] has no initial state"))
    })?;
    for (line, state) in declared.iter().chain(&marked).chain(&[(section.header_line, initial)]) {
        if !valid_name(state) {
            return Err(parse_err(*line, format!("invalid state name `{state}`")));
        }
    }

    let mut fsa = Fsa::new(universe.events().iter().cloned(), initial);
    for &(line, state) in &declared {
        if state != initial {
            fsa.add_state(state).map_err(|e| at(line, e))?;
        }
    }
    for (line, src, dst, event) in edges {
        for state in [src, dst] {
            if !valid_name(state) {
                return Err(parse_err(line, format!("invalid state name `{state}`")));
            }
        }
        let e = Event::new(event);
        if !universe.events().contains(&e) {
            return Err(at(line, Error::UnknownLabel(event.to_string())));
        }
        let s = fsa.ensure_state(src);
        let t = fsa.ensure_state(dst);
        if fsa.step(s, &e).is_some() {
            if fsa.step(s, &e) == Some(t) {
                return Err(parse_err(
                    line,
                    format!("duplicate transition {src} -> {dst} : {event}"),
                ));
            }
            return Err(at(
                line,
                Error::Nondeterministic {
                    state: src.to_string(),
                    label: event.to_string(),
                },
            ));
        }
        fsa.add_transition(s, e, t).map_err(|e| at(line, e))?;
    }
    for (line, state) in marked {
        let id = fsa
            .state_id(state)
            .ok_or_else(|| at(line, Error::UnknownState(state.to_string())))?;
        fsa.set_marked(id, true);
    }
    Ok(fsa)
}

fn parse_options(section: &Section<'_>) -> Result<InstanceOptions> {
    let mut options = InstanceOptions::default();
    for (line, tokens) in &section.lines {
        let line = *line;
        let [key, "=", value] = tokens[..] else {
            return Err(parse_err(line, "expected `key = value`"));
        };
        let flag = || match value {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(parse_err(line, format!("`{key}` expects true or false"))),
        };
        match key {
            "repair_selfloops" => options.repair_selfloops = flag()?,
            "strict_damage" => options.strict_damage = flag()?,
            "max_oracle_len" => {
                options.max_oracle_len = value
                    .parse()
                    .map_err(|_| parse_err(line, "`max_oracle_len` expects a number"))?
            }
            _ => return Err(parse_err(line, format!("unknown option `{key}`"))),
        }
    }
    Ok(options)
}

fn write_automaton(out: &mut String, name: &str, fsa: &Fsa<Event>) {
    let _ = writeln!(out, "[{name}]");
    let _ = writeln!(out, "initial {}", fsa.name(fsa.initial()));
    let states: Vec<&str> = fsa.states().map(|q| fsa.name(q)).collect();
    let _ = writeln!(out, "states {}", states.join(" "));
    if !fsa.marked().is_empty() {
        let marked: Vec<&str> = fsa.marked().iter().map(|&q| fsa.name(q)).collect();
        let _ = writeln!(out, "marked {}", marked.join(" "));
    }
    for (s, e, t) in fsa.transitions() {
        let _ = writeln!(out, "{} -> {} : {}", fsa.name(s), fsa.name(t), e);
    }
}

pub fn serialize_instance(inst: &ProblemInstance) -> String {
    let u = &inst.universe;
    let mut out = String::from("[events]\n");
    for e in u.events() {
        let mut line = e.to_string();
        for (flag, set) in [
            ("c", u.controllable()),
            ("o", u.observable()),
            ("ca", u.attackable()),
            ("oa", u.attacker_observable()),
        ] {
            if set.contains(e) {
                line.push(' ');
                line.push_str(flag);
            }
        }
        let _ = writeln!(out, "{line}");
    }
    for (name, fsa) in [
        ("plant", &inst.plant),
        ("supervisor", &inst.supervisor),
        ("damage", &inst.damage),
    ] {
        out.push('\n');
        write_automaton(&mut out, name, fsa);
    }
    let o = &inst.options;
    let _ = write!(
        out,
        "\n[options]\nrepair_selfloops = {}\nmax_oracle_len = {}\nstrict_damage = {}\n",
        o.repair_selfloops, o.max_oracle_len, o.strict_damage
    );
    out
}
