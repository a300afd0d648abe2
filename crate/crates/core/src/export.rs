//! JSON and DOT renderings of synthesis artifacts. All output is canonical:
//! the same input always yields byte-identical text.

use std::fmt::Write as _;

use serde::Serialize;

use crate::automata::{format_set, format_word, Event, EventSet, Fsa, Label};
use crate::oracle::AttackPair;
use crate::supervisory::ObsLabel;
use crate::synthesis::{GeneralizedProduct, MooreAttacker, Synthesis, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelJson {
    /// Empty for an event hidden from the attacker.
    pub event: String,
    pub command: Vec<String>,
}

impl From<&ObsLabel> for LabelJson {
    fn from(l: &ObsLabel) -> Self {
        LabelJson {
            event: l.event.as_ref().map_or_else(String::new, |e| e.to_string()),
            command: names(l.command.events()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttackerStateJson {
    pub id: usize,
    pub name: String,
    pub members: Vec<String>,
    pub lf: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttackerTransitionJson {
    pub from: usize,
    pub label: LabelJson,
    pub to: usize,
}

/// The synthesized Moore attacker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttackerJson {
    pub states: Vec<AttackerStateJson>,
    pub initial: usize,
    pub initial_command: Vec<String>,
    pub attackable: Vec<String>,
    pub transitions: Vec<AttackerTransitionJson>,
}

fn names(set: &EventSet) -> Vec<String> {
    set.iter().map(Event::to_string).collect()
}

pub fn attacker_json(m: &MooreAttacker) -> AttackerJson {
    let f = m.fsa();
    AttackerJson {
        states: f
            .states()
            .map(|y| AttackerStateJson {
                id: y.index(),
                name: f.name(y).to_string(),
                members: m.member_names(y).to_vec(),
                lf: names(m.lf(y)),
            })
            .collect(),
        initial: f.initial().index(),
        initial_command: names(m.initial_command().events()),
        attackable: names(m.attackable()),
        transitions: f
            .transitions()
            .map(|(y, l, t)| AttackerTransitionJson {
                from: y.index(),
                label: l.into(),
                to: t.index(),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairJson {
    pub s: Vec<String>,
    pub sigma: String,
}

impl From<&AttackPair> for PairJson {
    fn from(p: &AttackPair) -> Self {
        PairJson {
            s: p.s.iter().map(Event::to_string).collect(),
            sigma: p.sigma.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    /// Human-readable observation, e.g. `(ε,{b,c})`.
    pub observation: String,
    pub labels: Vec<LabelJson>,
    pub state: String,
    pub attacked_events: Vec<String>,
    pub attack_pair: PairJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SynthesisJson {
    pub attackable: bool,
    pub witness: Option<WitnessJson>,
    pub product_states: usize,
    pub attacker: AttackerJson,
}

pub fn synthesis_json(syn: &Synthesis) -> SynthesisJson {
    let witness = match &syn.verdict {
        Verdict::NotAttackable => None,
        Verdict::Attackable(w) => {
            let pair = syn.attack_pair().expect("attackable verdict has a pair");
            Some(WitnessJson {
                observation: crate::supervisory::format_observation(&w.observation),
                labels: w.observation.iter().map(LabelJson::from).collect(),
                state: syn.attacker.fsa().name(w.state).to_string(),
                attacked_events: names(&w.attacked),
                attack_pair: (&pair).into(),
            })
        }
    };
    SynthesisJson {
        attackable: syn.verdict.is_attackable(),
        witness,
        product_states: syn.product.fsa().num_states(),
        attacker: attacker_json(&syn.attacker),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn dot_graph<L: Label>(
    title: &str,
    fsa: &Fsa<L>,
    node_attrs: impl Fn(crate::StateId) -> String,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(title));
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=circle];");
    let _ = writeln!(out, "  __start [shape=point];");
    for v in fsa.states() {
        let _ = writeln!(out, "  n{} [{}];", v.index(), node_attrs(v));
    }
    let _ = writeln!(out, "  __start -> n{};", fsa.initial().index());
    for (s, l, t) in fsa.transitions() {
        let _ = writeln!(
            out,
            "  n{} -> n{} [label={}];",
            s.index(),
            t.index(),
            quote(&l.to_string())
        );
    }
    out.push_str("}\n");
    out
}

/// The annotated supervisor.
pub fn annotated_supervisor_dot(syn: &Synthesis) -> String {
    let f = syn.annotated.fsa();
    dot_graph("annotated_supervisor", f, |v| {
        format!("label={}", quote(f.name(v)))
    })
}

/// The generalized product; ⊤ is drawn as a filled double circle and ⊥ as a box.
pub fn product_dot(gp: &GeneralizedProduct) -> String {
    let f = gp.fsa();
    dot_graph("generalized_product", f, |v| {
        let label = quote(f.name(v));
        if v == gp.top() {
            format!("label={label}, shape=doublecircle, style=filled, fillcolor=red")
        } else if v == gp.bottom() {
            format!("label={label}, shape=box")
        } else {
            format!("label={label}")
        }
    })
}

/// The subset construction; each node shows its member set and `Lf`.
pub fn attacker_dot(m: &MooreAttacker) -> String {
    let f = m.fsa();
    dot_graph("attacker", f, |y| {
        let label = format!("{} | Lf={}", f.name(y), format_set(m.lf(y)));
        let shape = if m.lf(y).is_empty() { "box" } else { "box, peripheries=2" };
        format!("label={}, shape={shape}", quote(&label))
    })
}

/// Text summary of a synthesis run.
pub fn synthesis_summary(syn: &Synthesis) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "attackable: {}", syn.verdict.is_attackable());
    let _ = writeln!(
        out,
        "product states: {}, attacker states: {}",
        syn.product.fsa().num_states(),
        syn.attacker.fsa().num_states()
    );
    if let Verdict::Attackable(w) = &syn.verdict {
        let pair = syn.attack_pair().expect("attackable verdict has a pair");
        let _ = writeln!(
            out,
            "witness observation: {}",
            crate::supervisory::format_observation(&w.observation)
        );
        let _ = writeln!(out, "attacker state: {}", syn.attacker.fsa().name(w.state));
        let _ = writeln!(out, "attacked events: {}", format_set(&w.attacked));
        let _ = writeln!(
            out,
            "attack pair: s = {}, sigma = {}",
            format_word(&pair.s),
            pair.sigma
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::running_example;
    use crate::supervisory::validate_supervisor;
    use crate::synthesis::{synthesize, SynthesisOptions};

    fn syn() -> Synthesis {
        let ex = running_example();
        let sr = validate_supervisor(&ex.supervisor, &ex.universe, false).unwrap();
        synthesize(&ex.plant, &sr, &ex.damage, SynthesisOptions::default()).unwrap()
    }

    #[test]
    fn attacker_json_shape() {
        let s = syn();
        let v = serde_json::to_value(attacker_json(&s.attacker)).unwrap();
        assert_eq!(v["initial"], 0);
        assert_eq!(v["initial_command"], serde_json::json!(["a'", "b"]));
        assert_eq!(v["states"].as_array().unwrap().len(), 5);
        let t0 = &v["transitions"][0];
        assert_eq!(t0["label"], serde_json::json!({"event": "", "command": ["b", "c"]}));
        let with_lf: Vec<_> = v["states"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|s| !s["lf"].as_array().unwrap().is_empty())
            .collect();
        assert_eq!(with_lf.len(), 1);
        assert_eq!(with_lf[0]["members"], serde_json::json!(["(2,3,4)", "(3,3,3)"]));
        assert_eq!(with_lf[0]["lf"], serde_json::json!(["d", "d'"]));
    }

    #[test]
    fn synthesis_json_witness() {
        let v = serde_json::to_value(synthesis_json(&syn())).unwrap();
        assert_eq!(v["attackable"], true);
        assert_eq!(v["witness"]["observation"], "(ε,{b,c})");
        assert_eq!(v["witness"]["attacked_events"], serde_json::json!(["d", "d'"]));
        assert_eq!(v["witness"]["attack_pair"]["s"], serde_json::json!(["b", "a'"]));
    }

    #[test]
    fn dot_outputs() {
        let s = syn();
        let sub = attacker_dot(&s.attacker);
        assert!(sub.contains(r#"label="{(2,3,4),(3,3,3)} | Lf={d,d'}""#));
        let gp = product_dot(&s.product);
        assert!(gp.contains(r#"label="⊤", shape=doublecircle"#));
        assert!(gp.contains(r#"label="(a',(ε,{b,c}))""#));
        let sa = annotated_supervisor_dot(&s);
        assert!(sa.contains(r#"label="(c,{a,b})""#));
        assert_eq!(attacker_dot(&syn().attacker), sub);
    }

    #[test]
    fn quoting_escapes() {
        assert_eq!(quote(r#"a"b\c"#), r#""a\"b\\c""#);
    }
}
