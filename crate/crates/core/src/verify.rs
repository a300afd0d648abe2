//! Cross-checks of one synthesis run against the oracle, reported check by
//! check.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::attacked::{build_attacked_loop, check_success, format_witness, AttackerMachine};
use crate::automata::{enumerate_language, format_set, format_word, Event, Fsa, Word};
use crate::error::Result;
use crate::oracle::{observation_key, Oracle};
use crate::random::{pruning_rng, random_pruning};
use crate::supervisory::{attacker_observation, SupervisorRealization};
use crate::synthesis::Synthesis;

/// Extra enumeration depth tried when certifying observation classes.
pub const CLASS_BOUND_SLACK: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub max_len: usize,
    /// Enumeration bound used for observation classes.
    pub class_bound: usize,
    pub attackable: bool,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "strings up to {} (classes enumerated to {}), attackable: {}",
            self.max_len, self.class_bound, self.attackable
        )?;
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  [{mark}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_len: usize,
    pub prunings: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_len: 6,
            prunings: 20,
            seed: 0,
        }
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name,
        passed,
        detail: detail.into(),
    }
}

/// Runs every oracle cross-check on a synthesized instance.
pub fn verify_instance(
    g: &Fsa<Event>,
    sr: &SupervisorRealization,
    h: &Fsa<Event>,
    syn: &Synthesis,
    config: VerifyConfig,
) -> Result<VerificationReport> {
    let n = config.max_len;
    let m = &syn.attacker;
    let mut checks = Vec::new();

    let mut certified = None;
    for bound in n..=n + CLASS_BOUND_SLACK {
        let oracle = Oracle::new(g, sr, h, bound)?;
        if oracle.certify_classes(n).is_ok() {
            certified = Some(oracle);
            break;
        }
    }
    let oracle = match certified {
        Some(o) => {
            checks.push(check(
                "class_certificate",
                true,
                format!("observation classes complete at length {}", o.max_len()),
            ));
            o
        }
        None => {
            let o = Oracle::new(g, sr, h, n + CLASS_BOUND_SLACK)?;
            let why = o.certify_classes(n).expect_err("not certified");
            checks.push(check("class_certificate", false, why));
            o
        }
    };

    let strings: Vec<&Word<Event>> = oracle.closed_strings(n).collect();
    let mut reached = BTreeSet::new();
    let mut mismatch = None;
    for s in &strings {
        let obs = attacker_observation(g, sr, s)?;
        let Some(y) = m.run(&obs) else {
            mismatch = Some(format!("no attacker state for {}", format_word(s)));
            break;
        };
        reached.insert(y);
        let expected = oracle.i_set(&observation_key(&obs))?;
        if &expected != m.lf(y) {
            mismatch = Some(format!(
                "after {}: Lf = {}, oracle = {}",
                format_word(s),
                format_set(m.lf(y)),
                format_set(&expected)
            ));
            break;
        }
    }
    checks.push(check(
        "lf_matches_oracle",
        mismatch.is_none(),
        mismatch.unwrap_or_else(|| format!("{} strings compared", strings.len())),
    ));

    let covered = reached.len() == m.fsa().num_states();
    checks.push(check(
        "attacker_states_covered",
        covered,
        format!(
            "{} of {} attacker states reached within the bound",
            reached.len(),
            m.fsa().num_states()
        ),
    ));

    let pairs = oracle.attack_pairs_observed_within(n);
    checks.push(check(
        "attackability_agrees",
        pairs.is_empty() != syn.verdict.is_attackable(),
        format!(
            "verdict attackable = {}, oracle attack pairs = {}",
            syn.verdict.is_attackable(),
            pairs.len()
        ),
    ));

    if !syn.verdict.is_attackable() {
        return Ok(VerificationReport {
            max_len: n,
            class_bound: oracle.max_len(),
            attackable: false,
            checks,
        });
    }

    let pair = syn.attack_pair()?;
    let pc = oracle.verify_attack_pair(&pair);
    checks.push(check(
        "attack_pair_valid",
        pc.valid,
        match &pc.counterexample {
            None => format!("{pair} (condition on equal observations checked up to {})", pc.checked_up_to),
            Some(w) => format!("{pair}: counterexample {}", format_word(w)),
        },
    ));

    let supremal = AttackerMachine::from_supremal(m);
    let lp = build_attacked_loop(g, sr, &supremal, h)?;
    let attacked: BTreeSet<Word<Event>> = enumerate_language(lp.fsa(), n)?.into_iter().collect();
    let mut expected: BTreeSet<Word<Event>> = strings.iter().map(|s| (*s).clone()).collect();
    let mut done = BTreeSet::new();
    for p in &pairs {
        let key = oracle.observation_key(&p.s).expect("pair string enumerated");
        if done.insert((key.to_string(), p.sigma.clone())) {
            expected.extend(oracle.en(p, n));
        }
    }
    let diff: Vec<&Word<Event>> = attacked.symmetric_difference(&expected).collect();
    checks.push(check(
        "attacked_behavior_matches_oracle",
        diff.is_empty(),
        match diff.first() {
            None => format!("{} strings", attacked.len()),
            Some(w) => format!("differs on {}", format_word(w)),
        },
    ));

    let contains_closed = strings.iter().all(|s| attacked.contains(*s));
    checks.push(check(
        "closed_behavior_contained",
        contains_closed,
        "closed-loop strings survive the attack",
    ));

    let report = check_success(&lp);
    checks.push(check(
        "supremal_attacker_succeeds_covertly",
        report.successful,
        format!(
            "damage via {}, detection via {}",
            format_witness(&report.damage_witness),
            format_witness(&report.detection_witness)
        ),
    ));

    let mut rng = pruning_rng(config.seed);
    let mut successful = 0;
    let mut attempts = 0;
    let mut escaped = None;
    while successful < config.prunings && attempts < config.prunings * 20 {
        attempts += 1;
        let a = random_pruning(&mut rng, m);
        let lp = build_attacked_loop(g, sr, &a, h)?;
        if !check_success(&lp).successful {
            continue;
        }
        successful += 1;
        if let Some(w) = enumerate_language(lp.fsa(), n)?
            .into_iter()
            .find(|w| !attacked.contains(w))
        {
            escaped = Some(w);
            break;
        }
    }
    checks.push(check(
        "prunings_within_supremal",
        escaped.is_none() && successful >= config.prunings,
        match escaped {
            Some(w) => format!("pruned attacker generates {}", format_word(&w)),
            None => format!("{successful} successful prunings in {attempts} draws"),
        },
    ));

    Ok(VerificationReport {
        max_len: n,
        class_bound: oracle.max_len(),
        attackable: true,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::running_example;
    use crate::supervisory::validate_supervisor;
    use crate::synthesis::{synthesize, SynthesisOptions};

    #[test]
    fn running_example_passes_every_check() {
        let ex = running_example();
        let sr = validate_supervisor(&ex.supervisor, &ex.universe, false).unwrap();
        let syn = synthesize(&ex.plant, &sr, &ex.damage, SynthesisOptions::default()).unwrap();
        let report = verify_instance(&ex.plant, &sr, &ex.damage, &syn, VerifyConfig::default())
            .unwrap();
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.checks.len(), 9);
    }
}
