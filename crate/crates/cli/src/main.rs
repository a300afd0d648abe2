use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use desa_core::attacked::{build_attacked_loop, check_success, format_witness, replay, AttackerMachine};
use desa_core::automata::format_word;
use desa_core::export::{
    annotated_supervisor_dot, attacker_dot, product_dot, synthesis_json, synthesis_summary,
    to_json_text,
};
use desa_core::random::{generate, GeneratorConfig};
use desa_core::verify::{verify_instance, VerifyConfig};
use desa_core::{Error, Event, ProblemInstance};
use serde_json::json;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_INTERNAL: u8 = 2;
const EXIT_ATTACKABLE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "desa",
    version,
    about = "Covert actuator attack synthesis for supervised discrete-event plants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args, Debug, Clone, Copy)]
struct GlobalOpts {
    /// Add missing self-loops of unobservable events to the supervisor.
    #[arg(long, global = true)]
    repair_selfloops: bool,

    /// Reject a damage automaton that is not complete.
    #[arg(long, global = true)]
    strict_damage: bool,

    /// Length bound for oracle cross-checks (overrides the instance file).
    #[arg(long, global = true, value_name = "N")]
    max_oracle_len: Option<usize>,

    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Exit with status 3 when the instance is attackable.
    #[arg(long, global = true)]
    fail_if_attackable: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that an instance is well formed and the supervisor is normal.
    Validate { file: PathBuf },
    /// Decide attackability and synthesize the supremal attacker.
    Synthesize { file: PathBuf },
    /// Cross-check synthesis against the brute-force oracle, on a file or on
    /// a campaign of seeded random instances.
    Verify {
        #[arg(required_unless_present = "seed")]
        file: Option<PathBuf>,
        /// First seed of a random campaign.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random instances in the campaign.
        #[arg(long, default_value_t = 20)]
        count: u64,
    },
    /// Step a string through the attacked closed loop.
    Replay {
        file: PathBuf,
        /// Events, separated by spaces (one or several arguments).
        events: Vec<String>,
        /// Attacker to run in the loop.
        #[arg(long, value_enum, default_value_t = AttackerChoice::Supremal)]
        attacker: AttackerChoice,
    },
    /// Write DOT graphs of the annotated supervisor, the generalized product
    /// and the attacker.
    ExportDot {
        file: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum AttackerChoice {
    Supremal,
    Passive,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    kind: String,
    message: String,
    line: Option<usize>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let line = match &e {
            Error::Parse { line, .. } | Error::Located { line, .. } => Some(*line),
            _ => None,
        };
        Failure {
            code: if e.is_validation() {
                EXIT_INVALID
            } else {
                EXIT_INTERNAL
            },
            kind: e.kind().to_string(),
            message: e.to_string(),
            line,
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INTERNAL,
        kind: "io".into(),
        message: format!("{}: {e}", path.display()),
        line: None,
    }
}

type CmdResult = Result<u8, Failure>;

fn load(path: &Path, opts: &GlobalOpts) -> Result<ProblemInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let mut inst = ProblemInstance::parse(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })?;
    inst.options.repair_selfloops |= opts.repair_selfloops;
    inst.options.strict_damage |= opts.strict_damage;
    if let Some(n) = opts.max_oracle_len {
        inst.options.max_oracle_len = n;
    }
    Ok(inst)
}

fn cmd_validate(file: &Path, opts: &GlobalOpts) -> CmdResult {
    let inst = load(file, opts)?;
    let sr = inst.supervisor_realization()?;
    let report = json!({
        "valid": true,
        "events": inst.universe.events().len(),
        "plant_states": inst.plant.num_states(),
        "supervisor_states": sr.fsa().num_states(),
        "damage_states": inst.damage.num_states(),
        "damage_complete": inst.damage.is_complete(),
    });
    if opts.json {
        print!("{}", to_json_text(&report));
    } else {
        println!(
            "valid: {} events, plant {} states, supervisor {} states, damage {} states{}",
            inst.universe.events().len(),
            inst.plant.num_states(),
            sr.fsa().num_states(),
            inst.damage.num_states(),
            if inst.damage.is_complete() {
                ""
            } else {
                " (partial, will be completed)"
            }
        );
    }
    Ok(EXIT_OK)
}

fn attackable_exit(attackable: bool, opts: &GlobalOpts) -> u8 {
    if attackable && opts.fail_if_attackable {
        EXIT_ATTACKABLE
    } else {
        EXIT_OK
    }
}

fn cmd_synthesize(file: &Path, opts: &GlobalOpts) -> CmdResult {
    let inst = load(file, opts)?;
    let syn = inst.synthesize()?;
    if opts.json {
        print!("{}", to_json_text(&synthesis_json(&syn)));
    } else {
        print!("{}", synthesis_summary(&syn));
    }
    Ok(attackable_exit(syn.verdict.is_attackable(), opts))
}

fn cmd_verify_file(file: &Path, opts: &GlobalOpts) -> CmdResult {
    let inst = load(file, opts)?;
    let sr = inst.supervisor_realization()?;
    let syn = inst.synthesize()?;
    let config = VerifyConfig {
        max_len: inst.options.max_oracle_len,
        ..VerifyConfig::default()
    };
    let report = verify_instance(&inst.plant, &sr, &inst.damage, &syn, config)?;
    if opts.json {
        print!("{}", to_json_text(&report));
    } else {
        print!("{report}");
        println!("{}", if report.all_passed() { "all checks passed" } else { "some checks FAILED" });
    }
    if !report.all_passed() {
        return Ok(EXIT_INTERNAL);
    }
    Ok(attackable_exit(report.attackable, opts))
}

fn cmd_verify_campaign(seed: u64, count: u64, opts: &GlobalOpts) -> CmdResult {
    let gen = GeneratorConfig {
        check_len: opts.max_oracle_len.unwrap_or(GeneratorConfig::default().check_len),
        ..GeneratorConfig::default()
    };
    let mut rows = Vec::new();
    let mut failed = 0;
    let mut attackable = 0;
    for s in seed..seed + count {
        let inst = generate(s, &gen);
        let config = VerifyConfig {
            max_len: gen.check_len,
            seed: s,
            ..VerifyConfig::default()
        };
        let report = verify_instance(
            &inst.plant,
            &inst.supervisor,
            &inst.damage,
            &inst.synthesis,
            config,
        )?;
        attackable += usize::from(report.attackable);
        if !report.all_passed() {
            failed += 1;
        }
        if !opts.json {
            let failing: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name)
                .collect();
            println!(
                "seed {s:>6}: attackable={:<5} checks={:>2} {}",
                report.attackable,
                report.checks.len(),
                if failing.is_empty() {
                    "PASS".to_string()
                } else {
                    format!("FAIL {}", failing.join(","))
                }
            );
        }
        rows.push(json!({"seed": s, "report": report}));
    }
    if opts.json {
        let out = json!({
            "instances": count,
            "attackable": attackable,
            "failed": failed,
            "results": rows,
        });
        print!("{}", to_json_text(&out));
    } else {
        println!("{count} instances, {attackable} attackable, {failed} failed");
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_INTERNAL })
}

fn cmd_replay(file: &Path, events: &[String], choice: AttackerChoice, opts: &GlobalOpts) -> CmdResult {
    let inst = load(file, opts)?;
    let sr = inst.supervisor_realization()?;
    let syn = inst.synthesize()?;
    let attacker = match choice {
        AttackerChoice::Supremal => AttackerMachine::from_supremal(&syn.attacker),
        AttackerChoice::Passive => AttackerMachine::passive(&syn.attacker),
    };
    let lp = build_attacked_loop(&inst.plant, &sr, &attacker, &inst.damage)?;
    let word: Vec<Event> = events
        .iter()
        .flat_map(|a| a.split_whitespace())
        .map(Event::new)
        .collect();
    if let Some(bad) = word.iter().find(|e| !inst.universe.events().contains(*e)) {
        return Err(Error::UnknownLabel(bad.to_string()).into());
    }
    let trace = replay(&lp, &word);
    if opts.json {
        let out = json!({
            "string": format_word(&word),
            "verdict": trace.verdict(),
            "trace": trace,
        });
        print!("{}", to_json_text(&out));
    } else {
        println!("replaying {}", format_word(&word));
        println!("{trace}");
        let success = check_success(&lp);
        println!(
            "attacker successful: {} (damage via {}, detection via {})",
            success.successful,
            format_witness(&success.damage_witness),
            format_witness(&success.detection_witness)
        );
    }
    Ok(EXIT_OK)
}

fn cmd_export_dot(file: &Path, out_dir: &Path, opts: &GlobalOpts) -> CmdResult {
    let inst = load(file, opts)?;
    let syn = inst.synthesize()?;
    fs::create_dir_all(out_dir).map_err(|e| io_failure(out_dir, e))?;
    let stem = file
        .file_stem()
        .map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned());
    let outputs = [
        ("annotated", annotated_supervisor_dot(&syn)),
        ("product", product_dot(&syn.product)),
        ("attacker", attacker_dot(&syn.attacker)),
    ];
    let mut written = Vec::new();
    for (kind, text) in outputs {
        let path = out_dir.join(format!("{stem}.{kind}.dot"));
        fs::write(&path, text).map_err(|e| io_failure(&path, e))?;
        written.push(path.display().to_string());
    }
    if opts.json {
        print!("{}", to_json_text(&json!({ "written": written })));
    } else {
        for p in &written {
            println!("wrote {p}");
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = cli.global;
    let result = match &cli.command {
        Command::Validate { file } => cmd_validate(file, &opts),
        Command::Synthesize { file } => cmd_synthesize(file, &opts),
        Command::Verify { seed: Some(seed), count, .. } => cmd_verify_campaign(*seed, *count, &opts),
        Command::Verify { file, .. } => {
            cmd_verify_file(file.as_deref().expect("required without --seed"), &opts)
        }
        Command::Replay {
            file,
            events,
            attacker,
        } => cmd_replay(file, events, *attacker, &opts),
        Command::ExportDot { file, out_dir } => cmd_export_dot(file, out_dir, &opts),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if opts.json {
                let out = json!({
                    "error": { "kind": f.kind, "message": f.message, "line": f.line }
                });
                print!("{}", to_json_text(&out));
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
