use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use linsys3::criteria::{build_certificate, classify, Goal, Mode};
use linsys3::divclass::{parse_any, AnyClass};
use linsys3::oracle::{self, FieldConfig};
use linsys3::render;
use linsys3::sweep::{self, Engines, SweepSpec};
use linsys3::{Error, ThreefoldClass};

const EXIT_USAGE: u8 = 1;
const EXIT_DISAGREE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "linsys3", version, about = "Linear systems of surfaces in P3 through fat points on a quartic curve")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    OnAnticanonical,
    GeneralPosition,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::OnAnticanonical => Mode::OnAnticanonical,
            ModeArg::GeneralPosition => Mode::GeneralPosition,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GoalArg {
    Ns,
    Bpf,
    Va,
}

impl From<GoalArg> for Goal {
    fn from(g: GoalArg) -> Self {
        match g {
            GoalArg::Ns => Goal::NonSpecial,
            GoalArg::Bpf => Goal::BasePointFree,
            GoalArg::Va => Goal::VeryAmple,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EnginesArg {
    Criteria,
    Oracle,
    Both,
}

impl From<EnginesArg> for Engines {
    fn from(e: EnginesArg) -> Self {
        match e {
            EnginesArg::Criteria => Engines::Criteria,
            EnginesArg::Oracle => Engines::Oracle,
            EnginesArg::Both => Engines::Both,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModeOpt {
    #[arg(long, value_enum, default_value_t = ModeArg::OnAnticanonical)]
    mode: ModeArg,
}

#[derive(Args)]
struct FieldOpts {
    /// Prime modulus (repeatable); defaults to three primes near 2^31.
    #[arg(long = "prime")]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seeds per prime.
    #[arg(long, default_value_t = oracle::DEFAULT_TRIALS)]
    trials: usize,
    /// Probe points per probe kind (0 disables probing).
    #[arg(long, default_value_t = oracle::DEFAULT_PROBES)]
    probes: usize,
}

impl FieldOpts {
    fn config(&self) -> FieldConfig {
        let mut cfg = FieldConfig { seed: self.seed, trials: self.trials, probes: self.probes, ..FieldConfig::default() };
        if !self.primes.is_empty() {
            cfg.primes = self.primes.clone();
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the non-speciality, base point free and very ample criteria.
    Classify {
        class: String,
        /// Keep zero multiplicities (they count towards r in the bpf/va thresholds).
        #[arg(long)]
        keep_zeros: bool,
        #[command(flatten)]
        mode: ModeOpt,
        #[command(flatten)]
        output: Output,
    },
    /// Build the inductive certificate for one criterion.
    Reduce {
        class: String,
        #[arg(value_enum)]
        goal: GoalArg,
        #[arg(long)]
        keep_zeros: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Compute the dimension over prime fields and probe base points and separation.
    Oracle {
        class: String,
        #[command(flatten)]
        mode: ModeOpt,
        #[command(flatten)]
        field: FieldOpts,
        #[command(flatten)]
        output: Output,
    },
    /// Compare both engines over a box of normalized classes.
    Sweep {
        #[arg(long, default_value_t = 0)]
        d_min: i64,
        #[arg(long, default_value_t = 3)]
        d_max: i64,
        #[arg(long, default_value_t = 0)]
        r_min: usize,
        #[arg(long, default_value_t = 6)]
        r_max: usize,
        /// Largest multiplicity.
        #[arg(long, default_value_t = 1)]
        m_max: i64,
        #[arg(long, value_enum, default_value_t = EnginesArg::Both)]
        engines: EnginesArg,
        #[command(flatten)]
        mode: ModeOpt,
        #[command(flatten)]
        field: FieldOpts,
        #[command(flatten)]
        output: Output,
    },
    /// Virtual dimension and intersection numbers of an L3, LQ or L2 class.
    Vdim {
        class: String,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) | Error::Sampling(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn emit(output: &Output, body: String) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn no_csv(output: &Output, what: &str) -> Result<(), Failure> {
    if output.format == Format::Csv {
        return Err(Failure::Usage(format!("csv output is only available for sweep, not {what}")));
    }
    Ok(())
}

fn threefold(s: &str) -> Result<ThreefoldClass, Failure> {
    Ok(s.parse::<ThreefoldClass>()?)
}

/// The class as given, or with zero multiplicities dropped.
fn criteria_input(s: &str, keep_zeros: bool) -> Result<ThreefoldClass, Failure> {
    let c = threefold(s)?;
    Ok(if keep_zeros { c } else { c.normalized() })
}

fn vdim_report(class: &AnyClass) -> Result<serde_json::Value, Failure> {
    Ok(match class {
        AnyClass::Threefold(c) => json!({
            "class": c.to_string(),
            "vdim": c.vdim()?,
            "edim": c.edim()?,
            "conditions": c.condition_count(),
            "monomials": linsys3::divclass::binom3(c.d + 3),
        }),
        AnyClass::Quadric(c) => json!({
            "class": c.to_string(),
            "vdim": c.vdim(),
            "self_intersection": c.self_intersection(),
            "k_intersection": c.k_intersection(),
            "plane_image": c.to_plane().to_string(),
        }),
        AnyClass::Plane(c) => json!({
            "class": c.to_string(),
            "vdim": c.vdim(),
            "self_intersection": c.self_intersection(),
            "k_intersection": c.k_intersection(),
            "standard": c.is_standard(),
        }),
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify { class, keep_zeros, mode, output } => {
            no_csv(&output, "classify")?;
            let c = classify(&criteria_input(&class, keep_zeros)?, mode.mode.into());
            let body = match output.format {
                Format::Json => to_json(&c),
                _ => render::classification_text(&c),
            };
            emit(&output, body)?;
        }
        Command::Reduce { class, goal, keep_zeros, output } => {
            no_csv(&output, "reduce")?;
            let cert = build_certificate(&criteria_input(&class, keep_zeros)?, goal.into());
            let body = match output.format {
                Format::Json => to_json(&cert),
                _ => render::certificate_text(&cert),
            };
            emit(&output, body)?;
        }
        Command::Oracle { class, mode, field, output } => {
            no_csv(&output, "oracle")?;
            let report = oracle::verify(&threefold(&class)?, mode.mode.into(), &field.config())?;
            let body = match output.format {
                Format::Json => to_json(&report),
                _ => report.render_text(),
            };
            emit(&output, body)?;
        }
        Command::Sweep { d_min, d_max, r_min, r_max, m_max, engines, mode, field, output } => {
            let spec = SweepSpec {
                d_min,
                d_max,
                r_min,
                r_max,
                m_max,
                mode: mode.mode.into(),
                engines: engines.into(),
                field: field.config(),
            };
            let report = sweep::run(&spec)?;
            let body = match output.format {
                Format::Json => {
                    let mut s = sweep::render_json(&report)?;
                    s.push('\n');
                    s
                }
                Format::Csv => sweep::render_csv(&report)?,
                Format::Text => sweep::render_text(&report),
            };
            emit(&output, body)?;
            if report.has_disagreement() {
                return Ok(EXIT_DISAGREE);
            }
        }
        Command::Vdim { class, output } => {
            no_csv(&output, "vdim")?;
            let report = vdim_report(&parse_any(&class)?)?;
            let body = match output.format {
                Format::Json => to_json(&report),
                _ => {
                    let obj = report.as_object().expect("object");
                    obj.iter()
                        .map(|(k, v)| match v {
                            serde_json::Value::String(s) => format!("{k:<18} {s}\n"),
                            other => format!("{k:<18} {other}\n"),
                        })
                        .collect()
                }
            };
            emit(&output, body)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}
