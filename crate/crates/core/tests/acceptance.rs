//! Acceptance suite: cross-validation of the classifiers against the
//! finite-field oracle, plus the invariant checks on the sweep domain.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any FAIL.

use std::process::{Command, ExitCode};
use std::time::Instant;

use linsys3::criteria::{build_certificate, check_nonspecial, classify, Certificate, Goal, Mode, TriState};
use linsys3::oracle::{self, FieldConfig};
use linsys3::sweep::{self, Engines, RowStatus, SweepReport, SweepSpec};
use linsys3::ThreefoldClass;

/// Probe points per probe kind in the acceptance sweeps.
const PROBES: usize = 16;

fn domain(engines: Engines, probes: usize) -> SweepSpec {
    SweepSpec {
        d_min: 0,
        d_max: 8,
        r_min: 0,
        r_max: 12,
        m_max: 3,
        mode: Mode::OnAnticanonical,
        engines,
        field: FieldConfig { probes, ..FieldConfig::default() },
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail }
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        Outcome { pass: false, detail: format!("{} failures, e.g. {}", failures.len(), shown.join(" | ")) }
    }
}

fn nonspecial_cross_check(report: &SweepReport) -> Outcome {
    let mut yes = 0;
    let mut failures = Vec::new();
    for row in &report.rows {
        let (Some(c), Some(o)) = (&row.criteria, &row.oracle) else { continue };
        if c.nonspecial != TriState::Yes {
            continue;
        }
        yes += 1;
        if o.dim != o.edim || o.dim_max != o.edim {
            failures.push(format!("{}: dim {}..{} vs edim {}", row.class, o.dim, o.dim_max, o.edim));
        }
    }
    let trials = report.spec.field.primes.len() * report.spec.field.trials;
    outcome(&failures, format!("{yes} classes with nonspecial=Yes, dim = edim in all {trials} trials"))
}

fn known_special_system() -> Outcome {
    let c: ThreefoldClass = "L3(2; 1^9)".parse().unwrap();
    let report = oracle::dim_system(&c, Mode::OnAnticanonical, &FieldConfig::default()).unwrap();
    let verdict = check_nonspecial(&c);
    let cls = classify(&c, Mode::OnAnticanonical);
    let failing: Vec<&str> =
        cls.nonspecial.conditions.iter().filter(|k| !k.holds).map(|k| k.rendered.as_str()).collect();
    let pass = report.dim == 1
        && report.dim_max == 1
        && report.vdim == 0
        && report.h1 == 1
        && verdict == TriState::Unknown
        && failing.iter().any(|s| s.contains("4d=8") && s.contains("Σm=9"));
    Outcome {
        pass,
        detail: format!(
            "dim {} (max {}), vdim {}, h1 {}, nonspecial {verdict}, failing: {}",
            report.dim,
            report.dim_max,
            report.vdim,
            report.h1,
            failing.join(", ")
        ),
    }
}

fn bpf_refutation(report: &SweepReport) -> Outcome {
    let mut failures = Vec::new();
    let (mut refuted, mut clean) = (0, 0);
    for row in &report.rows {
        let (Some(c), Some(o)) = (&row.criteria, &row.oracle) else { continue };
        match (c.bpf, o.bpf_evidence) {
            (false, Some(false)) => refuted += 1,
            (true, Some(true)) => clean += 1,
            (false, _) => failures.push(format!("{}: bpf=false but no base-locus probe fired", row.class)),
            (true, _) => failures.push(format!("{}: bpf=true but fired {:?}", row.class, o.fired)),
        }
    }
    let c: ThreefoldClass = "L3(2; 1^8)".parse().unwrap();
    let cfg = FieldConfig { probes: PROBES, ..FieldConfig::default() };
    let r = oracle::verify(&c, Mode::OnAnticanonical, &cfg).unwrap();
    let on_d = r.probe("on-D").map_or(0, |p| p.fired);
    if on_d == 0 {
        failures.push("L3(2; 1^8): on-D probe did not fire".into());
    }
    outcome(
        &failures,
        format!("{refuted} bpf=false classes refuted, {clean} bpf=true classes clean, L3(2; 1^8) on-D fired {on_d} times"),
    )
}

/// Violates only the `4d ≥ Σm + 3` condition of very ampleness.
fn anticanonical_va_violation(c: &ThreefoldClass) -> bool {
    let cls = classify(c, Mode::OnAnticanonical);
    cls.very_ample.conditions.iter().filter(|k| !k.holds).all(|k| k.label.contains("4d"))
}

fn va_refutation(report: &SweepReport) -> Outcome {
    let mut failures = Vec::new();
    let (mut refuted, mut clean, mut on_d) = (0, 0, 0);
    for row in &report.rows {
        let (Some(c), Some(o)) = (&row.criteria, &row.oracle) else { continue };
        if c.very_ample {
            if o.va_evidence == Some(true) {
                clean += 1;
            } else {
                failures.push(format!("{}: very_ample=true but fired {:?}", row.class, o.fired));
            }
        } else if c.bpf {
            if o.bpf_evidence == Some(true) && o.va_evidence == Some(false) {
                refuted += 1;
            } else {
                failures.push(format!("{}: very_ample=false but every separation probe had rank 2", row.class));
            }
            if row.class.r() >= 9 && anticanonical_va_violation(&row.class) {
                if o.fired.iter().any(|f| f == "pair-on-D" || f == "pair-residual-on-D") {
                    on_d += 1;
                } else {
                    failures.push(format!("{}: no pair on D failed to separate", row.class));
                }
            }
        }
    }
    outcome(
        &failures,
        format!("{refuted} va=false bpf=true classes refuted ({on_d} by pairs on D), {clean} va=true classes separate"),
    )
}

fn cremona_failures(cert: &Certificate) -> Vec<String> {
    let mut out = Vec::new();
    for step in &cert.steps {
        for mv in &step.surface.reduction.steps {
            if mv.before.self_intersection() != mv.after.self_intersection()
                || mv.before.k_intersection() != mv.after.k_intersection()
            {
                out.push(format!("{} -> {} changes an intersection number", mv.before, mv.after));
            }
        }
    }
    out
}

fn certificate_soundness(spec: &SweepSpec) -> Outcome {
    let mut failures = Vec::new();
    let (mut built, mut moves) = (0, 0);
    for c in spec.classes() {
        let cls = classify(&c, Mode::OnAnticanonical);
        let goals = [
            (Goal::NonSpecial, cls.nonspecial.value == TriState::Yes),
            (Goal::BasePointFree, cls.bpf.holds),
            (Goal::VeryAmple, cls.very_ample.holds),
        ];
        for (goal, holds) in goals {
            let cert = build_certificate(&c, goal);
            moves += cert.steps.iter().map(|s| s.surface.reduction.steps.len()).sum::<usize>();
            failures.extend(cremona_failures(&cert));
            if holds {
                built += 1;
                if !cert.is_ok() {
                    failures.push(format!("{c} {goal}: {:?}", cert.status));
                }
            }
        }
    }
    outcome(&failures, format!("{built} certificates for positive verdicts succeed, {moves} Cremona moves preserve c² and c·K"))
}

fn chi_additivity(spec: &SweepSpec) -> Outcome {
    let mut failures = Vec::new();
    let classes = spec.classes();
    for c in &classes {
        let whole = c.vdim().unwrap() + 1;
        let residual = c.residual().vdim().unwrap() + 1;
        let plane = c.restricted_plane_class().vdim() + 1;
        if whole != residual + plane {
            failures.push(format!("{c}: {whole} != {residual} + {plane}"));
        }
    }
    outcome(&failures, format!("{} classes", classes.len()))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_linsys3"))
            .args(["sweep", "--d-max", "3", "--r-max", "6", "--m-max", "1", "--format", "csv"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let pass = a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome { pass, detail: format!("two sweep runs, {} bytes each, identical: {}", a.stdout.len(), a.stdout == b.stdout) }
}

fn boundary_probe() -> Outcome {
    let spec = SweepSpec {
        d_min: 0,
        d_max: 6,
        r_min: 8,
        r_max: 9,
        m_max: 2,
        mode: Mode::OnAnticanonical,
        engines: Engines::Both,
        field: FieldConfig { probes: PROBES, ..FieldConfig::default() },
    };
    match sweep::run(&spec) {
        Ok(report) => {
            let disagree: Vec<String> = report
                .rows
                .iter()
                .filter(|r| r.status == RowStatus::Disagree)
                .map(|r| format!("{} ({})", r.class, r.reasons.join("; ")))
                .collect();
            let text = sweep::render_text(&report);
            let pass = !report.rows.is_empty() && text.lines().count() == report.rows.len() + 2;
            let mut detail = format!("{} classes with r in {{8, 9}}, {} DISAGREE", report.rows.len(), disagree.len());
            if !disagree.is_empty() {
                detail.push_str(&format!(": {}", disagree.join(", ")));
            }
            Outcome { pass, detail }
        }
        Err(e) => Outcome { pass: false, detail: e.to_string() },
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let spec = domain(Engines::Both, PROBES);
    let report = sweep::run(&spec).expect("acceptance sweep runs");
    let sweep_time = start.elapsed();
    let criteria_only = domain(Engines::Criteria, 0);

    let results = [
        ("1 non-speciality cross-check", nonspecial_cross_check(&report)),
        ("2 known special system L3(2; 1^9)", known_special_system()),
        ("3 bpf refutation", bpf_refutation(&report)),
        ("4 va refutation", va_refutation(&report)),
        ("5 certificate soundness", certificate_soundness(&criteria_only)),
        ("6 chi-additivity", chi_additivity(&criteria_only)),
        ("7 determinism", determinism()),
        ("8 boundary probe r in {8, 9}", boundary_probe()),
    ];
    println!(
        "acceptance sweep: {} classes, d <= 8, r <= 12, m <= 3, {} trials, {PROBES} probes per kind, {:.1}s",
        report.rows.len(),
        spec.field.primes.len() * spec.field.trials,
        sweep_time.as_secs_f64()
    );
    let mut ok = true;
    for (name, o) in &results {
        println!("criterion {name}: {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        ok &= o.pass;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
