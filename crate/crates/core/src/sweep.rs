//! Batch comparison of the inequality classifiers against the oracle over a
//! box of normalized classes.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{classify, Classification, Mode, TriState};
use crate::divclass::ThreefoldClass;
use crate::error::{Error, Result};
use crate::oracle::{self, merge_report, run_trial, FieldConfig, GeometrySetup, OracleReport};

pub const MAX_D: i64 = 12;
pub const MAX_R: usize = 16;
pub const MAX_M: i64 = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engines {
    Criteria,
    Oracle,
    #[default]
    Both,
}

impl Engines {
    pub fn criteria(self) -> bool {
        self != Engines::Oracle
    }

    pub fn oracle(self) -> bool {
        self != Engines::Criteria
    }
}

impl FromStr for Engines {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "criteria" => Ok(Engines::Criteria),
            "oracle" => Ok(Engines::Oracle),
            "both" => Ok(Engines::Both),
            _ => Err(format!("unknown engine selection {s:?} (criteria, oracle, both)")),
        }
    }
}

/// The classes `L3(d; m₁ ≥ … ≥ m_r ≥ 1)` with `d`, `r` in the given ranges
/// and `m₁ ≤ m_max`, plus the engines and randomness to run on them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub d_min: i64,
    pub d_max: i64,
    pub r_min: usize,
    pub r_max: usize,
    pub m_max: i64,
    pub mode: Mode,
    pub engines: Engines,
    pub field: FieldConfig,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            d_min: 0,
            d_max: 3,
            r_min: 0,
            r_max: 6,
            m_max: 1,
            mode: Mode::default(),
            engines: Engines::default(),
            field: FieldConfig::default(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::SweepRange(msg));
        if self.d_min < 0 || self.d_min > self.d_max {
            return bad(format!("d range {}..={} is empty or negative", self.d_min, self.d_max));
        }
        if self.d_max > MAX_D {
            return bad(format!("d range {}..={} exceeds the cap d <= {MAX_D}", self.d_min, self.d_max));
        }
        if self.r_min > self.r_max {
            return bad(format!("r range {}..={} is empty", self.r_min, self.r_max));
        }
        if self.r_max > MAX_R {
            return bad(format!("r range {}..={} exceeds the cap r <= {MAX_R}", self.r_min, self.r_max));
        }
        if !(1..=MAX_M).contains(&self.m_max) {
            return bad(format!("multiplicity cap {} is outside 1..={MAX_M}", self.m_max));
        }
        if self.engines.oracle() {
            self.field.fields()?;
            self.field.check_degree(self.d_max)?;
            if self.field.primes.is_empty() || self.field.trials == 0 {
                return bad("the oracle needs at least one prime and one trial".into());
            }
        }
        Ok(())
    }

    /// All classes of the sweep in output order: by `d`, then `r`, then
    /// multiplicities in decreasing lexicographic order.
    pub fn classes(&self) -> Vec<ThreefoldClass> {
        let mut out = Vec::new();
        for d in self.d_min..=self.d_max {
            for r in self.r_min..=self.r_max {
                for mults in nonincreasing(r, self.m_max) {
                    out.push(ThreefoldClass::new(d, mults));
                }
            }
        }
        out
    }
}

/// Nonincreasing sequences of length `r` with entries in `1..=top`,
/// decreasing lexicographically.
fn nonincreasing(r: usize, top: i64) -> Vec<Vec<i64>> {
    fn go(r: usize, top: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == r {
            out.push(prefix.clone());
            return;
        }
        for m in (1..=top).rev() {
            prefix.push(m);
            go(r, m, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(r, top, &mut Vec::with_capacity(r), &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RowStatus {
    Agree,
    Disagree,
    /// Only one engine ran.
    Unchecked,
}

impl std::fmt::Display for RowStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RowStatus::Agree => "AGREE",
            RowStatus::Disagree => "DISAGREE",
            RowStatus::Unchecked => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaColumns {
    pub nonspecial: TriState,
    pub bpf: bool,
    pub very_ample: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleColumns {
    pub dim: i64,
    pub dim_max: i64,
    pub edim: i64,
    pub h1: i64,
    pub bpf_evidence: Option<bool>,
    pub va_evidence: Option<bool>,
    /// Names of the probes that fired in some trial.
    pub fired: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub class: ThreefoldClass,
    pub criteria: Option<CriteriaColumns>,
    pub oracle: Option<OracleColumns>,
    pub status: RowStatus,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
    pub disagreements: usize,
}

impl SweepReport {
    pub fn has_disagreement(&self) -> bool {
        self.disagreements > 0
    }
}

/// Where the classifier verdicts and the oracle evidence contradict each other.
///
/// A `Yes` for non-speciality must match the oracle dimension in every trial.
/// On the anticanonical curve the boolean verdicts are equivalences, so the
/// probes must fire exactly when the verdict is false; very ampleness is only
/// compared when the system is base point free. In general position the
/// verdicts are sufficient conditions and only the positive direction is checked.
pub fn compare(cls: &Classification, report: &OracleReport) -> Vec<String> {
    let mut reasons = Vec::new();
    if cls.nonspecial.value == TriState::Yes {
        for t in &report.per_trial {
            if t.dim != report.edim {
                reasons.push(format!(
                    "nonspecial=Yes but dim {} != edim {} (p={} seed={})",
                    t.dim, report.edim, t.prime, t.seed
                ));
            }
        }
    }
    if let Some(evidence) = report.bpf_evidence {
        if cls.bpf.holds && !evidence {
            reasons.push("bpf=true but a base-locus probe fired".into());
        }
        if cls.bpf.exact && !cls.bpf.holds && evidence {
            reasons.push("bpf=false but no base-locus probe fired".into());
        }
    }
    if let Some(evidence) = report.va_evidence {
        if cls.very_ample.holds && !evidence {
            reasons.push("very_ample=true but a probe fired".into());
        }
        if cls.very_ample.exact && cls.bpf.holds && !cls.very_ample.holds && evidence {
            reasons.push("very_ample=false but every separation probe had rank 2".into());
        }
    }
    reasons
}

fn oracle_columns(report: &OracleReport) -> OracleColumns {
    OracleColumns {
        dim: report.dim,
        dim_max: report.dim_max,
        edim: report.edim,
        h1: report.h1,
        bpf_evidence: report.bpf_evidence,
        va_evidence: report.va_evidence,
        fired: report.probes.iter().filter(|p| p.fired > 0).map(|p| p.name.clone()).collect(),
    }
}

/// Per-trial geometries with `r_max` points, shared by every class.
fn geometries(spec: &SweepSpec) -> Result<Vec<(u64, GeometrySetup)>> {
    spec.field
        .trial_keys()
        .into_par_iter()
        .map(|(p, seed)| Ok((seed, oracle::trial_geometry(p, seed, spec.mode, spec.r_max)?)))
        .collect()
}

/// Evaluates one class on the shared geometries.
pub fn oracle_report(
    c: &ThreefoldClass,
    spec: &SweepSpec,
    geoms: &[(u64, GeometrySetup)],
) -> Result<OracleReport> {
    let outcomes = geoms
        .iter()
        .map(|(seed, g)| run_trial(c, &g.truncated(c.r()), *seed, spec.field.probes))
        .collect::<Result<Vec<_>>>()?;
    merge_report(c, spec.mode, &spec.field, outcomes)
}

fn evaluate(c: &ThreefoldClass, spec: &SweepSpec, geoms: &[(u64, GeometrySetup)]) -> Result<SweepRow> {
    let cls = spec.engines.criteria().then(|| classify(c, spec.mode));
    let report = if spec.engines.oracle() { Some(oracle_report(c, spec, geoms)?) } else { None };
    let (status, reasons) = match (&cls, &report) {
        (Some(cls), Some(report)) => {
            let reasons = compare(cls, report);
            (if reasons.is_empty() { RowStatus::Agree } else { RowStatus::Disagree }, reasons)
        }
        _ => (RowStatus::Unchecked, Vec::new()),
    };
    Ok(SweepRow {
        class: c.clone(),
        criteria: cls.map(|cls| CriteriaColumns {
            nonspecial: cls.nonspecial.value,
            bpf: cls.bpf.holds,
            very_ample: cls.very_ample.holds,
        }),
        oracle: report.as_ref().map(oracle_columns),
        status,
        reasons,
    })
}

/// Runs the sweep; rows are evaluated in parallel and returned in class order.
pub fn run(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let geoms = if spec.engines.oracle() { geometries(spec)? } else { Vec::new() };
    let rows = spec
        .classes()
        .par_iter()
        .map(|c| evaluate(c, spec, &geoms))
        .collect::<Result<Vec<_>>>()?;
    let disagreements = rows.iter().filter(|r| r.status == RowStatus::Disagree).count();
    Ok(SweepReport { schema: 1, spec: spec.clone(), rows, disagreements })
}

/// One flat CSV/text record.
#[derive(Serialize)]
struct FlatRow {
    class: String,
    d: i64,
    r: usize,
    nonspecial: String,
    bpf: String,
    very_ample: String,
    dim: String,
    dim_max: String,
    edim: String,
    h1: String,
    bpf_evidence: String,
    va_evidence: String,
    fired: String,
    status: String,
    reasons: String,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn flatten(row: &SweepRow) -> FlatRow {
    let c = row.criteria.as_ref();
    let o = row.oracle.as_ref();
    FlatRow {
        class: row.class.to_string(),
        d: row.class.d,
        r: row.class.r(),
        nonspecial: opt(c.map(|c| c.nonspecial)),
        bpf: opt(c.map(|c| c.bpf)),
        very_ample: opt(c.map(|c| c.very_ample)),
        dim: opt(o.map(|o| o.dim)),
        dim_max: opt(o.map(|o| o.dim_max)),
        edim: opt(o.map(|o| o.edim)),
        h1: opt(o.map(|o| o.h1)),
        bpf_evidence: opt(o.and_then(|o| o.bpf_evidence)),
        va_evidence: opt(o.and_then(|o| o.va_evidence)),
        fired: o.map(|o| o.fired.join(" ")).unwrap_or_default(),
        status: row.status.to_string(),
        reasons: row.reasons.join("; "),
    }
}

pub fn render_csv(report: &SweepReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &report.rows {
        w.serialize(flatten(row)).map_err(|e| Error::Invariant(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

pub fn render_json(report: &SweepReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Invariant(e.to_string()))
}

pub fn render_text(report: &SweepReport) -> String {
    let header = ["class", "ns", "bpf", "va", "dim", "edim", "h1", "bpf-ev", "va-ev", "status", "fired / reasons"];
    let records: Vec<[String; 11]> = report
        .rows
        .iter()
        .map(|row| {
            let f = flatten(row);
            let tail = if row.reasons.is_empty() { f.fired } else { f.reasons };
            [f.class, f.nonspecial, f.bpf, f.very_ample, f.dim, f.edim, f.h1, f.bpf_evidence, f.va_evidence, f.status, tail]
        })
        .collect();
    let mut widths = header.map(str::len);
    for rec in &records {
        for (w, cell) in widths.iter_mut().zip(rec) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut s = String::new();
    let mut line = |cells: &[&str]| {
        let last = cells.len() - 1;
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i == last {
                s.push_str(cell);
            } else {
                let pad = w - cell.chars().count();
                let _ = write!(s, "{cell}{}  ", " ".repeat(pad));
            }
        }
        let trimmed = s.trim_end().len();
        s.truncate(trimmed);
        s.push('\n');
    };
    line(&header);
    for rec in &records {
        let cells: Vec<&str> = rec.iter().map(String::as_str).collect();
        line(&cells);
    }
    let _ = writeln!(s, "{} classes, {} DISAGREE", report.rows.len(), report.disagreements);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_enumeration() {
        assert_eq!(nonincreasing(0, 3), vec![Vec::<i64>::new()]);
        assert_eq!(nonincreasing(2, 2), vec![vec![2, 2], vec![2, 1], vec![1, 1]]);
        // multisets of size r from m values: C(r+m−1, r)
        assert_eq!(nonincreasing(12, 3).len(), 91);
        let spec = SweepSpec { d_min: 0, d_max: 8, r_min: 0, r_max: 12, m_max: 3, ..SweepSpec::default() };
        assert_eq!(spec.classes().len(), 9 * 455);
        assert!(spec.classes().iter().all(|c| c.is_normalized()));
    }

    #[test]
    fn caps_are_enforced() {
        let ok = SweepSpec::default();
        assert!(ok.validate().is_ok());
        for bad in [
            SweepSpec { d_max: 13, ..ok.clone() },
            SweepSpec { r_max: 17, ..ok.clone() },
            SweepSpec { m_max: 6, ..ok.clone() },
            SweepSpec { d_min: 4, d_max: 3, ..ok.clone() },
            SweepSpec { r_min: 7, ..ok.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::SweepRange(_))), "{bad:?}");
        }
        let msg = SweepSpec { d_max: 13, ..ok }.validate().unwrap_err().to_string();
        assert!(msg.contains("d range"), "{msg}");
    }

    #[test]
    fn criteria_only_sweep() {
        let spec = SweepSpec { engines: Engines::Criteria, ..SweepSpec::default() };
        let report = run(&spec).unwrap();
        assert!(!report.has_disagreement());
        assert!(report.rows.iter().all(|r| r.oracle.is_none() && r.status == RowStatus::Unchecked));
        assert_eq!(report.rows.len(), 4 * 7);
    }

    #[test]
    fn shared_geometry_matches_standalone_oracle() {
        let spec = SweepSpec {
            d_max: 2,
            r_max: 4,
            field: FieldConfig { trials: 1, probes: 8, ..FieldConfig::default() },
            ..SweepSpec::default()
        };
        let geoms = geometries(&spec).unwrap();
        let c = ThreefoldClass::new(2, vec![1, 1, 1]);
        let shared = oracle_report(&c, &spec, &geoms).unwrap();
        let alone = oracle::verify(&c, spec.mode, &spec.field).unwrap();
        assert_eq!(shared, alone);
    }

    #[test]
    fn renderings_are_consistent() {
        let spec = SweepSpec {
            d_max: 2,
            r_max: 2,
            field: FieldConfig { trials: 1, probes: 4, ..FieldConfig::default() },
            ..SweepSpec::default()
        };
        let report = run(&spec).unwrap();
        let csv = render_csv(&report).unwrap();
        assert_eq!(csv.lines().count(), report.rows.len() + 1);
        assert!(csv.starts_with("class,d,r,nonspecial"));
        let text = render_text(&report);
        assert!(text.lines().next().unwrap().starts_with("class"));
        let back: SweepReport = serde_json::from_str(&render_json(&report).unwrap()).unwrap();
        assert_eq!(back, report);
    }
}
