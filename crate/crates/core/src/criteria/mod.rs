//! Inequality classifiers for non-speciality, base point freeness and very
//! ampleness of `L3(d; m₁,…,m_r)` with the points on the quartic curve `D`,
//! together with the surface predicates used by the inductive certificates.

mod certificate;

pub use certificate::{
    build_certificate, CertStatus, Certificate, SideCondition, Step, Terminal, TerminalRule,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::divclass::{cremona_reduce, PlaneClass, ReductionLog, ThreefoldClass};

/// Number of points from which the `4d ≥ Σm + 2` condition of base point
/// freeness is enforced. Seven general points of P³ already force an eighth
/// base point of the net of quadrics through them, so the cut-off is 7.
pub const BPF_ANTICANONICAL_FROM: usize = 7;
/// Number of points from which `4d ≥ Σm + 3` is enforced for very ampleness.
pub const VA_ANTICANONICAL_FROM: usize = 9;
/// Number of points from which `4d ≥ Σm` is enforced for non-speciality.
pub const NS_ANTICANONICAL_FROM: usize = 9;
/// Beyond this many points the general-position results no longer apply and
/// the inductions have to run.
pub const GENERAL_POSITION_MAX_R: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Goal {
    #[serde(rename = "NS")]
    NonSpecial,
    #[serde(rename = "BPF")]
    BasePointFree,
    #[serde(rename = "VA")]
    VeryAmple,
}

impl Goal {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ns" | "nonspecial" => Some(Goal::NonSpecial),
            "bpf" => Some(Goal::BasePointFree),
            "va" | "very-ample" => Some(Goal::VeryAmple),
            _ => None,
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Goal::NonSpecial => "NS",
            Goal::BasePointFree => "BPF",
            Goal::VeryAmple => "VA",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Points general on the anticanonical curve of a smooth quadric.
    #[default]
    OnAnticanonical,
    /// Points general in P³; verdicts are sufficient conditions only.
    GeneralPosition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Yes => "Yes",
            TriState::No => "No",
            TriState::Unknown => "Unknown",
        })
    }
}

/// One inequality of a theorem, evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub label: String,
    pub lhs: i64,
    pub rhs: i64,
    pub strict: bool,
    /// False when the condition is switched off for this number of points.
    pub applies: bool,
    pub holds: bool,
    pub rendered: String,
}

impl Condition {
    fn new(label: &str, lhs_name: &str, lhs: i64, rhs_name: &str, rhs: i64, strict: bool) -> Self {
        let holds = if strict { lhs > rhs } else { lhs >= rhs };
        let rel = match (strict, holds) {
            (false, true) => "≥",
            (false, false) => "<",
            (true, true) => ">",
            (true, false) => "≤",
        };
        let mark = if holds { "✓" } else { "✗" };
        Self {
            label: label.to_string(),
            lhs,
            rhs,
            strict,
            applies: true,
            holds,
            rendered: format!("{lhs_name}={lhs} {rel} {rhs_name}={rhs} {mark}"),
        }
    }

    fn gated(mut self, r: usize, from: usize) -> Self {
        if r < from {
            self.applies = false;
            self.holds = true;
            self.rendered = format!("not required (r={r} < {from})");
        }
        self
    }

    fn vacuous(label: &str, why: &str) -> Self {
        Self {
            label: label.to_string(),
            lhs: 0,
            rhs: 0,
            strict: false,
            applies: false,
            holds: true,
            rendered: format!("vacuous ({why})"),
        }
    }
}

fn all_hold(conds: &[Condition]) -> bool {
    conds.iter().all(|c| c.holds)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsVerdict {
    pub value: TriState,
    pub reason: String,
    pub conditions: Vec<Condition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoolVerdict {
    pub holds: bool,
    /// True when the verdict is an equivalence; false when only sufficient.
    pub exact: bool,
    pub conditions: Vec<Condition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub schema: u32,
    pub class: ThreefoldClass,
    pub mode: Mode,
    pub nonspecial: NsVerdict,
    pub bpf: BoolVerdict,
    pub very_ample: BoolVerdict,
    pub warnings: Vec<String>,
}

/// The non-speciality conditions, evaluated on the normalized class.
pub fn nonspecial_verdict(c: &ThreefoldClass) -> NsVerdict {
    if let Some(&m) = c.mults.iter().find(|&&m| m < 0) {
        return NsVerdict {
            value: TriState::Unknown,
            reason: format!("negative multiplicity {m} is outside the theorem"),
            conditions: Vec::new(),
        };
    }
    let n = c.normalized();
    let r = n.r();
    let m = |i: usize| n.mults.get(i).copied().unwrap_or(0);
    let top4: i64 = (0..4).map(m).sum();
    let conditions = vec![
        Condition::new("hypothesis: 2d ≥ m1+m2+m3+m4", "2d", 2 * n.d, "m1+m2+m3+m4", top4, false),
        Condition::new("(1) d ≥ m1+m2-1", "d", n.d, "m1+m2-1", m(0) + m(1) - 1, false),
        Condition::new("(2) 4d ≥ Σm", "4d", 4 * n.d, "Σm", n.mult_sum(), false)
            .gated(r, NS_ANTICANONICAL_FROM),
    ];
    let (value, reason) = if all_hold(&conditions) {
        (TriState::Yes, "all conditions hold: h¹ = 0".to_string())
    } else {
        let failed: Vec<&str> = conditions.iter().filter(|c| !c.holds).map(|c| c.label.as_str()).collect();
        (TriState::Unknown, format!("sufficient criterion not met: {}", failed.join("; ")))
    };
    NsVerdict { value, reason, conditions }
}

/// `Yes` when the sufficient criterion for `h¹ = 0` applies, otherwise `Unknown`.
pub fn check_nonspecial(c: &ThreefoldClass) -> TriState {
    nonspecial_verdict(c).value
}

/// Base point freeness conditions on the sorted class (zeros are counted in `r`).
pub fn bpf_conditions(c: &ThreefoldClass) -> Vec<Condition> {
    let s = c.sorted();
    let r = s.r();
    let m = |i: usize| s.mults.get(i).copied().unwrap_or(0);
    let first = match s.mults.last() {
        Some(&last) => Condition::new("(1) m_r ≥ 0", "m_r", last, "0", 0, false),
        None => Condition::vacuous("(1) m_r ≥ 0", "r=0"),
    };
    vec![
        first,
        Condition::new("(2) d ≥ m1+m2", "d", s.d, "m1+m2", m(0) + m(1), false),
        Condition::new("(3) 4d ≥ Σm+2", "4d", 4 * s.d, "Σm+2", s.mult_sum() + 2, false)
            .gated(r, BPF_ANTICANONICAL_FROM),
    ]
}

pub fn check_bpf(c: &ThreefoldClass) -> bool {
    all_hold(&bpf_conditions(c))
}

/// Very ampleness conditions on the sorted class (zeros are counted in `r`).
pub fn very_ample_conditions(c: &ThreefoldClass) -> Vec<Condition> {
    let s = c.sorted();
    let r = s.r();
    let m = |i: usize| s.mults.get(i).copied().unwrap_or(0);
    let first = match s.mults.last() {
        Some(&last) => Condition::new("(1) m_r > 0", "m_r", last, "0", 0, true),
        None => Condition::vacuous("(1) m_r > 0", "r=0"),
    };
    let second = match r {
        0 => Condition::new("(2) d ≥ 1", "d", s.d, "1", 1, false),
        1 => Condition::new("(2) d ≥ m1+1", "d", s.d, "m1+1", m(0) + 1, false),
        _ => Condition::new("(2) d ≥ m1+m2+1", "d", s.d, "m1+m2+1", m(0) + m(1) + 1, false),
    };
    vec![
        first,
        second,
        Condition::new("(3) 4d ≥ Σm+3", "4d", 4 * s.d, "Σm+3", s.mult_sum() + 3, false)
            .gated(r, VA_ANTICANONICAL_FROM),
    ]
}

pub fn check_very_ample(c: &ThreefoldClass) -> bool {
    all_hold(&very_ample_conditions(c))
}

pub fn classify(c: &ThreefoldClass, mode: Mode) -> Classification {
    let mut warnings = Vec::new();
    if c.mults.contains(&0) {
        warnings.push(format!(
            "{c} has zero multiplicities; they count towards r in the bpf/va thresholds (normalize to drop them)"
        ));
    }
    let exact = mode == Mode::OnAnticanonical;
    if !exact {
        warnings.push("general-position mode: bpf and very-ample verdicts are sufficient conditions only".into());
    }
    let bpf = bpf_conditions(c);
    let va = very_ample_conditions(c);
    Classification {
        schema: 1,
        class: c.clone(),
        mode,
        nonspecial: nonspecial_verdict(c),
        bpf: BoolVerdict { holds: all_hold(&bpf), exact, conditions: bpf },
        very_ample: BoolVerdict { holds: all_hold(&va), exact, conditions: va },
        warnings,
    }
}

/// Outcome of a surface predicate on a restricted plane class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceCheck {
    pub class: PlaneClass,
    pub standard: bool,
    pub reduction: ReductionLog,
    /// `c·K_{B_s}`; invariant under Cremona moves, so taken on `class` itself.
    pub k_intersection: i64,
    pub threshold: String,
    pub holds: bool,
}

/// Largest admissible `c·K` for the goal: `≤ 0` (h¹ = 0), `≤ −2` (base point
/// free), `≤ −3` i.e. `c·(−K) ≥ 3` (very ample).
pub fn k_threshold(goal: Goal) -> i64 {
    match goal {
        Goal::NonSpecial => 0,
        Goal::BasePointFree => -2,
        Goal::VeryAmple => -3,
    }
}

pub fn surface_check(c: &PlaneClass, goal: Goal) -> SurfaceCheck {
    let (_, reduction) = cremona_reduce(c);
    let standard = reduction.is_standard();
    let k = c.k_intersection();
    let bound = k_threshold(goal);
    let threshold = match goal {
        Goal::VeryAmple => "c·(-K) ≥ 3".to_string(),
        _ => format!("c·K ≤ {bound}"),
    };
    SurfaceCheck {
        class: c.clone(),
        standard,
        reduction,
        k_intersection: k,
        threshold,
        holds: standard && k <= bound,
    }
}

/// Standard class meeting the goal's K-intersection threshold.
pub fn surface_predicate(c: &PlaneClass, goal: Goal) -> bool {
    surface_check(c, goal).holds
}
