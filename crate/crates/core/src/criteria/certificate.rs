//! Inductive certificates: the residual-sequence inductions behind the three
//! criteria, recorded step by step so each restricted surface class, its
//! standardness witness and its K-intersection can be re-checked.

use serde::{Deserialize, Serialize};

use super::{
    check_bpf, check_nonspecial, check_very_ample, surface_check, Goal, SurfaceCheck, TriState,
    GENERAL_POSITION_MAX_R,
};
use crate::divclass::{PlaneClass, ThreefoldClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCondition {
    pub label: String,
    pub class: String,
    pub holds: bool,
}

impl SideCondition {
    fn new(label: impl Into<String>, class: impl ToString, holds: bool) -> Self {
        Self { label: label.into(), class: class.to_string(), holds }
    }

    fn nonspecial(label: &str, c: &ThreefoldClass) -> Self {
        Self::new(format!("{label}: h1 = 0 by the ns criterion"), c, check_nonspecial(c) == TriState::Yes)
    }

    fn bpf(label: &str, c: &ThreefoldClass) -> Self {
        Self::new(format!("{label}: base point free by the bpf criterion"), c, check_bpf(c))
    }

    fn very_ample(label: &str, c: &ThreefoldClass) -> Self {
        Self::new(format!("{label}: very ample by the va criterion"), c, check_very_ample(c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub index: usize,
    pub class: ThreefoldClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    /// `L ⊗ O_{Q_r}` written on the blown-up plane.
    pub restricted: PlaneClass,
    pub surface: SurfaceCheck,
    pub side_conditions: Vec<SideCondition>,
    /// The class handed to the next step (before dropping zero multiplicities).
    pub residual: ThreefoldClass,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalRule {
    /// At most eight points: they are general points of P³, and the known
    /// results for general points close the induction.
    GeneralPositionBaseCase,
    /// At most two points: separation away from the exceptional divisors is immediate.
    FewPoints,
    /// The number of points dropped; the induction hypothesis on `r` applies.
    InductionOnPoints,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminal {
    pub rule: TerminalRule,
    pub class: ThreefoldClass,
    pub r: usize,
    /// The criterion re-evaluated on the terminal class.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertStatus {
    Ok,
    Failed {
        #[serde(skip_serializing_if = "Option::is_none")]
        step: Option<usize>,
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub goal: Goal,
    pub class: ThreefoldClass,
    /// Checks made once before the induction (the exceptional divisors for VA).
    pub top_level: Vec<SideCondition>,
    pub steps: Vec<Step>,
    pub terminal: Option<Terminal>,
    #[serde(flatten)]
    pub status: CertStatus,
}

impl Certificate {
    pub fn is_ok(&self) -> bool {
        self.status == CertStatus::Ok
    }

    pub fn failed_step(&self) -> Option<usize> {
        match &self.status {
            CertStatus::Failed { step, .. } => *step,
            CertStatus::Ok => None,
        }
    }
}

struct Builder {
    goal: Goal,
    top_level: Vec<SideCondition>,
    steps: Vec<Step>,
}

impl Builder {
    /// Records a step; returns false when it fails.
    fn step(
        &mut self,
        class: &ThreefoldClass,
        branch: Option<&str>,
        side_conditions: Vec<SideCondition>,
    ) -> bool {
        let restricted = class.restricted_plane_class();
        let surface = surface_check(&restricted, self.goal);
        let holds = surface.holds && side_conditions.iter().all(|s| s.holds);
        self.steps.push(Step {
            index: self.steps.len() + 1,
            class: class.clone(),
            branch: branch.map(str::to_string),
            restricted,
            surface,
            side_conditions,
            residual: class.residual(),
            holds,
        });
        holds
    }

    fn finish(self, class: &ThreefoldClass, terminal: Option<Terminal>) -> Certificate {
        let status = if let Some(bad) = self.top_level.iter().find(|s| !s.holds) {
            CertStatus::Failed { step: None, reason: format!("{} fails for {}", bad.label, bad.class) }
        } else if let Some(bad) = self.steps.iter().find(|s| !s.holds) {
            let reason = if !bad.surface.standard {
                format!("restricted class {} is not standard", bad.restricted)
            } else if !bad.surface.holds {
                format!(
                    "restricted class {} has c·K = {}, needs {}",
                    bad.restricted, bad.surface.k_intersection, bad.surface.threshold
                )
            } else {
                let s = bad.side_conditions.iter().find(|s| !s.holds).expect("failing side condition");
                format!("{} fails for {}", s.label, s.class)
            };
            CertStatus::Failed { step: Some(bad.index), reason }
        } else {
            match &terminal {
                Some(t) if t.holds => CertStatus::Ok,
                Some(t) => CertStatus::Failed {
                    step: None,
                    reason: format!("terminal class {} does not meet the {} criterion", t.class, self.goal),
                },
                None => CertStatus::Failed { step: None, reason: "induction did not terminate".into() },
            }
        };
        Certificate {
            schema: 1,
            goal: self.goal,
            class: class.clone(),
            top_level: self.top_level,
            steps: self.steps,
            terminal,
            status,
        }
    }
}

/// Runs the induction for `goal` on `c` and records every step.
///
/// The certificate is built even when the criterion does not hold; it then
/// stops at the first failing step.
pub fn build_certificate(c: &ThreefoldClass, goal: Goal) -> Certificate {
    let mut b = Builder { goal, top_level: Vec::new(), steps: Vec::new() };
    if c.mults.iter().any(|&m| m < 0) {
        b.top_level.push(SideCondition::new("multiplicities are non-negative", c, false));
        return b.finish(c, None);
    }
    let start = c.normalized();
    let terminal = match goal {
        Goal::NonSpecial => nonspecial_chain(&mut b, start),
        Goal::BasePointFree => bpf_chain(&mut b, start),
        Goal::VeryAmple => very_ample_chain(&mut b, start),
    };
    b.finish(c, terminal)
}

fn terminal(rule: TerminalRule, class: ThreefoldClass, holds: bool) -> Option<Terminal> {
    Some(Terminal { rule, r: class.r(), class, holds })
}

/// Peel off the quadric until at most eight points remain.
fn nonspecial_chain(b: &mut Builder, mut cur: ThreefoldClass) -> Option<Terminal> {
    loop {
        if cur.r() <= GENERAL_POSITION_MAX_R {
            let holds = check_nonspecial(&cur) == TriState::Yes;
            return terminal(TerminalRule::GeneralPositionBaseCase, cur, holds);
        }
        let residual = cur.residual().normalized();
        let side = vec![SideCondition::nonspecial("residual", &residual)];
        if !b.step(&cur, None, side) {
            return None;
        }
        cur = residual;
    }
}

/// Peel off the quadric `m_r` times, until the last point disappears.
fn bpf_chain(b: &mut Builder, mut cur: ThreefoldClass) -> Option<Terminal> {
    if cur.r() <= GENERAL_POSITION_MAX_R {
        let holds = check_bpf(&cur);
        return terminal(TerminalRule::GeneralPositionBaseCase, cur, holds);
    }
    let r = cur.r();
    while cur.r() == r {
        let residual = cur.residual().normalized();
        let side = vec![
            SideCondition::nonspecial("residual", &residual),
            SideCondition::bpf("residual", &residual),
        ];
        if !b.step(&cur, None, side) {
            return None;
        }
        cur = residual;
    }
    let holds = check_bpf(&cur);
    terminal(TerminalRule::InductionOnPoints, cur, holds)
}

fn very_ample_chain(b: &mut Builder, mut cur: ThreefoldClass) -> Option<Terminal> {
    for (i, &m) in cur.mults.iter().enumerate() {
        let e = format!("E_{}", i + 1);
        b.top_level.push(SideCondition::new(
            format!("{e}: restriction L2({m}) separates on {e}"),
            PlaneClass::new(m, vec![]),
            m >= 1,
        ));
        let twisted = cur.bump(i).sorted();
        b.top_level.push(SideCondition::nonspecial(&format!("{e}: L - {e}"), &twisted));
        b.top_level.push(SideCondition::bpf(&format!("{e}: L - {e}"), &twisted));
    }
    loop {
        if cur.r() <= 2 {
            let holds = check_very_ample(&cur);
            return terminal(TerminalRule::FewPoints, cur, holds);
        }
        let last = *cur.mults.last().expect("r > 2");
        let residual = cur.residual();
        if last == 1 {
            let reduced = cur.effective_residual().normalized();
            let side = vec![
                SideCondition::nonspecial("residual", &residual),
                SideCondition::bpf("effective residual", &reduced),
                SideCondition::very_ample("effective residual on fewer points", &reduced),
            ];
            if !b.step(&cur, Some("m_r = 1"), side) {
                return None;
            }
            let holds = check_very_ample(&reduced);
            return terminal(TerminalRule::InductionOnPoints, reduced, holds);
        }
        let side = vec![
            SideCondition::nonspecial("residual", &residual),
            SideCondition::very_ample("residual", &residual),
        ];
        if !b.step(&cur, Some("m_r > 1"), side) {
            return None;
        }
        cur = residual;
    }
}
