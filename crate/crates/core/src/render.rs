//! Human-readable renderings of classifications and certificates.

use std::fmt::Write as _;

use crate::criteria::{CertStatus, Certificate, Classification, Condition};

fn conditions(s: &mut String, conds: &[Condition]) {
    for c in conds {
        let _ = writeln!(s, "    {:<28} {}", c.label, c.rendered);
    }
}

pub fn classification_text(c: &Classification) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "class        {}", c.class);
    let _ = writeln!(s, "mode         {}", serde_json::to_value(c.mode).unwrap().as_str().unwrap_or(""));
    let _ = writeln!(s, "nonspecial:  {} ({})", c.nonspecial.value, c.nonspecial.reason);
    conditions(&mut s, &c.nonspecial.conditions);
    let _ = writeln!(s, "bpf:         {}", c.bpf.holds);
    conditions(&mut s, &c.bpf.conditions);
    let _ = writeln!(s, "very ample:  {}", c.very_ample.holds);
    conditions(&mut s, &c.very_ample.conditions);
    for w in &c.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

fn mark(b: bool) -> &'static str {
    if b {
        "✓"
    } else {
        "✗"
    }
}

pub fn certificate_text(cert: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} certificate for {}", cert.goal, cert.class);
    for side in &cert.top_level {
        let _ = writeln!(s, "  {} {}  {}", mark(side.holds), side.label, side.class);
    }
    if !cert.steps.is_empty() {
        let _ = writeln!(s, "  {:>4}  {:<24} {:<24} {:>5}  {:<13} {:<24} ok", "step", "class", "restricted", "c.K", "needs", "residual");
    }
    for st in &cert.steps {
        let _ = writeln!(
            s,
            "  {:>4}  {:<24} {:<24} {:>5}  {:<13} {:<24} {}",
            st.index,
            st.class.to_string(),
            st.restricted.to_string(),
            st.surface.k_intersection,
            st.surface.threshold,
            st.residual.to_string(),
            mark(st.holds),
        );
        if let Some(b) = &st.branch {
            let _ = writeln!(s, "        branch: {b}");
        }
        if !st.surface.standard {
            let _ = writeln!(s, "        restricted class is not standard");
        }
        for side in &st.side_conditions {
            let _ = writeln!(s, "        {} {}  {}", mark(side.holds), side.label, side.class);
        }
    }
    if let Some(t) = &cert.terminal {
        let rule = serde_json::to_value(t.rule).unwrap();
        let _ = writeln!(s, "  terminal: {} {} (r'={}) {}", rule.as_str().unwrap_or(""), t.class, t.r, mark(t.holds));
    }
    match &cert.status {
        CertStatus::Ok => s.push_str("status: ok\n"),
        CertStatus::Failed { step: Some(i), reason } => {
            let _ = writeln!(s, "status: failed at step {i}: {reason}");
        }
        CertStatus::Failed { step: None, reason } => {
            let _ = writeln!(s, "status: failed: {reason}");
        }
    }
    s
}
