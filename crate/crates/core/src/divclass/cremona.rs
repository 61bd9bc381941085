use serde::{Deserialize, Serialize};

use super::PlaneClass;

/// One quadratic transformation centred at three exceptional curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CremonaStep {
    /// Positions (in the sorted multiplicity list of `before`) the move acted on.
    pub indices: [usize; 3],
    pub before: PlaneClass,
    pub after: PlaneClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ReductionStatus {
    InStandardForm,
    NotStandard { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionLog {
    pub steps: Vec<CremonaStep>,
    #[serde(flatten)]
    pub status: ReductionStatus,
}

impl ReductionLog {
    pub fn is_standard(&self) -> bool {
        self.status == ReductionStatus::InStandardForm
    }
}

/// Greedy Cremona reduction: sort, and while `d < m₁+m₂+m₃` apply
/// `d ↦ 2d−m₁−m₂−m₃`, `mᵢ ↦ d − (m₁+m₂+m₃ − mᵢ)` on the three largest.
///
/// Fewer than three multiplicities are padded with zeros, so the result may
/// carry up to three entries. Every applied move strictly lowers `d`.
pub fn cremona_reduce(c: &PlaneClass) -> (PlaneClass, ReductionLog) {
    let mut cur = c.sorted();
    while cur.mults.len() < 3 {
        cur.mults.push(0);
    }
    let mut steps = Vec::new();
    let status = loop {
        cur = cur.sorted();
        if cur.d < 0 {
            break ReductionStatus::NotStandard {
                reason: format!("negative degree {}", cur.d),
            };
        }
        let top: i64 = cur.mults[..3].iter().sum();
        if cur.d >= top {
            match cur.mults.last() {
                Some(&m) if m < 0 => {
                    break ReductionStatus::NotStandard {
                        reason: format!("negative multiplicity {m} with d >= m1+m2+m3"),
                    }
                }
                _ => break ReductionStatus::InStandardForm,
            }
        }
        let before = cur.clone();
        let excess = cur.d - top;
        cur.d += excess;
        for m in &mut cur.mults[..3] {
            *m += excess;
        }
        steps.push(CremonaStep {
            indices: [0, 1, 2],
            before,
            after: cur.clone(),
        });
    };
    let out = if status == ReductionStatus::InStandardForm { cur.sorted() } else { cur };
    (out, ReductionLog { steps, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_standard_is_fixed() {
        let c = PlaneClass::new(3, vec![1; 10]);
        let (out, log) = cremona_reduce(&c);
        assert_eq!(out, c);
        assert!(log.steps.is_empty());
        assert!(log.is_standard());
    }

    #[test]
    fn conics_through_three_points_become_lines() {
        let (out, log) = cremona_reduce(&PlaneClass::new(2, vec![1, 1, 1]));
        assert_eq!(out, PlaneClass::new(1, vec![0, 0, 0]));
        assert_eq!(log.steps.len(), 1);
        assert!(log.is_standard());
    }

    #[test]
    fn overloaded_cubic_is_not_standard() {
        let (out, log) = cremona_reduce(&PlaneClass::new(5, vec![3, 3, 3]));
        assert_eq!(out, PlaneClass::new(1, vec![-1, -1, -1]));
        assert!(!log.is_standard());
    }

    #[test]
    fn line_through_two_points_is_not_standard() {
        let (_, log) = cremona_reduce(&PlaneClass::new(1, vec![1, 1]));
        assert!(!log.is_standard());
    }

    #[test]
    fn moves_preserve_intersection_numbers() {
        let c = PlaneClass::new(7, vec![4, 3, 3, 2, 2, 1]);
        let (out, log) = cremona_reduce(&c);
        assert!(!log.steps.is_empty());
        for s in &log.steps {
            assert_eq!(s.before.self_intersection(), s.after.self_intersection());
            assert_eq!(s.before.k_intersection(), s.after.k_intersection());
            assert_eq!(s.before.vdim(), s.after.vdim());
            assert!(s.after.d < s.before.d);
        }
        assert_eq!(out.self_intersection(), c.self_intersection());
    }
}
