//! Divisor classes on the three ambient spaces: the blow-up `X_r` of P³,
//! the blown-up quadric `Q_r` and the blown-up plane `B_s`.
//!
//! Classes are plain integer records. Everything here is exact `i64`
//! arithmetic; nothing is cached.

mod cremona;
mod notation;

pub use cremona::{cremona_reduce, CremonaStep, ReductionLog, ReductionStatus};
pub use notation::{parse_any, AnyClass};

use crate::error::{Error, Result};

/// `C(n, 3)` with the truncation `C(n, 3) = 0` for `n < 3`.
pub fn binom3(n: i64) -> i64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// `d·E₀ − Σ mᵢEᵢ` on the blow-up of P³, written `L3(d; m1,…,mr)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThreefoldClass {
    pub d: i64,
    pub mults: Vec<i64>,
}

/// `a·f₁ + b·f₂ − Σ mᵢeᵢ` on the blown-up quadric, written `LQ(a,b; …)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadricClass {
    pub a: i64,
    pub b: i64,
    pub mults: Vec<i64>,
}

/// `d·h − Σ mᵢe′ᵢ` on the blown-up plane, written `L2(d; …)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneClass {
    pub d: i64,
    pub mults: Vec<i64>,
}

fn sorted_desc(mults: &[i64]) -> Vec<i64> {
    let mut m = mults.to_vec();
    m.sort_unstable_by(|a, b| b.cmp(a));
    m
}

/// `Σ xᵢyᵢ` over the exceptional coefficients, padding the shorter list with zeros.
fn exceptional_dot(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

impl ThreefoldClass {
    pub fn new(d: i64, mults: impl Into<Vec<i64>>) -> Self {
        Self { d, mults: mults.into() }
    }

    pub fn r(&self) -> usize {
        self.mults.len()
    }

    pub fn mult_sum(&self) -> i64 {
        self.mults.iter().sum()
    }

    /// Multiplicities sorted non-increasing; zeros kept.
    pub fn sorted(&self) -> Self {
        Self::new(self.d, sorted_desc(&self.mults))
    }

    /// Sorted non-increasing with zero multiplicities dropped.
    pub fn normalized(&self) -> Self {
        let mut m = sorted_desc(&self.mults);
        m.retain(|&x| x != 0);
        Self::new(self.d, m)
    }

    pub fn is_normalized(&self) -> bool {
        self.mults.windows(2).all(|w| w[0] >= w[1]) && !self.mults.contains(&0)
    }

    /// The i-th multiplicity (0-based) of the sorted class, zero past the end.
    pub fn sorted_mult(&self, i: usize) -> i64 {
        sorted_desc(&self.mults).get(i).copied().unwrap_or(0)
    }

    /// Virtual dimension `C(d+3,3) − Σ C(mᵢ+2,3) − 1`.
    pub fn vdim(&self) -> Result<i64> {
        if self.d < -3 {
            return Err(Error::DegreeTooNegative(self.d));
        }
        let conditions: i64 = self.mults.iter().map(|&m| binom3(m + 2)).sum();
        Ok(binom3(self.d + 3) - conditions - 1)
    }

    /// Expected dimension `max{−1, vdim}`.
    pub fn edim(&self) -> Result<i64> {
        self.vdim().map(|v| v.max(-1))
    }

    /// Number of linear conditions imposed by the fat points, `Σ C(mᵢ+2,3)`.
    pub fn condition_count(&self) -> usize {
        self.mults.iter().map(|&m| binom3(m + 2) as usize).sum()
    }

    /// `L ⊗ O_{Q_r} = LQ(d,d; m₁,…,m_r)`.
    pub fn restrict_to_quadric(&self) -> QuadricClass {
        QuadricClass::new(self.d, self.d, self.mults.clone())
    }

    /// Kernel of restriction to the quadric: `L3(d−2; m₁−1,…,m_r−1)`.
    pub fn residual(&self) -> Self {
        Self::new(self.d - 2, self.mults.iter().map(|m| m - 1).collect::<Vec<_>>())
    }

    /// Like [`residual`](Self::residual) but clamps negative multiplicities to 0.
    pub fn effective_residual(&self) -> Self {
        Self::new(
            self.d - 2,
            self.mults.iter().map(|m| (m - 1).max(0)).collect::<Vec<_>>(),
        )
    }

    /// The plane class of the restriction to the quadric, after blowing down.
    pub fn restricted_plane_class(&self) -> PlaneClass {
        self.restrict_to_quadric().to_plane()
    }

    /// Same class with `mᵢ` raised by one (`L(Eᵢ)` in the twisted sense `L − Eᵢ`).
    pub fn bump(&self, i: usize) -> Self {
        let mut m = self.mults.clone();
        m[i] += 1;
        Self::new(self.d, m)
    }
}

impl QuadricClass {
    pub fn new(a: i64, b: i64, mults: impl Into<Vec<i64>>) -> Self {
        Self { a, b, mults: mults.into() }
    }

    pub fn f1() -> Self {
        Self::new(1, 0, vec![])
    }

    pub fn f2() -> Self {
        Self::new(0, 1, vec![])
    }

    /// `K_{Q_r} = −2f₁ − 2f₂ + Σ eᵢ`.
    pub fn canonical(r: usize) -> Self {
        Self::new(-2, -2, vec![-1; r])
    }

    /// `f₁·f₂ = 1`, `fᵢ² = 0`, `eᵢ·eⱼ = −δᵢⱼ`.
    pub fn dot(&self, other: &Self) -> i64 {
        self.a * other.b + self.b * other.a - exceptional_dot(&self.mults, &other.mults)
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }

    pub fn k_intersection(&self) -> i64 {
        self.dot(&Self::canonical(self.mults.len()))
    }

    /// Riemann–Roch count `(a+1)(b+1) − Σ mᵢ(mᵢ+1)/2 − 1`.
    pub fn vdim(&self) -> i64 {
        (self.a + 1) * (self.b + 1) - self.mults.iter().map(|m| m * (m + 1) / 2).sum::<i64>() - 1
    }

    /// Blow down along the point of largest multiplicity:
    /// `LQ(a,b; m₁,…) = L2(a+b−m₁; a−m₁, b−m₁, m₂,…)`.
    pub fn to_plane(&self) -> PlaneClass {
        let sorted = sorted_desc(&self.mults);
        let (m1, rest) = match sorted.split_first() {
            Some((m1, rest)) => (*m1, rest),
            None => (0, &[][..]),
        };
        let mut mults = Vec::with_capacity(rest.len() + 2);
        mults.push(self.a - m1);
        mults.push(self.b - m1);
        mults.extend_from_slice(rest);
        PlaneClass::new(self.a + self.b - m1, mults)
    }
}

impl PlaneClass {
    pub fn new(d: i64, mults: impl Into<Vec<i64>>) -> Self {
        Self { d, mults: mults.into() }
    }

    /// `K_{B_s} = −3h + Σ e′ᵢ`.
    pub fn canonical(s: usize) -> Self {
        Self::new(-3, vec![-1; s])
    }

    /// `−K_{B_s} = L2(3; 1^s)`.
    pub fn anticanonical(s: usize) -> Self {
        Self::new(3, vec![1; s])
    }

    pub fn s(&self) -> usize {
        self.mults.len()
    }

    /// `h² = 1`, `e′ᵢ·e′ⱼ = −δᵢⱼ`.
    pub fn dot(&self, other: &Self) -> i64 {
        self.d * other.d - exceptional_dot(&self.mults, &other.mults)
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }

    /// `c·K = −3d + Σ mᵢ`.
    pub fn k_intersection(&self) -> i64 {
        self.dot(&Self::canonical(self.mults.len()))
    }

    /// `d(d+3)/2 − Σ mᵢ(mᵢ+1)/2`.
    pub fn vdim(&self) -> i64 {
        self.d * (self.d + 3) / 2 - self.mults.iter().map(|m| m * (m + 1) / 2).sum::<i64>()
    }

    pub fn sorted(&self) -> Self {
        Self::new(self.d, sorted_desc(&self.mults))
    }

    /// `d ≥ m₁+m₂+m₃` and `m₁ ≥ ⋯ ≥ m_s ≥ 0` after sorting (padding with zeros).
    pub fn is_standard_form(&self) -> bool {
        let m = sorted_desc(&self.mults);
        let top3: i64 = m.iter().take(3).sum();
        self.d >= top3 && m.last().map_or(true, |&x| x >= 0)
    }

    /// Standard up to a change of exceptional basis, decided by greedy Cremona reduction.
    pub fn is_standard(&self) -> bool {
        cremona_reduce(self).1.is_standard()
    }
}

/// A class on one of the two surfaces, for the checked pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceClass {
    Quadric(QuadricClass),
    Plane(PlaneClass),
}

impl SurfaceClass {
    pub fn pair(&self, other: &SurfaceClass) -> Result<i64> {
        match (self, other) {
            (SurfaceClass::Quadric(x), SurfaceClass::Quadric(y)) => Ok(x.dot(y)),
            (SurfaceClass::Plane(x), SurfaceClass::Plane(y)) => Ok(x.dot(y)),
            _ => Err(Error::MixedSurfaces),
        }
    }
}
