//! The fixed smooth quadric `xw − yz = 0`, a random second quadric `Q′`, and
//! points sampled on the quartic curve `D = Q̄ ∩ Q′` through the Segre
//! parametrization `((s:1),(u:1)) ↦ (su, s, u, 1)`.

use rand::Rng;

use super::field::PrimeField;
use super::linalg::Rref;
use super::monomials::{monomials, Point};
use crate::criteria::Mode;
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 10_000;

#[derive(Clone, Debug)]
pub struct GeometrySetup {
    pub field: PrimeField,
    pub mode: Mode,
    /// Coefficients of `Q′` on the degree-2 monomials, in [`monomials`] order.
    pub second_quadric: [u64; 10],
    pub points: Vec<Point>,
    /// Affine parameter `s = y/w` of every point drawn so far (points and probes).
    used_s: Vec<u64>,
}

/// `xw − yz`.
pub fn fixed_quadric(field: &PrimeField, x: &Point) -> u64 {
    field.sub(field.mul(x[0], x[3]), field.mul(x[1], x[2]))
}

fn fixed_quadric_gradient(field: &PrimeField, x: &Point) -> Point {
    [x[3], field.neg(x[2]), field.neg(x[1]), x[0]]
}

impl GeometrySetup {
    /// Draws `Q′`; no points yet.
    pub fn new<R: Rng + ?Sized>(field: PrimeField, mode: Mode, rng: &mut R) -> Self {
        let second_quadric = [(); 10].map(|_| field.random(rng));
        Self { field, mode, second_quadric, points: Vec::new(), used_s: Vec::new() }
    }

    pub fn r(&self) -> usize {
        self.points.len()
    }

    pub fn second(&self, x: &Point) -> u64 {
        let f = &self.field;
        monomials(2).iter().zip(&self.second_quadric).fold(0, |acc, (e, &c)| {
            let mut t = c;
            for j in 0..4 {
                for _ in 0..e[j] {
                    t = f.mul(t, x[j]);
                }
            }
            f.add(acc, t)
        })
    }

    fn second_gradient(&self, x: &Point) -> Point {
        let f = &self.field;
        let mut g = [0; 4];
        for (e, &c) in monomials(2).iter().zip(&self.second_quadric) {
            for j in 0..4 {
                if e[j] == 0 {
                    continue;
                }
                let mut t = f.mul(c, e[j] as u64);
                for k in 0..4 {
                    let exp = if k == j { e[k] - 1 } else { e[k] };
                    for _ in 0..exp {
                        t = f.mul(t, x[k]);
                    }
                }
                g[j] = f.add(g[j], t);
            }
        }
        g
    }

    /// `Q′(su, s, u, 1)` as `[C, B, A]` (coefficients of `u^0, u^1, u^2`) at a given `s`.
    pub fn second_on_fibre(&self, s: u64) -> [u64; 3] {
        let f = &self.field;
        let mut out = [0; 3];
        for (e, &c) in monomials(2).iter().zip(&self.second_quadric) {
            // x^a y^b z^c w^e ↦ s^(a+b) u^(a+c)
            let s_pow = f.pow(s, (e[0] + e[1]) as u64);
            let u_deg = (e[0] + e[2]) as usize;
            out[u_deg] = f.mul_add(c, s_pow, out[u_deg]);
        }
        out
    }

    /// Whether the Jacobian of `(Q̄, Q′)` has rank 2 at `x`.
    pub fn is_smooth_point(&self, x: &Point) -> bool {
        let a = fixed_quadric_gradient(&self.field, x);
        let b = self.second_gradient(x);
        (0..4).any(|i| {
            (i + 1..4).any(|j| self.field.mul(a[i], b[j]) != self.field.mul(a[j], b[i]))
        })
    }

    /// A direction tangent to `D` at `x`, not proportional to `x`.
    pub fn tangent_direction(&self, x: &Point) -> Option<Point> {
        let a = fixed_quadric_gradient(&self.field, x).to_vec();
        let b = self.second_gradient(x).to_vec();
        let e = Rref::from_rows(self.field, 4, [a, b]);
        e.kernel_basis().into_iter().map(|v| [v[0], v[1], v[2], v[3]]).find(|v| {
            let span = Rref::from_rows(self.field, 4, [x.to_vec(), v.to_vec()]);
            span.rank() == 2
        })
    }

    /// One fresh point of `D` whose parameter `s` differs from all earlier draws.
    pub fn sample_on_curve<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Point> {
        let f = self.field;
        for _ in 0..MAX_ATTEMPTS {
            let s = f.random(rng);
            if self.used_s.contains(&s) {
                continue;
            }
            let [c, b, a] = self.second_on_fibre(s);
            if a == 0 {
                continue;
            }
            let disc = f.sub(f.mul(b, b), f.mul(4, f.mul(a, c)));
            if disc == 0 {
                continue;
            }
            let Some(root) = f.sqrt(disc) else { continue };
            let root = if rng.gen::<bool>() { root } else { f.neg(root) };
            let u = f.mul(f.sub(root, b), f.inv(f.mul(2, a)));
            let pt = [f.mul(s, u), s, u, 1];
            if !self.is_smooth_point(&pt) {
                continue;
            }
            debug_assert_eq!(fixed_quadric(&f, &pt), 0);
            debug_assert_eq!(self.second(&pt), 0);
            self.used_s.push(s);
            return Ok(pt);
        }
        Err(Error::Sampling(MAX_ATTEMPTS))
    }

    /// A uniformly random affine point `(x, y, z, 1)`.
    pub fn sample_generic<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let f = &self.field;
        [f.random(rng), f.random(rng), f.random(rng), 1]
    }

    /// Appends `r` base points: on `D` in the anticanonical mode, anywhere otherwise.
    pub fn sample_points<R: Rng + ?Sized>(&mut self, r: usize, rng: &mut R) -> Result<()> {
        let target = self.points.len() + r;
        while self.points.len() < target {
            let pt = match self.mode {
                Mode::OnAnticanonical => self.sample_on_curve(rng)?,
                Mode::GeneralPosition => {
                    let pt = self.sample_generic(rng);
                    if self.points.contains(&pt) {
                        continue;
                    }
                    self.used_s.push(pt[1]);
                    pt
                }
            };
            self.points.push(pt);
        }
        Ok(())
    }

    /// The same curve with only the first `r` points, as if only `r` had been drawn.
    pub fn truncated(&self, r: usize) -> Self {
        let mut g = self.clone();
        g.points.truncate(r);
        g.used_s.truncate(r);
        g
    }

    /// Parameter `s = y/w` of a point with `w ≠ 0`.
    pub fn s_of(&self, x: &Point) -> Option<u64> {
        (x[3] != 0).then(|| self.field.mul(x[1], self.field.inv(x[3])))
    }

    #[cfg(test)]
    pub(crate) fn used_parameters(&self) -> &[u64] {
        &self.used_s
    }
}
