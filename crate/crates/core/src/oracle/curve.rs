//! Intersections of a surface `F = 0` with the quartic curve `D`.
//!
//! On the quadric chart `(s, u) ↦ (su, s, u, 1)` the surface becomes a
//! bidegree-(d,d) polynomial `G(s,u)` and `D` becomes `H(s,u) = Q′(su,s,u,1)`.
//! The resultant `R(s) = Res_u(G, H)` (formal degrees d and 2) has degree
//! `≤ 4d` and vanishes exactly at the `s`-coordinates of `F ∩ D`, with the
//! intersection multiplicities. Dividing out the known points leaves the
//! residual intersection; when that is a single point it is recovered exactly.

use super::field::PrimeField;
use super::geometry::GeometrySetup;
use super::linalg::determinant;
use super::monomials::{MonomialBasis, Point};

/// Coefficients (low degree first) of a univariate polynomial over GF(p).
type Poly = Vec<u64>;

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Divides by `(s − root)`; `None` if the remainder is nonzero.
fn divide_linear(field: &PrimeField, p: &[u64], root: u64) -> Option<Poly> {
    if p.is_empty() {
        return None;
    }
    let n = p.len() - 1;
    let mut q = vec![0; n];
    let mut carry = 0;
    for i in (0..=n).rev() {
        let c = field.mul_add(carry, root, p[i]);
        if i == 0 {
            return (c == 0).then_some(q);
        }
        q[i - 1] = c;
        carry = c;
    }
    unreachable!()
}

/// Newton interpolation through `(i + 1, ys[i])`, returned in monomial form.
fn interpolate(field: &PrimeField, ys: &[u64]) -> Poly {
    let n = ys.len();
    let xs: Vec<u64> = (1..=n as u64).collect();
    let mut coef = ys.to_vec();
    for j in 1..n {
        // consecutive nodes: xs[i] − xs[i − j] = j
        let inv_j = field.inv(j as u64);
        for i in (j..n).rev() {
            coef[i] = field.mul(field.sub(coef[i], coef[i - 1]), inv_j);
        }
    }
    // Horner expansion of the Newton form
    let mut out = vec![0u64; n];
    for k in (0..n).rev() {
        // out = out·(s − xs[k]) + coef[k]
        let mut next = vec![0u64; n];
        for i in 0..n {
            if out[i] == 0 {
                continue;
            }
            if i + 1 < n {
                next[i + 1] = field.add(next[i + 1], out[i]);
            }
            next[i] = field.sub(next[i], field.mul(out[i], xs[k]));
        }
        next[0] = field.add(next[0], coef[k]);
        out = next;
    }
    out
}

fn poly_rem(field: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    let mut a = trim(a.to_vec());
    let b = trim(b.to_vec());
    let lead_inv = field.inv(*b.last().expect("nonzero divisor"));
    while a.len() >= b.len() {
        let shift = a.len() - b.len();
        let f = field.mul(*a.last().unwrap(), lead_inv);
        for (i, &c) in b.iter().enumerate() {
            a[i + shift] = field.sub(a[i + shift], field.mul(f, c));
        }
        a = trim(a);
    }
    a
}

fn poly_gcd(field: &PrimeField, a: &[u64], b: &[u64]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(field, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// `G(s, u)` as a grid `g[i][j]` = coefficient of `s^i u^j`.
fn pull_back_to_quadric(basis: &MonomialBasis, coeffs: &[u64], field: &PrimeField) -> Vec<Vec<u64>> {
    let d = basis.degree as usize;
    let mut g = vec![vec![0; d + 1]; d + 1];
    for (e, &c) in basis.exps.iter().zip(coeffs) {
        let (i, j) = ((e[0] + e[1]) as usize, (e[0] + e[2]) as usize);
        g[i][j] = field.add(g[i][j], c);
    }
    g
}

/// Coefficients in `u` (low first) of `G(s0, u)`.
fn fibre_coeffs(field: &PrimeField, grid: &[Vec<u64>], s0: u64) -> Poly {
    let d = grid.len() - 1;
    (0..=d)
        .map(|j| (0..=d).rev().fold(0, |acc, i| field.mul_add(acc, s0, grid[i][j])))
        .collect()
}

/// Sylvester resultant of forms in `(u:1)` with formal degrees `g.len()−1`, `h.len()−1`.
fn resultant(field: &PrimeField, g: &[u64], h: &[u64]) -> u64 {
    let (m, n) = (g.len() - 1, h.len() - 1);
    let size = m + n;
    if size == 0 {
        return 1;
    }
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![0; size];
        for (k, &c) in g.iter().rev().enumerate() {
            row[shift + k] = c;
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![0; size];
        for (k, &c) in h.iter().rev().enumerate() {
            row[shift + k] = c;
        }
        rows.push(row);
    }
    determinant(*field, rows)
}

/// The polynomial `R(s)` whose roots are the `s`-parameters of `F ∩ D`.
pub fn intersection_polynomial(geom: &GeometrySetup, basis: &MonomialBasis, coeffs: &[u64]) -> Poly {
    let field = &geom.field;
    let grid = pull_back_to_quadric(basis, coeffs, field);
    let n = 4 * basis.degree as usize + 1;
    let xs: Vec<u64> = (1..=n as u64).collect();
    let ys: Vec<u64> = xs
        .iter()
        .map(|&s0| {
            let g = fibre_coeffs(field, &grid, s0);
            let h = geom.second_on_fibre(s0).to_vec();
            resultant(field, &g, &h)
        })
        .collect();
    trim(interpolate(field, &ys))
}

/// The single residual point of `F ∩ D` after removing `known` points with
/// the given multiplicities, or `None` when the residual is not exactly one
/// point in the chart (empty, several points, `F ⊃ D`, or a degenerate fibre).
pub fn residual_point(
    geom: &GeometrySetup,
    basis: &MonomialBasis,
    coeffs: &[u64],
    known: &[(Point, u32)],
) -> Option<Point> {
    if basis.degree == 0 {
        return None;
    }
    let field = &geom.field;
    let mut r = intersection_polynomial(geom, basis, coeffs);
    if r.is_empty() {
        return None;
    }
    let mut known_s = Vec::with_capacity(known.len());
    for (pt, mult) in known {
        let s = geom.s_of(pt)?;
        known_s.push(s);
        for _ in 0..*mult {
            r = divide_linear(field, &r, s)?;
        }
    }
    let q = trim(r);
    if q.len() != 2 {
        return None;
    }
    let s_star = field.mul(field.neg(q[0]), field.inv(q[1]));
    if known_s.contains(&s_star) {
        return None;
    }
    let grid = pull_back_to_quadric(basis, coeffs, field);
    let g = fibre_coeffs(field, &grid, s_star);
    let h = geom.second_on_fibre(s_star).to_vec();
    let common = poly_gcd(field, &g, &h);
    if common.len() != 2 {
        return None;
    }
    let u_star = field.mul(field.neg(common[0]), field.inv(common[1]));
    let pt = [field.mul(s_star, u_star), s_star, u_star, 1];
    debug_assert_eq!(geom.second(&pt), 0);
    Some(pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::Mode;
    use crate::oracle::geometry::fixed_quadric;
    use crate::oracle::monomials::evaluate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> PrimeField {
        PrimeField::new(2147483579).unwrap()
    }

fn eval(field: &PrimeField, p: &[u64], x: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| field.mul_add(acc, x, c))
}

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = field();
        let poly = vec![5, 0, 7, 1];
        let ys: Vec<u64> = (1..=4).map(|x| eval(&f, &poly, x)).collect();
        assert_eq!(interpolate(&f, &ys), poly);
    }

    #[test]
    fn linear_division() {
        let f = field();
        // (s − 3)(s + 2) = s² − s − 6
        let p = vec![f.from_i64(-6), f.from_i64(-1), 1];
        assert_eq!(divide_linear(&f, &p, 3), Some(vec![2, 1]));
        assert_eq!(divide_linear(&f, &p, 4), None);
    }

    #[test]
    fn resultant_detects_common_root() {
        let f = field();
        // (u − 1)(u − 2) and (u − 2)(u + 5)
        let a = vec![2, f.from_i64(-3), 1];
        let b = vec![f.from_i64(-10), 3, 1];
        assert_eq!(resultant(&f, &a, &b), 0);
        let c = vec![f.from_i64(-12), 1, 1];
        assert_ne!(resultant(&f, &a, &c), 0);
    }

    #[test]
    fn plane_meets_quartic_in_four_points() {
        // a plane through three points of D meets D in exactly one more point
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut g = GeometrySetup::new(f, Mode::OnAnticanonical, &mut rng);
        g.sample_points(3, &mut rng).unwrap();
        let basis = MonomialBasis::new(1);
        let rows: Vec<Vec<u64>> = g.points.iter().map(|p| basis.evaluation(&f, p)).collect();
        let plane = crate::oracle::linalg::Rref::from_rows(f, 4, rows).kernel_basis().remove(0);
        let r = intersection_polynomial(&g, &basis, &plane);
        assert_eq!(r.len(), 5);
        let known: Vec<(Point, u32)> = g.points.iter().map(|&p| (p, 1)).collect();
        let q = residual_point(&g, &basis, &plane, &known).expect("fourth point");
        assert_eq!(fixed_quadric(&f, &q), 0);
        assert_eq!(g.second(&q), 0);
        assert_eq!(evaluate(&f, &basis, &plane, &q), 0);
        assert!(!g.points.contains(&q));
    }
}
