//! Degree-d monomials in x, y, z, w and the linear functionals on their
//! coefficient vectors used by the oracle: point evaluation, directional
//! derivatives and the Taylor coefficients that encode fat points.

use super::field::PrimeField;

pub type Point = [u64; 4];
pub type Exponent = [u32; 4];

/// All exponents of total degree `degree`, in descending lex order
/// (`x^d` first, `w^d` last).
pub fn monomials(degree: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for a in (0..=degree).rev() {
        for b in (0..=degree - a).rev() {
            for c in (0..=degree - a - b).rev() {
                out.push([a, b, c, degree - a - b - c]);
            }
        }
    }
    out
}

/// Exponents of total degree `<= degree` in three variables, by degree then lex.
fn affine_multi_indices(max_order: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for k in 0..=max_order {
        for a in (0..=k).rev() {
            for b in (0..=k - a).rev() {
                out.push([a, b, k - a - b]);
            }
        }
    }
    out
}

fn powers(field: &PrimeField, x: u64, n: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(n as usize + 1);
    let mut acc = 1;
    for _ in 0..=n {
        v.push(acc);
        acc = field.mul(acc, x);
    }
    v
}

/// The basis of degree-d forms plus cached coordinate-power tables.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub degree: u32,
    pub exps: Vec<Exponent>,
}

impl MonomialBasis {
    pub fn new(degree: u32) -> Self {
        Self { degree, exps: monomials(degree) }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    fn power_tables(&self, field: &PrimeField, x: &Point) -> [Vec<u64>; 4] {
        [0, 1, 2, 3].map(|j| powers(field, x[j], self.degree))
    }

    /// `(m(x))_m`, so that `F(x) = Σ coeff_m · m(x)`.
    pub fn evaluation(&self, field: &PrimeField, x: &Point) -> Vec<u64> {
        let pw = self.power_tables(field, x);
        self.exps
            .iter()
            .map(|e| {
                let a = field.mul(pw[0][e[0] as usize], pw[1][e[1] as usize]);
                let b = field.mul(pw[2][e[2] as usize], pw[3][e[3] as usize]);
                field.mul(a, b)
            })
            .collect()
    }

    /// `(Σ_j v_j ∂_j m(x))_m`.
    pub fn directional_derivative(&self, field: &PrimeField, x: &Point, v: &Point) -> Vec<u64> {
        let pw = self.power_tables(field, x);
        self.exps
            .iter()
            .map(|e| {
                let mut total = 0;
                for j in 0..4 {
                    if e[j] == 0 || v[j] == 0 {
                        continue;
                    }
                    let mut term = field.mul(v[j], e[j] as u64 % field.p());
                    for k in 0..4 {
                        let exp = if k == j { e[k] - 1 } else { e[k] };
                        term = field.mul(term, pw[k][exp as usize]);
                    }
                    total = field.add(total, term);
                }
                total
            })
            .collect()
    }

    /// Rows expressing "F has multiplicity ≥ m at P".
    ///
    /// In the affine chart where the largest coordinate of `P` is set to 1,
    /// each row is the Taylor coefficient `∂^α f(P)/α!` for one multi-index
    /// `α` of order `< m` in the three remaining variables. That gives
    /// `C(m+2, 3)` rows; they differ from plain partial derivatives only by
    /// the nonzero factors `α!` once `p > d`.
    pub fn multiplicity_rows(&self, field: &PrimeField, point: &Point, m: u32) -> Vec<Vec<u64>> {
        if m == 0 {
            return Vec::new();
        }
        let chart = (0..4)
            .filter(|&j| point[j] != 0)
            .max_by_key(|&j| (point[j], std::cmp::Reverse(j)))
            .expect("projective point has a nonzero coordinate");
        let inv = field.inv(point[chart]);
        let affine: Vec<usize> = (0..4).filter(|&j| j != chart).collect();
        let coords: Vec<u64> = affine.iter().map(|&j| field.mul(point[j], inv)).collect();
        let pw: Vec<Vec<u64>> = coords.iter().map(|&c| powers(field, c, self.degree)).collect();
        let d = self.degree as usize;
        let mut binom = vec![vec![0u64; d + 1]; d + 1];
        for n in 0..=d {
            for k in 0..=n {
                binom[n][k] = field.binomial(n as u64, k as u64);
            }
        }
        affine_multi_indices(m - 1)
            .into_iter()
            .map(|alpha| {
                self.exps
                    .iter()
                    .map(|e| {
                        let mut acc = 1;
                        for (t, &j) in affine.iter().enumerate() {
                            let (b, a) = (e[j] as usize, alpha[t] as usize);
                            if b < a {
                                return 0;
                            }
                            acc = field.mul(acc, field.mul(binom[b][a], pw[t][b - a]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }
}

/// Value of the form with coefficient vector `coeffs` at `x`.
pub fn evaluate(field: &PrimeField, basis: &MonomialBasis, coeffs: &[u64], x: &Point) -> u64 {
    field.dot(&basis.evaluation(field, x), coeffs)
}
