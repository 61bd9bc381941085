//! Dense exact elimination over GF(p).
//!
//! [`Rref`] keeps a reduced row echelon basis of a row space and grows it one
//! row at a time. Every stored row has a 1 in its pivot column and 0 in every
//! other pivot column, which is all that reduction and kernel extraction need.

use rand::Rng;

use super::field::PrimeField;

#[derive(Clone, Debug)]
pub struct Rref {
    field: PrimeField,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    is_pivot: Vec<bool>,
}

impl Rref {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        Self { field, cols, rows: Vec::new(), pivots: Vec::new(), is_pivot: vec![false; cols] }
    }

    pub fn from_rows(field: PrimeField, cols: usize, rows: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut e = Self::new(field, cols);
        for row in rows {
            if e.rank() == cols {
                break;
            }
            e.insert(row);
        }
        e
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Replaces `v` by its normal form modulo the row space.
    pub fn reduce(&self, v: &mut [u64]) {
        let p = self.field.p();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c == 0 {
                continue;
            }
            let f = p - c;
            for (x, &y) in v.iter_mut().zip(row) {
                *x = (*x + f * y) % p;
            }
        }
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let p = self.field.p();
        let inv = self.field.inv(v[piv]);
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        for row in &mut self.rows {
            let c = row[piv];
            if c == 0 {
                continue;
            }
            let f = p - c;
            for (x, &y) in row.iter_mut().zip(&v) {
                *x = (*x + f * y) % p;
            }
        }
        self.rows.push(v);
        self.pivots.push(piv);
        self.is_pivot[piv] = true;
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Basis of `{x : row·x = 0 for every row}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        (0..self.cols)
            .filter(|&f| !self.is_pivot[f])
            .map(|f| {
                let mut k = vec![0; self.cols];
                k[f] = 1;
                for (row, &piv) in self.rows.iter().zip(&self.pivots) {
                    k[piv] = self.field.neg(row[f]);
                }
                k
            })
            .collect()
    }

    /// A uniformly random element of the kernel: random free coordinates,
    /// pivots solved from the stored rows.
    pub fn random_kernel_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let mut k = vec![0; self.cols];
        for f in 0..self.cols {
            if !self.is_pivot[f] {
                k[f] = self.field.random(rng);
            }
        }
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let mut acc = 0;
            for f in 0..self.cols {
                if !self.is_pivot[f] && row[f] != 0 {
                    acc = self.field.mul_add(row[f], k[f], acc);
                }
            }
            k[piv] = self.field.neg(acc);
        }
        k
    }
}

/// Rank of a list of rows.
pub fn rank(field: PrimeField, cols: usize, rows: &[Vec<u64>]) -> usize {
    Rref::from_rows(field, cols, rows.iter().cloned()).rank()
}

/// Determinant of a square matrix by elimination.
pub fn determinant(field: PrimeField, mut m: Vec<Vec<u64>>) -> u64 {
    let n = m.len();
    let mut det = 1;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = field.neg(det);
        }
        det = field.mul(det, m[col][col]);
        let inv = field.inv(m[col][col]);
        for r in col + 1..n {
            let f = field.mul(m[r][col], inv);
            if f == 0 {
                continue;
            }
            let f = field.neg(f);
            for c in col..n {
                m[r][c] = field.mul_add(f, m[col][c], m[r][c]);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f() -> PrimeField {
        PrimeField::new(2147483647).unwrap()
    }

    fn dot(field: PrimeField, a: &[u64], b: &[u64]) -> u64 {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| field.mul_add(x, y, acc))
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank(f(), 3, &rows), 2);
        assert_eq!(rank(f(), 3, &[]), 0);
    }

    #[test]
    fn kernel_is_annihilated_and_complementary() {
        let field = f();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n_rows, cols) in [(3, 7), (7, 7), (9, 5), (0, 4)] {
            let mut rows: Vec<Vec<u64>> =
                (0..n_rows).map(|_| (0..cols).map(|_| field.random(&mut rng)).collect()).collect();
            if n_rows > 2 {
                // force a dependency
                rows[2] = rows[0].iter().zip(&rows[1]).map(|(&a, &b)| field.add(a, field.mul(5, b))).collect();
            }
            let e = Rref::from_rows(field, cols, rows.clone());
            let ker = e.kernel_basis();
            assert_eq!(ker.len() + e.rank(), cols);
            for k in &ker {
                for row in &rows {
                    assert_eq!(dot(field, row, k), 0);
                }
            }
            assert_eq!(rank(field, cols, &ker), ker.len());
            for row in &rows {
                assert!(e.contains(row));
            }
            let v = e.random_kernel_vector(&mut rng);
            for row in &rows {
                assert_eq!(dot(field, row, &v), 0);
            }
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let field = PrimeField::new(101).unwrap();
        let m = vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]];
        // 2(3−2) − 0 + 1(1−3) = 0
        assert_eq!(determinant(field, m), 0);
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(determinant(field, m), 100);
        let m = vec![vec![4, 7], vec![2, 6]];
        assert_eq!(determinant(field, m), 10);
    }
}
