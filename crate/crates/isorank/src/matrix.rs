//! Dense exact matrices with rank, kernel, and solve via Gaussian
//! elimination (first-nonzero pivoting; entries stay exact).

use crate::field::{Field, FieldError};

#[derive(Clone, Debug)]
pub struct MatrixExact<F: Field> {
    pub field: F,
    pub rows: usize,
    pub cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> PartialEq for MatrixExact<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

/// Output of row reduction: rank, kernel basis, and an optional solution.
pub struct RankKernel<F: Field> {
    pub rank: usize,
    pub kernel: Vec<Vec<F::Elem>>,
}

impl<F: Field> MatrixExact<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        MatrixExact {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field.clone(), n, n);
        for j in 0..n {
            *m.at_mut(j, j) = field.one();
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        MatrixExact {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatrixExact {
            field,
            rows,
            cols,
            data,
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut F::Elem {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |i, j| {
            self.at(j, i).clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let f = &self.field;
        Self::from_fn(f.clone(), self.rows, other.cols, |i, j| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                f.add_mul_assign(&mut acc, self.at(i, k), other.at(k, j));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    f.add_mul_assign(&mut acc, self.at(i, k), &v[k]);
                }
                acc
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Reduced row echelon form; returns pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut piv = None;
            for i in r..m.rows {
                if !f.is_zero(m.at(i, c)) {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            m.swap_rows(r, p);
            let inv = f.inv(m.at(r, c)).expect("pivot nonzero");
            for j in c..m.cols {
                *m.at_mut(r, j) = f.mul(m.at(r, j), &inv);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.at(i, c)) {
                    continue;
                }
                let factor = f.neg(m.at(i, c));
                for j in c..m.cols {
                    if f.is_zero(m.at(r, j)) {
                        continue;
                    }
                    let t = f.mul(&factor, m.at(r, j));
                    *m.at_mut(i, j) = f.add(m.at(i, j), &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact rank and a kernel basis (one vector per free column).
    pub fn rank_kernel(&self) -> RankKernel<F> {
        let f = &self.field;
        let (m, pivots) = self.rref();
        let rank = pivots.len();
        let mut kernel = Vec::new();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.at(r, free));
            }
            kernel.push(v);
        }
        RankKernel { rank, kernel }
    }

    /// Particular solution of M·x = b (zero on free columns), or `None` when
    /// the system is inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        let aug = Self::from_fn(f.clone(), self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (m, pivots) = aug.rref();
        if pivots.last().copied() == Some(self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = m.at(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn det(&self) -> F::Elem {
        assert_eq!(self.rows, self.cols);
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..m.cols {
            let mut piv = None;
            for i in c..m.rows {
                if !f.is_zero(m.at(i, c)) {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else {
                return f.zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = f.neg(&det);
            }
            det = f.mul(&det, m.at(c, c));
            let inv = f.inv(m.at(c, c)).unwrap();
            for i in c + 1..m.rows {
                if f.is_zero(m.at(i, c)) {
                    continue;
                }
                let factor = f.neg(&f.mul(m.at(i, c), &inv));
                for j in c..m.cols {
                    let t = f.mul(&factor, m.at(c, j));
                    *m.at_mut(i, j) = f.add(m.at(i, j), &t);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = &self.field;
        let aug = Self::from_fn(f.clone(), n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                f.one()
            } else {
                f.zero()
            }
        });
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::from_fn(f.clone(), n, n, |i, j| m.at(i, j + n).clone()))
    }
}

/// Incremental row-echelon accumulator: feeds rows one at a time and tracks
/// the rank, so nested point sets share one elimination pass.
pub struct RowEchelon<F: Field> {
    field: F,
    cols: usize,
    /// Rows in echelon form, paired with their pivot column.
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> RowEchelon<F> {
    pub fn new(field: F, cols: usize) -> Self {
        RowEchelon {
            field,
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the current basis; returns true when it was
    /// independent (rank grew).
    pub fn push(&mut self, mut row: Vec<F::Elem>) -> bool {
        assert_eq!(row.len(), self.cols);
        let f = &self.field;
        for (pc, basis) in &self.rows {
            if f.is_zero(&row[*pc]) {
                continue;
            }
            let factor = f.neg(&row[*pc]);
            for j in *pc..self.cols {
                if !f.is_zero(&basis[j]) {
                    f.add_mul_assign(&mut row[j], &factor, &basis[j]);
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&row[pc]).expect("pivot nonzero");
        for j in pc..self.cols {
            row[j] = f.mul(&row[j], &inv);
        }
        self.rows.push((pc, row));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_i, FpField, GaussField, GaussQ};

    #[test]
    fn identity_rank_and_kernel() {
        let m = MatrixExact::identity(GaussField, 3);
        let rk = m.rank_kernel();
        assert_eq!(rk.rank, 3);
        assert!(rk.kernel.is_empty());
    }

    #[test]
    fn rank_one_kernel() {
        // [[1,2],[2,4]] has rank 1, kernel spanned by (-2, 1) ∝ (2, -1).
        let m = MatrixExact::from_rows(
            GaussField,
            vec![
                vec![rat_i(1, 0), rat_i(2, 0)],
                vec![rat_i(2, 0), rat_i(4, 0)],
            ],
        );
        let rk = m.rank_kernel();
        assert_eq!(rk.rank, 1);
        assert_eq!(rk.kernel.len(), 1);
        let v = &rk.kernel[0];
        // v = (-2, 1); check M v = 0 and proportionality to (2, -1).
        assert_eq!(m.mul_vec(v), vec![rat_i(0, 0), rat_i(0, 0)]);
        let ratio = GaussQ::new(rat(-1, 1), rat(0, 1));
        assert_eq!(GaussField.mul(&v[0], &ratio), rat_i(2, 0));
    }

    #[test]
    fn random_full_rank_over_fp() {
        use rand::{Rng, SeedableRng};
        let f = FpField::new(32003);
        for seed in [1u64, 2, 3] {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = MatrixExact::from_fn(f, 300, 289, |_, _| rng.gen_range(0..32003u64));
            let rk = m.rank_kernel();
            assert_eq!(rk.rank, 289);
            // Kernel must be empty; re-multiply any kernel vector to check.
            for v in &rk.kernel {
                assert!(m.mul_vec(v).iter().all(|x| *x == 0));
            }
        }
    }

    #[test]
    fn rank_plus_kernel_dim_is_cols() {
        use rand::{Rng, SeedableRng};
        let f = FpField::new(101);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let r = rng.gen_range(1..8);
            let c = rng.gen_range(1..8);
            let m = MatrixExact::from_fn(f, r, c, |_, _| rng.gen_range(0..4u64) % 101);
            let rk = m.rank_kernel();
            assert_eq!(rk.rank + rk.kernel.len(), c);
            for v in &rk.kernel {
                assert!(m.mul_vec(v).iter().all(|x| *x == 0));
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = MatrixExact::from_rows(
            GaussField,
            vec![
                vec![rat_i(1, 0), rat_i(2, 0)],
                vec![rat_i(2, 0), rat_i(4, 0)],
            ],
        );
        let sol = m.solve(&[rat_i(3, 0), rat_i(6, 0)]).unwrap();
        assert_eq!(m.mul_vec(&sol), vec![rat_i(3, 0), rat_i(6, 0)]);
        assert!(m.solve(&[rat_i(3, 0), rat_i(7, 0)]).is_none());
    }

    #[test]
    fn incremental_echelon_matches_rank() {
        use rand::{Rng, SeedableRng};
        let f = FpField::new(101);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rows: Vec<Vec<u64>> = (0..30)
            .map(|_| (0..12).map(|_| rng.gen_range(0..3u64)).collect())
            .collect();
        let m = MatrixExact::from_rows(f, rows.clone());
        let mut ech = RowEchelon::new(f, 12);
        for r in rows {
            ech.push(r);
        }
        assert_eq!(ech.rank(), m.rank());
    }
}
