//! Matrices over truncated Laurent series.
//!
//! Determinants and characteristic polynomials are computed with the
//! division-free Samuelson-Berkowitz recursion, so precision propagates
//! through ring operations only and no pivot choice can destroy exactness.
//! Rank (hence kernel dimension) over exact inputs uses fraction-free
//! Bareiss elimination in the Laurent-polynomial ring; truncated inputs fall
//! back to valuation-pivoted elimination with honest precision errors.

use super::series::LaurentSeries;
use super::scalar::FieldId;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentSeries>,
}

impl SeriesMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentSeries>) -> SeriesMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        assert!(rows > 0 && cols > 0);
        let f = entries[0].field();
        assert!(entries.iter().all(|e| e.field() == f), "mixed coefficient fields");
        SeriesMatrix { rows, cols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentSeries) -> SeriesMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        SeriesMatrix::new(rows, cols, entries)
    }

    pub fn zero(field: FieldId, rows: usize, cols: usize) -> SeriesMatrix {
        SeriesMatrix::from_fn(rows, cols, |_, _| LaurentSeries::zero(field))
    }

    pub fn identity(field: FieldId, n: usize) -> SeriesMatrix {
        SeriesMatrix::from_fn(n, n, |r, c| {
            if r == c {
                LaurentSeries::one(field)
            } else {
                LaurentSeries::zero(field)
            }
        })
    }

    pub fn diagonal(entries: Vec<LaurentSeries>) -> SeriesMatrix {
        let n = entries.len();
        let field = entries[0].field();
        SeriesMatrix::from_fn(n, n, |r, c| {
            if r == c {
                entries[r].clone()
            } else {
                LaurentSeries::zero(field)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldId {
        self.entries[0].field()
    }

    pub fn at(&self, r: usize, c: usize) -> &LaurentSeries {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: LaurentSeries) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[LaurentSeries] {
        &self.entries
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.is_exact())
    }

    pub fn add(&self, o: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect();
        SeriesMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, o: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.sub(b)).collect();
        SeriesMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self) -> SeriesMatrix {
        let entries = self.entries.iter().map(|a| a.neg()).collect();
        SeriesMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, o: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let f = self.field();
        SeriesMatrix::from_fn(self.rows, o.cols, |r, c| {
            let mut acc = LaurentSeries::zero(f);
            for k in 0..self.cols {
                acc = acc.add(&self.at(r, k).mul(o.at(k, c)));
            }
            acc
        })
    }

    pub fn scale(&self, s: &LaurentSeries) -> SeriesMatrix {
        let entries = self.entries.iter().map(|a| a.mul(s)).collect();
        SeriesMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn transpose(&self) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn trace(&self) -> LaurentSeries {
        assert_eq!(self.rows, self.cols);
        let mut acc = LaurentSeries::zero(self.field());
        for i in 0..self.rows {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    pub fn eq_below_common_horizon(&self, o: &SeriesMatrix) -> bool {
        self.rows == o.rows
            && self.cols == o.cols
            && self
                .entries
                .iter()
                .zip(&o.entries)
                .all(|(a, b)| a.eq_below_common_horizon(b))
    }

    /// Coefficients `c_0..=c_n` of `det(x I - M)` (so `c_n = 1`), by the
    /// Samuelson-Berkowitz recursion.
    pub fn charpoly(&self) -> Vec<LaurentSeries> {
        assert_eq!(self.rows, self.cols, "charpoly of a non-square matrix");
        let n = self.rows;
        let f = self.field();
        // poly holds coefficients highest degree first: starts as (x - a_00)
        let mut poly: Vec<LaurentSeries> = vec![LaurentSeries::one(f), self.at(0, 0).neg()];
        for i in 1..n {
            // principal (i+1)x(i+1) submatrix: split as
            //   [ M  S ]
            //   [ R  a ]   with a = m[i][i], R row, S column, M i x i
            let a = self.at(i, i);
            // toeplitz column: [1, -a, -R S, -R M S, -R M^2 S, ...]
            let mut col: Vec<LaurentSeries> = Vec::with_capacity(i + 2);
            col.push(LaurentSeries::one(f));
            col.push(a.neg());
            // iterate w = S, then M S, M^2 S, ...
            let mut w: Vec<LaurentSeries> = (0..i).map(|r| self.at(r, i).clone()).collect();
            for _ in 0..i {
                // dot = R . w
                let mut dot = LaurentSeries::zero(f);
                for (k, wk) in w.iter().enumerate() {
                    dot = dot.add(&self.at(i, k).mul(wk));
                }
                col.push(dot.neg());
                // w <- M w
                let mut nw = Vec::with_capacity(i);
                for r in 0..i {
                    let mut acc = LaurentSeries::zero(f);
                    for (k, wk) in w.iter().enumerate() {
                        acc = acc.add(&self.at(r, k).mul(wk));
                    }
                    nw.push(acc);
                }
                w = nw;
            }
            // next_poly = Toeplitz(col) * poly, sizes (i+2) x (i+1) times (i+1)
            let mut next: Vec<LaurentSeries> = vec![LaurentSeries::zero(f); i + 2];
            for (r, item) in next.iter_mut().enumerate() {
                let mut acc = LaurentSeries::zero(f);
                for (c, pc) in poly.iter().enumerate() {
                    if r >= c && r - c < col.len() {
                        acc = acc.add(&col[r - c].mul(pc));
                    }
                }
                *item = acc;
            }
            poly = next;
        }
        // poly is highest-first; return c_0..=c_n (lowest first)
        poly.reverse();
        poly
    }

    /// Exact determinant up to the propagated horizon (division-free).
    pub fn det(&self) -> LaurentSeries {
        let n = self.rows;
        let cp = self.charpoly();
        // det(M) = (-1)^n * c_0  since charpoly = det(xI - M)
        if n % 2 == 0 {
            cp[0].clone()
        } else {
            cp[0].neg()
        }
    }

    /// The `k x k` minor on the given row and column index sets (ascending).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> LaurentSeries {
        assert_eq!(rows.len(), cols.len());
        let k = rows.len();
        let f = self.field();
        match k {
            0 => LaurentSeries::one(f),
            1 => self.at(rows[0], cols[0]).clone(),
            _ => {
                // Laplace expansion along the first row; k stays small here
                let mut acc = LaurentSeries::zero(f);
                for (j, &c) in cols.iter().enumerate() {
                    let sub_rows = &rows[1..];
                    let sub_cols: Vec<usize> =
                        cols.iter().enumerate().filter(|&(jj, _)| jj != j).map(|(_, &cc)| cc).collect();
                    let term = self.at(rows[0], c).mul(&self.minor(sub_rows, &sub_cols));
                    acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }

    /// Inverse via the adjugate; `want` bounds the horizon used when the
    /// determinant has to be inverted as a series.
    pub fn inverse(&self, want: i64) -> Result<SeriesMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let det = self.det();
        let det_inv = det.inv(want)?;
        let all: Vec<usize> = (0..n).collect();
        let adj = SeriesMatrix::from_fn(n, n, |r, c| {
            // adjugate: cofactor C_{c,r}
            let rows: Vec<usize> = all.iter().copied().filter(|&i| i != c).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&i| i != r).collect();
            let m = self.minor(&rows, &cols);
            if (r + c) % 2 == 0 {
                m
            } else {
                m.neg()
            }
        });
        Ok(adj.scale(&det_inv))
    }

    /// Rank of an all-exact matrix by fraction-free Bareiss elimination in
    /// the Laurent-polynomial ring. Errors on truncated inputs.
    pub fn rank_exact(&self) -> Result<usize> {
        if !self.is_exact() {
            return Err(Error::Validation("rank_exact wants exact entries".into()));
        }
        let f = self.field();
        let mut m: Vec<Vec<LaurentSeries>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c).clone()).collect())
            .collect();
        let mut rank = 0usize;
        let mut prev = LaurentSeries::one(f);
        let mut row = 0usize;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            // find a pivot with a nonzero entry
            let Some(p) = (row..self.rows).find(|&r| !m[r][col].is_exactly_zero()) else {
                continue;
            };
            m.swap(row, p);
            for r in row + 1..self.rows {
                for c in col + 1..self.cols {
                    // Bareiss step: (pivot * m[r][c] - m[r][col] * m[row][c]) / prev
                    let num = m[row][col].mul(&m[r][c]).sub(&m[r][col].mul(&m[row][c]));
                    m[r][c] = num.div_exact(&prev)?;
                }
                m[r][col] = LaurentSeries::zero(f);
            }
            prev = m[row][col].clone();
            row += 1;
            rank += 1;
        }
        Ok(rank)
    }

    /// Rank with truncated entries: Gaussian elimination choosing the pivot
    /// of least valuation. A submatrix whose entries are all indistinguishable
    /// from zero but not exactly zero yields `PrecisionExhausted`.
    pub fn rank_certified(&self, want: i64) -> Result<usize> {
        if self.is_exact() {
            return self.rank_exact();
        }
        let f = self.field();
        let mut m: Vec<Vec<LaurentSeries>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c).clone()).collect())
            .collect();
        let mut rank = 0usize;
        let mut used_cols = vec![false; self.cols];
        for _step in 0..self.rows.min(self.cols) {
            // best pivot: determined valuation, minimal
            let mut best: Option<(i64, usize, usize)> = None;
            let mut undetermined = false;
            for (r, mr) in m.iter().enumerate().skip(rank) {
                for (c, e) in mr.iter().enumerate() {
                    if used_cols[c] {
                        continue;
                    }
                    match e.valuation() {
                        super::series::Valuation::Finite(v) => {
                            if best.map_or(true, |(bv, _, _)| v < bv) {
                                best = Some((v, r, c));
                            }
                        }
                        super::series::Valuation::Zero => {}
                        super::series::Valuation::PrecisionExhausted => undetermined = true,
                    }
                }
            }
            let Some((_, pr, pc)) = best else {
                if undetermined {
                    return Err(Error::PrecisionExhausted { horizon: want });
                }
                break; // remaining block exactly zero
            };
            m.swap(rank, pr);
            let pivot = m[rank][pc].clone();
            let pinv = pivot.inv(want)?;
            for r in rank + 1..self.rows {
                if m[r][pc].is_zero_as_far_as_known() {
                    continue;
                }
                let factor = m[r][pc].mul(&pinv);
                for c in 0..self.cols {
                    if used_cols[c] || c == pc {
                        continue;
                    }
                    let delta = factor.mul(&m[rank][c]);
                    m[r][c] = m[r][c].sub(&delta);
                }
                m[r][pc] = LaurentSeries::zero_truncated(f, want);
            }
            used_cols[pc] = true;
            rank += 1;
        }
        Ok(rank)
    }

    /// Kernel dimension: `cols - rank`.
    pub fn kernel_dim(&self, want: i64) -> Result<usize> {
        Ok(self.cols - self.rank_certified(want)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    

    fn q() -> FieldId {
        FieldId::Rational
    }

    fn int(v: i64) -> LaurentSeries {
        LaurentSeries::from_int(q(), v)
    }

    #[test]
    fn det_of_diag_pi_inverse_pi() {
        let m = SeriesMatrix::diagonal(vec![LaurentSeries::pi(q(), 1), LaurentSeries::pi(q(), -1)]);
        assert_eq!(m.det(), LaurentSeries::one(q()));
    }

    #[test]
    fn det_triangular_with_pole() {
        let m = SeriesMatrix::new(
            2,
            2,
            vec![int(1), LaurentSeries::pi(q(), -2), LaurentSeries::zero(q()), int(1)],
        );
        assert_eq!(m.det(), LaurentSeries::one(q()));
    }

    #[test]
    fn det_companion_a0_b1() {
        // [[a, -b], [1, 0]] with a = 0, b = 1: cofactor expansion gives b = 1
        let m = SeriesMatrix::new(2, 2, vec![int(0), int(-1), int(1), int(0)]);
        assert_eq!(m.det(), LaurentSeries::one(q()));
    }

    #[test]
    fn charpoly_2x2() {
        // [[0,1],[-1, 2+pi]] -> x^2 - (2+pi) x + 1
        let two_pi = int(2).add(&LaurentSeries::pi(q(), 1));
        let m = SeriesMatrix::new(2, 2, vec![int(0), int(1), int(-1), two_pi.clone()]);
        let cp = m.charpoly();
        assert_eq!(cp[2], LaurentSeries::one(q()));
        assert_eq!(cp[1], two_pi.neg());
        assert_eq!(cp[0], LaurentSeries::one(q()));
    }

    #[test]
    fn charpoly_identity_and_torus() {
        let id = SeriesMatrix::identity(q(), 2);
        let cp = id.charpoly();
        assert_eq!(cp[0], int(1));
        assert_eq!(cp[1], int(-2));
        assert_eq!(cp[2], int(1));
        let t = SeriesMatrix::diagonal(vec![LaurentSeries::pi(q(), 1), LaurentSeries::pi(q(), -1)]);
        let cp = t.charpoly();
        assert_eq!(cp[1], LaurentSeries::pi(q(), 1).add(&LaurentSeries::pi(q(), -1)).neg());
        assert_eq!(cp[0], int(1));
    }

    #[test]
    fn charpoly_vanishes_on_diagonal_eigenvalues() {
        let m = SeriesMatrix::diagonal(vec![int(2), int(5), LaurentSeries::pi(q(), 3)]);
        let cp = m.charpoly();
        for ev in [int(2), int(5), LaurentSeries::pi(q(), 3)] {
            let mut acc = LaurentSeries::zero(q());
            let mut pw = LaurentSeries::one(q());
            for c in &cp {
                acc = acc.add(&c.mul(&pw));
                pw = pw.mul(&ev);
            }
            assert!(acc.is_exactly_zero());
        }
    }

    #[test]
    fn det_multiplicative_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = SeriesMatrix::from_fn(3, 3, |_, _| {
                LaurentSeries::random(q(), -1, 3, Some(24), &mut rng)
            });
            let b = SeriesMatrix::from_fn(3, 3, |_, _| {
                LaurentSeries::random(q(), -1, 3, Some(24), &mut rng)
            });
            let lhs = a.mul(&b).det();
            let rhs = a.det().mul(&b.det());
            assert!(lhs.eq_below_common_horizon(&rhs));
        }
    }

    #[test]
    fn rank_exact_and_kernel() {
        let m = SeriesMatrix::new(
            3,
            3,
            vec![
                int(1), int(2), int(3),
                int(2), int(4), int(6),
                int(0), int(1), LaurentSeries::pi(q(), 1),
            ],
        );
        assert_eq!(m.rank_exact().unwrap(), 2);
        assert_eq!(m.kernel_dim(32).unwrap(), 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = SeriesMatrix::new(
            2,
            2,
            vec![int(1).add(&LaurentSeries::pi(q(), 1)), int(1), LaurentSeries::pi(q(), 2), int(1)],
        );
        let inv = m.inverse(24).unwrap();
        let prod = m.mul(&inv).sub(&SeriesMatrix::identity(q(), 2));
        assert!(prod.entries().iter().all(|e| e.is_zero_as_far_as_known()));
    }
}
