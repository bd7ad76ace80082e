//! Fundamental representations of `SL_n` as exterior powers, the adjoint
//! action on `sl_n`, and recovery of the Cartan coweight of a group element
//! from maximal pole orders.
//!
//! Basis conventions (fixed once for the whole crate):
//! * `Lambda^k` uses the lexicographic ordering of ascending `k`-subsets of
//!   `{0, .., n-1}`, so the highest-weight line `{0, .., k-1}` comes first
//!   and highest-weight projectors are leading principal.
//! * `sl_n` is ordered: positive-root vectors `E_ij` (`i < j`) by height
//!   then position, the diagonal basis `H_i = E_ii - E_{i+1,i+1}`, then
//!   negative-root vectors by height then position.

use crate::exactnum::{FieldId, LaurentSeries, Scalar, SeriesMatrix, Valuation};
use crate::rootdata::Coweight;
use crate::{Error, Result};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;

/// An element of `SL_n(F)` (unit determinant, checked on construction).
#[derive(Clone, Debug)]
pub struct GroupElement {
    mat: SeriesMatrix,
}

impl GroupElement {
    pub fn new(mat: SeriesMatrix) -> Result<GroupElement> {
        if mat.rows() != mat.cols() {
            return Err(Error::Validation("group element must be square".into()));
        }
        let det = mat.det();
        let dev = det.sub(&LaurentSeries::one(mat.field()));
        if !dev.is_zero_as_far_as_known() {
            return Err(Error::Validation(format!("determinant is {det}, not 1")));
        }
        Ok(GroupElement { mat })
    }

    /// Skips the determinant check; for internal constructions that are
    /// unimodular by design.
    pub fn from_raw(mat: SeriesMatrix) -> GroupElement {
        GroupElement { mat }
    }

    pub fn n(&self) -> usize {
        self.mat.rows()
    }

    pub fn field(&self) -> FieldId {
        self.mat.field()
    }

    pub fn mat(&self) -> &SeriesMatrix {
        &self.mat
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement { mat: self.mat.mul(&o.mat) }
    }

    /// Inverse through the adjugate; exact for exact entries since
    /// `det = 1`.
    pub fn inverse(&self) -> GroupElement {
        let n = self.n();
        let all: Vec<usize> = (0..n).collect();
        let adj = SeriesMatrix::from_fn(n, n, |r, c| {
            let rows: Vec<usize> = all.iter().copied().filter(|&i| i != c).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&i| i != r).collect();
            let m = self.mat.minor(&rows, &cols);
            if (r + c) % 2 == 0 {
                m
            } else {
                m.neg()
            }
        });
        GroupElement { mat: adj }
    }

    pub fn conjugate(&self, by: &GroupElement) -> GroupElement {
        by.mul(self).mul(&by.inverse())
    }

    pub fn charpoly(&self) -> Vec<LaurentSeries> {
        self.mat.charpoly()
    }
}

/// A diagonal torus element, each entry a unit times a power of `pi`.
#[derive(Clone, Debug)]
pub struct TorusElement {
    diag: Vec<LaurentSeries>,
}

impl TorusElement {
    pub fn new(diag: Vec<LaurentSeries>) -> Result<TorusElement> {
        for d in &diag {
            d.val().map_err(|_| Error::Validation("torus entries need a determined valuation".into()))?;
        }
        Ok(TorusElement { diag })
    }

    pub fn identity(field: FieldId, n: usize) -> TorusElement {
        TorusElement { diag: vec![LaurentSeries::one(field); n] }
    }

    /// `pi^mu` for an integral coweight `mu`.
    pub fn pi_power(field: FieldId, mu: &Coweight) -> Result<TorusElement> {
        let ints = mu.to_ints().ok_or_else(|| Error::Validation("pi^mu needs an integral coweight".into()))?;
        Ok(TorusElement { diag: ints.iter().map(|&k| LaurentSeries::pi(field, k)).collect() })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn field(&self) -> FieldId {
        self.diag[0].field()
    }

    pub fn diag(&self) -> &[LaurentSeries] {
        &self.diag
    }

    /// Product of the diagonal entries.
    pub fn det(&self) -> LaurentSeries {
        self.diag.iter().fold(LaurentSeries::one(self.field()), |a, b| a.mul(b))
    }

    pub fn to_group_element(&self) -> Result<GroupElement> {
        GroupElement::new(SeriesMatrix::diagonal(self.diag.to_vec()))
    }

    pub fn mul(&self, o: &TorusElement) -> TorusElement {
        TorusElement { diag: self.diag.iter().zip(&o.diag).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn inverse(&self, want: i64) -> Result<TorusElement> {
        let diag = self.diag.iter().map(|d| d.inv(want)).collect::<Result<Vec<_>>>()?;
        Ok(TorusElement { diag })
    }

    /// Simple-root value `alpha_i(t) = t_i / t_{i+1}` (0-based `i`).
    pub fn alpha(&self, i: usize, want: i64) -> Result<LaurentSeries> {
        self.diag[i].div(&self.diag[i + 1], want)
    }

    /// Fundamental-weight value `omega_i(t) = t_0 ... t_{i-1}` (1-based `i`).
    pub fn omega(&self, i: usize) -> LaurentSeries {
        self.diag[..i].iter().fold(LaurentSeries::one(self.field()), |a, b| a.mul(b))
    }

    /// Valuation coweight `(val t_0, ..., val t_{n-1})`.
    pub fn valuation_coweight(&self) -> Result<Coweight> {
        let vals = self.diag.iter().map(|d| d.val()).collect::<Result<Vec<_>>>()?;
        Coweight::new(vals.into_iter().map(|v| BigRational::from_integer(BigInt::from(v))).collect())
    }
}

/// Ascending `k`-subsets of `{0, .., n-1}` in lexicographic order; the
/// highest-weight subset `{0, .., k-1}` is first.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// The `i`-th fundamental representation `Lambda^i` of a matrix: the
/// `C(n,i) x C(n,i)` matrix of `i x i` minors in the fixed subset basis.
pub fn fundamental_rep(m: &SeriesMatrix, i: usize) -> SeriesMatrix {
    let n = m.rows();
    assert!(i >= 1 && i <= n, "exterior power degree out of range");
    if i == 1 {
        return m.clone();
    }
    let basis = subsets(n, i);
    SeriesMatrix::from_fn(basis.len(), basis.len(), |r, c| m.minor(&basis[r], &basis[c]))
}

/// Derivative of `Lambda^i` at the identity: the Leibniz action of an
/// `n x n` matrix `x` on minors.
pub fn fundamental_rep_derivative(x: &SeriesMatrix, i: usize) -> SeriesMatrix {
    let n = x.rows();
    let f = x.field();
    let basis = subsets(n, i);
    SeriesMatrix::from_fn(basis.len(), basis.len(), |r, c| {
        let target = &basis[r];
        let source = &basis[c];
        if target == source {
            let mut acc = LaurentSeries::zero(f);
            for &s in source {
                acc = acc.add(x.at(s, s));
            }
            return acc;
        }
        // nonzero only if target = source with one index replaced
        let removed: Vec<usize> = source.iter().copied().filter(|s| !target.contains(s)).collect();
        let added: Vec<usize> = target.iter().copied().filter(|t| !source.contains(t)).collect();
        if removed.len() != 1 {
            return LaurentSeries::zero(f);
        }
        let (s, t) = (removed[0], added[0]);
        // sign: moving e_t into the slot of e_s and resorting; one
        // transposition per subset element strictly between them
        let between = source
            .iter()
            .filter(|&&u| u != s && u > s.min(t) && u < s.max(t))
            .count();
        let entry = x.at(t, s).clone();
        if between % 2 == 0 {
            entry
        } else {
            entry.neg()
        }
    })
}

/// Largest pole order over all entries: `max(-val)`. Errors on the zero
/// matrix; an entry with undetermined valuation is tolerated only when its
/// horizon already caps its pole order below the certified maximum.
pub fn max_pole_order(m: &SeriesMatrix) -> Result<i64> {
    let mut best: Option<i64> = None;
    let mut risky: Option<i64> = None; // largest possible pole among undetermined entries
    for e in m.entries() {
        match e.valuation() {
            Valuation::Finite(v) => {
                let pole = -v;
                if best.map_or(true, |b| pole > b) {
                    best = Some(pole);
                }
            }
            Valuation::Zero => {}
            Valuation::PrecisionExhausted => {
                let cap = -e.horizon().unwrap_or(0);
                if risky.map_or(true, |r| cap > r) {
                    risky = Some(cap);
                }
            }
        }
    }
    match best {
        None => Err(Error::Validation("max pole order of the zero matrix".into())),
        Some(b) => {
            if let Some(r) = risky {
                if r > b {
                    return Err(Error::PrecisionExhausted { horizon: -r });
                }
            }
            Ok(b)
        }
    }
}

/// The unique dominant coweight `lambda` with `g` in `K pi^lambda K`,
/// recovered from the pole orders of the fundamental representations:
/// `<omega_i, -w_0 lambda> = max pole order of Lambda^i(g)`.
pub fn cartan_coweight(g: &GroupElement) -> Result<Coweight> {
    let n = g.n();
    let mut partial = vec![0i64; n + 1]; // <omega_i, mu> for mu = -w0 lambda
    for i in 1..n {
        partial[i] = max_pole_order(&fundamental_rep(g.mat(), i))?;
    }
    partial[n] = 0; // Lambda^n = det = 1
    let mu: Vec<i64> = (1..=n).map(|i| partial[i] - partial[i - 1]).collect();
    if mu.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Validation(format!(
            "pole orders {partial:?} do not solve to a dominant coweight"
        )));
    }
    let mu = Coweight::from_ints(&mu)
        .map_err(|_| Error::Validation("pole orders do not sum to zero".into()))?;
    Ok(mu.minus_w0())
}

/// Dominant coweight from elementary divisors over `k[[pi]]`, computed by
/// valuation-pivot elimination: the independent oracle for
/// [`cartan_coweight`].
pub fn smith_coweight(g: &GroupElement, want: i64) -> Result<Coweight> {
    let n = g.n();
    // normalize so every entry is integral
    let mut shift = 0i64;
    for e in g.mat().entries() {
        if let Valuation::Finite(v) = e.valuation() {
            shift = shift.min(v);
        }
    }
    // work at the requested horizon: only pivot valuations matter, and the
    // cap keeps elimination fill-in from growing polynomial supports
    let mut m: Vec<Vec<LaurentSeries>> = (0..n)
        .map(|r| (0..n).map(|c| g.mat().at(r, c).shift(-shift).truncate(want)).collect())
        .collect();
    let mut divisors: Vec<i64> = Vec::with_capacity(n);
    for step in 0..n {
        // pivot of least valuation in the trailing block
        let mut best: Option<(i64, usize, usize)> = None;
        let mut undetermined = false;
        for r in step..n {
            for c in step..n {
                match m[r][c].valuation() {
                    Valuation::Finite(v) => {
                        if best.map_or(true, |(bv, _, _)| v < bv) {
                            best = Some((v, r, c));
                        }
                    }
                    Valuation::Zero => {}
                    Valuation::PrecisionExhausted => undetermined = true,
                }
            }
        }
        let Some((v, pr, pc)) = best else {
            if undetermined {
                return Err(Error::PrecisionExhausted { horizon: want });
            }
            return Err(Error::Validation("singular matrix in smith_coweight".into()));
        };
        m.swap(step, pr);
        for row in m.iter_mut() {
            row.swap(step, pc);
        }
        let pivot = m[step][step].clone();
        let pinv = pivot.inv(want)?;
        for r in step + 1..n {
            if m[r][step].is_zero_as_far_as_known() {
                continue;
            }
            let factor = m[r][step].mul(&pinv);
            for c in step..n {
                let delta = factor.mul(&m[step][c]);
                m[r][c] = m[r][c].sub(&delta);
            }
        }
        for c in step + 1..n {
            if m[step][c].is_zero_as_far_as_known() {
                continue;
            }
            let factor = m[step][c].mul(&pinv);
            for r in step..n {
                let delta = factor.mul(&m[r][step]);
                m[r][c] = m[r][c].sub(&delta);
            }
        }
        divisors.push(v);
    }
    divisors.sort();
    // lambda = descending sort of the shifted divisors
    let lambda: Vec<i64> = divisors.iter().rev().map(|d| d + shift).collect();
    Coweight::from_ints(&lambda)
}

/// [`smith_coweight`] under the doubling-horizon retry policy, starting low
/// because rational elimination cost grows steeply with the horizon.
pub fn smith_coweight_auto(g: &GroupElement) -> Result<Coweight> {
    crate::with_horizon_escalation_from(8, |h| smith_coweight(g, h))
}

/// Index pairs of the fixed `sl_n` basis; diagonal markers `(i, i)` stand
/// for `H_i`.
fn sl_basis(n: usize) -> Vec<(usize, usize)> {
    let mut basis: Vec<(usize, usize)> = Vec::new();
    let mut pos: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    pos.sort_by_key(|&(i, j)| (j - i, i));
    basis.extend(pos.iter().copied());
    for i in 0..n - 1 {
        basis.push((i, i));
    }
    let mut negs: Vec<(usize, usize)> = pos.iter().map(|&(i, j)| (j, i)).collect();
    negs.sort_by_key(|&(i, j)| (i - j, j));
    basis.extend(negs);
    basis
}

/// Expands a trace-zero `n x n` matrix in the fixed `sl_n` basis.
fn sl_coordinates(m: &SeriesMatrix) -> Vec<LaurentSeries> {
    let n = m.rows();
    let mut out = Vec::with_capacity(n * n - 1);
    for &(i, j) in sl_basis(n).iter() {
        if i != j {
            out.push(m.at(i, j).clone());
        } else {
            // H_i coordinate: partial sum of the diagonal
            let mut acc = LaurentSeries::zero(m.field());
            for k in 0..=i {
                acc = acc.add(m.at(k, k));
            }
            out.push(acc);
        }
    }
    out
}

/// Matrix of a basis element of `sl_n`.
pub fn sl_basis_matrix(field: FieldId, n: usize, idx: usize) -> SeriesMatrix {
    let basis = sl_basis(n);
    let (i, j) = basis[idx];
    let mut m = SeriesMatrix::zero(field, n, n);
    if i != j {
        m.set(i, j, LaurentSeries::one(field));
    } else {
        m.set(i, i, LaurentSeries::one(field));
        m.set(i + 1, i + 1, LaurentSeries::one(field).neg());
    }
    m
}

/// The matrix of `Ad(gamma): X -> gamma X gamma^{-1}` on `sl_n` in the
/// fixed basis; size `(n^2 - 1) x (n^2 - 1)`.
pub fn adjoint_matrix(gamma: &GroupElement) -> SeriesMatrix {
    let n = gamma.n();
    let f = gamma.field();
    let dim = n * n - 1;
    let ginv = gamma.inverse();
    let mut cols: Vec<Vec<LaurentSeries>> = Vec::with_capacity(dim);
    for idx in 0..dim {
        let x = sl_basis_matrix(f, n, idx);
        let image = gamma.mat().mul(&x).mul(ginv.mat());
        cols.push(sl_coordinates(&image));
    }
    SeriesMatrix::from_fn(dim, dim, |r, c| cols[c][r].clone())
}

/// Random element of `SL_n(O)` as a product of elementary unipotents with
/// integral polynomial entries; used by tests and the CLI samplers.
pub fn random_sln_o(n: usize, field: FieldId, rng: &mut impl rand::Rng) -> GroupElement {
    let mut m = SeriesMatrix::identity(field, n);
    for _ in 0..6 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let mut u = SeriesMatrix::identity(field, n);
        let c = LaurentSeries::from_coeffs(
            field,
            vec![
                (0, Scalar::random(field, rng)),
                (1, Scalar::random(field, rng)),
                (2, Scalar::random(field, rng)),
            ],
            None,
        );
        u.set(i, j, c);
        m = m.mul(&u);
    }
    GroupElement::from_raw(m)
}
