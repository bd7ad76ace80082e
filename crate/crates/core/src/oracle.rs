//! Brute-force point enumeration of `SL_2` affine Springer fibers over
//! `F_q` at bounded depth, with polynomial point-count fitting, used as an
//! independent check of the dimension formula.
//!
//! Cosets are enumerated in Iwasawa coordinates `g = u(c) pi^nu K` with
//! `nu = (m, -m)`; the coset depends on `c` only modulo `pi^{2m}`, and a
//! certified lower bound on `val(c)` (from leading-term dominance in the
//! membership constraints) makes each stratum an exactly enumerable finite
//! window. Digits of `c` are explored low-exponent-first with sound
//! pruning, so empty or thin strata cost almost nothing.
//!
//! For the conjugation `h = pi^{-nu} u(-c) gamma u(c) pi^{nu}` with
//! `gamma = [[A, B], [C, D]]`:
//!   `h11 = A - c C`, `h22 = D + c C`, `h21 = C pi^{2m}`,
//!   `h12 = (B + (A - D) c - C c^2) pi^{-2m}`,
//! and membership in `K pi^lambda K` for `lambda = (l, -l)` is
//! `min val(h_ij) = -l`.

use crate::exactnum::{all_field_elements, FieldId, LaurentSeries, Scalar};
use crate::rootdata::{dominance_leq, pair_rho, Coweight, RootDatum};
use crate::repn::TorusElement;
use crate::springer::SpringerInput;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use std::sync::Arc;

/// Lookup-table arithmetic for a small finite field (`q <= 128`): elements
/// are indices into the canonical enumeration, with index 0 the zero.
#[derive(Debug)]
struct SmallField {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
}

impl SmallField {
    fn new(field: FieldId) -> Result<Arc<SmallField>> {
        let q = field
            .order()
            .ok_or_else(|| Error::Validation("enumeration needs a finite field".into()))?;
        if q > 128 {
            return Err(Error::Unsupported(format!("field of order {q} too large for tables")));
        }
        let elems = all_field_elements(field)?;
        debug_assert!(elems[0].is_zero() && elems[1].is_one());
        let q = q as usize;
        let index_of = |s: &Scalar| elems.iter().position(|e| e == s).unwrap() as u8;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        for (i, a) in elems.iter().enumerate() {
            neg[i] = index_of(&a.neg());
            for (j, b) in elems.iter().enumerate() {
                add[i * q + j] = index_of(&a.add(b));
                mul[i * q + j] = index_of(&a.mul(b));
            }
        }
        Ok(Arc::new(SmallField { q, add, mul, neg }))
    }

    #[inline]
    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }
}

/// Dense Laurent polynomial over a small finite field, value
/// `sum c[i] pi^{lo + i}` with coefficients as field indices; normalized
/// with nonzero first and last entries.
#[derive(Clone, Debug)]
struct QPoly {
    f: Arc<SmallField>,
    lo: i64,
    c: Vec<u8>,
}

impl QPoly {
    fn zero(f: &Arc<SmallField>) -> QPoly {
        QPoly { f: f.clone(), lo: 0, c: vec![] }
    }

    fn normalize(mut self) -> QPoly {
        while self.c.first() == Some(&0) {
            self.c.remove(0);
            self.lo += 1;
        }
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        if self.c.is_empty() {
            self.lo = 0;
        }
        self
    }

    fn monomial(f: &Arc<SmallField>, e: i64, v: u8) -> QPoly {
        if v == 0 {
            QPoly::zero(f)
        } else {
            QPoly { f: f.clone(), lo: e, c: vec![v] }
        }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Exact valuation; `None` for the zero polynomial.
    fn val(&self) -> Option<i64> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.lo)
        }
    }

    fn add(&self, o: &QPoly) -> QPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = (self.lo + self.c.len() as i64).max(o.lo + o.c.len() as i64);
        let mut c = vec![0u8; (hi - lo) as usize];
        for (i, &v) in self.c.iter().enumerate() {
            c[(self.lo - lo) as usize + i] = v;
        }
        for (i, &v) in o.c.iter().enumerate() {
            let idx = (o.lo - lo) as usize + i;
            c[idx] = self.f.add(c[idx], v);
        }
        QPoly { f: self.f.clone(), lo, c }.normalize()
    }

    fn neg(&self) -> QPoly {
        QPoly {
            f: self.f.clone(),
            lo: self.lo,
            c: self.c.iter().map(|&v| self.f.neg(v)).collect(),
        }
    }

    fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero(&self.f);
        }
        let mut c = vec![0u8; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = self.f.add(c[i + j], self.f.mul(a, b));
            }
        }
        QPoly { f: self.f.clone(), lo: self.lo + o.lo, c }.normalize()
    }

    /// Doubles every coefficient (multiplication by the integer 2).
    fn double(&self) -> QPoly {
        let two = {
            // index of 1 + 1; index 1 is the first nonzero element only for
            // prime fields, so compute it through the table from index of 1
            self.f.add(IDX_ONE, IDX_ONE)
        };
        QPoly {
            f: self.f.clone(),
            lo: self.lo,
            c: self.c.iter().map(|&v| self.f.mul(v, two)).collect(),
        }
        .normalize()
    }

    /// Extracts the known coefficients and the horizon below which they are
    /// certified (`i64::MAX/4` for exact series).
    fn from_series(s: &LaurentSeries, f: &Arc<SmallField>, elems: &[Scalar]) -> Result<(QPoly, i64)> {
        let trust = s.horizon().unwrap_or(i64::MAX / 4);
        let mut out = QPoly::zero(f);
        for (&e, c) in s.iter() {
            let idx = elems
                .iter()
                .position(|x| x == c)
                .ok_or_else(|| Error::Validation("coefficient outside the oracle field".into()))?;
            out = out.add(&QPoly::monomial(f, e, idx as u8));
        }
        Ok((out, trust))
    }
}

/// Index of the multiplicative unit in the canonical element enumeration:
/// for both prime fields and extensions the element after zero is 1.
const IDX_ONE: u8 = 1;

/// Per-stratum exact count.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StratumCount {
    /// `m` for the stratum `nu = (m, -m)`.
    pub m: i64,
    pub count: u64,
    /// The enumeration window was certified complete for this stratum.
    pub certified: bool,
}

/// Exact per-(q, depth) enumeration result.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EnumerationReport {
    pub q: u64,
    pub depth: i64,
    /// `l` for `lambda = (l, -l)`.
    pub lambda: i64,
    pub strata: Vec<StratumCount>,
    pub total: u64,
    /// Every enumerated stratum window was certified.
    pub certified: bool,
    /// A stratum at `|m| = depth` is nonempty, so widening the depth may
    /// find more points (the fiber may have components at every `nu`).
    pub boundary_nonempty: bool,
}

struct Constraints {
    f: Arc<SmallField>,
    a: QPoly,
    d: QPoly,
    c: QPoly,
    ad: QPoly, // A - D
    b: QPoly,
    m: i64,
    /// Horizon below which entry coefficients are certified.
    trust: i64,
}

impl Constraints {
    /// Monotone certified exclusion: every `c` with `val(c) = v` violates
    /// one of the membership constraints for target `-l`.
    fn level_fails(&self, v: i64, l: i64) -> bool {
        let inf = i64::MAX / 4;
        let vc = self.c.val().unwrap_or(inf);
        let va = self.a.val().unwrap_or(inf);
        let vd = self.d.val().unwrap_or(inf);
        let vad = self.ad.val().unwrap_or(inf);
        let vb = self.b.val().unwrap_or(inf);
        if !self.c.is_zero() {
            // h11 = A - cC pinned at vc + v
            if vc + v < va && vc + v < -l {
                return true;
            }
            // h22 = D + cC
            if vc + v < vd && vc + v < -l {
                return true;
            }
            // quadratic term of h12 dominates
            if vc + 2 * v < vad + v && vc + 2 * v < vb && vc + 2 * v - 2 * self.m < -l {
                return true;
            }
        } else {
            // linear h12 term dominates
            if vad + v < vb && vad + v - 2 * self.m < -l {
                return true;
            }
        }
        false
    }

    /// Certified lower bound for `val(c)` on the stratum, for target `-l`.
    fn window_floor(&self, l: i64) -> Result<i64> {
        let top = 2 * self.m;
        for v in (top - 512..top).rev() {
            if self.level_fails(v, l) {
                return Ok(v + 1);
            }
        }
        Err(Error::Validation(
            "could not certify an enumeration window; is gamma regular semisimple?".into(),
        ))
    }

    /// Counts window classes with all entry valuations `>= -l`. Errors when
    /// the certified coefficient horizon is too coarse for the targets.
    fn count_at_least(&self, l: i64, floor: i64) -> Result<u64> {
        // coefficient trust of the evaluated expressions on this window
        let t_aff = self.trust.saturating_add(floor.min(0));
        let t_quad = self.trust.saturating_add((2 * floor).min(0));
        if t_aff <= -l || t_quad <= -l + 2 * self.m {
            return Err(Error::PrecisionExhausted { horizon: self.trust });
        }
        // c-independent entry h21 = C pi^{2m}
        if let Some(vc) = self.c.val() {
            if vc + 2 * self.m < -l {
                return Ok(0);
            }
        }
        let h11 = self.a.clone();
        let h22 = self.d.clone();
        let q0 = self.b.clone();
        Ok(self.dfs(floor, &QPoly::zero(&self.f), &h11, &h22, &q0, l, t_aff, t_quad))
    }

    /// Exact digit DFS: digits of `c` at exponents `[e, 2m)` remain free;
    /// `h11 = A - cC`, `h22 = D + cC`, `qv = B + (A-D)c - C c^2` carry the
    /// values at the fixed digits. A computed valuation at or beyond the
    /// expression trust is only used as the lower bound `trust`, which the
    /// caller guaranteed exceeds every target.
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        e: i64,
        cfix: &QPoly,
        h11: &QPoly,
        h22: &QPoly,
        qv: &QPoly,
        l: i64,
        t_aff: i64,
        t_quad: i64,
    ) -> u64 {
        let top = 2 * self.m;
        let inf = i64::MAX / 4;
        let vc = self.c.val().unwrap_or(inf);
        if e >= top {
            // all digits fixed: the coset representative is determined, so
            // decide exactly (a value at or beyond the trust horizon is
            // certainly above every target, which the caller checked)
            let ok_aff = [h11, h22]
                .iter()
                .all(|h| h.val().unwrap_or(inf).min(t_aff) >= -l);
            let ok_quad = qv.val().unwrap_or(inf).min(t_quad) >= -l + 2 * self.m;
            return if ok_aff && ok_quad { 1 } else { 0 };
        }
        // delta-sensitivity bounds for completions delta with val >= e
        let lin_bound = vc.saturating_add(e);
        let qprime = self.ad.sub(&self.c.double().mul(cfix));
        let qprime_val = qprime.val().unwrap_or(inf).min(t_aff);
        let quad_bound = qprime_val.saturating_add(e).min(vc.saturating_add(2 * e));
        let mut undecided = false;
        // affine entries, target -l
        for h in [h11, h22] {
            let computed = h.val().unwrap_or(inf);
            let exact = computed < t_aff;
            let lower = computed.min(t_aff);
            if exact && computed < lin_bound {
                if computed < -l {
                    return 0;
                }
            } else if lower.min(lin_bound) < -l {
                undecided = true;
            }
        }
        // quadratic entry, target -l + 2m
        {
            let t = -l + 2 * self.m;
            let computed = qv.val().unwrap_or(inf);
            let exact = computed < t_quad;
            let lower = computed.min(t_quad);
            if exact && computed < quad_bound {
                if computed < t {
                    return 0;
                }
            } else if lower.min(quad_bound) < t {
                undecided = true;
            }
        }
        if !undecided {
            // all constraints hold for every completion
            let free = (top - e) as u32;
            return (self.f.q as u64).pow(free);
        }
        // branch on the digit at exponent e
        let mut total = 0u64;
        for digit in 0..self.f.q as u8 {
            let (ncf, nh11, nh22, nqv);
            if digit == 0 {
                (ncf, nh11, nh22, nqv) = (cfix.clone(), h11.clone(), h22.clone(), qv.clone());
            } else {
                let t = QPoly::monomial(&self.f, e, digit);
                ncf = cfix.add(&t);
                let ct = self.c.mul(&t);
                nh11 = h11.sub(&ct);
                nh22 = h22.add(&ct);
                // Q(c + t) = Q(c) + (A - D) t - 2 C c t - C t^2
                nqv = qv
                    .add(&self.ad.mul(&t))
                    .sub(&self.c.double().mul(cfix).mul(&t))
                    .sub(&self.c.mul(&t).mul(&t));
            }
            total += self.dfs(e + 1, &ncf, &nh11, &nh22, &nqv, l, t_aff, t_quad);
        }
        total
    }
}

/// Exact enumeration of `{ g in G(F)/K : g^{-1} gamma g in K pi^lambda K }`
/// intersected with the Iwasawa strata `|m| <= depth`, for `SL_2` over a
/// small finite field (prime powers up to 128 via table arithmetic).
pub fn enumerate_fiber(input: &SpringerInput, depth: i64) -> Result<EnumerationReport> {
    let gamma = &input.gamma;
    if gamma.n() != 2 {
        return Err(Error::Unsupported(
            "enumeration is implemented for SL_2; for split inputs of higher rank use the split-cell formula".into(),
        ));
    }
    let field = gamma.field();
    let q = field
        .order()
        .ok_or_else(|| Error::Validation("enumeration needs a finite residue field".into()))?;
    let lam = input
        .lambda
        .to_ints()
        .ok_or_else(|| Error::Validation("lambda must be integral".into()))?;
    let l = lam[0];
    if !crate::springer::is_regular_semisimple(gamma)? {
        return Err(Error::Validation("gamma must be regular semisimple".into()));
    }
    // entries that are truncated with no visible coefficient cannot be
    // classified as zero or nonzero
    for entry in gamma.mat().entries() {
        if !entry.is_exact() && entry.is_zero_as_far_as_known() {
            return Err(Error::PrecisionExhausted { horizon: entry.horizon().unwrap_or(0) });
        }
    }
    let f = SmallField::new(field)?;
    let elems = all_field_elements(field)?;
    let (a, ta) = QPoly::from_series(gamma.mat().at(0, 0), &f, &elems)?;
    let (b, tb) = QPoly::from_series(gamma.mat().at(0, 1), &f, &elems)?;
    let (c, tc) = QPoly::from_series(gamma.mat().at(1, 0), &f, &elems)?;
    let (d, td) = QPoly::from_series(gamma.mat().at(1, 1), &f, &elems)?;
    let trust = ta.min(tb).min(tc).min(td);
    let strata: Vec<StratumCount> = (-depth..=depth)
        .into_par_iter()
        .map(|m| {
            let cons = Constraints {
                f: f.clone(),
                a: a.clone(),
                d: d.clone(),
                c: c.clone(),
                ad: a.sub(&d),
                b: b.clone(),
                m,
                trust,
            };
            let floor = cons.window_floor(l)?;
            let count = cons.count_at_least(l, floor)? - cons.count_at_least(l - 1, floor)?;
            Ok(StratumCount { m, count, certified: true })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = strata.iter().map(|s| s.count).sum();
    let boundary_nonempty = strata
        .iter()
        .any(|s| s.m.unsigned_abs() as i64 == depth && s.count > 0);
    Ok(EnumerationReport {
        q,
        depth,
        lambda: l,
        strata,
        total,
        certified: true,
        boundary_nonempty,
    })
}

/// Outcome of the point-count fit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FitResult {
    Degree(usize),
    Undetermined,
}

/// Interpolates the counts `(q, N(q))` by the unique polynomial through all
/// points and returns its degree when the polynomial has integer
/// coefficients, positive leading coefficient, and degree at most
/// `max_degree`. Anything else is `Undetermined`.
///
/// Count polynomials of the cells routinely contain `(q - 1)`-type factors,
/// so lower-order coefficients may be negative; integrality plus a positive
/// leading coefficient is the falsifiable part of the polynomiality
/// hypothesis.
pub fn fit_dimension(points: &[(u64, u64)], max_degree: usize) -> FitResult {
    if points.len() < max_degree + 1 {
        return FitResult::Undetermined;
    }
    let rat = |v: u64| BigRational::from_integer(BigInt::from(v));
    // Lagrange interpolation, dense coefficients
    let n = points.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - xj) / (xi - xj)
        let mut denom = BigRational::from_integer(BigInt::from(1));
        let mut poly = vec![BigRational::from_integer(BigInt::from(1))];
        for (j, &(xj, _)) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            denom *= rat(xi) - rat(xj);
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (k, pk) in poly.iter().enumerate() {
                next[k + 1] += pk.clone();
                next[k] -= rat(xj) * pk.clone();
            }
            poly = next;
        }
        let scale = rat(yi) / denom;
        for (k, pk) in poly.iter().enumerate() {
            coeffs[k] += pk.clone() * scale.clone();
        }
    }
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        // identically zero counts: no positive leading coefficient
        return FitResult::Undetermined;
    }
    let degree = coeffs.len() - 1;
    if degree > max_degree {
        return FitResult::Undetermined;
    }
    if !coeffs.iter().all(|c| c.is_integer()) {
        return FitResult::Undetermined;
    }
    if coeffs.last().unwrap().is_negative() {
        return FitResult::Undetermined;
    }
    FitResult::Degree(degree)
}

/// Exact dimension of the split-case cell at the Iwasawa stratum `nu`:
/// `sum_{alpha>0} val(alpha(gamma) - 1) + <rho, lambda - nu>` when `nu` is
/// dominant and `nu_gamma <= nu <= lambda`, `Empty` otherwise. This is an
/// enumeration-free second oracle for split inputs; its maximum over
/// admissible `nu` (at `nu = nu_gamma`) is the fiber dimension.
pub fn split_cell_dim(
    gamma: &TorusElement,
    lambda: &Coweight,
    nu: &Coweight,
) -> Result<Option<i64>> {
    let n = gamma.n();
    let rd = RootDatum::new(n)?;
    let nu_gamma = gamma.valuation_coweight()?;
    if !nu_gamma.is_dominant() {
        return Err(Error::Validation(
            "split gamma must be in standard form (dominant entry valuations)".into(),
        ));
    }
    if !nu.is_dominant()
        || !dominance_leq(&nu_gamma, nu)?
        || !dominance_leq(nu, lambda)?
    {
        return Ok(None);
    }
    let mut total: i64 = 0;
    for (i, j) in rd.positive_roots() {
        let diff = gamma.diag()[j].sub(&gamma.diag()[i]);
        let v = diff.val().map_err(|_| Error::Validation("gamma is not regular".into()))?;
        total += v - gamma.diag()[j].val()?;
    }
    let dim = BigRational::from_integer(BigInt::from(total)) + pair_rho(&rd, &lambda.sub(nu));
    if !dim.is_integer() {
        return Err(Error::Validation("cell dimension must be an integer".into()));
    }
    Ok(Some(i64::try_from(dim.to_integer()).map_err(|_| Error::Validation("overflow".into()))?))
}

/// CSV rows `q,m,depth,count` for the count table.
pub fn report_to_csv(reports: &[EnumerationReport]) -> String {
    let mut out = String::from("q,nu_m,depth,count\n");
    for r in reports {
        for s in &r.strata {
            out.push_str(&format!("{},{},{},{}\n", r.q, s.m, r.depth, s.count));
        }
    }
    out
}
