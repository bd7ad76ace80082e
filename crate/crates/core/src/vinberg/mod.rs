//! The type-A Vinberg monoid: points carried as abelianization coordinates
//! plus one matrix per fundamental representation, the extended Steinberg
//! map `chi_plus`, its section `eps_plus` (extended over the boundary by
//! symbolic polynomial matrices), idempotents, the extended discriminant,
//! regularity through centralizer dimension, and the twisted central
//! equivariance of the section.

mod mpoly;

use crate::exactnum::{FieldId, LaurentSeries, SeriesMatrix};
use crate::repn::{
    fundamental_rep, fundamental_rep_derivative, sl_basis_matrix, subsets, GroupElement,
    TorusElement,
};
use crate::rootdata::{coxeter_elements, standard_coxeter, RootDatum, WeylElement};
use crate::{Error, Result};
use mpoly::MPoly;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// A point of the Vinberg monoid `V_G` for `SL_n`: abelianization
/// coordinates `b_1..b_r` together with the matrices `M_1..M_r` acting on
/// the fundamental representations.
#[derive(Clone, Debug)]
pub struct VinbergPoint {
    pub n: usize,
    pub b: Vec<LaurentSeries>,
    pub m: Vec<SeriesMatrix>,
}

impl VinbergPoint {
    pub fn field(&self) -> FieldId {
        self.b.first().map(|s| s.field()).unwrap_or_else(|| self.m[0].field())
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// Monoid multiplication: componentwise on `b`, matrix product on each
    /// fundamental representation.
    pub fn mul(&self, o: &VinbergPoint) -> VinbergPoint {
        assert_eq!(self.n, o.n);
        VinbergPoint {
            n: self.n,
            b: self.b.iter().zip(&o.b).map(|(x, y)| x.mul(y)).collect(),
            m: self.m.iter().zip(&o.m).map(|(x, y)| x.mul(y)).collect(),
        }
    }

    pub fn eq_below_common_horizon(&self, o: &VinbergPoint) -> bool {
        self.n == o.n
            && self.b.iter().zip(&o.b).all(|(x, y)| x.eq_below_common_horizon(y))
            && self.m.iter().zip(&o.m).all(|(x, y)| x.eq_below_common_horizon(y))
    }

    /// Integrality predicate for `V_G(O)`: every coordinate and matrix
    /// entry has nonnegative valuation (as far as representable).
    pub fn is_integral(&self) -> bool {
        self.b.iter().all(|s| s.is_integral())
            && self.m.iter().all(|m| m.entries().iter().all(|s| s.is_integral()))
    }

    /// Predicate for `V_G^0(O)`: integral and each `M_i` is nonzero mod pi.
    pub fn is_integral_nonzero_reduction(&self) -> Result<bool> {
        if !self.is_integral() {
            return Ok(false);
        }
        for m in &self.m {
            let mut nonzero = false;
            for e in m.entries() {
                if !e.residue()?.is_zero() {
                    nonzero = true;
                    break;
                }
            }
            if !nonzero {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks the defining relation between exterior powers of the standard
    /// matrix and the higher fundamental matrices:
    /// `Lambda^k(M_1) = m_k(b) * M_k` with `m_k(b) = prod b_j^{max(k-j,0)}`.
    pub fn monomial_relation_holds(&self) -> bool {
        let rd = RootDatum { n: self.n };
        for k in 2..=self.rank() {
            let lhs = fundamental_rep(&self.m[0], k);
            let mut mono = LaurentSeries::one(self.field());
            for j in 1..k {
                let e = rd.omega_monomial_exponent(k, j);
                mono = mono.mul(&self.b[j - 1].pow(e as u32));
            }
            let rhs = self.m[k - 1].scale(&mono);
            if !lhs.eq_below_common_horizon(&rhs) {
                return false;
            }
        }
        true
    }
}

/// A point `(b, a)` of the adjoint-quotient base `A^r x A^r`.
#[derive(Clone, Debug)]
pub struct CharPoint {
    pub b: Vec<LaurentSeries>,
    pub a: Vec<LaurentSeries>,
}

impl CharPoint {
    pub fn new(b: Vec<LaurentSeries>, a: Vec<LaurentSeries>) -> Result<CharPoint> {
        if b.len() != a.len() || b.is_empty() {
            return Err(Error::Validation("char point needs r = n-1 coordinates of each kind".into()));
        }
        Ok(CharPoint { b, a })
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn field(&self) -> FieldId {
        self.b[0].field()
    }

    pub fn zero(field: FieldId, r: usize) -> CharPoint {
        CharPoint { b: vec![LaurentSeries::zero(field); r], a: vec![LaurentSeries::zero(field); r] }
    }

    pub fn is_integral(&self) -> bool {
        self.b.iter().chain(&self.a).all(|s| s.is_integral())
    }

    pub fn eq_below_common_horizon(&self, o: &CharPoint) -> bool {
        self.b.len() == o.b.len()
            && self.b.iter().zip(&o.b).all(|(x, y)| x.eq_below_common_horizon(y))
            && self.a.iter().zip(&o.a).all(|(x, y)| x.eq_below_common_horizon(y))
    }
}

/// Embedding of a `G_+(F)`-point `(t, g)` into the monoid:
/// `b_i = alpha_i(t)`, `M_i = omega_i(t) * Lambda^i(g)`.
pub fn embed(t: &TorusElement, g: &GroupElement, want: i64) -> Result<VinbergPoint> {
    let n = g.n();
    if t.n() != n {
        return Err(Error::Validation("torus and group ranks differ".into()));
    }
    crate::ensure_good_characteristic(g.field(), n)?;
    let r = n - 1;
    let mut b = Vec::with_capacity(r);
    for i in 0..r {
        b.push(t.alpha(i, want)?);
    }
    let mut m = Vec::with_capacity(r);
    for i in 1..=r {
        let scale = t.omega(i);
        m.push(fundamental_rep(g.mat(), i).scale(&scale));
    }
    Ok(VinbergPoint { n, b, m })
}

/// The extended Steinberg map: `b` passes through, `a_i = Tr(M_i)`.
pub fn chi_plus(v: &VinbergPoint) -> CharPoint {
    CharPoint { b: v.b.clone(), a: v.m.iter().map(|m| m.trace()).collect() }
}

/// Symbolic matrices of the section per `n`, cached: entry `k-1` holds
/// `M_k` as polynomials in the `2r` variables `(b_1..b_r, a_1..a_r)`.
static SECTION_CACHE: Lazy<Mutex<HashMap<usize, Arc<Vec<Vec<Vec<MPoly>>>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn symbolic_section(n: usize) -> Arc<Vec<Vec<Vec<MPoly>>>> {
    if let Some(v) = SECTION_CACHE.lock().unwrap().get(&n) {
        return v.clone();
    }
    let r = n - 1;
    let nv = 2 * r;
    let bvar = |j: usize| MPoly::var(nv, j - 1); // 1-based b_j
    let avar = |j: usize| MPoly::var(nv, r + j - 1); // 1-based a_j
    // standard-representation matrix of the section:
    // first row (a_1, -b_1 a_2, b_1 b_2 a_3, ..., (-1)^r b_1..b_r),
    // subdiagonal (1, b_1, b_1 b_2, ...), zeros elsewhere
    let mut m1 = vec![vec![MPoly::zero(nv); n]; n];
    for (j, row0) in m1[0].iter_mut().enumerate() {
        let mut term = MPoly::constant(nv, if j % 2 == 0 { 1 } else { -1 });
        for l in 1..=j {
            term = term.mul(&bvar(l));
        }
        if j < r {
            term = term.mul(&avar(j + 1));
        }
        *row0 = term;
    }
    for k in 0..r {
        let mut term = MPoly::constant(nv, 1);
        for l in 1..=k {
            term = term.mul(&bvar(l));
        }
        m1[k + 1][k] = term;
    }
    // higher fundamental matrices by exact division of exterior-power
    // minors by the relating monomial m_k(b) = prod b_j^{k-j}
    let mut out: Vec<Vec<Vec<MPoly>>> = vec![m1.clone()];
    let rd = RootDatum { n };
    for k in 2..=r {
        let basis = subsets(n, k);
        let mut mono_exps = vec![0u16; nv];
        for j in 1..k {
            mono_exps[j - 1] = rd.omega_monomial_exponent(k, j) as u16;
        }
        let mut mk = vec![vec![MPoly::zero(nv); basis.len()]; basis.len()];
        for (ri, rows) in basis.iter().enumerate() {
            for (ci, cols) in basis.iter().enumerate() {
                let sub: Vec<Vec<MPoly>> = rows
                    .iter()
                    .map(|&rr| cols.iter().map(|&cc| m1[rr][cc].clone()).collect())
                    .collect();
                mk[ri][ci] = MPoly::det(&sub).div_exact_monomial(&mono_exps);
            }
        }
        out.push(mk);
    }
    let arc = Arc::new(out);
    SECTION_CACHE.lock().unwrap().insert(n, arc.clone());
    arc
}

/// The extended Steinberg section `eps_plus: A^r x A^r -> V_G`, evaluated
/// through its symbolic polynomial matrices so that boundary points
/// (`b_j = 0`) need no division.
pub fn steinberg_section(n: usize, c: &CharPoint) -> Result<VinbergPoint> {
    let r = n - 1;
    if c.rank() != r {
        return Err(Error::Validation("char point rank mismatch".into()));
    }
    crate::ensure_good_characteristic(c.field(), n)?;
    let args: Vec<LaurentSeries> = c.b.iter().chain(&c.a).cloned().collect();
    let sym = symbolic_section(n);
    let m = sym
        .iter()
        .map(|mk| {
            let size = mk.len();
            SeriesMatrix::from_fn(size, size, |rr, cc| mk[rr][cc].eval(&args))
        })
        .collect();
    Ok(VinbergPoint { n, b: c.b.clone(), m })
}

/// Does `chi_plus(steinberg_section(c)) = c` hold exactly?
pub fn verify_section(n: usize, c: &CharPoint) -> Result<bool> {
    let v = steinberg_section(n, c)?;
    Ok(chi_plus(&v).eq_below_common_horizon(c))
}

/// The distinguished idempotent of the deepest stratum: `b = 0` and each
/// `M_i` the rank-one projector onto the highest-weight coordinate.
pub fn idempotent_e_empty(field: FieldId, n: usize) -> VinbergPoint {
    let r = n - 1;
    let b = vec![LaurentSeries::zero(field); r];
    let m = (1..=r)
        .map(|i| {
            let size = subsets(n, i).len();
            let mut p = SeriesMatrix::zero(field, size, size);
            p.set(0, 0, LaurentSeries::one(field));
            p
        })
        .collect();
    VinbergPoint { n, b, m }
}

/// The point of the antidiagonal torus closure with coordinates
/// `alpha_i = b_i`: each `M_i` is diagonal with entry
/// `prod_j b_j^{min(i,j) - |S ^ {1..j}|}` on the basis subset `S`.
pub fn antidiagonal_point(n: usize, b: &[LaurentSeries]) -> Result<VinbergPoint> {
    let r = n - 1;
    if b.len() != r {
        return Err(Error::Validation("need r = n-1 coordinates".into()));
    }
    let field = b[0].field();
    let mut m = Vec::with_capacity(r);
    for i in 1..=r {
        let basis = subsets(n, i);
        let diag: Vec<LaurentSeries> = basis
            .iter()
            .map(|s| {
                let mut acc = LaurentSeries::one(field);
                for j in 1..=r {
                    let inter = s.iter().filter(|&&x| x < j).count() as i64;
                    let e = (i.min(j) as i64) - inter;
                    debug_assert!(e >= 0, "antidiagonal exponent must be nonnegative");
                    acc = acc.mul(&b[j - 1].pow(e as u32));
                }
                acc
            })
            .collect();
        m.push(SeriesMatrix::diagonal(diag));
    }
    Ok(VinbergPoint { n, b: b.to_vec(), m })
}

/// The Weyl representative `n_1 n_2 ... n_r` of the standard Coxeter
/// element in the sign convention of the section (each `n_i` is the
/// identity with the `(i, i+1)` block replaced by `[[0,-1],[1,0]]`).
pub fn coxeter_representative(field: FieldId, n: usize) -> GroupElement {
    let mut m = SeriesMatrix::identity(field, n);
    for i in 0..n - 1 {
        let mut ni = SeriesMatrix::identity(field, n);
        ni.set(i, i, LaurentSeries::zero(field));
        ni.set(i + 1, i + 1, LaurentSeries::zero(field));
        ni.set(i, i + 1, LaurentSeries::one(field).neg());
        ni.set(i + 1, i, LaurentSeries::one(field));
        m = m.mul(&ni);
    }
    GroupElement::from_raw(m)
}

/// Section attached to an arbitrary ordering of the simple reflections:
/// the product `prod_k x_{i_k}(a_{i_k}) n_{i_k}` multiplied in the monoid
/// by the antidiagonal closure point of `b`. Every fundamental matrix is
/// computed through the product, so the construction is polynomial in
/// `(b, a)` and defined on the whole base; for the standard ordering
/// `1, 2, .., r` it coincides with [`steinberg_section`].
pub fn steinberg_section_for_order(n: usize, order: &[usize], c: &CharPoint) -> Result<VinbergPoint> {
    let r = n - 1;
    if c.rank() != r {
        return Err(Error::Validation("char point rank mismatch".into()));
    }
    {
        let mut seen = vec![false; r];
        for &i in order {
            if i >= r || seen[i] {
                return Err(Error::Validation("order must list each simple reflection once".into()));
            }
            seen[i] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::Validation("order must list each simple reflection once".into()));
        }
    }
    let field = c.field();
    let mut e = SeriesMatrix::identity(field, n);
    for &i in order {
        // x_i(a_i) n_i: identity with the (i, i+1) block [[a_i, -1], [1, 0]]
        let mut factor = SeriesMatrix::identity(field, n);
        factor.set(i, i, c.a[i].clone());
        factor.set(i, i + 1, LaurentSeries::one(field).neg());
        factor.set(i + 1, i, LaurentSeries::one(field));
        factor.set(i + 1, i + 1, LaurentSeries::zero(field));
        e = e.mul(&factor);
    }
    let psi = antidiagonal_point(n, &c.b)?;
    let m = (1..=r).map(|k| fundamental_rep(&e, k).mul(&psi.m[k - 1])).collect();
    Ok(VinbergPoint { n, b: c.b.clone(), m })
}

/// Dimension of the infinitesimal centralizer
/// `{ X in sl_n : d rho_i(X) M_i = M_i d rho_i(X) for all i }`, as the
/// kernel dimension of the stacked linear system.
///
/// Over the rationals this is the scheme-theoretic centralizer dimension;
/// over `F_q` the value is offered as a linear-algebra kernel dimension but
/// the identification with the group-scheme dimension is not certified in
/// small characteristic.
pub fn centralizer_dim(v: &VinbergPoint, want: i64) -> Result<usize> {
    let n = v.n;
    let f = v.field();
    let dim = n * n - 1;
    let mut rows_total = 0usize;
    for m in &v.m {
        rows_total += m.rows() * m.rows();
    }
    let mut cols: Vec<Vec<LaurentSeries>> = Vec::with_capacity(dim);
    for idx in 0..dim {
        let x = sl_basis_matrix(f, n, idx);
        let mut col = Vec::with_capacity(rows_total);
        for (i, mi) in v.m.iter().enumerate() {
            let dx = fundamental_rep_derivative(&x, i + 1);
            let comm = dx.mul(mi).sub(&mi.mul(&dx));
            col.extend(comm.entries().iter().cloned());
        }
        cols.push(col);
    }
    let system = SeriesMatrix::from_fn(rows_total, dim, |r, c| cols[c][r].clone());
    system.kernel_dim(want)
}

/// Regularity: centralizer dimension equals the rank.
pub fn is_regular(v: &VinbergPoint, want: i64) -> Result<bool> {
    Ok(centralizer_dim(v, want)? == v.rank())
}

/// A point of the extended maximal-torus closure `V_T`, given either as a
/// pair `(z, t)` of diagonal torus elements representing `(z, t) in T_+`,
/// or by antidiagonal-closure coordinates `b` (where `alpha_i = b_i` and
/// some `b_i` may vanish).
pub enum TorusPoint {
    Pair { z: TorusElement, t: TorusElement },
    AntidiagonalB(Vec<LaurentSeries>),
}

impl TorusPoint {
    /// The corresponding monoid point.
    pub fn to_vinberg(&self, n: usize, want: i64) -> Result<VinbergPoint> {
        match self {
            TorusPoint::Pair { z, t } => embed(z, &t.to_group_element()?, want),
            TorusPoint::AntidiagonalB(b) => antidiagonal_point(n, b),
        }
    }
}

/// The extended discriminant on `V_T`.
///
/// On a torus pair `(z, t)` it is `2rho(z) * prod_{alpha in R} (1 - alpha(t))`;
/// on antidiagonal-closure coordinates it is the continuation
/// `(-1)^{|R+|} prod_{alpha > 0} (1 - alpha(psi_b))^2`, where
/// `alpha(psi_b)` is the monomial in `b` with the simple-root exponents of
/// `alpha`.
pub fn discriminant_plus(n: usize, p: &TorusPoint, want: i64) -> Result<LaurentSeries> {
    let rd = RootDatum { n };
    match p {
        TorusPoint::Pair { z, t } => {
            let field = z.field();
            // 2rho(z) = prod z_i^{n-1-2i}
            let mut acc = LaurentSeries::one(field);
            for (i, &e) in rd.two_rho().iter().enumerate() {
                let factor = if e >= 0 {
                    z.diag()[i].pow(e as u32)
                } else {
                    z.diag()[i].inv(want)?.pow((-e) as u32)
                };
                acc = acc.mul(&factor);
            }
            for (i, j) in rd.positive_roots() {
                // both alpha = e_i - e_j and -alpha
                let up = t.diag()[i].div(&t.diag()[j], want)?;
                let down = t.diag()[j].div(&t.diag()[i], want)?;
                let one = LaurentSeries::one(field);
                acc = acc.mul(&one.sub(&up)).mul(&one.sub(&down));
            }
            Ok(acc)
        }
        TorusPoint::AntidiagonalB(b) => {
            let field = b[0].field();
            let mut acc = LaurentSeries::one(field);
            for (i, j) in rd.positive_roots() {
                // alpha(psi_b) = b_i b_{i+1} ... b_{j-1} (0-based simple roots)
                let mut mono = LaurentSeries::one(field);
                for l in i..j {
                    mono = mono.mul(&b[l]);
                }
                let factor = LaurentSeries::one(field).sub(&mono);
                acc = acc.mul(&factor).mul(&factor);
            }
            if rd.positive_roots().len() % 2 == 1 {
                acc = acc.neg();
            }
            Ok(acc)
        }
    }
}

/// The twisted central equivariance of the section with `c = |Z_G| = n`:
/// `eps_plus(z^n . (b,a)) = z^n psi^{-1} eps_plus(b,a) psi`, where `z^n`
/// multiplies componentwise through the embedding and `psi` is an
/// antidiagonal conjugator depending only on `z`.
///
/// With the sign conventions pinned by the closed-form section matrix, the
/// conjugator that makes the identity exact is the antidiagonal element
/// whose `alpha_i`-coordinate is the `n`-th power of the ratio
/// `omega_i(z)/omega_{i-1}(z)`, i.e. the `i`-th diagonal entry of `z`; on
/// the standard representation it acts as `diag(1, omega_1(z)^n, ...,
/// omega_{n-1}(z)^n)`. For rank one this is the usual `omega_1(z)^n`
/// normalization.
pub fn equivariance_check(n: usize, z: &TorusElement, c: &CharPoint, want: i64) -> Result<bool> {
    let r = n - 1;
    let cexp = n as u32;
    let field = c.field();
    // left side: the section at the scaled characteristic point
    let alpha_z: Vec<LaurentSeries> =
        (0..r).map(|i| z.alpha(i, want)).collect::<Result<Vec<_>>>()?;
    let omega_z: Vec<LaurentSeries> = (1..=r).map(|i| z.omega(i)).collect();
    let scaled = CharPoint {
        b: c.b.iter().zip(&alpha_z).map(|(x, s)| x.mul(&s.pow(cexp))).collect(),
        a: c.a.iter().zip(&omega_z).map(|(x, s)| x.mul(&s.pow(cexp))).collect(),
    };
    let lhs = steinberg_section(n, &scaled)?;
    // right side: z^n psi^{-1} eps(c) psi with psi-coordinates z_i^n
    let psi_coords: Vec<LaurentSeries> = (0..r).map(|i| z.diag()[i].pow(cexp)).collect();
    let psi_inv_coords = psi_coords.iter().map(|s| s.inv(want)).collect::<Result<Vec<_>>>()?;
    let psi = antidiagonal_point(n, &psi_coords)?;
    let psi_inv = antidiagonal_point(n, &psi_inv_coords)?;
    let eps = steinberg_section(n, c)?;
    let conj = psi_inv.mul(&eps).mul(&psi);
    // central scalar through the embedding
    let scalar = VinbergPoint {
        n,
        b: alpha_z.iter().map(|s| s.pow(cexp)).collect(),
        m: (1..=r)
            .map(|i| {
                let size = subsets(n, i).len();
                SeriesMatrix::identity(field, size).scale(&omega_z[i - 1].pow(cexp))
            })
            .collect(),
    };
    let rhs = scalar.mul(&conj);
    Ok(lhs.eq_below_common_horizon(&rhs))
}

/// Summary of the nilpotent cone `chi_plus^{-1}(0)` inside `V_G^0`:
/// its dimension `dim G_+ - 2r = (n^2 - 1) - r`, its irreducible
/// components (indexed by the Coxeter elements), and the dimensions of the
/// strata with full support that constitute it.
#[derive(Clone, Debug, serde::Serialize)]
pub struct NilconeReport {
    pub n: usize,
    pub dim_nilcone: i64,
    pub components: usize,
    /// `(stratum subset size |I|, length of w, dim X_{I,w})` over all
    /// nilpotent strata (`supp(w) = Delta`, `w` minimal in `w W_I`,
    /// `I != Delta`), shifted by `+r` for the central torsor.
    pub strata_dims: Vec<(usize, usize, i64)>,
}

pub fn nilcone_report(n: usize) -> Result<NilconeReport> {
    let rd = RootDatum::new(n)?;
    let r = rd.rank();
    let components = coxeter_elements(&rd).len();
    let dim_nilcone = rd.dim_g() - r as i64;
    // the fiber over zero lies over the closed orbit of the
    // compactification, so its strata are the X_{empty, w} with full
    // support; the central torsor shifts each dimension by +r
    let mut strata_dims = Vec::new();
    for w in crate::rootdata::all_weyl_elements(n) {
        if w.support().len() != r {
            continue;
        }
        let d = crate::rootdata::strata_dim(&rd, &[], &w)?;
        strata_dims.push((0usize, w.length(), d + r as i64));
    }
    // equidimensionality: the maximal stratum dimension equals dim_nilcone,
    // attained exactly on the Coxeter strata
    let max = strata_dims.iter().map(|&(_, _, d)| d).max().unwrap_or(0);
    let top = strata_dims.iter().filter(|&&(_, _, d)| d == dim_nilcone).count();
    if max != dim_nilcone || top != components {
        return Err(Error::Validation(format!(
            "stratum bookkeeping is inconsistent: max {max} vs {dim_nilcone}, top {top}"
        )));
    }
    Ok(NilconeReport { n, dim_nilcone, components, strata_dims })
}

/// The standard Coxeter Weyl element as a permutation (for callers that
/// want to cross-check the representative).
pub fn coxeter_permutation(n: usize) -> WeylElement {
    standard_coxeter(&RootDatum { n })
}
