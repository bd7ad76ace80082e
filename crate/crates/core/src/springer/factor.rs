//! Newton polygons, residual polynomials, Hensel splitting, and the
//! geometric irreducible-factor count of monic polynomials over `k((pi))`.
//!
//! "Geometric" means over `kbar((pi))`: the residue field is taken
//! algebraically closed, so only ramification can glue roots into one
//! factor. A factor with ramification `e` and residue degree `f` therefore
//! counts `f` times. This is the count the rank-defect of a centralizer
//! torus sees, since an unramified residue extension splits after the
//! (algebraically closed) base change while a ramified one does not.
//!
//! Supported splitting: integral-slope segments with arbitrary residue
//! multiplicity (recursively recentered, extending `F_q` scalars where the
//! repeated residue factor is not linear), and fractional-slope segments
//! whose residual polynomial is separable (or of length one). Anything
//! deeper reports `Unsupported` rather than guessing.

use crate::exactnum::{FieldId, KPoly, LaurentSeries, Scalar, Valuation};
use crate::{Error, Result};
use num_integer::Integer;

/// Dense univariate polynomial with Laurent-series coefficients, low degree
/// first. The leading coefficient is kept; callers maintain monicity.
#[derive(Clone, Debug)]
pub struct SeriesPoly {
    pub coeffs: Vec<LaurentSeries>,
}

impl SeriesPoly {
    pub fn new(coeffs: Vec<LaurentSeries>) -> SeriesPoly {
        assert!(!coeffs.is_empty());
        SeriesPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> FieldId {
        self.coeffs[0].field()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs
            .last()
            .map(|c| c.sub(&LaurentSeries::one(self.field())).is_zero_as_far_as_known())
            .unwrap_or(false)
    }

    pub fn mul(&self, o: &SeriesPoly) -> SeriesPoly {
        let f = self.field();
        let mut out = vec![LaurentSeries::zero(f); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        SeriesPoly::new(out)
    }

    pub fn sub(&self, o: &SeriesPoly) -> SeriesPoly {
        let f = self.field();
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &Vec<LaurentSeries>, i: usize| {
            v.get(i).cloned().unwrap_or_else(|| LaurentSeries::zero(f))
        };
        SeriesPoly::new((0..n).map(|i| get(&self.coeffs, i).sub(&get(&o.coeffs, i))).collect())
    }

    /// Substitutes `x -> pi^v x` and renormalizes monic:
    /// coefficient `c_j` becomes `c_j pi^{v (j - n)}`.
    pub fn scale_root_valuation(&self, v: i64) -> SeriesPoly {
        let n = self.degree() as i64;
        SeriesPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c.shift(v * (j as i64 - n)))
                .collect(),
        )
    }

    /// `f(c + x)` for an exact residue-field constant `c`.
    pub fn compose_shift(&self, c: &Scalar) -> SeriesPoly {
        let f = self.field();
        let cc = LaurentSeries::monomial(f, 0, c.clone());
        // Horner in (x + c)
        let mut acc: Vec<LaurentSeries> = vec![LaurentSeries::zero(f)];
        for coeff in self.coeffs.iter().rev() {
            // acc = acc * (x + c) + coeff
            let mut next = vec![LaurentSeries::zero(f); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = next[i + 1].add(a);
                next[i] = next[i].add(&a.mul(&cc));
            }
            next[0] = next[0].add(coeff);
            acc = next;
        }
        acc.truncate(self.coeffs.len());
        SeriesPoly::new(acc)
    }

    /// Residue polynomial (coefficients mod pi); requires integrality.
    pub fn residue(&self) -> Result<KPoly> {
        let f = self.field();
        let coeffs = self.coeffs.iter().map(|c| c.residue()).collect::<Result<Vec<_>>>()?;
        Ok(KPoly::new(f, coeffs))
    }

    pub fn extend_residue_field(&self, d: u32) -> Result<SeriesPoly> {
        Ok(SeriesPoly::new(
            self.coeffs.iter().map(|c| c.extend_residue_field(d)).collect::<Result<Vec<_>>>()?,
        ))
    }

    /// Smallest horizon over the coefficients, if any is truncated.
    pub fn min_horizon(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| c.horizon()).min()
    }
}

/// One segment of the lower Newton polygon: `length` roots, each of
/// valuation `val_num / val_den` (in lowest terms, `val_den >= 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub val_num: i64,
    pub val_den: i64,
    pub length: usize,
}

impl Segment {
    pub fn is_integral(&self) -> bool {
        self.val_den == 1
    }

    /// Number of residual clusters: `length / val_den`.
    pub fn clusters(&self) -> usize {
        self.length / self.val_den as usize
    }
}

/// Lower Newton polygon of a monic polynomial: segments ordered by
/// decreasing root valuation (from the constant coefficient up).
///
/// Exactly-zero coefficients sit at `+infinity` and never touch the hull; a
/// truncated coefficient with no visible term is accepted only when its
/// horizon already lies on or above the hull of the determined points.
pub fn newton_polygon(f: &SeriesPoly) -> Result<Vec<Segment>> {
    let n = f.degree();
    let mut pts: Vec<(i64, i64)> = Vec::new(); // (j, val c_j), determined
    let mut bounds: Vec<(i64, i64)> = Vec::new(); // (j, lower bound)
    for (j, c) in f.coeffs.iter().enumerate() {
        match c.valuation() {
            Valuation::Finite(v) => pts.push((j as i64, v)),
            Valuation::Zero => {}
            Valuation::PrecisionExhausted => {
                bounds.push((j as i64, c.horizon().unwrap_or(0)));
            }
        }
    }
    if pts.first().map(|&(j, _)| j) != Some(0) {
        return Err(Error::Validation(
            "newton polygon needs a nonzero constant coefficient (strip exact roots first)".into(),
        ));
    }
    if pts.last().map(|&(j, _)| j) != Some(n as i64) {
        return Err(Error::PrecisionExhausted { horizon: f.min_horizon().unwrap_or(0) });
    }
    // lower convex hull, monotone scan
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &(x, y) in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop (x2,y2) if it lies on or above the chord (x1,y1)-(x,y)
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    // certify that unknown coefficients cannot dip below the hull
    for &(j, h) in &bounds {
        let mut ok = true;
        for w in hull.windows(2) {
            let ((x1, y1), (x2, y2)) = (w[0], w[1]);
            if j >= x1 && j <= x2 {
                // hull value at j: y1 + (y2-y1)(j-x1)/(x2-x1); compare h
                if h * (x2 - x1) < y1 * (x2 - x1) + (y2 - y1) * (j - x1) {
                    ok = false;
                }
            }
        }
        if !ok {
            return Err(Error::PrecisionExhausted { horizon: h });
        }
    }
    let mut segments = Vec::new();
    for w in hull.windows(2) {
        let ((x1, y1), (x2, y2)) = (w[0], w[1]);
        let run = x2 - x1;
        let _rise = y2 - y1;
        // root valuation = -slope = (y1 - y2) / run
        let g = (y1 - y2).gcd(&run);
        let g = if g == 0 { 1 } else { g.abs() };
        let (mut num, mut den) = ((y1 - y2) / g, run / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        segments.push(Segment { val_num: num, val_den: den, length: run as usize });
    }
    Ok(segments)
}

/// Residual polynomial of a polygon segment: for the segment starting at
/// coefficient index `j0` with root valuation `v = num/den`, the residue of
/// `c_{j0 + i den} / pi^{line}` at the on-line indices.
fn residual_poly(f: &SeriesPoly, start: usize, seg: &Segment) -> Result<KPoly> {
    let field = f.field();
    let m = seg.clusters();
    let mut coeffs = Vec::with_capacity(m + 1);
    // line value at j0: val c_{j0}; steps of `den` decrease by `num`
    let base = f.coeffs[start].val()?;
    for i in 0..=m {
        let j = start + i * seg.val_den as usize;
        let line = base - seg.val_num * i as i64;
        let c = &f.coeffs[j];
        match c.valuation() {
            Valuation::Finite(v) if v == line => coeffs.push(c.coeff(v)),
            Valuation::Finite(v) if v > line => coeffs.push(Scalar::zero(field)),
            Valuation::Finite(_) => {
                return Err(Error::Validation("coefficient below the polygon line".into()))
            }
            Valuation::Zero => coeffs.push(Scalar::zero(field)),
            Valuation::PrecisionExhausted => {
                if c.horizon().unwrap_or(0) > line {
                    coeffs.push(Scalar::zero(field));
                } else {
                    return Err(Error::PrecisionExhausted { horizon: c.horizon().unwrap_or(0) });
                }
            }
        }
    }
    Ok(KPoly::new(field, coeffs))
}

/// Hensel lift of a coprime residue factorization: given monic `f` with
/// integral coefficients and monic coprime `gbar * hbar = res(f)`, returns
/// monic `(g, h)` with `f = g h mod pi^want` and the stated residues.
pub fn hensel_split(f: &SeriesPoly, gbar: &KPoly, hbar: &KPoly, want: i64) -> Result<(SeriesPoly, SeriesPoly)> {
    let field = f.field();
    let want = match f.min_horizon() {
        Some(h) => want.min(h),
        None => want,
    };
    let (one, s, t) = gbar.xgcd(hbar)?;
    if one.degree() != Some(0) {
        return Err(Error::Validation("hensel_split needs coprime residue factors".into()));
    }
    let lift = |p: &KPoly| -> SeriesPoly {
        let mut coeffs: Vec<LaurentSeries> = p
            .coeffs
            .iter()
            .map(|c| LaurentSeries::monomial(field, 0, c.clone()))
            .collect();
        if coeffs.is_empty() {
            coeffs.push(LaurentSeries::zero(field));
        }
        SeriesPoly::new(coeffs)
    };
    let mut g = lift(gbar);
    let mut h = lift(hbar);
    let dg = gbar.degree().unwrap_or(0);
    for m in 1..want {
        let d = f.sub(&g.mul(&h));
        // coefficientwise pi^m part
        let dm = KPoly::new(field, d.coeffs.iter().map(|c| c.coeff(m)).collect());
        if dm.is_zero() {
            continue;
        }
        // solve Bbar hbar + Abar gbar = dm, deg Bbar < dg
        let tb = t.mul(&dm);
        let (quot, bbar) = tb.divrem(gbar)?;
        let abar = s.mul(&dm).add(&quot.mul(hbar));
        let add_correction = |p: &mut SeriesPoly, corr: &KPoly| {
            for (i, c) in corr.coeffs.iter().enumerate() {
                if i < p.coeffs.len() && !c.is_zero() {
                    let bump = LaurentSeries::monomial(field, m, c.clone());
                    p.coeffs[i] = p.coeffs[i].add(&bump);
                }
            }
        };
        add_correction(&mut g, &bbar);
        add_correction(&mut h, &abar);
        let _ = dg;
    }
    // mark the certainty level of the lift
    let trunc = |p: SeriesPoly| {
        SeriesPoly::new(p.coeffs.into_iter().map(|c| c.truncate(want)).collect())
    };
    Ok((trunc(g), trunc(h)))
}

/// Number of irreducible factors of a monic polynomial over `kbar((pi))`.
pub fn count_geometric_factors(f: &SeriesPoly, want: i64) -> Result<usize> {
    count_geom_inner(f, want, 0)
}

fn count_geom_inner(f: &SeriesPoly, want: i64, depth: usize) -> Result<usize> {
    if depth > 16 {
        return Err(Error::Unsupported("factorization recursion too deep".into()));
    }
    let field = f.field();
    let mut count = 0usize;
    // strip exact zero roots (possible after recentering at an exact root)
    let mut low = 0usize;
    while low < f.degree() && f.coeffs[low].is_exactly_zero() {
        low += 1;
    }
    let work = if low > 0 {
        count += low;
        SeriesPoly::new(f.coeffs[low..].to_vec())
    } else {
        f.clone()
    };
    if work.degree() == 0 {
        return Ok(count);
    }
    if work.degree() == 1 {
        return Ok(count + 1);
    }
    let segments = newton_polygon(&work)?;
    // classify segments; residual-separable ones are counted directly
    // from the residual, no splitting needed
    let mut per_segment: Vec<Option<usize>> = Vec::with_capacity(segments.len());
    {
        let mut start = 0usize;
        for seg in &segments {
            let a = residual_poly(&work, start, seg)?;
            start += seg.length;
            if seg.clusters() == 1 {
                per_segment.push(Some(1));
            } else if a.is_separable()? {
                per_segment.push(Some(seg.clusters()));
            } else if !seg.is_integral() {
                return Err(Error::Unsupported(
                    "fractional-slope segment with inseparable residual".into(),
                ));
            } else {
                per_segment.push(None);
            }
        }
    }
    if per_segment.iter().all(Option::is_some) {
        return Ok(count + per_segment.into_iter().flatten().sum::<usize>());
    }
    // a segment with repeated residual factors must be isolated and
    // recursed into; split the polygon bottom-up at the minimal root
    // valuation (the last segment)
    let min_seg = *segments.last().unwrap();
    if !min_seg.is_integral() {
        return Err(Error::Unsupported(
            "cannot isolate an integral segment behind a fractional one".into(),
        ));
    }
    let v = min_seg.val_num;
    let scaled = work.scale_root_valuation(v);
    let res = scaled.residue()?;
    let x_part = res
        .degree()
        .map(|d| d - degree_of_unit_part(&res))
        .unwrap_or(0);
    if x_part == 0 {
        // single-segment slope-zero polynomial: recurse on residue structure
        return Ok(count + count_unit_block(&scaled, want, depth)?);
    }
    // split res = x^{x_part} * A with A(0) != 0
    let a_part = KPoly::new(field, res.coeffs[x_part..].to_vec());
    let mut xpoly = vec![Scalar::zero(field); x_part + 1];
    xpoly[x_part] = Scalar::one(field);
    let xpoly = KPoly::new(field, xpoly);
    let (gg, hh) = hensel_split(&scaled, &a_part, &xpoly, want)?;
    count += count_unit_block(&gg, want, depth)?;
    count += count_geom_inner(&hh, want, depth + 1)?;
    Ok(count)
}

fn degree_of_unit_part(res: &KPoly) -> usize {
    // degree of the polynomial after removing the x^k factor
    let k = res.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    res.degree().unwrap_or(0) - k
}

/// Factor count of a slope-zero block whose residue has no root at 0.
fn count_unit_block(g: &SeriesPoly, want: i64, depth: usize) -> Result<usize> {
    let field = g.field();
    let res = g.residue()?;
    let pieces = res.factor()?;
    if pieces.iter().all(|(_, m)| *m == 1) {
        return Ok(pieces.iter().map(|(p, _)| p.degree().unwrap_or(0)).sum());
    }
    let mut count = 0usize;
    let mut remaining = g.clone();
    let mut rem_res = res.monic()?;
    for (p, mult) in &pieces {
        let block_res = {
            let mut b = KPoly::one(field);
            for _ in 0..*mult {
                b = b.mul(p);
            }
            b
        };
        let (other, _r) = rem_res.divrem(&block_res)?;
        let (block, rest) = if other.degree() == Some(0) {
            (remaining.clone(), None)
        } else {
            let (bb, rr) = hensel_split(&remaining, &block_res, &other, want)?;
            (bb, Some(rr))
        };
        // count the block
        if *mult == 1 {
            count += p.degree().unwrap_or(0);
        } else if p.degree() == Some(1) {
            // recenter at the repeated residue root c
            let c = p.coeff(0).neg();
            let shifted = block.compose_shift(&c);
            count += count_geom_inner(&shifted, want, depth + 1)?;
        } else {
            // repeated irreducible residue of degree d: extend scalars
            let d = p.degree().unwrap() as u32;
            match field {
                FieldId::Fq { .. } => {
                    let block_ext = block.extend_residue_field(d)?;
                    let p_ext = KPoly::new(
                        block_ext.field(),
                        p.coeffs
                            .iter()
                            .map(|c| c.extend_residue_field(d))
                            .collect::<Result<Vec<_>>>()?,
                    );
                    // find one root of p over the extension
                    let root = crate::exactnum::all_field_elements(block_ext.field())?
                        .into_iter()
                        .find(|x| p_ext.eval(x).is_zero())
                        .ok_or_else(|| {
                            Error::Unsupported("no root of residue factor in extension".into())
                        })?;
                    // split off the cluster above this root
                    let lin = KPoly::new(
                        block_ext.field(),
                        vec![root.neg(), Scalar::one(block_ext.field())],
                    );
                    let mut cluster_res = KPoly::one(block_ext.field());
                    for _ in 0..*mult {
                        cluster_res = cluster_res.mul(&lin);
                    }
                    let full_res = block_ext.residue()?.monic()?;
                    let (others, _) = full_res.divrem(&cluster_res)?;
                    let cluster = if others.degree() == Some(0) {
                        block_ext
                    } else {
                        hensel_split(&block_ext, &cluster_res, &others, want)?.0
                    };
                    let shifted = cluster.compose_shift(&root);
                    let per = count_geom_inner(&shifted, want, depth + 1)?;
                    count += d as usize * per;
                }
                FieldId::Rational => {
                    return Err(Error::Unsupported(
                        "repeated irreducible residue of degree > 1 over Q".into(),
                    ))
                }
            }
        }
        match rest {
            Some(rr) => {
                remaining = rr;
                rem_res = other;
            }
            None => break,
        }
    }
    Ok(count)
}
