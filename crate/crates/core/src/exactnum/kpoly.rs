//! Univariate polynomials over the exact coefficient fields, used for
//! residue computations: gcd, squarefree splitting, and desk-scale
//! irreducible factorization over `F_q` (exhaustive) and `Q` (rational
//! roots, quadratic discriminants).

use super::scalar::{all_field_elements, rational_sqrt, FieldId, Scalar};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial, low degree first, normalized so the leading
/// coefficient is nonzero (the zero polynomial has an empty coefficient
/// vector).
#[derive(Clone, PartialEq, Debug)]
pub struct KPoly {
    pub field: FieldId,
    pub coeffs: Vec<Scalar>,
}

impl KPoly {
    pub fn new(field: FieldId, mut coeffs: Vec<Scalar>) -> KPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        KPoly { field, coeffs }
    }

    pub fn zero(field: FieldId) -> KPoly {
        KPoly { field, coeffs: vec![] }
    }

    pub fn one(field: FieldId) -> KPoly {
        KPoly::new(field, vec![Scalar::one(field)])
    }

    pub fn x(field: FieldId) -> KPoly {
        KPoly::new(field, vec![Scalar::zero(field), Scalar::one(field)])
    }

    pub fn constant(c: Scalar) -> KPoly {
        let field = c.field();
        KPoly::new(field, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn add(&self, o: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        KPoly::new(self.field, coeffs)
    }

    pub fn sub(&self, o: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect();
        KPoly::new(self.field, coeffs)
    }

    pub fn mul(&self, o: &KPoly) -> KPoly {
        if self.is_zero() || o.is_zero() {
            return KPoly::zero(self.field);
        }
        let mut coeffs = vec![Scalar::zero(self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        KPoly::new(self.field, coeffs)
    }

    pub fn scale(&self, s: &Scalar) -> KPoly {
        KPoly::new(self.field, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn monic(&self) -> Result<KPoly> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        Ok(self.scale(&self.lead().inv()?))
    }

    pub fn divrem(&self, d: &KPoly) -> Result<(KPoly, KPoly)> {
        if d.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let dd = d.degree().unwrap();
        let lead_inv = d.lead().inv()?;
        let mut rem = self.clone();
        let mut quot = vec![Scalar::zero(self.field); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let q = rem.lead().mul(&lead_inv);
            let shift = rd - dd;
            quot[shift] = quot[shift].add(&q);
            let mut sub = vec![Scalar::zero(self.field); shift];
            sub.extend(d.coeffs.iter().map(|c| c.mul(&q)));
            rem = rem.sub(&KPoly::new(self.field, sub));
        }
        Ok((KPoly::new(self.field, quot), rem))
    }

    pub fn gcd(&self, o: &KPoly) -> Result<KPoly> {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &KPoly) -> Result<(KPoly, KPoly, KPoly)> {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (KPoly::one(f), KPoly::zero(f));
        let (mut t0, mut t1) = (KPoly::zero(f), KPoly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        let li = r0.lead().inv()?;
        Ok((r0.scale(&li), s0.scale(&li), t0.scale(&li)))
    }

    pub fn derivative(&self) -> KPoly {
        if self.coeffs.len() <= 1 {
            return KPoly::zero(self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&Scalar::from_int(self.field, i as i64)))
            .collect();
        KPoly::new(self.field, coeffs)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// `f(x + c)`.
    pub fn compose_shift(&self, c: &Scalar) -> KPoly {
        let shift = KPoly::new(self.field, vec![c.clone(), Scalar::one(self.field)]);
        let mut acc = KPoly::zero(self.field);
        for coeff in self.coeffs.iter().rev() {
            acc = acc.mul(&shift).add(&KPoly::constant(coeff.clone()));
        }
        acc
    }

    pub fn is_separable(&self) -> Result<bool> {
        let d = self.derivative();
        if d.is_zero() {
            return Ok(false);
        }
        let g = self.gcd(&d)?;
        Ok(g.degree() == Some(0))
    }

    /// Monic squarefree decomposition: returns pairs `(g_i, m_i)` with
    /// `self ~ prod g_i^{m_i}`, the `g_i` squarefree and pairwise coprime.
    /// Fails in the inseparable case `f' = 0` (cannot occur for the degrees
    /// and characteristics this crate admits).
    pub fn squarefree_decomposition(&self) -> Result<Vec<(KPoly, usize)>> {
        let f = self.monic()?;
        if f.degree() == Some(0) {
            return Ok(vec![]);
        }
        let d = f.derivative();
        if d.is_zero() {
            return Err(Error::Unsupported("inseparable polynomial (p-th power)".into()));
        }
        let mut out = Vec::new();
        // Yun's algorithm
        let g = f.gcd(&d)?;
        let mut w = f.divrem(&g)?.0;
        let mut y = d.divrem(&g)?.0;
        let mut i = 1usize;
        loop {
            let z = y.sub(&w.derivative());
            if z.is_zero() {
                if w.degree().unwrap_or(0) > 0 {
                    out.push((w.monic()?, i));
                }
                break;
            }
            let gi = w.gcd(&z)?;
            if gi.degree().unwrap_or(0) > 0 {
                out.push((gi.clone(), i));
            }
            w = w.divrem(&gi)?.0;
            y = z.divrem(&gi)?.0;
            i += 1;
            if w.degree() == Some(0) {
                break;
            }
        }
        Ok(out)
    }

    /// Irreducible factorization of a monic polynomial into
    /// `(factor, multiplicity)` pairs. Over `F_q` the search is exhaustive
    /// over monic divisors (desk scale); over `Q` it handles rational roots,
    /// quadratics by discriminant, and cubics by root search, and reports
    /// `Unsupported` beyond that.
    pub fn factor(&self) -> Result<Vec<(KPoly, usize)>> {
        let mut out: Vec<(KPoly, usize)> = Vec::new();
        for (g, m) in self.squarefree_decomposition()? {
            for piece in g.factor_squarefree()? {
                out.push((piece, m));
            }
        }
        Ok(out)
    }

    fn factor_squarefree(&self) -> Result<Vec<KPoly>> {
        match self.field {
            FieldId::Rational => self.factor_squarefree_q(),
            FieldId::Fq { .. } => self.factor_squarefree_fq(),
        }
    }

    fn factor_squarefree_fq(&self) -> Result<Vec<KPoly>> {
        let mut rem = self.monic()?;
        let mut out = Vec::new();
        // peel roots first
        for x in all_field_elements(self.field)? {
            while rem.degree().unwrap_or(0) >= 1 && rem.eval(&x).is_zero() {
                let lin = KPoly::new(self.field, vec![x.neg(), Scalar::one(self.field)]);
                rem = rem.divrem(&lin)?.0;
                out.push(lin);
            }
        }
        // then exhaust monic divisors of degree 2..deg/2
        let mut d = 2usize;
        while rem.degree().unwrap_or(0) >= 2 * d {
            let mut found = true;
            while found {
                found = false;
                for cand in all_monic_polys(self.field, d)? {
                    let (q, r) = rem.divrem(&cand)?;
                    if r.is_zero() {
                        // cand has no roots (peeled) and minimal degree: irreducible
                        rem = q;
                        out.push(cand);
                        found = true;
                        break;
                    }
                }
                if rem.degree().unwrap_or(0) < 2 * d {
                    break;
                }
            }
            d += 1;
        }
        if rem.degree().unwrap_or(0) >= 1 {
            out.push(rem);
        }
        Ok(out)
    }

    fn factor_squarefree_q(&self) -> Result<Vec<KPoly>> {
        let mut rem = self.monic()?;
        let mut out = Vec::new();
        // rational roots
        loop {
            match rem.degree() {
                None | Some(0) => return Ok(out),
                Some(1) => {
                    out.push(rem.clone());
                    return Ok(out);
                }
                _ => {}
            }
            match rem.rational_root()? {
                Some(r) => {
                    let lin = KPoly::new(
                        self.field,
                        vec![Scalar::Rat(-r.clone()), Scalar::one(self.field)],
                    );
                    rem = rem.divrem(&lin)?.0;
                    out.push(lin);
                }
                None => break,
            }
        }
        match rem.degree().unwrap() {
            2 => {
                // no rational root: check the discriminant anyway for exactness
                let b = rem.coeff(1).as_rational().unwrap().clone();
                let c = rem.coeff(0).as_rational().unwrap().clone();
                let disc = &b * &b - BigRational::from_integer(BigInt::from(4)) * &c;
                if rational_sqrt(&disc).is_some() {
                    // would have been found as rational roots; defensive
                    return Err(Error::Validation("inconsistent rational root search".into()));
                }
                out.push(rem);
                Ok(out)
            }
            3 => {
                // a cubic with no rational root is irreducible over Q
                out.push(rem);
                Ok(out)
            }
            d => Err(Error::Unsupported(format!(
                "factorization of a degree-{d} rational polynomial without rational roots"
            ))),
        }
    }

    /// One rational root of a monic polynomial with rational coefficients,
    /// by the rational-root theorem on the integer-cleared form.
    fn rational_root(&self) -> Result<Option<BigRational>> {
        // clear denominators
        let mut den = BigInt::one();
        for c in &self.coeffs {
            let r = c.as_rational().ok_or_else(|| Error::Validation("rational field expected".into()))?;
            den = num_integer::lcm(den, r.denom().clone());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.as_rational().unwrap();
                (r * BigRational::from_integer(den.clone())).to_integer()
            })
            .collect();
        let a0 = ints[0].clone();
        let an = ints.last().unwrap().clone();
        if a0.is_zero() {
            return Ok(Some(BigRational::zero()));
        }
        let ps = small_divisors(&a0)?;
        let qs = small_divisors(&an)?;
        for p in &ps {
            for qd in &qs {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(p * BigInt::from(sign), qd.clone());
                    if self.eval(&Scalar::Rat(cand.clone())).is_zero() {
                        return Ok(Some(cand));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Positive divisors of `n` by trial division; refuses huge inputs.
fn small_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let limit = BigInt::from(1_000_000_000u64);
    if n > limit {
        return Err(Error::Unsupported("integer too large for divisor search".into()));
    }
    let nv: u64 = n.try_into().map_err(|_| Error::Unsupported("divisor search".into()))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= nv {
        if nv % d == 0 {
            out.push(BigInt::from(d));
            out.push(BigInt::from(nv / d));
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Every monic polynomial of exact degree `d` over a finite field.
fn all_monic_polys(field: FieldId, d: usize) -> Result<Vec<KPoly>> {
    let elems = all_field_elements(field)?;
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let mut coeffs: Vec<Scalar> = idx.iter().map(|&i| elems[i].clone()).collect();
        coeffs.push(Scalar::one(field));
        out.push(KPoly::new(field, coeffs));
        let mut i = 0usize;
        loop {
            if i == d {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < elems.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
