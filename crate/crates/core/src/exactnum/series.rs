//! Truncated formal Laurent series over an exact field, with certified
//! precision horizons.
//!
//! A series stores only its nonzero coefficients, all at exponents strictly
//! below the horizon. `horizon == None` asserts exactness: the series is a
//! Laurent polynomial and every unstored coefficient is genuinely zero. With
//! `horizon == Some(n)`, coefficients at exponents `>= n` are unknown.
//!
//! Horizon propagation: sums take the min of horizons; a product takes
//! `min(N1 + v2, N2 + v1)` where `v_i` is the valuation of the other factor.
//! When a truncated factor has no nonzero stored coefficient (so its
//! valuation is undetermined), its horizon is used as a conservative lower
//! bound for its valuation.

use super::scalar::{FieldId, Scalar};
use crate::{Error, Result};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;

/// Result of a valuation query.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    /// Least exponent carrying a nonzero coefficient.
    Finite(i64),
    /// The series is exactly zero (exactness was asserted).
    Zero,
    /// No nonzero coefficient below the horizon and exactness was not
    /// asserted; rerun at a higher horizon.
    PrecisionExhausted,
}

impl Valuation {
    pub fn finite(self) -> Result<i64> {
        match self {
            Valuation::Finite(v) => Ok(v),
            Valuation::Zero => Err(Error::ZeroDivision),
            Valuation::PrecisionExhausted => Err(Error::PrecisionExhausted { horizon: 0 }),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentSeries {
    field: FieldId,
    /// Nonzero coefficients only, keyed by exponent.
    coeffs: BTreeMap<i64, Scalar>,
    /// `None` = exact Laurent polynomial; `Some(n)` = unknown from `n` on.
    horizon: Option<i64>,
}

impl LaurentSeries {
    pub fn zero(field: FieldId) -> LaurentSeries {
        LaurentSeries { field, coeffs: BTreeMap::new(), horizon: None }
    }

    pub fn zero_truncated(field: FieldId, horizon: i64) -> LaurentSeries {
        LaurentSeries { field, coeffs: BTreeMap::new(), horizon: Some(horizon) }
    }

    pub fn one(field: FieldId) -> LaurentSeries {
        LaurentSeries::monomial(field, 0, Scalar::one(field))
    }

    pub fn from_int(field: FieldId, v: i64) -> LaurentSeries {
        LaurentSeries::monomial(field, 0, Scalar::from_int(field, v))
    }

    /// The exact monomial `c * pi^exp`.
    pub fn monomial(field: FieldId, exp: i64, c: Scalar) -> LaurentSeries {
        assert_eq!(c.field(), field, "scalar field mismatch");
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentSeries { field, coeffs, horizon: None }
    }

    /// `pi^exp` as an exact series.
    pub fn pi(field: FieldId, exp: i64) -> LaurentSeries {
        LaurentSeries::monomial(field, exp, Scalar::one(field))
    }

    /// Builds a series from `(exponent, coefficient)` pairs; zero
    /// coefficients are dropped and anything at or above the horizon is
    /// discarded.
    pub fn from_coeffs(
        field: FieldId,
        pairs: impl IntoIterator<Item = (i64, Scalar)>,
        horizon: Option<i64>,
    ) -> LaurentSeries {
        let mut coeffs = BTreeMap::new();
        for (e, c) in pairs {
            assert_eq!(c.field(), field, "scalar field mismatch");
            if c.is_zero() {
                continue;
            }
            if let Some(h) = horizon {
                if e >= h {
                    continue;
                }
            }
            let entry = coeffs.entry(e).or_insert_with(|| Scalar::zero(field));
            *entry = entry.add(&c);
            if entry.is_zero() {
                coeffs.remove(&e);
            }
        }
        LaurentSeries { field, coeffs, horizon }
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn horizon(&self) -> Option<i64> {
        self.horizon
    }

    pub fn is_exact(&self) -> bool {
        self.horizon.is_none()
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// All stored coefficients vanish; with exactness that means zero, for a
    /// truncated series it only means "zero as far as representable".
    pub fn is_zero_as_far_as_known(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Certified equality to zero, i.e. the series is exact and empty.
    pub fn is_exactly_zero(&self) -> bool {
        self.horizon.is_none() && self.coeffs.is_empty()
    }

    /// Marks an already-polynomial series as exact. The caller asserts that
    /// every coefficient at or above the current horizon is zero.
    pub fn assert_exact(mut self) -> LaurentSeries {
        self.horizon = None;
        self
    }

    /// Forgets exactness beyond `horizon`.
    pub fn truncate(mut self, horizon: i64) -> LaurentSeries {
        let new_h = match self.horizon {
            None => horizon,
            Some(h) => h.min(horizon),
        };
        self.coeffs.retain(|&e, _| e < new_h);
        self.horizon = Some(new_h);
        self
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.keys().next() {
            Some(&e) => Valuation::Finite(e),
            None => {
                if self.horizon.is_none() {
                    Valuation::Zero
                } else {
                    Valuation::PrecisionExhausted
                }
            }
        }
    }

    /// Valuation as an error-carrying integer; `PrecisionExhausted` reports
    /// the horizon that was insufficient.
    pub fn val(&self) -> Result<i64> {
        match self.valuation() {
            Valuation::Finite(v) => Ok(v),
            Valuation::Zero => Err(Error::ZeroDivision),
            Valuation::PrecisionExhausted => {
                Err(Error::PrecisionExhausted { horizon: self.horizon.unwrap_or(0) })
            }
        }
    }

    /// Lower bound for the valuation that is always available: the true
    /// valuation for nonempty series, otherwise the horizon (or `None` for
    /// the exact zero, whose valuation is `+infinity`).
    pub fn val_lower_bound(&self) -> Option<i64> {
        match self.valuation() {
            Valuation::Finite(v) => Some(v),
            Valuation::Zero => None,
            Valuation::PrecisionExhausted => self.horizon,
        }
    }

    fn check(&self, o: &LaurentSeries) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, o.field)));
        }
        Ok(())
    }

    pub fn add(&self, o: &LaurentSeries) -> LaurentSeries {
        self.check(o).expect("series field mismatch");
        let horizon = match (self.horizon, o.horizon) {
            (None, h) | (h, None) => h.or(self.horizon).or(o.horizon),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &o.coeffs {
            let entry = coeffs.entry(*e).or_insert_with(|| Scalar::zero(self.field));
            *entry = entry.add(c);
            if entry.is_zero() {
                coeffs.remove(e);
            }
        }
        if let Some(h) = horizon {
            coeffs.retain(|&e, _| e < h);
        }
        LaurentSeries { field: self.field, coeffs, horizon }
    }

    pub fn sub(&self, o: &LaurentSeries) -> LaurentSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect();
        LaurentSeries { field: self.field, coeffs, horizon: self.horizon }
    }

    pub fn scale(&self, c: &Scalar) -> LaurentSeries {
        if c.is_zero() {
            // an exact scalar zero annihilates even truncated series
            return LaurentSeries::zero(self.field);
        }
        let coeffs = self.coeffs.iter().map(|(e, k)| (*e, k.mul(c))).collect();
        LaurentSeries { field: self.field, coeffs, horizon: self.horizon }
    }

    /// Multiplication by `pi^k`.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect();
        LaurentSeries { field: self.field, coeffs, horizon: self.horizon.map(|h| h + k) }
    }

    pub fn mul(&self, o: &LaurentSeries) -> LaurentSeries {
        self.check(o).expect("series field mismatch");
        // horizon of the product
        let horizon = match (self.horizon, o.horizon) {
            (None, None) => None,
            _ => {
                if self.is_exactly_zero() || o.is_exactly_zero() {
                    return LaurentSeries::zero(self.field);
                }
                let bound = |h: Option<i64>, other: &LaurentSeries| -> Option<i64> {
                    // contribution min(N_self + v_other); None = no constraint
                    h.map(|hh| hh + other.val_lower_bound().unwrap_or(hh))
                };
                let c1 = bound(self.horizon, o);
                let c2 = bound(o.horizon, self);
                match (c1, c2) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (Some(a), None) | (None, Some(a)) => Some(a),
                    (None, None) => None,
                }
            }
        };
        let mut coeffs: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                let e = e1 + e2;
                if let Some(h) = horizon {
                    if e >= h {
                        continue;
                    }
                }
                let entry = coeffs.entry(e).or_insert_with(|| Scalar::zero(self.field));
                *entry = entry.add(&c1.mul(c2));
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentSeries { field: self.field, coeffs, horizon }
    }

    /// Multiplicative inverse, correct up to the propagated horizon.
    ///
    /// Requires a determined valuation. For an exact monomial the result is
    /// exact; for any other exact input the geometric expansion is truncated
    /// at `want` coefficients past the valuation. For a truncated input with
    /// horizon `h` and valuation `v` the result horizon is `h - 2v`, which
    /// makes `s * inv(s) - 1` vanish below `h - v`.
    pub fn inv(&self, want: i64) -> Result<LaurentSeries> {
        let v = match self.valuation() {
            Valuation::Finite(v) => v,
            Valuation::Zero => return Err(Error::ZeroDivision),
            Valuation::PrecisionExhausted => {
                return Err(Error::PrecisionExhausted { horizon: self.horizon.unwrap_or(0) })
            }
        };
        let lead = self.coeff(v);
        let lead_inv = lead.inv()?;
        if self.coeffs.len() == 1 && self.is_exact() {
            return Ok(LaurentSeries::monomial(self.field, -v, lead_inv));
        }
        // s = lead * pi^v * (1 + u), val(u) >= 1 after normalization
        let u = {
            let normalized = self.shift(-v).scale(&lead_inv);
            normalized.sub(&LaurentSeries::one(self.field))
        };
        // absolute result horizon, and its shift into normalized coordinates
        let out_horizon = match self.horizon {
            None => want,
            Some(h) => h - 2 * v,
        };
        let h_norm = (out_horizon + v).max(1);
        // inv = lead^{-1} pi^{-v} * sum (-u)^k
        let neg_u = u.neg().truncate(h_norm);
        let mut acc = LaurentSeries::one(self.field).truncate(h_norm);
        let mut term = LaurentSeries::one(self.field);
        loop {
            term = term.mul(&neg_u);
            if term.is_zero_as_far_as_known() {
                break;
            }
            match term.valuation() {
                Valuation::Finite(tv) if tv < h_norm => acc = acc.add(&term),
                _ => break,
            }
        }
        Ok(acc.scale(&lead_inv).shift(-v))
    }

    pub fn div(&self, o: &LaurentSeries, want: i64) -> Result<LaurentSeries> {
        Ok(self.mul(&o.inv(want)?))
    }

    /// Exact division of Laurent polynomials; errors if either operand is
    /// truncated or the division leaves a remainder.
    pub fn div_exact(&self, o: &LaurentSeries) -> Result<LaurentSeries> {
        if !self.is_exact() || !o.is_exact() {
            return Err(Error::Validation("div_exact wants exact operands".into()));
        }
        if o.is_exactly_zero() {
            return Err(Error::ZeroDivision);
        }
        if self.is_exactly_zero() {
            return Ok(LaurentSeries::zero(self.field));
        }
        let vo = o.val()?;
        let mut rem = self.clone();
        let mut out = BTreeMap::new();
        let lead = o.coeff(vo);
        while !rem.is_exactly_zero() {
            let vr = rem.val()?;
            let q = rem.coeff(vr).div(&lead)?;
            out.insert(vr - vo, q.clone());
            rem = rem.sub(&o.shift(vr - vo).scale(&q));
            if let Some(&e) = rem.coeffs.keys().next() {
                if e <= vr {
                    return Err(Error::Validation("non-exact Laurent division".into()));
                }
            }
        }
        Ok(LaurentSeries { field: self.field, coeffs: out, horizon: None })
    }

    pub fn pow(&self, k: u32) -> LaurentSeries {
        let mut acc = LaurentSeries::one(self.field);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reduction mod pi: the coefficient at exponent 0, after checking
    /// integrality (no negative exponents with nonzero coefficient).
    pub fn residue(&self) -> Result<Scalar> {
        if let Some(&e) = self.coeffs.keys().next() {
            if e < 0 {
                return Err(Error::Validation("residue of a non-integral series".into()));
            }
        }
        if let Some(h) = self.horizon {
            if h <= 0 {
                return Err(Error::PrecisionExhausted { horizon: h });
            }
        }
        Ok(self.coeff(0))
    }

    /// Is every stored exponent nonnegative? (integrality as far as known)
    pub fn is_integral(&self) -> bool {
        self.coeffs.keys().next().map_or(true, |&e| e >= 0)
    }

    /// Substitutes `pi -> pi^e`, the tame totally ramified base change.
    pub fn ramify(&self, e: i64) -> LaurentSeries {
        assert!(e >= 1);
        let coeffs = self.coeffs.iter().map(|(k, c)| (k * e, c.clone())).collect();
        LaurentSeries { field: self.field, coeffs, horizon: self.horizon.map(|h| h * e) }
    }

    /// Reinterprets coefficients in a degree-`d` residue-field extension.
    pub fn extend_residue_field(&self, d: u32) -> Result<LaurentSeries> {
        let mut coeffs = BTreeMap::new();
        let mut field = self.field;
        for (e, c) in &self.coeffs {
            let cc = c.extend_residue_field(d)?;
            field = cc.field();
            coeffs.insert(*e, cc);
        }
        if self.coeffs.is_empty() {
            field = match self.field {
                FieldId::Rational => FieldId::Rational,
                FieldId::Fq { p, .. } => FieldId::fq(p, d)?,
            };
        }
        Ok(LaurentSeries { field, coeffs, horizon: self.horizon })
    }

    /// Equality of all coefficients below the common horizon; exact series
    /// compare exactly.
    pub fn eq_below_common_horizon(&self, o: &LaurentSeries) -> bool {
        if self.field != o.field {
            return false;
        }
        let d = self.sub(o);
        d.is_zero_as_far_as_known()
    }

    /// Random series with terms in `[lo, hi)` and the given horizon; used by
    /// the property tests.
    pub fn random(
        field: FieldId,
        lo: i64,
        hi: i64,
        horizon: Option<i64>,
        rng: &mut impl Rng,
    ) -> LaurentSeries {
        let mut pairs = Vec::new();
        for e in lo..hi {
            if rng.gen_bool(0.4) {
                pairs.push((e, Scalar::random(field, rng)));
            }
        }
        LaurentSeries::from_coeffs(field, pairs, horizon)
    }

    /// Random series with a unit leading coefficient at exponent `v`.
    pub fn random_with_valuation(
        field: FieldId,
        v: i64,
        horizon: Option<i64>,
        rng: &mut impl Rng,
    ) -> LaurentSeries {
        let mut s = LaurentSeries::random(field, v + 1, v + 5, horizon, rng);
        s = s.add(&LaurentSeries::monomial(field, v, Scalar::random_unit(field, rng)));
        s
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (e, c)) in self.coeffs.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                match e {
                    0 => write!(f, "{c}")?,
                    1 => write!(f, "{c}*pi")?,
                    _ => write!(f, "{c}*pi^{e}")?,
                }
            }
        }
        if let Some(h) = self.horizon {
            write!(f, " + O(pi^{h})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldId {
        FieldId::Rational
    }

    #[test]
    fn valuation_reads_least_exponent() {
        // pi^-1 + 2 + 3 pi^2, truncated at 32
        let s = LaurentSeries::from_coeffs(
            q(),
            vec![
                (-1, Scalar::from_int(q(), 1)),
                (0, Scalar::from_int(q(), 2)),
                (2, Scalar::from_int(q(), 3)),
            ],
            Some(32),
        );
        assert_eq!(s.valuation(), Valuation::Finite(-1));
    }

    #[test]
    fn zero_vs_precision_exhausted() {
        let z = LaurentSeries::zero(q());
        assert_eq!(z.valuation(), Valuation::Zero);
        // all stored coefficients cancel at horizon 4, no exactness asserted
        let a = LaurentSeries::from_coeffs(q(), vec![(1, Scalar::from_int(q(), 5))], Some(4));
        let d = a.sub(&a);
        assert_eq!(d.valuation(), Valuation::PrecisionExhausted);
    }

    #[test]
    fn geometric_inverse() {
        // 1 + pi  ->  1 - pi + pi^2 - ...
        let s = LaurentSeries::one(q()).add(&LaurentSeries::pi(q(), 1));
        let inv = s.inv(16).unwrap();
        assert_eq!(inv.coeff(0), Scalar::from_int(q(), 1));
        assert_eq!(inv.coeff(1), Scalar::from_int(q(), -1));
        assert_eq!(inv.coeff(2), Scalar::from_int(q(), 1));
        assert_eq!(inv.coeff(3), Scalar::from_int(q(), -1));
        let prod = s.mul(&inv).sub(&LaurentSeries::one(q()));
        assert!(prod.is_zero_as_far_as_known());
    }

    #[test]
    fn monomial_inverse_is_exact() {
        let s = LaurentSeries::pi(q(), 1);
        let inv = s.inv(16).unwrap();
        assert!(inv.is_exact());
        assert_eq!(inv, LaurentSeries::pi(q(), -1));
        let f5 = FieldId::fq(5, 1).unwrap();
        let two = LaurentSeries::from_int(f5, 2);
        assert_eq!(two.inv(16).unwrap(), LaurentSeries::from_int(f5, 3));
    }

    #[test]
    fn product_horizon_uses_valuations() {
        let a = LaurentSeries::from_coeffs(q(), vec![(2, Scalar::from_int(q(), 1))], Some(10));
        let b = LaurentSeries::from_coeffs(q(), vec![(-1, Scalar::from_int(q(), 1))], Some(3));
        // min(N1 + v2, N2 + v1) = min(10 - 1, 3 + 2) = 5
        let p = a.mul(&b);
        assert_eq!(p.horizon(), Some(5));
        assert_eq!(p.val().unwrap(), 1);
    }

    #[test]
    fn div_exact_laurent() {
        // (pi^-1 + 2 + pi) / (1 + pi) over Q, exact
        let denom = LaurentSeries::one(q()).add(&LaurentSeries::pi(q(), 1));
        let quot = LaurentSeries::from_coeffs(
            q(),
            vec![(-1, Scalar::from_int(q(), 1)), (0, Scalar::from_int(q(), 1))],
            None,
        );
        let num = quot.mul(&denom);
        assert_eq!(num.div_exact(&denom).unwrap(), quot);
    }

    #[test]
    fn ramify_scales_exponents() {
        let s = LaurentSeries::from_coeffs(
            q(),
            vec![(-1, Scalar::from_int(q(), 3)), (2, Scalar::from_int(q(), 1))],
            Some(8),
        );
        let r = s.ramify(2);
        assert_eq!(r.val().unwrap(), -2);
        assert_eq!(r.coeff(4), Scalar::from_int(q(), 1));
        assert_eq!(r.horizon(), Some(16));
    }
}
