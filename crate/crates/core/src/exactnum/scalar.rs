//! Exact coefficient fields: arbitrary-precision rationals and prime finite
//! fields `F_p` with small extensions `F_{p^e}`.
//!
//! Extension fields are realized as `F_p[x]` modulo the lexicographically
//! smallest monic irreducible of degree `e`; the modulus is derived from
//! `(p, e)` alone so elements are self-contained values.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use rand::Rng;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

/// Tag identifying the coefficient field a value lives in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub enum FieldId {
    Rational,
    Fq { p: u64, e: u32 },
}

impl FieldId {
    pub fn fq(p: u64, e: u32) -> Result<FieldId> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Validation(format!("p = {p} must be an odd prime")));
        }
        if e == 0 || e > 6 {
            return Err(Error::Validation(format!("extension degree e = {e} out of range 1..=6")));
        }
        if e > 1 {
            modulus(p, e)?; // fail early if no modulus is constructible
        }
        Ok(FieldId::Fq { p, e })
    }

    pub fn characteristic(&self) -> Option<u64> {
        match self {
            FieldId::Rational => None,
            FieldId::Fq { p, .. } => Some(*p),
        }
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldId::Rational => None,
            FieldId::Fq { p, e } => Some(p.pow(*e)),
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldId::Rational => write!(f, "rational"),
            FieldId::Fq { p, e: 1 } => write!(f, "fq:{p}"),
            FieldId::Fq { p, e } => write!(f, "fq:{p}:{e}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Cache of extension-field moduli, keyed by `(p, e)`. Coefficients are
/// stored low-degree first without the leading 1.
static MODULI: Lazy<Mutex<HashMap<(u64, u32), Vec<u64>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Lexicographically smallest monic irreducible of degree `e` over `F_p`,
/// returned as its non-leading coefficients (length `e`, low first).
fn modulus(p: u64, e: u32) -> Result<Vec<u64>> {
    if let Some(m) = MODULI.lock().unwrap().get(&(p, e)) {
        return Ok(m.clone());
    }
    let total = (p as u128).pow(e);
    if total > 1 << 24 {
        return Err(Error::Unsupported(format!("finite field F_{{{p}^{e}}} too large")));
    }
    let mut coeffs = vec![0u64; e as usize];
    loop {
        if coeffs[0] != 0 && poly_is_irreducible(p, &coeffs) {
            MODULI.lock().unwrap().insert((p, e), coeffs.clone());
            return Ok(coeffs);
        }
        // increment the coefficient vector, high degree fastest last
        let mut i = 0usize;
        loop {
            if i == e as usize {
                return Err(Error::Unsupported(format!("no irreducible of degree {e} over F_{p}")));
            }
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

/// Irreducibility of `x^e + c_{e-1} x^{e-1} + ... + c_0` over `F_p` by
/// exhaustive root / quadratic-divisor search (e <= 6, desk scale).
fn poly_is_irreducible(p: u64, c: &[u64]) -> bool {
    let e = c.len();
    if e == 1 {
        return true;
    }
    let eval = |x: u64| -> u64 {
        let mut acc = 1u64; // leading coefficient
        for i in (0..e).rev() {
            acc = (acc * x + c[i]) % p;
        }
        acc
    };
    if (0..p).any(|x| eval(x) == 0) {
        return false;
    }
    if e < 4 {
        return true;
    }
    // search for monic divisors of degree 2..=e/2 by trial division
    for d in 2..=(e / 2) {
        let mut div = vec![0u64; d];
        loop {
            if poly_divides(p, &div, c, e) {
                return false;
            }
            let mut i = 0usize;
            loop {
                if i == d {
                    break;
                }
                div[i] += 1;
                if div[i] < p {
                    break;
                }
                div[i] = 0;
                i += 1;
            }
            if div.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    true
}

/// Does the monic poly with non-leading coeffs `div` divide the monic poly
/// with non-leading coeffs `c` (degree `e`) over `F_p`?
fn poly_divides(p: u64, div: &[u64], c: &[u64], e: usize) -> bool {
    let d = div.len();
    let mut rem: Vec<u64> = c.to_vec();
    rem.push(1); // degree e, monic
    for i in (d..=e).rev() {
        let q = rem[i];
        if q == 0 {
            continue;
        }
        rem[i] = 0;
        for (j, &dv) in div.iter().enumerate() {
            let idx = i - d + j;
            rem[idx] = (rem[idx] + p - (q * dv) % p) % p;
        }
    }
    rem.iter().take(d).all(|&x| x == 0)
}

/// An element of `F_{p^e}` as a residue polynomial, low degree first,
/// always of length `e` with entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FqElem {
    pub p: u64,
    pub e: u32,
    pub c: Vec<u64>,
}

impl FqElem {
    fn reduce(p: u64, e: u32, mut c: Vec<u64>) -> FqElem {
        let ee = e as usize;
        while c.len() > ee && c.last() == Some(&0) {
            c.pop();
        }
        if c.len() > ee {
            let m = modulus(p, e).expect("modulus");
            for i in (ee..c.len()).rev() {
                let q = c[i] % p;
                c[i] = 0;
                if q == 0 {
                    continue;
                }
                for (j, &mv) in m.iter().enumerate() {
                    let idx = i - ee + j;
                    c[idx] = (c[idx] + p * p - (q * mv) % p) % p;
                }
            }
            c.truncate(ee);
        }
        c.resize(ee, 0);
        for v in &mut c {
            *v %= p;
        }
        FqElem { p, e, c }
    }

    fn from_residue(p: u64, e: u32, v: u64) -> FqElem {
        let mut c = vec![0u64; e as usize];
        c[0] = v % p;
        FqElem { p, e, c }
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    fn add(&self, o: &FqElem) -> FqElem {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| (a + b) % self.p).collect();
        FqElem { p: self.p, e: self.e, c }
    }

    fn neg(&self) -> FqElem {
        let c = self.c.iter().map(|&a| (self.p - a) % self.p).collect();
        FqElem { p: self.p, e: self.e, c }
    }

    fn mul(&self, o: &FqElem) -> FqElem {
        let n = self.c.len();
        let mut prod = vec![0u64; 2 * n];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % self.p;
            }
        }
        FqElem::reduce(self.p, self.e, prod)
    }

    fn pow(&self, mut k: u64) -> FqElem {
        let mut base = self.clone();
        let mut acc = FqElem::from_residue(self.p, self.e, 1);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    fn inv(&self) -> Result<FqElem> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        // q - 2 exponentiation; q = p^e fits u64 by construction
        let q = self.p.pow(self.e);
        Ok(self.pow(q - 2))
    }
}

/// One exact scalar of the active coefficient field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Fq(FqElem),
}

impl Scalar {
    pub fn field(&self) -> FieldId {
        match self {
            Scalar::Rat(_) => FieldId::Rational,
            Scalar::Fq(x) => FieldId::Fq { p: x.p, e: x.e },
        }
    }

    pub fn zero(field: FieldId) -> Scalar {
        match field {
            FieldId::Rational => Scalar::Rat(BigRational::zero()),
            FieldId::Fq { p, e } => Scalar::Fq(FqElem::from_residue(p, e, 0)),
        }
    }

    pub fn one(field: FieldId) -> Scalar {
        Scalar::from_int(field, 1)
    }

    pub fn from_int(field: FieldId, v: i64) -> Scalar {
        match field {
            FieldId::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldId::Fq { p, e } => {
                let r = v.rem_euclid(p as i64) as u64;
                Scalar::Fq(FqElem::from_residue(p, e, r))
            }
        }
    }

    pub fn from_ratio(field: FieldId, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::ZeroDivision);
        }
        match field {
            FieldId::Rational => Ok(Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))),
            FieldId::Fq { .. } => {
                let d = Scalar::from_int(field, den);
                Scalar::from_int(field, num).div(&d)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fq(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fq(x) => {
                let mut one = vec![0u64; x.e as usize];
                one[0] = 1;
                x.c == one
            }
        }
    }

    fn check(&self, o: &Scalar) -> Result<()> {
        if self.field() != o.field() {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field(), o.field())));
        }
        Ok(())
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        self.check(o).expect("scalar field mismatch");
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fq(a), Scalar::Fq(b)) => Scalar::Fq(a.add(b)),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fq(a) => Scalar::Fq(a.neg()),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        self.check(o).expect("scalar field mismatch");
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fq(a), Scalar::Fq(b)) => Scalar::Fq(a.mul(b)),
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    Err(Error::ZeroDivision)
                } else {
                    Ok(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fq(a) => Ok(Scalar::Fq(a.inv()?)),
        }
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Scalar> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one(self.field());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Uniform random element; rationals are sampled with small numerator
    /// and denominator so downstream arithmetic stays desk-sized.
    pub fn random(field: FieldId, rng: &mut impl Rng) -> Scalar {
        match field {
            FieldId::Rational => {
                let num = rng.gen_range(-6i64..=6);
                let den = rng.gen_range(1i64..=4);
                Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
            }
            FieldId::Fq { p, e } => {
                let c = (0..e).map(|_| rng.gen_range(0..p)).collect();
                Scalar::Fq(FqElem { p, e, c })
            }
        }
    }

    /// Random nonzero element.
    pub fn random_unit(field: FieldId, rng: &mut impl Rng) -> Scalar {
        loop {
            let s = Scalar::random(field, rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Embeds a prime-field scalar into the degree-`d` extension, or a
    /// rational into itself. Fails for elements of proper extensions.
    pub fn extend_residue_field(&self, d: u32) -> Result<Scalar> {
        match self {
            Scalar::Rat(_) => Ok(self.clone()),
            Scalar::Fq(x) if x.e == 1 => {
                let f = FieldId::fq(x.p, d)?;
                match f {
                    FieldId::Fq { p, e } => Ok(Scalar::Fq(FqElem::from_residue(p, e, x.c[0]))),
                    _ => unreachable!(),
                }
            }
            Scalar::Fq(x) => Err(Error::Unsupported(format!(
                "residue-field extension from F_{{{}^{}}} not implemented",
                x.p, x.e
            ))),
        }
    }

    /// Canonical decimal string: `p/q` for rationals, the residue (or
    /// comma-joined residue polynomial coefficients) for finite fields.
    pub fn to_decimal(&self) -> String {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fq(x) if x.e == 1 => x.c[0].to_string(),
            Scalar::Fq(x) => x.c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        }
    }

    pub fn parse(field: FieldId, s: &str) -> Result<Scalar> {
        let bad = |m: &str| Error::Validation(format!("bad scalar '{s}': {m}"));
        match field {
            FieldId::Rational => {
                let r = if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.trim().parse().map_err(|_| bad("numerator"))?;
                    let d: BigInt = d.trim().parse().map_err(|_| bad("denominator"))?;
                    if d.is_zero() {
                        return Err(bad("zero denominator"));
                    }
                    BigRational::new(n, d)
                } else {
                    let n: BigInt = s.trim().parse().map_err(|_| bad("integer"))?;
                    BigRational::from_integer(n)
                };
                Ok(Scalar::Rat(r))
            }
            FieldId::Fq { p, e } => {
                let parts: Vec<&str> = s.split(',').collect();
                if parts.len() > e as usize {
                    return Err(bad("too many residue coefficients"));
                }
                let mut c = vec![0u64; e as usize];
                for (i, part) in parts.iter().enumerate() {
                    let v: i64 = part.trim().parse().map_err(|_| bad("residue"))?;
                    c[i] = v.rem_euclid(p as i64) as u64;
                }
                Ok(Scalar::Fq(FqElem { p, e, c }))
            }
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// The BigInt absolute value of a rational integer, if that is what
    /// this scalar is.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Rat(r) if r.denom().is_one() => Some(r.numer().clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

/// Enumerates every element of a finite field (used by the desk-scale
/// residue-polynomial factorizer).
pub fn all_field_elements(field: FieldId) -> Result<Vec<Scalar>> {
    match field {
        FieldId::Rational => Err(Error::Unsupported("cannot enumerate the rationals".into())),
        FieldId::Fq { p, e } => {
            let mut out = Vec::new();
            let mut c = vec![0u64; e as usize];
            loop {
                out.push(Scalar::Fq(FqElem { p, e, c: c.clone() }));
                let mut i = 0usize;
                loop {
                    if i == e as usize {
                        return Ok(out);
                    }
                    c[i] += 1;
                    if c[i] < p {
                        break;
                    }
                    c[i] = 0;
                    i += 1;
                }
            }
        }
    }
}

/// Integer square root test for rationals: `Some(sqrt)` when the value is a
/// perfect square in `Q`.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}
