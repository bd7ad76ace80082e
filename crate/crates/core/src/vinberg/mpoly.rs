//! Tiny multivariate polynomials with integer coefficients, used to carry
//! the higher fundamental matrices of the Steinberg section symbolically in
//! the coordinates `(b_1..b_r, a_1..a_r)` before evaluation. Working
//! symbolically makes the division by the relating monomial exact, so the
//! section is defined at `b_j = 0` without any limit-taking.

use crate::exactnum::{FieldId, LaurentSeries};
use std::collections::BTreeMap;

/// Exponent vector keyed polynomial; coefficients stay small (they are
/// signed sums of products of section-matrix entries, bounded by `n!`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, i64>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: i64) -> MPoly {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(vec![0; nvars], c);
        }
        MPoly { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> MPoly {
        let mut exps = vec![0u16; nvars];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, 1);
        MPoly { nvars, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let entry = terms.entry(e.clone()).or_insert(0);
            *entry += c;
            if *entry == 0 {
                terms.remove(e);
            }
        }
        MPoly { nvars: self.nvars, terms }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> MPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        MPoly { nvars: self.nvars, terms }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut terms: BTreeMap<Vec<u16>, i64> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert(0);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| *c != 0);
        MPoly { nvars: self.nvars, terms }
    }

    /// Exact division by a monomial; panics if some term is not divisible
    /// (the callers divide by monomials that divide by construction).
    pub fn div_exact_monomial(&self, exps: &[u16]) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let q: Vec<u16> = e
                    .iter()
                    .zip(exps)
                    .map(|(a, b)| a.checked_sub(*b).expect("monomial division must be exact"))
                    .collect();
                (q, *c)
            })
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    /// Evaluates at Laurent-series arguments.
    pub fn eval(&self, args: &[LaurentSeries]) -> LaurentSeries {
        assert_eq!(args.len(), self.nvars);
        let field = args.first().map(|s| s.field()).unwrap_or(FieldId::Rational);
        let mut acc = LaurentSeries::zero(field);
        for (exps, c) in &self.terms {
            let mut term = LaurentSeries::from_int(field, *c);
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&args[i].pow(e as u32));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Determinant of a square MPoly matrix given row-major, by Laplace
    /// expansion (desk-scale sizes only).
    pub fn det(m: &[Vec<MPoly>]) -> MPoly {
        let n = m.len();
        let nvars = m[0][0].nvars;
        match n {
            0 => MPoly::constant(nvars, 1),
            1 => m[0][0].clone(),
            _ => {
                let mut acc = MPoly::zero(nvars);
                for j in 0..n {
                    if m[0][j].is_zero() {
                        continue;
                    }
                    let sub: Vec<Vec<MPoly>> = (1..n)
                        .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
                        .collect();
                    let term = m[0][j].mul(&MPoly::det(&sub));
                    acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::FieldId;

    #[test]
    fn arithmetic_and_eval() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.mul(&y).add(&MPoly::constant(2, 3)); // xy + 3
        let f = FieldId::Rational;
        let v = p.eval(&[LaurentSeries::pi(f, 1), LaurentSeries::from_int(f, 2)]);
        // 2 pi + 3
        assert_eq!(v.coeff(0), crate::exactnum::Scalar::from_int(f, 3));
        assert_eq!(v.coeff(1), crate::exactnum::Scalar::from_int(f, 2));
    }

    #[test]
    fn monomial_division() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        // (x^2 y + x y^2) / (x y) = x + y
        let p = x.mul(&x).mul(&y).add(&x.mul(&y).mul(&y));
        let q = p.div_exact_monomial(&[1, 1]);
        assert_eq!(q, x.add(&y));
    }

    #[test]
    fn determinant() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let m = vec![
            vec![x.clone(), MPoly::constant(2, 1)],
            vec![MPoly::constant(2, 1), y.clone()],
        ];
        assert_eq!(MPoly::det(&m), x.mul(&y).sub(&MPoly::constant(2, 1)));
    }
}
