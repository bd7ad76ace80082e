//! Named `SL_2` elements exercising each arithmetic type of regular
//! semisimple conjugacy class at desk scale: a split topologically
//! unipotent unit, a ramified elliptic element, an unramified elliptic
//! element (finite residue fields with `-1` a nonsquare), the basic
//! non-compact torus translation, and a mixed element for the topological
//! Jordan decomposition.

use crate::exactnum::{FieldId, LaurentSeries, SeriesMatrix};
use crate::repn::GroupElement;
use crate::{Error, Result};

pub const CATALOG_NAMES: [&str; 5] =
    ["split-unit", "ramified", "unramified", "noncompact", "jordan-mixed"];

/// Builds a catalog element over the given field at the given horizon.
pub fn catalog_gamma(name: &str, field: FieldId, want: i64) -> Result<GroupElement> {
    match name {
        // diag(1 + pi, (1 + pi)^{-1}); delta 2, defect 0, nu = 0
        "split-unit" => {
            let a = LaurentSeries::one(field).add(&LaurentSeries::pi(field, 1));
            let ai = a.inv(want)?;
            Ok(GroupElement::from_raw(SeriesMatrix::diagonal(vec![a, ai])))
        }
        // companion of x^2 - (2 + pi) x + 1; delta 1, defect 1, nu = 0
        "ramified" => {
            if field.characteristic() == Some(2) {
                return Err(Error::Validation("ramified entry needs p != 2".into()));
            }
            GroupElement::new(SeriesMatrix::new(
                2,
                2,
                vec![
                    LaurentSeries::zero(field),
                    LaurentSeries::one(field),
                    LaurentSeries::one(field).neg(),
                    LaurentSeries::from_int(field, 2).add(&LaurentSeries::pi(field, 1)),
                ],
            ))
        }
        // companion of x^2 + 1; needs -1 a nonsquare (p = 3 mod 4), so the
        // residue polynomial is irreducible; delta 0, geometric defect 0
        "unramified" => {
            match field.characteristic() {
                Some(p) if p % 4 == 3 => {}
                Some(_) => {
                    return Err(Error::Validation(
                        "unramified entry needs p = 3 mod 4 so that x^2 + 1 stays irreducible"
                            .into(),
                    ))
                }
                // over Q the entry is fine as well: x^2 + 1 is irreducible
                None => {}
            }
            GroupElement::new(SeriesMatrix::new(
                2,
                2,
                vec![
                    LaurentSeries::zero(field),
                    LaurentSeries::one(field),
                    LaurentSeries::one(field).neg(),
                    LaurentSeries::zero(field),
                ],
            ))
        }
        // diag(pi, pi^{-1}); delta -2, defect 0, nu = (1, -1)
        "noncompact" => GroupElement::new(SeriesMatrix::diagonal(vec![
            LaurentSeries::pi(field, 1),
            LaurentSeries::pi(field, -1),
        ])),
        // diag(2 (1 + pi), (2 (1 + pi))^{-1}) over F_5-like fields: the
        // absolutely semisimple part is diag(2, 2^{-1})
        "jordan-mixed" => {
            match field.characteristic() {
                None => {
                    return Err(Error::Validation("jordan-mixed entry needs a finite field".into()))
                }
                // p = 3 makes 2 = 2^{-1}, collapsing the semisimple part
                Some(3) => {
                    return Err(Error::Validation("jordan-mixed entry needs p != 3".into()))
                }
                Some(_) => {}
            }
            let two = LaurentSeries::from_int(field, 2);
            let a = two.mul(&LaurentSeries::one(field).add(&LaurentSeries::pi(field, 1)));
            let ai = a.inv(want)?;
            Ok(GroupElement::from_raw(SeriesMatrix::diagonal(vec![a, ai])))
        }
        other => Err(Error::Validation(format!("unknown catalog entry '{other}'"))),
    }
}

/// Expected invariants of the catalog entries (for fields where the entry
/// is defined): `(delta, geometric defect, newton point k for (k, -k))`.
pub fn catalog_expected(name: &str) -> Option<(i64, i64, i64)> {
    match name {
        "split-unit" => Some((2, 0, 0)),
        "ramified" => Some((1, 1, 0)),
        "unramified" => Some((0, 0, 0)),
        "noncompact" => Some((-2, 0, 1)),
        "jordan-mixed" => Some((0, 0, 0)),
        _ => None,
    }
}
