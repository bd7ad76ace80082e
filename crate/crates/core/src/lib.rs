//! Exact computation of invariants of affine Springer fibers for groups.
//!
//! The library works over the local field `F = k((pi))` with `k` either the
//! exact rationals or a small finite field, using truncated Laurent series
//! with certified precision horizons. On top of that base it implements
//!
//! * the type-A Vinberg monoid with its extended Steinberg map `chi_plus`
//!   and the extended Steinberg section `eps_plus`,
//! * the valuation invariants of regular semisimple group elements
//!   (Cartan coweight, Newton point, discriminant valuation `delta`,
//!   rank defect), and the resulting dimension formula for the fibers
//!   `X_gamma^lambda = { g in G(F)/K : g^{-1} gamma g in K pi^lambda K }`,
//! * a brute-force point-enumeration oracle over `F_q` that cross-checks
//!   the dimension formula at desk scale.

pub mod exactnum;
pub mod oracle;
pub mod repn;
pub mod rootdata;
pub mod springer;
pub mod vinberg;

pub use exactnum::{FieldId, LaurentSeries, Scalar, SeriesMatrix};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// No nonzero coefficient exists below the horizon and exactness was not
    /// asserted; the computation must be rerun at a higher horizon.
    #[error("precision exhausted: no nonzero coefficient below horizon {horizon}")]
    PrecisionExhausted { horizon: i64 },
    /// Division by a series that is exactly zero.
    #[error("division by zero series")]
    ZeroDivision,
    /// Operands live in different coefficient fields.
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    /// The requested computation is outside the implemented (tame) cases.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An input violated a documented precondition.
    #[error("validation: {0}")]
    Validation(String),
    /// Topological Jordan decomposition requires a compact element.
    #[error("non-compact element: reduction mod pi is not invertible")]
    NonCompact,
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default working horizon for truncated series.
pub const DEFAULT_HORIZON: i64 = 32;
/// Horizon ceiling for the automatic retry policy.
pub const MAX_HORIZON: i64 = 256;

/// Runs `f` at the default horizon and doubles the horizon on
/// `PrecisionExhausted`, up to [`MAX_HORIZON`], before surfacing the error.
pub fn with_horizon_escalation<T>(f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    with_horizon_escalation_from(DEFAULT_HORIZON, f)
}

/// Horizon-doubling retry starting from a caller-chosen horizon; operations
/// whose cost grows steeply with precision (rational elimination) start low.
pub fn with_horizon_escalation_from<T>(start: i64, mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut h = start;
    loop {
        match f(h) {
            Err(Error::PrecisionExhausted { .. }) if h < MAX_HORIZON => h *= 2,
            other => return other,
        }
    }
}

/// Characteristic restriction for the `SL_n` constructions: only odd primes
/// not dividing `n` are admitted (the monoid-closure statements moreover
/// assume `p > 3`, which every shipped test configuration satisfies for the
/// operations that need it).
pub fn ensure_good_characteristic(field: exactnum::FieldId, n: usize) -> Result<()> {
    if let Some(p) = field.characteristic() {
        if n as u64 % p == 0 {
            return Err(Error::Validation(format!(
                "characteristic {p} divides n = {n}; this configuration is excluded"
            )));
        }
    }
    Ok(())
}
