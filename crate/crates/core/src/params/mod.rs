//! Calculators for explicit ratio bounds, dominance thresholds and
//! one-sign-change parameter families.
//!
//! Every ζ-dependent decision is made from a rigorous enclosure and tightened
//! a few times before being reported as undecided.

pub mod bounds;
pub mod criteria;
pub mod one_change;

pub use bounds::{
    bounds_ad_eq_bc, global_bounds_large_s, ratio_range, ratio_trend, GlobalBounds, PairBounds,
    Provenance, RatioBounds,
};
pub use criteria::{
    always_less_check, always_less_check_sumform, dominance_s0, eventual_dominance, Clause,
    ClauseEval, DominanceCriterion,
};
pub use one_change::{one_change_min_d, one_change_params, DCheck, MinDReport, OneChangeParams};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{zeta_enclosure, Exponent};

/// Outcome of a rigorous check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    Holds,
    Fails,
    Undecided,
}

/// Tightening rounds tried before giving up.
pub const ROUNDS: u32 = 3;

/// `ζ(s)` enclosure at refinement `round`: width `2^-(24 + 16·round)`.
pub(crate) fn zeta_bounds(s: &Exponent, round: u32, cap: u64) -> Result<(BigRational, BigRational)> {
    let target = BigRational::new(BigInt::one(), BigInt::one() << (24 + 16 * round));
    let e = zeta_enclosure(s, &target, cap)?;
    Ok((e.lo, e.hi))
}

/// Working precision matching `round`.
pub(crate) fn round_prec(round: u32) -> u32 {
    128 + 64 * round
}

/// A rigorous upper bound on `ζ(s)`, falling back to `s/(s-1)` when an
/// enclosure is out of reach.
pub(crate) fn zeta_upper(s: &Exponent, cap: u64) -> Result<BigRational> {
    match zeta_bounds(s, 0, cap) {
        Ok((_, hi)) => Ok(hi),
        Err(Error::PrecisionUnreachable { .. }) => {
            Ok(s.value() / (s.value() - BigRational::one()))
        }
        Err(e) => Err(e),
    }
}
