//! Exact and certified real arithmetic.

pub mod ball;
pub mod dyadic;
pub mod elementary;
pub mod exponent;
pub mod interval;
pub mod scalar;
pub mod zeta;

pub use ball::Ball;
pub use dyadic::{Dyadic, Round};
pub use exponent::{Exponent, ExponentKind};
pub use scalar::{compare, pow_scalar, Comparison, ScalarValue};
pub use zeta::{solve_zeta_threshold, zeta_enclosure, ZetaEnclosure, ZetaThreshold};
