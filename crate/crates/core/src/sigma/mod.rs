//! Factorization and multiplicative functions, pointwise and along progressions.

pub mod factor;
pub mod functions;
pub mod primes;
pub mod scan;

pub use factor::{build_spf, factor_u64, factorize, Factorization, PrimePower, SpfTable};
pub use functions::{
    divisors, sigma_nonneg_int, sigma_reflect_check, sigma_restricted, sigma_s, small_functions,
    SmallFunctions,
};
pub use primes::{is_prime_u64, nth_prime, primality, primes_up_to, Certainty};
pub use scan::{scan_progression, ProgressionSieve, ProgressionSpec, ScanSummary, SievedSegment, TermSink};
