//! The explicit index `n = (z-1)/30` built from consecutive primes.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::sigma::nth_prime;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MartinRecord {
    /// `z = (p_4 p_5 ... p_383)·p_385·p_388`.
    #[serde(with = "crate::codec::biguint")]
    pub z: BigUint,
    #[serde(with = "crate::codec::biguint")]
    pub n: BigUint,
    pub digit_count: usize,
    pub z_mod_30: u64,
    /// Indices `j` of the primes `p_j` multiplied into `z`.
    pub first_index: usize,
    pub last_run_index: usize,
    pub extra_indices: Vec<usize>,
}

pub fn martin_number() -> MartinRecord {
    let (first, last, extra) = (4, 383, vec![385, 388]);
    let mut z = BigUint::one();
    for j in (first..=last).chain(extra.iter().copied()) {
        z *= nth_prime(j);
    }
    let z_mod_30 = (&z % 30u32).to_u64().expect("small");
    let n = (&z - 1u32) / 30u32;
    MartinRecord {
        digit_count: n.to_string().len(),
        z,
        n,
        z_mod_30,
        first_index: first,
        last_run_index: last,
        extra_indices: extra,
    }
}
