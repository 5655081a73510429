//! The `g` and `h` crossing tables.

use serde::Serialize;

use super::search::first_crossing;
use super::spec::{Direction, RaceSpec};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::numerics::Exponent;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub key: String,
    pub s: Exponent,
    /// First crossing, or `None` when there is none up to `limit`.
    pub value: Option<u64>,
    pub limit: u64,
}

/// `g(k)`: first `n` with `σ_s(6n+1) > σ_s(6n)` at `s = (k-1)/k`.
pub fn table_g(ks: &[u32], limit: u64, cfg: &RunConfig) -> Result<Vec<TableCell>> {
    ks.iter()
        .map(|&k| {
            if !(2..=10).contains(&k) {
                return Err(Error::Domain(format!("g(k) is tabulated for 2 <= k <= 10, got {k}")));
            }
            let s = Exponent::rational(k as i64 - 1, k as i64)?;
            let spec = RaceSpec::new(6, 1, 6, 0, s.clone(), Direction::Gt)?;
            Ok(TableCell {
                key: format!("g({k})"),
                s,
                value: first_crossing(&spec, limit, cfg)?.map(|r| r.n),
                limit,
            })
        })
        .collect()
}

/// `h(s)`: first `n` with `σ_s(5n+1) > σ_s(2n+29999)`.
pub fn table_h(ss: &[Exponent], limit: u64, cfg: &RunConfig) -> Result<Vec<TableCell>> {
    ss.iter()
        .map(|s| {
            if !s.exceeds_one() {
                return Err(Error::Domain(format!("h(s) needs s > 1, got {s}")));
            }
            let spec = RaceSpec::new(5, 1, 2, 29999, s.clone(), Direction::Gt)?;
            Ok(TableCell {
                key: format!("h({s})"),
                s: s.clone(),
                value: first_crossing(&spec, limit, cfg)?.map(|r| r.n),
                limit,
            })
        })
        .collect()
}
