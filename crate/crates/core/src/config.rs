use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output flavour for the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Human,
}

/// Knobs shared by every long-running computation.
///
/// All values are positive. The seed is fixed by default so that two runs
/// with the same configuration produce identical output.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Working precision for ball arithmetic, in bits.
    pub precision: u32,
    /// Comparisons double the precision up to this cap before giving up.
    pub precision_cap: u32,
    /// Number of progression members per sieve segment.
    pub segment_size: usize,
    /// Worker threads used by scans.
    pub parallelism: usize,
    /// Maximum number of candidates examined by prime searches.
    pub prime_budget: u64,
    /// Iteration budget for each Pollard rho attempt.
    pub rho_budget: u64,
    /// Seed for every randomized routine.
    pub seed: u64,
    /// Largest divisor count enumerated by restricted divisor sums.
    pub divisor_cap: u64,
    /// Largest partial-sum length used by zeta enclosures.
    pub zeta_terms_cap: u64,
    /// Largest table built by the smallest-prime-factor sieve.
    pub spf_cap: u64,
    pub format: OutputFormat,
    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: 128,
            precision_cap: 4096,
            segment_size: 1 << 16,
            parallelism: 1,
            prime_budget: 1_000_000,
            rho_budget: 1 << 22,
            seed: 0x5167_a5ce,
            divisor_cap: 1 << 20,
            zeta_terms_cap: 10_000_000,
            spf_cap: 1 << 28,
            format: OutputFormat::Human,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("precision", self.precision as u64),
            ("precision_cap", self.precision_cap as u64),
            ("segment_size", self.segment_size as u64),
            ("parallelism", self.parallelism as u64),
            ("prime_budget", self.prime_budget),
            ("rho_budget", self.rho_budget),
            ("divisor_cap", self.divisor_cap),
            ("zeta_terms_cap", self.zeta_terms_cap),
            ("spf_cap", self.spf_cap),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Precondition(format!("{name} must be positive")));
            }
        }
        if self.precision < 16 {
            return Err(Error::Precondition("precision must be at least 16 bits".into()));
        }
        if self.precision_cap < self.precision {
            return Err(Error::Precondition(
                "precision_cap must not be below precision".into(),
            ));
        }
        Ok(())
    }

    /// Parses a TOML config file; absent keys keep their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Precisions tried by an escalating comparison: `precision`, doubled
    /// until it reaches `precision_cap`.
    pub fn precision_ladder(&self) -> Vec<u32> {
        let mut out = vec![self.precision];
        let mut p = self.precision;
        while p < self.precision_cap {
            p = (p.saturating_mul(2)).min(self.precision_cap);
            out.push(p);
        }
        out
    }

    /// Runs `f` inside a thread pool sized by `parallelism`.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(self.parallelism.max(1))
            .build()
        {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_doubles_to_cap() {
        let cfg = RunConfig {
            precision: 128,
            precision_cap: 1000,
            ..RunConfig::default()
        };
        assert_eq!(cfg.precision_ladder(), vec![128, 256, 512, 1000]);
    }

    #[test]
    fn toml_overrides_and_rejects_zero() {
        let cfg = RunConfig::from_toml_str("precision = 256\nparallelism = 4\n").unwrap();
        assert_eq!(cfg.precision, 256);
        assert_eq!(cfg.parallelism, 4);
        assert_eq!(cfg.seed, RunConfig::default().seed);
        assert!(RunConfig::from_toml_str("segment_size = 0").is_err());
        assert!(RunConfig::from_toml_str("bogus = 1").is_err());
    }
}
