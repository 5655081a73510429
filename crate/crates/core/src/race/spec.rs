use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Exponent;
use crate::sigma::ProgressionSpec;

/// Which strict inequality between `σ_s(an+b)` and `σ_s(cn+d)` a search
/// looks for (or a scan asserts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// left > right
    Gt,
    /// left < right
    Lt,
}

impl Direction {
    pub fn ordering(self) -> Ordering {
        match self {
            Direction::Gt => Ordering::Greater,
            Direction::Lt => Ordering::Less,
        }
    }

    pub fn flip(self) -> Direction {
        match self {
            Direction::Gt => Direction::Lt,
            Direction::Lt => Direction::Gt,
        }
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gt" | ">" => Ok(Direction::Gt),
            "lt" | "<" => Ok(Direction::Lt),
            other => Err(Error::Parse(format!("direction must be gt or lt, got {other:?}"))),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Gt => "gt",
            Direction::Lt => "lt",
        })
    }
}

/// Outcome of checking `a, c > 0` and `ad != bc`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Classification {
    Satisfied { det: i128 },
    AdEqBc,
    Violation { detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub a_positive: bool,
    pub c_positive: bool,
    /// `(a, b)` and `(c, d)` are linearly independent over the rationals.
    pub independent: bool,
    /// `ad - bc`.
    pub det: i128,
    pub classification: Classification,
}

pub fn check_condition_a(a: u64, b: u64, c: u64, d: u64) -> ConditionReport {
    let det = a as i128 * d as i128 - b as i128 * c as i128;
    let mut problems = Vec::new();
    if a == 0 {
        problems.push("a = 0");
    }
    if c == 0 {
        problems.push("c = 0");
    }
    let classification = if !problems.is_empty() {
        Classification::Violation {
            detail: problems.join(", "),
        }
    } else if det == 0 {
        Classification::AdEqBc
    } else {
        Classification::Satisfied { det }
    };
    ConditionReport {
        a_positive: a > 0,
        c_positive: c > 0,
        independent: det != 0,
        det,
        classification,
    }
}

/// A race `σ_s(an+b)` against `σ_s(cn+d)` over `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaceSpec {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub s: Exponent,
    pub direction: Direction,
}

impl RaceSpec {
    /// Requires `a, c >= 1`; both `ad = bc` and `ad != bc` are admitted.
    pub fn new(a: u64, b: u64, c: u64, d: u64, s: Exponent, direction: Direction) -> Result<Self> {
        let report = check_condition_a(a, b, c, d);
        if let Classification::Violation { detail } = report.classification {
            return Err(Error::Precondition(format!("race needs a, c > 0: {detail}")));
        }
        Ok(RaceSpec {
            a,
            b,
            c,
            d,
            s,
            direction,
        })
    }

    pub fn condition(&self) -> ConditionReport {
        check_condition_a(self.a, self.b, self.c, self.d)
    }

    pub fn left(&self) -> ProgressionSpec {
        ProgressionSpec {
            a: self.a,
            b: self.b,
        }
    }

    pub fn right(&self) -> ProgressionSpec {
        ProgressionSpec {
            a: self.c,
            b: self.d,
        }
    }

    /// The same race with the two sides exchanged and the direction flipped.
    pub fn swapped(&self) -> RaceSpec {
        RaceSpec {
            a: self.c,
            b: self.d,
            c: self.a,
            d: self.b,
            s: self.s.clone(),
            direction: self.direction.flip(),
        }
    }

    pub fn with_direction(&self, direction: Direction) -> RaceSpec {
        RaceSpec {
            direction,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_examples() {
        assert_eq!(
            check_condition_a(30, 1, 30, 0).classification,
            Classification::Satisfied { det: -30 }
        );
        assert_eq!(check_condition_a(2, 0, 4, 0).classification, Classification::AdEqBc);
        let r = check_condition_a(0, 1, 2, 3);
        assert!(!r.a_positive);
        assert!(matches!(r.classification, Classification::Violation { .. }));
    }

    #[test]
    fn direction_parsing() {
        assert_eq!("gt".parse::<Direction>().unwrap(), Direction::Gt);
        assert_eq!("<".parse::<Direction>().unwrap(), Direction::Lt);
        assert!("ge".parse::<Direction>().is_err());
    }
}
