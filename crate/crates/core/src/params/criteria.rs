//! Sufficient conditions for `σ_s(an+b)` to stay on one side of `σ_s(cn+d)`
//! for every `s >= s₀`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{round_prec, zeta_bounds, Truth, ROUNDS};
use crate::error::{Error, Result};
use crate::numerics::{pow_scalar, solve_zeta_threshold, Exponent};
use crate::race::Direction;

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// A single sufficient condition, self-contained so it can be re-evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Clause {
    /// `x^s₀·ζ(s₀) < y^s₀`.
    ZetaPower { x: u64, y: u64 },
    /// `1 <= x < y(1 - 1/s₀)`.
    Linear { x: u64, y: u64 },
    /// `ζ(s₀) < x`.
    ZetaBelow {
        #[serde(with = "crate::codec::rational")]
        x: BigRational,
    },
    /// `pn + q > (1+ε)(un + v)` for every `n >= n_from`, with
    /// `lead = (p, q)` and `trail = (u, v)`.
    Slack {
        lead: (u64, u64),
        trail: (u64, u64),
        #[serde(with = "crate::codec::rational")]
        epsilon: BigRational,
        n_from: u64,
    },
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::ZetaPower { x, y } => write!(f, "{x}^s0·zeta(s0) < {y}^s0"),
            Clause::Linear { x, y } => write!(f, "1 <= {x} < {y}(1 - 1/s0)"),
            Clause::ZetaBelow { x } => write!(f, "zeta(s0) < {}", crate::codec::format_ratio(x)),
            Clause::Slack {
                lead: (p, q),
                trail: (u, v),
                epsilon,
                n_from,
            } => write!(
                f,
                "{p}n+{q} > (1 + {})({u}n+{v}) for n >= {n_from}",
                crate::codec::format_ratio(epsilon)
            ),
        }
    }
}

fn unreachable_as_undecided(r: Result<Truth>) -> Result<Truth> {
    match r {
        Err(Error::PrecisionUnreachable { .. }) => Ok(Truth::Undecided),
        other => other,
    }
}

impl Clause {
    /// One evaluation at a fixed refinement level.
    pub fn evaluate_at(&self, s0: &Exponent, round: u32, zeta_cap: u64) -> Result<Truth> {
        unreachable_as_undecided(self.evaluate_inner(s0, round, zeta_cap))
    }

    fn evaluate_inner(&self, s0: &Exponent, round: u32, zeta_cap: u64) -> Result<Truth> {
        let decide = |holds: bool, fails: bool| {
            if holds {
                Truth::Holds
            } else if fails {
                Truth::Fails
            } else {
                Truth::Undecided
            }
        };
        Ok(match self {
            Clause::ZetaPower { x, y } => {
                let prec = round_prec(round);
                let (zlo, zhi) = zeta_bounds(s0, round, zeta_cap)?;
                let (xl, xh) = pow_scalar(&int(*x), s0, prec)?.bounds();
                let (yl, yh) = pow_scalar(&int(*y), s0, prec)?.bounds();
                decide(xh * zhi < yl, xl * zlo >= yh)
            }
            Clause::Linear { x, y } => {
                let s = s0.value();
                let holds = *x >= 1 && int(*x) * s < int(*y) * (s - BigRational::one());
                if holds {
                    Truth::Holds
                } else {
                    Truth::Fails
                }
            }
            Clause::ZetaBelow { x } => {
                let (zlo, zhi) = zeta_bounds(s0, round, zeta_cap)?;
                decide(zhi < *x, zlo >= *x)
            }
            Clause::Slack {
                lead: (p, q),
                trail: (u, v),
                epsilon,
                n_from,
            } => {
                let k = BigRational::one() + epsilon;
                let coef = int(*p) - &k * int(*u);
                let at = &coef * int(*n_from) + int(*q) - &k * int(*v);
                let holds = !coef.is_negative() && at.is_positive();
                if holds {
                    Truth::Holds
                } else {
                    Truth::Fails
                }
            }
        })
    }

    /// Evaluates, tightening up to [`ROUNDS`] times while undecided.
    pub fn evaluate(&self, s0: &Exponent, zeta_cap: u64) -> Result<Truth> {
        let mut t = Truth::Undecided;
        for round in 0..ROUNDS {
            t = self.evaluate_at(s0, round, zeta_cap)?;
            if t != Truth::Undecided {
                break;
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseEval {
    #[serde(flatten)]
    pub clause: Clause,
    pub text: String,
    pub truth: Truth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combine {
    /// Alternative sufficient conditions.
    AnyOf,
    /// Conditions that are sufficient together.
    AllOf,
}

/// A claim `σ_s(an+b) <dir> σ_s(cn+d)` for all `s >= s0` and `n >= n_from`,
/// with the clauses it rests on.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceCriterion {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub claim: Direction,
    pub s0: Exponent,
    /// Real threshold within `2^-20` of optimal, when computed.
    pub s0_real: Option<Exponent>,
    pub n_from: u64,
    #[serde(
        serialize_with = "serialize_opt_ratio",
        skip_serializing_if = "Option::is_none"
    )]
    pub epsilon: Option<BigRational>,
    pub combine: Combine,
    pub clauses: Vec<ClauseEval>,
    /// Clauses the certification rests on; empty when inconclusive.
    pub fired: Vec<Clause>,
    pub certified: bool,
}

fn serialize_opt_ratio<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => crate::codec::rational::serialize(r, s),
        None => s.serialize_none(),
    }
}

impl DominanceCriterion {
    /// Re-evaluates every clause at refinement `round`.
    pub fn recheck(&self, round: u32, zeta_cap: u64) -> Result<Vec<Truth>> {
        self.clauses
            .iter()
            .map(|c| c.clause.evaluate_at(&self.s0, round, zeta_cap))
            .collect()
    }
}

struct Draft {
    spec: (u64, u64, u64, u64),
    claim: Direction,
    s0: Exponent,
    s0_real: Option<Exponent>,
    n_from: u64,
    epsilon: Option<BigRational>,
    combine: Combine,
    clauses: Vec<Clause>,
}

fn assemble(draft: Draft, zeta_cap: u64) -> Result<DominanceCriterion> {
    let mut clauses = Vec::with_capacity(draft.clauses.len());
    for clause in draft.clauses {
        let truth = clause.evaluate(&draft.s0, zeta_cap)?;
        clauses.push(ClauseEval {
            text: clause.to_string(),
            clause,
            truth,
        });
    }
    let holds = |c: &&ClauseEval| c.truth == Truth::Holds;
    let fired: Vec<Clause> = match draft.combine {
        Combine::AnyOf => clauses.iter().find(holds).map(|c| c.clause.clone()).into_iter().collect(),
        Combine::AllOf if clauses.iter().all(|c| c.truth == Truth::Holds) => {
            clauses.iter().map(|c| c.clause.clone()).collect()
        }
        Combine::AllOf => Vec::new(),
    };
    let (a, b, c, d) = draft.spec;
    Ok(DominanceCriterion {
        a,
        b,
        c,
        d,
        claim: draft.claim,
        s0: draft.s0,
        s0_real: draft.s0_real,
        n_from: draft.n_from,
        epsilon: draft.epsilon,
        combine: draft.combine,
        certified: !fired.is_empty(),
        clauses,
        fired,
    })
}

fn check_s0(s0: &Exponent) -> Result<()> {
    if !s0.exceeds_one() {
        return Err(Error::Precondition(format!("s0 must exceed 1, got {s0}")));
    }
    Ok(())
}

fn check_condition_a(a: u64, b: u64, c: u64, d: u64) -> Result<std::cmp::Ordering> {
    if a == 0 || c == 0 {
        return Err(Error::Precondition("a and c must be positive".into()));
    }
    let ord = (a as u128 * d as u128).cmp(&(b as u128 * c as u128));
    if ord.is_eq() {
        return Err(Error::WrongRegime(format!("ad = bc for ({a}, {b}, {c}, {d})")));
    }
    Ok(ord)
}

/// Integer and real thresholds with `ζ(s) < x`.
fn thresholds(x: &BigRational, real: bool, zeta_cap: u64) -> Result<(Exponent, Option<Exponent>)> {
    let s_int = solve_zeta_threshold(x, true, zeta_cap)?.s;
    let s_real = if real {
        Some(solve_zeta_threshold(x, false, zeta_cap)?.s)
    } else {
        None
    };
    Ok((s_int, s_real))
}

/// For `a > c >= 1` and `b >= d >= 0`: `σ_s(an+b) > σ_s(cn+d)` for all
/// `n >= 1` once `ζ(s) < 1 + ε` with `ε = min(1/c, (b-d+1)/(c+d))/2`.
pub fn dominance_s0(a: u64, b: u64, c: u64, d: u64, real: bool, zeta_cap: u64) -> Result<DominanceCriterion> {
    if c == 0 || a <= c {
        return Err(Error::Precondition(format!("need a > c >= 1, got a = {a}, c = {c}")));
    }
    if b < d {
        return Err(Error::Precondition(format!("need b >= d, got b = {b}, d = {d}")));
    }
    let bound = BigRational::new(BigInt::one(), BigInt::from(c))
        .min(BigRational::new(BigInt::from(b - d + 1), BigInt::from(c + d)));
    let epsilon = bound / BigRational::from_integer(BigInt::from(2));
    let x = BigRational::one() + &epsilon;
    let (s0, s0_real) = thresholds(&x, real, zeta_cap)?;
    assemble(
        Draft {
            spec: (a, b, c, d),
            claim: Direction::Gt,
            s0,
            s0_real,
            n_from: 1,
            epsilon: Some(epsilon.clone()),
            combine: Combine::AllOf,
            clauses: vec![
                Clause::Slack {
                    lead: (a, b),
                    trail: (c, d),
                    epsilon,
                    n_from: 1,
                },
                Clause::ZetaBelow { x },
            ],
        },
        zeta_cap,
    )
}

/// For `a != c`: the larger leading coefficient wins for all `s >= s0` and
/// `n >= N`, with `ε = (a/c - 1)/2` and `N` the first `n` from which
/// `an+b > (1+ε)(cn+d)` (roles exchanged when `a < c`).
pub fn eventual_dominance(a: u64, b: u64, c: u64, d: u64, real: bool, zeta_cap: u64) -> Result<DominanceCriterion> {
    if a == 0 || c == 0 || a == c {
        return Err(Error::Precondition(format!("need distinct positive a, c, got a = {a}, c = {c}")));
    }
    let (claim, (p, q), (u, v)) = if a > c {
        (Direction::Gt, (a, b), (c, d))
    } else {
        (Direction::Lt, (c, d), (a, b))
    };
    let epsilon = BigRational::new(BigInt::from(p - u), BigInt::from(2 * u));
    // pn + q > (p+u)/(2u)·(un + v)  ⟺  n·u(p-u) > (p+u)v - 2qu
    let rhs = BigInt::from(p + u) * v - BigInt::from(2u32) * q * u;
    let step = BigInt::from(u) * (p - u);
    let n_from = if rhs < step {
        1
    } else {
        use num_traits::ToPrimitive;
        (rhs / &step + 1u32)
            .to_u64()
            .ok_or_else(|| Error::Resource("N exceeds u64".into()))?
    };
    let x = BigRational::one() + &epsilon;
    let (s0, s0_real) = thresholds(&x, real, zeta_cap)?;
    assemble(
        Draft {
            spec: (a, b, c, d),
            claim,
            s0,
            s0_real,
            n_from,
            epsilon: Some(epsilon.clone()),
            combine: Combine::AllOf,
            clauses: vec![
                Clause::Slack {
                    lead: (p, q),
                    trail: (u, v),
                    epsilon,
                    n_from,
                },
                Clause::ZetaBelow { x },
            ],
        },
        zeta_cap,
    )
}

/// For `ad > bc`: `σ_s(an+b) < σ_s(cn+d)` for all `n >= 1`, `s >= s0`, if
/// `a^s0·ζ(s0) < c^s0` or `1 <= a < c(1 - 1/s0)`.
pub fn always_less_check(a: u64, b: u64, c: u64, d: u64, s0: &Exponent, zeta_cap: u64) -> Result<DominanceCriterion> {
    if !check_condition_a(a, b, c, d)?.is_gt() {
        return Err(Error::WrongRegime(format!("needs ad > bc for ({a}, {b}, {c}, {d})")));
    }
    check_s0(s0)?;
    assemble(
        Draft {
            spec: (a, b, c, d),
            claim: Direction::Lt,
            s0: s0.clone(),
            s0_real: None,
            n_from: 1,
            epsilon: None,
            combine: Combine::AnyOf,
            clauses: vec![Clause::ZetaPower { x: a, y: c }, Clause::Linear { x: a, y: c }],
        },
        zeta_cap,
    )
}

/// For `ad < bc` and `a+b < c+d`: the same conclusion if
/// `(a+b)^s0·ζ(s0) < (c+d)^s0` or `a+b < (c+d)(1 - 1/s0)`.
pub fn always_less_check_sumform(
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    s0: &Exponent,
    zeta_cap: u64,
) -> Result<DominanceCriterion> {
    if !check_condition_a(a, b, c, d)?.is_lt() {
        return Err(Error::WrongRegime(format!("needs ad < bc for ({a}, {b}, {c}, {d})")));
    }
    if a + b >= c + d {
        return Err(Error::Precondition(format!("needs a+b < c+d, got {} >= {}", a + b, c + d)));
    }
    check_s0(s0)?;
    let (x, y) = (a + b, c + d);
    assemble(
        Draft {
            spec: (a, b, c, d),
            claim: Direction::Lt,
            s0: s0.clone(),
            s0_real: None,
            n_from: 1,
            epsilon: None,
            combine: Combine::AnyOf,
            clauses: vec![Clause::ZetaPower { x, y }, Clause::Linear { x, y }],
        },
        zeta_cap,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 10_000_000;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn dominance_examples() {
        let c = dominance_s0(5, 1, 2, 1, false, CAP).unwrap();
        assert_eq!(c.epsilon, Some(q(1, 6)));
        // ζ(3) ≈ 1.2021 > 7/6 > ζ(4) ≈ 1.0823
        assert_eq!(c.s0, Exponent::integer(4));
        assert!(c.certified);
        let c = dominance_s0(2, 0, 1, 0, false, CAP).unwrap();
        assert_eq!(c.epsilon, Some(q(1, 2)));
        // ζ(2) ≈ 1.645 > 3/2 > ζ(3)
        assert_eq!(c.s0, Exponent::integer(3));
        assert!(dominance_s0(2, 0, 2, 0, false, CAP).is_err());
        assert!(dominance_s0(3, 0, 2, 1, false, CAP).is_err());
    }

    #[test]
    fn always_less_examples() {
        let s3 = Exponent::integer(3);
        let c = always_less_check(2, 5, 6, 17, &s3, CAP).unwrap();
        assert!(c.certified);
        assert_eq!(c.clauses[1].truth, Truth::Holds);
        let c = always_less_check(5, 4, 6, 7, &s3, CAP).unwrap();
        assert_eq!(c.fired, vec![Clause::ZetaPower { x: 5, y: 6 }]);
        assert_eq!(c.clauses[1].truth, Truth::Fails);
        let c = always_less_check(6, 1, 2, 5, &s3, CAP).unwrap();
        assert!(!c.certified);
        assert!(c.clauses.iter().all(|e| e.truth == Truth::Fails));
        assert!(matches!(
            always_less_check(1, 2, 1, 1, &s3, CAP),
            Err(Error::WrongRegime(_))
        ));
    }

    #[test]
    fn sumform_examples() {
        let c = always_less_check_sumform(1, 1, 3, 0, &Exponent::integer(4), CAP).unwrap();
        assert_eq!(c.fired, vec![Clause::ZetaPower { x: 2, y: 3 }]);
        assert!(matches!(
            always_less_check_sumform(1, 2, 2, 1, &Exponent::integer(4), CAP),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            always_less_check_sumform(1, 0, 2, 0, &Exponent::integer(4), CAP),
            Err(Error::WrongRegime(_))
        ));
    }

    #[test]
    fn eventual_threshold() {
        // 3n > (5/4)(2n + 10) iff n > 25.
        let c = eventual_dominance(3, 0, 2, 10, false, CAP).unwrap();
        assert_eq!(c.epsilon, Some(q(1, 4)));
        assert_eq!(c.n_from, 26);
        assert!(c.certified);
        let n = 25u64;
        assert!(q(3 * n as i64, 1) <= q(5, 4) * q(2 * n as i64 + 10, 1));
        let c = eventual_dominance(2, 10, 3, 0, false, CAP).unwrap();
        assert_eq!(c.claim, Direction::Lt);
        assert_eq!(c.n_from, 26);
    }

    #[test]
    fn tighter_rechecks_agree() {
        let c = always_less_check(5, 4, 6, 7, &Exponent::integer(3), CAP).unwrap();
        let first: Vec<Truth> = c.clauses.iter().map(|e| e.truth).collect();
        assert_eq!(c.recheck(2, CAP).unwrap(), first);
    }
}
