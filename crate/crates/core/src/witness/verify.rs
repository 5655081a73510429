//! Versioned JSON documents and their stateless re-verification.
//!
//! Ratio certificates are re-derived along a second route: left side by
//! enumerating the divisors of `δ`, right side by a product accumulated in
//! the opposite order, both at a higher precision than the stored one.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::certificate::{certify_omega, certify_ratio, Certificate, OmegaCertificate, Verdict};
use super::crt::{check_crt, recheck_comparisons, CrtWitness};
use super::martin::{martin_number, MartinRecord};
use super::newman::{check_witness, NewmanWitness};
use super::triple::{compare_triple, triple_bound, PrimeTripleWitness};
use crate::error::{Error, Result};
use crate::numerics::{pow_scalar, Comparison, Exponent, ScalarValue};
use crate::sigma::{divisors, factorize, is_prime_u64};

pub const SCHEMA: &str = "sigma-race/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Artifact {
    Newman {
        witness: NewmanWitness,
        certificate: Option<Certificate>,
        omega: OmegaCertificate,
    },
    Triple {
        witnesses: Vec<PrimeTripleWitness>,
    },
    Crt {
        witness: CrtWitness,
    },
    Martin {
        record: MartinRecord,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema: String,
    #[serde(flatten)]
    pub artifact: Artifact,
}

impl Document {
    pub fn new(artifact: Artifact) -> Self {
        Document {
            schema: SCHEMA.to_string(),
            artifact,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub kind: String,
    pub checks: Vec<String>,
    /// The certificate verdict, for documents that carry one.
    pub verdict: Option<Verdict>,
}

fn mismatch<T>(what: impl Into<String>) -> Result<T> {
    Err(Error::Verification(what.into()))
}

/// Independent enclosure of the three factors of a ratio certificate:
/// `(left normalized, right normalized lower product, scale)`.
fn second_route(w: &NewmanWitness, s: &Exponent, prec: u32) -> Result<(ScalarValue, ScalarValue, ScalarValue)> {
    let neg = s.neg();
    let rat = |v: &BigUint| BigRational::from_integer(BigInt::from(v.clone()));
    let delta_f = factorize(&w.delta, None, 1 << 20, 7)?;
    let mut left = ScalarValue::from_int(0);
    for u in divisors(&delta_f, 1 << 20)? {
        left = left.add(&pow_scalar(&rat(&u), &neg, prec)?);
    }
    let q_term = ScalarValue::from_int(1).add(&pow_scalar(&rat(&w.q), &neg, prec)?);
    let left = left.mul(&q_term);
    let mut right = ScalarValue::from_int(1);
    for &p in w.primes.iter().rev() {
        let term = pow_scalar(&BigRational::from_integer(p.into()), &neg, prec)?;
        right = right.mul(&ScalarValue::from_int(1).add(&term));
    }
    let quotient = BigRational::new(
        BigInt::from(&w.n * w.a + w.b),
        BigInt::from(&w.n * w.c + w.d),
    );
    Ok((left, right, pow_scalar(&quotient, s, prec)?))
}

fn verify_certificate(w: &NewmanWitness, c: &Certificate, checks: &mut Vec<String>) -> Result<()> {
    if c.ratio_bound != &c.upper_left * &c.scale_upper / &c.lower_right {
        return mismatch("ratio_bound is not upper_left·scale_upper/lower_right");
    }
    let stored_verdict = if c.ratio_bound < BigRational::one() {
        Verdict::CertifiedLess
    } else {
        Verdict::Inconclusive
    };
    if stored_verdict != c.verdict {
        return mismatch("verdict disagrees with the stored ratio bound");
    }
    let (left, right, scale) = second_route(w, &c.s, c.prec + 64)?;
    let (l_lo, l_hi) = left.bounds();
    let (r_lo, r_hi) = right.bounds();
    let (s_lo, s_hi) = scale.bounds();
    // Stored bounds must be consistent with the true values...
    if c.upper_left < l_lo || c.lower_right > r_hi || c.scale_upper < s_lo {
        return mismatch("stored bounds exclude the independently enclosed values");
    }
    checks.push("stored bounds consistent with second-route enclosures".into());
    // ...and the verdict must follow from the second route alone.
    let ratio = &l_hi * &s_hi / &r_lo;
    let verdict = if ratio < BigRational::one() {
        Verdict::CertifiedLess
    } else {
        Verdict::Inconclusive
    };
    if verdict != c.verdict {
        return mismatch(format!("verdict {:?} not reproduced (second route gives {verdict:?})", c.verdict));
    }
    checks.push(format!("verdict {verdict:?} reproduced"));
    // The stored certificate must also be exactly what construction emits.
    if certify_ratio(w, &c.s, c.prec)? != *c {
        return mismatch("certificate differs from a fresh computation");
    }
    checks.push("certificate recomputed bit-for-bit".into());
    Ok(())
}

/// Re-checks a document from scratch.
pub fn verify_document(doc: &Document, ladder: &[u32]) -> Result<VerifyReport> {
    if doc.schema != SCHEMA {
        return mismatch(format!("schema {:?}, expected {SCHEMA:?}", doc.schema));
    }
    let mut checks = Vec::new();
    let mut verdict = None;
    let kind = match &doc.artifact {
        Artifact::Newman {
            witness,
            certificate,
            omega,
        } => {
            check_witness(witness)?;
            checks.push("witness identities hold".into());
            if let Some(c) = certificate {
                verify_certificate(witness, c, &mut checks)?;
                verdict = Some(c.verdict);
            }
            if certify_omega(witness)? != *omega {
                return mismatch("omega certificate differs from a fresh computation");
            }
            checks.push("omega counts reproduced".into());
            "newman"
        }
        Artifact::Triple { witnesses } => {
            for t in witnesses {
                if triple_bound(&t.s)? != (t.n, t.bound) || t.p <= t.bound || !is_prime_u64(t.p) {
                    return mismatch(format!("triple at p = {} has a bad bound or p", t.p));
                }
                let (before, after, _) = compare_triple(&t.s, t.p, ladder)?;
                if (before, after) != (Comparison::Greater, Comparison::Less)
                    || (before, after) != (t.before, t.after)
                {
                    return mismatch(format!("triple at p = {} not reproduced", t.p));
                }
                checks.push(format!("p = {} reproduced", t.p));
            }
            "triple"
        }
        Artifact::Crt { witness } => {
            check_crt(witness)?;
            let ell = BigUint::from(witness.ell);
            let threshold = (&ell + &ell * witness.k * BigUint::from(witness.q).pow(witness.k as u32 + 1))
                .max(BigUint::from(witness.d));
            if threshold != witness.threshold || triple_k(&witness.s) != Some(witness.k) {
                return mismatch("threshold or k inconsistent with s, ℓ, q");
            }
            if recheck_comparisons(witness, ladder)? != (Comparison::Less, Comparison::Greater) {
                return mismatch("comparisons not reproduced");
            }
            checks.push("congruences and both comparisons reproduced".into());
            "crt"
        }
        Artifact::Martin { record } => {
            if martin_number() != *record {
                return mismatch("record differs from a fresh construction");
            }
            checks.push("construction reproduced".into());
            "martin"
        }
    };
    Ok(VerifyReport {
        kind: kind.into(),
        checks,
        verdict,
    })
}

fn triple_k(s: &Exponent) -> Option<u64> {
    use num_traits::ToPrimitive;
    s.ceil().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::newman::construct_newman_witness;

    #[test]
    fn newman_round_trip_and_tamper() {
        let w = construct_newman_witness(30, 0, 30, 1, 17, 1_000_000).unwrap();
        let c = certify_ratio(&w, &"1/2".parse().unwrap(), 128).unwrap();
        let omega = certify_omega(&w).unwrap();
        let doc = Document::new(Artifact::Newman {
            witness: w,
            certificate: Some(c),
            omega,
        });
        let text = doc.to_json().unwrap();
        let back = Document::from_json(&text).unwrap();
        assert_eq!(back, doc);
        let r = verify_document(&back, &[128, 256]).unwrap();
        assert_eq!(r.verdict, Some(Verdict::CertifiedLess));

        let mut bad = back.clone();
        if let Artifact::Newman { certificate: Some(c), .. } = &mut bad.artifact {
            c.lower_right *= BigRational::from_integer(BigInt::from(2));
        }
        assert!(matches!(verify_document(&bad, &[128]), Err(Error::Verification(_))));
        let mut bad = back;
        bad.schema = "sigma-race/0".into();
        assert!(verify_document(&bad, &[128]).is_err());
    }
}
