//! Explicit witnesses for race sign changes, with checkable certificates.

pub mod certificate;
pub mod crt;
pub mod martin;
pub mod newman;
pub mod triple;
pub mod verify;

pub use certificate::{certify_omega, certify_ratio, Certificate, OmegaCertificate, Verdict};
pub use crt::{crt_witness, CrtWitness};
pub use martin::{martin_number, MartinRecord};
pub use newman::{
    build_modulus, check_witness, construct_newman_witness, find_prime_in_ap,
    solve_linear_congruence, NewmanWitness,
};
pub use triple::{prime_triple_witness, PrimeTripleWitness};
pub use verify::{verify_document, Artifact, Document, VerifyReport, SCHEMA};
