//! Non-interactive (Fiat-Shamir) proofs exchanged between the parties.

use thiserror::Error;

use crate::policy::Unsatisfied;

pub mod challenge;
pub mod registration;
pub mod seller_auth;
pub mod ticket_request;
pub mod validation;

pub use challenge::Challenge;
pub use registration::{prove_s1, prove_u1, verify_s1, verify_u1, ProofS1, ProofU1};
pub use seller_auth::{prove_s2, verify_s2, ProofS2};
pub use ticket_request::{prove_u2, verify_u2, DigitProof, ProofU2, RangeProof, SetProof};
pub use validation::{prove_u3, verify_u3, ProofU3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZkpError {
    #[error("prover precondition failed: {0}")]
    ProverPreconditionFailed(#[from] Unsatisfied),
}
