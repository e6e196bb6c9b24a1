//! The four parties and the protocol algorithms connecting them.

use chrono::{DateTime, NaiveDate, NaiveTime, Utc};
use eticket_groups::{PairingGroup, Scalar};
use rand::RngCore;
use thiserror::Error;

use crate::params::SetupError;
use crate::policy::PolicyError;
use crate::sigs::MAX_RESAMPLES;
use crate::wire::WireError;
use crate::zkp::ZkpError;

mod bytes;
mod ca;
mod seller;
mod tables;
mod user;
mod verifier;

pub use ca::{AcceptAll, Ca, IdentityCheck, SellerRecord, UserRecord};
pub use seller::{Seller, TicketTerms};
pub use tables::{deanonymize, detect_double_spend, DoubleSpend, SpendKind, UserTable, VerifierEntry, VerifierTable};
pub use user::{PendingTicket, User};
pub use verifier::Verifier;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error(transparent)]
    Setup(#[from] SetupError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Zkp(#[from] ZkpError),
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error("registration proof rejected: {0}")]
    BadProof(&'static str),
    #[error("identity vetting refused `{0}`")]
    Refused(String),
    #[error("credential does not verify")]
    BadCredential,
    #[error("{0} has no credential yet")]
    NotRegistered(String),
    #[error("seller authentication proof rejected")]
    SellerProofFailed,
    #[error("ticket request proof rejected")]
    UserProofFailed,
    #[error("issued ticket does not verify")]
    TicketCheckFailed,
    #[error("ticket validity `{ticket}` ends after credential validity `{credential}`")]
    VpWindowViolation { ticket: String, credential: String },
    #[error("issued ticket terms do not match the request")]
    TermsMismatch,
    #[error("ticket already shown to verifier `{0}`")]
    RepeatVerifier(String),
    #[error("no unused validation nonce left")]
    NoncesExhausted,
    #[error("nonce was not issued by this verifier or was already used")]
    UnknownNonce,
    #[error("policy hash does not match the ticket terms")]
    PolicyHashMismatch,
    #[error("ticket validity `{0}` has expired")]
    ExpiredTicket(String),
    #[error("ticket proof rejected")]
    ProofFailed,
    #[error("no usable signature exponent after {0} attempts")]
    ResampleExhausted(usize),
    #[error("double-spend entries share a nonce")]
    DegenerateNonces,
    #[error("double-spend entries come from different verifiers")]
    DifferentVerifiers,
    #[error("double-spend entries have different serial commitments")]
    SerialMismatch,
}

/// Parses a validity period: an RFC 3339 date-time, or a bare `YYYY-MM-DD`
/// date meaning the end of that day in UTC. Anything else is free text.
pub fn parse_validity(vp: &str) -> Option<DateTime<Utc>> {
    if let Ok(t) = DateTime::parse_from_rfc3339(vp) {
        return Some(t.with_timezone(&Utc));
    }
    let day = NaiveDate::parse_from_str(vp, "%Y-%m-%d").ok()?;
    let end = NaiveTime::from_hms_opt(23, 59, 59)?;
    Some(day.and_time(end).and_utc())
}

/// `VP_T` must not end after `VP_U`; only enforced when both parse.
pub fn check_window(ticket_vp: &str, credential_vp: &str) -> Result<(), SchemeError> {
    match (parse_validity(ticket_vp), parse_validity(credential_vp)) {
        (Some(t), Some(u)) if t > u => Err(SchemeError::VpWindowViolation {
            ticket: ticket_vp.to_string(),
            credential: credential_vp.to_string(),
        }),
        _ => Ok(()),
    }
}

/// `msg^(1/(sk + e))` with fresh `e`, redrawn on the pole.
fn sign_with_fresh_exponent<B: PairingGroup, R: RngCore + ?Sized>(
    grp: &B,
    msg: &B::G,
    sk: &Scalar,
    rng: &mut R,
) -> Result<(Scalar, B::G), SchemeError> {
    let f = grp.scalars();
    for _ in 0..MAX_RESAMPLES {
        let e = grp.random_scalar(rng);
        if let Some(inv) = f.inv(&f.add(sk, &e)) {
            return Ok((e, grp.exp(msg, &inv)));
        }
    }
    Err(SchemeError::ResampleExhausted(MAX_RESAMPLES))
}
