//! Protocol messages exchanged between the parties.

use eticket_groups::{PairingGroup, Scalar};

use crate::policy::{SatisfiedPolicies, UserAttributes};
use crate::zkp::{ProofS1, ProofS2, ProofU1, ProofU2, ProofU3};

/// Seller to authority: key-possession proof (carrying `Y_S`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SellerRegistration<B: PairingGroup> {
    pub seller_id: String,
    pub vp: String,
    pub proof: ProofS1<B>,
}

/// Authority to seller or user: a credential on the registered key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CredentialIssue<B: PairingGroup> {
    pub exponent: Scalar,
    /// The authority's share of the credential randomness.
    pub randomness: Scalar,
    pub sigma: B::G,
    pub vp: String,
}

/// User to authority: key-possession proof (carrying `Y_U` and `R`) and the
/// attributes to certify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UserRegistration<B: PairingGroup> {
    pub user_id: String,
    pub vp: String,
    pub attrs: UserAttributes,
    pub proof: ProofU1<B>,
}

/// Seller to user, first issuing message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SellerAuth<B: PairingGroup> {
    pub proof: ProofS2<B>,
}

/// User to seller: the ticket request proof (carrying `Y`, `VP_U`, `P_U`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TicketRequest<B: PairingGroup> {
    pub proof: ProofU2<B>,
}

/// Seller to user: the signed ticket and its terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TicketIssue<B: PairingGroup> {
    pub seller_id: String,
    pub seller_key: B::G,
    pub sigma: B::G,
    /// `d'`, added to the user's `d`.
    pub tweak: Scalar,
    pub serial: Scalar,
    pub key_offset: Scalar,
    pub policy_hash: Scalar,
    pub price: String,
    pub serv: String,
    pub vp: String,
}

/// Verifier to user: identity and a fresh nonce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationChallenge {
    pub verifier_id: String,
    pub nonce: Scalar,
}

/// User to verifier: what is shown at validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TicketTranscript<B: PairingGroup> {
    pub nonce: Scalar,
    pub policy_hash: Scalar,
    pub requested: SatisfiedPolicies,
    pub price: String,
    pub serv: String,
    pub vp: String,
    pub proof: ProofU3<B>,
}

/// Verifier to user.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationDecision {
    pub accepted: bool,
    pub reason: String,
}
