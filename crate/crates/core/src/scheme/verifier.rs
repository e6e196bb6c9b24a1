use std::collections::BTreeSet;
use std::sync::Arc;

use chrono::{DateTime, Utc};
use eticket_groups::{PairingGroup, Scalar};
use rand_chacha::ChaCha20Rng;

use super::{parse_validity, SchemeError, VerifierEntry, VerifierTable};
use crate::messages::{TicketTranscript, ValidationChallenge, ValidationDecision};
use crate::params::Params;
use crate::zkp::verify_u3;

/// Draws attempted before giving up on finding an unused nonce.
const NONCE_DRAWS: usize = 1024;

pub struct Verifier<B: PairingGroup> {
    id: String,
    params: Arc<Params<B>>,
    seller_key: B::G,
    table: VerifierTable<B>,
    seen: BTreeSet<Scalar>,
    outstanding: BTreeSet<Scalar>,
    rng: ChaCha20Rng,
}

impl<B: PairingGroup> Verifier<B> {
    pub fn new(id: impl Into<String>, params: Arc<Params<B>>, seller_key: B::G, rng: ChaCha20Rng) -> Self {
        let table = VerifierTable::new(params.grp.clone());
        Self::restore(id, params, seller_key, table, rng)
    }

    /// Resumes with a saved table; its nonces count as used.
    pub fn restore(
        id: impl Into<String>,
        params: Arc<Params<B>>,
        seller_key: B::G,
        table: VerifierTable<B>,
        rng: ChaCha20Rng,
    ) -> Self {
        let id = id.into();
        let seen = table
            .entries()
            .iter()
            .filter(|e| e.verifier_id == id)
            .map(|e| e.nonce.clone())
            .collect();
        Self {
            id,
            params,
            seller_key,
            table,
            seen,
            outstanding: BTreeSet::new(),
            rng,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn params(&self) -> &Arc<Params<B>> {
        &self.params
    }

    pub fn table(&self) -> &VerifierTable<B> {
        &self.table
    }

    pub fn into_table(self) -> VerifierTable<B> {
        self.table
    }

    /// A fresh nonce, never handed out before by this verifier.
    pub fn challenge(&mut self) -> Result<ValidationChallenge, SchemeError> {
        for _ in 0..NONCE_DRAWS {
            let nonce = self.params.grp.random_scalar(&mut self.rng);
            if self.seen.insert(nonce.clone()) {
                self.outstanding.insert(nonce.clone());
                return Ok(ValidationChallenge {
                    verifier_id: self.id.clone(),
                    nonce,
                });
            }
        }
        Err(SchemeError::NoncesExhausted)
    }

    /// Checks a transcript against an outstanding nonce and records it. The
    /// nonce is consumed whether or not the transcript verifies.
    pub fn validate(
        &mut self,
        transcript: &TicketTranscript<B>,
        now: DateTime<Utc>,
    ) -> Result<&VerifierEntry<B>, SchemeError> {
        if !self.outstanding.remove(&transcript.nonce) {
            return Err(SchemeError::UnknownNonce);
        }
        let p = &self.params;
        let expected = p.ticket_policy_hash(
            &transcript.requested,
            &transcript.price,
            &transcript.serv,
            &transcript.vp,
        );
        if expected != transcript.policy_hash {
            return Err(SchemeError::PolicyHashMismatch);
        }
        if parse_validity(&transcript.vp).is_some_and(|end| end < now) {
            return Err(SchemeError::ExpiredTicket(transcript.vp.clone()));
        }
        let proof = &transcript.proof;
        if !verify_u3(p, proof, &expected, &self.seller_key, &transcript.nonce, &self.id) {
            return Err(SchemeError::ProofFailed);
        }
        self.table.push(VerifierEntry {
            verifier_id: self.id.clone(),
            nonce: transcript.nonce.clone(),
            serial_commit: proof.serial_commit.clone(),
            spend_tag: proof.spend_tag.clone(),
            blinded_ticket: proof.blinded_ticket.clone(),
            blinding_commit: proof.blinding_commit.clone(),
            policy_hash: expected,
        });
        Ok(self.table.entries().last().expect("just pushed"))
    }

    /// [`Verifier::validate`] reduced to the decision sent back to the user.
    pub fn decide(&mut self, transcript: &TicketTranscript<B>, now: DateTime<Utc>) -> ValidationDecision {
        match self.validate(transcript, now) {
            Ok(_) => ValidationDecision {
                accepted: true,
                reason: String::new(),
            },
            Err(e) => ValidationDecision {
                accepted: false,
                reason: e.to_string(),
            },
        }
    }
}
