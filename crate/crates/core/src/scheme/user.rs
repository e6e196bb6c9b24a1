use std::sync::Arc;

use eticket_groups::{PairingGroup, Scalar};
use rand_chacha::ChaCha20Rng;

use super::{check_window, SchemeError, UserTable};
use crate::messages::{
    CredentialIssue, SellerAuth, TicketIssue, TicketRequest, TicketTranscript, UserRegistration, ValidationChallenge,
};
use crate::params::{Credential, Params};
use crate::policy::{SatisfiedPolicies, UserAttributes};
use crate::ticket::{ticket_holds, Ticket};
use crate::zkp::{prove_u1, prove_u2, prove_u3, verify_s2};

/// What the user keeps between sending a ticket request and receiving the
/// ticket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendingTicket {
    pub tweak: Scalar,
    pub requested: SatisfiedPolicies,
}

pub struct User<B: PairingGroup> {
    id: String,
    params: Arc<Params<B>>,
    secret: Scalar,
    key: B::G,
    /// Randomness committed at registration, then the full credential
    /// randomness once registered.
    randomness: Scalar,
    attrs: UserAttributes,
    credential: Option<Credential<B>>,
    requested_vp: Option<String>,
    table: UserTable,
    rng: ChaCha20Rng,
}

impl<B: PairingGroup> User<B> {
    pub fn new(id: impl Into<String>, params: Arc<Params<B>>, attrs: UserAttributes, mut rng: ChaCha20Rng) -> Self {
        let secret = params.grp.random_scalar(&mut rng);
        let randomness = params.grp.random_scalar(&mut rng);
        Self::restore(id, params, secret, randomness, attrs, None, UserTable::default(), rng)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn restore(
        id: impl Into<String>,
        params: Arc<Params<B>>,
        secret: Scalar,
        randomness: Scalar,
        attrs: UserAttributes,
        credential: Option<Credential<B>>,
        table: UserTable,
        rng: ChaCha20Rng,
    ) -> Self {
        let key = params.grp.exp(&params.user_key_base, &secret);
        Self {
            id: id.into(),
            params,
            secret,
            key,
            randomness,
            attrs,
            credential,
            requested_vp: None,
            table,
            rng,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn params(&self) -> &Arc<Params<B>> {
        &self.params
    }

    /// `Y_U`
    pub fn public_key(&self) -> &B::G {
        &self.key
    }

    pub fn secret(&self) -> &Scalar {
        &self.secret
    }

    pub fn randomness(&self) -> &Scalar {
        &self.randomness
    }

    pub fn attributes(&self) -> &UserAttributes {
        &self.attrs
    }

    pub fn credential(&self) -> Option<&Credential<B>> {
        self.credential.as_ref()
    }

    pub fn table(&self) -> &UserTable {
        &self.table
    }

    /// Forgets which verifiers have seen a ticket.
    pub fn clear_table(&mut self) {
        self.table = UserTable::default();
    }

    pub fn registration_request(&mut self, vp: &str) -> UserRegistration<B> {
        self.requested_vp = Some(vp.to_string());
        UserRegistration {
            user_id: self.id.clone(),
            vp: vp.to_string(),
            attrs: self.attrs.clone(),
            proof: prove_u1(&self.params, &self.secret, &self.randomness, &mut self.rng),
        }
    }

    /// Adds the authority's randomness share and checks the credential.
    pub fn finish_registration(&mut self, msg: &CredentialIssue<B>) -> Result<(), SchemeError> {
        let f = self.params.grp.scalars();
        let total = f.add(&self.randomness, &msg.randomness);
        let vp = self.requested_vp.as_deref().unwrap_or(&msg.vp);
        let ok = self
            .params
            .credential_holds(&msg.sigma, &msg.exponent, vp, &self.key, &total, &self.attrs);
        if !ok {
            return Err(SchemeError::BadCredential);
        }
        self.credential = Some(Credential {
            exponent: msg.exponent.clone(),
            randomness: total.clone(),
            sigma: msg.sigma.clone(),
            vp: vp.to_string(),
        });
        self.randomness = total;
        self.requested_vp = None;
        Ok(())
    }

    /// Checks the seller's proof, then proves the requested policies.
    pub fn request_ticket(
        &mut self,
        auth: &SellerAuth<B>,
        requested: &SatisfiedPolicies,
    ) -> Result<(TicketRequest<B>, PendingTicket), SchemeError> {
        if !verify_s2(&self.params, &auth.proof) {
            return Err(SchemeError::SellerProofFailed);
        }
        let cred = self
            .credential
            .as_ref()
            .ok_or_else(|| SchemeError::NotRegistered(self.id.clone()))?;
        let (proof, tweak) = prove_u2(&self.params, cred, &self.secret, &self.attrs, requested, &mut self.rng)?;
        let pending = PendingTicket {
            tweak,
            requested: requested.clone(),
        };
        Ok((TicketRequest { proof }, pending))
    }

    /// Completes the ticket with `d_u = d + d'` and checks the seller's
    /// signature.
    pub fn finish_ticket(&self, pending: PendingTicket, issue: &TicketIssue<B>) -> Result<Ticket<B>, SchemeError> {
        let p = &self.params;
        let grp = &p.grp;
        let cred = self
            .credential
            .as_ref()
            .ok_or_else(|| SchemeError::NotRegistered(self.id.clone()))?;
        check_window(&issue.vp, &cred.vp)?;
        let expected = p.ticket_policy_hash(&pending.requested, &issue.price, &issue.serv, &issue.vp);
        if expected != issue.policy_hash {
            return Err(SchemeError::TermsMismatch);
        }
        let tweak = grp.scalars().add(&pending.tweak, &issue.tweak);
        let ticket = Ticket {
            pseudonym: grp.product(&[(&p.user_key_base, &self.secret), (&p.g1, &tweak)]),
            tweak,
            serial: issue.serial.clone(),
            policy_hash: issue.policy_hash.clone(),
            key_offset: issue.key_offset.clone(),
            sigma: issue.sigma.clone(),
            requested: pending.requested,
            price: issue.price.clone(),
            serv: issue.serv.clone(),
            vp: issue.vp.clone(),
            seller_key: issue.seller_key.clone(),
        };
        if !ticket_holds(p, &ticket, &self.key, &issue.seller_key) {
            return Err(SchemeError::TicketCheckFailed);
        }
        Ok(ticket)
    }

    /// Builds the validation transcript, refusing verifiers that have
    /// already seen a ticket from this user.
    pub fn show_ticket(
        &mut self,
        ticket: &Ticket<B>,
        challenge: &ValidationChallenge,
    ) -> Result<TicketTranscript<B>, SchemeError> {
        let id_hash = self.params.hash_text(&challenge.verifier_id);
        if self.table.contains(&id_hash) {
            return Err(SchemeError::RepeatVerifier(challenge.verifier_id.clone()));
        }
        let proof = prove_u3(
            &self.params,
            ticket,
            &self.secret,
            &challenge.verifier_id,
            &challenge.nonce,
            &mut self.rng,
        );
        self.table.record(id_hash, challenge.nonce.clone());
        Ok(TicketTranscript {
            nonce: challenge.nonce.clone(),
            policy_hash: ticket.policy_hash.clone(),
            requested: ticket.requested.clone(),
            price: ticket.price.clone(),
            serv: ticket.serv.clone(),
            vp: ticket.vp.clone(),
            proof,
        })
    }
}
