use std::sync::Arc;

use eticket_groups::{PairingGroup, Scalar};
use rand_chacha::ChaCha20Rng;

use super::{check_window, sign_with_fresh_exponent, SchemeError};
use crate::messages::{CredentialIssue, SellerAuth, SellerRegistration, TicketIssue, TicketRequest};
use crate::params::{Credential, Params};
use crate::policy::UserAttributes;
use crate::zkp::{prove_s1, prove_s2, verify_u2};

/// Price, service and validity period the seller attaches to a ticket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TicketTerms {
    pub price: String,
    pub serv: String,
    pub vp: String,
}

pub struct Seller<B: PairingGroup> {
    id: String,
    params: Arc<Params<B>>,
    secret: Scalar,
    key: B::G,
    credential: Option<Credential<B>>,
    requested_vp: Option<String>,
    rng: ChaCha20Rng,
}

impl<B: PairingGroup> Seller<B> {
    /// A seller with a fresh key pair.
    pub fn new(id: impl Into<String>, params: Arc<Params<B>>, mut rng: ChaCha20Rng) -> Self {
        let secret = params.grp.random_scalar(&mut rng);
        Self::restore(id, params, secret, None, rng)
    }

    pub fn restore(
        id: impl Into<String>,
        params: Arc<Params<B>>,
        secret: Scalar,
        credential: Option<Credential<B>>,
        rng: ChaCha20Rng,
    ) -> Self {
        let key = params.grp.exp(&params.seller_key_base, &secret);
        Self {
            id: id.into(),
            params,
            secret,
            key,
            credential,
            requested_vp: None,
            rng,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn params(&self) -> &Arc<Params<B>> {
        &self.params
    }

    /// `Y_S`
    pub fn public_key(&self) -> &B::G {
        &self.key
    }

    pub fn secret(&self) -> &Scalar {
        &self.secret
    }

    pub fn credential(&self) -> Option<&Credential<B>> {
        self.credential.as_ref()
    }

    pub fn registration_request(&mut self, vp: &str) -> SellerRegistration<B> {
        self.requested_vp = Some(vp.to_string());
        SellerRegistration {
            seller_id: self.id.clone(),
            vp: vp.to_string(),
            proof: prove_s1(&self.params, &self.secret, &mut self.rng),
        }
    }

    /// Checks the credential against the requested validity period and
    /// stores it.
    pub fn finish_registration(&mut self, msg: &CredentialIssue<B>) -> Result<(), SchemeError> {
        let vp = self.requested_vp.as_deref().unwrap_or(&msg.vp);
        let ok = self.params.credential_holds(
            &msg.sigma,
            &msg.exponent,
            vp,
            &self.key,
            &msg.randomness,
            &UserAttributes::default(),
        );
        if !ok {
            return Err(SchemeError::BadCredential);
        }
        self.credential = Some(Credential {
            exponent: msg.exponent.clone(),
            randomness: msg.randomness.clone(),
            sigma: msg.sigma.clone(),
            vp: vp.to_string(),
        });
        self.requested_vp = None;
        Ok(())
    }

    /// First issuing message: an anonymous proof of holding a seller
    /// credential.
    pub fn authenticate(&mut self) -> Result<SellerAuth<B>, SchemeError> {
        let cred = self
            .credential
            .as_ref()
            .ok_or_else(|| SchemeError::NotRegistered(self.id.clone()))?;
        Ok(SellerAuth {
            proof: prove_s2(&self.params, cred, &self.secret, &mut self.rng),
        })
    }

    /// Verifies a ticket request and signs
    /// `T_U = (g0 Y g1^d' g2^s_u g3^psi_u)^(1/(x_s + omega_u))`.
    pub fn issue(&mut self, req: &TicketRequest<B>, terms: &TicketTerms) -> Result<TicketIssue<B>, SchemeError> {
        if !verify_u2(&self.params, &req.proof) {
            return Err(SchemeError::UserProofFailed);
        }
        self.sign_request(req, terms)
    }

    /// The signing half of [`Seller::issue`], for a request whose proof has
    /// already been checked.
    pub fn sign_request(&mut self, req: &TicketRequest<B>, terms: &TicketTerms) -> Result<TicketIssue<B>, SchemeError> {
        let p = &self.params;
        check_window(&terms.vp, &req.proof.vp)?;
        let grp = &p.grp;
        let tweak = grp.random_scalar(&mut self.rng);
        let serial = grp.random_scalar(&mut self.rng);
        let policy_hash = p.ticket_policy_hash(&req.proof.requested, &terms.price, &terms.serv, &terms.vp);
        let msg = grp.op(
            &grp.op(&p.g0, &req.proof.ticket_key),
            &grp.product(&[(&p.g1, &tweak), (&p.g2, &serial), (&p.g3, &policy_hash)]),
        );
        let (key_offset, sigma) = sign_with_fresh_exponent(grp, &msg, &self.secret, &mut self.rng)?;
        Ok(TicketIssue {
            seller_id: self.id.clone(),
            seller_key: self.key.clone(),
            sigma,
            tweak,
            serial,
            key_offset,
            policy_hash,
            price: terms.price.clone(),
            serv: terms.serv.clone(),
            vp: terms.vp.clone(),
        })
    }
}
