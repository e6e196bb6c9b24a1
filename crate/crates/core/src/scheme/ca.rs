use std::collections::BTreeMap;
use std::sync::Arc;

use eticket_groups::PairingGroup;
use rand_chacha::ChaCha20Rng;

use super::{sign_with_fresh_exponent, SchemeError};
use crate::messages::{CredentialIssue, SellerRegistration, UserRegistration};
use crate::params::{setup, MasterSecret, Params};
use crate::policy::{PolicyUniverse, UserAttributes};
use crate::zkp::{verify_s1, verify_u1};

/// Out-of-band vetting of identities and attributes before the authority
/// certifies them.
pub trait IdentityCheck: Send + Sync {
    fn seller(&self, _seller_id: &str) -> bool {
        true
    }

    fn user(&self, _user_id: &str, _attrs: &UserAttributes) -> bool {
        true
    }
}

/// Vetting that accepts everyone.
#[derive(Clone, Copy, Debug, Default)]
pub struct AcceptAll;

impl IdentityCheck for AcceptAll {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SellerRecord<B: PairingGroup> {
    pub key: B::G,
    pub vp: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UserRecord<B: PairingGroup> {
    pub key: B::G,
    pub attrs: UserAttributes,
    pub sigma: B::G,
    pub vp: String,
}

/// The central authority: holds the master secret, certifies sellers and
/// users, and keeps their registration records.
pub struct Ca<B: PairingGroup> {
    params: Arc<Params<B>>,
    msk: MasterSecret,
    sellers: BTreeMap<String, SellerRecord<B>>,
    users: BTreeMap<String, UserRecord<B>>,
    vetting: Box<dyn IdentityCheck>,
    rng: ChaCha20Rng,
}

impl<B: PairingGroup> Ca<B> {
    pub fn setup(universe: PolicyUniverse, grp: B, mut rng: ChaCha20Rng) -> Result<Self, SchemeError> {
        let (msk, params) = setup(universe, grp, &mut rng)?;
        Ok(Self::restore(
            Arc::new(params),
            msk,
            BTreeMap::new(),
            BTreeMap::new(),
            rng,
        ))
    }

    /// Rebuilds an authority from saved state.
    pub fn restore(
        params: Arc<Params<B>>,
        msk: MasterSecret,
        sellers: BTreeMap<String, SellerRecord<B>>,
        users: BTreeMap<String, UserRecord<B>>,
        rng: ChaCha20Rng,
    ) -> Self {
        Self {
            params,
            msk,
            sellers,
            users,
            vetting: Box::new(AcceptAll),
            rng,
        }
    }

    pub fn with_vetting(mut self, vetting: impl IdentityCheck + 'static) -> Self {
        self.vetting = Box::new(vetting);
        self
    }

    pub fn params(&self) -> &Arc<Params<B>> {
        &self.params
    }

    pub fn master_secret(&self) -> &MasterSecret {
        &self.msk
    }

    pub fn sellers(&self) -> &BTreeMap<String, SellerRecord<B>> {
        &self.sellers
    }

    pub fn users(&self) -> &BTreeMap<String, UserRecord<B>> {
        &self.users
    }

    /// Published key of a registered seller.
    pub fn seller_key(&self, seller_id: &str) -> Option<&B::G> {
        self.sellers.get(seller_id).map(|r| &r.key)
    }

    /// The user registered under `key`, if any.
    pub fn identify(&self, key: &B::G) -> Option<&str> {
        self.users
            .iter()
            .find(|(_, r)| r.key == *key)
            .map(|(id, _)| id.as_str())
    }

    /// Verifies the key-possession proof and signs
    /// `g0 g1^H(VP_S) Y_S cred_rand^r_s`. Re-registration replaces the record.
    pub fn register_seller(&mut self, req: &SellerRegistration<B>) -> Result<CredentialIssue<B>, SchemeError> {
        if !verify_s1(&self.params, &req.proof) {
            return Err(SchemeError::BadProof("seller key"));
        }
        if !self.vetting.seller(&req.seller_id) {
            return Err(SchemeError::Refused(req.seller_id.clone()));
        }
        let p = &self.params;
        let grp = &p.grp;
        let key = &req.proof.seller_key;
        let randomness = grp.random_scalar(&mut self.rng);
        let msg = p.credential_message(&req.vp, key, &randomness, &UserAttributes::default());
        let (exponent, sigma) = sign_with_fresh_exponent(grp, &msg, &self.msk.x, &mut self.rng)?;
        let record = SellerRecord {
            key: key.clone(),
            vp: req.vp.clone(),
        };
        if self.sellers.insert(req.seller_id.clone(), record).is_some() {
            log::info!("seller `{}` re-registered", req.seller_id);
        }
        Ok(CredentialIssue {
            exponent,
            randomness,
            sigma,
            vp: req.vp.clone(),
        })
    }

    /// Verifies the key-possession proof and signs
    /// `g0 g1^H(VP_U) Y_U R cred_rand^r' prod range_attr^a prod set^H(item)`.
    pub fn register_user(&mut self, req: &UserRegistration<B>) -> Result<CredentialIssue<B>, SchemeError> {
        if !verify_u1(&self.params, &req.proof) {
            return Err(SchemeError::BadProof("user key"));
        }
        self.params.universe.check_attributes(&req.attrs)?;
        if !self.vetting.user(&req.user_id, &req.attrs) {
            return Err(SchemeError::Refused(req.user_id.clone()));
        }
        let p = &self.params;
        let grp = &p.grp;
        let committed = grp.op(&req.proof.user_key, &req.proof.rand_commit);
        let randomness = grp.random_scalar(&mut self.rng);
        let msg = p.credential_message(&req.vp, &committed, &randomness, &req.attrs);
        let (exponent, sigma) = sign_with_fresh_exponent(grp, &msg, &self.msk.x, &mut self.rng)?;
        let record = UserRecord {
            key: req.proof.user_key.clone(),
            attrs: req.attrs.clone(),
            sigma: sigma.clone(),
            vp: req.vp.clone(),
        };
        if self.users.insert(req.user_id.clone(), record).is_some() {
            log::info!("user `{}` re-registered", req.user_id);
        }
        Ok(CredentialIssue {
            exponent,
            randomness,
            sigma,
            vp: req.vp.clone(),
        })
    }
}
