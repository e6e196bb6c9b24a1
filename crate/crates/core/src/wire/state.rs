//! Saved actor state, so that each protocol step can run as a separate
//! process.

use std::collections::BTreeMap;
use std::sync::Arc;

use eticket_groups::{PairingGroup, Scalar};
use rand_chacha::ChaCha20Rng;

use super::codec::{read_map, write_map};
use super::{Message, MessageKind, ParseError, Reader, Wire, Writer};
use crate::params::{Credential, MasterSecret, Params};
use crate::policy::UserAttributes;
use crate::scheme::{Ca, Seller, SellerRecord, User, UserRecord, UserTable};
use crate::ticket::Ticket;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaState<B: PairingGroup> {
    pub master: MasterSecret,
    pub sellers: BTreeMap<String, SellerRecord<B>>,
    pub users: BTreeMap<String, UserRecord<B>>,
}

impl<B: PairingGroup> CaState<B> {
    pub fn capture(ca: &Ca<B>) -> Self {
        Self {
            master: ca.master_secret().clone(),
            sellers: ca.sellers().clone(),
            users: ca.users().clone(),
        }
    }

    pub fn restore(self, params: Arc<Params<B>>, rng: ChaCha20Rng) -> Ca<B> {
        Ca::restore(params, self.master, self.sellers, self.users, rng)
    }
}

impl<B: PairingGroup> Wire<B> for CaState<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.item(&self.master);
        write_map(w, &self.sellers, |w, s| {
            w.g(&s.key);
            w.str(&s.vp);
        });
        write_map(w, &self.users, |w, u| {
            w.g(&u.key);
            w.item(&u.attrs);
            w.g(&u.sigma);
            w.str(&u.vp);
        });
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            master: r.item("master secret")?,
            sellers: read_map(r, "sellers", |r| {
                Ok(SellerRecord {
                    key: r.g("seller key")?,
                    vp: r.str("VP_S")?,
                })
            })?,
            users: read_map(r, "users", |r| {
                Ok(UserRecord {
                    key: r.g("user key")?,
                    attrs: r.item("attributes")?,
                    sigma: r.g("credential signature")?,
                    vp: r.str("VP_U")?,
                })
            })?,
        })
    }
}

impl<B: PairingGroup> Message<B> for CaState<B> {
    const KIND: MessageKind = MessageKind::CaState;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SellerState<B: PairingGroup> {
    pub id: String,
    pub secret: Scalar,
    pub credential: Option<Credential<B>>,
}

impl<B: PairingGroup> SellerState<B> {
    pub fn capture(seller: &Seller<B>) -> Self {
        Self {
            id: seller.id().to_string(),
            secret: seller.secret().clone(),
            credential: seller.credential().cloned(),
        }
    }

    pub fn restore(self, params: Arc<Params<B>>, rng: ChaCha20Rng) -> Seller<B> {
        Seller::restore(self.id, params, self.secret, self.credential, rng)
    }
}

impl<B: PairingGroup> Wire<B> for SellerState<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.str(&self.id);
        w.scalar(&self.secret);
        w.option(self.credential.as_ref());
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            id: r.str("seller id")?,
            secret: r.scalar("seller secret")?,
            credential: r.option("credential")?,
        })
    }
}

impl<B: PairingGroup> Message<B> for SellerState<B> {
    const KIND: MessageKind = MessageKind::SellerState;
}

/// A user's keys, credential, verifier table and tickets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UserState<B: PairingGroup> {
    pub id: String,
    pub secret: Scalar,
    pub randomness: Scalar,
    pub attrs: UserAttributes,
    pub credential: Option<Credential<B>>,
    pub table: UserTable,
    pub tickets: Vec<Ticket<B>>,
}

impl<B: PairingGroup> UserState<B> {
    pub fn capture(user: &User<B>, tickets: Vec<Ticket<B>>) -> Self {
        Self {
            id: user.id().to_string(),
            secret: user.secret().clone(),
            randomness: user.randomness().clone(),
            attrs: user.attributes().clone(),
            credential: user.credential().cloned(),
            table: user.table().clone(),
            tickets,
        }
    }

    /// The user and their saved tickets.
    pub fn restore(self, params: Arc<Params<B>>, rng: ChaCha20Rng) -> (User<B>, Vec<Ticket<B>>) {
        let user = User::restore(
            self.id,
            params,
            self.secret,
            self.randomness,
            self.attrs,
            self.credential,
            self.table,
            rng,
        );
        (user, self.tickets)
    }
}

impl<B: PairingGroup> Wire<B> for UserState<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.str(&self.id);
        w.scalar(&self.secret);
        w.scalar(&self.randomness);
        w.item(&self.attrs);
        w.option(self.credential.as_ref());
        w.item(&self.table);
        w.items(&self.tickets);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            id: r.str("user id")?,
            secret: r.scalar("user secret")?,
            randomness: r.scalar("credential randomness")?,
            attrs: r.item("attributes")?,
            credential: r.option("credential")?,
            table: r.item("user table")?,
            tickets: r.items("tickets")?,
        })
    }
}

impl<B: PairingGroup> Message<B> for UserState<B> {
    const KIND: MessageKind = MessageKind::UserState;
}
