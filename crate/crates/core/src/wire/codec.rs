use std::collections::BTreeMap;

use eticket_groups::{PairingGroup, Scalar};

use super::{Message, MessageKind, ParseError, ParseErrorKind, Reader, Wire, Writer};
use crate::messages::{
    CredentialIssue, SellerAuth, SellerRegistration, TicketIssue, TicketRequest, TicketTranscript, UserRegistration,
    ValidationChallenge, ValidationDecision,
};
use crate::params::{Credential, MasterSecret};
use crate::policy::{SatisfiedPolicies, UserAttributes};
use crate::scheme::{UserTable, VerifierEntry};
use crate::ticket::Ticket;
use crate::zkp::{DigitProof, ProofS1, ProofS2, ProofU1, ProofU2, ProofU3, RangeProof, SetProof};

fn scalars<B: PairingGroup>(w: &mut Writer<'_, B>, v: &[Scalar]) {
    w.list(v, |w, s| w.scalar(s));
}

fn read_scalars<B: PairingGroup>(r: &mut Reader<'_, B>, field: &'static str) -> Result<Vec<Scalar>, ParseError> {
    r.list(field, |r| r.scalar(field))
}

impl<B: PairingGroup> Wire<B> for SatisfiedPolicies {
    fn write(&self, w: &mut Writer<'_, B>) {
        let names: Vec<_> = self.names().collect();
        w.list(&names, |w, n| w.str(n));
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        let names = r.list("policy name", |r| r.str("policy name"))?;
        Ok(SatisfiedPolicies::new(names))
    }
}

impl<B: PairingGroup> Wire<B> for UserAttributes {
    fn write(&self, w: &mut Writer<'_, B>) {
        let values: Vec<_> = self.range_values.iter().collect();
        w.list(&values, |w, (name, v)| {
            w.str(name);
            w.i64(**v);
        });
        let items: Vec<_> = self.set_items.iter().collect();
        w.list(&items, |w, (name, item)| {
            w.str(name);
            w.str(item);
        });
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        let values = r.list("range values", |r| Ok((r.str("range name")?, r.i64("range value")?)))?;
        let items = r.list("set items", |r| Ok((r.str("set name")?, r.str("set item")?)))?;
        Ok(UserAttributes {
            range_values: values.into_iter().collect(),
            set_items: items.into_iter().collect(),
        })
    }
}

impl<B: PairingGroup> Wire<B> for ProofS1<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.scalar(&self.c);
        w.scalar(&self.s);
        w.g(&self.m);
        w.g(&self.seller_key);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            c: r.scalar("c")?,
            s: r.scalar("s")?,
            m: r.g("M")?,
            seller_key: r.g("seller key")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for ProofU1<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.g(&self.m);
        w.g(&self.user_key);
        w.g(&self.rand_commit);
        for s in [&self.c1, &self.c2, &self.s1, &self.s2] {
            w.scalar(s);
        }
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            m: r.g("M")?,
            user_key: r.g("user key")?,
            rand_commit: r.g("randomness commitment")?,
            c1: r.scalar("c1")?,
            c2: r.scalar("c2")?,
            s1: r.scalar("s1")?,
            s2: r.scalar("s2")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for ProofS2<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.g(&self.m);
        w.g(&self.blinded_cred);
        w.g(&self.commitment);
        w.g(&self.scaled_commitment);
        w.gt(&self.cred_pairing);
        w.scalar(&self.commit_challenge);
        self.commit_responses.iter().for_each(|s| w.scalar(s));
        w.scalar(&self.scaled_challenge);
        self.scaled_responses.iter().for_each(|s| w.scalar(s));
        w.scalar(&self.cred_challenge);
        self.cred_responses.iter().for_each(|s| w.scalar(s));
        w.str(&self.vp);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            m: r.g("M")?,
            blinded_cred: r.g("blinded credential")?,
            commitment: r.g("commitment")?,
            scaled_commitment: r.g("scaled commitment")?,
            cred_pairing: r.gt("credential pairing")?,
            commit_challenge: r.scalar("commitment challenge")?,
            commit_responses: [r.scalar("commitment response")?, r.scalar("commitment response")?],
            scaled_challenge: r.scalar("scaled challenge")?,
            scaled_responses: [r.scalar("scaled response")?, r.scalar("scaled response")?],
            cred_challenge: r.scalar("credential challenge")?,
            cred_responses: [
                r.scalar("credential response")?,
                r.scalar("credential response")?,
                r.scalar("credential response")?,
                r.scalar("credential response")?,
                r.scalar("credential response")?,
            ],
            vp: r.str("VP_S")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for DigitProof<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.g(&self.tag);
        w.g(&self.shifted_tag);
        w.gt(&self.pairing);
        w.gt(&self.pairing_commit);
        w.gt(&self.shifted_pairing);
        w.gt(&self.shifted_pairing_commit);
        for s in [
            &self.challenge,
            &self.low_response,
            &self.high_response,
            &self.tag_digit_response,
            &self.shifted_digit_response,
            &self.tag_response,
            &self.shifted_tag_response,
        ] {
            w.scalar(s);
        }
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            tag: r.g("digit tag")?,
            shifted_tag: r.g("shifted digit tag")?,
            pairing: r.gt("digit pairing")?,
            pairing_commit: r.gt("digit pairing commitment")?,
            shifted_pairing: r.gt("shifted digit pairing")?,
            shifted_pairing_commit: r.gt("shifted digit pairing commitment")?,
            challenge: r.scalar("digit challenge")?,
            low_response: r.scalar("low digit response")?,
            high_response: r.scalar("high digit response")?,
            tag_digit_response: r.scalar("tag digit response")?,
            shifted_digit_response: r.scalar("shifted digit response")?,
            tag_response: r.scalar("tag response")?,
            shifted_tag_response: r.scalar("shifted tag response")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for RangeProof<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.g(&self.commitment);
        w.scalar(&self.blinding_response);
        w.scalar(&self.challenge);
        w.scalar(&self.shift_blinding_response);
        w.scalar(&self.low_response);
        w.scalar(&self.high_response);
        w.items(&self.digits);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            commitment: r.g("range commitment")?,
            blinding_response: r.scalar("range blinding response")?,
            challenge: r.scalar("range challenge")?,
            shift_blinding_response: r.scalar("shift blinding response")?,
            low_response: r.scalar("low shift response")?,
            high_response: r.scalar("high shift response")?,
            digits: r.items("digits")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for SetProof<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.g(&self.tag);
        w.gt(&self.pairing);
        w.scalar(&self.response);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            tag: r.g("item tag")?,
            pairing: r.gt("item pairing")?,
            response: r.scalar("item tag response")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for ProofU2<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.g(&self.m);
        w.g(&self.blinded_cred);
        w.g(&self.commitment);
        w.g(&self.scaled_commitment);
        w.g(&self.ticket_key);
        w.gt(&self.cred_pairing);
        for s in [
            &self.challenge,
            &self.key_response,
            &self.tweak_response,
            &self.rand_response,
            &self.exponent_response,
        ] {
            w.scalar(s);
        }
        self.commit_responses.iter().for_each(|s| w.scalar(s));
        self.scaled_responses.iter().for_each(|s| w.scalar(s));
        scalars(w, &self.attr_responses);
        scalars(w, &self.item_responses);
        w.items(&self.ranges);
        w.items(&self.sets);
        w.str(&self.vp);
        w.item(&self.requested);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            m: r.g("M")?,
            blinded_cred: r.g("blinded credential")?,
            commitment: r.g("commitment")?,
            scaled_commitment: r.g("scaled commitment")?,
            ticket_key: r.g("ticket key")?,
            cred_pairing: r.gt("credential pairing")?,
            challenge: r.scalar("challenge")?,
            key_response: r.scalar("key response")?,
            tweak_response: r.scalar("tweak response")?,
            rand_response: r.scalar("randomness response")?,
            exponent_response: r.scalar("exponent response")?,
            commit_responses: [r.scalar("commitment response")?, r.scalar("commitment response")?],
            scaled_responses: [r.scalar("scaled response")?, r.scalar("scaled response")?],
            attr_responses: read_scalars(r, "attribute responses")?,
            item_responses: read_scalars(r, "item responses")?,
            ranges: r.items("ranges")?,
            sets: r.items("sets")?,
            vp: r.str("VP_U")?,
            requested: r.item("requested policies")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for ProofU3<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.g(&self.m);
        w.g(&self.serial_commit);
        w.g(&self.pseudonym);
        w.g(&self.spend_tag);
        w.g(&self.blinded_ticket);
        w.g(&self.blinding_commit);
        w.g(&self.scaled_blinding_commit);
        w.gt(&self.ticket_pairing);
        for s in [
            &self.challenge,
            &self.serial_response,
            &self.key_response,
            &self.tag_response,
            &self.blind_response,
            &self.lambda_response,
            &self.offset_response,
            &self.scaled_blind_response,
            &self.tweak_response,
        ] {
            w.scalar(s);
        }
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            m: r.g("M")?,
            serial_commit: r.g("serial commitment")?,
            pseudonym: r.g("pseudonym")?,
            spend_tag: r.g("double-spend tag")?,
            blinded_ticket: r.g("blinded ticket")?,
            blinding_commit: r.g("blinding commitment")?,
            scaled_blinding_commit: r.g("scaled blinding commitment")?,
            ticket_pairing: r.gt("ticket pairing")?,
            challenge: r.scalar("challenge")?,
            serial_response: r.scalar("serial response")?,
            key_response: r.scalar("key response")?,
            tag_response: r.scalar("tag response")?,
            blind_response: r.scalar("blinding response")?,
            lambda_response: r.scalar("lambda response")?,
            offset_response: r.scalar("offset response")?,
            scaled_blind_response: r.scalar("scaled blinding response")?,
            tweak_response: r.scalar("tweak response")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for SellerRegistration<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.str(&self.seller_id);
        w.str(&self.vp);
        w.item(&self.proof);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            seller_id: r.str("seller id")?,
            vp: r.str("VP")?,
            proof: r.item("proof")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for CredentialIssue<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.scalar(&self.exponent);
        w.scalar(&self.randomness);
        w.g(&self.sigma);
        w.str(&self.vp);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            exponent: r.scalar("credential exponent")?,
            randomness: r.scalar("credential randomness")?,
            sigma: r.g("credential signature")?,
            vp: r.str("VP")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for Credential<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.scalar(&self.exponent);
        w.scalar(&self.randomness);
        w.g(&self.sigma);
        w.str(&self.vp);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            exponent: r.scalar("credential exponent")?,
            randomness: r.scalar("credential randomness")?,
            sigma: r.g("credential signature")?,
            vp: r.str("VP")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for UserRegistration<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.str(&self.user_id);
        w.str(&self.vp);
        w.item(&self.attrs);
        w.item(&self.proof);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            user_id: r.str("user id")?,
            vp: r.str("VP")?,
            attrs: r.item("attributes")?,
            proof: r.item("proof")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for SellerAuth<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.item(&self.proof);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            proof: r.item("proof")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for TicketRequest<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.item(&self.proof);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            proof: r.item("proof")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for TicketIssue<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.str(&self.seller_id);
        w.g(&self.seller_key);
        w.g(&self.sigma);
        w.scalar(&self.tweak);
        w.scalar(&self.serial);
        w.scalar(&self.key_offset);
        w.scalar(&self.policy_hash);
        w.str(&self.price);
        w.str(&self.serv);
        w.str(&self.vp);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            seller_id: r.str("seller id")?,
            seller_key: r.g("seller key")?,
            sigma: r.g("ticket signature")?,
            tweak: r.scalar("tweak")?,
            serial: r.scalar("serial")?,
            key_offset: r.scalar("key offset")?,
            policy_hash: r.scalar("policy hash")?,
            price: r.str("price")?,
            serv: r.str("service")?,
            vp: r.str("VP_T")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for ValidationChallenge {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.str(&self.verifier_id);
        w.scalar(&self.nonce);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            verifier_id: r.str("verifier id")?,
            nonce: r.scalar("nonce")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for TicketTranscript<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.scalar(&self.nonce);
        w.scalar(&self.policy_hash);
        w.item(&self.requested);
        w.str(&self.price);
        w.str(&self.serv);
        w.str(&self.vp);
        w.item(&self.proof);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            nonce: r.scalar("nonce")?,
            policy_hash: r.scalar("policy hash")?,
            requested: r.item("requested policies")?,
            price: r.str("price")?,
            serv: r.str("service")?,
            vp: r.str("VP_T")?,
            proof: r.item("proof")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for ValidationDecision {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.bool(self.accepted);
        w.str(&self.reason);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            accepted: r.bool("accepted")?,
            reason: r.str("reason")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for Ticket<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.scalar(&self.tweak);
        w.scalar(&self.serial);
        w.scalar(&self.policy_hash);
        w.scalar(&self.key_offset);
        w.g(&self.sigma);
        w.item(&self.requested);
        w.str(&self.price);
        w.str(&self.serv);
        w.str(&self.vp);
        w.g(&self.pseudonym);
        w.g(&self.seller_key);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            tweak: r.scalar("tweak")?,
            serial: r.scalar("serial")?,
            policy_hash: r.scalar("policy hash")?,
            key_offset: r.scalar("key offset")?,
            sigma: r.g("ticket signature")?,
            requested: r.item("requested policies")?,
            price: r.str("price")?,
            serv: r.str("service")?,
            vp: r.str("VP_T")?,
            pseudonym: r.g("pseudonym")?,
            seller_key: r.g("seller key")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for VerifierEntry<B> {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.str(&self.verifier_id);
        w.scalar(&self.nonce);
        w.g(&self.serial_commit);
        w.g(&self.spend_tag);
        w.g(&self.blinded_ticket);
        w.g(&self.blinding_commit);
        w.scalar(&self.policy_hash);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            verifier_id: r.str("verifier id")?,
            nonce: r.scalar("nonce")?,
            serial_commit: r.g("serial commitment")?,
            spend_tag: r.g("double-spend tag")?,
            blinded_ticket: r.g("blinded ticket")?,
            blinding_commit: r.g("blinding commitment")?,
            policy_hash: r.scalar("policy hash")?,
        })
    }
}

impl<B: PairingGroup> Wire<B> for UserTable {
    fn write(&self, w: &mut Writer<'_, B>) {
        let rows: Vec<_> = self.iter().collect();
        w.list(&rows, |w, (id, nonce)| {
            w.scalar(id);
            w.scalar(nonce);
        });
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        let rows = r.list("user table", |r| Ok((r.scalar("verifier hash")?, r.scalar("nonce")?)))?;
        let mut table = UserTable::default();
        for (id, nonce) in rows {
            table.record(id, nonce);
        }
        Ok(table)
    }
}

impl<B: PairingGroup> Wire<B> for MasterSecret {
    fn write(&self, w: &mut Writer<'_, B>) {
        w.scalar(&self.x);
        w.scalar(&self.y);
        scalars(w, &self.set_keys);
    }

    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError> {
        Ok(Self {
            x: r.scalar("x")?,
            y: r.scalar("y")?,
            set_keys: read_scalars(r, "set keys")?,
        })
    }
}

/// Writes a string-keyed map as a list of (key, record) pairs.
pub(super) fn write_map<B: PairingGroup, T>(
    w: &mut Writer<'_, B>,
    map: &BTreeMap<String, T>,
    mut f: impl FnMut(&mut Writer<'_, B>, &T),
) {
    let rows: Vec<_> = map.iter().collect();
    w.list(&rows, |w, (k, v)| {
        w.str(k);
        w.nested(|w| f(w, v));
    });
}

pub(super) fn read_map<'a, B: PairingGroup, T>(
    r: &mut Reader<'a, B>,
    field: &'static str,
    mut f: impl FnMut(&mut Reader<'a, B>) -> Result<T, ParseError>,
) -> Result<BTreeMap<String, T>, ParseError> {
    let rows = r.list(field, |r| {
        let at = r.base + r.pos;
        let k = r.str(field)?;
        let v = r.nested(field, &mut f)?;
        Ok((at, k, v))
    })?;
    let mut map = BTreeMap::new();
    for (at, k, v) in rows {
        if map.insert(k, v).is_some() {
            return Err(ParseError {
                offset: at,
                field,
                kind: ParseErrorKind::BadValue("duplicate key".into()),
            });
        }
    }
    Ok(map)
}

macro_rules! message {
    ($($ty:ident => $kind:ident),* $(,)?) => {
        $(impl<B: PairingGroup> Message<B> for $ty<B> {
            const KIND: MessageKind = MessageKind::$kind;
        })*
    };
}

message! {
    SellerRegistration => SellerRegistration,
    UserRegistration => UserRegistration,
    SellerAuth => SellerAuth,
    TicketRequest => TicketRequest,
    TicketIssue => TicketIssue,
    TicketTranscript => TicketTranscript,
    Ticket => Ticket,
    VerifierEntry => VerifierEntry,
}

impl<B: PairingGroup> Message<B> for ValidationChallenge {
    const KIND: MessageKind = MessageKind::ValidationChallenge;
}

impl<B: PairingGroup> Message<B> for ValidationDecision {
    const KIND: MessageKind = MessageKind::ValidationDecision;
}
