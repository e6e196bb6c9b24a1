//! Byte-level entry points: each actor consumes and produces encoded
//! messages, so a transport only has to move byte strings.

use chrono::{DateTime, Utc};
use eticket_groups::PairingGroup;

use super::{Ca, PendingTicket, SchemeError, Seller, TicketTerms, User, Verifier};
use crate::messages::CredentialIssue;
use crate::policy::SatisfiedPolicies;
use crate::ticket::Ticket;
use crate::wire::{decode, decode_as, encode, encode_as, peek_kind, MessageKind, WireError};

impl<B: PairingGroup> Ca<B> {
    /// Answers a seller or user registration with the matching credential
    /// message.
    pub fn handle(&mut self, msg: &[u8]) -> Result<Vec<u8>, SchemeError> {
        let params = self.params().clone();
        let grp = &params.grp;
        match peek_kind(msg)? {
            MessageKind::SellerRegistration => {
                let cred = self.register_seller(&decode(grp, msg)?)?;
                Ok(encode_as(grp, MessageKind::SellerCredential, &cred))
            }
            MessageKind::UserRegistration => {
                let cred = self.register_user(&decode(grp, msg)?)?;
                Ok(encode_as(grp, MessageKind::UserCredential, &cred))
            }
            found => Err(WireError::WrongType {
                expected: MessageKind::UserRegistration,
                found,
            }
            .into()),
        }
    }
}

impl<B: PairingGroup> Seller<B> {
    pub fn registration_bytes(&mut self, vp: &str) -> Vec<u8> {
        let req = self.registration_request(vp);
        encode(&self.params().grp, &req)
    }

    pub fn finish_registration_bytes(&mut self, msg: &[u8]) -> Result<(), SchemeError> {
        let cred: CredentialIssue<B> = decode_as(&self.params().grp, MessageKind::SellerCredential, msg)?;
        self.finish_registration(&cred)
    }

    pub fn authenticate_bytes(&mut self) -> Result<Vec<u8>, SchemeError> {
        let auth = self.authenticate()?;
        Ok(encode(&self.params().grp, &auth))
    }

    /// Turns an encoded ticket request into an encoded ticket.
    pub fn issue_bytes(&mut self, msg: &[u8], terms: &TicketTerms) -> Result<Vec<u8>, SchemeError> {
        let params = self.params().clone();
        let grp = &params.grp;
        let issue = self.issue(&decode(grp, msg)?, terms)?;
        Ok(encode(grp, &issue))
    }
}

impl<B: PairingGroup> User<B> {
    pub fn registration_bytes(&mut self, vp: &str) -> Vec<u8> {
        let req = self.registration_request(vp);
        encode(&self.params().grp, &req)
    }

    pub fn finish_registration_bytes(&mut self, msg: &[u8]) -> Result<(), SchemeError> {
        let cred: CredentialIssue<B> = decode_as(&self.params().grp, MessageKind::UserCredential, msg)?;
        self.finish_registration(&cred)
    }

    /// Answers the seller's authentication message with a ticket request.
    pub fn request_ticket_bytes(
        &mut self,
        auth: &[u8],
        requested: &SatisfiedPolicies,
    ) -> Result<(Vec<u8>, PendingTicket), SchemeError> {
        let params = self.params().clone();
        let grp = &params.grp;
        let (req, pending) = self.request_ticket(&decode(grp, auth)?, requested)?;
        Ok((encode(grp, &req), pending))
    }

    pub fn finish_ticket_bytes(&self, pending: PendingTicket, msg: &[u8]) -> Result<Ticket<B>, SchemeError> {
        self.finish_ticket(pending, &decode(&self.params().grp, msg)?)
    }

    /// Answers a verifier's challenge with a transcript, or refuses without
    /// producing any bytes.
    pub fn show_ticket_bytes(&mut self, ticket: &Ticket<B>, challenge: &[u8]) -> Result<Vec<u8>, SchemeError> {
        let params = self.params().clone();
        let grp = &params.grp;
        let transcript = self.show_ticket(ticket, &decode(grp, challenge)?)?;
        Ok(encode(grp, &transcript))
    }
}

impl<B: PairingGroup> Verifier<B> {
    pub fn challenge_bytes(&mut self) -> Result<Vec<u8>, SchemeError> {
        let challenge = self.challenge()?;
        Ok(encode(&self.params().grp, &challenge))
    }

    /// Checks an encoded transcript and returns the encoded decision.
    /// Malformed input is an error rather than a refusal.
    pub fn decide_bytes(&mut self, msg: &[u8], now: DateTime<Utc>) -> Result<Vec<u8>, SchemeError> {
        let params = self.params().clone();
        let grp = &params.grp;
        let decision = self.decide(&decode(grp, msg)?, now);
        Ok(encode(grp, &decision))
    }
}
