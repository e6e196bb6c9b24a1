#![allow(dead_code)]

use std::sync::Arc;

use chrono::{DateTime, TimeZone, Utc};
use eticket::groups::PairingGroup;
use eticket::messages::{
    CredentialIssue, SellerAuth, SellerRegistration, TicketIssue, TicketRequest, UserRegistration,
};
use eticket::policy::{PolicyUniverse, RangePolicy, SatisfiedPolicies, SetPolicy, UserAttributes};
use eticket::scheme::{Ca, Seller, TicketTerms, User, Verifier};
use eticket::{Params, Ticket};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const P101: u64 = 101;
pub const P64: u64 = 18_446_744_073_709_551_557;

pub const CREDENTIAL_VP: &str = "2031-12-31";
pub const TICKET_VP: &str = "2030-06-30T12:00:00Z";

/// Fixed clock inside every validity period used here.
pub fn now() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2030, 1, 1, 0, 0, 0).unwrap()
}

/// Two ranges and four sets.
pub fn universe() -> PolicyUniverse {
    PolicyUniverse::new(
        vec![RangePolicy::new("age", 12, 18), RangePolicy::new("trips", 0, 20)],
        vec![
            SetPolicy::new("profession", &["student", "senior", "adult"]),
            SetPolicy::new("zone", &["A", "B", "C"]),
            SetPolicy::new("card", &["none", "gold"]),
            SetPolicy::new("mode", &["bus", "tram", "metro"]),
        ],
        2,
    )
    .unwrap()
}

pub fn attrs() -> UserAttributes {
    UserAttributes::default()
        .with_value("age", 16)
        .with_value("trips", 3)
        .with_item("profession", "student")
        .with_item("zone", "B")
        .with_item("card", "gold")
        .with_item("mode", "tram")
}

pub fn all_policies() -> SatisfiedPolicies {
    SatisfiedPolicies::new(["age", "trips", "profession", "zone", "card", "mode"])
}

pub fn terms() -> TicketTerms {
    TicketTerms {
        price: "2.50 EUR".into(),
        serv: "zone B day pass".into(),
        vp: TICKET_VP.into(),
    }
}

pub fn rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Everything exchanged while issuing one ticket.
pub struct Issued<B: PairingGroup> {
    pub auth: SellerAuth<B>,
    pub request: TicketRequest<B>,
    pub issue: TicketIssue<B>,
    pub ticket: Ticket<B>,
}

/// A CA, one registered seller and one registered user.
pub struct World<B: PairingGroup> {
    pub params: Arc<Params<B>>,
    pub ca: Ca<B>,
    pub seller: Seller<B>,
    pub user: User<B>,
    pub seller_reg: SellerRegistration<B>,
    pub seller_cred: CredentialIssue<B>,
    pub user_reg: UserRegistration<B>,
    pub user_cred: CredentialIssue<B>,
    seed: u64,
    verifiers: u64,
}

impl<B: PairingGroup> World<B> {
    pub fn new(grp: B, universe: PolicyUniverse, attrs: UserAttributes, seed: u64) -> Self {
        let mut ca = Ca::setup(universe, grp, rng(seed, 0)).unwrap();
        let params = ca.params().clone();
        let mut seller = Seller::new("seller-1", params.clone(), rng(seed, 1));
        let seller_reg = seller.registration_request(CREDENTIAL_VP);
        let seller_cred = ca.register_seller(&seller_reg).unwrap();
        seller.finish_registration(&seller_cred).unwrap();
        let mut user = User::new("user-1", params.clone(), attrs, rng(seed, 2));
        let user_reg = user.registration_request(CREDENTIAL_VP);
        let user_cred = ca.register_user(&user_reg).unwrap();
        user.finish_registration(&user_cred).unwrap();
        Self {
            params,
            ca,
            seller,
            user,
            seller_reg,
            seller_cred,
            user_reg,
            user_cred,
            seed,
            verifiers: 0,
        }
    }

    pub fn issue(&mut self, requested: &SatisfiedPolicies) -> Issued<B> {
        let auth = self.seller.authenticate().unwrap();
        let (request, pending) = self.user.request_ticket(&auth, requested).unwrap();
        let issue = self.seller.issue(&request, &terms()).unwrap();
        let ticket = self.user.finish_ticket(pending, &issue).unwrap();
        Issued {
            auth,
            request,
            issue,
            ticket,
        }
    }

    pub fn verifier(&mut self, id: &str) -> Verifier<B> {
        self.verifiers += 1;
        Verifier::new(
            id,
            self.params.clone(),
            self.seller.public_key().clone(),
            rng(self.seed, 100 + self.verifiers),
        )
    }
}

/// Splits a body into its length-prefixed fields.
pub fn split(body: &[u8]) -> Option<Vec<&[u8]>> {
    let mut fields = Vec::new();
    let mut rest = body;
    while !rest.is_empty() {
        let len = u32::from_be_bytes(rest.get(..4)?.try_into().ok()?) as usize;
        fields.push(rest.get(4..4 + len)?);
        rest = &rest[4 + len..];
    }
    Some(fields)
}

/// Canonical encodings of every `G` and `GT` element inside a body.
pub fn group_elements<B: PairingGroup>(grp: &B, body: &[u8], out: &mut Vec<Vec<u8>>) {
    for field in split(body).unwrap_or_default() {
        if grp.decode_g(field).is_ok() || grp.decode_gt(field).is_ok() {
            out.push(field.to_vec());
        } else if grp.decode_scalar(field).is_err() {
            group_elements(grp, field, out);
        }
    }
}
