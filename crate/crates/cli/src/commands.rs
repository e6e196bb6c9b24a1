//! One function per subcommand, each reading and writing state through a
//! [`Store`].

use std::path::Path;
use std::sync::Arc;

use chrono::{DateTime, Utc};
use eticket::groups::{BackendId, ExponentGroup, PairingGroup, TypeACurve};
use eticket::messages::ValidationDecision;
use eticket::policy::{PolicyFile, SatisfiedPolicies, UserAttributes};
use eticket::scheme::{deanonymize, detect_double_spend, Ca, SpendKind, TicketTerms, Verifier, VerifierTable};
use eticket::wire::{
    append_entry, decode, decode_params, encode, encode_params, load_table, params_backend, CaState, SellerState,
    UserState,
};
use eticket::Params;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::store::Store;
use crate::{with_group, Backend, CliError};

/// Shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Context {
    pub store: Store,
    /// Derive all randomness from this seed and the command's inputs
    /// instead of the operating system.
    pub seed: Option<u64>,
}

impl Context {
    fn rng(&self, label: &str, inputs: &[&[u8]]) -> ChaCha20Rng {
        let Some(seed) = self.seed else {
            return ChaCha20Rng::from_entropy();
        };
        let mut h = Sha256::new();
        h.update(seed.to_be_bytes());
        h.update(label.as_bytes());
        for i in inputs {
            h.update((i.len() as u64).to_be_bytes());
            h.update(i);
        }
        ChaCha20Rng::from_seed(h.finalize().into())
    }
}

macro_rules! on_params {
    ($bytes:expr, $f:ident ( $($arg:expr),* )) => {
        match params_backend(&$bytes)? {
            BackendId::Pairing => $f::<TypeACurve>($($arg),*),
            BackendId::ExponentTest => $f::<ExponentGroup>($($arg),*),
        }
    };
}

fn load_params<B: PairingGroup>(bytes: &[u8]) -> Result<Arc<Params<B>>, CliError> {
    Ok(Arc::new(decode_params(bytes)?))
}

pub fn setup(ctx: &Context, policy: &Path, backend: Backend, prime: u64) -> Result<Vec<String>, CliError> {
    let universe = PolicyFile::load(policy)?.into_universe()?;
    let rng = ctx.rng("setup", &[policy.as_os_str().as_encoded_bytes()]);
    with_group!(backend, prime, |grp| {
        let ca = Ca::setup(universe, grp, rng)?;
        let params = ca.params();
        ctx.store.write(&ctx.store.params(), &encode_params(params))?;
        ctx.store
            .write(&ctx.store.ca(), &encode(&params.grp, &CaState::capture(&ca)))?;
        Ok(vec![format!(
            "{}: {} range and {} set policies, width {}; wrote {} and {}",
            backend.as_str(),
            params.universe.ranges().len(),
            params.universe.sets().len(),
            params.universe.width(),
            ctx.store.params().display(),
            ctx.store.ca().display()
        )])
    })
}

struct Authority<B: PairingGroup> {
    params: Arc<Params<B>>,
    ca: Ca<B>,
    state: Vec<u8>,
}

fn authority<B: PairingGroup>(ctx: &Context, label: &str, params_bytes: &[u8]) -> Result<Authority<B>, CliError> {
    let params = load_params::<B>(params_bytes)?;
    let state = ctx.store.read(&ctx.store.ca())?;
    let rng = ctx.rng(label, &[&state]);
    let ca = decode::<B, CaState<B>>(&params.grp, &state)?.restore(params.clone(), rng);
    Ok(Authority { params, ca, state })
}

fn save_authority<B: PairingGroup>(ctx: &Context, a: &Authority<B>) -> Result<(), CliError> {
    ctx.store
        .write(&ctx.store.ca(), &encode(&a.params.grp, &CaState::capture(&a.ca)))
}

pub fn register_seller(ctx: &Context, id: &str, vp: &str) -> Result<Vec<String>, CliError> {
    let params = ctx.store.read(&ctx.store.params())?;
    on_params!(params, register_seller_with(ctx, &params, id, vp))
}

fn register_seller_with<B: PairingGroup>(
    ctx: &Context,
    params: &[u8],
    id: &str,
    vp: &str,
) -> Result<Vec<String>, CliError> {
    let mut a = authority::<B>(ctx, "register-seller", params)?;
    let rng = ctx.rng("seller", &[&a.state, id.as_bytes()]);
    let mut seller = eticket::scheme::Seller::new(id, a.params.clone(), rng);
    let reply = a.ca.handle(&seller.registration_bytes(vp))?;
    seller.finish_registration_bytes(&reply)?;
    let grp = &a.params.grp;
    save_authority(ctx, &a)?;
    ctx.store
        .write(&ctx.store.seller(id)?, &encode(grp, &SellerState::capture(&seller)))?;
    let key = hex::encode(grp.encode_g(seller.public_key()));
    ctx.store.write(&ctx.store.seller_key(id)?, key.as_bytes())?;
    Ok(vec![format!("seller `{id}` registered until {vp}")])
}

pub fn register_user(ctx: &Context, id: &str, attributes: &Path, vp: &str) -> Result<Vec<String>, CliError> {
    let text = ctx.store.read(attributes)?;
    let text = String::from_utf8(text).map_err(|e| CliError::Config(e.to_string()))?;
    let attrs: UserAttributes = toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
    let params = ctx.store.read(&ctx.store.params())?;
    on_params!(params, register_user_with(ctx, &params, id, attrs, vp))
}

fn register_user_with<B: PairingGroup>(
    ctx: &Context,
    params: &[u8],
    id: &str,
    attrs: UserAttributes,
    vp: &str,
) -> Result<Vec<String>, CliError> {
    let mut a = authority::<B>(ctx, "register-user", params)?;
    let rng = ctx.rng("user", &[&a.state, id.as_bytes()]);
    let mut user = eticket::scheme::User::new(id, a.params.clone(), attrs, rng);
    let reply = a.ca.handle(&user.registration_bytes(vp))?;
    user.finish_registration_bytes(&reply)?;
    save_authority(ctx, &a)?;
    ctx.store.write(
        &ctx.store.user(id)?,
        &encode(&a.params.grp, &UserState::capture(&user, Vec::new())),
    )?;
    Ok(vec![format!("user `{id}` registered until {vp}")])
}

struct Holder<B: PairingGroup> {
    user: eticket::scheme::User<B>,
    tickets: Vec<eticket::Ticket<B>>,
}

fn load_user<B: PairingGroup>(
    ctx: &Context,
    params: &Arc<Params<B>>,
    id: &str,
    label: &str,
) -> Result<Holder<B>, CliError> {
    let state = ctx.store.read(&ctx.store.user(id)?)?;
    let rng = ctx.rng(label, &[&state]);
    let (user, tickets) = decode::<B, UserState<B>>(&params.grp, &state)?.restore(params.clone(), rng);
    Ok(Holder { user, tickets })
}

fn save_user<B: PairingGroup>(ctx: &Context, h: Holder<B>) -> Result<(), CliError> {
    let grp = h.user.params().grp.clone();
    let path = ctx.store.user(h.user.id())?;
    ctx.store
        .write(&path, &encode(&grp, &UserState::capture(&h.user, h.tickets)))
}

pub fn issue(
    ctx: &Context,
    seller: &str,
    user: &str,
    request: &[String],
    terms: &TicketTerms,
) -> Result<Vec<String>, CliError> {
    let params = ctx.store.read(&ctx.store.params())?;
    on_params!(params, issue_with(ctx, &params, seller, user, request, terms))
}

fn issue_with<B: PairingGroup>(
    ctx: &Context,
    params: &[u8],
    seller_id: &str,
    user_id: &str,
    request: &[String],
    terms: &TicketTerms,
) -> Result<Vec<String>, CliError> {
    let params = load_params::<B>(params)?;
    let grp = &params.grp;
    let seller_state = ctx.store.read(&ctx.store.seller(seller_id)?)?;
    let rng = ctx.rng("issue-seller", &[&seller_state]);
    let mut seller = decode::<B, SellerState<B>>(grp, &seller_state)?.restore(params.clone(), rng);
    let mut h = load_user(ctx, &params, user_id, "issue-user")?;

    let requested = SatisfiedPolicies::new(request);
    let auth = seller.authenticate_bytes()?;
    let (req, pending) = h.user.request_ticket_bytes(&auth, &requested)?;
    let reply = seller.issue_bytes(&req, terms)?;
    let ticket = h.user.finish_ticket_bytes(pending, &reply)?;
    h.tickets.push(ticket);
    let n = h.tickets.len() - 1;
    ctx.store.write(
        &ctx.store.seller(seller_id)?,
        &encode(grp, &SellerState::capture(&seller)),
    )?;
    save_user(ctx, h)?;
    Ok(vec![format!(
        "ticket {n} issued to `{user_id}` by `{seller_id}` for [{}], valid until {}",
        request.join(", "),
        terms.vp
    )])
}

/// Options of one validation.
#[derive(Clone, Debug)]
pub struct Showing {
    pub user: String,
    pub verifier: String,
    pub seller: String,
    /// Index into the user's tickets; the newest when `None`.
    pub ticket: Option<usize>,
    pub at: DateTime<Utc>,
    /// Clears the user's list of verifiers first, as a cheating user would.
    pub forget_shown: bool,
}

pub fn validate(ctx: &Context, showing: &Showing) -> Result<Vec<String>, CliError> {
    let params = ctx.store.read(&ctx.store.params())?;
    on_params!(params, validate_with(ctx, &params, showing))
}

fn validate_with<B: PairingGroup>(ctx: &Context, params: &[u8], s: &Showing) -> Result<Vec<String>, CliError> {
    let params = load_params::<B>(params)?;
    let grp = &params.grp;
    let key_hex = ctx.store.read(&ctx.store.seller_key(&s.seller)?)?;
    let key_bytes = hex::decode(key_hex.trim_ascii()).map_err(|e| CliError::Config(e.to_string()))?;
    let seller_key = grp.decode_g(&key_bytes)?;

    let table_path = ctx.store.table(&s.verifier)?;
    let table = load_table(grp, &table_path)?;
    let rng = ctx.rng(
        "verifier",
        &[s.verifier.as_bytes(), &eticket::wire::table_bytes(&table, grp)],
    );
    let mut verifier = Verifier::restore(s.verifier.clone(), params.clone(), seller_key, table, rng);

    let mut h = load_user(ctx, &params, &s.user, "validate-user")?;
    let n = match s.ticket {
        Some(n) => n,
        None => h
            .tickets
            .len()
            .checked_sub(1)
            .ok_or_else(|| CliError::Usage(format!("`{}` holds no tickets", s.user)))?,
    };
    let ticket = h
        .tickets
        .get(n)
        .ok_or_else(|| CliError::Usage(format!("`{}` has no ticket {n}", s.user)))?
        .clone();
    if s.forget_shown {
        h.user.clear_table();
    }
    let challenge = verifier.challenge_bytes()?;
    let transcript = h.user.show_ticket_bytes(&ticket, &challenge)?;
    save_user(ctx, h)?;
    let decision: ValidationDecision = decode(grp, &verifier.decide_bytes(&transcript, s.at)?)?;
    if !decision.accepted {
        return Err(CliError::Check(format!(
            "`{}` rejected the ticket: {}",
            s.verifier, decision.reason
        )));
    }
    let entry = verifier.table().entries().last().expect("accepted entry");
    append_entry(grp, entry, &table_path)?;
    Ok(vec![format!(
        "`{}` accepted ticket {n} of `{}`; {} entries in {}",
        s.verifier,
        s.user,
        verifier.table().len(),
        table_path.display()
    )])
}

pub fn detect(ctx: &Context, verifiers: &[String]) -> Result<Vec<String>, CliError> {
    let params = ctx.store.read(&ctx.store.params())?;
    on_params!(params, detect_with(ctx, &params, verifiers))
}

fn detect_with<B: PairingGroup>(ctx: &Context, params: &[u8], verifiers: &[String]) -> Result<Vec<String>, CliError> {
    let a = authority::<B>(ctx, "detect", params)?;
    let grp = &a.params.grp;
    let mut merged = VerifierTable::new(grp.clone());
    for v in verifiers {
        merged.extend(&load_table(grp, &ctx.store.table(v)?)?);
    }
    let hits = detect_double_spend(&merged);
    let mut out = vec![format!(
        "{} entries, {} suspected double spends",
        merged.len(),
        hits.len()
    )];
    for hit in hits {
        let (x, y) = (&merged.entries()[hit.first], &merged.entries()[hit.second]);
        match hit.kind {
            SpendKind::CrossVerifier => out.push(format!(
                "entries {} and {}: same ticket at `{}` and `{}`",
                hit.first, hit.second, x.verifier_id, y.verifier_id
            )),
            SpendKind::SameVerifier => {
                let key = deanonymize(&a.params, x, y)?;
                let who = a.ca.identify(&key).unwrap_or("<unregistered>");
                out.push(format!(
                    "entries {} and {}: shown twice at `{}` by `{who}` (key {})",
                    hit.first,
                    hit.second,
                    x.verifier_id,
                    hex::encode(grp.encode_g(&key))
                ));
            }
        }
    }
    Ok(out)
}
