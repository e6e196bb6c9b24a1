//! The full scenario: setup, registration, issuing, validation at two
//! verifiers, a double spend, detection and de-anonymisation.

use std::fmt;

use eticket::groups::PairingGroup;
use eticket::messages::ValidationDecision;
use eticket::scheme::{deanonymize, detect_double_spend, Ca, SchemeError, Seller, SpendKind, User, Verifier};
use eticket::wire::{decode, decode_params, encode_params, parse_log, table_bytes};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::DemoConfig;
use crate::{seeded, with_group, Backend, CliError};

/// Step names, in order.
pub const STEPS: [&str; 11] = [
    "setup",
    "register-seller",
    "register-user",
    "issue",
    "validate-first",
    "revalidate-first",
    "validate-second",
    "double-spend",
    "detect",
    "deanonymize",
    "identify",
];

#[derive(Debug, Error)]
#[error("step `{step}` failed: {source}")]
pub struct DemoFailure {
    pub step: &'static str,
    #[source]
    pub source: Box<CliError>,
    /// Trace lines of the steps that completed.
    pub lines: Vec<String>,
}

/// What a successful run printed, and a digest of every exchanged message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemoReport {
    pub lines: Vec<String>,
    pub trace_hash: String,
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        write!(f, "trace hash: {}", self.trace_hash)
    }
}

struct Trace {
    lines: Vec<String>,
    hasher: Sha256,
}

impl Trace {
    fn log(&mut self, step: &str, text: impl fmt::Display) {
        let line = format!("[{step}] {text}");
        self.hasher.update((line.len() as u64).to_be_bytes());
        self.hasher.update(line.as_bytes());
        self.lines.push(line);
    }

    fn message(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_be_bytes());
        self.hasher.update(bytes);
    }
}

/// Runs the scenario on `backend`, or the configured backend when `None`.
pub fn run_demo(cfg: &DemoConfig, backend: Option<Backend>, seed: u64) -> Result<DemoReport, DemoFailure> {
    let backend = backend.unwrap_or(cfg.backend);
    let run = || -> Result<Result<DemoReport, DemoFailure>, CliError> {
        Ok(with_group!(backend, cfg.prime, |grp| run_with(grp, cfg, seed)))
    };
    run().unwrap_or_else(|source| {
        Err(DemoFailure {
            step: STEPS[0],
            source: Box::new(source),
            lines: Vec::new(),
        })
    })
}

fn run_with<B: PairingGroup>(grp: B, cfg: &DemoConfig, seed: u64) -> Result<DemoReport, DemoFailure> {
    let mut t = Trace {
        lines: Vec::new(),
        hasher: Sha256::new(),
    };
    let mut step = STEPS[0];
    match scenario(grp, cfg, seed, &mut t, &mut step) {
        Ok(()) => Ok(DemoReport {
            lines: t.lines,
            trace_hash: hex::encode(t.hasher.finalize()),
        }),
        Err(source) => Err(DemoFailure {
            step,
            source: Box::new(source),
            lines: t.lines,
        }),
    }
}

fn check(ok: bool, what: impl Into<String>) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Check(what.into()))
    }
}

fn accepted<B: PairingGroup>(grp: &B, bytes: &[u8]) -> Result<(), CliError> {
    let d: ValidationDecision = decode(grp, bytes)?;
    check(d.accepted, format!("verifier rejected the ticket: {}", d.reason))
}

fn scenario<B: PairingGroup>(
    grp: B,
    cfg: &DemoConfig,
    seed: u64,
    t: &mut Trace,
    step: &mut &'static str,
) -> Result<(), CliError> {
    let backend = grp.backend().as_str();
    let universe = cfg.universe()?;
    let mut ca = Ca::setup(universe, grp, seeded(seed, 0))?;
    let params = ca.params().clone();
    let blob = encode_params(&params);
    let reread: eticket::Params<B> = decode_params(&blob)?;
    check(reread == *params, "parameters do not survive a round trip")?;
    t.message(&blob);
    let u = &params.universe;
    t.log(
        "setup",
        format_args!(
            "{backend}: {} range and {} set policies, base {} width {}, {} published tags",
            u.ranges().len(),
            u.sets().len(),
            u.base(),
            u.width(),
            params.tag_count()
        ),
    );
    let grp = &params.grp;

    *step = "register-seller";
    let mut seller = Seller::new(cfg.seller.id.clone(), params.clone(), seeded(seed, 1));
    let req = seller.registration_bytes(&cfg.seller.vp);
    let reply = ca.handle(&req)?;
    seller.finish_registration_bytes(&reply)?;
    t.message(&req);
    t.message(&reply);
    t.log(
        "register-seller",
        format_args!("`{}` holds a credential valid until {}", cfg.seller.id, cfg.seller.vp),
    );

    *step = "register-user";
    let mut user = User::new(
        cfg.user.id.clone(),
        params.clone(),
        cfg.user.attributes.clone(),
        seeded(seed, 2),
    );
    let req = user.registration_bytes(&cfg.user.vp);
    let reply = ca.handle(&req)?;
    user.finish_registration_bytes(&reply)?;
    t.message(&req);
    t.message(&reply);
    t.log(
        "register-user",
        format_args!("`{}` holds a credential valid until {}", cfg.user.id, cfg.user.vp),
    );

    *step = "issue";
    let requested = cfg.requested();
    let auth = seller.authenticate_bytes()?;
    let (request, pending) = user.request_ticket_bytes(&auth, &requested)?;
    let issue = seller.issue_bytes(&request, &cfg.terms())?;
    let ticket = user.finish_ticket_bytes(pending, &issue)?;
    for m in [&auth, &request, &issue] {
        t.message(m);
    }
    let names: Vec<&str> = requested.names().map(String::as_str).collect();
    t.log(
        "issue",
        format_args!(
            "ticket for [{}], {} / {}, valid until {}",
            names.join(", "),
            ticket.price,
            ticket.serv,
            ticket.vp
        ),
    );

    *step = "validate-first";
    let seller_key = ca
        .seller_key(&cfg.seller.id)
        .ok_or_else(|| CliError::Check("seller key not published".into()))?
        .clone();
    let [first_id, second_id] = &cfg.validation.verifiers;
    let now = cfg.now();
    let mut first = Verifier::new(first_id.clone(), params.clone(), seller_key.clone(), seeded(seed, 3));
    let mut second = Verifier::new(second_id.clone(), params.clone(), seller_key, seeded(seed, 4));

    let show = |t: &mut Trace, user: &mut User<B>, v: &mut Verifier<B>| -> Result<(), CliError> {
        let ch = v.challenge_bytes()?;
        let transcript = user.show_ticket_bytes(&ticket, &ch)?;
        let decision = v.decide_bytes(&transcript, now)?;
        for m in [&ch, &transcript, &decision] {
            t.message(m);
        }
        accepted(grp, &decision)
    };

    show(t, &mut user, &mut first)?;
    t.log("validate-first", format_args!("`{first_id}` accepts"));

    *step = "revalidate-first";
    let ch = first.challenge_bytes()?;
    match user.show_ticket_bytes(&ticket, &ch) {
        Err(SchemeError::RepeatVerifier(_)) => {}
        Ok(_) => return Err(CliError::Check("user showed the ticket twice".into())),
        Err(e) => return Err(e.into()),
    }
    t.message(&ch);
    t.log(
        "revalidate-first",
        format_args!("user refuses a second showing at `{first_id}`"),
    );

    *step = "validate-second";
    show(t, &mut user, &mut second)?;
    t.log("validate-second", format_args!("`{second_id}` accepts"));

    *step = "double-spend";
    user.clear_table();
    show(t, &mut user, &mut first)?;
    t.log(
        "double-spend",
        format_args!("a user ignoring its table shows the ticket at `{first_id}` again, and it is accepted"),
    );

    *step = "detect";
    let mut merged = first.into_table();
    merged.extend(second.table());
    let log = table_bytes(&merged, grp);
    let (reloaded, complete) = parse_log(grp, &log)?;
    check(
        complete == log.len() && reloaded == merged,
        "verifier log does not round trip",
    )?;
    t.message(&log);
    let hits = detect_double_spend(&merged);
    let same: Vec<_> = hits.iter().filter(|h| h.kind == SpendKind::SameVerifier).collect();
    check(
        same.len() == 1,
        format!("expected one same-verifier hit, found {}", same.len()),
    )?;
    t.log(
        "detect",
        format_args!(
            "{} entries, {} same-verifier and {} cross-verifier hits",
            merged.len(),
            same.len(),
            hits.len() - same.len()
        ),
    );

    *step = "deanonymize";
    let (a, b) = (&merged.entries()[same[0].first], &merged.entries()[same[0].second]);
    let recovered = deanonymize(&params, a, b)?;
    let encoded = grp.encode_g(&recovered);
    t.message(&encoded);
    t.log("deanonymize", format_args!("recovered key {}", short_hex(&encoded)));

    *step = "identify";
    let registered = ca
        .users()
        .get(&cfg.user.id)
        .ok_or_else(|| CliError::Check("user not registered".into()))?;
    check(
        grp.encode_g(&registered.key) == encoded,
        "recovered key differs from the registered one",
    )?;
    check(
        ca.identify(&recovered) == Some(cfg.user.id.as_str()),
        "authority cannot identify the key",
    )?;
    t.log(
        "identify",
        format_args!("the key is `{}`'s registered key", cfg.user.id),
    );
    Ok(())
}

fn short_hex(bytes: &[u8]) -> String {
    let h = hex::encode(bytes);
    if h.len() > 24 {
        format!("{}..{}", &h[..12], &h[h.len() - 8..])
    } else {
        h
    }
}
