//! Timings of the protocol phases, and of request-proof creation as the
//! range width and set size grow.

use std::hint::black_box;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use eticket::groups::PairingGroup;
use eticket::policy::{PolicyUniverse, RangePolicy, SatisfiedPolicies, SetPolicy, UserAttributes};
use eticket::scheme::{Ca, Seller, TicketTerms, User};
use eticket::ticket::ticket_holds;
use eticket::zkp::{prove_s2, prove_u2, prove_u3, verify_s2, verify_u2, verify_u3};
use eticket::Params;
use serde::Serialize;

use crate::{seeded, CliError};

/// Iterations below which means are not comparable with published figures.
pub const MIN_ITERS: usize = 20;

pub const RANGE_SWEEP: [u32; 3] = [5, 10, 20];
pub const SET_SWEEP: [usize; 2] = [10, 100];

#[derive(Clone, Debug, PartialEq)]
pub struct BenchOptions {
    pub ranges: usize,
    pub sets: usize,
    pub k: u32,
    pub set_size: usize,
    pub iters: usize,
    pub sweeps: bool,
    pub seed: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            ranges: 2,
            sets: 4,
            k: 3,
            set_size: 10,
            iters: MIN_ITERS,
            sweeps: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub phase: &'static str,
    pub entity: &'static str,
    pub backend: &'static str,
    #[serde(rename = "N1")]
    pub n1: usize,
    #[serde(rename = "N2")]
    pub n2: usize,
    pub k: u32,
    pub set_size: usize,
    pub iters: usize,
    pub mean_ms: f64,
}

/// The per-phase rows, one each, in protocol order.
pub const PHASES: [(&str, &str); 9] = [
    ("initialise", "CA"),
    ("generate_seller_proof", "Seller"),
    ("verify_seller_proof", "User"),
    ("generate_ticket_request", "User"),
    ("verify_ticket_request", "Seller"),
    ("generate_ticket", "Seller"),
    ("verify_ticket", "User"),
    ("generate_transcript", "User"),
    ("verify_transcript", "Verifier"),
];

pub const RANGE_CREATE: &str = "range_proof_creation";
pub const RANGE_VERIFY: &str = "range_proof_verification";
pub const SET_CREATE: &str = "set_proof_creation";
pub const SET_VERIFY: &str = "set_proof_verification";

/// Mean wall-clock milliseconds of `f` over `iters` runs, after one
/// untimed warm-up run.
pub fn mean_ms<T>(iters: usize, mut f: impl FnMut() -> T) -> f64 {
    black_box(f());
    let start = Instant::now();
    for _ in 0..iters {
        black_box(f());
    }
    start.elapsed().as_secs_f64() * 1000.0 / iters.max(1) as f64
}

/// Mean extra time of `full` over `base`, timed alternately so that drift
/// affects both equally.
pub fn marginal_ms<T, U>(iters: usize, mut full: impl FnMut() -> T, mut base: impl FnMut() -> U) -> f64 {
    black_box(full());
    black_box(base());
    let (mut with, mut without) = (Duration::ZERO, Duration::ZERO);
    for _ in 0..iters {
        let start = Instant::now();
        black_box(full());
        with += start.elapsed();
        let start = Instant::now();
        black_box(base());
        without += start.elapsed();
    }
    (with.as_secs_f64() - without.as_secs_f64()) * 1000.0 / iters.max(1) as f64
}

fn range_name(i: usize) -> String {
    format!("range-{i}")
}

fn set_name(i: usize) -> String {
    format!("set-{i}")
}

/// `ranges` policies `[0, 2^k)` and `sets` policies of `set_size` items,
/// with a user satisfying all of them.
pub fn shape(
    ranges: usize,
    sets: usize,
    k: u32,
    set_size: usize,
) -> Result<(PolicyUniverse, UserAttributes), CliError> {
    if k == 0 || k > 40 {
        return Err(CliError::Usage(format!("k must be in 1..=40, got {k}")));
    }
    if sets > 0 && set_size == 0 {
        return Err(CliError::Usage("set size must be positive".into()));
    }
    let upper = 1i64 << k;
    let items: Vec<String> = (1..=set_size).map(|i| i.to_string()).collect();
    let item_refs: Vec<&str> = items.iter().map(String::as_str).collect();
    let mut attrs = UserAttributes::default();
    let range_policies = (0..ranges)
        .map(|i| {
            attrs = std::mem::take(&mut attrs).with_value(&range_name(i), upper / 2);
            RangePolicy::new(range_name(i), 0, upper)
        })
        .collect();
    let set_policies = (0..sets)
        .map(|i| {
            attrs = std::mem::take(&mut attrs).with_item(&set_name(i), &items[set_size / 2]);
            SetPolicy::new(set_name(i), &item_refs)
        })
        .collect();
    Ok((PolicyUniverse::new(range_policies, set_policies, 2)?, attrs))
}

fn all_names(u: &PolicyUniverse) -> SatisfiedPolicies {
    SatisfiedPolicies::new(
        u.ranges()
            .iter()
            .map(|r| &r.name)
            .chain(u.sets().iter().map(|s| &s.name)),
    )
}

const VP: &str = "2031-12-31";

struct Parties<B: PairingGroup> {
    params: Arc<Params<B>>,
    seller: Seller<B>,
    user: User<B>,
}

fn register<B: PairingGroup>(ca: &mut Ca<B>, attrs: UserAttributes, seed: u64) -> Result<Parties<B>, CliError> {
    let params = ca.params().clone();
    let mut seller = Seller::new("seller", params.clone(), seeded(seed, 1));
    let req = seller.registration_request(VP);
    seller.finish_registration(&ca.register_seller(&req)?)?;
    let mut user = User::new("user", params.clone(), attrs, seeded(seed, 2));
    let req = user.registration_request(VP);
    user.finish_registration(&ca.register_user(&req)?)?;
    Ok(Parties { params, seller, user })
}

/// Times the nine protocol phases on one policy shape.
pub fn phases<B: PairingGroup>(grp: B, opts: &BenchOptions) -> Result<Vec<BenchRow>, CliError> {
    let (universe, attrs) = shape(opts.ranges, opts.sets, opts.k, opts.set_size)?;
    let mut rng = seeded(opts.seed, 9);
    let row = |i: usize, mean_ms: f64| BenchRow {
        phase: PHASES[i].0,
        entity: PHASES[i].1,
        backend: grp.backend().as_str(),
        n1: opts.ranges,
        n2: opts.sets,
        k: opts.k,
        set_size: opts.set_size,
        iters: opts.iters,
        mean_ms,
    };
    let mut rows = Vec::new();
    let mut n = 0u64;
    rows.push(row(
        0,
        mean_ms(opts.iters, || {
            n += 1;
            Ca::setup(universe.clone(), grp.clone(), seeded(opts.seed, 100 + n)).map(|_| ())
        }),
    ));

    let mut ca = Ca::setup(universe.clone(), grp.clone(), seeded(opts.seed, 0))?;
    let Parties {
        params,
        mut seller,
        user,
    } = register(&mut ca, attrs.clone(), opts.seed)?;
    let p = &*params;
    let seller_cred = seller.credential().expect("registered").clone();
    let user_cred = user.credential().expect("registered").clone();

    rows.push(row(
        1,
        mean_ms(opts.iters, || prove_s2(p, &seller_cred, seller.secret(), &mut rng)),
    ));
    let s2 = prove_s2(p, &seller_cred, seller.secret(), &mut rng);
    rows.push(row(2, mean_ms(opts.iters, || assert!(verify_s2(p, &s2)))));

    let requested = all_names(&universe);
    rows.push(row(
        3,
        mean_ms(opts.iters, || {
            prove_u2(p, &user_cred, user.secret(), &attrs, &requested, &mut rng)
        }),
    ));
    let mut user = user;
    let auth = seller.authenticate()?;
    let (request, pending) = user.request_ticket(&auth, &requested)?;
    rows.push(row(4, mean_ms(opts.iters, || assert!(verify_u2(p, &request.proof)))));

    let terms = TicketTerms {
        price: "1.00 EUR".into(),
        serv: "bench".into(),
        vp: VP.into(),
    };
    let mut signing = Ok(());
    rows.push(row(
        5,
        mean_ms(opts.iters, || {
            if let Err(e) = seller.sign_request(&request, &terms) {
                signing = Err(e);
            }
        }),
    ));
    signing?;
    let issue = seller.sign_request(&request, &terms)?;
    let ticket = user.finish_ticket(pending, &issue)?;
    rows.push(row(
        6,
        mean_ms(opts.iters, || {
            assert!(ticket_holds(p, &ticket, user.public_key(), seller.public_key()))
        }),
    ));

    let nonce = grp.random_scalar(&mut rng);
    rows.push(row(
        7,
        mean_ms(opts.iters, || {
            prove_u3(p, &ticket, user.secret(), "gate", &nonce, &mut rng)
        }),
    ));
    let u3 = prove_u3(p, &ticket, user.secret(), "gate", &nonce, &mut rng);
    let key = seller.public_key();
    rows.push(row(
        8,
        mean_ms(opts.iters, || {
            assert!(verify_u3(p, &u3, &ticket.policy_hash, key, &nonce, "gate"))
        }),
    ));
    Ok(rows)
}

/// Cost that the policy under test adds to request-proof creation and
/// verification, over the same proof with nothing requested.
#[allow(clippy::too_many_arguments)]
fn single_policy<B: PairingGroup>(
    grp: &B,
    ranges: usize,
    sets: usize,
    k: u32,
    set_size: usize,
    iters: usize,
    seed: u64,
    names: (&'static str, &'static str),
) -> Result<[BenchRow; 2], CliError> {
    let (universe, attrs) = shape(ranges, sets, k, set_size)?;
    let mut ca = Ca::setup(universe.clone(), grp.clone(), seeded(seed, 0))?;
    let Parties { params, user, .. } = register(&mut ca, attrs.clone(), seed)?;
    let p = &*params;
    let cred = user.credential().expect("registered").clone();
    let requested = all_names(&universe);
    let mut rng = seeded(seed, 9);
    let nothing = SatisfiedPolicies::new(Vec::<String>::new());
    let (proof, _) = prove_u2(p, &cred, user.secret(), &attrs, &requested, &mut rng)?;
    let (bare, _) = prove_u2(p, &cred, user.secret(), &attrs, &nothing, &mut rng)?;
    let mut base_rng = seeded(seed, 10);
    let create = marginal_ms(
        iters,
        || prove_u2(p, &cred, user.secret(), &attrs, &requested, &mut rng),
        || prove_u2(p, &cred, user.secret(), &attrs, &nothing, &mut base_rng),
    );
    let verify = marginal_ms(iters, || assert!(verify_u2(p, &proof)), || assert!(verify_u2(p, &bare)));
    let row = |phase, mean_ms| BenchRow {
        phase,
        entity: "User",
        backend: grp.backend().as_str(),
        n1: ranges,
        n2: sets,
        k: universe.width(),
        set_size,
        iters,
        mean_ms,
    };
    Ok([row(names.0, create), row(names.1, verify)])
}

/// One range policy of width `k` for each `k` in `widths`.
pub fn range_sweep<B: PairingGroup>(
    grp: &B,
    widths: &[u32],
    iters: usize,
    seed: u64,
) -> Result<Vec<BenchRow>, CliError> {
    let mut rows = Vec::new();
    for &k in widths {
        rows.extend(single_policy(
            grp,
            1,
            0,
            k,
            0,
            iters,
            seed,
            (RANGE_CREATE, RANGE_VERIFY),
        )?);
    }
    Ok(rows)
}

/// One set policy of each size in `sizes`.
pub fn set_sweep<B: PairingGroup>(
    grp: &B,
    sizes: &[usize],
    iters: usize,
    seed: u64,
) -> Result<Vec<BenchRow>, CliError> {
    let mut rows = Vec::new();
    for &s in sizes {
        rows.extend(single_policy(grp, 0, 1, 1, s, iters, seed, (SET_CREATE, SET_VERIFY))?);
    }
    Ok(rows)
}

/// Phase rows followed, if requested, by both sweeps.
pub fn run_bench<B: PairingGroup>(grp: B, opts: &BenchOptions) -> Result<Vec<BenchRow>, CliError> {
    if opts.iters == 0 {
        return Err(CliError::Usage("iterations must be positive".into()));
    }
    if opts.iters < MIN_ITERS {
        log::warn!(
            "{} iterations per point; published means average {MIN_ITERS}",
            opts.iters
        );
    }
    let mut rows = phases(grp.clone(), opts)?;
    if opts.sweeps {
        rows.extend(range_sweep(&grp, &RANGE_SWEEP, opts.iters, opts.seed)?);
        rows.extend(set_sweep(&grp, &SET_SWEEP, opts.iters, opts.seed)?);
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: "<csv>".into(),
        source,
    })?;
    Ok(())
}

/// Mean creation time of the row with `phase` and the given width or size.
pub fn lookup(rows: &[BenchRow], phase: &str, k: Option<u32>, set_size: Option<usize>) -> Option<f64> {
    rows.iter()
        .find(|r| r.phase == phase && k.is_none_or(|k| r.k == k) && set_size.is_none_or(|s| r.set_size == s))
        .map(|r| r.mean_ms)
}
