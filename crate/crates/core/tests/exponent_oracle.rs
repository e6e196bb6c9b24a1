//! Runs the whole protocol on the exponent backend and re-checks every
//! verification equation with plain `u128` arithmetic on discrete logs.
//!
//! Nothing here calls the library's group, pairing or hashing code: the
//! oracle rebuilds canonical encodings, Fiat-Shamir challenges and pairing
//! products from the logs of the transmitted values.

mod common;

use common::{all_policies, attrs, universe, World, P101, P64};
use eticket::groups::{ExpG, ExpGt, ExponentGroup, PairingGroup, Scalar};
use eticket::messages::CredentialIssue;
use eticket::policy::{PolicyUniverse, RangePolicy, SatisfiedPolicies, SetPolicy, UserAttributes};
use eticket::scheme::{deanonymize, detect_double_spend, VerifierEntry};
use eticket::zkp::{ProofS1, ProofS2, ProofU1, ProofU2, ProofU3};
use eticket::{MasterSecret, Params, Ticket};
use sha2::{Digest, Sha256};

/// Integers mod a prime below 2^64.
struct Zp {
    p: u128,
    width: usize,
}

impl Zp {
    fn new(p: u64) -> Self {
        let bits = 64 - p.leading_zeros() as usize;
        Self {
            p: u128::from(p),
            width: bits.div_ceil(8),
        }
    }

    fn add(&self, a: u128, b: u128) -> u128 {
        (a + b) % self.p
    }

    fn sub(&self, a: u128, b: u128) -> u128 {
        (a + self.p - b % self.p) % self.p
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        (a % self.p) * (b % self.p) % self.p
    }

    fn pow(&self, mut a: u128, mut e: u128) -> u128 {
        let mut acc = 1;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u128) -> u128 {
        assert_ne!(a % self.p, 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    fn int(&self, v: i64) -> u128 {
        let m = i128::from(v).rem_euclid(self.p as i128);
        m as u128
    }

    /// `sum a_i * b_i`.
    fn lin(&self, terms: &[(u128, u128)]) -> u128 {
        terms.iter().fold(0, |acc, &(a, b)| self.add(acc, self.mul(a, b)))
    }

    /// SHA-256 read big-endian, reduced mod p.
    fn hash(&self, bytes: &[u8]) -> u128 {
        Sha256::digest(bytes)
            .iter()
            .fold(0, |acc, &b| (acc * 256 + u128::from(b)) % self.p)
    }

    fn text(&self, s: &str) -> u128 {
        self.hash(s.as_bytes())
    }

    fn fs(&self) -> Fs<'_> {
        Fs {
            zp: self,
            buf: Vec::new(),
        }
    }

    /// Hash of the length-prefixed policy names, price, service and validity.
    fn policy_hash(&self, requested: &SatisfiedPolicies, price: &str, serv: &str, vp: &str) -> u128 {
        let names: Vec<&str> = requested.names().map(String::as_str).collect();
        let joined = names.join("\u{1f}");
        let mut buf = Vec::new();
        for part in [joined.as_bytes(), price.as_bytes(), serv.as_bytes(), vp.as_bytes()] {
            buf.extend_from_slice(&(part.len() as u32).to_be_bytes());
            buf.extend_from_slice(part);
        }
        self.hash(&buf)
    }
}

/// Fiat-Shamir transcript over tagged, fixed-width encodings of logs.
struct Fs<'a> {
    zp: &'a Zp,
    buf: Vec<u8>,
}

impl Fs<'_> {
    fn push(mut self, tag: u8, v: u128) -> Self {
        let bytes = v.to_be_bytes();
        self.buf.push(tag);
        self.buf.extend_from_slice(&(self.zp.width as u32).to_be_bytes());
        self.buf.extend_from_slice(&bytes[16 - self.zp.width..]);
        self
    }

    fn g(self, v: u128) -> Self {
        self.push(0x01, v)
    }

    fn gt(self, v: u128) -> Self {
        self.push(0x02, v)
    }

    fn finish(self) -> u128 {
        self.zp.hash(&self.buf)
    }
}

fn big(v: &num_bigint::BigUint) -> u128 {
    let digits = v.to_u64_digits();
    assert!(digits.len() <= 1, "value wider than 64 bits");
    u128::from(digits.first().copied().unwrap_or(0))
}

fn lg(a: &ExpG) -> u128 {
    big(&a.0)
}

fn lgt(a: &ExpGt) -> u128 {
    big(&a.0)
}

fn sc(s: &Scalar) -> u128 {
    big(s.value())
}

type P = Params<ExponentGroup>;

/// Digit, power and item tags against the master secret.
fn check_params(zp: &Zp, p: &P, msk: &MasterSecret) {
    let (x, y) = (sc(&msk.x), sc(&msk.y));
    let h = lg(&p.range_base);
    assert_eq!(lg(&p.ca_public_key), zp.mul(x, lg(&p.g)), "g~ = g^x");
    assert_eq!(lg(&p.range_tag_key), zp.mul(y, h), "h~ = h^y");
    for (i, tag) in p.digit_tags.iter().enumerate() {
        let key = zp.add(lg(&p.range_tag_key), zp.mul(h, i as u128));
        assert_eq!(zp.mul(lg(tag), key), zp.mul(h, h), "digit tag {i}");
        assert_eq!(zp.mul(lg(tag), zp.add(y, i as u128)), h, "digit tag {i} in exponents");
    }
    let q = u128::from(p.universe.base());
    for (i, pb) in p.power_bases.iter().enumerate() {
        assert_eq!(lg(pb), zp.mul(h, zp.pow(q, i as u128)), "power base {i}");
    }
    let eta = lg(&p.item_tag_base);
    for (i, set) in p.universe.sets().iter().enumerate() {
        let base = lg(&p.set_bases[i]);
        assert_eq!(lg(&p.set_public_keys[i]), zp.mul(base, sc(&msk.set_keys[i])));
        for (item, tag) in set.items.iter().zip(&p.item_tags[i]) {
            let key = zp.add(lg(&p.set_public_keys[i]), zp.mul(base, zp.text(item)));
            assert_eq!(zp.mul(lg(tag), key), zp.mul(eta, base), "item tag {item}");
        }
    }
    let c = p.cache();
    let g = lg(&p.g);
    let rho = lg(&p.seller_key_base);
    assert_eq!(lgt(&c.g0_g), zp.mul(lg(&p.g0), g));
    assert_eq!(lgt(&c.g1_g), zp.mul(lg(&p.g1), g));
    assert_eq!(lgt(&c.user_key_g), zp.mul(lg(&p.user_key_base), g));
    assert_eq!(lgt(&c.cred_rand_g), zp.mul(lg(&p.cred_rand_base), g));
    assert_eq!(lgt(&c.blind_g), zp.mul(lg(&p.blinding_base), g));
    assert_eq!(lgt(&c.blind_ca), zp.mul(lg(&p.blinding_base), lg(&p.ca_public_key)));
    assert_eq!(lgt(&c.seller_key_g), zp.mul(rho, g));
    assert_eq!(lgt(&c.range_base_sq), zp.mul(h, h));
    assert_eq!(lgt(&c.g2_rho), zp.mul(lg(&p.g2), rho));
    assert_eq!(lgt(&c.g3_rho), zp.mul(lg(&p.g3), rho));
}

fn check_s1(zp: &Zp, p: &P, proof: &ProofS1<ExponentGroup>, x_s: u128) {
    let rho = lg(&p.seller_key_base);
    assert_eq!(lg(&proof.seller_key), zp.mul(rho, x_s));
    let commit = zp.lin(&[(rho, sc(&proof.s)), (lg(&proof.seller_key), sc(&proof.c))]);
    let c = zp.fs().g(lg(&proof.m)).g(lg(&proof.seller_key)).g(commit).finish();
    assert_eq!(c, sc(&proof.c), "seller registration challenge");
}

fn check_u1(zp: &Zp, p: &P, proof: &ProofU1<ExponentGroup>, x_u: u128) {
    let xi = lg(&p.user_key_base);
    let base = lg(&p.cred_rand_base);
    assert_eq!(lg(&proof.user_key), zp.mul(xi, x_u));
    let k = zp.lin(&[(xi, sc(&proof.s1)), (lg(&proof.user_key), sc(&proof.c1))]);
    let r = zp.lin(&[(base, sc(&proof.s2)), (lg(&proof.rand_commit), sc(&proof.c2))]);
    let m = lg(&proof.m);
    assert_eq!(zp.fs().g(m).g(lg(&proof.user_key)).g(k).finish(), sc(&proof.c1));
    assert_eq!(zp.fs().g(m).g(lg(&proof.rand_commit)).g(r).finish(), sc(&proof.c2));
}

/// Log of the element a credential signs.
fn credential_message(zp: &Zp, p: &P, vp: &str, key: u128, rand: u128, attrs: &UserAttributes) -> u128 {
    let mut terms = vec![
        (lg(&p.g0), 1),
        (lg(&p.g1), zp.text(vp)),
        (key, 1),
        (lg(&p.cred_rand_base), rand),
    ];
    for (r, base) in p.universe.ranges().iter().zip(&p.range_attr_bases) {
        let a = attrs.range_values.get(&r.name).map_or(0, |&v| zp.int(v));
        terms.push((lg(base), a));
    }
    for (s, base) in p.universe.sets().iter().zip(&p.set_bases) {
        let e = attrs.set_items.get(&s.name).map_or(0, |i| zp.text(i));
        terms.push((lg(base), e));
    }
    zp.lin(&terms)
}

/// `e(sigma, g~ g^c) = e(message, g)`.
fn check_credential(
    zp: &Zp,
    p: &P,
    cred: &CredentialIssue<ExponentGroup>,
    vp: &str,
    key: u128,
    rand: u128,
    attrs: &UserAttributes,
) {
    let g = lg(&p.g);
    let lhs = zp.mul(
        lg(&cred.sigma),
        zp.add(lg(&p.ca_public_key), zp.mul(g, sc(&cred.exponent))),
    );
    let rhs = zp.mul(credential_message(zp, p, vp, key, rand, attrs), g);
    assert_eq!(lhs, rhs, "credential equation");
}

/// `e(Q, g~) / (e(g0, g) e(g1, g)^H(VP))`.
fn cred_pairing(zp: &Zp, p: &P, blinded: u128, vp: &str) -> u128 {
    let g = lg(&p.g);
    let denom = zp.lin(&[(lg(&p.g0), g), (zp.mul(lg(&p.g1), g), zp.text(vp))]);
    zp.sub(zp.mul(blinded, lg(&p.ca_public_key)), denom)
}

fn check_s2(zp: &Zp, p: &P, proof: &ProofS2<ExponentGroup>) {
    let (g, blind) = (lg(&p.g), lg(&p.blinding_base));
    let m = lg(&proof.m);
    let q = lg(&proof.blinded_cred);
    let omega = lgt(&proof.cred_pairing);
    assert_eq!(omega, cred_pairing(zp, p, q, &proof.vp), "seller credential pairing");

    let [s1, s2] = proof.commit_responses.each_ref().map(sc);
    let c = sc(&proof.commit_challenge);
    let z = lg(&proof.commitment);
    let n = zp.lin(&[(g, s1), (blind, s2), (z, c)]);
    assert_eq!(zp.fs().g(m).g(z).g(n).finish(), c);

    let [s1, s2] = proof.scaled_responses.each_ref().map(sc);
    let c = sc(&proof.scaled_challenge);
    let gamma = lg(&proof.scaled_commitment);
    let n = zp.lin(&[(g, s1), (blind, s2), (gamma, c)]);
    assert_eq!(zp.fs().g(m).g(gamma).g(n).finish(), c);

    let [r1, r2, r3, r4, r5] = proof.cred_responses.each_ref().map(sc);
    let c = sc(&proof.cred_challenge);
    let n = zp.lin(&[
        (zp.mul(lg(&p.seller_key_base), g), r1),
        (zp.mul(lg(&p.cred_rand_base), g), r2),
        (zp.mul(q, g), zp.sub(0, r3)),
        (zp.mul(blind, g), r4),
        (zp.mul(blind, lg(&p.ca_public_key)), r5),
        (omega, c),
    ]);
    assert_eq!(zp.fs().g(m).gt(omega).gt(n).finish(), c);
}

/// `Omega` against the seller's secrets, with `z` read off `Q = sigma blind^z`.
fn check_s2_witness(
    zp: &Zp,
    p: &P,
    proof: &ProofS2<ExponentGroup>,
    x_s: u128,
    sigma: u128,
    cred_exp: u128,
    cred_rand: u128,
) {
    let (g, blind) = (lg(&p.g), lg(&p.blinding_base));
    let q = lg(&proof.blinded_cred);
    let z = zp.mul(zp.sub(q, sigma), zp.inv(blind));
    let expected = zp.lin(&[
        (zp.mul(lg(&p.seller_key_base), g), x_s),
        (zp.mul(lg(&p.cred_rand_base), g), cred_rand),
        (zp.mul(q, g), zp.sub(0, cred_exp)),
        (zp.mul(blind, g), zp.mul(z, cred_exp)),
        (zp.mul(blind, lg(&p.ca_public_key)), z),
    ]);
    assert_eq!(lgt(&proof.cred_pairing), expected, "seller credential relation");
}

fn check_u2(zp: &Zp, p: &P, proof: &ProofU2<ExponentGroup>) {
    let (g, blind, h) = (lg(&p.g), lg(&p.blinding_base), lg(&p.range_base));
    let u = &p.universe;
    let c = sc(&proof.challenge);
    let m = lg(&proof.m);
    let cb = lg(&proof.blinded_cred);
    let omega = lgt(&proof.cred_pairing);
    assert_eq!(omega, cred_pairing(zp, p, cb, &proof.vp), "user credential pairing");

    let ranges: Vec<usize> = (0..u.ranges().len())
        .filter(|&i| proof.requested.contains(&u.ranges()[i].name))
        .collect();
    let sets: Vec<usize> = (0..u.sets().len())
        .filter(|&i| proof.requested.contains(&u.sets()[i].name))
        .collect();
    assert_eq!(proof.ranges.len(), ranges.len());
    assert_eq!(proof.sets.len(), sets.len());

    let y = lg(&proof.ticket_key);
    let key_commit = zp.lin(&[
        (lg(&p.user_key_base), sc(&proof.key_response)),
        (lg(&p.g1), sc(&proof.tweak_response)),
        (y, c),
    ]);
    let [ar, br] = proof.commit_responses.each_ref().map(sc);
    let [ar_s, br_s] = proof.scaled_responses.each_ref().map(sc);
    let d = lg(&proof.commitment);
    let phi = lg(&proof.scaled_commitment);
    let commit_nonce = zp.lin(&[(g, ar), (blind, br), (d, c)]);
    let scaled_nonce = zp.lin(&[(g, ar_s), (blind, br_s), (phi, c)]);
    let mut terms = vec![
        (zp.mul(lg(&p.user_key_base), g), sc(&proof.key_response)),
        (zp.mul(lg(&p.cred_rand_base), g), sc(&proof.rand_response)),
        (zp.mul(cb, g), zp.sub(0, sc(&proof.exponent_response))),
        (zp.mul(blind, g), ar_s),
        (zp.mul(blind, lg(&p.ca_public_key)), ar),
        (omega, c),
    ];
    for (base, r) in p.range_attr_bases.iter().zip(&proof.attr_responses) {
        terms.push((zp.mul(lg(base), g), sc(r)));
    }
    for (base, r) in p.set_bases.iter().zip(&proof.item_responses) {
        terms.push((zp.mul(lg(base), g), sc(r)));
    }
    let cred_nonce = zp.lin(&terms);

    let mut fs = zp
        .fs()
        .g(m)
        .g(y)
        .g(key_commit)
        .g(d)
        .g(commit_nonce)
        .g(phi)
        .g(scaled_nonce)
        .g(cb)
        .gt(omega)
        .gt(cred_nonce);
    for r in &proof.ranges {
        fs = fs.g(lg(&r.commitment));
    }
    for (r, &l) in proof.ranges.iter().zip(&ranges) {
        fs = fs.g(zp.lin(&[
            (g, sc(&r.blinding_response)),
            (h, sc(&proof.attr_responses[l])),
            (lg(&r.commitment), c),
        ]));
    }
    for s in &proof.sets {
        fs = fs.g(lg(&s.tag));
    }
    for (s, &i) in proof.sets.iter().zip(&sets) {
        let w = zp.mul(lg(&s.tag), lg(&p.set_public_keys[i]));
        assert_eq!(lgt(&s.pairing), w, "set pairing W = e(B, eta~)");
        fs = fs.gt(w);
    }
    let eta = lg(&p.item_tag_base);
    for (s, &i) in proof.sets.iter().zip(&sets) {
        let base = lg(&p.set_bases[i]);
        fs = fs.gt(zp.lin(&[
            (zp.mul(eta, base), sc(&s.response)),
            (zp.mul(lg(&s.tag), base), zp.sub(0, sc(&proof.item_responses[i]))),
            (lgt(&s.pairing), c),
        ]));
    }
    assert_eq!(fs.finish(), c, "ticket request master challenge");

    let q = u128::from(u.base());
    let span = zp.pow(q, u128::from(u.width()));
    let hh = zp.mul(h, h);
    for (r, &l) in proof.ranges.iter().zip(&ranges) {
        let policy = &u.ranges()[l];
        let e = sc(&r.challenge);
        let z = lg(&r.commitment);
        let low = zp.sub(z, zp.mul(h, zp.int(policy.lower)));
        let high = zp.add(z, zp.mul(h, zp.sub(span, zp.int(policy.upper))));
        let gr = sc(&r.shift_blinding_response);
        let shift = zp.lin(&[(g, gr), (h, sc(&r.low_response)), (low, e)]);
        let shift_high = zp.lin(&[(g, gr), (h, sc(&r.high_response)), (high, e)]);
        assert_eq!(shift, shift_high, "both shifted values share one commitment");
        let digits = |pick: &dyn Fn(usize) -> u128, target: u128| {
            let mut terms = vec![(g, gr), (target, e)];
            for (i, pb) in p.power_bases.iter().enumerate() {
                terms.push((lg(pb), pick(i)));
            }
            zp.lin(&terms)
        };
        let low_commit = digits(&|i| sc(&r.digits[i].low_response), low);
        let high_commit = digits(&|i| sc(&r.digits[i].high_response), high);
        let expected = zp.fs().g(m).g(z).g(shift).g(low_commit).g(high_commit).finish();
        assert_eq!(expected, e, "range challenge for {}", policy.name);

        for dp in &r.digits {
            let (a, a2) = (lg(&dp.tag), lg(&dp.shifted_tag));
            let v = zp.mul(a, lg(&p.range_tag_key));
            let v2 = zp.mul(a2, lg(&p.range_tag_key));
            assert_eq!(lgt(&dp.pairing), v, "digit pairing V = e(A, h~)");
            assert_eq!(lgt(&dp.shifted_pairing), v2);
            let dc = sc(&dp.challenge);
            let vc = zp.lin(&[
                (hh, sc(&dp.tag_response)),
                (zp.mul(a, h), zp.sub(0, sc(&dp.tag_digit_response))),
                (v, dc),
            ]);
            let vc2 = zp.lin(&[
                (hh, sc(&dp.shifted_tag_response)),
                (zp.mul(a2, h), zp.sub(0, sc(&dp.shifted_digit_response))),
                (v2, dc),
            ]);
            assert_eq!(vc, lgt(&dp.pairing_commit));
            assert_eq!(vc2, lgt(&dp.shifted_pairing_commit));
            let expected = zp.fs().g(m).g(a).g(a2).gt(v).gt(v2).gt(vc).gt(vc2).finish();
            assert_eq!(expected, dc, "digit challenge");
        }
    }
}

/// `e(T, Y_S rho^omega) = e(g0 Y_U g1^d g2^s g3^psi, rho)`.
fn check_ticket(zp: &Zp, p: &P, t: &Ticket<ExponentGroup>, x_u: u128, x_s: u128) {
    let rho = lg(&p.seller_key_base);
    let y_u = zp.mul(lg(&p.user_key_base), x_u);
    let y_s = zp.mul(rho, x_s);
    assert_eq!(lg(&t.seller_key), y_s);
    let lhs = zp.mul(lg(&t.sigma), zp.add(y_s, zp.mul(rho, sc(&t.key_offset))));
    let msg = zp.lin(&[
        (lg(&p.g0), 1),
        (y_u, 1),
        (lg(&p.g1), sc(&t.tweak)),
        (lg(&p.g2), sc(&t.serial)),
        (lg(&p.g3), sc(&t.policy_hash)),
    ]);
    assert_eq!(lhs, zp.mul(msg, rho), "ticket equation");
    assert_eq!(
        sc(&t.policy_hash),
        zp.policy_hash(&t.requested, &t.price, &t.serv, &t.vp),
        "policy hash"
    );
    assert_eq!(
        lg(&t.pseudonym),
        zp.lin(&[(lg(&p.user_key_base), x_u), (lg(&p.g1), sc(&t.tweak))]),
        "pseudonym"
    );
}

fn check_u3(zp: &Zp, p: &P, proof: &ProofU3<ExponentGroup>, psi: u128, y_s: u128, nonce: u128, verifier_id: &str) {
    let (g, blind, xi, rho) = (
        lg(&p.g),
        lg(&p.blinding_base),
        lg(&p.user_key_base),
        lg(&p.seller_key_base),
    );
    let f = lg(&proof.blinded_ticket);
    let ps = lg(&proof.pseudonym);
    let pairing = zp.sub(
        zp.mul(f, y_s),
        zp.lin(&[(lg(&p.g0), rho), (ps, rho), (zp.mul(lg(&p.g3), rho), psi)]),
    );
    assert_eq!(lgt(&proof.ticket_pairing), pairing, "ticket pairing");
    assert_eq!(sc(&proof.tag_response), zp.mul(nonce, sc(&proof.serial_response)));

    let c = sc(&proof.challenge);
    let base = zp.text(verifier_id);
    let d = lg(&proof.serial_commit);
    let e = lg(&proof.spend_tag);
    let j = lg(&proof.blinding_commit);
    let j2 = lg(&proof.scaled_blinding_commit);
    let n_d = zp.lin(&[(g, sc(&proof.serial_response)), (d, c)]);
    let n_ps = zp.lin(&[
        (xi, sc(&proof.key_response)),
        (lg(&p.g1), sc(&proof.tweak_response)),
        (ps, c),
    ]);
    let n_e = zp.lin(&[(xi, sc(&proof.key_response)), (base, sc(&proof.tag_response)), (e, c)]);
    let n_j = zp.lin(&[
        (g, sc(&proof.blind_response)),
        (blind, sc(&proof.lambda_response)),
        (j, c),
    ]);
    let n_j2 = zp.lin(&[(j, sc(&proof.offset_response)), (j2, c)]);
    let n_r = zp.lin(&[
        (zp.mul(lg(&p.g2), rho), sc(&proof.serial_response)),
        (zp.mul(f, rho), zp.sub(0, sc(&proof.offset_response))),
        (zp.mul(blind, rho), sc(&proof.scaled_blind_response)),
        (zp.mul(blind, y_s), sc(&proof.blind_response)),
        (pairing, c),
    ]);
    let expected = zp
        .fs()
        .g(lg(&proof.m))
        .g(d)
        .g(ps)
        .g(e)
        .g(j)
        .g(j2)
        .gt(pairing)
        .g(n_d)
        .g(n_ps)
        .g(n_e)
        .g(n_j)
        .g(n_j2)
        .gt(n_r)
        .finish();
    assert_eq!(expected, c, "validation challenge");
}

fn run(p: u64, universe: PolicyUniverse, attrs: UserAttributes, requested: SatisfiedPolicies, seed: u64) {
    let zp = Zp::new(p);
    let grp = ExponentGroup::new(p).unwrap();
    let mut w = World::new(grp, universe, attrs.clone(), seed);
    let params = w.params.clone();
    let x_s = sc(w.seller.secret());
    let x_u = sc(w.user.secret());

    check_params(&zp, &params, w.ca.master_secret());
    check_s1(&zp, &params, &w.seller_reg.proof, x_s);
    check_u1(&zp, &params, &w.user_reg.proof, x_u);

    let y_s = lg(w.seller.public_key());
    let y_u = lg(w.user.public_key());
    check_credential(
        &zp,
        &params,
        &w.seller_cred,
        common::CREDENTIAL_VP,
        y_s,
        sc(&w.seller_cred.randomness),
        &UserAttributes::default(),
    );
    let user_rand = sc(w.user.randomness());
    assert_eq!(
        user_rand,
        zp.add(
            zp.mul(lg(&w.user_reg.proof.rand_commit), zp.inv(lg(&params.cred_rand_base))),
            sc(&w.user_cred.randomness)
        ),
        "r_u = r + r'"
    );
    check_credential(
        &zp,
        &params,
        &w.user_cred,
        common::CREDENTIAL_VP,
        y_u,
        user_rand,
        &attrs,
    );

    let issued = w.issue(&requested);
    check_s2(&zp, &params, &issued.auth.proof);
    let seller_cred = w.seller.credential().unwrap();
    check_s2_witness(
        &zp,
        &params,
        &issued.auth.proof,
        x_s,
        lg(&seller_cred.sigma),
        sc(&seller_cred.exponent),
        sc(&seller_cred.randomness),
    );
    check_u2(&zp, &params, &issued.request.proof);
    check_ticket(&zp, &params, &issued.ticket, x_u, x_s);
    // d_u = d + d': Ps_U - Y in exponents is g1 * d', Y itself is xi x_u + g1 d.
    let y = lg(&issued.request.proof.ticket_key);
    let d = zp.mul(
        zp.sub(y, zp.mul(lg(&params.user_key_base), x_u)),
        zp.inv(lg(&params.g1)),
    );
    assert_eq!(
        sc(&issued.ticket.tweak),
        zp.add(d, sc(&issued.issue.tweak)),
        "d_u = d + d'"
    );

    let psi = sc(&issued.ticket.policy_hash);
    let mut v1 = w.verifier("gate-1");
    let ch = v1.challenge().unwrap();
    let t1 = w.user.show_ticket(&issued.ticket, &ch).unwrap();
    check_u3(&zp, &params, &t1.proof, psi, y_s, sc(&ch.nonce), "gate-1");
    v1.validate(&t1, common::now()).unwrap();

    // A cheating user forgets the verifier table and shows the ticket again.
    w.user.clear_table();
    let ch2 = v1.challenge().unwrap();
    let t2 = w.user.show_ticket(&issued.ticket, &ch2).unwrap();
    check_u3(&zp, &params, &t2.proof, psi, y_s, sc(&ch2.nonce), "gate-1");
    v1.validate(&t2, common::now()).unwrap();

    // E = xi x_u + H'(ID_V) r s, so (r' E - r E') / (r' - r) = xi x_u.
    let entries = v1.table().entries();
    let hits = detect_double_spend(v1.table());
    assert_eq!(hits.len(), 1);
    let (a, b): (&VerifierEntry<_>, &VerifierEntry<_>) = (&entries[hits[0].first], &entries[hits[0].second]);
    let (r, r2) = (sc(&a.nonce), sc(&b.nonce));
    let expected = zp.mul(
        zp.sub(zp.mul(lg(&a.spend_tag), r2), zp.mul(lg(&b.spend_tag), r)),
        zp.inv(zp.sub(r2, r)),
    );
    assert_eq!(expected, y_u);
    let recovered = deanonymize(&params, a, b).unwrap();
    assert_eq!(lg(&recovered), y_u, "deanonymize");
}

pub fn full_protocol_matches_oracle_mod_101() {
    for seed in 0..8 {
        run(P101, universe(), attrs(), all_policies(), seed);
    }
}

pub fn full_protocol_matches_oracle_mod_64_bit_prime() {
    for seed in 0..4 {
        run(P64, universe(), attrs(), all_policies(), seed);
    }
}

pub fn partial_requests_match_oracle() {
    let requested = SatisfiedPolicies::new(["trips", "zone"]);
    run(P64, universe(), attrs(), requested, 11);
    run(P101, universe(), attrs(), SatisfiedPolicies::new(["age"]), 12);
}

pub fn base_four_digits_match_oracle() {
    let u = PolicyUniverse::new(
        vec![RangePolicy::new("income", -500, 70_000)],
        vec![SetPolicy::new("zone", &["A", "B"])],
        4,
    )
    .unwrap();
    let a = UserAttributes::default()
        .with_value("income", 31_337)
        .with_item("zone", "A");
    run(P64, u, a, SatisfiedPolicies::new(["income", "zone"]), 5);
}

pub fn no_set_policies() {
    let u = PolicyUniverse::new(vec![RangePolicy::new("age", 0, 30)], vec![], 2).unwrap();
    let a = UserAttributes::default().with_value("age", 29);
    run(P101, u.clone(), a.clone(), SatisfiedPolicies::new(["age"]), 3);
    run(P64, u, a, SatisfiedPolicies::new(["age"]), 3);
}

pub fn oracle_catches_a_wrong_response() {
    let zp = Zp::new(P64);
    let grp = ExponentGroup::new(P64).unwrap();
    let mut w = World::new(grp, universe(), attrs(), 99);
    let params = w.params.clone();
    let mut proof = w.issue(&all_policies()).request.proof;
    let f = params.grp.scalars();
    proof.key_response = f.add(&proof.key_response, &f.one());
    let caught = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| check_u2(&zp, &params, &proof)));
    assert!(caught.is_err());
}

#[cfg(test)]
mod tests {
    #[test]
    fn full_protocol_matches_oracle_mod_101() {
        super::full_protocol_matches_oracle_mod_101();
    }

    #[test]
    fn full_protocol_matches_oracle_mod_64_bit_prime() {
        super::full_protocol_matches_oracle_mod_64_bit_prime();
    }

    #[test]
    fn partial_requests_match_oracle() {
        super::partial_requests_match_oracle();
    }

    #[test]
    fn base_four_digits_match_oracle() {
        super::base_four_digits_match_oracle();
    }

    #[test]
    fn no_set_policies() {
        super::no_set_policies();
    }

    #[test]
    fn oracle_catches_a_wrong_response() {
        super::oracle_catches_a_wrong_response();
    }
}
