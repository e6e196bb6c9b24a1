//! The user's ticket request proof: possession of a valid credential,
//! knowledge of the key inside the ticket pseudonym, membership of each
//! requested range (two base-q digit decompositions backed by digit tags)
//! and of each requested set (an item tag under the set key).

use eticket_groups::{PairingGroup, Scalar};
use rand::RngCore;

use super::challenge::Challenge;
use super::seller_auth::credential_pairing;
use super::ZkpError;
use crate::params::{Credential, Params};
use crate::policy::{satisfies, SatisfiedPolicies, UserAttributes};

/// Proof that one digit of each decomposition carries a digit tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitProof<B: PairingGroup> {
    /// `A = h_w^t`
    pub tag: B::G,
    /// `A' = h_w'^t'`
    pub shifted_tag: B::G,
    /// `V = e(h,h)^t e(A,h)^-w`
    pub pairing: B::Gt,
    pub pairing_commit: B::Gt,
    pub shifted_pairing: B::Gt,
    pub shifted_pairing_commit: B::Gt,
    pub challenge: Scalar,
    /// Digit responses under the range challenge.
    pub low_response: Scalar,
    pub high_response: Scalar,
    /// Digit responses under this digit's challenge.
    pub tag_digit_response: Scalar,
    pub shifted_digit_response: Scalar,
    pub tag_response: Scalar,
    pub shifted_tag_response: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeProof<B: PairingGroup> {
    /// `Z = g^gamma h^a`
    pub commitment: B::G,
    /// Response for `gamma` under the master challenge.
    pub blinding_response: Scalar,
    pub challenge: Scalar,
    /// Response for `gamma` under the range challenge.
    pub shift_blinding_response: Scalar,
    /// Response for `a - c`.
    pub low_response: Scalar,
    /// Response for `a - d + q^k`.
    pub high_response: Scalar,
    pub digits: Vec<DigitProof<B>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetProof<B: PairingGroup> {
    /// `B = eta_ij^e`
    pub tag: B::G,
    /// `W = e(B, eta~_i)`
    pub pairing: B::Gt,
    pub response: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofU2<B: PairingGroup> {
    pub m: B::G,
    /// `C = sigma_U blind^alpha`
    pub blinded_cred: B::G,
    /// `D = g^alpha blind^beta`
    pub commitment: B::G,
    /// `Phi = D^c_u`
    pub scaled_commitment: B::G,
    /// `Y = xi^x_u g1^d`, signed into the ticket.
    pub ticket_key: B::G,
    pub cred_pairing: B::Gt,
    pub challenge: Scalar,
    pub key_response: Scalar,
    pub tweak_response: Scalar,
    pub rand_response: Scalar,
    pub exponent_response: Scalar,
    pub commit_responses: [Scalar; 2],
    pub scaled_responses: [Scalar; 2],
    /// One per range policy in the universe.
    pub attr_responses: Vec<Scalar>,
    /// One per set policy in the universe.
    pub item_responses: Vec<Scalar>,
    /// Requested ranges, in universe order.
    pub ranges: Vec<RangeProof<B>>,
    /// Requested sets, in universe order.
    pub sets: Vec<SetProof<B>>,
    pub vp: String,
    pub requested: SatisfiedPolicies,
}

/// Builds the proof; also returns `d`, which the user adds to the seller's
/// tweak to obtain the ticket's `d_u`.
pub fn prove_u2<B: PairingGroup, R: RngCore + ?Sized>(
    params: &Params<B>,
    cred: &Credential<B>,
    x_u: &Scalar,
    attrs: &UserAttributes,
    requested: &SatisfiedPolicies,
    rng: &mut R,
) -> Result<(ProofU2<B>, Scalar), ZkpError> {
    let witness = satisfies(attrs, &params.universe, requested)?;
    let grp = &params.grp;
    let f = grp.scalars();
    let cache = params.cache();
    let (g, blind, h) = (&params.g, &params.blinding_base, &params.range_base);
    let universe = &params.universe;
    let (attr_exps, item_exps) = params.credential_exponents(attrs);
    let span = f.from_i128(universe.span() as i128);
    let m = grp.random_element(rng);
    let mut rand = || grp.random_scalar(rng);

    let d = rand();
    let alpha = rand();
    let beta = rand();
    let alpha_s = f.mul(&alpha, &cred.exponent);
    let beta_s = f.mul(&beta, &cred.exponent);
    let blinded_cred = grp.op(&cred.sigma, &grp.exp(blind, &alpha));
    let commitment = grp.product(&[(g, &alpha), (blind, &beta)]);
    let scaled_commitment = grp.product(&[(g, &alpha_s), (blind, &beta_s)]);
    let ticket_key = grp.product(&[(&params.user_key_base, x_u), (&params.g1, &d)]);
    let cred_pairing = credential_pairing(params, &blinded_cred, &cred.vp);

    let (xn, dn, rn, cun, an, bn, cn) = (rand(), rand(), rand(), rand(), rand(), rand(), rand());
    let attr_nonces: Vec<_> = attr_exps.iter().map(|_| rand()).collect();
    let item_nonces: Vec<_> = item_exps.iter().map(|_| rand()).collect();
    let key_commit = grp.product(&[(&params.user_key_base, &xn), (&params.g1, &dn)]);
    let commit_nonce = grp.product(&[(g, &an), (blind, &bn)]);
    let (an_s, bn_s) = (f.mul(&cn, &alpha), f.mul(&cn, &beta));
    let scaled_nonce = grp.product(&[(g, &an_s), (blind, &bn_s)]);
    let c_g = grp.pair(&blinded_cred, g);
    let neg_cun = f.neg(&cun);
    let mut terms = vec![
        (&cache.user_key_g, &xn),
        (&cache.cred_rand_g, &rn),
        (&c_g, &neg_cun),
        (&cache.blind_g, &an_s),
        (&cache.blind_ca, &an),
    ];
    terms.extend(cache.range_attr_g.iter().zip(&attr_nonces));
    terms.extend(cache.set_base_g.iter().zip(&item_nonces));
    let cred_nonce = grp.gt_product(&terms);

    // Commitments to the requested range attributes.
    struct RangeState<B: PairingGroup> {
        gamma: Scalar,
        gamma_nonce: Scalar,
        commitment: B::G,
        commit_nonce: B::G,
    }
    let range_states: Vec<RangeState<B>> = witness
        .ranges
        .iter()
        .map(|w| {
            let gamma = rand();
            let gamma_nonce = rand();
            let a = &attr_exps[w.index];
            RangeState {
                commitment: grp.product(&[(g, &gamma), (h, a)]),
                commit_nonce: grp.product(&[(g, &gamma_nonce), (h, &attr_nonces[w.index])]),
                gamma,
                gamma_nonce,
            }
        })
        .collect();

    // Item tags for the requested sets.
    struct SetState<B: PairingGroup> {
        blind: Scalar,
        nonce: Scalar,
        tag: B::G,
        pairing: B::Gt,
        commit: B::Gt,
    }
    let set_states: Vec<SetState<B>> = witness
        .sets
        .iter()
        .map(|w| {
            let i = w.index;
            let j = universe.sets()[i].position(&w.item).expect("checked by satisfies");
            let e = rand();
            let nonce = rand();
            let tag = grp.exp(&params.item_tags[i][j], &e);
            let tag_base = grp.pair(&tag, &params.set_bases[i]);
            SetState {
                pairing: grp.pair(&tag, &params.set_public_keys[i]),
                commit: grp.gt_product(&[(&cache.item_base_set[i], &nonce), (&tag_base, &f.neg(&item_nonces[i]))]),
                tag,
                blind: e,
                nonce,
            }
        })
        .collect();

    let challenge = Challenge::new(grp)
        .g(&m)
        .g(&ticket_key)
        .g(&key_commit)
        .g(&commitment)
        .g(&commit_nonce)
        .g(&scaled_commitment)
        .g(&scaled_nonce)
        .g(&blinded_cred)
        .gt(&cred_pairing)
        .gt(&cred_nonce)
        .gs(range_states.iter().map(|s| &s.commitment))
        .gs(range_states.iter().map(|s| &s.commit_nonce))
        .gs(set_states.iter().map(|s| &s.tag))
        .gts(set_states.iter().map(|s| &s.pairing))
        .gts(set_states.iter().map(|s| &s.commit))
        .finish();

    let mut ranges = Vec::with_capacity(witness.ranges.len());
    for (w, state) in witness.ranges.iter().zip(&range_states) {
        let policy = &universe.ranges()[w.index];
        let a = &attr_exps[w.index];
        let low = f.sub(a, &f.from_i64(policy.lower));
        let high = f.add(&f.sub(a, &f.from_i64(policy.upper)), &span);

        let (gn, sn) = (rand(), rand());
        let low_nonces: Vec<_> = w.low_digits.iter().map(|_| rand()).collect();
        let high_nonces: Vec<_> = w.high_digits.iter().map(|_| rand()).collect();
        let shift_commit = grp.product(&[(g, &gn), (h, &sn)]);
        let digit_commit = |nonces: &[Scalar]| {
            let mut terms = vec![(g, &gn)];
            terms.extend(params.power_bases.iter().zip(nonces));
            grp.product(&terms)
        };
        let low_commit = digit_commit(&low_nonces);
        let high_commit = digit_commit(&high_nonces);
        let range_challenge = Challenge::new(grp)
            .g(&m)
            .g(&state.commitment)
            .g(&shift_commit)
            .g(&low_commit)
            .g(&high_commit)
            .finish();

        let mut digits = Vec::with_capacity(w.low_digits.len());
        for i in 0..w.low_digits.len() {
            let (wl, wh) = (w.low_digits[i] as usize, w.high_digits[i] as usize);
            let (wl_s, wh_s) = (f.from_u64(wl as u64), f.from_u64(wh as u64));
            let (t, t2) = (rand(), rand());
            let (tn, tn2, wn, wn2) = (rand(), rand(), rand(), rand());
            let tag = grp.exp(&params.digit_tags[wl], &t);
            let shifted_tag = grp.exp(&params.digit_tags[wh], &t2);
            let tag_h = grp.gt_exp(&cache.digit_tag_h[wl], &t);
            let shifted_h = grp.gt_exp(&cache.digit_tag_h[wh], &t2);
            let hh = &cache.range_base_sq;
            let pairing = grp.gt_product(&[(hh, &t), (&tag_h, &f.neg(&wl_s))]);
            let shifted_pairing = grp.gt_product(&[(hh, &t2), (&shifted_h, &f.neg(&wh_s))]);
            let pairing_commit = grp.gt_product(&[(hh, &tn), (&tag_h, &f.neg(&wn))]);
            let shifted_pairing_commit = grp.gt_product(&[(hh, &tn2), (&shifted_h, &f.neg(&wn2))]);
            let dc = Challenge::new(grp)
                .g(&m)
                .g(&tag)
                .g(&shifted_tag)
                .gt(&pairing)
                .gt(&shifted_pairing)
                .gt(&pairing_commit)
                .gt(&shifted_pairing_commit)
                .finish();
            digits.push(DigitProof {
                tag,
                shifted_tag,
                pairing,
                pairing_commit,
                shifted_pairing,
                shifted_pairing_commit,
                low_response: f.respond(&low_nonces[i], &range_challenge, &wl_s),
                high_response: f.respond(&high_nonces[i], &range_challenge, &wh_s),
                tag_digit_response: f.respond(&wn, &dc, &wl_s),
                shifted_digit_response: f.respond(&wn2, &dc, &wh_s),
                tag_response: f.respond(&tn, &dc, &t),
                shifted_tag_response: f.respond(&tn2, &dc, &t2),
                challenge: dc,
            });
        }

        ranges.push(RangeProof {
            commitment: state.commitment.clone(),
            blinding_response: f.respond(&state.gamma_nonce, &challenge, &state.gamma),
            shift_blinding_response: f.respond(&gn, &range_challenge, &state.gamma),
            low_response: f.respond(&sn, &range_challenge, &low),
            high_response: f.respond(&sn, &range_challenge, &high),
            challenge: range_challenge,
            digits,
        });
    }

    let sets = set_states
        .into_iter()
        .map(|s| SetProof {
            response: f.respond(&s.nonce, &challenge, &s.blind),
            tag: s.tag,
            pairing: s.pairing,
        })
        .collect();

    let proof = ProofU2 {
        m,
        blinded_cred,
        commitment,
        scaled_commitment,
        ticket_key,
        cred_pairing,
        key_response: f.respond(&xn, &challenge, x_u),
        tweak_response: f.respond(&dn, &challenge, &d),
        rand_response: f.respond(&rn, &challenge, &cred.randomness),
        exponent_response: f.respond(&cun, &challenge, &cred.exponent),
        commit_responses: [f.respond(&an, &challenge, &alpha), f.respond(&bn, &challenge, &beta)],
        scaled_responses: [
            f.respond(&an_s, &challenge, &alpha_s),
            f.respond(&bn_s, &challenge, &beta_s),
        ],
        attr_responses: attr_nonces
            .iter()
            .zip(&attr_exps)
            .map(|(n, a)| f.respond(n, &challenge, a))
            .collect(),
        item_responses: item_nonces
            .iter()
            .zip(&item_exps)
            .map(|(n, e)| f.respond(n, &challenge, e))
            .collect(),
        challenge,
        ranges,
        sets,
        vp: cred.vp.clone(),
        requested: requested.clone(),
    };
    Ok((proof, d))
}

fn shape_ok<B: PairingGroup>(params: &Params<B>, proof: &ProofU2<B>) -> bool {
    let universe = &params.universe;
    if universe.check_requested(&proof.requested).is_err() {
        return false;
    }
    let (range_idx, set_idx) = universe.requested_indices(&proof.requested);
    let k = universe.width() as usize;
    proof.attr_responses.len() == universe.ranges().len()
        && proof.item_responses.len() == universe.sets().len()
        && proof.ranges.len() == range_idx.len()
        && proof.sets.len() == set_idx.len()
        && proof.ranges.iter().all(|r| r.digits.len() == k)
}

pub fn verify_u2<B: PairingGroup>(params: &Params<B>, proof: &ProofU2<B>) -> bool {
    if !shape_ok(params, proof) {
        return false;
    }
    let grp = &params.grp;
    let f = grp.scalars();
    let cache = params.cache();
    let (g, blind, h) = (&params.g, &params.blinding_base, &params.range_base);
    let universe = &params.universe;
    let (range_idx, set_idx) = universe.requested_indices(&proof.requested);
    let c = &proof.challenge;

    if proof.cred_pairing != credential_pairing(params, &proof.blinded_cred, &proof.vp) {
        return false;
    }
    for (s, &i) in proof.sets.iter().zip(&set_idx) {
        if s.pairing != grp.pair(&s.tag, &params.set_public_keys[i]) {
            return false;
        }
    }

    let key_commit = grp.product(&[
        (&params.user_key_base, &proof.key_response),
        (&params.g1, &proof.tweak_response),
        (&proof.ticket_key, c),
    ]);
    let [ar, br] = &proof.commit_responses;
    let commit_nonce = grp.product(&[(g, ar), (blind, br), (&proof.commitment, c)]);
    let [ar_s, br_s] = &proof.scaled_responses;
    let scaled_nonce = grp.product(&[(g, ar_s), (blind, br_s), (&proof.scaled_commitment, c)]);
    let c_g = grp.pair(&proof.blinded_cred, g);
    let neg_cu = f.neg(&proof.exponent_response);
    let mut terms = vec![
        (&cache.user_key_g, &proof.key_response),
        (&cache.cred_rand_g, &proof.rand_response),
        (&c_g, &neg_cu),
        (&cache.blind_g, ar_s),
        (&cache.blind_ca, ar),
        (&proof.cred_pairing, c),
    ];
    terms.extend(cache.range_attr_g.iter().zip(&proof.attr_responses));
    terms.extend(cache.set_base_g.iter().zip(&proof.item_responses));
    let cred_nonce = grp.gt_product(&terms);

    let range_nonces: Vec<_> = proof
        .ranges
        .iter()
        .zip(&range_idx)
        .map(|(r, &l)| {
            grp.product(&[
                (g, &r.blinding_response),
                (h, &proof.attr_responses[l]),
                (&r.commitment, c),
            ])
        })
        .collect();
    let set_nonces: Vec<_> = proof
        .sets
        .iter()
        .zip(&set_idx)
        .map(|(s, &i)| {
            let tag_base = grp.pair(&s.tag, &params.set_bases[i]);
            grp.gt_product(&[
                (&cache.item_base_set[i], &s.response),
                (&tag_base, &f.neg(&proof.item_responses[i])),
                (&s.pairing, c),
            ])
        })
        .collect();

    let expected = Challenge::new(grp)
        .g(&proof.m)
        .g(&proof.ticket_key)
        .g(&key_commit)
        .g(&proof.commitment)
        .g(&commit_nonce)
        .g(&proof.scaled_commitment)
        .g(&scaled_nonce)
        .g(&proof.blinded_cred)
        .gt(&proof.cred_pairing)
        .gt(&cred_nonce)
        .gs(proof.ranges.iter().map(|r| &r.commitment))
        .gs(&range_nonces)
        .gs(proof.sets.iter().map(|s| &s.tag))
        .gts(proof.sets.iter().map(|s| &s.pairing))
        .gts(&set_nonces)
        .finish();
    if expected != *c {
        return false;
    }

    let span = f.from_i128(universe.span() as i128);
    proof
        .ranges
        .iter()
        .zip(&range_idx)
        .all(|(r, &l)| verify_range(params, &proof.m, r, l, &span))
}

fn verify_range<B: PairingGroup>(
    params: &Params<B>,
    m: &B::G,
    range: &RangeProof<B>,
    index: usize,
    span: &Scalar,
) -> bool {
    let grp = &params.grp;
    let f = grp.scalars();
    let (g, h) = (&params.g, &params.range_base);
    let policy = &params.universe.ranges()[index];
    let e = &range.challenge;

    // Z h^-c and Z h^-(d - q^k): commitments to both shifted values.
    let low = grp.op(&range.commitment, &grp.exp(h, &f.neg(&f.from_i64(policy.lower))));
    let high_shift = f.sub(span, &f.from_i64(policy.upper));
    let high = grp.op(&range.commitment, &grp.exp(h, &high_shift));

    let gr = &range.shift_blinding_response;
    let shift_commit = grp.product(&[(g, gr), (h, &range.low_response), (&low, e)]);
    let shift_commit_high = grp.product(&[(g, gr), (h, &range.high_response), (&high, e)]);
    if shift_commit != shift_commit_high {
        return false;
    }
    let digit_commit = |responses: Vec<&Scalar>, target: &B::G| {
        let mut terms = vec![(g, gr)];
        terms.extend(params.power_bases.iter().zip(responses));
        terms.push((target, e));
        grp.product(&terms)
    };
    let low_commit = digit_commit(range.digits.iter().map(|d| &d.low_response).collect(), &low);
    let high_commit = digit_commit(range.digits.iter().map(|d| &d.high_response).collect(), &high);
    let expected = Challenge::new(grp)
        .g(m)
        .g(&range.commitment)
        .g(&shift_commit)
        .g(&low_commit)
        .g(&high_commit)
        .finish();
    if expected != *e {
        return false;
    }
    range.digits.iter().all(|d| verify_digit(params, m, d))
}

fn verify_digit<B: PairingGroup>(params: &Params<B>, m: &B::G, d: &DigitProof<B>) -> bool {
    let grp = &params.grp;
    let f = grp.scalars();
    let h = &params.range_base;
    let hh = &params.cache().range_base_sq;
    if d.pairing != grp.pair(&d.tag, &params.range_tag_key)
        || d.shifted_pairing != grp.pair(&d.shifted_tag, &params.range_tag_key)
    {
        return false;
    }
    let tag_h = grp.pair(&d.tag, h);
    let shifted_h = grp.pair(&d.shifted_tag, h);
    let commit = grp.gt_product(&[
        (hh, &d.tag_response),
        (&tag_h, &f.neg(&d.tag_digit_response)),
        (&d.pairing, &d.challenge),
    ]);
    let shifted_commit = grp.gt_product(&[
        (hh, &d.shifted_tag_response),
        (&shifted_h, &f.neg(&d.shifted_digit_response)),
        (&d.shifted_pairing, &d.challenge),
    ]);
    if commit != d.pairing_commit || shifted_commit != d.shifted_pairing_commit {
        return false;
    }
    let expected = Challenge::new(grp)
        .g(m)
        .g(&d.tag)
        .g(&d.shifted_tag)
        .gt(&d.pairing)
        .gt(&d.shifted_pairing)
        .gt(&d.pairing_commit)
        .gt(&d.shifted_pairing_commit)
        .finish();
    expected == d.challenge
}
