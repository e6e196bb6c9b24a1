//! The seller's anonymous proof of holding a valid seller credential.

use eticket_groups::{PairingGroup, Scalar};
use rand::RngCore;

use super::challenge::Challenge;
use crate::params::{Credential, Params};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofS2<B: PairingGroup> {
    pub m: B::G,
    /// `Q = sigma_S * blind^z`
    pub blinded_cred: B::G,
    /// `Z = g^z blind^v`
    pub commitment: B::G,
    /// `Gamma = Z^c_s`
    pub scaled_commitment: B::G,
    /// `Omega = e(Q, g~) / (e(g0, g) e(g1, g)^H(VP_S))`
    pub cred_pairing: B::Gt,
    pub commit_challenge: Scalar,
    pub commit_responses: [Scalar; 2],
    pub scaled_challenge: Scalar,
    pub scaled_responses: [Scalar; 2],
    pub cred_challenge: Scalar,
    /// Responses for `x_s, r_s, c_s, z c_s, z`.
    pub cred_responses: [Scalar; 5],
    pub vp: String,
}

/// `e(Q, g~) / (e(g0, g) e(g1, g)^H(VP))`.
pub(crate) fn credential_pairing<B: PairingGroup>(params: &Params<B>, blinded: &B::G, vp: &str) -> B::Gt {
    let grp = &params.grp;
    let c = params.cache();
    let denom = grp.gt_op(&c.g0_g, &grp.gt_exp(&c.g1_g, &params.hash_text(vp)));
    grp.gt_div(&grp.pair(blinded, &params.ca_public_key), &denom)
}

pub fn prove_s2<B: PairingGroup, R: RngCore + ?Sized>(
    params: &Params<B>,
    cred: &Credential<B>,
    x_s: &Scalar,
    rng: &mut R,
) -> ProofS2<B> {
    let grp = &params.grp;
    let f = grp.scalars();
    let c = params.cache();
    let (g, blind) = (&params.g, &params.blinding_base);
    let mut rand = || grp.random_scalar(rng);

    let z = rand();
    let v = rand();
    let z_scaled = f.mul(&z, &cred.exponent);
    let v_scaled = f.mul(&v, &cred.exponent);
    let blinded_cred = grp.op(&cred.sigma, &grp.exp(blind, &z));
    let commitment = grp.product(&[(g, &z), (blind, &v)]);
    let scaled_commitment = grp.product(&[(g, &z_scaled), (blind, &v_scaled)]);
    let cred_pairing = credential_pairing(params, &blinded_cred, &cred.vp);

    // Each challenge gets its own nonces.
    let (z1, v1) = (rand(), rand());
    let (z2, v2) = (rand(), rand());
    let (xn, rn, cn, zsn, zn) = (rand(), rand(), rand(), rand(), rand());
    let m = grp.random_element(rng);

    let commit_nonce = grp.product(&[(g, &z1), (blind, &v1)]);
    let scaled_nonce = grp.product(&[(g, &z2), (blind, &v2)]);
    let q_g = grp.pair(&blinded_cred, g);
    let cred_nonce = grp.gt_product(&[
        (&c.seller_key_g, &xn),
        (&c.cred_rand_g, &rn),
        (&q_g, &f.neg(&cn)),
        (&c.blind_g, &zsn),
        (&c.blind_ca, &zn),
    ]);

    let commit_challenge = Challenge::new(grp).g(&m).g(&commitment).g(&commit_nonce).finish();
    let scaled_challenge = Challenge::new(grp)
        .g(&m)
        .g(&scaled_commitment)
        .g(&scaled_nonce)
        .finish();
    let cred_challenge = Challenge::new(grp).g(&m).gt(&cred_pairing).gt(&cred_nonce).finish();

    let commit_responses = [
        f.respond(&z1, &commit_challenge, &z),
        f.respond(&v1, &commit_challenge, &v),
    ];
    let scaled_responses = [
        f.respond(&z2, &scaled_challenge, &z_scaled),
        f.respond(&v2, &scaled_challenge, &v_scaled),
    ];
    let cred_responses = [
        f.respond(&xn, &cred_challenge, x_s),
        f.respond(&rn, &cred_challenge, &cred.randomness),
        f.respond(&cn, &cred_challenge, &cred.exponent),
        f.respond(&zsn, &cred_challenge, &z_scaled),
        f.respond(&zn, &cred_challenge, &z),
    ];

    ProofS2 {
        m,
        blinded_cred,
        commitment,
        scaled_commitment,
        cred_pairing,
        commit_challenge,
        commit_responses,
        scaled_challenge,
        scaled_responses,
        cred_challenge,
        cred_responses,
        vp: cred.vp.clone(),
    }
}

pub fn verify_s2<B: PairingGroup>(params: &Params<B>, proof: &ProofS2<B>) -> bool {
    let grp = &params.grp;
    let f = grp.scalars();
    let c = params.cache();
    let (g, blind) = (&params.g, &params.blinding_base);

    if proof.cred_pairing != credential_pairing(params, &proof.blinded_cred, &proof.vp) {
        return false;
    }

    let [s1, s2] = &proof.commit_responses;
    let commit_nonce = grp.product(&[(g, s1), (blind, s2), (&proof.commitment, &proof.commit_challenge)]);
    let expected = Challenge::new(grp)
        .g(&proof.m)
        .g(&proof.commitment)
        .g(&commit_nonce)
        .finish();
    if expected != proof.commit_challenge {
        return false;
    }

    let [s1, s2] = &proof.scaled_responses;
    let scaled_nonce = grp.product(&[
        (g, s1),
        (blind, s2),
        (&proof.scaled_commitment, &proof.scaled_challenge),
    ]);
    let expected = Challenge::new(grp)
        .g(&proof.m)
        .g(&proof.scaled_commitment)
        .g(&scaled_nonce)
        .finish();
    if expected != proof.scaled_challenge {
        return false;
    }

    let [r1, r2, r3, r4, r5] = &proof.cred_responses;
    let q_g = grp.pair(&proof.blinded_cred, g);
    let cred_nonce = grp.gt_product(&[
        (&c.seller_key_g, r1),
        (&c.cred_rand_g, r2),
        (&q_g, &f.neg(r3)),
        (&c.blind_g, r4),
        (&c.blind_ca, r5),
        (&proof.cred_pairing, &proof.cred_challenge),
    ]);
    let expected = Challenge::new(grp)
        .g(&proof.m)
        .gt(&proof.cred_pairing)
        .gt(&cred_nonce)
        .finish();
    expected == proof.cred_challenge
}
