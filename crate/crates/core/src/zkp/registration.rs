//! Key-possession proofs sent to the authority at registration.

use eticket_groups::{PairingGroup, Scalar};
use rand::RngCore;

use super::challenge::Challenge;
use crate::params::Params;

/// Seller's proof of knowledge of `x_s` with `Y_S = rho^x_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofS1<B: PairingGroup> {
    pub c: Scalar,
    pub s: Scalar,
    pub m: B::G,
    pub seller_key: B::G,
}

pub fn prove_s1<B: PairingGroup, R: RngCore + ?Sized>(params: &Params<B>, x_s: &Scalar, rng: &mut R) -> ProofS1<B> {
    let grp = &params.grp;
    let rho = &params.seller_key_base;
    let seller_key = grp.exp(rho, x_s);
    let t = grp.random_scalar(rng);
    let m = grp.random_element(rng);
    let commit = grp.exp(rho, &t);
    let c = Challenge::new(grp).g(&m).g(&seller_key).g(&commit).finish();
    let s = grp.scalars().respond(&t, &c, x_s);
    ProofS1 { c, s, m, seller_key }
}

pub fn verify_s1<B: PairingGroup>(params: &Params<B>, proof: &ProofS1<B>) -> bool {
    let grp = &params.grp;
    let commit = grp.product(&[(&params.seller_key_base, &proof.s), (&proof.seller_key, &proof.c)]);
    proof.c == Challenge::new(grp).g(&proof.m).g(&proof.seller_key).g(&commit).finish()
}

/// User's proof of knowledge of `x_u` and `r` with `Y_U = xi^x_u` and
/// `R = cred_rand^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofU1<B: PairingGroup> {
    pub m: B::G,
    pub user_key: B::G,
    pub rand_commit: B::G,
    pub c1: Scalar,
    pub c2: Scalar,
    pub s1: Scalar,
    pub s2: Scalar,
}

pub fn prove_u1<B: PairingGroup, R: RngCore + ?Sized>(
    params: &Params<B>,
    x_u: &Scalar,
    r: &Scalar,
    rng: &mut R,
) -> ProofU1<B> {
    let grp = &params.grp;
    let f = grp.scalars();
    let user_key = grp.exp(&params.user_key_base, x_u);
    let rand_commit = grp.exp(&params.cred_rand_base, r);
    let x_nonce = grp.random_scalar(rng);
    let r_nonce = grp.random_scalar(rng);
    let m = grp.random_element(rng);
    let key_commit = grp.exp(&params.user_key_base, &x_nonce);
    let rand_nonce_commit = grp.exp(&params.cred_rand_base, &r_nonce);
    let c1 = Challenge::new(grp).g(&m).g(&user_key).g(&key_commit).finish();
    let c2 = Challenge::new(grp).g(&m).g(&rand_commit).g(&rand_nonce_commit).finish();
    ProofU1 {
        s1: f.respond(&x_nonce, &c1, x_u),
        s2: f.respond(&r_nonce, &c2, r),
        m,
        user_key,
        rand_commit,
        c1,
        c2,
    }
}

pub fn verify_u1<B: PairingGroup>(params: &Params<B>, proof: &ProofU1<B>) -> bool {
    let grp = &params.grp;
    let key_commit = grp.product(&[(&params.user_key_base, &proof.s1), (&proof.user_key, &proof.c1)]);
    let rand_commit = grp.product(&[(&params.cred_rand_base, &proof.s2), (&proof.rand_commit, &proof.c2)]);
    proof.c1
        == Challenge::new(grp)
            .g(&proof.m)
            .g(&proof.user_key)
            .g(&key_commit)
            .finish()
        && proof.c2
            == Challenge::new(grp)
                .g(&proof.m)
                .g(&proof.rand_commit)
                .g(&rand_commit)
                .finish()
}
