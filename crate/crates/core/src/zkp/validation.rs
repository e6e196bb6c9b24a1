//! The user's ticket-showing proof at validation. It reveals the serial
//! commitment `D = g^s_u` and the double-spend tag
//! `E = xi^x_u H'(ID_V)^(r s_u)`, and proves possession of a ticket signed by
//! the seller over the same serial.

use eticket_groups::{PairingGroup, Scalar};
use rand::RngCore;

use super::challenge::Challenge;
use crate::params::Params;
use crate::ticket::Ticket;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofU3<B: PairingGroup> {
    pub m: B::G,
    /// `D = g^s_u`
    pub serial_commit: B::G,
    /// `Ps_U = xi^x_u g1^d_u`
    pub pseudonym: B::G,
    /// `E = xi^x_u H'(ID_V)^(r s_u)`
    pub spend_tag: B::G,
    /// `F = T_U blind^pi`
    pub blinded_ticket: B::G,
    /// `J = g^pi blind^lambda`
    pub blinding_commit: B::G,
    /// `J' = J^omega_u`
    pub scaled_blinding_commit: B::G,
    /// `e(F, Y_S) / (e(g0,rho) e(Ps_U,rho) e(g3,rho)^psi_u)`
    pub ticket_pairing: B::Gt,
    pub challenge: Scalar,
    pub serial_response: Scalar,
    pub key_response: Scalar,
    /// `r` times the serial nonce, less `c r s_u`.
    pub tag_response: Scalar,
    pub blind_response: Scalar,
    pub lambda_response: Scalar,
    pub offset_response: Scalar,
    pub scaled_blind_response: Scalar,
    pub tweak_response: Scalar,
}

fn ticket_pairing<B: PairingGroup>(
    params: &Params<B>,
    blinded_ticket: &B::G,
    pseudonym: &B::G,
    policy_hash: &Scalar,
    seller_key: &B::G,
) -> B::Gt {
    let grp = &params.grp;
    let c = params.cache();
    let denom = grp.gt_op(
        &grp.gt_op(&c.g0_rho, &grp.pair(pseudonym, &params.seller_key_base)),
        &grp.gt_exp(&c.g3_rho, policy_hash),
    );
    grp.gt_div(&grp.pair(blinded_ticket, seller_key), &denom)
}

pub fn prove_u3<B: PairingGroup, R: RngCore + ?Sized>(
    params: &Params<B>,
    ticket: &Ticket<B>,
    x_u: &Scalar,
    verifier_id: &str,
    nonce: &Scalar,
    rng: &mut R,
) -> ProofU3<B> {
    let pi = params.grp.random_scalar(rng);
    prove_u3_blinded(params, ticket, x_u, verifier_id, nonce, &pi, rng)
}

/// [`prove_u3`] with a caller-chosen ticket blinding exponent.
pub(crate) fn prove_u3_blinded<B: PairingGroup, R: RngCore + ?Sized>(
    params: &Params<B>,
    ticket: &Ticket<B>,
    x_u: &Scalar,
    verifier_id: &str,
    nonce: &Scalar,
    pi: &Scalar,
    rng: &mut R,
) -> ProofU3<B> {
    let grp = &params.grp;
    let f = grp.scalars();
    let c = params.cache();
    let (g, blind, xi, rho) = (
        &params.g,
        &params.blinding_base,
        &params.user_key_base,
        &params.seller_key_base,
    );
    let base = params.verifier_base(verifier_id);
    let seller_key = &ticket.seller_key;
    let m = grp.random_element(rng);
    let mut rand = || grp.random_scalar(rng);

    let lambda = rand();
    let s = &ticket.serial;
    let tag_exp = f.mul(nonce, s);
    let serial_commit = grp.exp(g, s);
    let pseudonym = grp.product(&[(xi, x_u), (&params.g1, &ticket.tweak)]);
    let spend_tag = grp.product(&[(xi, x_u), (&base, &tag_exp)]);
    let blinded_ticket = grp.op(&ticket.sigma, &grp.exp(blind, pi));
    let blinding_commit = grp.product(&[(g, pi), (blind, &lambda)]);
    let scaled_blinding_commit = grp.exp(&blinding_commit, &ticket.key_offset);
    let pairing = ticket_pairing(params, &blinded_ticket, &pseudonym, &ticket.policy_hash, seller_key);

    let (sn, xn, pn, ln, on, pn2, dn) = (rand(), rand(), rand(), rand(), rand(), rand(), rand());
    let tag_nonce = f.mul(nonce, &sn);
    let serial_nonce = grp.exp(g, &sn);
    let pseudonym_nonce = grp.product(&[(xi, &xn), (&params.g1, &dn)]);
    let tag_commit = grp.product(&[(xi, &xn), (&base, &tag_nonce)]);
    let blinding_nonce = grp.product(&[(g, &pn), (blind, &ln)]);
    let scaled_nonce = grp.exp(&blinding_commit, &on);
    let f_rho = grp.pair(&blinded_ticket, rho);
    let blind_seller = grp.pair(blind, seller_key);
    let pairing_nonce = grp.gt_product(&[
        (&c.g2_rho, &sn),
        (&f_rho, &f.neg(&on)),
        (&c.blind_rho, &pn2),
        (&blind_seller, &pn),
    ]);

    let challenge = Challenge::new(grp)
        .g(&m)
        .g(&serial_commit)
        .g(&pseudonym)
        .g(&spend_tag)
        .g(&blinding_commit)
        .g(&scaled_blinding_commit)
        .gt(&pairing)
        .g(&serial_nonce)
        .g(&pseudonym_nonce)
        .g(&tag_commit)
        .g(&blinding_nonce)
        .g(&scaled_nonce)
        .gt(&pairing_nonce)
        .finish();

    ProofU3 {
        serial_response: f.respond(&sn, &challenge, s),
        key_response: f.respond(&xn, &challenge, x_u),
        tag_response: f.respond(&tag_nonce, &challenge, &tag_exp),
        blind_response: f.respond(&pn, &challenge, pi),
        lambda_response: f.respond(&ln, &challenge, &lambda),
        offset_response: f.respond(&on, &challenge, &ticket.key_offset),
        scaled_blind_response: f.respond(&pn2, &challenge, &f.mul(pi, &ticket.key_offset)),
        tweak_response: f.respond(&dn, &challenge, &ticket.tweak),
        m,
        serial_commit,
        pseudonym,
        spend_tag,
        blinded_ticket,
        blinding_commit,
        scaled_blinding_commit,
        ticket_pairing: pairing,
        challenge,
    }
}

/// Checks the proof against the verifier's own nonce and identity, the
/// seller key and the recomputed policy hash.
pub fn verify_u3<B: PairingGroup>(
    params: &Params<B>,
    proof: &ProofU3<B>,
    policy_hash: &Scalar,
    seller_key: &B::G,
    nonce: &Scalar,
    verifier_id: &str,
) -> bool {
    let grp = &params.grp;
    let f = grp.scalars();
    let c = params.cache();
    let (g, blind, xi, rho) = (
        &params.g,
        &params.blinding_base,
        &params.user_key_base,
        &params.seller_key_base,
    );
    let expected_pairing = ticket_pairing(params, &proof.blinded_ticket, &proof.pseudonym, policy_hash, seller_key);
    if proof.ticket_pairing != expected_pairing {
        return false;
    }
    // The tag response must be the serial response scaled by this session's
    // nonce; a transcript made for another nonce fails here.
    if proof.tag_response != f.mul(nonce, &proof.serial_response) {
        return false;
    }

    let ch = &proof.challenge;
    let base = params.verifier_base(verifier_id);
    let serial_nonce = grp.product(&[(g, &proof.serial_response), (&proof.serial_commit, ch)]);
    let pseudonym_nonce = grp.product(&[
        (xi, &proof.key_response),
        (&params.g1, &proof.tweak_response),
        (&proof.pseudonym, ch),
    ]);
    let tag_commit = grp.product(&[
        (xi, &proof.key_response),
        (&base, &proof.tag_response),
        (&proof.spend_tag, ch),
    ]);
    let blinding_nonce = grp.product(&[
        (g, &proof.blind_response),
        (blind, &proof.lambda_response),
        (&proof.blinding_commit, ch),
    ]);
    let scaled_nonce = grp.product(&[
        (&proof.blinding_commit, &proof.offset_response),
        (&proof.scaled_blinding_commit, ch),
    ]);
    let f_rho = grp.pair(&proof.blinded_ticket, rho);
    let blind_seller = grp.pair(blind, seller_key);
    let pairing_nonce = grp.gt_product(&[
        (&c.g2_rho, &proof.serial_response),
        (&f_rho, &f.neg(&proof.offset_response)),
        (&c.blind_rho, &proof.scaled_blind_response),
        (&blind_seller, &proof.blind_response),
        (&proof.ticket_pairing, ch),
    ]);

    let expected = Challenge::new(grp)
        .g(&proof.m)
        .g(&proof.serial_commit)
        .g(&proof.pseudonym)
        .g(&proof.spend_tag)
        .g(&proof.blinding_commit)
        .g(&proof.scaled_blinding_commit)
        .gt(&proof.ticket_pairing)
        .g(&serial_nonce)
        .g(&pseudonym_nonce)
        .g(&tag_commit)
        .g(&blinding_nonce)
        .g(&scaled_nonce)
        .gt(&pairing_nonce)
        .finish();
    expected == *ch
}
