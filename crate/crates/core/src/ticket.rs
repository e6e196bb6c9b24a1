//! Tickets: a seller's BBS+ signature over the user's pseudonym, a serial
//! number and the hashed ticket terms.

use eticket_groups::{PairingGroup, Scalar};

use crate::params::Params;
use crate::policy::SatisfiedPolicies;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ticket<B: PairingGroup> {
    /// `d_u = d + d'`, the pseudonym tweak.
    pub tweak: Scalar,
    /// `s_u`, chosen by the seller.
    pub serial: Scalar,
    /// `psi_u = H(P_U || Price || Serv || VP_T)`
    pub policy_hash: Scalar,
    /// `omega_u`, the seller's signature exponent.
    pub key_offset: Scalar,
    /// `T_U = (g0 Y g1^d' g2^s_u g3^psi_u)^(1/(x_s + omega_u))`
    pub sigma: B::G,
    pub requested: SatisfiedPolicies,
    pub price: String,
    pub serv: String,
    pub vp: String,
    /// `Ps_U = xi^x_u g1^d_u`
    pub pseudonym: B::G,
    /// Public key of the issuing seller.
    pub seller_key: B::G,
}

/// Checks `e(T_U, Y_S rho^omega) = e(g0,rho) e(Y_U,rho) e(g1,rho)^d_u
/// e(g2,rho)^s_u e(g3,rho)^psi_u`.
pub fn ticket_holds<B: PairingGroup>(
    params: &Params<B>,
    ticket: &Ticket<B>,
    user_key: &B::G,
    seller_key: &B::G,
) -> bool {
    let grp = &params.grp;
    let c = params.cache();
    let rho = &params.seller_key_base;
    let lhs = grp.pair(&ticket.sigma, &grp.op(seller_key, &grp.exp(rho, &ticket.key_offset)));
    let rhs = grp.gt_op(
        &grp.gt_op(&c.g0_rho, &grp.pair(user_key, rho)),
        &grp.gt_product(&[
            (&c.g1_rho, &ticket.tweak),
            (&c.g2_rho, &ticket.serial),
            (&c.g3_rho, &ticket.policy_hash),
        ]),
    );
    lhs == rhs
}
