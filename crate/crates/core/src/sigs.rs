//! Boneh-Boyen short signatures and BBS+ block signatures.
//!
//! Both are stated over an explicit list of generators so they can be
//! exercised in isolation; the scheme's credentials and tickets use the same
//! algebra with the system parameters as generators.

use eticket_groups::{PairingGroup, Scalar};
use rand::RngCore;
use thiserror::Error;

/// Fresh `w` values drawn before BBS+ signing gives up.
pub const MAX_RESAMPLES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigError {
    #[error("message is a pole of the signing key (sk + m = 0)")]
    InvalidMessage,
    #[error("expected {expected} messages, got {found}")]
    WrongBlockLength { expected: usize, found: usize },
    #[error("no usable signature exponent after {0} attempts")]
    ResampleExhausted(usize),
}

/// Generators of a BB signature: `g1` is signed, `g2` carries the key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbGenerators<B: PairingGroup> {
    pub g1: B::G,
    pub g2: B::G,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbKeyPair<B: PairingGroup> {
    pub sk: Scalar,
    /// `g2^sk`
    pub pk: B::G,
}

impl<B: PairingGroup> BbKeyPair<B> {
    pub fn generate<R: RngCore + ?Sized>(grp: &B, gens: &BbGenerators<B>, rng: &mut R) -> Self {
        let sk = grp.random_scalar(rng);
        Self::from_secret(grp, gens, sk)
    }

    pub fn from_secret(grp: &B, gens: &BbGenerators<B>, sk: Scalar) -> Self {
        let pk = grp.exp(&gens.g2, &sk);
        Self { sk, pk }
    }
}

/// `g1^(1 / (sk + m))`.
pub fn bb_sign<B: PairingGroup>(grp: &B, gens: &BbGenerators<B>, sk: &Scalar, m: &Scalar) -> Result<B::G, SigError> {
    let f = grp.scalars();
    let inv = f.inv(&f.add(sk, m)).ok_or(SigError::InvalidMessage)?;
    Ok(grp.exp(&gens.g1, &inv))
}

/// `e(sig, pk * g2^m) == e(g1, g2)`.
pub fn bb_verify<B: PairingGroup>(grp: &B, gens: &BbGenerators<B>, pk: &B::G, m: &Scalar, sig: &B::G) -> bool {
    let key = grp.op(pk, &grp.exp(&gens.g2, m));
    grp.pair(sig, &key) == grp.pair(&gens.g1, &gens.g2)
}

/// Public half of a BBS+ key for blocks of `generators.len() - 2` messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbsPlusPublicKey<B: PairingGroup> {
    pub h: B::G,
    /// `h^sk`
    pub pk: B::G,
    /// `g0, g1, g2, ..., g_{n+1}`: constant term, randomizer base, then one
    /// base per message.
    pub generators: Vec<B::G>,
}

impl<B: PairingGroup> BbsPlusPublicKey<B> {
    pub fn block_len(&self) -> usize {
        self.generators.len().saturating_sub(2)
    }

    /// `g0 * g1^s * prod g_{i+1}^{m_i}`.
    fn block(&self, grp: &B, s: &Scalar, messages: &[Scalar]) -> B::G {
        let mut terms = vec![(&self.generators[1], s)];
        terms.extend(self.generators[2..].iter().zip(messages));
        grp.op(&self.generators[0], &grp.product(&terms))
    }

    fn check_len(&self, messages: &[Scalar]) -> Result<(), SigError> {
        if self.generators.len() < 2 || messages.len() != self.block_len() {
            return Err(SigError::WrongBlockLength {
                expected: self.block_len(),
                found: messages.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbsPlusKeyPair<B: PairingGroup> {
    pub sk: Scalar,
    pub public: BbsPlusPublicKey<B>,
}

impl<B: PairingGroup> BbsPlusKeyPair<B> {
    pub fn generate<R: RngCore + ?Sized>(grp: &B, h: B::G, generators: Vec<B::G>, rng: &mut R) -> Self {
        let sk = grp.random_scalar(rng);
        Self::from_secret(grp, h, generators, sk)
    }

    pub fn from_secret(grp: &B, h: B::G, generators: Vec<B::G>, sk: Scalar) -> Self {
        let pk = grp.exp(&h, &sk);
        Self {
            sk,
            public: BbsPlusPublicKey { h, pk, generators },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbsPlusSig<B: PairingGroup> {
    pub w: Scalar,
    pub s: Scalar,
    pub sigma: B::G,
}

/// Signs with fresh `(w, s)`, redrawing `w` while `sk + w = 0`.
pub fn bbsplus_sign<B: PairingGroup, R: RngCore + ?Sized>(
    grp: &B,
    key: &BbsPlusKeyPair<B>,
    messages: &[Scalar],
    rng: &mut R,
) -> Result<BbsPlusSig<B>, SigError> {
    key.public.check_len(messages)?;
    let s = grp.random_scalar(rng);
    for _ in 0..MAX_RESAMPLES {
        let w = grp.random_scalar(rng);
        match bbsplus_sign_with(grp, key, messages, &w, &s) {
            Err(SigError::InvalidMessage) => continue,
            other => return other,
        }
    }
    Err(SigError::ResampleExhausted(MAX_RESAMPLES))
}

/// Deterministic signing with caller-chosen `(w, s)`.
pub fn bbsplus_sign_with<B: PairingGroup>(
    grp: &B,
    key: &BbsPlusKeyPair<B>,
    messages: &[Scalar],
    w: &Scalar,
    s: &Scalar,
) -> Result<BbsPlusSig<B>, SigError> {
    key.public.check_len(messages)?;
    let f = grp.scalars();
    let inv = f.inv(&f.add(&key.sk, w)).ok_or(SigError::InvalidMessage)?;
    let sigma = grp.exp(&key.public.block(grp, s, messages), &inv);
    Ok(BbsPlusSig {
        w: w.clone(),
        s: s.clone(),
        sigma,
    })
}

/// `e(sigma, pk * h^w) == e(g0 g1^s prod g_{i+1}^{m_i}, h)`.
pub fn bbsplus_verify<B: PairingGroup>(
    grp: &B,
    public: &BbsPlusPublicKey<B>,
    messages: &[Scalar],
    sig: &BbsPlusSig<B>,
) -> bool {
    if public.check_len(messages).is_err() {
        return false;
    }
    let key = grp.op(&public.pk, &grp.exp(&public.h, &sig.w));
    grp.pair(&sig.sigma, &key) == grp.pair(&public.block(grp, &sig.s, messages), &public.h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use eticket_groups::ExponentGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn grp101() -> ExponentGroup {
        ExponentGroup::new(101).unwrap()
    }

    #[test]
    fn bb_sign_matches_inverse_oracle() {
        let grp = grp101();
        let f = grp.scalars();
        let gens = BbGenerators {
            g1: grp.elem(1),
            g2: grp.elem(1),
        };
        let sig = bb_sign(&grp, &gens, &f.from_u64(5), &f.from_u64(7)).unwrap();
        assert_eq!(sig, grp.elem(59));
        let kp = BbKeyPair::from_secret(&grp, &gens, f.from_u64(5));
        assert!(bb_verify(&grp, &gens, &kp.pk, &f.from_u64(7), &sig));
    }

    #[test]
    fn bb_pole_is_an_error() {
        let grp = grp101();
        let f = grp.scalars();
        let gens = BbGenerators {
            g1: grp.elem(1),
            g2: grp.elem(1),
        };
        assert_eq!(
            bb_sign(&grp, &gens, &f.from_u64(5), &f.from_u64(96)),
            Err(SigError::InvalidMessage)
        );
    }

    #[test]
    fn bbsplus_sign_matches_exponent_oracle() {
        let grp = grp101();
        let f = grp.scalars();
        let key = BbsPlusKeyPair::from_secret(&grp, grp.elem(1), vec![grp.elem(1); 3], f.from_u64(5));
        let sig = bbsplus_sign_with(&grp, &key, &[f.from_u64(4)], &f.from_u64(3), &f.from_u64(2)).unwrap();
        // (1 + 2 + 4) / (5 + 3) mod 101
        assert_eq!(sig.sigma, grp.elem(64));
        assert!(bbsplus_verify(&grp, &key.public, &[f.from_u64(4)], &sig));
    }

    #[test]
    fn bbsplus_signatures_use_fresh_randomness() {
        let grp = ExponentGroup::new(18_446_744_073_709_551_557).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let gens: Vec<_> = (0..5).map(|_| grp.random_element(&mut rng)).collect();
        let key = BbsPlusKeyPair::generate(&grp, grp.random_element(&mut rng), gens, &mut rng);
        let msgs: Vec<_> = (0..3).map(|_| grp.random_scalar(&mut rng)).collect();
        let a = bbsplus_sign(&grp, &key, &msgs, &mut rng).unwrap();
        let b = bbsplus_sign(&grp, &key, &msgs, &mut rng).unwrap();
        assert!(bbsplus_verify(&grp, &key.public, &msgs, &a));
        assert!(bbsplus_verify(&grp, &key.public, &msgs, &b));
        assert_ne!(a.w, b.w);
        assert_ne!(a.s, b.s);
        assert_ne!(a.sigma, b.sigma);
    }

    #[test]
    fn bbsplus_rejects_wrong_block_length() {
        let grp = grp101();
        let f = grp.scalars();
        let key = BbsPlusKeyPair::from_secret(&grp, grp.elem(1), vec![grp.elem(2); 3], f.from_u64(5));
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert_eq!(
            bbsplus_sign(&grp, &key, &[], &mut rng),
            Err(SigError::WrongBlockLength { expected: 1, found: 0 })
        );
    }

    #[test]
    fn bbsplus_pole_resamples() {
        let grp = grp101();
        let f = grp.scalars();
        let key = BbsPlusKeyPair::from_secret(&grp, grp.elem(1), vec![grp.elem(3); 3], f.from_u64(5));
        assert_eq!(
            bbsplus_sign_with(&grp, &key, &[f.one()], &f.from_u64(96), &f.one()),
            Err(SigError::InvalidMessage)
        );
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..200 {
            let sig = bbsplus_sign(&grp, &key, &[f.one()], &mut rng).unwrap();
            assert_ne!(sig.w, f.from_u64(96));
        }
    }
}
