//! Integers modulo the prime group order.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rand::RngCore;
use sha2::{Digest, Sha256};

use crate::encoding::{self, Tag};
use crate::GroupError;

/// An element of `Z_p`, always reduced.
///
/// Scalars carry no reference to their field; arithmetic goes through the
/// owning [`ScalarField`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(BigUint);

impl Scalar {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({:x})", self.0)
    }
}

/// The field `Z_p` for a prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarField {
    p: BigUint,
    byte_len: usize,
}

impl ScalarField {
    pub fn new(p: BigUint) -> Self {
        let byte_len = p.bits().div_ceil(8) as usize;
        Self { p, byte_len }
    }

    pub fn order(&self) -> &BigUint {
        &self.p
    }

    /// Width of a canonical scalar payload, `ceil(bits(p) / 8)`.
    pub fn byte_len(&self) -> usize {
        self.byte_len
    }

    pub fn zero(&self) -> Scalar {
        Scalar(BigUint::zero())
    }

    pub fn one(&self) -> Scalar {
        Scalar(BigUint::one())
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        Scalar(BigUint::from(v) % &self.p)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_i128(&self, v: i128) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_biguint(&self, v: &BigUint) -> Scalar {
        Scalar(v % &self.p)
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        let p = BigInt::from_biguint(Sign::Plus, self.p.clone());
        let mut r = v % &p;
        if r.sign() == Sign::Minus {
            r += &p;
        }
        Scalar(r.to_biguint().expect("reduced value is non-negative"))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let s = &a.0 + &b.0;
        Scalar(if s >= self.p { s - &self.p } else { s })
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if a.0 >= b.0 {
            Scalar(&a.0 - &b.0)
        } else {
            Scalar(&self.p - (&b.0 - &a.0))
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        if a.0.is_zero() {
            a.clone()
        } else {
            Scalar(&self.p - &a.0)
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar((&a.0 * &b.0) % &self.p)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.0.is_zero() {
            return None;
        }
        a.0.modinv(&self.p).map(Scalar)
    }

    pub fn pow(&self, a: &Scalar, e: &BigUint) -> Scalar {
        Scalar(a.0.modpow(e, &self.p))
    }

    /// Sigma-protocol response `nonce - challenge * witness`.
    pub fn respond(&self, nonce: &Scalar, challenge: &Scalar, witness: &Scalar) -> Scalar {
        self.sub(nonce, &self.mul(challenge, witness))
    }

    /// Uniform draw from `[1, p)`.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> Scalar {
        let bits = self.p.bits();
        let mut buf = vec![0u8; self.byte_len];
        let excess = (self.byte_len as u64) * 8 - bits;
        loop {
            rng.fill_bytes(&mut buf);
            buf[0] &= 0xff >> excess;
            let v = BigUint::from_bytes_be(&buf);
            if !v.is_zero() && v < self.p {
                return Scalar(v);
            }
        }
    }

    /// `H: {0,1}* -> Z_p`, SHA-256 read big-endian and reduced mod p.
    ///
    /// The reduction carries a modulo bias of at most `p / 2^256`.
    pub fn hash(&self, input: &[u8]) -> Scalar {
        let digest = Sha256::digest(input);
        Scalar(BigUint::from_bytes_be(&digest) % &self.p)
    }

    /// Fixed-width big-endian payload without the canonical header.
    pub fn to_fixed_bytes(&self, a: &Scalar) -> Vec<u8> {
        encoding::left_pad(&a.0.to_bytes_be(), self.byte_len)
    }

    pub fn encode(&self, a: &Scalar) -> Vec<u8> {
        encoding::frame(Tag::Scalar, &self.to_fixed_bytes(a))
    }

    pub fn decode(&self, bytes: &[u8]) -> Result<Scalar, GroupError> {
        let payload = encoding::unframe(Tag::Scalar, bytes)?;
        self.decode_payload(payload)
    }

    pub fn decode_payload(&self, payload: &[u8]) -> Result<Scalar, GroupError> {
        if payload.len() != self.byte_len {
            return Err(GroupError::BadLength {
                expected: self.byte_len,
                found: payload.len(),
            });
        }
        let v = BigUint::from_bytes_be(payload);
        if v >= self.p {
            return Err(GroupError::NonCanonical("scalar not reduced"));
        }
        Ok(Scalar(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn f101() -> ScalarField {
        ScalarField::new(BigUint::from(101u32))
    }

    #[test]
    fn inverse_matches_extended_euclid() {
        let f = f101();
        // 12 * 59 = 708 = 7 * 101 + 1
        assert_eq!(f.inv(&f.from_u64(12)).unwrap(), f.from_u64(59));
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn negative_integers_wrap() {
        let f = f101();
        assert_eq!(f.from_i64(-1), f.from_u64(100));
        assert_eq!(f.from_i64(-203), f.from_u64(100));
    }

    #[test]
    fn hash_is_deterministic_and_separates_inputs() {
        let f = f101();
        assert_eq!(f.hash(b"abc"), f.hash(b"abc"));
        let big = ScalarField::new(BigUint::from(18446744073709551557u64));
        assert_ne!(big.hash(b""), big.hash(b"a"));
    }

    #[test]
    fn hash_matches_sha256_reduction() {
        let f = ScalarField::new(BigUint::from(18446744073709551557u64));
        let digest = Sha256::digest(b"");
        let expect = BigUint::from_bytes_be(&digest) % f.order();
        assert_eq!(f.hash(b"").value(), &expect);
    }

    #[test]
    fn hash_output_is_reduced() {
        let f = f101();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let mut buf = [0u8; 16];
            rng.fill_bytes(&mut buf);
            assert!(f.hash(&buf).value() < f.order());
        }
    }

    #[test]
    fn random_draws_are_nonzero_and_reduced() {
        let f = f101();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let s = f.random(&mut rng);
            assert!(!s.is_zero());
            assert!(s.value() < f.order());
        }
    }

    #[test]
    fn seeded_draws_reproduce() {
        let f = ScalarField::new(BigUint::from(18446744073709551557u64));
        let a: Vec<_> = {
            let mut rng = ChaCha20Rng::seed_from_u64(42);
            (0..5).map(|_| f.random(&mut rng)).collect()
        };
        let b: Vec<_> = {
            let mut rng = ChaCha20Rng::seed_from_u64(42);
            (0..5).map(|_| f.random(&mut rng)).collect()
        };
        assert_eq!(a, b);
        let mut other = ChaCha20Rng::seed_from_u64(43);
        assert_ne!(a[0], f.random(&mut other));
    }

    #[test]
    fn zero_encodes_as_tagged_zero_payload() {
        let f = ScalarField::new(BigUint::from(18446744073709551557u64));
        let enc = f.encode(&f.zero());
        assert_eq!(enc, vec![0x03, 0, 0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(f.decode(&enc).unwrap(), f.zero());
    }

    #[test]
    fn decode_rejects_unreduced_and_truncated() {
        let f = f101();
        assert!(f.decode(&[0x03, 0, 0, 0, 1, 101]).is_err());
        assert!(f.decode(&[0x03, 0, 0, 0, 1]).is_err());
        assert!(f.decode(&[0x01, 0, 0, 0, 1, 5]).is_err());
    }
}
