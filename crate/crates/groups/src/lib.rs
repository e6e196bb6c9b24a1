//! Symmetric (Type-I) bilinear groups `e: G x G -> GT` of prime order.
//!
//! Two interchangeable backends implement [`PairingGroup`]:
//!
//! - [`TypeACurve`]: the Tate pairing on the supersingular curve
//!   `y^2 = x^3 + x` over `F_q` with `q = 3 mod 4`, using the distortion map
//!   `(x, y) -> (-x, i*y)` into `F_{q^2}`.
//! - [`ExponentGroup`]: every element is represented by its discrete log with
//!   respect to a nominal generator. The group law is addition mod `p` and
//!   the pairing is multiplication of logs. It is insecure by construction
//!   and exists so that every verification equation can be checked against
//!   plain integer arithmetic.
//!
//! Elements are encoded canonically as `tag || len (u32 BE) || payload` with
//! tags `0x01` (G), `0x02` (GT) and `0x03` (scalar).

use std::fmt::Debug;

use rand::RngCore;
use thiserror::Error;

pub mod encoding;
mod exponent;
pub mod prime;
mod scalar;
mod type_a;

pub use exponent::{ExpG, ExpGt, ExponentGroup};
pub use scalar::{Scalar, ScalarField};
pub use type_a::{Fq2, Point, TypeACurve};

use encoding::Tag;

/// Backend named by the first byte of a descriptor.
pub fn descriptor_backend(descriptor: &[u8]) -> Result<BackendId, GroupError> {
    match descriptor.first() {
        Some(&type_a::DESCRIPTOR_TAG) => Ok(BackendId::Pairing),
        Some(&exponent::DESCRIPTOR_TAG) => Ok(BackendId::ExponentTest),
        Some(_) => Err(GroupError::NonCanonical("unknown backend descriptor")),
        None => Err(GroupError::Truncated),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("input truncated")]
    Truncated,
    #[error("bad tag: expected {expected:#04x}, found {found:#04x}")]
    BadTag { expected: u8, found: u8 },
    #[error("bad length: expected {expected}, found {found}")]
    BadLength { expected: usize, found: usize },
    #[error("non-canonical encoding: {0}")]
    NonCanonical(&'static str),
    #[error("invalid group configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BackendId {
    Pairing,
    ExponentTest,
}

impl BackendId {
    pub fn as_str(self) -> &'static str {
        match self {
            BackendId::Pairing => "pairing",
            BackendId::ExponentTest => "exponent-test",
        }
    }
}

impl std::str::FromStr for BackendId {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pairing" | "type-a" => Ok(BackendId::Pairing),
            "exponent-test" | "exponent" => Ok(BackendId::ExponentTest),
            other => Err(GroupError::InvalidConfig(format!("unknown backend `{other}`"))),
        }
    }
}

/// Backend selection and sizing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupConfig {
    pub backend: BackendId,
    pub security_bits: u32,
    /// Bits of the prime subgroup order `r` (pairing backend).
    pub subgroup_order_bits: u32,
    /// Bits of the base field prime `q` (pairing backend).
    pub field_bits: u32,
    /// Group order for the exponent backend.
    pub test_prime: u64,
}

impl Default for GroupConfig {
    fn default() -> Self {
        Self {
            backend: BackendId::Pairing,
            security_bits: 80,
            subgroup_order_bits: 160,
            field_bits: 512,
            test_prime: 18_446_744_073_709_551_557,
        }
    }
}

impl GroupConfig {
    pub fn exponent(test_prime: u64) -> Self {
        Self {
            backend: BackendId::ExponentTest,
            test_prime,
            ..Self::default()
        }
    }
}

/// A prime-order symmetric bilinear group.
///
/// Group operations are written multiplicatively in method names (`op`,
/// `exp`) regardless of the backend's internal representation.
pub trait PairingGroup: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type G: Clone + PartialEq + Eq + Debug + Send + Sync;
    type Gt: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn backend(&self) -> BackendId;

    /// The field of exponents, `Z_p` with `p` the group order.
    fn scalars(&self) -> &ScalarField;

    fn generator(&self) -> Self::G;
    fn identity(&self) -> Self::G;
    fn op(&self, a: &Self::G, b: &Self::G) -> Self::G;
    fn inv(&self, a: &Self::G) -> Self::G;
    fn exp(&self, a: &Self::G, e: &Scalar) -> Self::G;

    fn gt_identity(&self) -> Self::Gt;
    fn gt_op(&self, a: &Self::Gt, b: &Self::Gt) -> Self::Gt;
    fn gt_inv(&self, a: &Self::Gt) -> Self::Gt;
    fn gt_exp(&self, a: &Self::Gt, e: &Scalar) -> Self::Gt;

    fn pair(&self, a: &Self::G, b: &Self::G) -> Self::Gt;

    /// `H': {0,1}* -> G`, deterministic.
    fn hash_to_group(&self, input: &[u8]) -> Self::G;

    fn g_payload(&self, a: &Self::G) -> Vec<u8>;
    fn g_from_payload(&self, payload: &[u8]) -> Result<Self::G, GroupError>;
    fn gt_payload(&self, a: &Self::Gt) -> Vec<u8>;
    fn gt_from_payload(&self, payload: &[u8]) -> Result<Self::Gt, GroupError>;

    /// Self-describing parameter blob, sufficient to rebuild the backend.
    fn descriptor(&self) -> Vec<u8>;

    /// Rebuilds a backend from [`PairingGroup::descriptor`] output.
    fn from_descriptor(bytes: &[u8]) -> Result<Self, GroupError>;

    fn hash_to_scalar(&self, input: &[u8]) -> Scalar {
        self.scalars().hash(input)
    }

    fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Scalar {
        self.scalars().random(rng)
    }

    fn random_element<R: RngCore + ?Sized>(&self, rng: &mut R) -> Self::G {
        let e = self.random_scalar(rng);
        self.exp(&self.generator(), &e)
    }

    /// `prod base_i ^ exp_i`.
    fn product(&self, terms: &[(&Self::G, &Scalar)]) -> Self::G {
        terms.iter().fold(self.identity(), |acc, (b, e)| {
            if e.is_zero() {
                acc
            } else {
                self.op(&acc, &self.exp(b, e))
            }
        })
    }

    fn gt_product(&self, terms: &[(&Self::Gt, &Scalar)]) -> Self::Gt {
        terms.iter().fold(self.gt_identity(), |acc, (b, e)| {
            if e.is_zero() {
                acc
            } else {
                self.gt_op(&acc, &self.gt_exp(b, e))
            }
        })
    }

    fn gt_div(&self, a: &Self::Gt, b: &Self::Gt) -> Self::Gt {
        self.gt_op(a, &self.gt_inv(b))
    }

    fn encode_g(&self, a: &Self::G) -> Vec<u8> {
        encoding::frame(Tag::G, &self.g_payload(a))
    }

    fn decode_g(&self, bytes: &[u8]) -> Result<Self::G, GroupError> {
        self.g_from_payload(encoding::unframe(Tag::G, bytes)?)
    }

    fn encode_gt(&self, a: &Self::Gt) -> Vec<u8> {
        encoding::frame(Tag::Gt, &self.gt_payload(a))
    }

    fn decode_gt(&self, bytes: &[u8]) -> Result<Self::Gt, GroupError> {
        self.gt_from_payload(encoding::unframe(Tag::Gt, bytes)?)
    }

    fn encode_scalar(&self, s: &Scalar) -> Vec<u8> {
        self.scalars().encode(s)
    }

    fn decode_scalar(&self, bytes: &[u8]) -> Result<Scalar, GroupError> {
        self.scalars().decode(bytes)
    }
}
