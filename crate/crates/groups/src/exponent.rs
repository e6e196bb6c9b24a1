use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::encoding::left_pad;
use crate::prime::is_probable_prime;
use crate::{BackendId, GroupConfig, GroupError, PairingGroup, Scalar, ScalarField};

pub(crate) const DESCRIPTOR_TAG: u8 = 0x02;

/// Element of `G`, stored as its discrete log to the nominal generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpG(pub BigUint);

/// Element of `GT`, stored as its discrete log to `e(1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpGt(pub BigUint);

/// Log-transparent symmetric pairing over `Z_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentGroup {
    field: ScalarField,
}

impl ExponentGroup {
    pub fn new(p: u64) -> Result<Self, GroupError> {
        Self::from_prime(BigUint::from(p))
    }

    pub fn from_prime(p: BigUint) -> Result<Self, GroupError> {
        if p < BigUint::from(101u32) || !is_probable_prime(&p) {
            return Err(GroupError::InvalidConfig(format!(
                "exponent backend needs a prime >= 101, got {p}"
            )));
        }
        Ok(Self {
            field: ScalarField::new(p),
        })
    }

    pub fn from_config(cfg: &GroupConfig) -> Result<Self, GroupError> {
        Self::new(cfg.test_prime)
    }

    fn parse_descriptor(bytes: &[u8]) -> Result<Self, GroupError> {
        match bytes.split_first() {
            Some((&DESCRIPTOR_TAG, rest)) if !rest.is_empty() => Self::from_prime(BigUint::from_bytes_be(rest)),
            _ => Err(GroupError::NonCanonical("not an exponent-backend descriptor")),
        }
    }

    pub fn modulus(&self) -> &BigUint {
        self.field.order()
    }

    pub fn elem(&self, log: u64) -> ExpG {
        ExpG(BigUint::from(log) % self.modulus())
    }

    pub fn gt_elem(&self, log: u64) -> ExpGt {
        ExpGt(BigUint::from(log) % self.modulus())
    }

    /// Discrete log of a `G` element.
    pub fn dlog<'a>(&self, a: &'a ExpG) -> &'a BigUint {
        &a.0
    }

    pub fn gt_dlog<'a>(&self, a: &'a ExpGt) -> &'a BigUint {
        &a.0
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % self.modulus()
    }

    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            self.modulus() - a
        }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % self.modulus()
    }

    fn payload(&self, v: &BigUint) -> Vec<u8> {
        left_pad(&v.to_bytes_be(), self.field.byte_len())
    }

    fn parse(&self, payload: &[u8]) -> Result<BigUint, GroupError> {
        if payload.len() != self.field.byte_len() {
            return Err(GroupError::BadLength {
                expected: self.field.byte_len(),
                found: payload.len(),
            });
        }
        let v = BigUint::from_bytes_be(payload);
        if &v >= self.modulus() {
            return Err(GroupError::NonCanonical("log not reduced"));
        }
        Ok(v)
    }
}

impl PairingGroup for ExponentGroup {
    type G = ExpG;
    type Gt = ExpGt;

    fn backend(&self) -> BackendId {
        BackendId::ExponentTest
    }

    fn scalars(&self) -> &ScalarField {
        &self.field
    }

    fn generator(&self) -> ExpG {
        ExpG(BigUint::one())
    }

    fn identity(&self) -> ExpG {
        ExpG(BigUint::zero())
    }

    fn op(&self, a: &ExpG, b: &ExpG) -> ExpG {
        ExpG(self.add(&a.0, &b.0))
    }

    fn inv(&self, a: &ExpG) -> ExpG {
        ExpG(self.neg(&a.0))
    }

    fn exp(&self, a: &ExpG, e: &Scalar) -> ExpG {
        ExpG(self.mul(&a.0, e.value()))
    }

    fn gt_identity(&self) -> ExpGt {
        ExpGt(BigUint::zero())
    }

    fn gt_op(&self, a: &ExpGt, b: &ExpGt) -> ExpGt {
        ExpGt(self.add(&a.0, &b.0))
    }

    fn gt_inv(&self, a: &ExpGt) -> ExpGt {
        ExpGt(self.neg(&a.0))
    }

    fn gt_exp(&self, a: &ExpGt, e: &Scalar) -> ExpGt {
        ExpGt(self.mul(&a.0, e.value()))
    }

    fn pair(&self, a: &ExpG, b: &ExpG) -> ExpGt {
        ExpGt(self.mul(&a.0, &b.0))
    }

    fn hash_to_group(&self, input: &[u8]) -> ExpG {
        ExpG(self.field.hash(input).value().clone())
    }

    fn g_payload(&self, a: &ExpG) -> Vec<u8> {
        self.payload(&a.0)
    }

    fn g_from_payload(&self, payload: &[u8]) -> Result<ExpG, GroupError> {
        self.parse(payload).map(ExpG)
    }

    fn gt_payload(&self, a: &ExpGt) -> Vec<u8> {
        self.payload(&a.0)
    }

    fn gt_from_payload(&self, payload: &[u8]) -> Result<ExpGt, GroupError> {
        self.parse(payload).map(ExpGt)
    }

    fn from_descriptor(bytes: &[u8]) -> Result<Self, GroupError> {
        Self::parse_descriptor(bytes)
    }

    fn descriptor(&self) -> Vec<u8> {
        let mut out = vec![DESCRIPTOR_TAG];
        out.extend_from_slice(&self.modulus().to_bytes_be());
        out
    }
}
