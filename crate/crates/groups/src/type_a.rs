//! Tate pairing on the supersingular curve `E: y^2 = x^3 + x` over `F_q`.
//!
//! With `q = 3 mod 4` the curve has `q + 1` points and embedding degree 2.
//! `G` is the order-`r` subgroup of `E(F_q)` and `GT` the order-`r` subgroup
//! of `F_{q^2}^* = F_q[i] / (i^2 + 1)`. The distortion map
//! `phi(x, y) = (-x, i*y)` makes the pairing `e(P, Q) = t(P, phi(Q))`
//! symmetric and non-degenerate on `G`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::encoding::left_pad;
use crate::prime::{is_probable_prime, random_bits, random_prime};
use crate::{BackendId, GroupConfig, GroupError, PairingGroup, Scalar, ScalarField};

pub(crate) const DESCRIPTOR_TAG: u8 = 0x01;

/// Default 160-bit subgroup order.
const DEFAULT_R: &str = "c0a10b2818e9674dda5ede2523a51fe645194749";
/// Default 512-bit field prime, `q = h*r - 1` with `4 | h`.
const DEFAULT_Q: &str = "84e3d8fcc114500d79efe9e864cdfa6156507b1acd50260d5049b8ac31540a1f\
                         c6a5b6485de68140055f09ab4827a2c09c8797504f622d2722265365723e3c57";

const GENERATOR_SEED: &[u8] = b"eticket-groups/type-a/generator";

/// Affine point; `None` is the point at infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point(Option<(BigUint, BigUint)>);

impl Point {
    pub fn infinity() -> Self {
        Point(None)
    }

    pub fn is_infinity(&self) -> bool {
        self.0.is_none()
    }

    pub fn coords(&self) -> Option<(&BigUint, &BigUint)> {
        self.0.as_ref().map(|(x, y)| (x, y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            None => write!(f, "Point(inf)"),
            Some((x, _)) => {
                let hex = format!("{x:x}");
                write!(f, "Point(x={}..)", &hex[..hex.len().min(12)])
            }
        }
    }
}

/// Element `a + b*i` of `F_{q^2}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fq2 {
    pub a: BigUint,
    pub b: BigUint,
}

impl fmt::Debug for Fq2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = format!("{:x}", self.a);
        write!(f, "Fq2(a={}..)", &hex[..hex.len().min(12)])
    }
}

/// Jacobian coordinates, `x = X/Z^2`, `y = Y/Z^3`; `Z = 0` is infinity.
#[derive(Clone, Debug)]
struct Jac {
    x: BigUint,
    y: BigUint,
    z: BigUint,
}

#[derive(Debug)]
struct Inner {
    q: BigUint,
    r: BigUint,
    cofactor: BigUint,
    /// `(q + 1) / r`, the hard part of the final exponentiation.
    final_exp: BigUint,
    /// `(q + 1) / 4`, square roots in `F_q`.
    sqrt_exp: BigUint,
    q_len: usize,
    field: ScalarField,
    generator: Point,
}

/// Type-A symmetric pairing group.
#[derive(Clone)]
pub struct TypeACurve {
    inner: Arc<Inner>,
}

impl fmt::Debug for TypeACurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TypeACurve(r: {} bits, q: {} bits)",
            self.inner.r.bits(),
            self.inner.q.bits()
        )
    }
}

impl PartialEq for TypeACurve {
    fn eq(&self, other: &Self) -> bool {
        self.inner.q == other.inner.q && self.inner.r == other.inner.r
    }
}

impl Eq for TypeACurve {}

impl Default for TypeACurve {
    fn default() -> Self {
        let r = BigUint::parse_bytes(DEFAULT_R.as_bytes(), 16).expect("valid constant");
        let q_hex: String = DEFAULT_Q.split_whitespace().collect();
        let q = BigUint::parse_bytes(q_hex.as_bytes(), 16).expect("valid constant");
        Self::build(q, r)
    }
}

impl TypeACurve {
    /// Curve for a config; the 160/512 default uses fixed constants, other
    /// sizes are generated from a seed derived from the sizes.
    pub fn from_config(cfg: &GroupConfig) -> Result<Self, GroupError> {
        if cfg.subgroup_order_bits == 160 && cfg.field_bits == 512 {
            return Ok(Self::default());
        }
        let seed = (u64::from(cfg.subgroup_order_bits) << 32) | u64::from(cfg.field_bits);
        Self::generate(cfg.subgroup_order_bits, cfg.field_bits, seed)
    }

    /// Searches for `r` prime of `r_bits` bits and `q = h*r - 1` prime of
    /// `q_bits` bits with `4 | h`.
    pub fn generate(r_bits: u32, q_bits: u32, seed: u64) -> Result<Self, GroupError> {
        if r_bits < 16 || q_bits < r_bits + 4 {
            return Err(GroupError::InvalidConfig(format!(
                "unsupported sizes r={r_bits} q={q_bits}"
            )));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let r = random_prime(&mut rng, u64::from(r_bits));
        let h_bits = u64::from(q_bits - r_bits) + 1;
        loop {
            let mut h = random_bits(&mut rng, h_bits);
            h -= &h % 4u32;
            let q = &h * &r - 1u32;
            if q.bits() == u64::from(q_bits) && is_probable_prime(&q) {
                return Ok(Self::build(q, r));
            }
        }
    }

    pub fn from_parameters(q: BigUint, r: BigUint) -> Result<Self, GroupError> {
        let q_plus_1 = &q + 1u32;
        if !is_probable_prime(&r) || !is_probable_prime(&q) {
            return Err(GroupError::InvalidConfig("q and r must be prime".into()));
        }
        if (&q % 4u32) != BigUint::from(3u32) || !(&q_plus_1 % &r).is_zero() {
            return Err(GroupError::InvalidConfig("need q = 3 mod 4 and r | q + 1".into()));
        }
        if (&q_plus_1 / &r).is_multiple_of(&r) {
            return Err(GroupError::InvalidConfig("r^2 must not divide q + 1".into()));
        }
        Ok(Self::build(q, r))
    }

    fn parse_descriptor(bytes: &[u8]) -> Result<Self, GroupError> {
        let (tag, mut rest) = bytes.split_first().ok_or(GroupError::Truncated)?;
        if *tag != DESCRIPTOR_TAG {
            return Err(GroupError::NonCanonical("not a type-a descriptor"));
        }
        let mut take = || -> Result<BigUint, GroupError> {
            if rest.len() < 2 {
                return Err(GroupError::Truncated);
            }
            let len = u16::from_be_bytes([rest[0], rest[1]]) as usize;
            if rest.len() < 2 + len {
                return Err(GroupError::Truncated);
            }
            let v = BigUint::from_bytes_be(&rest[2..2 + len]);
            rest = &rest[2 + len..];
            Ok(v)
        };
        let r = take()?;
        let q = take()?;
        if !rest.is_empty() {
            return Err(GroupError::NonCanonical("trailing descriptor bytes"));
        }
        Self::from_parameters(q, r)
    }

    fn build(q: BigUint, r: BigUint) -> Self {
        let q_plus_1 = &q + 1u32;
        let cofactor = &q_plus_1 / &r;
        let inner = Inner {
            final_exp: cofactor.clone(),
            sqrt_exp: &q_plus_1 >> 2,
            q_len: q.bits().div_ceil(8) as usize,
            field: ScalarField::new(r.clone()),
            cofactor,
            q,
            r,
            generator: Point::infinity(),
        };
        let mut curve = Self { inner: Arc::new(inner) };
        let generator = curve.hash_to_group(GENERATOR_SEED);
        Arc::get_mut(&mut curve.inner)
            .expect("sole owner during construction")
            .generator = generator;
        curve
    }

    pub fn field_prime(&self) -> &BigUint {
        &self.inner.q
    }

    pub fn subgroup_order(&self) -> &BigUint {
        &self.inner.r
    }

    pub fn is_on_curve(&self, p: &Point) -> bool {
        match &p.0 {
            None => true,
            Some((x, y)) => {
                let q = &self.inner.q;
                x < q && y < q && self.fmul(y, y) == self.curve_rhs(x)
            }
        }
    }

    pub fn in_subgroup(&self, p: &Point) -> bool {
        self.is_on_curve(p) && self.mul_big(p, &self.inner.r).is_infinity()
    }

    // ---- F_q ----

    fn fadd(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.inner.q {
            s - &self.inner.q
        } else {
            s
        }
    }

    fn fsub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.inner.q - (b - a)
        }
    }

    fn fmul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.inner.q
    }

    fn fsqr(&self, a: &BigUint) -> BigUint {
        (a * a) % &self.inner.q
    }

    fn fsmall(&self, a: &BigUint, k: u32) -> BigUint {
        (a * k) % &self.inner.q
    }

    fn finv(&self, a: &BigUint) -> BigUint {
        a.modinv(&self.inner.q).expect("nonzero element of a prime field")
    }

    fn curve_rhs(&self, x: &BigUint) -> BigUint {
        let x2 = self.fsqr(x);
        self.fadd(&self.fmul(&x2, x), x)
    }

    // ---- F_q^2 ----

    fn f2_one(&self) -> Fq2 {
        Fq2 {
            a: BigUint::one(),
            b: BigUint::zero(),
        }
    }

    fn f2_mul(&self, x: &Fq2, y: &Fq2) -> Fq2 {
        let ac = &x.a * &y.a;
        let bd = &x.b * &y.b;
        let cross = (&x.a + &x.b) * (&y.a + &y.b);
        let q = &self.inner.q;
        let real = (&ac + (q * q) - &bd) % q;
        let imag = (cross - ac - bd) % q;
        Fq2 { a: real, b: imag }
    }

    fn f2_sqr(&self, x: &Fq2) -> Fq2 {
        let q = &self.inner.q;
        let real = ((&x.a + &x.b) * (&x.a + q - &x.b)) % q;
        let imag = (&x.a * &x.b * 2u32) % q;
        Fq2 { a: real, b: imag }
    }

    fn f2_conj(&self, x: &Fq2) -> Fq2 {
        Fq2 {
            a: x.a.clone(),
            b: if x.b.is_zero() {
                BigUint::zero()
            } else {
                &self.inner.q - &x.b
            },
        }
    }

    fn f2_inv(&self, x: &Fq2) -> Fq2 {
        let norm = self.fadd(&self.fsqr(&x.a), &self.fsqr(&x.b));
        let n_inv = self.finv(&norm);
        let c = self.f2_conj(x);
        Fq2 {
            a: self.fmul(&c.a, &n_inv),
            b: self.fmul(&c.b, &n_inv),
        }
    }

    fn f2_pow(&self, x: &Fq2, e: &BigUint) -> Fq2 {
        let mut acc = self.f2_one();
        for i in (0..e.bits()).rev() {
            acc = self.f2_sqr(&acc);
            if e.bit(i) {
                acc = self.f2_mul(&acc, x);
            }
        }
        acc
    }

    // ---- curve arithmetic ----

    fn to_jac(&self, p: &Point) -> Jac {
        match &p.0 {
            None => Jac {
                x: BigUint::one(),
                y: BigUint::one(),
                z: BigUint::zero(),
            },
            Some((x, y)) => Jac {
                x: x.clone(),
                y: y.clone(),
                z: BigUint::one(),
            },
        }
    }

    fn to_affine(&self, p: &Jac) -> Point {
        if p.z.is_zero() {
            return Point::infinity();
        }
        let zi = self.finv(&p.z);
        let zi2 = self.fsqr(&zi);
        let zi3 = self.fmul(&zi2, &zi);
        Point(Some((self.fmul(&p.x, &zi2), self.fmul(&p.y, &zi3))))
    }

    fn jac_double(&self, p: &Jac) -> Jac {
        if p.z.is_zero() || p.y.is_zero() {
            return self.to_jac(&Point::infinity());
        }
        let xx = self.fsqr(&p.x);
        let yy = self.fsqr(&p.y);
        let zz = self.fsqr(&p.z);
        let s = self.fsmall(&self.fmul(&p.x, &yy), 4);
        let m = self.fadd(&self.fsmall(&xx, 3), &self.fsqr(&zz));
        let x3 = self.fsub(&self.fsqr(&m), &self.fsmall(&s, 2));
        let y3 = self.fsub(&self.fmul(&m, &self.fsub(&s, &x3)), &self.fsmall(&self.fsqr(&yy), 8));
        let z3 = self.fsmall(&self.fmul(&p.y, &p.z), 2);
        Jac { x: x3, y: y3, z: z3 }
    }

    fn jac_add(&self, p: &Jac, o: &Jac) -> Jac {
        if p.z.is_zero() {
            return o.clone();
        }
        if o.z.is_zero() {
            return p.clone();
        }
        let z1z1 = self.fsqr(&p.z);
        let z2z2 = self.fsqr(&o.z);
        let u1 = self.fmul(&p.x, &z2z2);
        let u2 = self.fmul(&o.x, &z1z1);
        let s1 = self.fmul(&p.y, &self.fmul(&o.z, &z2z2));
        let s2 = self.fmul(&o.y, &self.fmul(&p.z, &z1z1));
        let h = self.fsub(&u2, &u1);
        let rr = self.fsub(&s2, &s1);
        if h.is_zero() {
            return if rr.is_zero() {
                self.jac_double(p)
            } else {
                self.to_jac(&Point::infinity())
            };
        }
        let hh = self.fsqr(&h);
        let hhh = self.fmul(&hh, &h);
        let v = self.fmul(&u1, &hh);
        let x3 = self.fsub(&self.fsub(&self.fsqr(&rr), &hhh), &self.fsmall(&v, 2));
        let y3 = self.fsub(&self.fmul(&rr, &self.fsub(&v, &x3)), &self.fmul(&s1, &hhh));
        let z3 = self.fmul(&self.fmul(&p.z, &o.z), &h);
        Jac { x: x3, y: y3, z: z3 }
    }

    fn jac_neg(&self, p: &Jac) -> Jac {
        Jac {
            x: p.x.clone(),
            y: if p.y.is_zero() {
                BigUint::zero()
            } else {
                &self.inner.q - &p.y
            },
            z: p.z.clone(),
        }
    }

    /// Fixed 4-bit window scalar multiplication.
    fn mul_big(&self, p: &Point, k: &BigUint) -> Point {
        if p.is_infinity() || k.is_zero() {
            return Point::infinity();
        }
        let base = self.to_jac(p);
        let mut table = Vec::with_capacity(16);
        table.push(self.to_jac(&Point::infinity()));
        table.push(base.clone());
        for i in 2..16 {
            let next = self.jac_add(&table[i - 1], &base);
            table.push(next);
        }
        let digits = k.to_radix_be(16);
        let mut acc = self.to_jac(&Point::infinity());
        for d in digits {
            for _ in 0..4 {
                acc = self.jac_double(&acc);
            }
            if d != 0 {
                acc = self.jac_add(&acc, &table[d as usize]);
            }
        }
        self.to_affine(&acc)
    }

    fn point_payload(&self, p: &Point) -> Vec<u8> {
        let n = self.inner.q_len;
        let mut out = Vec::with_capacity(1 + 2 * n);
        match &p.0 {
            None => {
                out.push(0x00);
                out.resize(1 + 2 * n, 0);
            }
            Some((x, y)) => {
                out.push(0x04);
                out.extend(left_pad(&x.to_bytes_be(), n));
                out.extend(left_pad(&y.to_bytes_be(), n));
            }
        }
        out
    }

    // ---- pairing ----

    /// Miller loop for `t(P, phi(Q))`, with vertical lines and all `F_q`
    /// scalings dropped (they die in the final exponentiation).
    fn miller(&self, p: &(BigUint, BigUint), q: &(BigUint, BigUint)) -> Fq2 {
        let (xp, yp) = p;
        let (xq, yq) = q;
        let r = &self.inner.r;
        let mut t = Jac {
            x: xp.clone(),
            y: yp.clone(),
            z: BigUint::one(),
        };
        let mut f = self.f2_one();
        for i in (0..r.bits() - 1).rev() {
            // Tangent at T, evaluated at (-xq, i*yq) and scaled by 2*Y*Z^3.
            let xx = self.fsqr(&t.x);
            let yy = self.fsqr(&t.y);
            let zz = self.fsqr(&t.z);
            let m = self.fadd(&self.fsmall(&xx, 3), &self.fsqr(&zz));
            let line = Fq2 {
                a: self.fsub(
                    &self.fmul(&m, &self.fadd(&self.fmul(xq, &zz), &t.x)),
                    &self.fsmall(&yy, 2),
                ),
                b: self.fmul(yq, &self.fsmall(&self.fmul(&t.y, &self.fmul(&t.z, &zz)), 2)),
            };
            f = self.f2_mul(&self.f2_sqr(&f), &line);
            t = self.jac_double(&t);

            if r.bit(i) {
                // Chord through T and P, scaled by (xp*Z^2 - X)*Z.
                let zz = self.fsqr(&t.z);
                let u = self.fmul(xp, &zz);
                let s = self.fmul(yp, &self.fmul(&zz, &t.z));
                let h = self.fsub(&u, &t.x);
                let rr = self.fsub(&s, &t.y);
                if h.is_zero() {
                    // T = -P: vertical line, T + P = O.
                    t = self.to_jac(&Point::infinity());
                    continue;
                }
                let hz = self.fmul(&h, &t.z);
                let line = Fq2 {
                    a: self.fsub(&self.fmul(&rr, &self.fadd(xq, xp)), &self.fmul(yp, &hz)),
                    b: self.fmul(yq, &hz),
                };
                f = self.f2_mul(&f, &line);
                t = self.jac_add(&t, &self.to_jac(&Point(Some(p.clone()))));
            }
        }
        f
    }

    fn final_exponentiation(&self, f: &Fq2) -> Fq2 {
        // f^(q-1) = conj(f) / f, then raise to (q+1)/r.
        let easy = self.f2_mul(&self.f2_conj(f), &self.f2_inv(f));
        self.f2_pow(&easy, &self.inner.final_exp)
    }
}

impl PairingGroup for TypeACurve {
    type G = Point;
    type Gt = Fq2;

    fn backend(&self) -> BackendId {
        BackendId::Pairing
    }

    fn scalars(&self) -> &ScalarField {
        &self.inner.field
    }

    fn generator(&self) -> Point {
        self.inner.generator.clone()
    }

    fn identity(&self) -> Point {
        Point::infinity()
    }

    fn op(&self, a: &Point, b: &Point) -> Point {
        self.to_affine(&self.jac_add(&self.to_jac(a), &self.to_jac(b)))
    }

    fn inv(&self, a: &Point) -> Point {
        self.to_affine(&self.jac_neg(&self.to_jac(a)))
    }

    fn exp(&self, a: &Point, e: &Scalar) -> Point {
        self.mul_big(a, e.value())
    }

    fn gt_identity(&self) -> Fq2 {
        self.f2_one()
    }

    fn gt_op(&self, a: &Fq2, b: &Fq2) -> Fq2 {
        self.f2_mul(a, b)
    }

    fn gt_inv(&self, a: &Fq2) -> Fq2 {
        // Elements of GT have norm 1.
        self.f2_conj(a)
    }

    fn gt_exp(&self, a: &Fq2, e: &Scalar) -> Fq2 {
        self.f2_pow(a, e.value())
    }

    fn pair(&self, a: &Point, b: &Point) -> Fq2 {
        match (&a.0, &b.0) {
            (Some(p), Some(q)) => self.final_exponentiation(&self.miller(p, q)),
            _ => self.f2_one(),
        }
    }

    fn hash_to_group(&self, input: &[u8]) -> Point {
        let n = self.inner.q_len + 16;
        for ctr in 0u32.. {
            let mut wide = Vec::with_capacity(n + 32);
            let mut block = 0u32;
            while wide.len() < n {
                let mut h = Sha256::new();
                h.update(b"eticket-groups/h2g");
                h.update(ctr.to_be_bytes());
                h.update(block.to_be_bytes());
                h.update(input);
                wide.extend_from_slice(&h.finalize());
                block += 1;
            }
            let sign = wide[n] & 1 == 1;
            let x = BigUint::from_bytes_be(&wide[..n]) % &self.inner.q;
            let rhs = self.curve_rhs(&x);
            if rhs.is_zero() {
                continue;
            }
            let mut y = rhs.modpow(&self.inner.sqrt_exp, &self.inner.q);
            if self.fsqr(&y) != rhs {
                continue;
            }
            if y.bit(0) != sign {
                y = &self.inner.q - &y;
            }
            let p = self.mul_big(&Point(Some((x, y))), &self.inner.cofactor);
            if !p.is_infinity() {
                return p;
            }
        }
        unreachable!("counter space exhausted")
    }

    fn g_payload(&self, a: &Point) -> Vec<u8> {
        self.point_payload(a)
    }

    fn g_from_payload(&self, payload: &[u8]) -> Result<Point, GroupError> {
        let n = self.inner.q_len;
        if payload.len() != 1 + 2 * n {
            return Err(GroupError::BadLength {
                expected: 1 + 2 * n,
                found: payload.len(),
            });
        }
        match payload[0] {
            0x00 if payload[1..].iter().all(|&b| b == 0) => Ok(Point::infinity()),
            0x04 => {
                let x = BigUint::from_bytes_be(&payload[1..1 + n]);
                let y = BigUint::from_bytes_be(&payload[1 + n..]);
                let p = Point(Some((x, y)));
                if !self.in_subgroup(&p) {
                    return Err(GroupError::NonCanonical("point not in the prime-order subgroup"));
                }
                Ok(p)
            }
            _ => Err(GroupError::NonCanonical("bad point flag")),
        }
    }

    fn gt_payload(&self, a: &Fq2) -> Vec<u8> {
        let n = self.inner.q_len;
        let mut out = left_pad(&a.a.to_bytes_be(), n);
        out.extend(left_pad(&a.b.to_bytes_be(), n));
        out
    }

    fn gt_from_payload(&self, payload: &[u8]) -> Result<Fq2, GroupError> {
        let n = self.inner.q_len;
        if payload.len() != 2 * n {
            return Err(GroupError::BadLength {
                expected: 2 * n,
                found: payload.len(),
            });
        }
        let v = Fq2 {
            a: BigUint::from_bytes_be(&payload[..n]),
            b: BigUint::from_bytes_be(&payload[n..]),
        };
        let q = &self.inner.q;
        if &v.a >= q || &v.b >= q {
            return Err(GroupError::NonCanonical("coordinate not reduced"));
        }
        if self.f2_pow(&v, &self.inner.r) != self.f2_one() {
            return Err(GroupError::NonCanonical("not in the order-r subgroup of GT"));
        }
        Ok(v)
    }

    fn from_descriptor(bytes: &[u8]) -> Result<Self, GroupError> {
        Self::parse_descriptor(bytes)
    }

    fn descriptor(&self) -> Vec<u8> {
        let mut out = vec![DESCRIPTOR_TAG];
        for v in [&self.inner.r, &self.inner.q] {
            let bytes = v.to_bytes_be();
            out.extend_from_slice(&(bytes.len() as u16).to_be_bytes());
            out.extend_from_slice(&bytes);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn default_parameters_are_well_formed() {
        let c = TypeACurve::default();
        assert_eq!(c.subgroup_order().bits(), 160);
        assert_eq!(c.field_prime().bits(), 512);
        assert!(TypeACurve::from_parameters(c.field_prime().clone(), c.subgroup_order().clone()).is_ok());
    }

    #[test]
    fn generator_has_order_r() {
        let c = TypeACurve::default();
        let g = c.generator();
        assert!(!g.is_infinity());
        assert!(c.in_subgroup(&g));
    }

    #[test]
    fn group_law_is_consistent() {
        let c = TypeACurve::default();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let f = c.scalars();
        let g = c.generator();
        let a = f.random(&mut rng);
        let b = f.random(&mut rng);
        let lhs = c.op(&c.exp(&g, &a), &c.exp(&g, &b));
        assert_eq!(lhs, c.exp(&g, &f.add(&a, &b)));
        assert_eq!(c.op(&c.exp(&g, &a), &c.inv(&c.exp(&g, &a))), Point::infinity());
        let doubled = c.op(&g, &g);
        assert_eq!(doubled, c.exp(&g, &f.from_u64(2)));
    }

    #[test]
    fn pairing_is_bilinear_and_nondegenerate() {
        let c = TypeACurve::default();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let f = c.scalars();
        let g = c.generator();
        let base = c.pair(&g, &g);
        assert_ne!(base, c.gt_identity());
        let x = f.random(&mut rng);
        let y = f.random(&mut rng);
        let lhs = c.pair(&c.exp(&g, &x), &c.exp(&g, &y));
        assert_eq!(lhs, c.gt_exp(&base, &f.mul(&x, &y)));
        assert_eq!(
            c.gt_exp(&base, &c.scalars().from_biguint(&(c.subgroup_order() - 1u32))),
            c.gt_inv(&base)
        );
    }

    #[test]
    fn small_generated_curve_pairs() {
        let c = TypeACurve::generate(32, 96, 11).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let h = c.random_element(&mut rng);
        let g = c.generator();
        let f = c.scalars();
        let k = f.random(&mut rng);
        assert_eq!(c.pair(&c.exp(&g, &k), &h), c.gt_exp(&c.pair(&g, &h), &k));
        assert_eq!(c.pair(&g, &h), c.pair(&h, &g));
        assert_eq!(TypeACurve::from_descriptor(&c.descriptor()).unwrap(), c);
    }
}
