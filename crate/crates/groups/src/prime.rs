//! Miller-Rabin primality and prime search for curve parameter generation.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::RngCore;

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Deterministic Miller-Rabin with the first 25 primes as witnesses.
///
/// Exact below `3.3 * 10^24`; for larger inputs the error is bounded by
/// `4^-25` against random candidates.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniform integer with exactly `bits` bits (top bit set).
pub fn random_bits<R: RngCore + ?Sized>(rng: &mut R, bits: u64) -> BigUint {
    let len = bits.div_ceil(8) as usize;
    let mut buf = vec![0u8; len];
    rng.fill_bytes(&mut buf);
    let excess = len as u64 * 8 - bits;
    buf[0] &= 0xff >> excess;
    let mut v = BigUint::from_bytes_be(&buf);
    v.set_bit(bits - 1, true);
    v
}

/// Random prime with exactly `bits` bits.
pub fn random_prime<R: RngCore + ?Sized>(rng: &mut R, bits: u64) -> BigUint {
    loop {
        let mut c = random_bits(rng, bits);
        c.set_bit(0, true);
        if is_probable_prime(&c) {
            return c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_trial_division_below_5000() {
        for n in 0u32..5000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_probable_prime(&BigUint::from(n)), trial, "n = {n}");
        }
    }

    #[test]
    fn known_large_values() {
        assert!(is_probable_prime(&BigUint::from(18_446_744_073_709_551_557u64)));
        assert!(!is_probable_prime(&BigUint::from(18_446_744_073_709_551_559u64)));
        // Carmichael number
        assert!(!is_probable_prime(&BigUint::from(3_215_031_751u64)));
    }
}
