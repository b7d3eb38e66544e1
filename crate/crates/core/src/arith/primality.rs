//! Miller-Rabin primality and prime stepping.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modular::{mul_mod, Montgomery};

/// Small primes used for trial division and as Miller-Rabin witnesses.
pub(crate) const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// The first twelve primes are a deterministic witness set for every n < 2^64
/// (in fact for n < 3.18e23).
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Random rounds performed for integers above 2^64, on top of the fixed witnesses.
pub const BIG_RANDOM_ROUNDS: usize = 64;

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 97 * 97 {
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    match Montgomery::new(n) {
        Some(mont) => WITNESSES.iter().all(|&a| mr_round_mont(&mont, a, d, s)),
        None => WITNESSES.iter().all(|&a| mr_round_wide(n, a, d, s)),
    }
}

fn mr_round_mont(mont: &Montgomery, a: u64, d: u64, s: u32) -> bool {
    let n = mont.modulus();
    let one = mont.one();
    let minus_one = n - one; // Montgomery form of n-1
    let mut x = mont.pow(mont.to_mont(a), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = mont.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

fn mr_round_wide(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = super::modular::pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
        if x == 1 {
            return false;
        }
    }
    false
}

/// Primality for arbitrary-precision integers: deterministic below 2^64,
/// fixed witnesses plus [`BIG_RANDOM_ROUNDS`] seeded random rounds above.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    let round = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return true;
            }
            if x.is_one() {
                return false;
            }
        }
        false
    };
    if !WITNESSES.iter().all(|&a| round(&BigUint::from(a))) {
        return false;
    }
    // Seeded from n so repeated calls agree.
    let seed = n.iter_u64_digits().fold(0x9e37_79b9_7f4a_7c15u64, |h, w| {
        (h ^ w).wrapping_mul(0x100_0000_01b3)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigUint::from(2u32);
    (0..BIG_RANDOM_ROUNDS).all(|_| round(&rng.gen_biguint_range(&two, &n_minus_1)))
}

/// Smallest prime strictly greater than `n`.
///
/// # Panics
/// If the result would exceed `u64::MAX`.
pub fn next_prime_u64(n: u64) -> u64 {
    if n < 2 {
        return 2;
    }
    let mut c = if n.is_even() { n + 1 } else { n + 2 };
    while !is_prime_u64(c) {
        c = c.checked_add(2).expect("next prime exceeds u64");
    }
    c
}

pub fn next_prime_big(n: &BigUint) -> BigUint {
    if let Some(small) = n.to_u64() {
        if small < u64::MAX - 58 {
            return BigUint::from(next_prime_u64(small));
        }
    }
    let mut c = n + 1u32;
    if c.is_even() {
        c += 1u32;
    }
    while !is_prime_big(&c) {
        c += 2u32;
    }
    c
}

/// Largest prime `<= n`, if any.
pub fn prev_prime_u64(n: u64) -> Option<u64> {
    (2..=n).rev().find(|&c| is_prime_u64(c))
}
