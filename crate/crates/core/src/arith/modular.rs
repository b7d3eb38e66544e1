//! Modular exponentiation and Montgomery arithmetic.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if let (Ok(a64), Ok(b64)) = (u64::try_from(a), u64::try_from(b)) {
        return (a64 as u128 * b64 as u128) % m;
    }
    // Russian-peasant fallback; only reached for moduli above 2^64.
    let (mut a, mut b, mut acc) = (a % m, b % m, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod_u128(acc, a, m);
        }
        a = add_mod_u128(a, a, m);
        b >>= 1;
    }
    acc
}

#[inline]
fn add_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

/// `base^exp mod modulus` for any `modulus >= 1`. Uses Montgomery form for odd
/// moduli below 2^63 and 128-bit products otherwise.
pub fn pow_mod(base: u64, exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    if modulus == 1 {
        return 0;
    }
    if let Some(mont) = Montgomery::new(modulus) {
        return mont.pow_mod(base, exp);
    }
    let mut result = 1u64;
    let mut b = base % modulus;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, b, modulus);
        }
        b = mul_mod(b, b, modulus);
        e >>= 1;
    }
    result
}

/// `base^exp mod modulus` for a modulus up to 2^128 (slow path above 2^64).
pub fn pow_mod_u128(base: u128, exp: u128, modulus: u128) -> u128 {
    assert!(modulus >= 1, "modulus must be positive");
    if let Ok(m) = u64::try_from(modulus) {
        let e = u64::try_from(exp).ok();
        if let Some(e) = e {
            return pow_mod((base % modulus) as u64, e, m) as u128;
        }
    }
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u128;
    let mut b = base % modulus;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod_u128(result, b, modulus);
        }
        b = mul_mod_u128(b, b, modulus);
        e >>= 1;
    }
    result
}

pub fn pow_mod_big(base: &BigUint, exp: &BigUint, modulus: &BigUint) -> BigUint {
    assert!(!modulus.is_zero(), "modulus must be positive");
    if let (Some(b), Some(e), Some(m)) = (base.to_u64(), exp.to_u64(), modulus.to_u64()) {
        return BigUint::from(pow_mod(b, e, m));
    }
    if modulus.is_one() {
        return BigUint::zero();
    }
    base.modpow(exp, modulus)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Montgomery arithmetic modulo an odd `n < 2^63` with `R = 2^64`.
///
/// Values in Montgomery form are kept in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Montgomery {
    n: u64,
    /// `-n^{-1} mod 2^64`
    n_neg_inv: u64,
    /// `R^2 mod n`
    r2: u64,
    /// `R mod n`, the Montgomery form of 1
    one: u64,
}

impl Montgomery {
    /// Returns `None` unless `n` is odd, `n > 1`, and `n < 2^63`.
    pub fn new(n: u64) -> Option<Self> {
        if n < 3 || n & 1 == 0 || n >= 1 << 63 {
            return None;
        }
        // Newton iteration for n^{-1} mod 2^64; n*n = 1 mod 8 seeds 3 bits.
        let mut inv = n;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let one = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((one as u128 * one as u128) % n as u128) as u64;
        Some(Self {
            n,
            n_neg_inv: inv.wrapping_neg(),
            r2,
            one,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn one(&self) -> u64 {
        self.one
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.n_neg_inv);
        // t + m*n < n^2 + 2^64 n < 2^128 because n < 2^63.
        let u = ((t + m as u128 * self.n as u128) >> 64) as u64;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.n, self.r2)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    /// Exponentiation of a value already in Montgomery form.
    #[inline]
    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Plain-residue convenience wrapper: `base^exp mod n`.
    #[inline]
    pub fn pow_mod(&self, base: u64, exp: u64) -> u64 {
        self.from_mont(self.pow(self.to_mont(base), exp))
    }
}
