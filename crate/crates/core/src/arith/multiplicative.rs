//! Multiplicative functions, prime moduli and multiplicative orders.

use num_bigint::BigUint;
use num_integer::Integer;

use super::factor::{factorize_big, factorize_u64, Factorization};
use super::modular::{pow_mod, pow_mod_u128, Montgomery};
use super::primality::is_prime_u64;
use crate::error::{Error, Result};

/// All divisors of `n`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorSet<T> {
    pub n: T,
    pub divisors: Vec<T>,
}

impl<T> DivisorSet<T> {
    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.divisors.iter()
    }
}

fn pow<T: Integer + Clone>(base: &T, e: u32) -> T {
    (0..e).fold(T::one(), |acc, _| acc * base.clone())
}

pub fn euler_phi<T: Integer + Clone>(f: &Factorization<T>) -> T {
    f.factors.iter().fold(T::one(), |acc, (p, e)| {
        acc * pow(p, e - 1) * (p.clone() - T::one())
    })
}

/// Möbius function of a factored integer.
pub fn moebius_of<T>(f: &Factorization<T>) -> i8 {
    if f.factors.iter().any(|(_, e)| *e > 1) {
        0
    } else if f.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn moebius(n: u64) -> i8 {
    assert!(n >= 1, "moebius is defined for n >= 1");
    if n == 1 {
        return 1;
    }
    moebius_of(&factorize_u64(n).expect("u64 factorization within budget"))
}

pub fn divisors<T: Integer + Clone>(f: &Factorization<T>) -> DivisorSet<T> {
    let mut divs = vec![T::one()];
    for (p, e) in &f.factors {
        let current = divs.len();
        let mut pk = T::one();
        for _ in 0..*e {
            pk = pk * p.clone();
            for i in 0..current {
                divs.push(divs[i].clone() * pk.clone());
            }
        }
    }
    divs.sort();
    DivisorSet {
        n: f.value.clone(),
        divisors: divs,
    }
}

/// `Σ_{d | n} φ(d)²` from the factorization of `n`, using multiplicativity:
/// the local factor at `q^e` is `1 + Σ_{k=1}^{e} (q^k - q^{k-1})²`.
pub fn phi_squared_sum_of<T: Integer + Clone>(f: &Factorization<T>) -> T {
    f.factors.iter().fold(T::one(), |acc, (q, e)| {
        let mut local = T::one();
        let mut prev = T::one();
        for _ in 0..*e {
            let next = prev.clone() * q.clone();
            let phi = next.clone() - prev;
            local = local + phi.clone() * phi;
            prev = next;
        }
        acc * local
    })
}

/// `Σ_{d | p-1} φ(d)²` for a prime `p`.
pub fn phi_squared_sum(p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if p == 2 {
        return Ok(1);
    }
    Ok(phi_squared_sum_of(&factorize_u64(p - 1)?))
}

pub fn phi_squared_sum_big(p: &BigUint) -> Result<BigUint> {
    if !super::primality::is_prime_big(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if *p == BigUint::from(2u32) {
        return Ok(BigUint::from(1u32));
    }
    Ok(phi_squared_sum_of(&factorize_big(&(p - 1u32))?))
}

/// A prime `p` with its square, the working modulus of all quotient arithmetic.
///
/// `p` may be any 64-bit prime; `p²` is held in a `u128`. Powers modulo `p²`
/// go through Montgomery form whenever `p² < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeModulus {
    p: u64,
    p_squared: u128,
    mont_p: Option<Montgomery>,
    mont_p2: Option<Montgomery>,
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(Self::from_sieved(p))
    }

    /// Skips the primality test; for primes that came out of a sieve.
    pub(crate) fn from_sieved(p: u64) -> Self {
        debug_assert!(is_prime_u64(p));
        let p_squared = p as u128 * p as u128;
        Self {
            p,
            p_squared,
            mont_p: Montgomery::new(p),
            mont_p2: u64::try_from(p_squared).ok().and_then(Montgomery::new),
        }
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn p_squared(&self) -> u128 {
        self.p_squared
    }

    /// Montgomery context for `p²`, when `p² < 2^63` and `p` is odd.
    #[inline]
    pub fn montgomery_p2(&self) -> Option<&Montgomery> {
        self.mont_p2.as_ref()
    }

    #[inline]
    pub fn pow_mod_p(&self, a: u64, e: u64) -> u64 {
        match &self.mont_p {
            Some(m) => m.pow_mod(a, e),
            None => pow_mod(a, e, self.p),
        }
    }

    #[inline]
    pub fn pow_mod_p2(&self, a: u128, e: u64) -> u128 {
        match &self.mont_p2 {
            Some(m) => m.pow_mod((a % self.p_squared) as u64, e) as u128,
            None => pow_mod_u128(a, e as u128, self.p_squared),
        }
    }

    /// True when `p | a`.
    #[inline]
    pub fn divides(&self, a: u64) -> bool {
        a.is_multiple_of(self.p)
    }
}

/// `p` together with the prime factors of `p-1`, for repeated order queries.
#[derive(Debug, Clone)]
pub struct OrderContext {
    modulus: PrimeModulus,
    factors: Factorization<u64>,
}

impl OrderContext {
    pub fn new(modulus: PrimeModulus) -> Result<Self> {
        let factors = if modulus.p() == 2 {
            Factorization {
                value: 1,
                factors: Vec::new(),
            }
        } else {
            factorize_u64(modulus.p() - 1)?
        };
        Ok(Self { modulus, factors })
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }

    /// Factorization of `p-1`.
    pub fn group_order(&self) -> &Factorization<u64> {
        &self.factors
    }

    /// Least `d >= 1` with `a^d ≡ 1 (mod p)`.
    pub fn order(&self, a: u64) -> Result<u64> {
        let p = self.modulus.p();
        if a.is_multiple_of(p) {
            return Err(Error::divisible(a, p));
        }
        let mut d = p - 1;
        for &(l, e) in &self.factors.factors {
            for _ in 0..e {
                if self.modulus.pow_mod_p(a, d / l) == 1 {
                    d /= l;
                } else {
                    break;
                }
            }
        }
        Ok(d)
    }
}

/// Order of `a` in `(Z/pZ)^×`.
pub fn multiplicative_order(a: u64, p: &PrimeModulus) -> Result<u64> {
    if p.divides(a) {
        return Err(Error::divisible(a, p.p()));
    }
    OrderContext::new(*p)?.order(a)
}
