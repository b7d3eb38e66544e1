//! Integer factorization: trial division followed by Pollard-Brent rho.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::modular::{mul_mod, Montgomery};
use super::primality::{is_prime_big, is_prime_u64};
use super::sieve::primes_up_to;
use crate::error::{Error, Result};

/// A complete prime factorization with ascending primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization<T> {
    pub value: T,
    pub factors: Vec<(T, u32)>,
}

impl<T> Factorization<T>
where
    T: Integer + Clone,
{
    /// Builds a factorization from unsorted, possibly repeated prime factors.
    pub fn from_primes(value: T, mut primes: Vec<T>) -> Self {
        primes.sort();
        let mut factors: Vec<(T, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Self { value, factors }
    }

    /// `∏ p^e`, recomputed from the factor list.
    pub fn product(&self) -> T {
        self.factors.iter().fold(T::one(), |acc, (p, e)| {
            (0..*e).fold(acc, |acc, _| acc * p.clone())
        })
    }

    pub fn primes(&self) -> impl Iterator<Item = &T> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// True when `p` appears among the prime factors.
    pub fn contains(&self, p: &T) -> bool {
        self.factors.iter().any(|(q, _)| q == p)
    }

    pub fn exponent_of(&self, p: &T) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }
}

impl Factorization<u64> {
    pub fn to_big(&self) -> Factorization<BigUint> {
        Factorization {
            value: BigUint::from(self.value),
            factors: self
                .factors
                .iter()
                .map(|&(p, e)| (BigUint::from(p), e))
                .collect(),
        }
    }
}

impl<T: std::fmt::Display> std::fmt::Display for Factorization<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Limits for [`factorize_u64`] and [`factorize_big`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorConfig {
    /// Trial division by all primes below this bound.
    pub trial_bound: u64,
    /// Rho iterations allowed per attempt on one composite.
    pub rho_budget: u64,
    /// Fresh-seed restarts after an attempt fails or runs out of budget.
    pub restarts: u32,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            trial_bound: 1 << 16,
            rho_budget: 1 << 26,
            restarts: 4,
        }
    }
}

/// Result of a factorization attempt that may leave composites unsplit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactorization<T> {
    pub value: T,
    /// Certified prime factors, ascending.
    pub factors: Vec<(T, u32)>,
    /// Composite cofactors rho could not split within the budget.
    pub unfactored: Vec<T>,
}

impl<T: Integer + Clone> PartialFactorization<T> {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    pub fn into_complete(self) -> Option<Factorization<T>> {
        self.is_complete().then_some(Factorization {
            value: self.value,
            factors: self.factors,
        })
    }
}

fn trial_primes(bound: u64) -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    let all = TABLE.get_or_init(|| primes_up_to(1 << 20));
    let end = all.partition_point(|&p| p < bound);
    &all[..end]
}

pub fn factorize_u64(n: u64) -> Result<Factorization<u64>> {
    factorize_u64_with(n, &FactorConfig::default())
}

pub fn factorize_u64_with(n: u64, cfg: &FactorConfig) -> Result<Factorization<u64>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("cannot factorize {n}")));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    for &p in trial_primes(cfg.trial_bound) {
        if p * p > rest {
            break;
        }
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            primes.push(m);
            continue;
        }
        let d = split_u64(m, cfg)?;
        stack.push(d);
        stack.push(m / d);
    }
    Ok(Factorization::from_primes(n, primes))
}

/// Finds a nontrivial divisor of the composite `n`.
fn split_u64(n: u64, cfg: &FactorConfig) -> Result<u64> {
    if n.is_multiple_of(2) {
        return Ok(2);
    }
    let r = super::sieve::isqrt(n);
    if r * r == n {
        return Ok(r);
    }
    let mut steps = 0;
    for attempt in 0..=cfg.restarts as u64 {
        let c = 1 + attempt * 2;
        let y0 = 2 + attempt;
        let found = match Montgomery::new(n) {
            Some(mont) => brent_u64(n, c, y0, cfg.rho_budget, |a, b| mont.mul(a, b)),
            None => brent_u64(n, c, y0, cfg.rho_budget, |a, b| mul_mod(a, b, n)),
        };
        steps += found.1;
        if let Some(d) = found.0 {
            return Ok(d);
        }
    }
    Err(Error::FactorBudget {
        cofactor: n.to_string(),
        steps,
    })
}

/// Brent's cycle-finding variant of rho with batched gcds; returns the divisor
/// (if any) and the number of iterations used.
fn brent_u64(n: u64, c: u64, y0: u64, budget: u64, mul: impl Fn(u64, u64) -> u64) -> (Option<u64>, u64) {
    const BATCH: u64 = 128;
    let c = c % n;
    let f = |y: u64| {
        let s = mul(y, y) as u128 + c as u128;
        if s >= n as u128 {
            (s - n as u128) as u64
        } else {
            s as u64
        }
    };
    let (mut y, mut x, mut ys) = (y0 % n, 0, 0);
    let (mut q, mut g, mut r, mut steps) = (1u64, 1u64, 1u64, 0u64);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        steps += r;
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul(q, x.abs_diff(y));
            }
            steps += BATCH.min(r - k);
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
        if steps > budget && g == 1 {
            return (None, steps);
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            steps += 1;
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    ((g != n).then_some(g), steps)
}

pub fn factorize_big(n: &BigUint) -> Result<Factorization<BigUint>> {
    factorize_big_with(n, &FactorConfig::default())
}

pub fn factorize_big_with(n: &BigUint, cfg: &FactorConfig) -> Result<Factorization<BigUint>> {
    let partial = factorize_partial_big(n, cfg)?;
    if let Some(c) = partial.unfactored.first() {
        return Err(Error::FactorBudget {
            cofactor: c.to_string(),
            steps: cfg.rho_budget * (cfg.restarts as u64 + 1),
        });
    }
    Ok(partial.into_complete().expect("checked complete"))
}

/// Like [`factorize_big_with`] but keeps going past composites that exhaust
/// the budget, reporting them in `unfactored`.
pub fn factorize_partial_big(n: &BigUint, cfg: &FactorConfig) -> Result<PartialFactorization<BigUint>> {
    if n < &BigUint::from(2u32) {
        return Err(Error::InvalidInput(format!("cannot factorize {n}")));
    }
    if let Some(small) = n.to_u64() {
        let f = factorize_u64_with(small, cfg)?.to_big();
        return Ok(PartialFactorization {
            value: f.value,
            factors: f.factors,
            unfactored: Vec::new(),
        });
    }
    let mut primes: Vec<BigUint> = Vec::new();
    let mut rest = n.clone();
    for &p in trial_primes(cfg.trial_bound) {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        while (&rest % p).is_zero() {
            primes.push(pb.clone());
            rest /= p;
        }
    }
    let mut unfactored = Vec::new();
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            match factorize_u64_with(small, cfg) {
                Ok(f) => primes.extend(f.factors.into_iter().flat_map(|(p, e)| {
                    std::iter::repeat_n(BigUint::from(p), e as usize)
                })),
                Err(Error::FactorBudget { .. }) => unfactored.push(m),
                Err(e) => return Err(e),
            }
            continue;
        }
        if is_prime_big(&m) {
            primes.push(m);
            continue;
        }
        match split_big(&m, cfg) {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => unfactored.push(m),
        }
    }
    unfactored.sort();
    let f = Factorization::from_primes(n.clone(), primes);
    Ok(PartialFactorization {
        value: f.value,
        factors: f.factors,
        unfactored,
    })
}

fn split_big(n: &BigUint, cfg: &FactorConfig) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        return Some(r);
    }
    (0..=cfg.restarts as u64).find_map(|attempt| {
        brent_big(n, 1 + 2 * attempt, 2 + attempt, cfg.rho_budget)
    })
}

fn brent_big(n: &BigUint, c: u64, y0: u64, budget: u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let c = BigUint::from(c);
    let f = |y: &BigUint| (y * y + &c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a >= b { a - b } else { b - a };
    let mut y = BigUint::from(y0) % n;
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let (mut r, mut steps) = (1u64, 0u64);
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        steps += r;
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = (&q * diff(&x, &y)) % n;
            }
            steps += BATCH.min(r - k);
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
        if steps > budget && g.is_one() {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}
