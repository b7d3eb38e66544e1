//! Eratosthenes sieves: a flat sieve for small bounds, a segmented iterator for
//! long ranges, and a smallest-prime-factor table for multiplicative sieving.

use crate::error::{Error, Result};

/// Default segment length (in integers) of [`PrimeRange`].
pub const DEFAULT_BLOCK: usize = 1 << 20;

/// All primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    // Index i represents the odd number 2i+1.
    let half = n / 2 + 1;
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_pi(n as u64));
    primes.push(2);
    primes.extend(
        (1..half)
            .filter(|&i| !composite[i] && 2 * i < n)
            .map(|i| (2 * i + 1) as u64),
    );
    primes
}

fn estimate_pi(n: u64) -> usize {
    if n < 10 {
        return 4;
    }
    let x = n as f64;
    (1.3 * x / x.ln()) as usize
}

/// Ascending stream of the primes in `[lo, hi]`, produced block by block.
#[derive(Debug, Clone)]
pub struct PrimeRange {
    base: Vec<u64>,
    next_lo: u64,
    hi: u64,
    block: u64,
    buffer: Vec<u64>,
    pos: usize,
    done: bool,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Self {
        Self::with_block(lo, hi, DEFAULT_BLOCK)
    }

    pub fn with_block(lo: u64, hi: u64, block: usize) -> Self {
        let lo = lo.max(2);
        let done = hi < lo;
        let base = if done { Vec::new() } else { primes_up_to(isqrt(hi)) };
        Self {
            base,
            next_lo: lo,
            hi,
            block: block.max(64) as u64,
            buffer: Vec::new(),
            pos: 0,
            done,
        }
    }

    fn fill(&mut self) {
        self.buffer.clear();
        self.pos = 0;
        while self.buffer.is_empty() && !self.done {
            let lo = self.next_lo;
            let hi = lo.saturating_add(self.block - 1).min(self.hi);
            sieve_segment(&self.base, lo, hi, &mut self.buffer);
            if hi == self.hi {
                self.done = true;
            } else {
                self.next_lo = hi + 1;
            }
        }
    }
}

impl Iterator for PrimeRange {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pos == self.buffer.len() {
            self.fill();
        }
        let p = *self.buffer.get(self.pos)?;
        self.pos += 1;
        Some(p)
    }
}

/// Appends the primes of `[lo, hi]` to `out`; `base` must hold every prime `<= sqrt(hi)`.
fn sieve_segment(base: &[u64], lo: u64, hi: u64, out: &mut Vec<u64>) {
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut j = (start - lo) as usize;
        while j < len {
            composite[j] = true;
            j += p as usize;
        }
    }
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|&(i, &c)| !c && lo + i as u64 >= 2)
            .map(|(i, _)| lo + i as u64),
    );
}

/// The primes in `[lo, hi]`, collected.
pub fn prime_range(lo: u64, hi: u64) -> Vec<u64> {
    PrimeRange::new(lo, hi).collect()
}

/// Number of primes in `[lo, hi]`.
pub fn prime_count(lo: u64, hi: u64) -> u64 {
    PrimeRange::new(lo, hi).count() as u64
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = ((n as f64).sqrt() as u64).min(u32::MAX as u64);
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Smallest-prime-factor table over `[0, limit)`.
///
/// For each composite `z` both `spf(z)` and the cofactor `z / spf(z)` are
/// stored, so walking a factorization needs no division.
#[derive(Debug, Clone)]
pub struct SpfTable {
    spf: Vec<u32>,
    cofactor: Vec<u32>,
}

/// Largest limit accepted by [`SpfTable::new`] (indices are `u32`).
pub const SPF_MAX_LIMIT: u64 = 1 << 31;

impl SpfTable {
    /// Builds the table for `[0, limit)` with a linear sieve.
    pub fn new(limit: u64) -> Result<Self> {
        if limit > SPF_MAX_LIMIT {
            return Err(Error::SieveLimit {
                p: limit,
                limit: SPF_MAX_LIMIT,
            });
        }
        let n = limit.max(2) as usize;
        let mut spf = vec![0u32; n];
        let mut cofactor = vec![0u32; n];
        let mut primes: Vec<u32> = Vec::with_capacity(estimate_pi(n as u64));
        for i in 2..n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                cofactor[i] = 1;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let j = i * p as usize;
                if p > si || j >= n {
                    break;
                }
                spf[j] = p;
                cofactor[j] = i as u32;
            }
        }
        Ok(Self { spf, cofactor })
    }

    /// Exclusive upper bound of the table.
    pub fn limit(&self) -> u64 {
        self.spf.len() as u64
    }

    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    /// `n / spf(n)`; equals 1 exactly when `n` is prime.
    #[inline]
    pub fn cofactor(&self, n: u64) -> u64 {
        self.cofactor[n as usize] as u64
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.cofactor[n as usize] == 1
    }

    pub(crate) fn raw(&self) -> (&[u32], &[u32]) {
        (&self.spf, &self.cofactor)
    }

    /// Prime factorization of `2 <= n < limit` as ascending `(prime, exponent)` pairs.
    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf(n);
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
            n = self.cofactor(n);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranges() {
        assert_eq!(prime_range(2, 10), [2, 3, 5, 7]);
        assert_eq!(prime_range(0, 1), Vec::<u64>::new());
        assert_eq!(prime_range(14, 16), Vec::<u64>::new());
        assert_eq!(prime_range(97, 97), [97]);
        assert_eq!(primes_up_to(30), [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(2), [2]);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
    }

    #[test]
    fn block_boundaries_do_not_matter() {
        let flat = prime_range(1000, 20000);
        for block in [64, 100, 997, 4096] {
            let seg: Vec<u64> = PrimeRange::with_block(1000, 20000, block).collect();
            assert_eq!(seg, flat, "block {block}");
        }
    }

    #[test]
    fn ten_million_window() {
        let ps = prime_range(10_000_000, 10_000_200);
        for p in [10000019, 10000079, 10000103, 10000121, 10000139] {
            assert!(ps.contains(&p));
        }
    }

    #[test]
    fn spf_table() {
        let t = SpfTable::new(1000).unwrap();
        assert_eq!(t.factor(28), [(2, 2), (7, 1)]);
        assert_eq!(t.factor(997), [(997, 1)]);
        assert_eq!(t.spf(91), 7);
        assert_eq!(t.cofactor(91), 13);
        assert!(t.is_prime(2) && !t.is_prime(1) && !t.is_prime(999));
        assert!(SpfTable::new(SPF_MAX_LIMIT + 1).is_err());
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(99), 9);
        assert_eq!(isqrt(100), 10);
        assert_eq!(isqrt(u64::MAX), (1 << 32) - 1);
    }
}
