//! Statistics over λ-values and solution counts, and the binomial model
//! `Bin(p-2, 1/p)` for the number of `z ∈ [2, p)` with `q_p(z) = 0`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{PrimeModulus, PrimeRange, SpfTable};
use crate::error::{Error, Result};
use crate::fermat::QuotientSieve;
use crate::scalar::{CompensatedSum, Real};
use crate::special::ln_choose;

/// Primes in the half-open window `(b, b + h]`, ascending.
pub fn window_primes(b: u64, h: u64) -> Vec<u64> {
    PrimeRange::new(b + 1, b + h).collect()
}

/// Runs `f` on the quotient sieve of every prime in `primes` (in parallel over
/// a shared smallest-prime-factor table) and returns the results in order.
pub fn map_sieves<T, F>(primes: &[u64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&QuotientSieve) -> T + Sync,
{
    let Some(&max) = primes.iter().max() else {
        return Ok(Vec::new());
    };
    let spf = SpfTable::new(max + 1)?;
    primes
        .par_iter()
        .map(|&p| {
            let sieve = QuotientSieve::new(&PrimeModulus::new(p)?, &spf)?;
            Ok(f(&sieve))
        })
        .collect()
}

/// Primes in `(b, b + h]` tallied by their number of solutions in `[2, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassificationCounts {
    pub b: u64,
    pub h: u64,
    pub n0: u64,
    pub n1: u64,
    pub n2: u64,
    pub n3_plus: u64,
    pub n_total: u64,
}

impl ClassificationCounts {
    /// `N0/N`, `(N1+N2+N3)/N`, `(N2+N3)/N`, `N3/N`: the observed
    /// frequencies of 0, ≥1, ≥2 and ≥3 solutions.
    pub fn proportions<F: Real>(&self) -> [F; 4] {
        let n = F::of_u64(self.n_total);
        [
            F::of_u64(self.n0) / n,
            F::of_u64(self.n1 + self.n2 + self.n3_plus) / n,
            F::of_u64(self.n2 + self.n3_plus) / n,
            F::of_u64(self.n3_plus) / n,
        ]
    }
}

/// The limiting model values `e⁻¹, 1 - e⁻¹, 1 - 2e⁻¹, 1 - (5/2)e⁻¹`.
pub fn model_constants<F: Real>() -> [F; 4] {
    let e = (-F::one()).exp();
    [
        e,
        F::one() - e,
        F::one() - F::lit(2.0) * e,
        F::one() - F::lit(2.5) * e,
    ]
}

pub fn classify_primes(b: u64, h: u64) -> Result<ClassificationCounts> {
    if b < 2 || h < 1 {
        return Err(Error::InvalidInput(format!("need B >= 2 and H >= 1, got B = {b}, H = {h}")));
    }
    classify_over(b, h, &window_primes(b, h))
}

/// Classification over an explicit prime list (e.g. a window plus the first
/// prime past it, as a `nextprime` loop visits).
pub fn classify_over(b: u64, h: u64, primes: &[u64]) -> Result<ClassificationCounts> {
    let counts = map_sieves(primes, |s| s.zeros().count())?;
    let mut c = ClassificationCounts {
        b,
        h,
        n0: 0,
        n1: 0,
        n2: 0,
        n3_plus: 0,
        n_total: counts.len() as u64,
    };
    for n in counts {
        match n {
            0 => c.n0 += 1,
            1 => c.n1 += 1,
            2 => c.n2 += 1,
            _ => c.n3_plus += 1,
        }
    }
    Ok(c)
}

/// Residues `u ∈ [0, p)` that are not `q_p(z)` for any `z ∈ [2, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueCoverage {
    pub p: u64,
    pub missing: Vec<u64>,
}

impl ValueCoverage {
    /// `|missing| / (p - 1)`, the normalization of the original experiment.
    pub fn fraction<F: Real>(&self) -> F {
        F::of_u64(self.missing.len() as u64) / F::of_u64(self.p - 1)
    }

    /// `|missing| / p`, the share of residues never attained.
    pub fn fraction_of_residues<F: Real>(&self) -> F {
        F::of_u64(self.missing.len() as u64) / F::of_u64(self.p)
    }
}

pub fn value_coverage(p: &PrimeModulus) -> Result<ValueCoverage> {
    if p.p() < 3 {
        return Err(Error::InvalidInput("p must be >= 3".into()));
    }
    let sieve = QuotientSieve::standalone(p, crate::fermat::DEFAULT_SIEVE_LIMIT)?;
    let mut hit = vec![false; p.p() as usize];
    for &q in &sieve.quotients()[2..] {
        hit[q as usize] = true;
    }
    Ok(ValueCoverage {
        p: p.p(),
        missing: (0..p.p()).filter(|&u| !hit[u as usize]).collect(),
    })
}

/// All `z ∈ [2, p)` with `λ(z) = v`.
pub fn lambda_multiplicity(p: &PrimeModulus, v: u64) -> Result<Vec<u64>> {
    if v >= p.p() {
        return Err(Error::InvalidInput(format!("v = {v} must be < p = {}", p.p())));
    }
    let sieve = QuotientSieve::standalone(p, crate::fermat::DEFAULT_SIEVE_LIMIT)?;
    Ok((2..p.p()).filter(|&z| sieve.lambda(z) == v).collect())
}

/// Per-`v` counts `K` of primes with at least `threshold` witnesses of `λ(z) = v`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicitySurvey {
    pub b: u64,
    pub h: u64,
    pub threshold: u64,
    /// Seed used to draw the `v` values, when they were drawn at random.
    pub seed: Option<u64>,
    pub per_v: Vec<(u64, u64)>,
    pub n_primes: u64,
    /// `Σ K / (|v_list| · n_primes)`
    pub ratio: f64,
}

impl MultiplicitySurvey {
    pub fn total_k(&self) -> u64 {
        self.per_v.iter().map(|&(_, k)| k).sum()
    }

    /// `Σ K / (|v_list| · n)` for an arbitrary normalizing prime count `n`.
    pub fn ratio_over(&self, n: u64) -> f64 {
        self.total_k() as f64 / (self.per_v.len() as f64 * n as f64)
    }
}

pub fn multiplicity_survey(b: u64, h: u64, v_list: &[u64], threshold: u64) -> Result<MultiplicitySurvey> {
    if b < 2 || h < 1 {
        return Err(Error::InvalidInput(format!("need B >= 2 and H >= 1, got B = {b}, H = {h}")));
    }
    if v_list.is_empty() {
        return Err(Error::InvalidInput("v list is empty".into()));
    }
    let primes = window_primes(b, h);
    let hits: Vec<Vec<bool>> = map_sieves(&primes, |s| {
        let p = s.modulus().p();
        let mut hist = vec![0u32; p as usize];
        for z in 2..p {
            hist[s.lambda(z) as usize] += 1;
        }
        v_list
            .iter()
            .map(|&v| v < p && hist[v as usize] as u64 >= threshold)
            .collect()
    })?;
    let per_v: Vec<(u64, u64)> = v_list
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, hits.iter().filter(|row| row[i]).count() as u64))
        .collect();
    let mut survey = MultiplicitySurvey {
        b,
        h,
        threshold,
        seed: None,
        per_v,
        n_primes: primes.len() as u64,
        ratio: 0.0,
    };
    survey.ratio = survey.ratio_over(survey.n_primes);
    Ok(survey)
}

/// [`multiplicity_survey`] on `count` values drawn uniformly from `[0, v_bound)`.
pub fn multiplicity_survey_random(
    b: u64,
    h: u64,
    count: usize,
    v_bound: u64,
    threshold: u64,
    seed: u64,
) -> Result<MultiplicitySurvey> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v_list: Vec<u64> = (0..count).map(|_| rng.gen_range(0..v_bound)).collect();
    let mut survey = multiplicity_survey(b, h, &v_list, threshold)?;
    survey.seed = Some(seed);
    Ok(survey)
}

/// Cumulated over primes `p < B`: solutions `z < (p-1)/t` against all solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equidistribution {
    pub b: u64,
    pub t: f64,
    pub n_t: u64,
    pub n: u64,
    pub n_over_t: f64,
}

pub fn equidistribution_nt(b: u64, t: f64) -> Result<Equidistribution> {
    equidistribution_over(&PrimeRange::new(3, b.saturating_sub(1)).collect::<Vec<_>>(), b, t)
}

/// [`equidistribution_nt`] over an explicit prime list.
pub fn equidistribution_over(primes: &[u64], b: u64, t: f64) -> Result<Equidistribution> {
    if !(t >= 1.0) {
        return Err(Error::InvalidInput(format!("t = {t} must be >= 1")));
    }
    let per_prime = map_sieves(primes, |s| {
        let cut = (s.modulus().p() - 1) as f64 / t;
        let zs: Vec<u64> = s.zeros().collect();
        let below = zs.iter().filter(|&&z| (z as f64) < cut).count() as u64;
        (below, zs.len() as u64)
    })?;
    let (n_t, n) = per_prime
        .into_iter()
        .fold((0, 0), |(a, b), (x, y)| (a + x, b + y));
    Ok(Equidistribution {
        b,
        t,
        n_t,
        n,
        n_over_t: n as f64 / t,
    })
}

/// `σ_n(p) = 2(n+1)/(p-1)^{n+1} · Σ_{z=1}^{(p-1)/2} λ(z)^n`, kept exact.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub p: u64,
    pub n: u32,
    /// `Σ λ(z)^n` over `z ∈ [1, (p-1)/2]`.
    pub power_sum: BigUint,
    pub sigma_exact: BigRational,
    /// Correctly rounded `σ_n(p)`.
    pub sigma: f64,
}

impl MomentReport {
    /// `σ_n(p)` truncated to `digits` decimals.
    pub fn decimal(&self, digits: usize) -> String {
        decimal_expansion(&self.sigma_exact, digits)
    }
}

/// Fixed-width little-endian accumulator for sums of `λ^n`.
struct WideSum {
    limbs: Vec<u64>,
    scratch: Vec<u64>,
}

impl WideSum {
    fn new(limbs: usize) -> Self {
        Self {
            limbs: vec![0; limbs],
            scratch: vec![0; limbs],
        }
    }

    fn add_power(&mut self, base: u64, n: u32) {
        self.scratch.fill(0);
        self.scratch[0] = 1;
        let mut len = 1;
        for _ in 0..n {
            let mut carry = 0u128;
            for limb in &mut self.scratch[..len] {
                let t = *limb as u128 * base as u128 + carry;
                *limb = t as u64;
                carry = t >> 64;
            }
            if carry > 0 {
                self.scratch[len] = carry as u64;
                len += 1;
            }
        }
        self.add_limbs(len);
    }

    fn add_limbs(&mut self, len: usize) {
        let mut carry = 0u64;
        for i in 0..self.limbs.len() {
            if i >= len && carry == 0 {
                break;
            }
            let add = if i < len { self.scratch[i] } else { 0 };
            let (s1, c1) = self.limbs[i].overflowing_add(add);
            let (s2, c2) = s1.overflowing_add(carry);
            self.limbs[i] = s2;
            carry = (c1 as u64) + (c2 as u64);
        }
        debug_assert_eq!(carry, 0, "accumulator overflow");
    }

    fn to_biguint(&self) -> BigUint {
        let words: Vec<u32> = self
            .limbs
            .iter()
            .flat_map(|&w| [w as u32, (w >> 32) as u32])
            .collect();
        BigUint::from_slice(&words)
    }
}

pub fn sigma_moment(p: &PrimeModulus, n: u32) -> Result<MomentReport> {
    let pp = p.p();
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    if pp < 3 {
        return Err(Error::InvalidInput("p must be odd".into()));
    }
    let half = (pp - 1) / 2;
    let bits = n as u64 * 64 + 64;
    let limbs = bits.div_ceil(64) as usize + 1;
    const CHUNK: u64 = 1 << 16;
    let chunks = half.div_ceil(CHUNK);
    let partial: Vec<BigUint> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = WideSum::new(limbs);
            let lo = 1 + c * CHUNK;
            let hi = (lo + CHUNK - 1).min(half);
            for z in lo..=hi {
                let zp = p.pow_mod_p2(z as u128, pp);
                let lambda = ((zp - z as u128) / pp as u128) as u64;
                acc.add_power(lambda, n);
            }
            acc.to_biguint()
        })
        .collect();
    let power_sum: BigUint = partial.into_iter().sum();
    let num = BigInt::from(power_sum.clone()) * BigInt::from(2 * (n as u64 + 1));
    let den = num_traits::pow(BigInt::from(pp - 1), n as usize + 1);
    let sigma_exact = BigRational::new(num, den);
    let sigma = rational_to_f64(&sigma_exact);
    Ok(MomentReport {
        p: pp,
        n,
        power_sum,
        sigma_exact,
        sigma,
    })
}

/// Decimal expansion of a non-negative rational, truncated to `digits` decimals.
pub fn decimal_expansion(x: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (x.numer() * &scale) / x.denom();
    let s = scaled.to_string();
    if digits == 0 {
        return s;
    }
    let s = format!("{:0>width$}", s, width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{int}.{frac}")
}

/// Nearest `f64` to a rational (via a 40-digit decimal expansion).
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.abs() < 9.0e15 && d < 9.0e15 {
            return n / d;
        }
    }
    let neg = x.numer() < &BigInt::zero();
    let a = if neg { -x.clone() } else { x.clone() };
    // Shift into [1, 10^40) so that 40 significant digits survive.
    let int_digits = a.to_integer().to_string().len() as i64;
    let shift = 40 - int_digits;
    let scaled = if shift >= 0 {
        (a.numer() * num_traits::pow(BigInt::from(10), shift as usize)) / a.denom()
    } else {
        a.numer() / (a.denom() * num_traits::pow(BigInt::from(10), (-shift) as usize))
    };
    let v: f64 = format!("{scaled}e{}", -shift).parse().expect("decimal literal");
    if neg {
        -v
    } else {
        v
    }
}

/// `P(X >= n)` for `X ~ Bin(p-2, 1/p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialTail<F> {
    pub p: u64,
    pub n: u64,
    pub prob: F,
}

/// `ln` of the term `C(p-2, j) p^{-j} (1 - 1/p)^{p-2-j}`.
fn ln_term<F: Real>(p: u64, j: u64) -> F {
    let pf = F::of_u64(p);
    ln_choose::<F>(p - 2, j) - F::of_u64(j) * pf.ln() + F::of_u64(p - 2 - j) * (-(F::one() / pf)).ln_1p()
}

/// Tail `1 - Σ_{j<n} C(p-2,j) p^{-j} (1-1/p)^{p-2-j}`, summed directly from
/// `j = n` upwards with the term ratio `(p-2-j)/((j+1)(p-1))`.
pub fn binomial_tail<F: Real>(p: u64, n: u64) -> Result<BinomialTail<F>> {
    if p < 2 || n > p.saturating_sub(2) {
        return Err(Error::InvalidInput(format!("need 0 <= n <= p-2, got n = {n}, p = {p}")));
    }
    if n == 0 {
        return Ok(BinomialTail { p, n, prob: F::one() });
    }
    let mut term = ln_term::<F>(p, n).exp();
    let mut sum = CompensatedSum::new();
    let pm1 = F::of_u64(p - 1);
    let mut j = n;
    loop {
        sum.add(term);
        if j == p - 2 {
            break;
        }
        let next = term * F::of_u64(p - 2 - j) / (F::of_u64(j + 1) * pm1);
        // Terms decay at least geometrically once j + 1 > (p - 2)/(p - 1).
        if next <= sum.value() * F::epsilon() * F::lit(1e-3) {
            break;
        }
        term = next;
        j += 1;
    }
    Ok(BinomialTail {
        p,
        n,
        prob: sum.value().min(F::one()),
    })
}

/// `C(p-2, n) / p^n`, the first-moment bound on the tail.
pub fn tail_upper_bound<F: Real>(p: u64, n: u64) -> F {
    (ln_choose::<F>(p - 2, n) - F::of_u64(n) * F::of_u64(p).ln()).exp()
}

/// Checks `P(X >= n) < C(p-2, n)/p^n` for `n >= 1`.
pub fn tail_upper_bound_check(p: u64, n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidInput("the bound is strict only for n >= 1".into()));
    }
    let tail = binomial_tail::<f64>(p, n)?.prob;
    let bound = tail_upper_bound::<f64>(p, n);
    if tail < bound {
        Ok(true)
    } else {
        Err(Error::BoundViolation(format!(
            "P(X >= {n}) = {tail} is not below C(p-2,{n})/p^{n} = {bound} at p = {p}"
        )))
    }
}

/// Largest `h` with `a^h <= p`, i.e. `⌊log p / log a⌋`.
pub fn floor_log(p: u64, a: u64) -> u64 {
    assert!(a >= 2, "base must be >= 2");
    let mut h = 0;
    let mut power = 1u64;
    while let Some(next) = power.checked_mul(a) {
        if next > p {
            break;
        }
        power = next;
        h += 1;
    }
    h
}

/// The tail at `n = h = ⌊log p/log a⌋` relative to `C(p-2,h)/p^h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEncadre<F> {
    pub p: u64,
    pub a: u64,
    pub h: u64,
    /// `e⁻¹ (S + 1)` with the original recurrence `S ← (S+1)k/((p-1)(p-1-k))`.
    pub ratio: F,
    /// `exp(-1 + (h + 3/2)/p)`
    pub lower: F,
    pub upper: F,
    pub holds: bool,
}

pub fn ratio_encadre<F: Real>(p: u64, a: u64) -> Result<RatioEncadre<F>> {
    if a < 2 || p <= a {
        return Err(Error::InvalidInput(format!("need 2 <= a < p, got a = {a}, p = {p}")));
    }
    let h = floor_log(p, a);
    let pm1 = F::of_u64(p - 1);
    let mut s = F::zero();
    for k in 1..=(p - 2).saturating_sub(h) {
        let kf = F::of_u64(k);
        s = (s + F::one()) * kf / (pm1 * F::of_u64(p - 1 - k));
    }
    let ratio = (-F::one()).exp() * (s + F::one());
    let lower = (-F::one() + (F::of_u64(h) + F::lit(1.5)) / F::of_u64(p)).exp();
    let upper = F::one();
    Ok(RatioEncadre {
        p,
        a,
        h,
        ratio,
        lower,
        upper,
        holds: ratio > lower && ratio <= upper,
    })
}

/// `ε` with `P = p^{-(1+ε)}`, where `P = 1 - Σ_{j=0}^{h} (…)` is the tail at
/// `n = h + 1`, `h = ⌊log p/log a⌋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonReport<F> {
    pub p: u64,
    pub a: u64,
    pub h: u64,
    pub prob: F,
    pub epsilon: F,
}

pub fn epsilon_exponent<F: Real>(p: u64, a: u64) -> Result<EpsilonReport<F>> {
    if a < 2 || p <= a {
        return Err(Error::InvalidInput(format!("need 2 <= a < p, got a = {a}, p = {p}")));
    }
    let h = floor_log(p, a);
    let prob = binomial_tail::<F>(p, h + 1)?.prob;
    let epsilon = -F::one() - prob.ln() / F::of_u64(p).ln();
    Ok(EpsilonReport { p, a, h, prob, epsilon })
}

/// Exact `P(X >= n)` as a rational, for small `p` (oracle use).
pub fn binomial_tail_exact(p: u64, n: u64) -> BigRational {
    let big = |x: u64| BigInt::from(x);
    let nn = p - 2;
    let mut head = BigRational::zero();
    let mut binom = BigInt::one();
    for j in 0..n {
        if j > 0 {
            binom = binom * big(nn - j + 1) / big(j);
        }
        let num = &binom * num_traits::pow(big(p - 1), (nn - j) as usize);
        let den = num_traits::pow(big(p), nn as usize);
        head += BigRational::new(num, den);
    }
    BigRational::one() - head
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn coverage() {
        let c = value_coverage(&pm(11)).unwrap();
        assert_eq!(c.missing, [3, 6, 8, 9]);
        let c = value_coverage(&pm(3)).unwrap();
        assert_eq!(c.missing, [0, 2]);
        assert_relative_eq!(c.fraction_of_residues::<f64>(), 2.0 / 3.0);
        assert!((value_coverage(&pm(1093)).unwrap().fraction::<f64>() - 0.60348).abs() < 5e-6);
        assert!((value_coverage(&pm(3511)).unwrap().fraction::<f64>() - 0.60285).abs() < 5e-6);
    }

    #[test]
    fn multiplicity() {
        assert_eq!(lambda_multiplicity(&pm(97), 41).unwrap(), [54, 68, 75, 92]);
        let total: usize = (0..11).map(|v| lambda_multiplicity(&pm(11), v).unwrap().len()).sum();
        assert_eq!(total, 9);
        assert_eq!(lambda_multiplicity(&pm(29), 0).unwrap(), [14]);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn tiny_classification() {
        let c = classify_primes(2, 40).unwrap();
        assert_eq!(c.n_total, 12); // 3..41
        assert_eq!(c.n0 + c.n1 + c.n2 + c.n3_plus, c.n_total);
        let model = model_constants::<f64>();
        assert_relative_eq!(model[0], 0.36787944117144233);
        assert!((model[3] - 0.0803014).abs() < 1e-7);
    }

    #[test]
    fn small_moment() {
        let m = sigma_moment(&pm(5), 1).unwrap();
        assert_eq!(m.sigma, 0.25);
        assert_eq!(m.decimal(3), "0.250");
    }

    #[test]
    fn wide_sum_matches_bigint() {
        let mut acc = WideSum::new(10);
        let mut reference = BigUint::zero();
        for base in [3u64, 10_000_000, u32::MAX as u64, 12345] {
            acc.add_power(base, 11);
            reference += num_traits::pow(BigUint::from(base), 11);
        }
        assert_eq!(acc.to_biguint(), reference);
    }

    #[test]
    fn tails() {
        assert_eq!(binomial_tail::<f64>(101, 0).unwrap().prob, 1.0);
        for p in [5u64, 11, 101] {
            for n in 1..4 {
                let exact = rational_to_f64(&binomial_tail_exact(p, n));
                assert_relative_eq!(binomial_tail::<f64>(p, n).unwrap().prob, exact, max_relative = 1e-12);
            }
        }
        assert!(tail_upper_bound_check(101, 3).unwrap());
        assert!(tail_upper_bound_check(11, 1).unwrap());
        assert!(tail_upper_bound_check(11, 0).is_err());
    }

    #[test]
    fn ex4_rows() {
        let e = epsilon_exponent::<f64>(10007, 2).unwrap();
        assert!((e.prob / 4.473e-12 - 1.0).abs() < 1e-3);
        assert!((e.epsilon - 1.837).abs() < 1e-3);
        let e = epsilon_exponent::<f64>(127, 2).unwrap();
        assert!((e.epsilon - 0.985).abs() < 1e-3);
    }

    #[test]
    fn ratio() {
        let r = ratio_encadre::<f64>(100_003, 2).unwrap();
        assert_eq!(r.h, 16);
        assert!((r.ratio - 0.3908).abs() < 5e-4 && r.holds);
    }

    #[test]
    fn rationals() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(decimal_expansion(&r, 5), "0.33333");
        assert_eq!(rational_to_f64(&r), 1.0 / 3.0);
        let big = BigRational::new(num_traits::pow(BigInt::from(10), 50) + 1, num_traits::pow(BigInt::from(10), 50));
        assert_eq!(rational_to_f64(&big), 1.0);
    }
}
