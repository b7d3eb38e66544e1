//! Local densities, prime products over arithmetic progressions, the density
//! of integers with no vanishing Fermat quotient below `x`, the partial sums
//! `S(x)` and the convergence threshold `p₀` of the binomial heuristic.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::arith::{
    euler_phi, factorize_u64, is_prime, isqrt, mul_mod, next_prime, phi_squared_sum,
    phi_squared_sum_big, primes_up_to, OrderContext, PrimeModulus, PrimeRange,
};
use crate::cyclotomic::cyclotomic_poly;
use crate::error::{Error, Result};
use crate::fermat::solutions_mod_p2;
use crate::scalar::{CompensatedSum, LogProduct, Real};
use crate::stats::{binomial_tail, floor_log};

/// Loop bound of the progression products (`p = 1 + n·m`, `n <= 2·10⁶`).
pub const PM_DEFAULT_TERMS: u64 = 2_000_000;

/// `1.9436 · e^{-γ}`, the constant in `∏_{p<=x} D_p ≈ 1.09125 / log x`.
pub const DP_CONSTANT: f64 = 1.09125;

/// Rounded constant used for the small-interval survey comparison.
pub const SURVEY_CONSTANT: f64 = 1.09;

/// Segment length of the `S(x)` sieve.
pub const S_SEGMENT: u64 = 1 << 24;
const S_SUBBLOCK: usize = 1 << 18;

/// A partial product or sum over primes up to `bound`, with its asymptotic
/// comparison value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport<F> {
    pub bound: u64,
    pub value: F,
    pub reference: F,
    pub terms_used: u64,
}

/// Number of residues `A mod p²` with `p² | Φ_m(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalDensityCoefficient {
    pub m: u64,
    pub p: u64,
    pub c_p: u64,
}

pub fn c_p(m: u64, p: u64) -> Result<LocalDensityCoefficient> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be >= 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let c = if m.is_multiple_of(p) {
        // Φ_m(A) is then divisible by p at most once, except Φ_2(A) = A + 1 at p = 2.
        u64::from(m == 2 && p == 2)
    } else if p % m == 1 || m == 1 {
        totient(m)?
    } else {
        0
    };
    Ok(LocalDensityCoefficient { m, p, c_p: c })
}

fn totient(m: u64) -> Result<u64> {
    Ok(if m == 1 { 1 } else { euler_phi(&factorize_u64(m)?) })
}

/// `|{A ∈ [1, p²) : Φ_m(A) ≡ 0 (mod p²)}|` by direct evaluation.
pub fn c_p_bruteforce(m: u64, p: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be >= 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let p2 = p.checked_mul(p).filter(|&p2| p2 < 1 << 40).ok_or_else(|| {
        Error::InvalidInput(format!("p = {p} too large for enumeration"))
    })?;
    let modulus = num_bigint::BigInt::from(p2);
    let coeffs: Vec<u64> = cyclotomic_poly(m)
        .iter()
        .map(|c| c.mod_floor(&modulus).to_u64().expect("reduced coefficient"))
        .collect();
    let count = (1..p2)
        .into_par_iter()
        .filter(|&a| {
            coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| (mul_mod(acc, a, p2) + c) % p2)
                == 0
        })
        .count();
    Ok(count as u64)
}

/// `∏ (1 - φ(m)/p²)` over the primes `p = 1 + n·m`, `1 <= n <= n_max`.
///
/// `reference` holds the lower bound `1 - φ(m) Σ 1/p²` over the same primes.
pub fn p_m_product<F: Real>(m: u64, n_max: u64) -> Result<DensityReport<F>> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be >= 1".into()));
    }
    let top = n_max
        .checked_mul(m)
        .and_then(|x| x.checked_add(1))
        .ok_or_else(|| Error::InvalidInput(format!("1 + {n_max}·{m} overflows")))?;
    let f = F::of_u64(totient(m)?);
    let primes: Vec<u64> = (1..=n_max)
        .into_par_iter()
        .map(|n| 1 + n * m)
        .filter(|&p| is_prime(p))
        .collect();
    debug_assert!(primes.last().is_none_or(|&p| p <= top));

    let mut product = LogProduct::new();
    let mut inv_squares = CompensatedSum::new();
    for &p in &primes {
        let pf = F::of_u64(p);
        let x = f / (pf * pf);
        product.mul_one_plus(-x);
        inv_squares.add(x);
    }
    Ok(DensityReport {
        bound: top,
        value: product.value(),
        reference: F::one() - inv_squares.value(),
        terms_used: product.factors(),
    })
}

/// A solution `A ∈ [1, p²)` of `q_p(A) = 0` with the order of `A` modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LocalSolution {
    pub order: u64,
    pub a: u128,
}

/// All `p-1` solutions modulo `p²`, sorted by order then by `A`.
pub fn local_solution_table(p: &PrimeModulus) -> Result<Vec<LocalSolution>> {
    let ctx = OrderContext::new(*p)?;
    let mut out = solutions_mod_p2(p)
        .into_iter()
        .map(|a| {
            Ok(LocalSolution {
                order: ctx.order((a % p.p() as u128) as u64)?,
                a,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    Ok(out)
}

/// `∏_{p<=x} D_p` with `D_p = 1 - 1/p + 1/p²`, split as
/// `∏(1 - 1/p) · ∏(1 + 1/(p(p-1)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpProduct<F> {
    /// `value` is the full product, `reference` is `1.09125 / log x`.
    pub report: DensityReport<F>,
    pub mertens: F,
    /// `e^{-γ} / log x`
    pub mertens_reference: F,
    pub correction: F,
    /// `correction · exp(Σ_{p>x} 1/(p(p-1)))` with the tail estimated by `1/(x log x)`.
    pub correction_extrapolated: F,
}

pub fn dp_product<F: Real>(x: u64) -> Result<DpProduct<F>> {
    if x < 2 {
        return Err(Error::InvalidInput("x must be >= 2".into()));
    }
    let mut full = LogProduct::new();
    let mut mertens = LogProduct::new();
    let mut correction = LogProduct::new();
    for p in PrimeRange::new(2, x) {
        let pf = F::of_u64(p);
        let inv = pf.recip();
        full.mul_one_plus(inv * inv - inv);
        mertens.mul_one_plus(-inv);
        correction.mul_one_plus((pf * (pf - F::one())).recip());
    }
    let xf = F::of_u64(x);
    let lx = xf.ln();
    let tail = (xf * lx).recip();
    Ok(DpProduct {
        report: DensityReport {
            bound: x,
            value: full.value(),
            reference: F::lit(DP_CONSTANT) / lx,
            terms_used: full.factors(),
        },
        mertens: mertens.value(),
        mertens_reference: (-F::euler_gamma()).exp() / lx,
        correction: correction.value(),
        correction_extrapolated: (correction.ln() + tail).exp(),
    })
}

/// `∏_{p<=x} (p² - p + 1)/p²` as an exact rational.
pub fn dp_product_exact(x: u64) -> BigRational {
    PrimeRange::new(2, x).fold(BigRational::one(), |acc, p| {
        let p = num_bigint::BigInt::from(p);
        acc * BigRational::new(&p * &p - &p + 1, &p * &p)
    })
}

/// Residues `A` modulo `∏_{p<=x} p²` with `q_p(A) ≠ 0` for every `p <= x`
/// (multiples of `p` count as non-zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtCount {
    pub x: u64,
    pub count: BigUint,
    pub modulus: BigUint,
}

impl CrtCount {
    pub fn density(&self) -> BigRational {
        BigRational::new(self.count.clone().into(), self.modulus.clone().into())
    }
}

pub fn crt_exact_count(x: u64) -> Result<CrtCount> {
    if x < 2 {
        return Err(Error::InvalidInput("x must be >= 2".into()));
    }
    let mut count = BigUint::one();
    let mut modulus = BigUint::one();
    for p in PrimeRange::new(2, x) {
        let pm = PrimeModulus::new(p)?;
        let p2 = BigUint::from(pm.p_squared());
        count *= &p2 - BigUint::from(solutions_mod_p2(&pm).len());
        modulus *= p2;
    }
    Ok(CrtCount { x, count, modulus })
}

/// Outcome of [`survey_nonzero`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveyReport {
    pub y: u64,
    pub x: u64,
    pub a_range: (u64, u64),
    pub last_prime: u64,
    pub count: u64,
    /// `y · 1.09 / log x`
    pub comparator: f64,
}

/// Counts `A ∈ [2, y]` with `A^{p-1} ≢ 1 (mod p²)` for every prime `p <= x`.
pub fn survey_nonzero(y: u64, x: u64) -> Result<SurveyReport> {
    if y < 2 || x < 2 {
        return Err(Error::InvalidInput("y and x must be >= 2".into()));
    }
    Ok(survey_over(y, x, 2, y, primes_up_to(x)))
}

/// Same count over the ranges the original loop visits: `A ∈ [2, y+1]` and
/// primes up to the first prime above `x`.
pub fn survey_nonzero_loop(y: u64, x: u64) -> Result<SurveyReport> {
    if y < 2 || x < 2 {
        return Err(Error::InvalidInput("y and x must be >= 2".into()));
    }
    let mut primes = primes_up_to(x);
    primes.push(next_prime(x));
    Ok(survey_over(y, x, 2, y + 1, primes))
}

/// Number of `A ∈ [a_lo, a_hi]` with `A^{p-1} ≢ 1 (mod p²)` for every `p` in
/// `primes` (which must be prime). Lets a long survey run in resumable pieces.
pub fn survey_count(a_lo: u64, a_hi: u64, primes: &[u64]) -> u64 {
    let moduli: Vec<PrimeModulus> = primes.iter().map(|&p| PrimeModulus::from_sieved(p)).collect();
    (a_lo..=a_hi)
        .into_par_iter()
        .filter(|&a| moduli.iter().all(|pm| !vanishes(a, pm)))
        .count() as u64
}

fn survey_over(y: u64, x: u64, a_lo: u64, a_hi: u64, primes: Vec<u64>) -> SurveyReport {
    let count = survey_count(a_lo, a_hi, &primes);
    SurveyReport {
        y,
        x,
        a_range: (a_lo, a_hi),
        last_prime: primes.last().copied().unwrap_or(0),
        count,
        comparator: y as f64 * SURVEY_CONSTANT / (x as f64).ln(),
    }
}

#[inline]
fn vanishes(a: u64, pm: &PrimeModulus) -> bool {
    pm.pow_mod_p2(a as u128, pm.p() - 1) == 1
}

/// `υ`, `η` and their difference at one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaUpsilon<F> {
    pub p: BigUint,
    pub c: F,
    pub eta: F,
    pub upsilon: F,
    pub difference: F,
}

/// `υ(p) = (2 log(p-1) - log Σ_{d|p-1} φ(d)²) / log p`.
pub fn upsilon<F: Real>(p: u64) -> Result<F> {
    let s = phi_squared_sum(p)?;
    Ok((F::lit(2.0) * F::of_u64(p - 1).ln() - F::of_u64(s).ln()) / F::of_u64(p).ln())
}

/// `η(p) = C · log log log p / log p`.
pub fn eta<F: Real>(p: u64, c: F) -> Result<F> {
    if p < 17 {
        return Err(Error::InvalidInput(format!("log log log p needs p >= 17, got {p}")));
    }
    let lp = F::of_u64(p).ln();
    Ok(c * lp.ln().ln() / lp)
}

pub fn eta_minus_upsilon<F: Real>(p: u64, c: F) -> Result<EtaUpsilon<F>> {
    let eta = eta(p, c)?;
    let upsilon = upsilon(p)?;
    Ok(EtaUpsilon {
        p: BigUint::from(p),
        c,
        eta,
        upsilon,
        difference: eta - upsilon,
    })
}

/// [`eta_minus_upsilon`] for primes beyond 64 bits; `p-1` must factor within
/// the default budget.
pub fn eta_minus_upsilon_big<F: Real>(p: &BigUint, c: F) -> Result<EtaUpsilon<F>> {
    if *p < BigUint::from(17u32) {
        return Err(Error::InvalidInput(format!("log log log p needs p >= 17, got {p}")));
    }
    let s = phi_squared_sum_big(p)?;
    let lp = ln_big(p);
    let eta = F::lit(c.to_f64().expect("finite") * lp.ln().ln() / lp);
    let upsilon = F::lit((2.0 * ln_big(&(p - 1u32)) - ln_big(&s)) / lp);
    Ok(EtaUpsilon {
        p: p.clone(),
        c,
        eta,
        upsilon,
        difference: eta - upsilon,
    })
}

/// Natural log of an arbitrary-size positive integer.
pub fn ln_big(n: &BigUint) -> f64 {
    let shift = n.bits().saturating_sub(64);
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `S(x) = Σ_{p<=x} Σ_{d|p-1} φ(d)² / (p (p-1)²)`, with `½ log log x` as reference.
///
/// `p-1` is factored by a segmented sieve; `x` is limited to `2^31`.
pub fn s_partial<F: Real>(x: u64) -> Result<DensityReport<F>> {
    if x < 2 {
        return Err(Error::InvalidInput("x must be >= 2".into()));
    }
    if x > 1 << 31 {
        return Err(Error::SieveLimit { p: x, limit: 1 << 31 });
    }
    let small: Vec<u32> = primes_up_to(isqrt(x)).into_iter().map(|q| q as u32).collect();
    // p = 2: the only divisor of 1 contributes 1/(2·1).
    let mut sum = CompensatedSum::new();
    sum.add(F::lit(0.5));
    let mut terms = 1u64;

    // Rows are n = p - 1 in [lo, hi).
    let mut rem = vec![0u32; S_SEGMENT as usize];
    let mut acc = vec![0u64; S_SEGMENT as usize];
    let mut lo = 2u64;
    while lo < x {
        let hi = (lo + S_SEGMENT).min(x);
        let len = (hi - lo) as usize;
        let blocks: Vec<(F, u64)> = rem[..len]
            .par_chunks_mut(S_SUBBLOCK)
            .zip(acc[..len].par_chunks_mut(S_SUBBLOCK))
            .enumerate()
            .map(|(k, (rem, acc))| {
                let start = lo + (k * S_SUBBLOCK) as u64;
                s_block::<F>(start, rem, acc, &small)
            })
            .collect();
        for (s, n) in blocks {
            sum.add(s);
            terms += n;
        }
        lo = hi;
    }
    let xf = F::of_u64(x);
    Ok(DensityReport {
        bound: x,
        value: sum.value(),
        reference: F::lit(0.5) * xf.ln().ln(),
        terms_used: terms,
    })
}

/// Factors every `n ∈ [start, start + len)` and sums the terms of the odd primes `p = n + 1`.
fn s_block<F: Real>(start: u64, rem: &mut [u32], acc: &mut [u64], small: &[u32]) -> (F, u64) {
    let end = start + rem.len() as u64;
    for (i, (r, a)) in rem.iter_mut().zip(acc.iter_mut()).enumerate() {
        *r = (start + i as u64) as u32;
        *a = 1;
    }
    for &q in small {
        let q64 = q as u64;
        let first = start.div_ceil(q64) * q64;
        let mut n = first;
        while n < end {
            let i = (n - start) as usize;
            let mut r = rem[i];
            let mut local = 1u64;
            let mut prev = 1u64;
            while r.is_multiple_of(q) {
                r /= q;
                let next = prev * q64;
                let phi = next - prev;
                local += phi * phi;
                prev = next;
            }
            rem[i] = r;
            acc[i] *= local;
            n += q64;
        }
    }
    let mut sum = CompensatedSum::new();
    let mut terms = 0;
    for p in PrimeRange::new((start + 1).max(3), end) {
        let i = (p - 1 - start) as usize;
        let r = rem[i] as u64;
        let s = if r > 1 { acc[i] * (1 + (r - 1) * (r - 1)) } else { acc[i] };
        let pf = F::of_u64(p);
        let nf = F::of_u64(p - 1);
        sum.add(F::of_u64(s) / (pf * nf * nf));
        terms += 1;
    }
    (sum.value(), terms)
}

/// Partial sums of the series attached to the binomial heuristic for base `a`,
/// over primes `p <= bound` with `h = ⌊log p / log a⌋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSums<F> {
    pub a: u64,
    pub bound: u64,
    /// `Σ C(p-2,h)/p^h`
    pub binom_sum: F,
    /// `Σ h/h!`
    pub stirling_sum: F,
    /// `Σ P(X >= h)` with `X ~ Bin(p-2, 1/p)`
    pub full_tail_sum: F,
    /// `e⁻¹ · binom_sum`
    pub heuristic_sum: F,
}

pub fn series_sums<F: Real>(a: u64, bound: u64) -> Result<SeriesSums<F>> {
    if a < 2 {
        return Err(Error::InvalidInput("a must be >= 2".into()));
    }
    let primes = primes_up_to(bound);
    let terms: Vec<(F, F, F)> = primes
        .par_iter()
        .map(|&p| {
            let h = floor_log(p, a);
            let pf = F::of_u64(p);
            let binom = if h + 2 > p {
                F::zero()
            } else {
                (0..h).fold(F::one(), |t, i| t * F::of_u64(p - 2 - i) / (F::of_u64(i + 1) * pf))
            };
            let stirling = if h == 0 {
                F::zero()
            } else {
                (1..h).fold(F::of_u64(h), |t, i| t / F::of_u64(i + 1))
            };
            let tail = match binomial_tail::<F>(p, h) {
                Ok(t) => Ok(t.prob),
                Err(_) if h + 2 > p => Ok(F::zero()),
                Err(e) => Err(e),
            }?;
            Ok((binom, stirling, tail))
        })
        .collect::<Result<_>>()?;
    let mut sums = [CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new()];
    for (b, s, t) in terms {
        sums[0].add(b);
        sums[1].add(s);
        sums[2].add(t);
    }
    let binom_sum = sums[0].value();
    Ok(SeriesSums {
        a,
        bound,
        binom_sum,
        stirling_sum: sums[1].value(),
        full_tail_sum: sums[2].value(),
        heuristic_sum: (-F::one()).exp() * binom_sum,
    })
}

/// Root of the convergence-exponent equation and the prime threshold above it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P0Solution {
    pub a: u64,
    pub c: f64,
    pub root: f64,
    pub bracket: (f64, f64),
    /// Smallest prime `>= root`.
    pub p0: u64,
}

/// `(log₂x − log₂a − 1)/log a − (log₂x − log₂a)/log(x²) − C`, `log₂ = log ∘ log`.
pub fn p0_expression(a: u64, c: f64, x: f64) -> f64 {
    let la = (a as f64).ln();
    let llx = x.ln().ln();
    let lla = la.ln();
    (llx - lla - 1.0) / la - (llx - lla) / (x * x).ln() - c
}

/// Bracket tried first; when it holds no sign change the search widens over
/// `[10^0.5, 10^18]` in half-decade steps.
pub const P0_BRACKET: (f64, f64) = (1e2, 1e12);

pub fn p0_solver(a: u64, c: f64) -> Result<P0Solution> {
    if a < 2 || !(c >= 1.0) {
        return Err(Error::InvalidInput(format!("need a >= 2 and C >= 1, got a = {a}, C = {c}")));
    }
    let f = |x: f64| p0_expression(a, c, x);
    let bracket = if f(P0_BRACKET.0) < 0.0 && f(P0_BRACKET.1) > 0.0 {
        P0_BRACKET
    } else {
        let grid: Vec<f64> = (1..=36).map(|k| 10f64.powf(k as f64 / 2.0)).collect();
        grid.windows(2)
            .find(|w| f(w[0]) < 0.0 && f(w[1]) >= 0.0)
            .map(|w| (w[0], w[1]))
            .ok_or(Error::NoBracket { lo: grid[0], hi: grid[grid.len() - 1] })?
    };
    let (mut lo, mut hi) = bracket;
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    if root >= 1.8e19 {
        return Err(Error::InvalidInput(format!("root {root} beyond 64-bit range")));
    }
    let ceil = root.ceil() as u64;
    let p0 = if ceil >= 1 { next_prime(ceil - 1) } else { 2 };
    Ok(P0Solution { a, c, root, bracket, p0 })
}
