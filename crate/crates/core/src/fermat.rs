//! Fermat quotients, the λ-lift, solution enumeration modulo `p` and `p²`,
//! CRT synthesis and searches for `q_p(a) = 0`.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{
    mul_mod_u128, pow_mod_u128, OrderContext, PrimeModulus, PrimeRange, SpfTable,
};
use crate::cyclotomic::phi_m_mod;
use crate::error::{Error, Result};

/// Default upper bound on `p` for the smallest-prime-factor sieve path.
/// Above it, quotients are computed by one exponentiation per `z`.
pub const DEFAULT_SIEVE_LIMIT: u64 = 1 << 27;

/// `q_p(a)` with its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FermatQuotientRecord {
    pub p: u64,
    pub a: u64,
    /// `((a^{p-1} mod p²) - 1) / p`, in `[0, p)`.
    pub q: u64,
}

/// `q_p(a)` for `p ∤ a`; callers must have checked divisibility.
#[inline]
pub(crate) fn quotient_unchecked(a: u64, p: &PrimeModulus) -> u64 {
    let r = p.pow_mod_p2(a as u128, p.p() - 1);
    ((r + p.p_squared() - 1) % p.p_squared() / p.p() as u128) as u64
}

/// `q_p(a) = ((a^{p-1} mod p²) - 1) / p`.
///
/// For `p = 2` this gives `q_2(a) = 0 ⇔ a ≡ 1 (mod 4)`, and `q_p(1) = 0`.
pub fn fermat_quotient(a: u64, p: &PrimeModulus) -> Result<FermatQuotientRecord> {
    if p.divides(a) {
        return Err(Error::divisible(a, p.p()));
    }
    Ok(FermatQuotientRecord {
        p: p.p(),
        a,
        q: quotient_unchecked(a, p),
    })
}

/// `q_p(a)` for arbitrary-precision `a` and `p`.
pub fn fermat_quotient_big(a: &BigUint, p: &BigUint) -> Result<BigUint> {
    if (a % p).is_zero() {
        return Err(Error::divisible(a, p));
    }
    let p2 = p * p;
    let r = a.modpow(&(p - 1u32), &p2);
    Ok(((r + &p2 - 1u32) % &p2) / p)
}

/// Whether `q_p(a) = 0` at a single pair (`p` is certified prime first).
pub fn point_check(a: u64, p: u64) -> Result<bool> {
    let pm = PrimeModulus::new(p)?;
    Ok(fermat_quotient(a, &pm)?.q == 0)
}

/// The three quotient definitions and their relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientVariants {
    pub p: u64,
    pub a: u64,
    pub order: u64,
    /// `t = (p-1)/o_p(a)`
    pub t: u64,
    pub q: u64,
    /// `q' = (a^{o} - 1)/p mod p`
    pub q_prime: u64,
    /// `q'' = Φ_{o}(a)/p mod p`
    pub q_second: u64,
    /// `q ≡ t·q' (mod p)`
    pub congruence_holds: bool,
    /// `q`, `q'`, `q''` vanish together or not at all.
    pub nullity_agrees: bool,
}

pub fn quotient_variants(a: u64, p: &PrimeModulus) -> Result<QuotientVariants> {
    let q = fermat_quotient(a, p)?.q;
    let pp = p.p();
    let o = OrderContext::new(*p)?.order(a)?;
    let t = (pp - 1) / o;
    let p2 = p.p_squared();
    let ao = p.pow_mod_p2(a as u128, o);
    let q_prime = ((ao + p2 - 1) % p2 / pp as u128) as u64;
    // a = 1: Φ_1(1) = 0, so q'' is 0 by convention.
    let q_second = if a == 1 {
        0
    } else {
        let phi = phi_m_mod(o, &BigUint::from(a), &BigUint::from(p2))?;
        let phi = phi.to_u128().expect("reduced modulo p²");
        debug_assert_eq!(phi % pp as u128, 0);
        (phi / pp as u128) as u64
    };
    let congruence_holds = q as u128 == (t as u128 * q_prime as u128) % pp as u128;
    let nullity_agrees = (q == 0) == (q_prime == 0) && (q == 0) == (q_second == 0);
    Ok(QuotientVariants {
        p: pp,
        a,
        order: o,
        t,
        q,
        q_prime,
        q_second,
        congruence_holds,
        nullity_agrees,
    })
}

/// The unique `Z ≡ z (mod p)` in `[1, p²)` with `q_p(Z) = u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lift {
    pub p: u64,
    pub z: u64,
    pub u: u64,
    /// `λ_u(z) = (Z - z)/p ≡ z (q_p(z) - u) (mod p)`
    pub lambda: u64,
    pub big_z: u128,
}

pub fn lift_to_solution(z: u64, u: u64, p: &PrimeModulus) -> Result<Lift> {
    let pp = p.p();
    if z == 0 || z >= pp || u >= pp {
        return Err(Error::InvalidInput(format!(
            "need 1 <= z < p and 0 <= u < p, got z = {z}, u = {u}, p = {pp}"
        )));
    }
    let qz = quotient_unchecked(z, p);
    let lambda = ((z as u128 * ((qz + pp - u) % pp) as u128) % pp as u128) as u64;
    Ok(Lift {
        p: pp,
        z,
        u,
        lambda,
        big_z: z as u128 + lambda as u128 * pp as u128,
    })
}

/// A solution `Z = z + λp` of `q_p(Z) = 0`, with `z ∈ [1, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolutionRecord {
    pub p: u64,
    pub z: u64,
    pub lambda: u64,
    /// `o_p(z)`
    pub order: u64,
}

/// All `q_p(z)` for `z ∈ [1, p)`, computed multiplicatively: one
/// exponentiation per prime `z`, and `q(uv) = q(u) + q(v)` along the
/// smallest-prime-factor decomposition for composites.
#[derive(Debug, Clone)]
pub struct QuotientSieve {
    p: PrimeModulus,
    q: Vec<u32>,
}

impl QuotientSieve {
    pub fn new(p: &PrimeModulus, spf: &SpfTable) -> Result<Self> {
        let pp = p.p();
        if pp >= 1 << 32 || spf.limit() < pp {
            return Err(Error::SieveLimit {
                p: pp,
                limit: spf.limit(),
            });
        }
        let n = pp as usize;
        let mut q = vec![0u32; n.max(2)];
        let (spf_raw, cof_raw) = spf.raw();
        for z in 2..n {
            let c = cof_raw[z];
            q[z] = if c == 1 {
                quotient_unchecked(z as u64, p) as u32
            } else {
                let s = q[spf_raw[z] as usize] as u64 + q[c as usize] as u64;
                (if s >= pp { s - pp } else { s }) as u32
            };
        }
        Ok(Self { p: *p, q })
    }

    /// Builds a private table; fails above `limit`.
    pub fn standalone(p: &PrimeModulus, limit: u64) -> Result<Self> {
        if p.p() > limit {
            return Err(Error::SieveLimit { p: p.p(), limit });
        }
        Self::new(p, &SpfTable::new(p.p())?)
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.p
    }

    /// `q_p(z)` for `1 <= z < p`.
    #[inline]
    pub fn quotient(&self, z: u64) -> u64 {
        self.q[z as usize] as u64
    }

    /// `λ(z) ≡ z·q_p(z) (mod p)`, so that `z^p ≡ z + λ(z)p (mod p²)`.
    #[inline]
    pub fn lambda(&self, z: u64) -> u64 {
        z * self.quotient(z) % self.p.p()
    }

    /// `q_p(z)` indexed by `z`; entry 0 is unused.
    pub fn quotients(&self) -> &[u32] {
        &self.q[..self.p.p() as usize]
    }

    /// `z ∈ [2, p)` with `q_p(z) = 0`, ascending.
    pub fn zeros(&self) -> impl Iterator<Item = u64> + '_ {
        self.quotients()
            .iter()
            .enumerate()
            .skip(2)
            .filter(|&(_, &q)| q == 0)
            .map(|(z, _)| z as u64)
    }
}

/// `z ∈ [2, p)` with `q_p(z) = 0`, using the sieve when `p <= sieve_limit` and
/// one exponentiation per `z` otherwise.
pub fn zeros_in_range(p: &PrimeModulus, sieve_limit: u64) -> Result<Vec<u64>> {
    let pp = p.p();
    if pp <= sieve_limit && pp < 1 << 31 {
        return Ok(QuotientSieve::standalone(p, sieve_limit)?.zeros().collect());
    }
    const CHUNK: u64 = 1 << 16;
    let chunks = pp.div_ceil(CHUNK);
    let found: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = (c * CHUNK).max(2);
            let hi = ((c + 1) * CHUNK).min(pp);
            (lo..hi).filter(|&z| quotient_unchecked(z, p) == 0).collect()
        })
        .collect();
    Ok(found.concat())
}

/// All `z ∈ [2, p)` with `q_p(z) = 0`, with their orders.
pub fn solutions_in_range(p: &PrimeModulus) -> Result<Vec<SolutionRecord>> {
    solutions_in_range_with_limit(p, DEFAULT_SIEVE_LIMIT)
}

pub fn solutions_in_range_with_limit(p: &PrimeModulus, sieve_limit: u64) -> Result<Vec<SolutionRecord>> {
    let zeros = zeros_in_range(p, sieve_limit)?;
    attach_orders(p, zeros)
}

/// Same as [`solutions_in_range`] but reusing a shared sieve table.
pub fn solutions_in_range_with(p: &PrimeModulus, spf: &SpfTable) -> Result<Vec<SolutionRecord>> {
    let zeros = QuotientSieve::new(p, spf)?.zeros().collect();
    attach_orders(p, zeros)
}

fn attach_orders(p: &PrimeModulus, zs: Vec<u64>) -> Result<Vec<SolutionRecord>> {
    if zs.is_empty() {
        return Ok(Vec::new());
    }
    let ctx = OrderContext::new(*p)?;
    zs.into_iter()
        .map(|z| {
            Ok(SolutionRecord {
                p: p.p(),
                z,
                lambda: 0,
                order: ctx.order(z)?,
            })
        })
        .collect()
}

/// The `p-1` solutions of `q_p(Z) = 0` in `[1, p²)`, i.e. `Z = z^p mod p²`.
pub fn solutions_mod_p2(p: &PrimeModulus) -> Vec<u128> {
    let mut out: Vec<u128> = (1..p.p()).map(|z| p.pow_mod_p2(z as u128, p.p())).collect();
    out.sort_unstable();
    out
}

/// Residues `A` modulo `∏ p²` with `q_p(A) = 0` for every listed prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtSolutionSet {
    pub primes: Vec<u64>,
    pub modulus: BigUint,
    pub residues: Vec<BigUint>,
}

/// Refuses to materialize more residues than this.
pub const CRT_MAX_RESIDUES: u128 = 1 << 26;

pub fn crt_solutions(primes: &[u64]) -> Result<CrtSolutionSet> {
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("primes must be distinct".into()));
    }
    let moduli: Vec<PrimeModulus> = primes.iter().map(|&p| PrimeModulus::new(p)).collect::<Result<_>>()?;
    let total: u128 = primes.iter().map(|&p| (p - 1) as u128).product();
    if total > CRT_MAX_RESIDUES {
        return Err(Error::InvalidInput(format!(
            "{total} residues exceed the limit {CRT_MAX_RESIDUES}"
        )));
    }
    let mut modulus = BigUint::one();
    let mut residues = vec![BigUint::zero()];
    for pm in &moduli {
        let p2 = BigUint::from(pm.p_squared());
        let local = solutions_mod_p2(pm);
        // x ≡ r (mod M), x ≡ s (mod p²):  x = r + M·((s - r)·M^{-1} mod p²)
        let m_inv = modulus
            .modinv(&p2)
            .expect("distinct primes give coprime moduli");
        let mut next = Vec::with_capacity(residues.len() * local.len());
        for r in &residues {
            let r_mod = r % &p2;
            for &s in &local {
                let s = BigUint::from(s);
                let diff = (&s + &p2 - &r_mod) % &p2;
                next.push(r + &modulus * ((diff * &m_inv) % &p2));
            }
        }
        modulus *= p2;
        residues = next;
    }
    residues.sort_unstable();
    Ok(CrtSolutionSet {
        primes: primes.to_vec(),
        modulus,
        residues,
    })
}

/// Orders of `g, g², …` while the integer power stays below `p`.
pub fn orders_of_powers(g: u64, p: &PrimeModulus) -> Result<Vec<u64>> {
    if g < 2 {
        return Err(Error::InvalidInput("g must be >= 2".into()));
    }
    if g >= p.p() {
        return Ok(Vec::new());
    }
    let ctx = OrderContext::new(*p)?;
    let mut out = Vec::new();
    let mut power = g;
    while power < p.p() {
        out.push(ctx.order(power)?);
        power = match power.checked_mul(g) {
            Some(x) => x,
            None => break,
        };
    }
    Ok(out)
}

/// `θ_j` with `a^j · a_j^{-1} ≡ 1 + θ_j p (mod p²)`, `a_j = a^j mod p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaOffset {
    pub j: u64,
    pub a_j: u64,
    pub theta: u64,
}

/// `θ_j` for `j = 1 … o_p(a) - 1`, each checked against
/// `q_p(a_j) ≡ j q_p(a) + θ_j (mod p)`.
pub fn theta_offsets(a: u64, p: &PrimeModulus) -> Result<Vec<ThetaOffset>> {
    let qa = fermat_quotient(a, p)?.q as u128;
    let o = OrderContext::new(*p)?.order(a)?;
    let pp = p.p() as u128;
    let p2 = p.p_squared();
    let a2 = a as u128 % p2;
    let mut out = Vec::with_capacity(o.saturating_sub(1) as usize);
    let mut aj_full = 1u128; // a^j mod p²
    for j in 1..o {
        aj_full = mul_mod_u128(aj_full, a2, p2);
        let a_j = (aj_full % pp) as u64;
        // a_j^{-1} mod p² via Euler: a_j^{p(p-1)-1}
        let inv = pow_mod_u128(a_j as u128, pp * (pp - 1) - 1, p2);
        let x = mul_mod_u128(aj_full, inv, p2);
        let theta = ((x + p2 - 1) % p2 / pp) as u64;
        let lhs = quotient_unchecked(a_j, p) as u128;
        let rhs = (j as u128 % pp * qa + theta as u128) % pp;
        if lhs != rhs {
            return Err(Error::Inconsistency(format!(
                "q_p(a_{j}) = {lhs} but j q_p(a) + θ_{j} = {rhs} for a = {a}, p = {pp}"
            )));
        }
        out.push(ThetaOffset { j, a_j, theta });
    }
    Ok(out)
}

/// Least prime `p ∈ [p_lo, p_hi]` with `p ∤ a` and `q_p(a) = 0`.
///
/// The range is cut into fixed chunks searched in parallel; the first chunk
/// (in range order) that contains a solution wins, so the result does not
/// depend on scheduling.
pub fn first_solution_search(a: u64, p_lo: u64, p_hi: u64) -> Option<u64> {
    const CHUNK: u64 = 1 << 22;
    if p_hi < p_lo {
        return None;
    }
    let chunks = (p_hi - p_lo) / CHUNK + 1;
    (0..chunks).into_par_iter().find_map_first(|c| {
        let lo = p_lo + c * CHUNK;
        let hi = lo.saturating_add(CHUNK - 1).min(p_hi);
        first_solution_serial(a, lo, hi)
    })
}

/// Sequential scan of `[p_lo, p_hi]` for the least prime with `q_p(a) = 0`.
pub fn first_solution_serial(a: u64, p_lo: u64, p_hi: u64) -> Option<u64> {
    PrimeRange::new(p_lo, p_hi).find(|&p| {
        let pm = PrimeModulus::from_sieved(p);
        !pm.divides(a) && quotient_unchecked(a, &pm) == 0
    })
}

/// All primes `p < p_bound` with `q_p(a) = 0` (`p ∤ a`).
pub fn zero_primes(a: u64, p_bound: u64) -> Vec<u64> {
    if p_bound < 3 {
        return Vec::new();
    }
    PrimeRange::new(2, p_bound - 1)
        .filter(|&p| {
            let pm = PrimeModulus::from_sieved(p);
            !pm.divides(a) && quotient_unchecked(a, &pm) == 0
        })
        .collect()
}

/// Pairs `(a, p)` with `a ∈ [a_lo, a_hi]`, `p < p_bound` and `q_p(a) = 0`,
/// ordered by `a` then `p`.
pub fn first_zeros_table(a_lo: u64, a_hi: u64, p_bound: u64) -> Vec<(u64, u64)> {
    (a_lo..=a_hi)
        .flat_map(|a| zero_primes(a, p_bound).into_iter().map(move |p| (a, p)))
        .collect()
}

/// Mean number of zero quotients per base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AverageCount {
    pub a_lo: u64,
    pub a_hi: u64,
    pub p_bound: u64,
    /// Total count of pairs `(a, p)`, the `p = 2` cases included.
    pub total: u64,
    /// `(a, count)` for every base.
    pub per_base: Vec<(u64, u64)>,
    pub mean: Ratio<u64>,
}

/// Mean over `a ∈ [a_lo, a_hi]` of `|{p < p_bound : q_p(a) = 0}|`.
///
/// As in the original program, `p = 2` is tallied separately through
/// `a ≡ 1 (mod 4)`; odd primes go through the exponentiation test.
pub fn average_solution_count(a_lo: u64, a_hi: u64, p_bound: u64) -> Result<AverageCount> {
    if a_lo < 2 || a_hi < a_lo {
        return Err(Error::InvalidInput(format!("need 2 <= a_lo <= a_hi, got [{a_lo}, {a_hi}]")));
    }
    let bases: Vec<u64> = (a_lo..=a_hi).collect();
    let mut counts: Vec<u64> = bases
        .iter()
        .map(|&a| u64::from(p_bound > 2 && a % 4 == 1))
        .collect();
    if p_bound > 3 {
        const CHUNK: u64 = 1 << 20;
        let chunks = (p_bound - 3) / CHUNK + 1;
        let partial: Vec<Vec<u64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = 3 + c * CHUNK;
                let hi = (lo + CHUNK - 1).min(p_bound - 1);
                let mut local = vec![0u64; bases.len()];
                for p in PrimeRange::new(lo, hi) {
                    let pm = PrimeModulus::from_sieved(p);
                    for (i, &a) in bases.iter().enumerate() {
                        // Multiples of p give a^{p-1} ≡ 0, never 1.
                        if !pm.divides(a) && quotient_unchecked(a, &pm) == 0 {
                            local[i] += 1;
                        }
                    }
                }
                local
            })
            .collect();
        for local in partial {
            for (c, l) in counts.iter_mut().zip(local) {
                *c += l;
            }
        }
    }
    let total: u64 = counts.iter().sum();
    Ok(AverageCount {
        a_lo,
        a_hi,
        p_bound,
        total,
        per_base: bases.into_iter().zip(counts).collect(),
        mean: Ratio::new(total, a_hi - a_lo + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn quotients() {
        assert_eq!(fermat_quotient(3, &pm(11)).unwrap().q, 0);
        assert_eq!(fermat_quotient(1, &pm(13)).unwrap().q, 0);
        assert_eq!(fermat_quotient(2, &pm(7)).unwrap().q, 2);
        assert_eq!(fermat_quotient(5, &pm(2)).unwrap().q, 0);
        assert_eq!(fermat_quotient(7, &pm(2)).unwrap().q, 1);
        assert!(fermat_quotient(22, &pm(11)).is_err());
        let big = fermat_quotient_big(&BigUint::from(2u32), &BigUint::from(7u32)).unwrap();
        assert_eq!(big, BigUint::from(2u32));
    }

    #[test]
    fn variants() {
        let v = quotient_variants(14, &pm(29)).unwrap();
        assert_eq!((v.q, v.q_prime, v.q_second), (0, 0, 0));
        assert!(v.nullity_agrees && v.congruence_holds);
        let v = quotient_variants(2, &pm(7)).unwrap();
        assert_eq!((v.order, v.q_prime, v.t, v.q), (3, 1, 2, 2));
        assert!(v.congruence_holds && v.nullity_agrees);
        let v = quotient_variants(1, &pm(7)).unwrap();
        assert_eq!((v.q, v.q_prime, v.q_second, v.order), (0, 0, 0, 1));
    }

    #[test]
    fn lifts() {
        let l = lift_to_solution(3, 0, &pm(11)).unwrap();
        assert_eq!((l.big_z, l.lambda), (3, 0));
        assert_eq!(lift_to_solution(2, 0, &pm(11)).unwrap().big_z, 112);
        let q = fermat_quotient(5, &pm(13)).unwrap().q;
        let l = lift_to_solution(5, q, &pm(13)).unwrap();
        assert_eq!((l.big_z, l.lambda), (5, 0));
        assert!(lift_to_solution(0, 0, &pm(11)).is_err());
    }

    #[test]
    fn small_solution_lists() {
        let s = solutions_in_range(&pm(29)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].z, s[0].order, s[0].lambda), (14, 28, 0));
        assert_eq!(solutions_mod_p2(&pm(11)), [1, 3, 9, 27, 40, 81, 94, 112, 118, 120]);
        assert_eq!(solutions_mod_p2(&pm(3)), [1, 8]);
        // Fallback path agrees with the sieve.
        assert_eq!(
            zeros_in_range(&pm(1093), 0).unwrap(),
            zeros_in_range(&pm(1093), DEFAULT_SIEVE_LIMIT).unwrap()
        );
    }

    #[test]
    fn crt() {
        let s = crt_solutions(&[5, 7]).unwrap();
        let expected = [
            1u32, 18, 68, 99, 226, 276, 293, 324, 374, 393, 557, 607, 618, 668, 832, 851, 901, 932,
            949, 999, 1126, 1157, 1207, 1224,
        ];
        assert_eq!(s.modulus, BigUint::from(1225u32));
        assert_eq!(s.residues, expected.map(BigUint::from));
        assert_eq!(crt_solutions(&[2, 3]).unwrap().residues.len(), 2);
        assert!(crt_solutions(&[5, 5]).is_err());
    }

    #[test]
    fn powers_and_offsets() {
        assert_eq!(
            orders_of_powers(3, &pm(37813)).unwrap(),
            [18906, 9453, 6302, 9453, 18906, 3151, 18906, 9453, 6302]
        );
        assert_eq!(
            orders_of_powers(5, &pm(37813)).unwrap(),
            [37812, 18906, 12604, 9453, 37812, 6302]
        );
        assert!(orders_of_powers(40000, &pm(37813)).unwrap().is_empty());
        let th = theta_offsets(2, &pm(7)).unwrap();
        assert_eq!(th.len(), 2);
        assert!(th.iter().all(|t| t.theta == 0));
        let th = theta_offsets(3, &pm(11)).unwrap();
        assert_eq!((th[0].theta, th[1].theta), (0, 0));
    }

    #[test]
    fn searches() {
        assert_eq!(first_solution_search(2, 2, 10_000), Some(1093));
        assert_eq!(first_solution_search(2, 1094, 10_000), Some(3511));
        assert_eq!(first_solution_search(2, 3512, 100_000), None);
        assert!(point_check(34, 46_145_917_691).unwrap());
        let avg = average_solution_count(2, 14, 100).unwrap();
        assert_eq!(avg.mean, Ratio::new(10, 13));
    }
}
