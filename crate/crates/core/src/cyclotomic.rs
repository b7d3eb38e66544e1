//! Exact cyclotomic values `Φ_m(a)`, the reduced value `Φ̃_m(a)`, and checks of
//! their gcd structure and prime factors.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{
    divisors, factorize_partial_big, factorize_u64, moebius, multiplicative_order, FactorConfig,
    Factorization, PrimeModulus,
};
use crate::error::{Error, Result};
use crate::fermat::fermat_quotient;

/// Above this many bits for `a^m`, checks switch to modular arithmetic.
pub const EXACT_BITS_LIMIT: f64 = (1u64 << 20) as f64;

/// `Φ_m(a)` with its gcd against `m` stripped off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicEvaluation {
    pub m: u64,
    pub a: u64,
    pub value: BigInt,
    /// `gcd(Φ_m(a), m)`: 1 or a single prime `r`.
    pub gcd_with_m: u64,
    pub reduced: BigInt,
    /// When `gcd_with_m = r > 1`: `(r, e, o_r(a))` with `m = r^e · o_r(a)`.
    pub ramification: Option<(u64, u32, u64)>,
}

pub(crate) fn divisors_of(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![1];
    }
    divisors(&factorize_u64(m).expect("u64 factorization")).divisors
}

/// `Φ_m(a) = ∏_{d | m} (a^d - 1)^{μ(m/d)}`, evaluated exactly.
pub fn phi_m_eval(m: u64, a: impl Into<BigInt>) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be >= 1".into()));
    }
    let a = a.into();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for d in divisors_of(m) {
        let mu = moebius(m / d);
        if mu == 0 {
            continue;
        }
        let term: BigInt = num_traits::pow(a.clone(), d as usize) - 1;
        if term.is_zero() {
            return Err(Error::InvalidInput(format!("a^{d} - 1 vanishes for a = {a}")));
        }
        if mu == 1 {
            num *= term;
        } else {
            den *= term;
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero(), "Möbius product must divide exactly");
    if !r.is_zero() {
        return Err(Error::StructuralViolation(format!(
            "Möbius product for Φ_{m}({a}) is not integral"
        )));
    }
    Ok(q)
}

/// Coefficients of `Φ_m(x)`, constant term first, by dividing `x^m - 1` by
/// `Φ_d` for the proper divisors `d` of `m`.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "m must be >= 1");
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[m as usize] = BigInt::one();
    for d in divisors_of(m) {
        if d < m {
            poly = poly_div_exact(&poly, &cyclotomic_poly(d));
        }
    }
    poly
}

/// Exact division by a monic polynomial.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Horner evaluation of an integer polynomial.
pub fn poly_eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Evaluates `Φ_m(a)` and strips `gcd(Φ_m(a), m)`, verifying that the gcd is 1
/// or a single prime `r` with `m = r^e · o_r(a)`.
pub fn reduce(m: u64, a: u64) -> Result<CyclotomicEvaluation> {
    if a < 2 {
        return Err(Error::InvalidInput(format!("base a = {a} must be >= 2")));
    }
    let value = phi_m_eval(m, a)?;
    let g = value.gcd(&BigInt::from(m)).to_u64().expect("gcd divides m");
    let mut ramification = None;
    if g > 1 {
        let f = factorize_u64(g)?;
        if f.factors.len() != 1 || f.factors[0].1 != 1 {
            return Err(Error::StructuralViolation(format!(
                "gcd(Φ_{m}({a}), {m}) = {g} is not 1 or a prime"
            )));
        }
        let r = g;
        let mut e = 0;
        let mut rest = m;
        while rest.is_multiple_of(r) {
            rest /= r;
            e += 1;
        }
        let o = multiplicative_order(a % r, &PrimeModulus::new(r)?)?;
        if e == 0 || rest != o {
            return Err(Error::StructuralViolation(format!(
                "gcd(Φ_{m}({a}), {m}) = {r} but {m} != {r}^e · o_{r}({a}) = {r}^{e}·{o}"
            )));
        }
        ramification = Some((r, e, o));
    }
    let reduced = &value / g;
    Ok(CyclotomicEvaluation {
        m,
        a,
        value,
        gcd_with_m: g,
        reduced,
        ramification,
    })
}

/// Outcome of [`factor_congruence_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCongruence {
    /// True iff every certified prime factor `ℓ` satisfies `ℓ ≡ 1 (mod m)`.
    pub holds: bool,
    pub factors: Vec<(BigUint, u32)>,
    /// Primes found with `ℓ ≢ 1 (mod m)`; empty unless the theorem fails.
    pub violations: Vec<BigUint>,
    /// Composite cofactors left unsplit by the factoring budget.
    pub unfactored: Vec<BigUint>,
}

impl FactorCongruence {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }
}

/// Checks that every prime factor of `Φ̃_m(a)` is `≡ 1 (mod m)`.
pub fn factor_congruence_check(m: u64, a: u64, cfg: &FactorConfig) -> Result<FactorCongruence> {
    if m == 2 {
        return Err(Error::InvalidInput("m = 2 is excluded".into()));
    }
    let ev = reduce(m, a)?;
    let reduced = ev.reduced.to_biguint().expect("Φ_m(a) > 0 for a >= 2");
    let (factors, unfactored) = if reduced.is_one() {
        (Vec::new(), Vec::new())
    } else {
        let partial = factorize_partial_big(&reduced, cfg)?;
        (partial.factors, partial.unfactored)
    };
    let violations: Vec<BigUint> = factors
        .iter()
        .filter(|(l, _)| !(l % m).is_one() && m != 1)
        .map(|(l, _)| l.clone())
        .collect();
    Ok(FactorCongruence {
        holds: violations.is_empty(),
        factors,
        violations,
        unfactored,
    })
}

/// Outcome of [`pairwise_coprime_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseCoprimality {
    pub a: u64,
    pub m_max: u64,
    /// True iff no pair other than the documented `(1, 2)` exception shares a factor.
    pub holds: bool,
    /// Pairs `(m, m', gcd)` with a nontrivial gcd, excluding the exception.
    pub violations: Vec<(u64, u64, BigInt)>,
    /// `gcd(Φ̃_1(a), Φ̃_2(a))` when it is not 1. With `Φ̃_1(a) = a - 1`
    /// (division by `gcd(Φ_1(a), 1) = 1`) this is 2 exactly when `a ≡ 3 (mod 4)`.
    pub exception_1_2: Option<BigInt>,
}

/// Checks `gcd(Φ̃_m(a), Φ̃_{m'}(a)) = 1` for all `1 <= m < m' <= m_max`.
pub fn pairwise_coprime_check(a: u64, m_max: u64) -> Result<PairwiseCoprimality> {
    if m_max < 2 {
        return Err(Error::InvalidInput("m_max must be >= 2".into()));
    }
    let reduced: Vec<BigInt> = (1..=m_max)
        .map(|m| reduce(m, a).map(|ev| ev.reduced))
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    let mut exception = None;
    for i in 0..reduced.len() {
        for j in i + 1..reduced.len() {
            let g = reduced[i].gcd(&reduced[j]);
            if g.is_one() {
                continue;
            }
            let (m, m2) = (i as u64 + 1, j as u64 + 1);
            if (m, m2) == (1, 2) {
                exception = Some(g);
            } else {
                violations.push((m, m2, g));
            }
        }
    }
    Ok(PairwiseCoprimality {
        a,
        m_max,
        holds: violations.is_empty(),
        violations,
        exception_1_2: exception,
    })
}

/// Both sides of the Wieferich criterion at `(a, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WieferichEquivalence {
    pub a: u64,
    pub p: u64,
    pub order: u64,
    /// `q_p(a) = 0`
    pub quotient_zero: bool,
    /// `p² | Φ̃_{o_p(a)}(a)`
    pub cyclotomic_divisible: bool,
    /// Whether the cyclotomic side was evaluated exactly (else modulo `p²`).
    pub exact: bool,
}

/// Confirms `q_p(a) = 0 ⇔ p² | Φ̃_{o_p(a)}(a)` and returns the shared truth value.
pub fn wieferich_equivalence_check(a: u64, p: &PrimeModulus) -> Result<bool> {
    wieferich_equivalence(a, p).map(|w| w.quotient_zero)
}

pub fn wieferich_equivalence(a: u64, p: &PrimeModulus) -> Result<WieferichEquivalence> {
    if p.divides(a) {
        return Err(Error::divisible(a, p.p()));
    }
    let quotient_zero = fermat_quotient(a, p)?.q == 0;
    let o = multiplicative_order(a, p)?;
    let p2 = BigUint::from(p.p_squared());
    // The gcd with o is prime to p (o | p-1), so divisibility by p² can be
    // read off Φ_o(a) itself on the modular path.
    let exact = a >= 2 && o as f64 * (a as f64).log2() <= EXACT_BITS_LIMIT;
    let cyclotomic_divisible = if a == 1 {
        // Φ_1(1) = 0 is divisible by everything.
        true
    } else if exact {
        let ev = reduce(o, a)?;
        (ev.reduced.magnitude() % &p2).is_zero()
    } else {
        phi_m_mod(o, &BigUint::from(a), &p2)?.is_zero()
    };
    if quotient_zero != cyclotomic_divisible {
        return Err(Error::Inconsistency(format!(
            "q_{}({a}) = 0 is {quotient_zero} but p² | Φ̃_{o}({a}) is {cyclotomic_divisible}",
            p.p()
        )));
    }
    Ok(WieferichEquivalence {
        a,
        p: p.p(),
        order: o,
        quotient_zero,
        cyclotomic_divisible,
        exact,
    })
}

/// `Φ_m(a) mod n` by the Möbius product, valid when every `a^d - 1` with
/// `μ(m/d) = -1` is a unit modulo `n`.
pub fn phi_m_mod(m: u64, a: &BigUint, n: &BigUint) -> Result<BigUint> {
    let a = BigInt::from_biguint(Sign::Plus, a.clone());
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for d in divisors_of(m) {
        let mu = moebius(m / d);
        if mu == 0 {
            continue;
        }
        let power: BigInt = a.modpow(&BigInt::from(d), &n_int);
        let term: BigInt = (power - BigInt::one()).mod_floor(&n_int);
        if mu == 1 {
            num = (num * term) % &n_int;
        } else {
            den = (den * term) % &n_int;
        }
    }
    let inv = den.modinv(&n_int).ok_or_else(|| {
        Error::InvalidInput(format!("Möbius denominator of Φ_{m} is not a unit modulo {n}"))
    })?;
    Ok((num * inv).mod_floor(&n_int).magnitude().clone())
}

/// Factorization of `Φ̃_m(a)`, if the factoring budget allows.
pub fn reduced_factorization(m: u64, a: u64, cfg: &FactorConfig) -> Result<Factorization<BigUint>> {
    let ev = reduce(m, a)?;
    let reduced = ev.reduced.abs().to_biguint().expect("non-negative");
    if reduced.is_one() {
        return Ok(Factorization {
            value: reduced,
            factors: Vec::new(),
        });
    }
    crate::arith::factorize_big_with(&reduced, cfg)
}
