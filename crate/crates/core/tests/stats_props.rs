use fermat_core::arith::{primes_up_to, PrimeModulus};
use fermat_core::stats::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn prime_in(lo: u64, hi: u64) -> impl Strategy<Value = u64> {
    (lo..hi).prop_map(fermat_core::arith::next_prime)
}

proptest! {
    #[test]
    fn tails_decrease_in_n(p in prime_in(5, 10_000)) {
        let mut prev = 1.0f64;
        for n in 0..=(p - 2).min(40) {
            let t = binomial_tail::<f64>(p, n).unwrap().prob;
            prop_assert!(t <= prev + 1e-15, "p = {}, n = {}", p, n);
            prev = t;
        }
    }

    #[test]
    fn epsilon_is_consistent_with_the_tail(p in prime_in(20, 1_000_000), a in 2u64..12) {
        prop_assume!(a < p);
        let e = epsilon_exponent::<f64>(p, a).unwrap();
        let t = binomial_tail::<f64>(p, e.h + 1).unwrap().prob;
        prop_assert!((e.epsilon - (-1.0 - t.ln() / (p as f64).ln())).abs() < 1e-6);
    }

    #[test]
    fn ratio_stays_inside_its_bounds(p in prime_in(20, 200_000), a in 2u64..12) {
        prop_assume!(a < p);
        let r = ratio_encadre::<f64>(p, a).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }
}

fn first_tail_closed_form(p: u64) -> BigRational {
    // 1 - (1 - 1/p)^p (p/(p-1))²
    let big = |x: u64| BigInt::from(x);
    let base = BigRational::new(big(p - 1), big(p));
    let pow = num_traits::pow(base, p as usize);
    BigRational::one() - pow * BigRational::new(big(p * p), big((p - 1) * (p - 1)))
}

#[test]
fn first_tail_has_closed_form() {
    for p in primes_up_to(300).into_iter().skip(1) {
        assert_eq!(binomial_tail_exact(p, 1), first_tail_closed_form(p), "p = {p}");
    }
    for p in primes_up_to(10_000).into_iter().skip(1) {
        let pf = p as f64;
        let closed = 1.0 - (pf * (-1.0 / pf).ln_1p()).exp() * (pf / (pf - 1.0)).powi(2);
        let t = binomial_tail::<f64>(p, 1).unwrap().prob;
        assert!((t - closed).abs() < 1e-12, "p = {p}: {t} vs {closed}");
    }
}

#[test]
fn tails_approach_the_poisson_model() {
    let p = 1_000_003;
    let expected = [0.63212, 0.264, 0.0803, 0.0189];
    for (n, e) in (1..=4).zip(expected) {
        let t = binomial_tail::<f64>(p, n).unwrap().prob;
        assert!((t - e).abs() < 1e-3, "n = {n}: {t}");
    }
}

#[test]
fn ratio_decreases_toward_inverse_e() {
    let ratios: Vec<f64> = [101, 1009, 10_007, 100_003, 1_000_003]
        .iter()
        .map(|&p| ratio_encadre::<f64>(p, 2).unwrap().ratio)
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    assert!((ratios[4] - (-1f64).exp()).abs() < 0.02);
}

#[test]
fn lambda_multiplicities_partition_the_range() {
    for p in primes_up_to(500).into_iter().skip(1) {
        let pm = PrimeModulus::new(p).unwrap();
        let total: usize = (0..p).map(|v| lambda_multiplicity(&pm, v).unwrap().len()).sum();
        assert_eq!(total as u64, p - 2, "p = {p}");
    }
}

#[test]
fn classification_follows_the_model() {
    let c = classify_primes(2_000, 120_000).unwrap();
    assert!(c.n_total >= 10_000);
    let observed = c.proportions::<f64>();
    let model = model_constants::<f64>();
    for (o, m) in observed.iter().zip(model) {
        assert!((o - m).abs() < 0.01, "{observed:?} vs {model:?}");
    }
}
