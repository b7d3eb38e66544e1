use fermat_core::arith::{euler_phi, factorize, primes_up_to, PrimeModulus};
use fermat_core::densities::*;

#[test]
fn c_p_matches_brute_force() {
    for m in 1..=12 {
        for p in primes_up_to(100) {
            let c = c_p(m, p).unwrap().c_p;
            assert_eq!(c, c_p_bruteforce(m, p).unwrap(), "m = {m}, p = {p}");
            let phi = if m == 1 { 1 } else { euler_phi(&factorize(m).unwrap()) };
            assert!(c == 0 || c == 1 || c == phi);
            assert_eq!(c == phi && c > 0, m % p != 0 && p % m == 1 % m || (m, p) == (2, 2), "m = {m}, p = {p}");
        }
    }
}

#[test]
fn local_tables_group_by_order() {
    for p in primes_up_to(1000) {
        let pm = PrimeModulus::new(p).unwrap();
        let t = local_solution_table(&pm).unwrap();
        assert_eq!(t.len() as u64, p - 1);
        let mut i = 0;
        while i < t.len() {
            let d = t[i].order;
            let run = t[i..].iter().take_while(|s| s.order == d).count() as u64;
            assert_eq!((p - 1) % d, 0);
            let phi = if d == 1 { 1 } else { euler_phi(&factorize(d).unwrap()) };
            assert_eq!(run, phi, "p = {p}, d = {d}");
            i += run as usize;
        }
    }
}

#[test]
fn crt_count_is_the_exact_product() {
    for x in 2..=50 {
        assert_eq!(crt_exact_count(x).unwrap().density(), dp_product_exact(x), "x = {x}");
        let float = dp_product::<f64>(x).unwrap().report.value;
        let exact = dp_product_exact(x);
        let exact = fermat_core::stats::rational_to_f64(&exact);
        assert!((float - exact).abs() < 1e-14 * exact);
    }
}

#[test]
fn dp_product_stays_in_the_asymptotic_band() {
    for x in [100_000u64, 300_000, 1_000_000, 3_000_000, 10_000_000] {
        let d = dp_product::<f64>(x).unwrap();
        let scaled = d.report.value * (x as f64).ln();
        assert!((1.05..=1.13).contains(&scaled), "x = {x}: {scaled}");
    }
}

#[test]
fn s_partial_increments_shrink() {
    let xs = [1_000u64, 10_000, 100_000, 1_000_000, 10_000_000];
    let s: Vec<f64> = xs.iter().map(|&x| s_partial::<f64>(x).unwrap().value).collect();
    let inc: Vec<f64> = std::iter::once(s[0] - s_partial::<f64>(100).unwrap().value)
        .chain(s.windows(2).map(|w| w[1] - w[0]))
        .collect();
    assert!(inc.iter().all(|&d| d > 0.0));
    assert!(inc.windows(2).all(|w| w[1] < w[0]), "{inc:?}");
    // Streaming consistency across a segment boundary.
    let below = s_partial::<f64>(S_SEGMENT - 3).unwrap();
    let above = s_partial::<f64>(S_SEGMENT + 5_000).unwrap();
    assert!(above.value > below.value && above.terms_used > below.terms_used);
}

#[test]
fn progression_products_decrease_and_are_bounded() {
    for m in [3u64, 4, 5, 12, 40] {
        let mut prev = 1.0;
        for n_max in [10u64, 100, 1_000, 10_000, 100_000] {
            let r = p_m_product::<f64>(m, n_max).unwrap();
            assert!(r.value <= prev, "m = {m}, n_max = {n_max}");
            assert!(r.value >= r.reference, "m = {m}, n_max = {n_max}");
            prev = r.value;
        }
    }
}

#[test]
fn upsilon_is_positive() {
    for p in primes_up_to(100_000).into_iter().skip(1) {
        assert!(upsilon::<f64>(p).unwrap() > 0.0, "p = {p}");
    }
}

#[test]
fn survey_matches_brute_force() {
    for (y, x) in [(10u64, 10u64), (200, 50), (500, 97)] {
        let primes = primes_up_to(x);
        let brute = (2..=y)
            .filter(|&a| primes.iter().all(|&p| fermat_core::arith::pow_mod(a, p - 1, p * p) != 1))
            .count() as u64;
        assert_eq!(survey_nonzero(y, x).unwrap().count, brute);
    }
    assert_eq!(survey_nonzero(1000, 2).unwrap().count, (2..=1000).filter(|a| a % 4 != 1).count() as u64);
}
