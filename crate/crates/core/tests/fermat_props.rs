use std::collections::BTreeSet;

use fermat_core::arith::{pow_mod, primes_up_to, PrimeModulus};
use fermat_core::fermat::*;
use num_bigint::BigUint;
use proptest::prelude::*;

fn q(a: u64, p: u64) -> u64 {
    fermat_quotient(a, &PrimeModulus::new(p).unwrap()).unwrap().q
}

fn prime_below_1e6() -> impl Strategy<Value = u64> {
    (3u64..1_000_000).prop_map(fermat_core::arith::next_prime)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn quotient_is_a_logarithm(p in prime_below_1e6(), a in 1u64..3_000_000, b in 1u64..3_000_000) {
        prop_assume!(a % p != 0 && b % p != 0);
        prop_assert_eq!(q(a * b, p), (q(a, p) + q(b, p)) % p);
    }
}

proptest! {
    #[test]
    fn powers_scale_the_quotient(a in 2u64..50, p in prime_below_1e6()) {
        prop_assume!(a % p != 0);
        let qa = q(a, p);
        let mut power = a;
        let mut j = 1;
        while power < p {
            prop_assert_eq!(q(power, p), j * qa % p);
            power *= a;
            j += 1;
        }
    }
}

#[test]
fn lambda_is_antisymmetric() {
    for p in primes_up_to(1000).into_iter().skip(1) {
        let s = QuotientSieve::standalone(&PrimeModulus::new(p).unwrap(), DEFAULT_SIEVE_LIMIT).unwrap();
        for z in 1..p {
            assert_eq!(s.lambda(z) + s.lambda(p - z), p - 1, "p = {p}, z = {z}");
        }
    }
}

#[test]
fn lifts_biject_onto_solutions() {
    for p in primes_up_to(400) {
        let pm = PrimeModulus::new(p).unwrap();
        let sols = solutions_mod_p2(&pm);
        assert_eq!(sols.len() as u64, p - 1);
        let lifted: BTreeSet<u128> = (1..p).map(|z| lift_to_solution(z, 0, &pm).unwrap().big_z).collect();
        assert_eq!(lifted, sols.iter().copied().collect());
        for u in [1, p / 2, p - 1] {
            for z in 1..p {
                let l = lift_to_solution(z, u, &pm).unwrap();
                assert_eq!(fermat_quotient(l.big_z as u64, &pm).unwrap().q, u);
            }
        }
    }
}

#[test]
fn sieve_agrees_with_direct_powers() {
    for p in primes_up_to(10_000) {
        let pm = PrimeModulus::new(p).unwrap();
        let direct: Vec<u64> = (2..p).filter(|&z| pow_mod(z, p - 1, p * p) == 1).collect();
        assert_eq!(zeros_in_range(&pm, DEFAULT_SIEVE_LIMIT).unwrap(), direct, "p = {p}");
        assert_eq!(zeros_in_range(&pm, 0).unwrap(), direct, "p = {p}");
    }
}

#[test]
fn crt_sets_match_brute_force() {
    let sets: [&[u64]; 8] = [&[2, 3], &[2, 5], &[3, 5], &[2, 3, 5], &[2, 7], &[3, 7], &[5, 7], &[2, 3, 7]];
    for primes in sets {
        let s = crt_solutions(primes).unwrap();
        let modulus: u64 = primes.iter().map(|p| p * p).product();
        let brute: Vec<BigUint> = (0..modulus)
            .filter(|&a| primes.iter().all(|&p| pow_mod(a, p - 1, p * p) == 1))
            .map(BigUint::from)
            .collect();
        assert_eq!(s.residues.len() as u64, primes.iter().map(|p| p - 1).product::<u64>());
        assert_eq!(s.residues, brute, "{primes:?}");
        assert_eq!(s.modulus, BigUint::from(modulus));
    }
}
