//! Integer and modular arithmetic: primality, prime iteration, factoring,
//! multiplicative functions and modular exponentiation.

pub mod factor;
pub mod modular;
pub mod multiplicative;
pub mod primality;
pub mod sieve;

pub use factor::{
    factorize_big, factorize_big_with, factorize_partial_big, factorize_u64, factorize_u64_with,
    FactorConfig, Factorization, PartialFactorization,
};
pub use modular::{inv_mod, mul_mod, mul_mod_u128, pow_mod, pow_mod_big, pow_mod_u128, Montgomery};
pub use multiplicative::{
    divisors, euler_phi, moebius, moebius_of, multiplicative_order, phi_squared_sum,
    phi_squared_sum_big, phi_squared_sum_of, DivisorSet, OrderContext, PrimeModulus,
};
pub use primality::{is_prime_big, is_prime_u64 as is_prime, next_prime_big, next_prime_u64 as next_prime};
pub use sieve::{isqrt, prime_count, prime_range, primes_up_to, PrimeRange, SpfTable};

/// Factorization of `n >= 2` (alias of [`factorize_u64`]).
pub fn factorize(n: u64) -> crate::Result<Factorization<u64>> {
    factorize_u64(n)
}
