//! Fermat quotients `q_p(a) = (a^{p-1} - 1)/p mod p`, cyclotomic values
//! `Φ_m(a)`, solution searches, statistics of λ-values, density products and
//! the binomial heuristic for the number of vanishing quotients.
//!
//! Real-valued results are generic over [`scalar::Real`] (`f32`/`f64`); the
//! aliases below fix the scalar to `f64`.

pub mod arith;
pub mod cyclotomic;
pub mod densities;
pub mod error;
pub mod fermat;
pub mod scalar;
pub mod special;
pub mod stats;

pub use error::{Error, Result};

pub type Factorization64 = arith::Factorization<u64>;
pub type BigFactorization = arith::Factorization<num_bigint::BigUint>;
pub type DensityReport64 = densities::DensityReport<f64>;
pub type DpProduct64 = densities::DpProduct<f64>;
pub type SeriesSums64 = densities::SeriesSums<f64>;
pub type EtaUpsilon64 = densities::EtaUpsilon<f64>;
pub type BinomialTail64 = stats::BinomialTail<f64>;
pub type RatioEncadre64 = stats::RatioEncadre<f64>;
pub type EpsilonReport64 = stats::EpsilonReport<f64>;
