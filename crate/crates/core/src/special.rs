//! Log-gamma and log-binomial coefficients.

use crate::scalar::{CompensatedSum, Real};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7), with reflection below 1/2.
pub fn ln_gamma<F: Real>(x: F) -> F {
    let half = F::lit(0.5);
    if x < half {
        // Γ(x)Γ(1-x) = π / sin(πx)
        let pi = F::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(F::one() - x);
    }
    let x = x - F::one();
    let mut a = F::lit(LANCZOS[0]);
    let t = x + F::lit(LANCZOS_G) + half;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + F::lit(c) / (x + F::of_u64(i as u64));
    }
    half * (F::lit(2.0) * F::PI()).ln() + (x + half) * t.ln() - t + a.ln()
}

/// `ln C(n, k)`; exact-product summation for small `k`, log-gamma otherwise.
pub fn ln_choose<F: Real>(n: u64, k: u64) -> F {
    assert!(k <= n, "ln_choose requires k <= n");
    let k = k.min(n - k);
    if k <= 64 {
        let mut s = CompensatedSum::new();
        for i in 0..k {
            s.add((F::of_u64(n - i) / F::of_u64(i + 1)).ln());
        }
        return s.value();
    }
    let one = F::one();
    ln_gamma(F::of_u64(n) + one) - ln_gamma(F::of_u64(k) + one) - ln_gamma(F::of_u64(n - k) + one)
}

/// `ln k!`
pub fn ln_factorial<F: Real>(k: u64) -> F {
    if k < 2 {
        return F::zero();
    }
    if k <= 64 {
        let mut s = CompensatedSum::new();
        for i in 2..=k {
            s.add(F::of_u64(i).ln());
        }
        return s.value();
    }
    ln_gamma(F::of_u64(k) + F::one())
}
