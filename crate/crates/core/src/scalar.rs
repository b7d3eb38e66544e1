//! Floating-point scalar abstraction used by the analytic and statistical code.
//!
//! Everything that produces a real number (densities, tails, moments, roots) is
//! generic over [`Real`], implemented for `f32` and `f64`. Integer work stays on
//! machine words or `BigUint`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal; every `Real` can represent (a rounding of) any `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("u64 representable")
    }

    /// Euler-Mascheroni constant.
    #[inline]
    #[allow(clippy::excessive_precision)]
    fn euler_gamma() -> Self {
        Self::lit(0.5772156649015328606)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<F> {
    sum: F,
    comp: F,
}

impl<F: Real> Default for CompensatedSum<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Real> CompensatedSum<F> {
    pub fn new() -> Self {
        Self {
            sum: F::zero(),
            comp: F::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> F {
        self.sum + self.comp
    }
}

impl<F: Real> Extend<F> for CompensatedSum<F> {
    fn extend<I: IntoIterator<Item = F>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Product of factors `1 + x` kept as a compensated sum of `ln_1p(x)`.
#[derive(Debug, Clone, Copy)]
pub struct LogProduct<F> {
    log: CompensatedSum<F>,
    factors: u64,
}

impl<F: Real> Default for LogProduct<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Real> LogProduct<F> {
    pub fn new() -> Self {
        Self {
            log: CompensatedSum::new(),
            factors: 0,
        }
    }

    /// Multiplies the running product by `1 + x`.
    #[inline]
    pub fn mul_one_plus(&mut self, x: F) {
        self.log.add(x.ln_1p());
        self.factors += 1;
    }

    pub fn factors(&self) -> u64 {
        self.factors
    }

    pub fn ln(&self) -> F {
        self.log.value()
    }

    pub fn value(&self) -> F {
        self.log.value().exp()
    }
}

/// Formats `x` with `digits` significant digits in the style of C's `%.*g`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
