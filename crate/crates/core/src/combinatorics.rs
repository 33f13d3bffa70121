//! Hyperfactorial and superfactorial, exact and in the log domain.
//!
//! `H(n) = 1^1 * 2^2 * ... * n^n` and `sf(n) = 1! * 2! * ... * n!`. The exact
//! forms are practical up to a few hundred; past that the digit counts run
//! into the millions and callers should stay in the log domain.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary-precision non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactNat(BigUint);

impl ExactNat {
    pub fn one() -> Self {
        ExactNat(BigUint::one())
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Natural log computed from the leading 64 bits and the bit length.
    ///
    /// Relative error is on the order of one f64 ulp regardless of size.
    /// Returns `None` for zero.
    pub fn ln(&self) -> Option<f64> {
        ln_biguint(&self.0)
    }

    /// Nearest `f64`, or `None` when the value exceeds the f64 range.
    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64().filter(|v| v.is_finite())
    }
}

impl From<u64> for ExactNat {
    fn from(v: u64) -> Self {
        ExactNat(BigUint::from(v))
    }
}

impl From<BigUint> for ExactNat {
    fn from(v: BigUint) -> Self {
        ExactNat(v)
    }
}

impl Mul for &ExactNat {
    type Output = ExactNat;

    fn mul(self, rhs: &ExactNat) -> ExactNat {
        ExactNat(&self.0 * &rhs.0)
    }
}

impl fmt::Display for ExactNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

pub(crate) fn ln_biguint(v: &BigUint) -> Option<f64> {
    if v.is_zero() {
        return None;
    }
    let bits = v.bits();
    if bits <= 64 {
        return v.to_u64().map(|x| (x as f64).ln());
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("64 leading bits fit in u64");
    Some((top as f64).ln() + shift as f64 * std::f64::consts::LN_2)
}

/// A strictly positive quantity stored as its natural logarithm.
///
/// Adding two magnitudes multiplies the quantities they represent.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LogMagnitude(f64);

impl LogMagnitude {
    /// The quantity 1.
    pub const ONE: LogMagnitude = LogMagnitude(0.0);

    /// Wraps an already-computed natural log. Must be finite.
    pub fn from_ln(ln_value: f64) -> Self {
        debug_assert!(ln_value.is_finite(), "log magnitude must be finite");
        LogMagnitude(ln_value)
    }

    /// The log of a positive finite value; `None` otherwise.
    pub fn of(value: f64) -> Option<Self> {
        (value > 0.0 && value.is_finite()).then(|| LogMagnitude(value.ln()))
    }

    pub fn ln_value(self) -> f64 {
        self.0
    }

    /// The represented value, which may be `+inf` once it leaves f64 range.
    pub fn value(self) -> f64 {
        self.0.exp()
    }
}

impl Default for LogMagnitude {
    fn default() -> Self {
        Self::ONE
    }
}

impl Add for LogMagnitude {
    type Output = LogMagnitude;

    fn add(self, rhs: LogMagnitude) -> LogMagnitude {
        LogMagnitude(self.0 + rhs.0)
    }
}

impl AddAssign for LogMagnitude {
    fn add_assign(&mut self, rhs: LogMagnitude) {
        self.0 += rhs.0;
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// `prod_{i=1}^{n} i^i`; the empty product for `n = 0` is 1.
pub fn hyperfactorial(n: u64) -> ExactNat {
    let mut acc = BigUint::one();
    for i in 2..=n {
        let base = BigUint::from(i);
        let exp = u32::try_from(i).expect("exact hyperfactorial argument exceeds u32");
        acc *= base.pow(exp);
    }
    ExactNat(acc)
}

/// `prod_{j=1}^{n} j!`; the empty product for `n = 0` is 1.
pub fn superfactorial(n: u64) -> ExactNat {
    let mut acc = BigUint::one();
    let mut factorial = BigUint::one();
    for j in 2..=n {
        factorial *= j;
        acc *= &factorial;
    }
    ExactNat(acc)
}

/// `sum_{i=1}^{n} i ln i`.
pub fn log_hyperfactorial(n: u64) -> LogMagnitude {
    let mut total = CompensatedSum::default();
    for i in 2..=n {
        let x = i as f64;
        total.add(x * x.ln());
    }
    LogMagnitude(total.total())
}

/// `sum_{j=1}^{n} ln j!`, carrying `ln j!` forward so the whole sum is O(n).
pub fn log_superfactorial(n: u64) -> LogMagnitude {
    let mut ln_factorial = CompensatedSum::default();
    let mut total = CompensatedSum::default();
    for j in 2..=n {
        ln_factorial.add((j as f64).ln());
        total.add(ln_factorial.sum);
        total.add(ln_factorial.compensation);
    }
    LogMagnitude(total.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_hyper(n: u64) -> BigUint {
        let mut acc = BigUint::one();
        for i in 1..=n {
            for _ in 0..i {
                acc *= i;
            }
        }
        acc
    }

    fn brute_super(n: u64) -> BigUint {
        let mut acc = BigUint::one();
        for j in 1..=n {
            for m in 1..=j {
                acc *= m;
            }
        }
        acc
    }

    #[test]
    fn small_values() {
        assert_eq!(hyperfactorial(0), ExactNat::from(1));
        assert_eq!(hyperfactorial(1), ExactNat::from(1));
        assert_eq!(hyperfactorial(4), ExactNat::from(27648));
        assert_eq!(superfactorial(0), ExactNat::from(1));
        assert_eq!(superfactorial(1), ExactNat::from(1));
        assert_eq!(superfactorial(4), ExactNat::from(288));
    }

    #[test]
    fn matches_brute_force() {
        for n in 0..=30 {
            assert_eq!(hyperfactorial(n).into_biguint(), brute_hyper(n), "H({n})");
            assert_eq!(superfactorial(n).into_biguint(), brute_super(n), "sf({n})");
        }
    }

    #[test]
    fn log_forms_small() {
        assert_eq!(log_hyperfactorial(0).ln_value(), 0.0);
        assert_eq!(log_hyperfactorial(1).ln_value(), 0.0);
        assert!((log_hyperfactorial(3).ln_value() - 108f64.ln()).abs() < 1e-12);
        assert!((log_hyperfactorial(4).ln_value() - 27648f64.ln()).abs() < 1e-12);
        assert_eq!(log_superfactorial(1).ln_value(), 0.0);
        assert!((log_superfactorial(2).ln_value() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((log_superfactorial(4).ln_value() - 288f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn recurrences() {
        for n in 1..=40u64 {
            let step = BigUint::from(n).pow(n as u32);
            assert_eq!(
                hyperfactorial(n).into_biguint(),
                hyperfactorial(n - 1).into_biguint() * step
            );
            let fact: BigUint = (1..=n).map(BigUint::from).product();
            assert_eq!(
                superfactorial(n).into_biguint(),
                superfactorial(n - 1).into_biguint() * fact
            );
        }
    }

    #[test]
    fn ln_of_bignum() {
        let two_pow = BigUint::one() << 200u32;
        let got = ln_biguint(&two_pow).unwrap();
        assert!((got - 200.0 * std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(ln_biguint(&BigUint::zero()), None);
        assert_eq!(ExactNat::from(1).ln(), Some(0.0));
    }

    #[test]
    fn log_magnitude_algebra() {
        let a = LogMagnitude::of(3.0).unwrap();
        let b = LogMagnitude::of(5.0).unwrap();
        assert!(((a + b).value() - 15.0).abs() < 1e-12);
        assert_eq!(LogMagnitude::of(1.0), Some(LogMagnitude::ONE));
        assert_eq!(LogMagnitude::of(0.0), None);
        assert_eq!(LogMagnitude::of(-2.0), None);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..10 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.total(), 10.0);
    }
}
