//! Exact nonnegative rational constants.
//!
//! Density and robustness thresholds are compared against integer counts, and
//! those comparisons must not depend on floating-point rounding. `Frac` keeps
//! every constant as a reduced `num/den` pair and performs all count
//! comparisons in 128-bit integer arithmetic. Floating point only appears in
//! reports.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Frac {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };
    pub const ONE: Frac = Frac { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Frac> {
        if den == 0 {
            return Err(Error::BadFraction(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        Ok(Frac {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `ceil(self * x)` exactly.
    pub fn ceil_mul(&self, x: u128) -> u128 {
        let num = self.num as u128 * x;
        num.div_ceil(self.den as u128)
    }

    /// Exact test `count >= self * total`.
    pub fn count_at_least(&self, count: u128, total: u128) -> bool {
        count * self.den as u128 >= self.num as u128 * total
    }

    pub fn mul(&self, other: Frac) -> Result<Frac> {
        let num = self.num.checked_mul(other.num).ok_or(Error::Overflow)?;
        let den = self.den.checked_mul(other.den).ok_or(Error::Overflow)?;
        Frac::new(num, den)
    }

    pub fn add(&self, other: Frac) -> Result<Frac> {
        let num = (self.num as u128 * other.den as u128) + (other.num as u128 * self.den as u128);
        let den = self.den as u128 * other.den as u128;
        if num > u64::MAX as u128 || den > u64::MAX as u128 {
            return Err(Error::Overflow);
        }
        Frac::new(num as u64, den as u64)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Nearest fraction with denominator `den` (used to freeze f64-derived
    /// defaults into exact form).
    pub fn approx(x: f64, den: u64) -> Result<Frac> {
        if !(0.0..=u64::MAX as f64).contains(&x) || !x.is_finite() {
            return Err(Error::BadFraction(format!("{x}")));
        }
        Frac::new((x * den as f64).round() as u64, den)
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Frac) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Frac) -> std::cmp::Ordering {
        let l = self.num as u128 * other.den as u128;
        let r = other.num as u128 * self.den as u128;
        l.cmp(&r)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Frac {
    type Err = Error;

    /// Accepts `"3"`, `"2/5"` and exact decimals like `"0.001"`.
    fn from_str(s: &str) -> Result<Frac> {
        let bad = || Error::BadFraction(s.to_string());
        if let Some((a, b)) = s.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| bad())?;
            let den: u64 = b.trim().parse().map_err(|_| bad())?;
            return Frac::new(num, den);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.len() > 18 || frac.chars().any(|c| !c.is_ascii_digit()) {
                return Err(bad());
            }
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let den = 10u64.pow(frac.len() as u32);
            let frac_num: u64 = if frac.is_empty() {
                0
            } else {
                frac.parse().map_err(|_| bad())?
            };
            let num = int
                .checked_mul(den)
                .and_then(|x| x.checked_add(frac_num))
                .ok_or_else(bad)?;
            return Frac::new(num, den);
        }
        let num: u64 = s.trim().parse().map_err(|_| bad())?;
        Frac::new(num, 1)
    }
}

impl serde::Serialize for Frac {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}
