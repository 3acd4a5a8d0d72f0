//! Exact time quantities.
//!
//! Three-point estimates collapse to sixths, so durations are carried as
//! rationals and only rounded when rendered.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// A time quantity in project units (weeks, days, ...).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Duration(Ratio<i64>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid duration literal `{0}`")]
pub struct ParseDurationError(pub String);

impl Duration {
    pub const ZERO: Duration = Duration(Ratio::new_raw(0, 1));

    pub fn from_int(value: i64) -> Self {
        Duration(Ratio::from_integer(value))
    }

    /// `numer / denom`; panics when `denom` is zero.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Duration(Ratio::new(numer, denom))
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_negative(&self) -> bool {
        self.0 < Ratio::zero()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Fixed two-decimal rendering, rounding half away from zero.
    pub fn to_fixed2(&self) -> String {
        let scaled = self.0 * Ratio::from_integer(100);
        let hundredths = scaled.round().to_integer();
        let sign = if hundredths < 0 { "-" } else { "" };
        let abs = hundredths.unsigned_abs();
        format!("{sign}{}.{:02}", abs / 100, abs % 100)
    }

    /// Lossless literal accepted by [`Duration::from_str`]: an integer, a
    /// terminating decimal, or `numer/denom`.
    pub fn to_literal(&self) -> String {
        if self.0.is_integer() {
            return self.0.to_integer().to_string();
        }
        let mut denom = *self.0.denom();
        let mut twos = 0u32;
        let mut fives = 0u32;
        while denom % 2 == 0 {
            denom /= 2;
            twos += 1;
        }
        while denom % 5 == 0 {
            denom /= 5;
            fives += 1;
        }
        if denom == 1 {
            let places = twos.max(fives);
            let scale = 10i64.pow(places);
            let scaled = (self.0 * Ratio::from_integer(scale)).to_integer();
            let sign = if scaled < 0 { "-" } else { "" };
            let abs = scaled.unsigned_abs();
            let scale = scale as u64;
            return format!(
                "{sign}{}.{:0width$}",
                abs / scale,
                abs % scale,
                width = places as usize
            );
        }
        format!("{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Duration {
    type Err = ParseDurationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDurationError(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Duration(Ratio::new(n, d)));
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) || frac_part.len() > 12 {
            return Err(err());
        }
        let int: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| err())?
        };
        let scale = 10i64.pow(frac_part.len() as u32);
        let frac: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| err())?
        };
        let numer = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(err)?;
        let value = Ratio::new(numer, scale);
        Ok(Duration(if neg { -value } else { value }))
    }
}

impl fmt::Debug for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Duration({})", self.to_literal())
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_fixed2())
    }
}

impl From<i64> for Duration {
    fn from(value: i64) -> Self {
        Duration::from_int(value)
    }
}

impl Add for Duration {
    type Output = Duration;
    fn add(self, rhs: Duration) -> Duration {
        Duration(self.0 + rhs.0)
    }
}

impl AddAssign for Duration {
    fn add_assign(&mut self, rhs: Duration) {
        self.0 += rhs.0;
    }
}

impl Sub for Duration {
    type Output = Duration;
    fn sub(self, rhs: Duration) -> Duration {
        Duration(self.0 - rhs.0)
    }
}

impl Sum for Duration {
    fn sum<I: Iterator<Item = Duration>>(iter: I) -> Duration {
        iter.fold(Duration::ZERO, Add::add)
    }
}

impl Serialize for Duration {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_decimals_and_fractions() {
        assert_eq!("51".parse::<Duration>().unwrap(), Duration::from_int(51));
        assert_eq!(
            "2.5".parse::<Duration>().unwrap(),
            Duration::from_ratio(5, 2)
        );
        assert_eq!(
            "37/6".parse::<Duration>().unwrap(),
            Duration::from_ratio(37, 6)
        );
        assert_eq!("-3".parse::<Duration>().unwrap(), Duration::from_int(-3));
        assert_eq!(
            ".5".parse::<Duration>().unwrap(),
            Duration::from_ratio(1, 2)
        );
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "1e3", "."] {
            assert!(bad.parse::<Duration>().is_err(), "{bad}");
        }
    }

    #[test]
    fn fixed_two_decimals() {
        assert_eq!(Duration::from_int(51).to_fixed2(), "51.00");
        assert_eq!(Duration::from_ratio(37, 6).to_fixed2(), "6.17");
        assert_eq!(Duration::from_ratio(1, 8).to_fixed2(), "0.13");
        assert_eq!(Duration::from_ratio(-1, 3).to_fixed2(), "-0.33");
    }

    #[test]
    fn literal_is_lossless() {
        for d in [
            Duration::from_int(7),
            Duration::from_ratio(5, 2),
            Duration::from_ratio(3, 40),
            Duration::from_ratio(37, 6),
            Duration::from_ratio(-7, 4),
        ] {
            assert_eq!(d.to_literal().parse::<Duration>().unwrap(), d);
        }
        assert_eq!(Duration::from_ratio(5, 2).to_literal(), "2.5");
        assert_eq!(Duration::from_ratio(37, 6).to_literal(), "37/6");
    }
}
