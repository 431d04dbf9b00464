//! Exact dyadic rationals: values of the form `num / 2^scale`.
//!
//! Every coordinate in the library is a `Dyadic`. Arithmetic never rounds,
//! so set predicates built on top of it are decidable.

use crate::error::{ConleyError, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A dyadic rational `num / 2^scale` in canonical form: `num` is odd or zero,
/// and zero is stored with scale 0. Integers keep scale 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i64,
    scale: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, scale: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, scale: 0 };

    pub fn new(num: i64, scale: u32) -> Dyadic {
        let mut d = Dyadic { num, scale };
        d.canonicalize();
        d
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic { num: n, scale: 0 }
    }

    fn canonicalize(&mut self) {
        if self.num == 0 {
            self.scale = 0;
            return;
        }
        while self.scale > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.scale -= 1;
        }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.scale == 0
    }

    /// Numerator when rewritten at `scale` (>= canonical scale).
    pub fn numerator_at(&self, scale: u32) -> Option<i64> {
        if scale < self.scale {
            return None;
        }
        self.num.checked_shl(scale - self.scale)
    }

    pub fn half(&self) -> Dyadic {
        Dyadic::new(self.num, self.scale + 1)
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { num: self.num.abs(), scale: self.scale }
    }

    /// Floor of `self / other` for positive `other`.
    pub fn div_floor(&self, other: &Dyadic) -> i64 {
        assert!(*other > Dyadic::ZERO);
        let s = self.scale.max(other.scale);
        let a = self.numerator_at(s).expect("dyadic overflow");
        let b = other.numerator_at(s).expect("dyadic overflow");
        a.div_euclid(b)
    }

    /// Exact quotient `self / other` when it is an integer.
    pub fn div_exact_int(&self, other: &Dyadic) -> Option<i64> {
        if other.is_zero() {
            return None;
        }
        // self/other = (a * 2^t) / (b * 2^s) with common scale handling
        let s = self.scale.max(other.scale);
        let a = self.numerator_at(s)?;
        let b = other.numerator_at(s)?;
        if a % b != 0 {
            None
        } else {
            Some(a / b)
        }
    }

    /// Parse an exact dyadic literal: integer, `p/q` with q a power of two,
    /// or a decimal whose fractional part is exactly dyadic.
    pub fn parse(s: &str) -> Result<Dyadic> {
        let s = s.trim();
        let bad = || ConleyError::Parse(format!("not an exact dyadic literal: {s:?}"));
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q <= 0 || !(q as u64).is_power_of_two() {
                return Err(bad());
            }
            return Ok(Dyadic::new(p, q.trailing_zeros()));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let int: i64 = if int == "-" || int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            // frac / 10^k must reduce to a power-of-two denominator:
            // it does iff frac * 2^k is divisible by 10^k... equivalently
            // the reduced denominator of frac/10^k has no factor 5.
            let k = frac.len() as u32;
            let mut fnum: i64 = frac.parse().map_err(|_| bad())?;
            let mut fden: i64 = 10i64.checked_pow(k).ok_or_else(bad)?;
            let g = gcd(fnum, fden);
            if g > 0 {
                fnum /= g;
                fden /= g;
            }
            if !(fden as u64).is_power_of_two() {
                return Err(bad());
            }
            let scale = fden.trailing_zeros();
            let whole = Dyadic::from_int(int.abs());
            let part = Dyadic::new(fnum, scale);
            let v = whole + part;
            return Ok(if neg { -v } else { v });
        }
        let n: i64 = s.parse().map_err(|_| bad())?;
        Ok(Dyadic::from_int(n))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let s = self.scale.max(rhs.scale);
        Dyadic::new(
            self.numerator_at(s).expect("dyadic overflow") + rhs.numerator_at(s).expect("dyadic overflow"),
            s,
        )
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -self.num, scale: self.scale }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(
            self.num.checked_mul(rhs.num).expect("dyadic overflow"),
            self.scale + rhs.scale,
        )
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let s = self.scale.max(other.scale);
        self.numerator_at(s)
            .expect("dyadic overflow")
            .cmp(&other.numerator_at(s).expect("dyadic overflow"))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1i64 << self.scale)
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Dyadic, D::Error> {
        use serde::de::Error;
        // Accept either a JSON string literal or an integer.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => Dyadic::parse(&s).map_err(D::Error::custom),
            Raw::I(n) => Ok(Dyadic::from_int(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let d = Dyadic::new(4, 3); // 4/8 = 1/2
        assert_eq!(d.numerator(), 1);
        assert_eq!(d.scale(), 1);
        assert_eq!(Dyadic::new(0, 7), Dyadic::ZERO);
        assert_eq!(Dyadic::new(6, 0).numerator(), 6); // integers keep scale 0
    }

    #[test]
    fn exact_arithmetic() {
        let a = Dyadic::parse("15/16").unwrap();
        let b = Dyadic::parse("1/16").unwrap();
        assert_eq!(a + b, Dyadic::ONE);
        assert_eq!(a - b, Dyadic::parse("7/8").unwrap());
        assert!(a > b);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Dyadic::parse("27/32").unwrap(), Dyadic::new(27, 5));
        assert_eq!(Dyadic::parse("0.5").unwrap(), Dyadic::new(1, 1));
        assert_eq!(Dyadic::parse("-0.75").unwrap(), Dyadic::new(-3, 2));
        assert_eq!(Dyadic::parse("3").unwrap(), Dyadic::from_int(3));
        assert!(Dyadic::parse("0.3").is_err()); // not dyadic
        assert!(Dyadic::parse("1/3").is_err());
        assert!(Dyadic::parse("x").is_err());
    }

    #[test]
    fn worked_example_coordinates_round_trip() {
        // every coordinate used in the worked examples, denominators up to 64
        for s in [
            "15/16", "1/16", "31/32", "1/32", "27/32", "5/32", "9/32", "13/32", "19/32",
            "23/32", "3/32", "29/32", "17/64", "27/64", "37/64", "47/64", "7/32", "11/32",
            "21/32", "25/32",
        ] {
            let d = Dyadic::parse(s).unwrap();
            assert_eq!(d.to_string(), s);
            assert_eq!(Dyadic::parse(&d.to_string()).unwrap(), d);
        }
    }

    #[test]
    fn display_fraction() {
        assert_eq!(Dyadic::new(27, 5).to_string(), "27/32");
        assert_eq!(Dyadic::from_int(-2).to_string(), "-2");
    }
}
