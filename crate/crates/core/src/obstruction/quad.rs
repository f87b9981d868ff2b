//! Exact arithmetic in `Q(sqrt 3)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `a + b*sqrt(3)` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadExt { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        QuadExt {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        QuadExt::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        QuadExt::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn sqrt3() -> Self {
        QuadExt {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        QuadExt::default()
    }

    pub fn one() -> Self {
        QuadExt::int(1)
    }

    /// `a + b sqrt3 = 0` iff `a = b = 0`, as `sqrt3` is irrational.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadExt::new(self.a.clone(), -self.b.clone())
    }

    /// `a^2 - 3 b^2`
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(3.into()) * &self.b * &self.b
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QuadExt::new(&self.a / &n, -&self.b / &n))
    }

    pub fn checked_div(&self, other: &QuadExt) -> Option<Self> {
        other.recip().map(|r| self * &r)
    }

    /// Parses `p/q`, `p/q*sqrt3`, `p/q + r/s*sqrt3` and similar.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Malformed("empty number".into()));
        }
        let mut out = QuadExt::zero();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            let boundary = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/');
            if boundary {
                out = &out + &parse_summand(&s[start..i])?;
                start = i;
            }
        }
        Ok(out)
    }
}

fn parse_summand(s: &str) -> Result<QuadExt> {
    let bad = || Error::Malformed(format!("cannot parse `{s}` as a + b*sqrt3"));
    let (sign, body) = match s.as_bytes().first() {
        Some(b'-') => (-1, &s[1..]),
        Some(b'+') => (1, &s[1..]),
        _ => (1, s),
    };
    let (coef, surd) = if let Some(c) = body.strip_suffix("*sqrt3") {
        (c, true)
    } else if let Some(c) = body.strip_suffix("sqrt3") {
        (if c.is_empty() { "1" } else { c }, true)
    } else {
        (body, false)
    };
    let r: BigRational = match coef.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(coef.parse().map_err(|_| bad())?),
    };
    let r = if sign < 0 { -r } else { r };
    Ok(if surd {
        QuadExt::new(BigRational::zero(), r)
    } else {
        QuadExt::rational(r)
    })
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        let three = BigRational::from_integer(3.into());
        QuadExt::new(
            &self.a * &o.a + three * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a.clone(), -self.b.clone())
    }
}

impl From<BigRational> for QuadExt {
    fn from(a: BigRational) -> Self {
        QuadExt::rational(a)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt3", self.b),
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {sign} {}*sqrt3", self.a, self.b.abs())
            }
        }
    }
}
