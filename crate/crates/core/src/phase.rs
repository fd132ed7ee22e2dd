//! Exact roots of unity.
//!
//! A [`Phase`] is `exp(2πi · num/den)` with the fraction kept reduced and
//! `0 <= num < den`. All scalars that come out of closed formulas (ω, τ, ω₃
//! and their powers and cube roots) are kept in this form and only turned
//! into floating point when a matrix is built.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::modring::gcd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "phase denominator must be nonzero");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        Phase {
            num: num / g,
            den: den / g,
        }
    }

    /// ω = exp(2πi/d).
    pub fn omega(d: u64) -> Self {
        Phase::new(1, d as i64)
    }

    /// τ = −exp(πi/d) = exp(2πi · (d+1)/(2d)).
    pub fn tau(d: u64) -> Self {
        Phase::new(d as i64 + 1, 2 * d as i64)
    }

    /// ω₃ = exp(2πi/3).
    pub fn omega3() -> Self {
        Phase::new(1, 3)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// Angle in turns, in `[0, 1)`.
    pub fn turns(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Angle in turns, in `(-1/2, 1/2]`.
    pub fn signed_turns(&self) -> f64 {
        let (n, d) = self.signed_fraction();
        n as f64 / d as f64
    }

    fn signed_fraction(&self) -> (i64, i64) {
        if 2 * self.num > self.den {
            (self.num - self.den, self.den)
        } else {
            (self.num, self.den)
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.signed_turns())
    }

    pub fn pow(self, e: i64) -> Self {
        let num = (self.num as i128 * e as i128).rem_euclid(self.den as i128) as i64;
        Phase::new(num, self.den)
    }

    pub fn inv(self) -> Self {
        Phase::new(-self.num, self.den)
    }

    /// Principal n-th root: the signed angle in `(-1/2, 1/2]` turns divided by n.
    pub fn principal_root(self, n: u64) -> Self {
        let (num, den) = self.signed_fraction();
        Phase::new(num, den * n as i64)
    }

    /// The n-th roots of this phase, `principal_root(n) · exp(2πi b/n)` for
    /// branch `b`.
    pub fn root(self, n: u64, branch: u64) -> Self {
        self.principal_root(n) * Phase::new(branch as i64, n as i64)
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ONE
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        let den = self.den as i128 * rhs.den as i128;
        let num = self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128;
        let num = num.rem_euclid(den);
        let g = gcd(num as u64, den as u64).max(1) as i128;
        Phase {
            num: (num / g) as i64,
            den: (den / g) as i64,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Phase {
    type Output = Phase;

    fn div(self, rhs: Phase) -> Phase {
        self * rhs.inv()
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(2πi·{}/{})", self.num, self.den)
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let z = self.to_complex();
        let mut s = serializer.serialize_struct("Phase", 3)?;
        s.serialize_field("turns", &format!("{}/{}", self.num, self.den))?;
        s.serialize_field("re", &z.re)?;
        s.serialize_field("im", &z.im)?;
        s.end()
    }
}
