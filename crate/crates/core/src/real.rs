//! Fixed-point interval reals, used only for rendering and for comparing
//! numbers that live in different quadratic fields.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::Surd;

/// Number of decimal digits after the point carried by every [`Real`].
pub const SCALE: u32 = 60;

/// A closed interval `[lo, hi] * 10^-SCALE` known to contain a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    lo: BigInt,
    hi: BigInt,
}

fn unit() -> BigInt {
    BigInt::from(10u32).pow(SCALE)
}

impl Real {
    pub fn from_surd(x: &Surd) -> Self {
        let (negative, v) = x.scaled_floor_abs(SCALE);
        let exact = x.is_rational() && (x.p() * unit()).is_multiple_of(x.r());
        let (lo, hi) = if exact { (v.clone(), v) } else { (v.clone(), v + 1) };
        if negative {
            Real { lo: -hi, hi: -lo }
        } else {
            Real { lo, hi }
        }
    }

    pub fn from_int(n: i64) -> Self {
        let v = BigInt::from(n) * unit();
        Real { lo: v.clone(), hi: v }
    }

    pub fn add(&self, other: &Real) -> Real {
        Real { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn neg(&self) -> Real {
        Real { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Real) -> Real {
        let u = unit();
        let prods = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = prods.iter().min().expect("four products").div_floor(&u);
        let hi = prods.iter().max().expect("four products").div_ceil(&u);
        Real { lo, hi }
    }

    /// `None` when the divisor interval contains zero.
    pub fn div(&self, other: &Real) -> Option<Real> {
        if other.lo.sign() != other.hi.sign() || other.lo.is_zero() {
            return None;
        }
        let u = unit();
        let quot = |a: &BigInt, b: &BigInt| ((a * &u).div_floor(b), (a * &u).div_ceil(b));
        let qs = [quot(&self.lo, &other.lo), quot(&self.lo, &other.hi), quot(&self.hi, &other.lo), quot(&self.hi, &other.hi)];
        let lo = qs.iter().map(|q| q.0.clone()).min().expect("four quotients");
        let hi = qs.iter().map(|q| q.1.clone()).max().expect("four quotients");
        Some(Real { lo, hi })
    }

    /// Square root of the nonnegative part of the interval.
    pub fn sqrt(&self) -> Real {
        let u = unit();
        let clamp = |v: &BigInt| if v.is_negative() { BigInt::zero() } else { v.clone() };
        let lo = (clamp(&self.lo) * &u).sqrt();
        let hi_sq = clamp(&self.hi) * &u;
        let mut hi = hi_sq.sqrt();
        if &hi * &hi != hi_sq {
            hi += 1;
        }
        Real { lo, hi }
    }

    pub fn abs(&self) -> Real {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Real { lo: BigInt::zero(), hi: self.hi.clone().max(-&self.lo) }
        }
    }

    /// Interval width as a multiple of `10^-SCALE`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// Certain ordering, or `None` when the intervals overlap.
    pub fn try_cmp(&self, other: &Real) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && self == other {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().expect("decimal parses")
    }

    /// Lower endpoint truncated to `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let negative = self.lo.is_negative();
        let v = if negative { -&self.hi } else { self.lo.clone() };
        let s = format!("{:0>width$}", v.to_string(), width = SCALE as usize + 1);
        let (ip, fp) = s.split_at(s.len() - SCALE as usize);
        let int_len = if ip == "0" { 0 } else { ip.len() };
        let frac = digits.saturating_sub(int_len).clamp(1, SCALE as usize);
        format!("{}{}.{}", if negative { "-" } else { "" }, ip, &fp[..frac])
    }
}
