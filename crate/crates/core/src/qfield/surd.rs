use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::int::{self, Int};

/// The number `(p + q*sqrt(d)) / r` in canonical form.
///
/// Canonical means `r > 0`, `gcd(p, q, r) = 1` and `d` squarefree and not 1.
/// A rational value is stored with `q = 0` and `d = 1`; it can be combined
/// with a surd of any field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd<T> {
    p: T,
    q: T,
    r: T,
    d: T,
}

impl<T: Int> QuadraticSurd<T> {
    /// Builds the canonical surd, extracting the square part of `d`.
    pub fn new(p: T, q: T, r: T, d: T) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if q.is_zero() {
            return Ok(Self::reduced(p, T::zero(), r, T::one()));
        }
        if !d.is_positive() {
            return Err(Error::NonPositiveRadicand(d.to_string()));
        }
        let (s, k) = int::square_part(&d.to_bigint());
        if k.is_one() {
            return Err(Error::RationalDisguised(d.to_string()));
        }
        let s = T::from_bigint(&s).expect("square part fits");
        let k = T::from_bigint(&k).expect("kernel fits");
        Ok(Self::reduced(p, q * s, r, k))
    }

    pub fn from_integer(n: T) -> Self {
        Self::reduced(n, T::zero(), T::one(), T::one())
    }

    pub fn from_ratio(num: T, den: T) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, T::zero(), den, T::one()))
    }

    /// `sqrt(d)` for a nonsquare `d`, square part extracted.
    pub fn sqrt_of(d: T) -> Result<Self> {
        Self::new(T::zero(), T::one(), T::one(), d)
    }

    /// Assumes `d` is already squarefree (or `q = 0`); only removes the common
    /// factor and fixes the sign of `r`.
    pub(crate) fn reduced(p: T, q: T, r: T, d: T) -> Self {
        debug_assert!(!r.is_zero());
        let d = if q.is_zero() { T::one() } else { d };
        let g = p.gcd(&q).gcd(&r);
        let (mut p, mut q, mut r) = (p / g.clone(), q / g.clone(), r / g);
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        QuadraticSurd { p, q, r, d }
    }

    pub fn p(&self) -> &T {
        &self.p
    }
    pub fn q(&self) -> &T {
        &self.q
    }
    pub fn r(&self) -> &T {
        &self.r
    }
    pub fn d(&self) -> &T {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Radicand shared by `self` and `other`, rationals adapting to either.
    fn common_field(&self, other: &Self) -> Result<T> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::FieldMismatch(self.d.to_string(), other.d.to_string())),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_field(other)?;
        let p = self.p.clone() * other.r.clone() + other.p.clone() * self.r.clone();
        let q = self.q.clone() * other.r.clone() + other.q.clone() * self.r.clone();
        Ok(Self::reduced(p, q, self.r.clone() * other.r.clone(), d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_field(other)?;
        let p = self.p.clone() * other.p.clone() + self.q.clone() * other.q.clone() * d.clone();
        let q = self.p.clone() * other.q.clone() + self.q.clone() * other.p.clone();
        Ok(Self::reduced(p, q, self.r.clone() * other.r.clone(), d))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.recip()?)
    }

    /// Multiplication by the rational `num/den`.
    pub fn scale(&self, num: T, den: T) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(
            self.p.clone() * num.clone(),
            self.q.clone() * num,
            self.r.clone() * den,
            self.d.clone(),
        ))
    }

    pub fn add_int(&self, n: T) -> Self {
        Self::reduced(self.p.clone() + n * self.r.clone(), self.q.clone(), self.r.clone(), self.d.clone())
    }

    pub fn neg(&self) -> Self {
        Self::reduced(-self.p.clone(), -self.q.clone(), self.r.clone(), self.d.clone())
    }

    pub fn conjugate(&self) -> Self {
        Self::reduced(self.p.clone(), -self.q.clone(), self.r.clone(), self.d.clone())
    }

    /// Field norm `x * x'` as a reduced fraction `(num, den)`, `den > 0`.
    pub fn norm(&self) -> (T, T) {
        let num = self.p.clone() * self.p.clone() - self.q.clone() * self.q.clone() * self.d.clone();
        let den = self.r.clone() * self.r.clone();
        let g = num.gcd(&den);
        (num / g.clone(), den / g)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.p.clone() * self.p.clone() - self.q.clone() * self.q.clone() * self.d.clone();
        Ok(Self::reduced(
            self.r.clone() * self.p.clone(),
            -(self.r.clone() * self.q.clone()),
            n,
            self.d.clone(),
        ))
    }

    /// Exact sign, decided by comparing `p^2` with `q^2 d` when the signs differ.
    pub fn signum(&self) -> Ordering {
        sign_of(&self.p, &self.q, &self.d)
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok(self.try_sub(other)?.signum())
    }

    /// `floor` of the value, exact.
    pub fn floor(&self) -> T {
        if self.q.is_zero() {
            return self.p.div_floor(&self.r);
        }
        // |q| sqrt(d) lies strictly between s and s + 1
        let s = int::isqrt(&(self.q.clone() * self.q.clone() * self.d.clone()));
        if self.q.is_positive() {
            (self.p.clone() + s).div_floor(&self.r)
        } else {
            (self.p.clone() - s - T::one()).div_floor(&self.r)
        }
    }

    pub fn to_big(&self) -> QuadraticSurd<BigInt> {
        QuadraticSurd {
            p: self.p.to_bigint(),
            q: self.q.to_bigint(),
            r: self.r.to_bigint(),
            d: self.d.to_bigint(),
        }
    }

    /// `floor(|x| * 10^k)` together with the sign of `x`.
    pub fn scaled_floor_abs(&self, k: u32) -> (bool, BigInt) {
        let x = self.to_big();
        let negative = x.signum() == Ordering::Less;
        let x = if negative { x.neg() } else { x };
        let scale = BigInt::from(10u32).pow(k);
        let num_p = &x.p * &scale;
        let v = if x.q.is_zero() {
            num_p.div_floor(&x.r)
        } else {
            let s = (&x.q * &x.q * &x.d * &scale * &scale).sqrt();
            if x.q.is_positive() {
                (num_p + s).div_floor(&x.r)
            } else {
                (num_p - s - BigInt::one()).div_floor(&x.r)
            }
        };
        (negative, v)
    }

    /// Decimal truncated toward zero with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let (negative, int_part) = self.scaled_floor_abs(0);
        let int_len = if int_part.is_zero() { 0 } else { int_part.to_string().len() };
        let frac = digits.saturating_sub(int_len).max(1);
        let (_, v) = self.scaled_floor_abs(frac as u32);
        let s = format!("{:0>width$}", v.to_string(), width = frac + 1);
        let (ip, fp) = s.split_at(s.len() - frac);
        format!("{}{}.{}", if negative { "-" } else { "" }, ip, fp)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().expect("decimal rendering parses")
    }
}

pub(crate) fn sign_of<T: Int>(p: &T, q: &T, d: &T) -> Ordering {
    let sp = p.signum();
    let sq = q.signum();
    if !sp.is_negative() && !sq.is_negative() {
        return if sp.is_zero() && sq.is_zero() { Ordering::Equal } else { Ordering::Greater };
    }
    if !sp.is_positive() && !sq.is_positive() {
        return Ordering::Less;
    }
    let lhs = p.clone() * p.clone();
    let rhs = q.clone() * q.clone() * d.clone();
    // p and q sign-differ; the larger magnitude wins
    match lhs.cmp(&rhs) {
        Ordering::Greater => {
            if sp.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
        Ordering::Less => {
            if sq.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
        Ordering::Equal => Ordering::Equal,
    }
}

impl<T: Int> PartialOrd for QuadraticSurd<T> {
    /// `None` when the two values live in different quadratic fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl<T: Int> fmt::Display for QuadraticSurd<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return if self.r.is_one() { write!(f, "{}", self.p) } else { write!(f, "{}/{}", self.p, self.r) };
        }
        let sign = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}*sqrt({}))/{}", self.p, sign, self.q.abs(), self.d, self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64, r: i64, d: i64) -> QuadraticSurd<i64> {
        QuadraticSurd::new(p, q, r, d).unwrap()
    }

    fn fields(x: &QuadraticSurd<i64>) -> (i64, i64, i64, i64) {
        (x.p, x.q, x.r, x.d)
    }

    #[test]
    fn normalization() {
        assert_eq!(fields(&s(2, 2, 4, 5)), (1, 1, 2, 5));
        assert_eq!(fields(&s(3, 3, 3, 8)), (1, 2, 1, 2));
        assert_eq!(fields(&s(1, 1, -2, 5)), (-1, -1, 2, 5));
        assert_eq!(QuadraticSurd::new(0i64, 1, 1, 4), Err(Error::RationalDisguised("4".into())));
        assert_eq!(QuadraticSurd::new(1i64, 1, 0, 5), Err(Error::DivisionByZero));
    }

    #[test]
    fn arithmetic() {
        let phi = s(1, 1, 2, 5);
        assert_eq!(fields(&phi.scale(2, 1).unwrap()), (1, 1, 1, 5));
        assert_eq!(fields(&phi.conjugate()), (1, -1, 2, 5));
        // phi^2 = phi + 1
        assert_eq!(phi.try_mul(&phi).unwrap(), phi.add_int(1));
        assert_eq!(phi.try_mul(&phi.recip().unwrap()).unwrap(), QuadraticSurd::from_integer(1));
        assert!(matches!(phi.try_add(&s(0, 1, 1, 2)), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn ordering() {
        let r2 = s(0, 1, 1, 2);
        let three_halves = QuadraticSurd::from_ratio(3, 2).unwrap();
        assert_eq!(r2.try_cmp(&three_halves).unwrap(), Ordering::Less);
        assert_eq!(s(3, -2, 1, 2).signum(), Ordering::Greater);
        assert_eq!(s(-3, 2, 1, 2).signum(), Ordering::Less);
    }

    #[test]
    fn floors() {
        assert_eq!(s(1, 1, 2, 5).floor(), 1);
        assert_eq!(s(0, -1, 1, 2).floor(), -2);
        assert_eq!(s(-1, 1, 3, 7).floor(), 0);
        assert_eq!(QuadraticSurd::from_ratio(-7i64, 2).unwrap().floor(), -4);
    }

    #[test]
    fn decimals() {
        assert_eq!(s(0, 1, 1, 5).to_decimal(10), "2.236067977");
        assert_eq!(s(0, -1, 1, 2).to_decimal(6), "-1.41421");
        assert_eq!(s(0, 1, 10, 2).to_decimal(5), "0.14142");
        let d50 = s(1, 1, 2, 5).to_decimal(50);
        assert_eq!(d50, "1.6180339887498948482045868343656381177203091798057");
    }
}
