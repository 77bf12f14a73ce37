use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::int;
use crate::qfield::{canonical_rotation, SurdState};
use crate::Surd;

/// Significant digits of the rendered decimal.
pub const DECIMAL_DIGITS: usize = 50;

/// Which CF period and which divisor produced a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Period of `xi`, least rotation.
    pub word: Vec<BigInt>,
    /// The `d | n` attaining the maximum.
    pub divisor: i64,
    /// Period of `d xi` for every `d | n`.
    pub columns: Vec<(i64, Vec<BigInt>)>,
    /// The number evaluated; the word alone fixes it only up to equivalence.
    pub point: Surd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumValue {
    pub exact: Surd,
    pub decimal: String,
    pub witness: Witness,
}

pub fn format_word(w: &[BigInt]) -> String {
    w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

impl SpectrumValue {
    pub fn new(exact: Surd, witness: Witness) -> Self {
        let decimal = exact.to_decimal(DECIMAL_DIGITS);
        SpectrumValue { exact, decimal, witness }
    }

    pub fn scaled(&self, m: i64) -> Result<SpectrumValue> {
        Ok(SpectrumValue::new(self.exact.scale(m.into(), 1.into())?, self.witness.clone()))
    }
}

impl fmt::Display for SpectrumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.decimal, self.exact)
    }
}

impl Serialize for SpectrumValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(6))?;
        map.serialize_entry("exact", &self.exact.to_string())?;
        map.serialize_entry("decimal", &self.decimal)?;
        map.serialize_entry("witness_word", &format_word(&self.witness.word))?;
        map.serialize_entry("witness_divisor", &self.witness.divisor)?;
        map.serialize_entry("witness_point", &self.witness.point.to_string())?;
        let cols: Vec<(i64, String)> = self.witness.columns.iter().map(|(d, w)| (*d, format_word(w))).collect();
        map.serialize_entry("columns", &cols)?;
        map.end()
    }
}

/// The reduced states of the purely periodic part of the expansion of `x`.
pub fn reduced_cycle(x: &Surd) -> Result<Vec<SurdState<BigInt>>> {
    let mut state = SurdState::from_surd(x)?;
    while !state.is_reduced() {
        state = state.step().1;
    }
    let start = state.clone();
    let mut cycle = vec![start.clone()];
    loop {
        state = state.step().1;
        if state == start {
            return Ok(cycle);
        }
        cycle.push(state.clone());
    }
}

/// Least rotation of the period of `x`.
pub fn period_word(x: &Surd) -> Result<Vec<BigInt>> {
    let word: Vec<BigInt> = reduced_cycle(x)?.iter().map(|s| s.floor()).collect();
    Ok(canonical_rotation(&word))
}

fn max_surd(a: Surd, b: Surd) -> Result<Surd> {
    Ok(if b.try_cmp(&a)? == Ordering::Greater { b } else { a })
}

fn lagrange_exact(x: &Surd) -> Result<Surd> {
    let mut best: Option<Surd> = None;
    // forward value x_i = [a_i; a_{i+1}, ...] plus backward value
    // -x_i' = [0; a_{i-1}, a_{i-2}, ...]
    for s in reduced_cycle(x)? {
        let xi = s.to_surd();
        let v = xi.try_sub(&xi.conjugate())?;
        best = Some(match best {
            None => v,
            Some(b) => max_surd(b, v)?,
        });
    }
    Ok(best.expect("a period is never empty"))
}

/// Classical Lagrange value of a quadratic irrational.
pub fn lagrange_value(x: &Surd) -> Result<SpectrumValue> {
    let exact = lagrange_exact(x)?;
    let word = period_word(x)?;
    Ok(SpectrumValue::new(exact, Witness { word: word.clone(), divisor: 1, columns: vec![(1, word)], point: x.clone() }))
}

fn check_positive(name: &str, v: i64) -> Result<()> {
    if v <= 0 {
        return Err(Error::Usage(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// `m * max_{d | n} lambda(d x)`.
pub fn n_lagrange(x: &Surd, n: i64, m: i64) -> Result<SpectrumValue> {
    check_positive("n", n)?;
    check_positive("m", m)?;
    if x.is_rational() {
        return Err(Error::RationalInput(x.to_string()));
    }
    let mut best: Option<(Surd, i64)> = None;
    let mut columns = Vec::new();
    for d in int::divisors(n) {
        let y = x.scale(d.into(), 1.into())?;
        let v = lagrange_exact(&y)?;
        columns.push((d, period_word(&y)?));
        best = match best {
            Some((b, bd)) if v.try_cmp(&b)? != Ordering::Greater => Some((b, bd)),
            _ => Some((v, d)),
        };
    }
    let (value, divisor) = best.expect("n has a divisor");
    let word = columns[0].1.clone();
    Ok(SpectrumValue::new(value.scale(m.into(), 1.into())?, Witness { word, divisor, columns, point: x.clone() }))
}

/// The indefinite form `a s^2 + b s t + c t^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndefiniteBinaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for IndefiniteBinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

impl IndefiniteBinaryForm {
    /// Requires a positive nonsquare discriminant.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = IndefiniteBinaryForm { a, b, c };
        let disc = f.disc();
        if disc < 0 {
            return Err(Error::NotIndefinite(f.to_string()));
        }
        if int::is_square(&disc) {
            return Err(Error::IsotropicForm(f.to_string()));
        }
        Ok(f)
    }

    pub fn disc(&self) -> i128 {
        let (a, b, c) = (i128::from(self.a), i128::from(self.b), i128::from(self.c));
        b * b - 4 * a * c
    }

    pub fn content(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn eval(&self, s: i64, t: i64) -> i128 {
        let (a, b, c, s, t) = (i128::from(self.a), i128::from(self.b), i128::from(self.c), i128::from(s), i128::from(t));
        a * s * s + b * s * t + c * t * t
    }

    /// The root `(-b + sqrt(disc)) / 2a`; `a != 0` because the discriminant is not a square.
    pub fn root(&self) -> Result<Surd> {
        Surd::new((-self.b).into(), 1.into(), (2 * self.a).into(), self.disc().into())
    }

    /// The form with roots scaled by `d`.
    pub fn scaled_roots(&self, d: i64) -> IndefiniteBinaryForm {
        IndefiniteBinaryForm { a: self.a, b: self.b * d, c: self.c * d * d }
    }
}

/// Gauss reduction step `(a, b, c) -> (c, b', (b'^2 - D) / 4c)`.
fn rho(f: (i128, i128, i128), disc: i128, s: i128) -> (i128, i128, i128) {
    let (_, b, c) = f;
    let m = 2 * c.abs();
    let b1 = if c.abs() <= s {
        // s - 2|c| < b' <= s
        s - (s + b).rem_euclid(m)
    } else {
        // -|c| < b' <= |c|
        let r = (-b).rem_euclid(m);
        if r > c.abs() {
            r - m
        } else {
            r
        }
    };
    (c, b1, (b1 * b1 - disc) / (4 * c))
}

fn is_reduced(f: (i128, i128, i128), s: i128) -> bool {
    let (a, b, _) = f;
    b > 0 && b <= s && s - b < 2 * a.abs() && 2 * a.abs() <= s + b
}

/// The cycle of reduced forms equivalent to `f`.
pub fn reduction_cycle(f: &IndefiniteBinaryForm) -> Vec<(i128, i128, i128)> {
    let disc = f.disc();
    let s = disc.sqrt();
    let mut g = (i128::from(f.a), i128::from(f.b), i128::from(f.c));
    while !is_reduced(g, s) {
        g = rho(g, disc, s);
    }
    let start = g;
    let mut cycle = vec![start];
    loop {
        g = rho(g, disc, s);
        if g == start {
            return cycle;
        }
        cycle.push(g);
    }
}

fn markoff_exact(f: &IndefiniteBinaryForm) -> Result<Surd> {
    let f = IndefiniteBinaryForm::new(f.a, f.b, f.c)?;
    let min = reduction_cycle(&f).iter().map(|g| g.0.abs()).min().expect("nonempty cycle");
    Surd::new(0.into(), 1.into(), min.into(), f.disc().into())
}

/// `sqrt(disc) / min |f(s, t)|`, the minimum read off the reduction cycle.
pub fn markoff_value_form(f: &IndefiniteBinaryForm) -> Result<SpectrumValue> {
    let exact = markoff_exact(f)?;
    let root = f.root()?;
    let word = period_word(&root)?;
    Ok(SpectrumValue::new(exact, Witness { word: word.clone(), divisor: 1, columns: vec![(1, word)], point: root }))
}

/// `m * max_{d | n} mu(d xi, d xi')` for the roots of `f`.
pub fn n_markoff(f: &IndefiniteBinaryForm, n: i64, m: i64) -> Result<SpectrumValue> {
    check_positive("n", n)?;
    check_positive("m", m)?;
    IndefiniteBinaryForm::new(f.a, f.b, f.c)?;
    let mut best: Option<(Surd, i64)> = None;
    let mut columns = Vec::new();
    for d in int::divisors(n) {
        let g = f.scaled_roots(d);
        let v = markoff_exact(&g)?;
        columns.push((d, period_word(&g.root()?)?));
        best = match best {
            Some((b, bd)) if v.try_cmp(&b)? != Ordering::Greater => Some((b, bd)),
            _ => Some((v, d)),
        };
    }
    let (value, divisor) = best.expect("n has a divisor");
    let word = columns[0].1.clone();
    Ok(SpectrumValue::new(value.scale(m.into(), 1.into())?, Witness { word, divisor, columns, point: f.root()? }))
}
