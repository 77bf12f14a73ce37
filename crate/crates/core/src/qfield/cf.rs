use std::collections::HashMap;
use std::fmt;

use super::QuadraticSurd;
use crate::error::{Error, Result};
use crate::int::{self, Int};

/// Eventually periodic simple continued fraction
/// `[a0; a1, ..., a_k, (b1, ..., b_l)]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction<T> {
    pub preperiod: Vec<T>,
    pub period: Vec<T>,
}

/// The number `(P + sqrt(N)) / Q` with `Q | N - P^2`, the state of the
/// classical surd expansion algorithm. `N` is a positive nonsquare.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdState<T> {
    pub p: T,
    pub q: T,
    pub n: T,
}

impl<T: Int> SurdState<T> {
    pub fn from_surd(x: &QuadraticSurd<T>) -> Result<Self> {
        if x.is_rational() {
            return Err(Error::RationalInput(x.to_string()));
        }
        let sign = x.q().signum();
        let n = x.q().clone() * x.q().clone() * x.d().clone();
        Ok(Self::new(x.p().clone() * sign.clone(), x.r().clone() * sign, n))
    }

    /// Rescales `(p, q, n)` until `q | n - p^2`.
    pub fn new(p: T, q: T, n: T) -> Self {
        if (n.clone() - p.clone() * p.clone()).is_multiple_of(&q) {
            return SurdState { p, q, n };
        }
        let a = q.abs();
        SurdState { p: p * a.clone(), n: n * a.clone() * a.clone(), q: q * a }
    }

    pub fn floor(&self) -> T {
        let s = int::isqrt(&self.n);
        if self.q.is_positive() {
            (self.p.clone() + s).div_floor(&self.q)
        } else {
            (-self.p.clone() - s - T::one()).div_floor(&(-self.q.clone()))
        }
    }

    /// One step `x -> 1 / (x - floor(x))`, returning the partial quotient.
    pub fn step(&self) -> (T, Self) {
        let a = self.floor();
        let p = a.clone() * self.q.clone() - self.p.clone();
        let q = (self.n.clone() - p.clone() * p.clone()) / self.q.clone();
        (a, SurdState { p, q, n: self.n.clone() })
    }

    /// `x > 1` and `-1 < x' < 0`, i.e. the expansion is purely periodic from here.
    pub fn is_reduced(&self) -> bool {
        if !self.q.is_positive() {
            return false;
        }
        let s = int::isqrt(&self.n);
        // 0 < P < sqrt(N) and sqrt(N) - P < Q < sqrt(N) + P, sqrt(N) irrational
        self.p.is_positive()
            && self.p <= s
            && s < self.p.clone() + self.q.clone()
            && self.q <= s.clone() + self.p.clone()
    }

    pub fn to_surd(&self) -> QuadraticSurd<T> {
        QuadraticSurd::new(self.p.clone(), T::one(), self.q.clone(), self.n.clone())
            .expect("state radicand is a positive nonsquare")
    }
}

/// Exact expansion; the period is found by recurrence of the `(P, Q)` state.
pub fn cf_expand<T: Int>(x: &QuadraticSurd<T>) -> Result<ContinuedFraction<T>> {
    let mut state = SurdState::from_surd(x)?;
    let mut seen: HashMap<(T, T), usize> = HashMap::new();
    let mut terms = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(state.p.clone(), state.q.clone())) {
            let period = terms.split_off(start);
            return Ok(ContinuedFraction { preperiod: terms, period });
        }
        seen.insert((state.p.clone(), state.q.clone()), terms.len());
        let (a, next) = state.step();
        terms.push(a);
        state = next;
    }
}

/// Convergent matrix `[[p_k, p_{k-1}], [q_k, q_{k-1}]]` of a word.
pub fn word_matrix<T: Int>(word: &[T]) -> [[T; 2]; 2] {
    let mut m = [[T::one(), T::zero()], [T::zero(), T::one()]];
    for a in word {
        let c0 = [m[0][0].clone() * a.clone() + m[0][1].clone(), m[1][0].clone() * a.clone() + m[1][1].clone()];
        m = [[c0[0].clone(), m[0][0].clone()], [c0[1].clone(), m[1][0].clone()]];
    }
    m
}

/// Purely periodic value `[(b1, ..., bk)]` as a state `(P + sqrt(N)) / Q`.
pub fn periodic_state<T: Int>(period: &[T]) -> Result<SurdState<T>> {
    if period.is_empty() {
        return Err(Error::NotQuadratic);
    }
    if let Some(bad) = period.iter().find(|b| !b.is_positive()) {
        return Err(Error::BadTerm(bad.to_string()));
    }
    let [[pk, pk1], [qk, qk1]] = word_matrix(period);
    // fixed point of y -> (pk y + pk1) / (qk y + qk1), positive root of
    // qk y^2 + b y - pk1; the common factor carries the unit, and dropping it
    // keeps the radicand small enough to factor
    let b = qk1 - pk.clone();
    let g = qk.gcd(&b).gcd(&pk1);
    let (a, b, c) = (qk / g.clone(), b / g.clone(), pk1 / g);
    let n = b.clone() * b.clone() + int::from_i64::<T>(4) * a.clone() * c;
    Ok(SurdState::new(-b, int::from_i64::<T>(2) * a, n))
}

/// Exact value of `[a0; a1, ..., (b1, ..., bk)]`.
pub fn cf_value<T: Int>(preperiod: &[T], period: &[T]) -> Result<QuadraticSurd<T>> {
    let tail = periodic_state(period)?.to_surd();
    if let Some(bad) = preperiod.iter().skip(1).find(|a| !a.is_positive()) {
        return Err(Error::BadTerm(bad.to_string()));
    }
    let mut x = tail;
    for a in preperiod.iter().rev() {
        x = x.recip()?.add_int(a.clone());
    }
    Ok(x)
}

impl<T: Int> ContinuedFraction<T> {
    pub fn value(&self) -> Result<QuadraticSurd<T>> {
        cf_value(&self.preperiod, &self.period)
    }
}

impl<T: fmt::Display> fmt::Display for ContinuedFraction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[T]| v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "[")?;
        if let Some((a0, rest)) = self.preperiod.split_first() {
            write!(f, "{a0};")?;
            if !rest.is_empty() {
                write!(f, "{},", join(rest))?;
            }
        }
        write!(f, "({})]", join(&self.period))
    }
}

/// Index of the lexicographically least rotation (first one on ties).
pub fn least_rotation<T: Ord>(w: &[T]) -> usize {
    let n = w.len();
    let rot = |k: usize| w[k..].iter().chain(w[..k].iter());
    (0..n).fold(0, |best, k| if rot(k).lt(rot(best)) { k } else { best })
}

pub fn canonical_rotation<T: Ord + Clone>(w: &[T]) -> Vec<T> {
    let k = least_rotation(w);
    w[k..].iter().chain(w[..k].iter()).cloned().collect()
}
