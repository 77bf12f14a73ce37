//! Text syntax: surds `(p+q*sqrt(D))/r`, continued fractions
//! `[a0;a1,...,(b1,...,bk)]` and comma-separated integer lists.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ContinuedFraction, QuadraticSurd};
use crate::error::{Error, Result};

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, src }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { col: self.pos + 1, msg: format!("{} in {:?}", msg.into(), self.src) })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        let end = self.pos + w.chars().count();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(w.chars()) {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn unsigned(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let v = self.unsigned()?;
        Ok(if negative { -v } else { v })
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }
}

/// A sum of terms `k`, `k*sqrt(D)` or `sqrt(D)` with at most one radicand.
fn sum(cur: &mut Cursor) -> Result<(BigInt, BigInt, Option<BigInt>)> {
    let (mut p, mut q, mut d) = (BigInt::zero(), BigInt::zero(), None::<BigInt>);
    let mut first = true;
    loop {
        let sign = if cur.eat('-') {
            -1
        } else if cur.eat('+') || first {
            1
        } else {
            break;
        };
        first = false;
        let (coef, radicand) = if cur.eat_word("sqrt") {
            (BigInt::one(), Some(radical(cur)?))
        } else {
            let k = cur.unsigned()?;
            if cur.eat('*') {
                if !cur.eat_word("sqrt") {
                    return cur.err("expected sqrt after '*'");
                }
                (k, Some(radical(cur)?))
            } else {
                (k, None)
            }
        };
        let coef = coef * sign;
        match radicand {
            None => p += coef,
            Some(r) => {
                if d.as_ref().is_some_and(|d0| *d0 != r) {
                    return cur.err("two different radicands");
                }
                d = Some(r);
                q += coef;
            }
        }
        if !matches!(cur.peek(), Some('+') | Some('-')) {
            break;
        }
    }
    Ok((p, q, d))
}

fn radical(cur: &mut Cursor) -> Result<BigInt> {
    cur.expect('(')?;
    let d = cur.integer()?;
    cur.expect(')')?;
    Ok(d)
}

/// Parses `(p+q*sqrt(D))/r` and the obvious variants (`sqrt(2)`, `3/4`, ...).
pub fn parse_surd(src: &str) -> Result<QuadraticSurd<BigInt>> {
    let mut cur = Cursor::new(src);
    let (p, q, d) = if cur.eat('(') {
        let v = sum(&mut cur)?;
        cur.expect(')')?;
        v
    } else {
        sum(&mut cur)?
    };
    let r = if cur.eat('/') { cur.integer()? } else { BigInt::one() };
    cur.finish()?;
    let d = d.unwrap_or_else(BigInt::one);
    QuadraticSurd::new(p, q, r, d)
}

/// Parses `[a0;a1,...,(b1,...,bk)]`; `[(b1,...,bk)]` has an empty preperiod.
pub fn parse_cf(src: &str) -> Result<ContinuedFraction<BigInt>> {
    let mut cur = Cursor::new(src);
    cur.expect('[')?;
    let mut preperiod = Vec::new();
    if cur.peek() != Some('(') {
        preperiod.push(cur.integer()?);
        if !cur.eat(';') {
            return cur.err("expected ';' after the integer part");
        }
        while cur.peek() != Some('(') {
            let a = cur.unsigned()?;
            if a.is_zero() {
                return cur.err("partial quotients must be positive");
            }
            preperiod.push(a);
            cur.expect(',')?;
        }
    }
    cur.expect('(')?;
    let period = terms(&mut cur, ')')?;
    cur.expect(']')?;
    cur.finish()?;
    if period.is_empty() {
        return Err(Error::NotQuadratic);
    }
    Ok(ContinuedFraction { preperiod, period })
}

fn terms(cur: &mut Cursor, close: char) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    if cur.eat(close) {
        return Ok(out);
    }
    loop {
        let a = cur.unsigned()?;
        if a.is_zero() {
            return cur.err("partial quotients must be positive");
        }
        out.push(a);
        if cur.eat(close) {
            return Ok(out);
        }
        cur.expect(',')?;
    }
}

/// An exact rational written as `a`, `a/b` or a decimal `-1.25`.
pub fn parse_rational(src: &str) -> Result<crate::Rational> {
    let t = src.trim();
    let bad = |col: usize, msg: &str| Error::Parse { col, msg: format!("{msg} in {src:?}") };
    let int = |s: &str, col: usize| s.parse::<BigInt>().map_err(|_| bad(col, "expected an integer"));
    if let Some((num, den)) = t.split_once('/') {
        let den = int(den.trim(), num.len() + 2)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(crate::Rational::new(int(num.trim(), 1)?, den));
    }
    let (ip, fp) = t.split_once('.').unwrap_or((t, ""));
    if fp.starts_with(['+', '-']) || (ip.is_empty() && fp.is_empty()) {
        return Err(bad(ip.len() + 2, "expected digits"));
    }
    let negative = ip.starts_with('-');
    let digits = format!("{}{fp}", ip.trim_start_matches(['+', '-']));
    let mag = int(&digits, 1)?;
    let scale = BigInt::from(10u32).pow(u32::try_from(fp.len()).map_err(|_| bad(1, "too many digits"))?);
    Ok(crate::Rational::new(if negative { -mag } else { mag }, scale))
}

/// Comma-separated integers, optionally checking the count.
pub fn parse_int_list(src: &str, expected: Option<usize>) -> Result<Vec<i64>> {
    let mut cur = Cursor::new(src);
    let mut out = Vec::new();
    loop {
        let v = cur.integer()?;
        match i64::try_from(&v) {
            Ok(v) => out.push(v),
            Err(_) => return cur.err("integer out of range"),
        }
        if cur.peek().is_none() {
            break;
        }
        cur.expect(',')?;
    }
    if let Some(n) = expected {
        if out.len() != n {
            return Err(Error::Parse { col: src.len() + 1, msg: format!("expected {n} integers, got {}", out.len()) });
        }
    }
    Ok(out)
}

/// A continued-fraction word such as `1,1,2,2` (all terms positive).
pub fn parse_word(src: &str) -> Result<Vec<i64>> {
    let w = parse_int_list(src, None)?;
    if let Some(bad) = w.iter().find(|a| !a.is_positive()) {
        return Err(Error::BadTerm(bad.to_string()));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(p: i64, q: i64, r: i64, d: i64) -> QuadraticSurd<BigInt> {
        QuadraticSurd::new(p.into(), q.into(), r.into(), d.into()).unwrap()
    }

    #[test]
    fn rational_syntax() {
        let r = |n: i64, d: i64| crate::Rational::new(n.into(), d.into());
        assert_eq!(parse_rational("4.3364").unwrap(), r(43364, 10000));
        assert_eq!(parse_rational("-0.5").unwrap(), r(-1, 2));
        assert_eq!(parse_rational(" 7/3 ").unwrap(), r(7, 3));
        assert_eq!(parse_rational("12").unwrap(), r(12, 1));
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational("1/0"), Err(Error::DivisionByZero));
    }

    #[test]
    fn surd_syntax() {
        assert_eq!(parse_surd("(1+1*sqrt(5))/2").unwrap(), big(1, 1, 2, 5));
        assert_eq!(parse_surd("(1-sqrt(5))/2").unwrap(), big(1, -1, 2, 5));
        assert_eq!(parse_surd("sqrt(8)").unwrap(), big(0, 2, 1, 2));
        assert_eq!(parse_surd(" ( -3 + 2*sqrt(7) ) / -1").unwrap(), big(3, -2, 1, 7));
        assert_eq!(parse_surd("3/4").unwrap(), QuadraticSurd::from_ratio(3.into(), 4.into()).unwrap());
        let x = big(-7, -3, 11, 13);
        assert_eq!(parse_surd(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn surd_errors() {
        assert!(matches!(parse_surd("(1+sqrt(5)"), Err(Error::Parse { col: 11, .. })));
        assert!(matches!(parse_surd("sqrt(2)+sqrt(3)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_surd("sqrt(9)"), Err(Error::RationalDisguised(_))));
        assert!(matches!(parse_surd("1/0"), Err(Error::DivisionByZero)));
    }

    #[test]
    fn cf_syntax() {
        let cf = parse_cf("[1;(2)]").unwrap();
        assert_eq!(cf.value().unwrap(), big(0, 1, 1, 2));
        let cf = parse_cf("[(1,1,2,2)]").unwrap();
        assert!(cf.preperiod.is_empty());
        assert_eq!(cf.to_string(), "[(1,1,2,2)]");
        let cf = parse_cf("[-2; 3, 1, (4, 5)]").unwrap();
        assert_eq!(cf.to_string(), "[-2;3,1,(4,5)]");
        assert_eq!(parse_cf("[1;()]"), Err(Error::NotQuadratic));
        assert!(matches!(parse_cf("[1;0,(2)]"), Err(Error::Parse { .. })));
    }

    #[test]
    fn lists() {
        assert_eq!(parse_int_list("0, 0,-6,1,0,0", Some(6)).unwrap(), vec![0, 0, -6, 1, 0, 0]);
        assert!(parse_int_list("1,2", Some(3)).is_err());
        assert_eq!(parse_word("1,1,2,2").unwrap(), vec![1, 1, 2, 2]);
        assert!(parse_word("1,0").is_err());
    }
}
