//! Low-lying points of the weighted Lagrange spectrum by exhaustive search
//! over periodic continued fractions.
//!
//! `lambda_n(xi) = max_{d | n} lambda(d xi)` is invariant under `Gamma_0(n)`,
//! not under all of `GL2(Z)`, so one necklace `w` stands for several spectrum
//! points. For `xi0 = [w]` and each `e | n` we visit every `xi = U H xi0` with
//! `H` a primitive Hermite matrix of determinant `e` and `U` running over
//! `Gamma_0(n) \ SL2(Z)`, restricted to the pairs with `e xi ~ xi0`. Every
//! `d xi` is then `K xi0` for an upper triangular `K`, and all the `K` are
//! tabulated once per `n`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::value::{n_lagrange, SpectrumValue};
use crate::error::{Error, Result};
use crate::int::{self, egcd};
use crate::qfield::cf_value;
use crate::quaternion::{mul2, Mat2, IDENTITY2};
use crate::{Rational, Surd};

/// Exact `lambda^2`.
type Sq = Ratio<i128>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchParams {
    pub n: i64,
    pub m: i64,
    pub max_term: i64,
    pub max_period: usize,
    pub limit: usize,
    /// Keep only values strictly below this bound.
    pub below: Option<Rational>,
}

/// Discriminants of transformed forms stay below this, so every intermediate
/// product fits in `i128`.
const DISC_LIMIT: i128 = 1 << 100;

const CHUNK: usize = 1 << 14;

/// Right cosets `Gamma_0(n) \ SL2(Z)`, one matrix per point of `P^1(Z/n)`.
pub fn coset_reps(n: i64) -> Vec<Mat2> {
    if n == 1 {
        return vec![IDENTITY2];
    }
    let units: Vec<i64> = (1..n).filter(|u| u.gcd(&n) == 1).collect();
    let mut reps = Vec::new();
    for c in 0..n {
        for d in 0..n {
            if c.gcd(&d).gcd(&n) != 1 {
                continue;
            }
            let canon = units.iter().map(|u| (u * c % n, u * d % n)).min().expect("1 is a unit");
            if canon != (c, d) {
                continue;
            }
            let (c1, d1) = (0..n)
                .flat_map(|i| (0..n).map(move |j| (c + i * n, d + j * n)))
                .find(|&(x, y)| x.gcd(&y) == 1)
                .expect("coprime lift exists");
            let (_, x, y) = egcd(c1, d1);
            reps.push([[y, -x], [c1, d1]]);
        }
    }
    reps
}

/// Primitive `[[g, x], [0, delta]]` with `g delta = e`, `0 <= x < delta`.
fn hermite_matrices(e: i64) -> Vec<Mat2> {
    let mut out = Vec::new();
    for g in int::divisors(e) {
        let delta = e / g;
        for x in 0..delta {
            if g.gcd(&x).gcd(&delta) == 1 {
                out.push([[g, x], [0, delta]]);
            }
        }
    }
    out
}

/// `M = V K` with `V` in `GL2(Z)` and `K = [[a, b], [0, c]]`, `a, c > 0`,
/// `0 <= b < c`, content removed.
fn left_hermite(m: &Mat2) -> [i64; 3] {
    let (m11, m21) = (m[0][0], m[1][0]);
    let (g, u, v) = egcd(m11, m21);
    let row1 = [u * m11 + v * m21, u * m[0][1] + v * m[1][1]];
    let mut c = (-m21 / g) * m[0][1] + (m11 / g) * m[1][1];
    let a = row1[0];
    if c < 0 {
        c = -c;
    }
    let b = row1[1].rem_euclid(c);
    let k = a.gcd(&b).gcd(&c);
    [a / k, b / k, c / k]
}

struct Point {
    u: Mat2,
    h: Mat2,
    ks: Vec<usize>,
}

/// Per-`n` tables: the distinct `K` and, per spectrum point, the `K` of each `d | n`.
struct Table {
    ks: Vec<[i64; 3]>,
    points: Vec<Point>,
    max_det: i64,
}

impl Table {
    fn new(n: i64) -> Table {
        let divisors = int::divisors(n);
        let cosets = coset_reps(n);
        let mut ks: Vec<[i64; 3]> = Vec::new();
        let mut k_index: HashMap<[i64; 3], usize> = HashMap::new();
        let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
        let mut points = Vec::new();
        for &e in &divisors {
            for h in hermite_matrices(e) {
                for u in &cosets {
                    let uh = mul2(u, &h);
                    if uh[1][0] % e != 0 || uh[1][1] % e != 0 {
                        continue;
                    }
                    let mut idx: Vec<usize> = divisors
                        .iter()
                        .map(|&d| {
                            let k = left_hermite(&mul2(&[[d, 0], [0, 1]], &uh));
                            *k_index.entry(k).or_insert_with(|| {
                                ks.push(k);
                                ks.len() - 1
                            })
                        })
                        .collect();
                    idx.sort_unstable();
                    idx.dedup();
                    if seen.insert(idx.clone(), ()).is_none() {
                        points.push(Point { u: *u, h, ks: idx });
                    }
                }
            }
        }
        let max_det = ks.iter().map(|k| k[0] * k[2]).max().unwrap_or(1);
        Table { ks, points, max_det }
    }
}

/// Primitive `(A, B, C)` with `[w] = (-B + sqrt(B^2 - 4AC)) / 2A`.
fn word_form(word: &[u8]) -> Option<[i128; 3]> {
    let (mut p0, mut p1, mut q0, mut q1) = (1i128, 0i128, 0i128, 1i128);
    for &a in word {
        let a = i128::from(a);
        (p0, p1) = (p0.checked_mul(a)?.checked_add(p1)?, p0);
        (q0, q1) = (q0.checked_mul(a)?.checked_add(q1)?, q0);
    }
    Some(primitive([q0, q1 - p0, -p1]))
}

fn primitive(f: [i128; 3]) -> [i128; 3] {
    let g = f[0].gcd(&f[1]).gcd(&f[2]);
    f.map(|v| v / g)
}

fn disc(f: &[i128; 3]) -> i128 {
    f[1] * f[1] - 4 * f[0] * f[2]
}

/// Form whose first root is `(a xi + b) / c` when that of `f` is `xi`.
fn transform(f: &[i128; 3], k: &[i64; 3]) -> [i128; 3] {
    let [a0, b0, c0] = *f;
    let (a, b, c) = (i128::from(k[0]), i128::from(k[1]), i128::from(k[2]));
    primitive([a0 * c * c, -2 * a0 * b * c + b0 * a * c, a0 * b * b - b0 * a * b + c0 * a * a])
}

/// `lambda^2 = 4N / (min Q)^2` over the reduced states `(P + sqrt N) / Q`.
#[cfg(test)]
fn lambda_sq(f: &[i128; 3]) -> Sq {
    lambda_sq_below(f, None).expect("no cutoff")
}

/// As [`lambda_sq`], giving up with `None` once the value provably exceeds `cutoff`.
fn lambda_sq_below(f: &[i128; 3], cutoff: Option<&Sq>) -> Option<Sq> {
    let n = disc(f);
    let s = n.sqrt();
    // q below this gives lambda^2 > cutoff; the float margin only delays the exit
    let q_exit = cutoff.map_or(0.0, |c| (4.0 * n as f64 / sq_to_f64(c)).sqrt() * (1.0 - 1e-9));
    let step = |p: i128, q: i128| -> (i128, i128) {
        let a = if q > 0 { (p + s).div_euclid(q) } else { (-p - s - 1).div_euclid(-q) };
        let p1 = a * q - p;
        (p1, (n - p1 * p1) / q)
    };
    let reduced = |p: i128, q: i128| q > 0 && p > 0 && p <= s && s < p + q && q <= s + p;
    let (mut p, mut q) = (-f[1], 2 * f[0]);
    while !reduced(p, q) {
        (p, q) = step(p, q);
    }
    // around the cycle Q_{k+1} = Q_{k-1} + a_k (P_k - P_{k+1}) keeps to i64
    let small = |v: i128| i64::try_from(v).ok();
    let (Some(s), Some(p0), Some(q0), Some(r0)) = (small(s), small(p), small(q), small((n - p * p) / q)) else {
        return cycle_min_wide(p, q, q_exit, step).and_then(|m| finish(n, m, cutoff));
    };
    let (mut p, mut q, mut q_prev) = (p0, q0, r0);
    let mut min_q = q;
    loop {
        if (min_q as f64) < q_exit {
            return None;
        }
        let a = (p + s) / q;
        let p1 = a * q - p;
        (q_prev, q) = (q, q_prev + a * (p - p1));
        p = p1;
        if (p, q) == (p0, q0) {
            break;
        }
        min_q = min_q.min(q);
    }
    finish(n, i128::from(min_q), cutoff)
}

fn cycle_min_wide(p: i128, q: i128, q_exit: f64, step: impl Fn(i128, i128) -> (i128, i128)) -> Option<i128> {
    let start = (p, q);
    let (mut p, mut q) = start;
    let mut min_q = q;
    loop {
        if (min_q as f64) < q_exit {
            return None;
        }
        (p, q) = step(p, q);
        if (p, q) == start {
            return Some(min_q);
        }
        min_q = min_q.min(q);
    }
}

fn finish(n: i128, min_q: i128, cutoff: Option<&Sq>) -> Option<Sq> {
    let v = Sq::new(4 * n, min_q * min_q);
    match cutoff {
        Some(c) if &v > c => None,
        _ => Some(v),
    }
}

/// `[0; c_1, ..., c_k, t]` is monotone in the unknown tail `t >= 1`, so the
/// smaller endpoint bounds it from below.
fn tail_lower_bound(digits: impl DoubleEndedIterator<Item = f64> + Clone) -> f64 {
    let eval = |last_bump: f64| {
        let mut x = 0.0f64;
        let mut first = true;
        for c in digits.clone().rev() {
            let c = if first { c + last_bump } else { c };
            first = false;
            x = 1.0 / (c + x);
        }
        x
    };
    eval(0.0).min(eval(1.0))
}

/// Lower bound for `lambda([w])` from the interior position `i` of a prefix.
fn position_bound(prefix: &[u8], i: usize) -> f64 {
    let fwd = prefix[i + 1..].iter().map(|&c| f64::from(c));
    let bwd = prefix[..i].iter().rev().map(|&c| f64::from(c));
    f64::from(prefix[i]) + tail_lower_bound(fwd) + tail_lower_bound(bwd)
}

/// Lyndon words of length `len` over `1..=k`, depth-first, skipping prefixes
/// whose bound exceeds `limit`.
fn lyndon_words(len: usize, k: u8, limit: f64, emit: &mut impl FnMut(&[u8])) {
    fn go(t: usize, p: usize, a: &mut Vec<u8>, len: usize, k: u8, bound: f64, limit: f64, emit: &mut impl FnMut(&[u8])) {
        if t > len {
            if p == len {
                emit(&a[1..]);
            }
            return;
        }
        let start = a[t - p];
        for j in start..=k {
            a[t] = j;
            let b = if t >= 3 { bound.max(position_bound(&a[1..=t], t - 2)) } else { bound };
            if b <= limit {
                go(t + 1, if j == start { p } else { t }, a, len, k, b, limit, emit);
            }
        }
    }
    let mut a = vec![1u8; len + 1];
    go(1, 1, &mut a, len, k, 0.0, limit, emit);
}

/// The reversed period is the Galois conjugate, and `(d xi)' = d xi'`, so a
/// Lyndon word and the least rotation of its reversal give the same values.
fn reversal_is_larger(w: &[u8]) -> bool {
    let r: Vec<u8> = w.iter().rev().copied().collect();
    (0..r.len()).all(|i| r[i..].iter().chain(&r[..i]).ge(w.iter()))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    word: Vec<u8>,
    point: usize,
}

impl Candidate {
    fn key(&self) -> (usize, &[u8], usize) {
        (self.word.len(), &self.word, self.point)
    }
}

/// Spectrum points of one word not exceeding `cutoff`, one per value.
fn eval_word(word: &[u8], table: &Table, cutoff: Option<Sq>) -> Result<Vec<(Sq, usize)>> {
    let f0 = word_form(word).ok_or_else(|| Error::Usage("word too long for the i128 fast path".into()))?;
    let d0 = disc(&f0);
    let det = i128::from(table.max_det);
    if d0.checked_mul(det * det).is_none_or(|v| v > DISC_LIMIT) {
        return Err(Error::Usage("search bounds too large for the i128 fast path".into()));
    }
    // e xi ~ xi0 for every visited point, so lambda(xi0) bounds them all
    if lambda_sq_below(&f0, cutoff.as_ref()).is_none() {
        return Ok(Vec::new());
    }
    // None marks a value above the cutoff
    let mut cache: Vec<Option<Option<Sq>>> = vec![None; table.ks.len()];
    let mut out = Vec::new();
    'points: for (pi, pt) in table.points.iter().enumerate() {
        let mut best = Sq::zero();
        for &k in &pt.ks {
            let v = *cache[k].get_or_insert_with(|| lambda_sq_below(&transform(&f0, &table.ks[k]), cutoff.as_ref()));
            let Some(v) = v else { continue 'points };
            best = best.max(v);
        }
        out.push((best, pi));
    }
    out.sort();
    out.dedup_by_key(|x| x.0);
    Ok(out)
}

struct Collector {
    limit: usize,
    cutoff: Option<Sq>,
    best: BTreeMap<Sq, Candidate>,
}

impl Collector {
    fn offer(&mut self, v: Sq, cand: Candidate) {
        if self.cutoff.is_some_and(|c| v > c) {
            return;
        }
        match self.best.get_mut(&v) {
            Some(cur) if cur.key() <= cand.key() => {}
            Some(cur) => *cur = cand,
            None => {
                self.best.insert(v, cand);
            }
        }
        if self.best.len() > self.limit {
            let last = *self.best.keys().next_back().expect("nonempty");
            self.best.remove(&last);
        }
        if self.best.len() == self.limit {
            let last = *self.best.keys().next_back().expect("nonempty");
            if self.cutoff.is_none_or(|c| last < c) {
                self.cutoff = Some(last);
            }
        }
    }
}

fn sq_to_f64(v: &Sq) -> f64 {
    v.numer().to_f64().unwrap_or(f64::INFINITY) / v.denom().to_f64().unwrap_or(1.0)
}

fn run_stage(table: &Table, params: &SearchParams, max_period: usize, col: &mut Collector) -> Result<()> {
    let k = u8::try_from(params.max_term).map_err(|_| Error::Usage("max_term must be below 256".into()))?;
    for len in 1..=max_period {
        let mut buf: Vec<Vec<u8>> = Vec::with_capacity(CHUNK);
        let mut pending: Result<()> = Ok(());
        let flush = |buf: &mut Vec<Vec<u8>>, col: &mut Collector| -> Result<()> {
            let cutoff = col.cutoff;
            let results: Vec<Vec<(Sq, usize)>> =
                buf.par_iter().map(|w| eval_word(w, table, cutoff)).collect::<Result<_>>()?;
            for (w, hits) in buf.drain(..).zip(results) {
                for (v, point) in hits {
                    col.offer(v, Candidate { word: w.clone(), point });
                }
            }
            Ok(())
        };
        // the prefix bound is a float heuristic with a safety margin; exact checks follow
        let limit = |col: &Collector| col.cutoff.as_ref().map_or(f64::INFINITY, |c| sq_to_f64(c).sqrt() * (1.0 + 1e-9) + 1e-9);
        let mut lim = limit(col);
        lyndon_words(len, k, lim, &mut |w: &[u8]| {
            if pending.is_err() || !reversal_is_larger(w) {
                return;
            }
            buf.push(w.to_vec());
            if buf.len() == CHUNK {
                pending = flush(&mut buf, col);
                lim = limit(col);
            }
        });
        pending?;
        flush(&mut buf, col)?;
    }
    Ok(())
}

fn mobius(m: &Mat2, x: &Surd) -> Result<Surd> {
    let num = x.scale(m[0][0].into(), 1.into())?.add_int(m[0][1].into());
    let den = x.scale(m[1][0].into(), 1.into())?.add_int(m[1][1].into());
    num.try_div(&den)
}

fn sq_to_surd(v: &Sq, m: i64) -> Result<Surd> {
    let (num, den) = (BigInt::from(*v.numer()), BigInt::from(*v.denom()));
    Surd::new(0.into(), m.into(), den.clone(), num * den)
}

fn rational_to_sq(x: &Rational) -> Option<Sq> {
    Some(Sq::new(x.numer().to_i128()?, x.denom().to_i128()?))
}

/// The `limit` smallest distinct values of `m lambda_n` over periodic words
/// with terms in `1..=max_term` and period at most `max_period`.
pub fn spectrum_search(params: &SearchParams) -> Result<Vec<SpectrumValue>> {
    let SearchParams { n, m, max_term, max_period, limit, .. } = *params;
    if n <= 0 || m <= 0 || max_term < 1 || max_period < 1 || limit < 1 {
        return Err(Error::Usage(format!(
            "search needs n, m, max_term, max_period, limit >= 1 (got {n}, {m}, {max_term}, {max_period}, {limit})"
        )));
    }
    let below_sq = match &params.below {
        Some(x) if x <= &Rational::zero() => return Ok(Vec::new()),
        Some(x) => {
            let y = x / Rational::from_integer(m.into());
            Some(rational_to_sq(&(&y * &y)).ok_or_else(|| Error::Usage(format!("bound {x} too large")))?)
        }
        None => None,
    };
    let table = Table::new(n);
    let mut col = Collector { limit, cutoff: below_sq, best: BTreeMap::new() };
    // short periods first: they fix a cutoff that prunes the long ones
    let mut stages: Vec<usize> = [4, 6, 8, 10].into_iter().filter(|&s| s < max_period).collect();
    stages.push(max_period);
    for stage in stages {
        let cutoff = col.cutoff;
        col = Collector { limit, cutoff, best: BTreeMap::new() };
        run_stage(&table, params, stage, &mut col)?;
    }
    let mut out = Vec::new();
    for (v, cand) in &col.best {
        if below_sq.is_some_and(|b| *v >= b) {
            continue;
        }
        let word: Vec<BigInt> = cand.word.iter().map(|&a| BigInt::from(a)).collect();
        let pt = &table.points[cand.point];
        let xi = mobius(&mul2(&pt.u, &pt.h), &cf_value(&[], &word)?)?;
        let value = n_lagrange(&xi, n, m)?;
        if value.exact != sq_to_surd(v, m)? {
            return Err(Error::StructureViolation(format!(
                "witness {:?} re-evaluates to {} instead of m sqrt({v})",
                cand.word, value.exact
            )));
        }
        out.push(value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosets_cover_p1() {
        // |P^1(Z/n)| = n prod (1 + 1/p)
        for (n, size) in [(1, 1), (2, 3), (4, 6), (6, 12), (9, 12), (12, 24), (13, 14)] {
            let reps = coset_reps(n);
            assert_eq!(reps.len(), size, "n={n}");
            for u in reps {
                assert_eq!(u[0][0] * u[1][1] - u[0][1] * u[1][0], 1);
            }
        }
    }

    #[test]
    fn hermite_decomposition() {
        for m in [[[3, 1], [2, 5]], [[0, 2], [1, 7]], [[-4, 6], [2, 3]], [[6, 0], [0, 1]]] {
            let [a, b, c] = left_hermite(&m);
            let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
            let g = m.iter().flatten().fold(0i64, |g, v| g.gcd(v));
            assert_eq!(a * c * g * g, det);
            assert!(0 <= b && b < c);
        }
    }

    #[test]
    fn fast_lambda_matches_exact() {
        for w in [&[1u8][..], &[2], &[1, 1, 2, 2], &[1, 3, 2, 3], &[1, 1, 3]] {
            let f = word_form(w).unwrap();
            let big: Vec<BigInt> = w.iter().map(|&a| a.into()).collect();
            let x = cf_value(&[], &big).unwrap();
            let exact = super::super::value::lagrange_value(&x).unwrap().exact;
            assert_eq!(sq_to_surd(&lambda_sq(&f), 1).unwrap(), exact);
            let k = [2, 1, 3];
            let y = mobius(&[[2, 1], [0, 3]], &x).unwrap();
            let exact = super::super::value::lagrange_value(&y).unwrap().exact;
            assert_eq!(sq_to_surd(&lambda_sq(&transform(&f, &k)), 1).unwrap(), exact);
        }
    }

    #[test]
    fn lyndon_counts() {
        let mut count = 0;
        lyndon_words(6, 2, f64::INFINITY, &mut |_| count += 1);
        assert_eq!(count, 9);
        let mut words = Vec::new();
        lyndon_words(3, 2, f64::INFINITY, &mut |w| words.push(w.to_vec()));
        assert_eq!(words, vec![vec![1, 1, 2], vec![1, 2, 2]]);
        assert!(reversal_is_larger(&[1, 1, 2, 1, 2]));
        assert!(!reversal_is_larger(&[1, 1, 3, 1, 2]));
        assert!(reversal_is_larger(&[1, 2, 1, 3]));
    }

    #[test]
    fn classical_bottom() {
        let p = SearchParams { n: 1, m: 1, max_term: 2, max_period: 6, limit: 5, below: None };
        let vals: Vec<String> = spectrum_search(&p).unwrap().iter().map(|v| v.decimal[..6].to_string()).collect();
        assert_eq!(vals, ["2.2360", "2.8284", "2.9732", "2.9960", "2.9992"]);
    }
}
