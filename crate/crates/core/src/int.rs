//! Integer plumbing shared by every module: the [`Int`] scalar trait,
//! factorization, divisors and valuations.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Exact integer scalar the quadratic-field arithmetic is generic over.
///
/// Implemented for `i64`, `i128` and [`BigInt`]. Fixed-width types are the
/// caller's responsibility to keep in range; the crate only instantiates them
/// on inputs whose sizes are bounded up front.
pub trait Int:
    Integer
    + Signed
    + Roots
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(b: &BigInt) -> Option<Self>;
}

impl Int for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
}

impl Int for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
}

impl Int for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
}

/// Trial-division bound used before falling back to Miller-Rabin / Pollard rho.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(mut n: i64, p: i64) -> u32 {
    assert!(n != 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_prime_i64(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    is_probable_prime(&BigUint::from(n as u64))
}

/// Positive divisors of `n != 0` in increasing order.
pub fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    assert!(n > 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization of a small nonzero integer.
pub fn factor_i64(n: i64) -> Vec<(i64, u32)> {
    factorize(&BigUint::from(n.unsigned_abs()))
        .into_iter()
        .map(|(p, e)| (p.to_i64().expect("prime fits"), e))
        .collect()
}

pub fn prime_divisors(n: i64) -> Vec<i64> {
    factor_i64(n).into_iter().map(|(p, _)| p).collect()
}

fn small_primes(bound: u64) -> Vec<u64> {
    let bound = bound as usize;
    let mut sieve = vec![true; bound + 1];
    let mut primes = Vec::new();
    for i in 2..=bound {
        if sieve[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= bound {
                sieve[j] = false;
                j += i;
            }
        }
    }
    primes
}

/// Deterministic for n < 3.3e24 (first 13 prime bases), probabilistic beyond.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for b in BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let m = std::cmp::min(128, r - k);
                for _ in 0..m {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1u32;
    }
}

fn factor_rec(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let s = n.sqrt();
    if &s * &s == n {
        factor_rec(s.clone(), out);
        factor_rec(s, out);
        return;
    }
    let d = pollard_brent(&n);
    factor_rec(&n / &d, out);
    factor_rec(d, out);
}

/// Full factorization: trial division up to `bound`, then Miller-Rabin and
/// Pollard-Brent on the cofactor.
pub fn factorize_with_bound(n: &BigUint, bound: u64) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut n = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let limit = match n.sqrt().to_u64() {
        Some(s) => s.min(bound),
        None => bound,
    };
    for p in small_primes(limit.max(2)) {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
    }
    let mut rest = Vec::new();
    factor_rec(n, &mut rest);
    rest.sort();
    for p in rest {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 += 1,
            None => out.push((p, 1)),
        }
    }
    out.sort();
    out
}

pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    factorize_with_bound(n, DEFAULT_TRIAL_BOUND)
}

/// Writes `n = s^2 * k` with `k` squarefree; returns `(s, k)`.
pub fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.sign() == Sign::Plus, "square_part needs a positive integer");
    let mut s = BigInt::one();
    let mut k = BigInt::one();
    for (p, e) in factorize(n.magnitude()) {
        let p = BigInt::from(p);
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            k *= &p;
        }
    }
    (s, k)
}

/// Floor of the square root of a nonnegative [`Int`].
pub fn isqrt<T: Int>(n: &T) -> T {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

pub fn is_square<T: Int>(n: &T) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    s.clone() * s == *n
}

pub fn from_i64<T: Int>(v: i64) -> T {
    T::from_i64(v).expect("i64 fits every Int")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_of_twelve() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn egcd_identity() {
        for (a, b) in [(12, 18), (-7, 5), (0, 9), (9, 0), (-4, -6)] {
            let (g, x, y) = egcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, gcd_i64(a, b));
        }
    }

    #[test]
    fn factorization_with_large_cofactors() {
        // 1000003 and 1000033 both exceed the trial bound
        let n = BigUint::from(1000003u64) * BigUint::from(1000003u64) * BigUint::from(1000033u64) * 12u32;
        let f = factorize(&n);
        assert_eq!(
            f,
            vec![
                (BigUint::from(2u32), 2),
                (BigUint::from(3u32), 1),
                (BigUint::from(1000003u32), 2),
                (BigUint::from(1000033u32), 1)
            ]
        );
        let (s, k) = square_part(&BigInt::from(n));
        assert_eq!(s, BigInt::from(2u64 * 1000003));
        assert_eq!(k, BigInt::from(3u64 * 1000033));
    }

    #[test]
    fn primality() {
        assert!(is_prime_i64(2));
        assert!(is_prime_i64(509));
        assert!(!is_prime_i64(1));
        assert!(!is_prime_i64(561));
        assert!(is_probable_prime(&BigUint::from(1_000_000_007u64)));
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(72, 2), 3);
        assert_eq!(valuation(72, 3), 2);
        assert_eq!(valuation(5, 3), 0);
    }
}
