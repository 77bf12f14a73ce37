//! Integral ternary quadratic forms: discriminant, bilinear form, rational
//! points, reduction to the standard shape `-AX^2 - BXY - CY^2 + DXZ`, the
//! parametrization `rho` and the transport map `tau`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::int::{self, egcd};
use crate::{Rational, Surd};

pub type Mat3 = [[i64; 3]; 3];
pub type SurdVec = [Surd; 3];

pub const IDENTITY3: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

/// `A X^2 + B XY + C Y^2 + D XZ + E YZ + F Z^2`, coefficients in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TernaryForm {
    pub coeffs: [i64; 6],
}

impl TernaryForm {
    pub fn new(coeffs: [i64; 6]) -> Self {
        TernaryForm { coeffs }
    }

    /// `-A X^2 - B XY - C Y^2 + D XZ`.
    pub fn standard(a: i64, b: i64, c: i64, d: i64) -> Self {
        TernaryForm { coeffs: [-a, -b, -c, d, 0, 0] }
    }

    /// The Veronese form `-Y^2 + XZ`.
    pub fn veronese() -> Self {
        Self::standard(0, 0, 1, 1)
    }

    /// Twice the Gram matrix; integral.
    pub fn gram2(&self) -> [[i64; 3]; 3] {
        let [a, b, c, d, e, f] = self.coeffs;
        [[2 * a, b, d], [b, 2 * c, e], [d, e, 2 * f]]
    }

    /// `4 det(Gram)`; zero exactly for singular conics.
    pub fn discriminant(&self) -> i64 {
        let [a, b, c, d, e, f] = self.coeffs.map(i128::from);
        let disc = 4 * a * c * f - a * e * e - b * b * f + b * d * e - c * d * d;
        i64::try_from(disc).expect("discriminant fits in i64")
    }

    pub fn content(&self) -> i64 {
        self.coeffs.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// The form divided by its content.
    pub fn primitive_part(&self) -> TernaryForm {
        let g = self.content().max(1);
        TernaryForm { coeffs: self.coeffs.map(|c| c / g) }
    }

    pub fn negated(&self) -> TernaryForm {
        TernaryForm { coeffs: self.coeffs.map(|c| -c) }
    }

    pub fn eval(&self, v: [i64; 3]) -> i128 {
        let [a, b, c, d, e, f] = self.coeffs.map(i128::from);
        let [x, y, z] = v.map(i128::from);
        a * x * x + b * x * y + c * y * y + d * x * z + e * y * z + f * z * z
    }

    pub fn eval_big(&self, v: &[BigInt; 3]) -> BigInt {
        let [a, b, c, d, e, f] = self.coeffs.map(BigInt::from);
        let [x, y, z] = v;
        a * x * x + b * x * y + c * y * y + d * x * z + e * y * z + f * z * z
    }

    /// `<P, Q> = (Phi(P+Q) - Phi(P) - Phi(Q)) / 2`.
    pub fn bilinear(&self, p: &[Rational; 3], q: &[Rational; 3]) -> Rational {
        let g = self.gram2();
        let mut acc = Rational::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += &p[i] * &q[j] * Rational::from_integer(g[i][j].into());
            }
        }
        acc / Rational::from_integer(2.into())
    }

    /// Value of the form on a vector of surds from one field.
    pub fn eval_surd(&self, v: &SurdVec) -> Result<Surd> {
        self.bilinear_surd(v, v)
    }

    pub fn bilinear_surd(&self, u: &SurdVec, v: &SurdVec) -> Result<Surd> {
        let g = self.gram2();
        let mut acc = Surd::from_integer(BigInt::zero());
        for i in 0..3 {
            for j in 0..3 {
                if g[i][j] != 0 {
                    let term = u[i].try_mul(&v[j])?.scale(g[i][j].into(), 1.into())?;
                    acc = acc.try_add(&term)?;
                }
            }
        }
        acc.scale(1.into(), 2.into())
    }

    /// Gradient `2 G v`, normal to the tangent line at `v`.
    pub fn gradient_surd(&self, v: &SurdVec) -> Result<SurdVec> {
        let g = self.gram2();
        let row = |i: usize| -> Result<Surd> {
            let mut acc = Surd::from_integer(BigInt::zero());
            for (j, vj) in v.iter().enumerate() {
                acc = acc.try_add(&vj.scale(g[i][j].into(), 1.into())?)?;
            }
            Ok(acc)
        };
        Ok([row(0)?, row(1)?, row(2)?])
    }

    /// The form `v -> Phi(U v)`.
    pub fn transform(&self, u: &Mat3) -> TernaryForm {
        let g = self.gram2().map(|r| r.map(i128::from));
        let u128 = u.map(|r| r.map(i128::from));
        let mut h = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0i128;
                for k in 0..3 {
                    for l in 0..3 {
                        s += u128[k][i] * g[k][l] * u128[l][j];
                    }
                }
                h[i][j] = s;
            }
        }
        let fit = |v: i128| i64::try_from(v).expect("transformed coefficient fits in i64");
        TernaryForm { coeffs: [fit(h[0][0] / 2), fit(h[0][1]), fit(h[1][1] / 2), fit(h[0][2]), fit(h[1][2]), fit(h[2][2] / 2)] }
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeffs;
        write!(f, "{},{},{},{},{},{}", c[0], c[1], c[2], c[3], c[4], c[5])
    }
}

/// Primitive integer point of the projective plane, first nonzero coordinate positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl ProjPoint {
    /// Normalizes a nonzero integer vector.
    pub fn new(v: [i128; 3]) -> Option<ProjPoint> {
        let g = v.iter().fold(0i128, |g, c| g.gcd(c));
        if g == 0 {
            return None;
        }
        let first = v.iter().find(|c| **c != 0).copied().unwrap_or(1);
        let g = if first < 0 { -g } else { g };
        let w = v.map(|c| i64::try_from(c / g).expect("point coordinate fits in i64"));
        Some(ProjPoint { x: w[0], y: w[1], z: w[2] })
    }

    pub fn coords(&self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn height(&self) -> i64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn to_surds(&self) -> SurdVec {
        self.coords().map(|c| Surd::from_integer(c.into()))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.x, self.y, self.z)
    }
}

/// Reason a conic has no rational point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// The form is definite.
    Real,
    /// No primitive solution modulo this prime power.
    Modulus(i64),
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Real => write!(f, "no real points (definite form)"),
            Obstruction::Modulus(m) => write!(f, "no primitive solution mod {m}"),
        }
    }
}

/// Largest prime power examined by the local solvability check.
pub const LOCAL_CHECK_BOUND: i64 = 512;

fn has_primitive_solution_mod(f: &TernaryForm, m: i64, p: i64) -> bool {
    let c = f.coeffs.map(|v| i128::from(v.rem_euclid(m)));
    let m128 = i128::from(m);
    let eval = |x: i128, y: i128, z: i128| {
        (c[0] * x * x + c[1] * x * y + c[2] * y * y + c[3] * x * z + c[4] * y * z + c[5] * z * z) % m128 == 0
    };
    // scale the first unit coordinate to 1
    for y in 0..m128 {
        for z in 0..m128 {
            if eval(1, y, z) {
                return true;
            }
        }
    }
    for x in (0..m128).step_by(p as usize) {
        for z in 0..m128 {
            if eval(x, 1, z) {
                return true;
            }
        }
    }
    for x in (0..m128).step_by(p as usize) {
        for y in (0..m128).step_by(p as usize) {
            if eval(x, y, 1) {
                return true;
            }
        }
    }
    false
}

/// Local obstructions at the real place and at prime powers `p^k <= 512` for
/// primes `p | 4 Delta`; odd primes are listed before 2.
pub fn local_obstructions(f: &TernaryForm) -> Vec<Obstruction> {
    let mut out = Vec::new();
    let g = f.gram2().map(|r| r.map(i128::from));
    let m1 = g[0][0];
    let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let m3 = i128::from(f.discriminant()) * 2;
    if (m1 > 0 && m2 > 0 && m3 > 0) || (m1 < 0 && m2 > 0 && m3 < 0) {
        out.push(Obstruction::Real);
    }
    let mut primes = int::prime_divisors(4 * f.discriminant());
    primes.sort_by_key(|&p| (p == 2, p));
    for p in primes {
        let mut m = p;
        while m <= LOCAL_CHECK_BOUND {
            if !has_primitive_solution_mod(f, m, p) {
                out.push(Obstruction::Modulus(m));
                break;
            }
            m *= p;
        }
    }
    out
}

/// Integer roots `z` with `|z| <= bound` of `F z^2 + L z + K = 0`.
fn integer_roots(f: i128, l: i128, k: i128, bound: i128) -> Vec<i128> {
    if f == 0 {
        if l == 0 {
            return if k == 0 { (-bound..=bound).collect() } else { Vec::new() };
        }
        return if k % l == 0 && (k / l).abs() <= bound { vec![-k / l] } else { Vec::new() };
    }
    let disc = l * l - 4 * f * k;
    if disc < 0 {
        return Vec::new();
    }
    let s = num_integer::Roots::sqrt(&disc);
    if s * s != disc {
        return Vec::new();
    }
    let mut out = Vec::new();
    for num in [-l + s, -l - s] {
        if num % (2 * f) == 0 {
            let z = num / (2 * f);
            if z.abs() <= bound && !out.contains(&z) {
                out.push(z);
            }
        }
    }
    out
}

/// All primitive points of height `<= h`, sorted by (height, coordinates).
pub fn points_up_to(f: &TernaryForm, h: i64) -> Vec<ProjPoint> {
    let [a, b, c, d, e, ff] = f.coeffs.map(i128::from);
    let h128 = i128::from(h);
    let mut out = std::collections::BTreeSet::new();
    for x in 0..=h128 {
        for y in -h128..=h128 {
            for z in integer_roots(ff, d * x + e * y, a * x * x + b * x * y + c * y * y, h128) {
                if let Some(pt) = ProjPoint::new([x, y, z]) {
                    out.insert((pt.height(), pt));
                }
            }
        }
    }
    out.into_iter().map(|(_, p)| p).collect()
}

/// A primitive rational point of minimal height (ties broken lexicographically
/// on the sign-normalized coordinates).
pub fn find_rational_point(f: &TernaryForm, height_bound: i64) -> Result<ProjPoint> {
    if f.discriminant() == 0 {
        return Err(Error::SingularConic);
    }
    let obstructions = local_obstructions(f);
    if !obstructions.is_empty() {
        let text = obstructions.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("; ");
        return Err(Error::Anisotropic(text));
    }
    points_up_to(f, height_bound)
        .into_iter()
        .next()
        .ok_or(Error::NotFound(height_bound))
}

/// `Phi_{A,B,C,D}` together with a determinant-one certificate
/// `source(T v) = -A x^2 - B xy - C y^2 + D xz`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardConic {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub transform: Mat3,
    pub source: TernaryForm,
}

pub fn mat_mul(x: &Mat3, y: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let s: i128 = (0..3).map(|k| i128::from(x[i][k]) * i128::from(y[k][j])).sum();
            out[i][j] = i64::try_from(s).expect("matrix entry fits in i64");
        }
    }
    out
}

pub fn det3(m: &Mat3) -> i128 {
    let m = m.map(|r| r.map(i128::from));
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse of a determinant-one matrix (its adjugate).
pub fn inverse_unimodular(m: &Mat3) -> Mat3 {
    let det = det3(m);
    assert!(det == 1 || det == -1, "matrix is not unimodular");
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        i128::from(m[r0][c0]) * i128::from(m[r1][c1]) - i128::from(m[r0][c1]) * i128::from(m[r1][c0])
    };
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = i64::try_from(c(j, i) * det).expect("inverse entry fits");
        }
    }
    out
}

pub fn mat_vec(m: &Mat3, v: [i64; 3]) -> [i128; 3] {
    let mut out = [0i128; 3];
    for (i, row) in m.iter().enumerate() {
        out[i] = (0..3).map(|k| i128::from(row[k]) * i128::from(v[k])).sum();
    }
    out
}

/// A determinant-one matrix whose third column is the primitive vector `p`.
fn complete_to_basis(p: [i64; 3]) -> Mat3 {
    let [x, y, z] = p;
    let (g1, a, b) = egcd(x, y);
    let a1: Mat3 = if g1 == 0 { IDENTITY3 } else { [[y / g1, -x / g1, 0], [a, b, 0], [0, 0, 1]] };
    // a1 p = (0, g1, z)
    let (g, c, d) = egcd(g1, z);
    debug_assert_eq!(g, 1);
    let a2: Mat3 = [[1, 0, 0], [0, z, -g1], [0, c, d]];
    inverse_unimodular(&mat_mul(&a2, &a1))
}

/// Moves the rational point `p` to `[0:0:1]` and its tangent to `X = 0`.
///
/// The form must have positive discriminant (flip its sign first).
pub fn standardize(f: &TernaryForm, p: &ProjPoint) -> Result<StandardConic> {
    let delta = f.discriminant();
    if delta == 0 {
        return Err(Error::SingularConic);
    }
    if delta < 0 {
        return Err(Error::Usage(format!("discriminant {delta} is negative; negate the form first")));
    }
    if f.eval(p.coords()) != 0 {
        return Err(Error::NotOnConic(p.to_string()));
    }
    let m = complete_to_basis(p.coords());
    let f1 = f.transform(&m);
    let [_, _, _, d1, e1, _] = f1.coeffs;
    // (X, Y) -> W (X, Y) with (d1, e1) W = (g, 0)
    let (g, u, v) = egcd(d1, e1);
    let w: Mat3 = [[u, -e1 / g, 0], [v, d1 / g, 0], [0, 0, 1]];
    let t2 = mat_mul(&m, &w);
    let f2 = f.transform(&t2);
    let [a2, b2, _, _, _, _] = f2.coeffs;
    // Z -> Z + s X + t Y shifts the X^2, XY coefficients by g s, g t
    let a_std = (-a2).rem_euclid(g);
    let b_std = (-b2).rem_euclid(g);
    let s = (-a2 - a_std) / g;
    let t = (-b2 - b_std) / g;
    let shear: Mat3 = [[1, 0, 0], [0, 1, 0], [s, t, 1]];
    let transform = mat_mul(&t2, &shear);
    let out = f.transform(&transform);
    let [a, b, c, d, _, _] = out.coeffs;
    let std = StandardConic { a: -a, b: -b, c: -c, d, transform, source: *f };
    debug_assert_eq!(out, std.form());
    debug_assert_eq!(det3(&transform), 1);
    Ok(std)
}

impl StandardConic {
    /// Builds a standard conic that is its own source.
    pub fn from_params(a: i64, b: i64, c: i64, d: i64) -> Result<StandardConic> {
        if c <= 0 || d <= 0 {
            return Err(Error::Usage(format!("standard form needs C > 0 and D > 0, got C={c}, D={d}")));
        }
        Ok(StandardConic { a, b, c, d, transform: IDENTITY3, source: TernaryForm::standard(a, b, c, d) })
    }

    pub fn form(&self) -> TernaryForm {
        TernaryForm::standard(self.a, self.b, self.c, self.d)
    }

    pub fn discriminant(&self) -> i64 {
        self.c * self.d * self.d
    }

    /// `rho(s, t) = [D s^2 : D s t : A s^2 + B s t + C t^2]` in lowest terms,
    /// together with the removed common factor.
    pub fn parametrize_with_gcd(&self, s: i64, t: i64) -> Result<(ProjPoint, i64)> {
        if s.gcd(&t) != 1 {
            return Err(Error::NotPrimitiveInput(s.to_string(), t.to_string()));
        }
        let (s, t) = (i128::from(s), i128::from(t));
        let (a, b, c, d) = (i128::from(self.a), i128::from(self.b), i128::from(self.c), i128::from(self.d));
        let v = [d * s * s, d * s * t, a * s * s + b * s * t + c * t * t];
        let g = v.iter().fold(0i128, |g, x| g.gcd(x));
        let pt = ProjPoint::new(v).expect("rho of a primitive vector is nonzero");
        Ok((pt, i64::try_from(g).expect("gcd fits")))
    }

    pub fn parametrize(&self, s: i64, t: i64) -> Result<ProjPoint> {
        Ok(self.parametrize_with_gcd(s, t)?.0)
    }

    /// `tau(x, y, z) = (D x, D y, A x + B y + C z)`.
    pub fn tau(&self, v: &SurdVec) -> Result<SurdVec> {
        let k = |n: i64| BigInt::from(n);
        let one = || BigInt::from(1);
        let z = v[0]
            .scale(k(self.a), one())?
            .try_add(&v[1].scale(k(self.b), one())?)?
            .try_add(&v[2].scale(k(self.c), one())?)?;
        Ok([v[0].scale(k(self.d), one())?, v[1].scale(k(self.d), one())?, z])
    }

    /// The real point `rho(S, T)` for surd coordinates, in source coordinates.
    pub fn point_of(&self, s: &Surd, t: &Surd) -> Result<SurdVec> {
        let std = [s.try_mul(s)?, s.try_mul(t)?, t.try_mul(t)?];
        let v = self.tau(&std)?;
        apply_surd(&self.transform, &v)
    }
}

/// `M v` for a surd vector.
pub fn apply_surd(m: &Mat3, v: &SurdVec) -> Result<SurdVec> {
    let row = |i: usize| -> Result<Surd> {
        let mut acc = Surd::from_integer(BigInt::zero());
        for k in 0..3 {
            acc = acc.try_add(&v[k].scale(m[i][k].into(), 1.into())?)?;
        }
        Ok(acc)
    };
    Ok([row(0)?, row(1)?, row(2)?])
}

fn cross(u: &SurdVec, v: &SurdVec) -> Result<SurdVec> {
    let c = |i: usize, j: usize| u[i].try_mul(&v[j])?.try_sub(&u[j].try_mul(&v[i])?);
    Ok([c(1, 2)?, c(2, 0)?, c(0, 1)?])
}

fn proportional(u: &SurdVec, v: &SurdVec) -> Result<bool> {
    Ok(cross(u, v)?.iter().all(|c| c.is_zero()))
}

/// A point `Sigma != Xi` on the tangent line at `Xi`: the intersection of the
/// tangent with the first coordinate line `x_k = 0` (k = 3, 2, 1) that does
/// not pass through `Xi`, first nonzero coordinate made positive.
pub fn tangent_sigma(f: &TernaryForm, xi: &SurdVec) -> Result<SurdVec> {
    if !f.eval_surd(xi)?.is_zero() {
        return Err(Error::NotOnConic(format!("[{} : {} : {}]", xi[0], xi[1], xi[2])));
    }
    let grad = f.gradient_surd(xi)?;
    let zero = || Surd::from_integer(BigInt::zero());
    let one = || Surd::from_integer(BigInt::from(1));
    for k in [2usize, 1, 0] {
        let mut e = [zero(), zero(), zero()];
        e[k] = one();
        let sigma = cross(&grad, &e)?;
        if sigma.iter().all(|c| c.is_zero()) || proportional(&sigma, xi)? {
            continue;
        }
        let first = sigma.iter().find(|c| !c.is_zero()).expect("nonzero sigma");
        if first.signum() == Ordering::Less {
            return Ok(sigma.map(|c| c.neg()));
        }
        return Ok(sigma);
    }
    unreachable!("a tangent line meets some coordinate line away from its point of tangency")
}
