//! Brute-force approximability straight from the definitions: enumerate
//! integral points of bounded height and evaluate
//! `sqrt(Delta |Phi(Sigma)|) / |<Sigma, P>|` on each.
//!
//! Everything here is a finite-height lower bound. The exact values come
//! from [`crate::spectra`]; this module exists to check them.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{find_rational_point, inverse_unimodular, mat_vec, points_up_to, standardize, ProjPoint, SurdVec, TernaryForm};
use crate::real::Real;
use crate::spectra::DECIMAL_DIGITS;
use crate::Surd;

/// Below this height the parametrization sweep is cross-checked by a full scan.
pub const EXHAUSTIVE_HEIGHT: i64 = 50;

const POINT_SEARCH_BOUND: i64 = 200;

/// One rational point and its quality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QualitySample {
    pub point: ProjPoint,
    pub height: i64,
    /// `Delta |Phi(Sigma)| / <Sigma, P>^2`, exact.
    pub quality_sq: Surd,
    pub quality: Real,
}

impl Serialize for QualitySample {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QualitySample", 3)?;
        st.serialize_field("height", &self.height)?;
        st.serialize_field("point", &self.point.coords())?;
        st.serialize_field("quality", &self.quality.to_decimal(DECIMAL_DIGITS))?;
        st.end()
    }
}

impl QualitySample {
    fn beats(&self, other: &QualitySample) -> bool {
        self.quality_sq.try_cmp(&other.quality_sq).map_or_else(
            |_| self.quality.to_f64() > other.quality.to_f64(),
            |o| o == Ordering::Greater,
        )
    }
}

fn sign_normalized(f: &TernaryForm) -> TernaryForm {
    if f.discriminant() < 0 {
        f.negated()
    } else {
        *f
    }
}

/// All primitive integral points of height at most `h`, sorted by height.
pub fn enumerate_conic_points(f: &TernaryForm, h: i64) -> Result<Vec<ProjPoint>> {
    if f.discriminant() == 0 {
        return Err(Error::SingularConic);
    }
    if h < 1 {
        return Err(Error::Usage(format!("height bound must be positive, got {h}")));
    }
    let g = sign_normalized(&f.primitive_part());
    let base = find_rational_point(&g, POINT_SEARCH_BOUND.min(h.max(EXHAUSTIVE_HEIGHT)))?;
    let std = standardize(&g, &base)?;
    let inv = inverse_unimodular(&std.transform);
    let kappa: i128 = inv.iter().map(|r| r.iter().map(|v| i128::from(v.abs())).sum::<i128>()).max().unwrap_or(1);
    let (a, b, c, d) = (i128::from(std.a), i128::from(std.b), i128::from(std.c), i128::from(std.d));
    // the removed common factor of rho(s, t) divides C D
    let bound = c * d * kappa * i128::from(h);
    let s_max = (bound / d).sqrt() + 1;
    let transform = std.transform;
    let collect_s = |s: i128| -> Vec<ProjPoint> {
        let mut out = Vec::new();
        let t_range: Vec<i128> = if s == 0 {
            vec![1]
        } else {
            // C t^2 + B s t + A s^2 <= bound
            let (cf, bf, af, mf) = (c as f64, (b * s) as f64, (a * s * s) as f64, bound as f64);
            let disc = bf * bf - 4.0 * cf * (af - mf);
            if disc < 0.0 {
                return out;
            }
            let r = disc.sqrt();
            let lo = ((-bf - r) / (2.0 * cf)).floor() as i128 - 1;
            let hi = ((-bf + r) / (2.0 * cf)).ceil() as i128 + 1;
            (lo..=hi).collect()
        };
        for t in t_range {
            if s.gcd(&t) != 1 {
                continue;
            }
            let rho = [d * s * s, d * s * t, a * s * s + b * s * t + c * t * t];
            if rho.iter().any(|v| v.abs() > bound) {
                continue;
            }
            let gg = rho.iter().fold(0i128, |x, v| x.gcd(v));
            let v = rho.map(|x| i64::try_from(x / gg).expect("bounded coordinate"));
            if let Some(p) = ProjPoint::new(mat_vec(&transform, v)) {
                if p.height() <= h {
                    out.push(p);
                }
            }
        }
        out
    };
    let mut points: BTreeSet<(i64, ProjPoint)> =
        (0..=s_max).into_par_iter().flat_map_iter(collect_s).map(|p| (p.height(), p)).collect();
    if h <= EXHAUSTIVE_HEIGHT {
        points.extend(points_up_to(f, h).into_iter().map(|p| (p.height(), p)));
    }
    Ok(points.into_iter().map(|(_, p)| p).collect())
}

/// `sqrt(Delta |Phi(Sigma)|) / |<Sigma, P>|`, exact up to the final root.
pub fn quality(f: &TernaryForm, sigma: &SurdVec, p: &ProjPoint) -> Result<QualitySample> {
    let delta = BigInt::from(f.discriminant()).abs();
    let phi = f.eval_surd(sigma)?;
    let pairing = f.bilinear_surd(sigma, &p.to_surds())?;
    if pairing.is_zero() {
        return Err(Error::TangencyHit(p.to_string()));
    }
    let num = if phi.signum() == Ordering::Less { phi.neg() } else { phi };
    let quality_sq = num.scale(delta, 1.into())?.try_div(&pairing.try_mul(&pairing)?)?;
    let quality = Real::from_surd(&quality_sq).sqrt();
    Ok(QualitySample { point: *p, height: p.height(), quality_sq, quality })
}

/// Largest quality over all points of height `<= h`: a lower bound for `mu`.
pub fn markoff_lower_bound(f: &TernaryForm, sigma: &SurdVec, h: i64) -> Result<(Real, QualitySample)> {
    let outside = if f.discriminant() > 0 { Ordering::Less } else { Ordering::Greater };
    if f.eval_surd(sigma)?.signum() != outside {
        return Err(Error::Usage("Sigma must lie outside the conic (Phi(Sigma) < 0)".into()));
    }
    let points = enumerate_conic_points(f, h)?;
    let samples: Vec<QualitySample> = points.par_iter().map(|p| quality(f, sigma, p)).collect::<Result<_>>()?;
    let best = samples
        .into_iter()
        .reduce(|x, y| if y.beats(&x) { y } else { x })
        .ok_or(Error::NoPoints(h))?;
    Ok((best.quality.clone(), best))
}

/// Finite-height proxy for the limsup defining `lambda`.
#[derive(Clone, Debug, Serialize)]
pub struct LagrangeEstimate {
    #[serde(serialize_with = "ser_real")]
    pub value: Real,
    pub best: QualitySample,
    /// The `window` points nearest to `Xi`, by increasing height.
    pub samples: Vec<QualitySample>,
    /// Running maxima of `samples`.
    pub records: Vec<QualitySample>,
}

fn ser_real<S: serde::Serializer>(r: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_decimal(DECIMAL_DIGITS))
}

/// Sup of the quality over the `window` points nearest to `Xi` among those
/// with height in `[h / window, h]`.
pub fn lagrange_estimate(f: &TernaryForm, xi: &SurdVec, h: i64, window: usize) -> Result<LagrangeEstimate> {
    if window == 0 {
        return Err(Error::Usage("window must be positive".into()));
    }
    if xi.iter().all(|c| c.is_rational()) {
        return Err(Error::RationalInput(format!("[{} : {} : {}]", xi[0], xi[1], xi[2])));
    }
    let sigma = crate::forms::tangent_sigma(f, xi)?;
    lagrange_estimate_with_sigma(f, xi, &sigma, h, window)
}

/// [`lagrange_estimate`] with an explicit `Sigma` on the tangent line at `Xi`.
pub fn lagrange_estimate_with_sigma(f: &TernaryForm, xi: &SurdVec, sigma: &SurdVec, h: i64, window: usize) -> Result<LagrangeEstimate> {
    if window == 0 {
        return Err(Error::Usage("window must be positive".into()));
    }
    if !f.bilinear_surd(sigma, xi)?.is_zero() || !f.eval_surd(xi)?.is_zero() {
        return Err(Error::Usage("Sigma must lie on the tangent line at Xi".into()));
    }
    let xf = xi.clone().map(|c| c.to_f64());
    let k = (0..3).max_by(|&i, &j| xf[i].abs().total_cmp(&xf[j].abs())).expect("three coordinates");
    let affine = xf.map(|c| c / xf[k]);
    let distance = |p: &ProjPoint| -> f64 {
        let c = p.coords();
        if c[k] == 0 {
            return f64::INFINITY;
        }
        (0..3).map(|i| (c[i] as f64 / c[k] as f64 - affine[i]).abs()).fold(0.0, f64::max)
    };
    let low = h / i64::try_from(window).unwrap_or(i64::MAX);
    let mut near: Vec<(f64, ProjPoint)> = enumerate_conic_points(f, h)?
        .into_iter()
        .filter(|p| p.height() >= low)
        .map(|p| (distance(&p), p))
        .filter(|(d, _)| d.is_finite())
        .collect();
    near.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    near.truncate(window);
    let mut samples = Vec::new();
    for (_, p) in near {
        match quality(f, sigma, &p) {
            Ok(q) => samples.push(q),
            // the second tangency point of Sigma's polar, far from Xi
            Err(Error::TangencyHit(_)) => {}
            Err(e) => return Err(e),
        }
    }
    samples.sort_by_key(|q| (q.height, q.point));
    let mut records: Vec<QualitySample> = Vec::new();
    for q in &samples {
        if records.last().is_none_or(|r| q.beats(r)) {
            records.push(q.clone());
        }
    }
    let best = records.last().cloned().ok_or(Error::NoPoints(h))?;
    Ok(LagrangeEstimate { value: best.quality.clone(), best, samples, records })
}

/// `max gcd(t, n) / (t^2 |s/t - x|)` over `t` in `[big_n / 10, big_n]` and `s`
/// the two integers nearest `t x`.
pub fn n_formula_check(x: &Surd, n: i64, big_n: i64) -> Result<Real> {
    if x.is_rational() {
        return Err(Error::RationalInput(x.to_string()));
    }
    if n < 1 || big_n < 10 {
        return Err(Error::Usage(format!("need n >= 1 and N >= 10, got n={n}, N={big_n}")));
    }
    let xr = Real::from_surd(x);
    let eval = |t: i64| -> Real {
        let tx = x.scale(t.into(), 1.into()).expect("integer scaling");
        let fl = tx.floor();
        let g = Real::from_int(t.gcd(&n));
        [fl.clone(), fl + 1]
            .into_iter()
            .map(|s| {
                let err = Real::from_int(t).mul(&xr).sub(&Real::from_surd(&Surd::from_integer(s))).abs();
                g.div(&Real::from_int(t).mul(&err)).expect("irrational x is never hit")
            })
            .reduce(|a, b| if b.to_f64() > a.to_f64() { b } else { a })
            .expect("two candidates")
    };
    let best = (big_n / 10..=big_n)
        .into_par_iter()
        .map(eval)
        .reduce_with(|a, b| if b.to_f64() > a.to_f64() { b } else { a })
        .expect("nonempty range");
    Ok(best)
}
