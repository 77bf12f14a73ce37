//! Property suites shared by the `properties` and `acceptance` targets.

use std::cmp::Ordering;

use conic_spectra::forms::{apply_surd, inverse_unimodular, mat_mul, tangent_sigma, Mat3, SurdVec, TernaryForm};
use conic_spectra::oracle::{lagrange_estimate_with_sigma, markoff_lower_bound};
use conic_spectra::qfield::{canonical_rotation, cf_expand, parse_surd};
use conic_spectra::spectra::{conic_lagrange, lagrange_value, n_lagrange, period_word};
use conic_spectra::Surd;
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type Check = std::result::Result<(), TestCaseError>;

fn surd(p: i64, q: i64, r: i64, d: i64) -> Surd {
    Surd::new(p.into(), q.into(), r.into(), d.into()).unwrap()
}

fn nonsquare() -> impl Strategy<Value = i64> {
    (2i64..300).prop_filter("nonsquare", |d| {
        let s = (*d as f64).sqrt() as i64;
        s * s != *d && (s + 1) * (s + 1) != *d
    })
}

pub fn irrational() -> impl Strategy<Value = Surd> {
    (-60i64..60, prop_oneof![-9i64..=-1, 1i64..=9], 1i64..40, nonsquare()).prop_map(|(p, q, r, d)| surd(p, q, r, d))
}

/// Elements of one field `Q(sqrt(d))`, rationals included.
fn same_field_triple() -> impl Strategy<Value = [Surd; 3]> {
    nonsquare().prop_flat_map(|d| {
        let elt = (-40i64..40, -5i64..=5, 1i64..12).prop_map(move |(p, q, r)| surd(p, q, r, d));
        [elt.clone(), elt.clone(), elt]
    })
}

/// Products of `[[k, +-1], [1, 0]]`, so both determinants occur.
fn unimodular2() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((-3i64..=3, any::<bool>()), 1..6).prop_map(|steps| {
        let mut m = [[1i64, 0], [0, 1]];
        for (k, flip) in steps {
            let g = if flip { [[k, 1], [1, 0]] } else { [[k, -1], [1, 0]] };
            m = [
                [m[0][0] * g[0][0] + m[0][1] * g[1][0], m[0][0] * g[0][1] + m[0][1] * g[1][1]],
                [m[1][0] * g[0][0] + m[1][1] * g[1][0], m[1][0] * g[0][1] + m[1][1] * g[1][1]],
            ];
        }
        m
    })
}

fn elementary(i: usize, j: usize, k: i64) -> Mat3 {
    let mut e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    e[i][j] = k;
    e
}

/// Determinant-one maps whose inverse grows heights by at most a factor 10.
fn unimodular3() -> impl Strategy<Value = Mat3> {
    let step = (0usize..3, 0usize..3, prop_oneof![-2i64..=-1, 1i64..=2]).prop_filter("off-diagonal", |(i, j, _)| i != j);
    prop::collection::vec(step, 1..4)
        .prop_map(|steps| steps.into_iter().fold(elementary(0, 0, 1), |m, (i, j, k)| mat_mul(&m, &elementary(i, j, k))))
        .prop_filter("bounded height distortion", |u| {
            inverse_unimodular(u).iter().all(|row| row.iter().map(|c| c.abs()).sum::<i64>() <= 10)
        })
}

fn mobius(m: &[[i64; 2]; 2], x: &Surd) -> Surd {
    let num = x.scale(m[0][0].into(), 1.into()).unwrap().add_int(m[0][1].into());
    let den = x.scale(m[1][0].into(), 1.into()).unwrap().add_int(m[1][1].into());
    num.try_div(&den).unwrap()
}

fn cf_round_trip(x: Surd) -> Check {
    let cf = cf_expand(&x).unwrap();
    prop_assert_eq!(cf.value().unwrap(), x.clone());
    prop_assert_eq!(cf.preperiod.iter().chain(&cf.period).next(), Some(&x.floor()));
    Ok(())
}

fn total_order([a, b, c]: [Surd; 3]) -> Check {
    let ab = a.try_cmp(&b).unwrap();
    let bc = b.try_cmp(&c).unwrap();
    prop_assert_eq!(b.try_cmp(&a).unwrap(), ab.reverse());
    if ab != Ordering::Greater && bc != Ordering::Greater {
        prop_assert_ne!(a.try_cmp(&c).unwrap(), Ordering::Greater);
    }
    if ab == Ordering::Less && bc == Ordering::Less {
        prop_assert_eq!(a.try_cmp(&c).unwrap(), Ordering::Less);
    }
    if (a.to_f64() - b.to_f64()).abs() > 1e-9 {
        prop_assert_eq!(ab, a.to_f64().total_cmp(&b.to_f64()));
    }
    Ok(())
}

fn gl2_invariance((x, m): (Surd, [[i64; 2]; 2])) -> Check {
    let y = mobius(&m, &x);
    prop_assert_eq!(canonical_rotation(&period_word(&x).unwrap()), canonical_rotation(&period_word(&y).unwrap()));
    prop_assert_eq!(lagrange_value(&x).unwrap().exact, lagrange_value(&y).unwrap().exact);
    Ok(())
}

fn m_linearity((x, n, m): (Surd, i64, i64)) -> Check {
    let base = n_lagrange(&x, n, 1).unwrap();
    let scaled = n_lagrange(&x, n, m).unwrap();
    prop_assert_eq!(scaled.exact, base.exact.scale(m.into(), 1.into()).unwrap());
    prop_assert_eq!(scaled.witness, base.witness);
    Ok(())
}

fn witness_soundness((x, n): (Surd, i64)) -> Check {
    let v = n_lagrange(&x, n, 1).unwrap();
    let d = v.witness.divisor;
    prop_assert_eq!(v.exact.clone(), lagrange_value(&x.scale(d.into(), 1.into()).unwrap()).unwrap().exact);
    for d in (1..=n).filter(|d| n % d == 0) {
        let col = lagrange_value(&x.scale(d.into(), 1.into()).unwrap()).unwrap().exact;
        prop_assert_ne!(col.try_cmp(&v.exact).unwrap(), Ordering::Greater);
    }
    let root5 = Surd::sqrt_of(BigInt::from(5)).unwrap();
    let above = match v.exact.try_cmp(&root5) {
        Ok(o) => o != Ordering::Less,
        Err(_) => v.exact.to_f64() > root5.to_f64(),
    };
    prop_assert!(above);
    Ok(())
}

fn sigmas() -> Vec<(TernaryForm, SurdVec)> {
    let phi1 = TernaryForm::veronese();
    let v = |s: [&str; 3]| s.map(|c| parse_surd(c).unwrap());
    vec![
        (phi1, v(["-2", "0", "1"])),
        (phi1, v(["-2", "-1", "2"])),
        (phi1, v(["1", "1", "-1"])),
        (TernaryForm::standard(0, 0, 2, 1), v(["1", "0", "-1"])),
    ]
}

/// Moving `(Phi, Sigma)` by `U` and searching to height `10 H` recovers the
/// bound found at height `H`.
fn sl3_equivariance((u, which): (Mat3, usize)) -> Check {
    let (f, sigma) = sigmas().swap_remove(which);
    let h = 60;
    let (base, _) = markoff_lower_bound(&f, &sigma, h).unwrap();
    let g = f.transform(&u);
    let sigma_g = apply_surd(&inverse_unimodular(&u), &sigma).unwrap();
    let (moved, _) = markoff_lower_bound(&g, &sigma_g, 10 * h).unwrap();
    prop_assert!(moved.to_f64() >= base.to_f64() - 1e-6, "{} < {}", moved.to_f64(), base.to_f64());
    Ok(())
}

/// Largest change of the final record at `H = 10^4` when `Sigma` slides
/// along the tangent line.
pub fn sigma_shift_gap() -> f64 {
    let cases = [
        (TernaryForm::veronese(), "(1+sqrt(5))/2"),
        (TernaryForm::veronese(), "sqrt(2)"),
        (TernaryForm::standard(0, 0, 2, 1), "(1+sqrt(5))/2"),
    ];
    let mut worst: f64 = 0.0;
    for (f, x) in cases {
        let (_, xi) = conic_lagrange(&f, &parse_surd(x).unwrap(), 100).unwrap();
        let sigma = tangent_sigma(&f, &xi).unwrap();
        let base = lagrange_estimate_with_sigma(&f, &xi, &sigma, 10_000, 10).unwrap();
        for t in ["1", "-3", "1/2", "7/3"] {
            let t = parse_surd(t).unwrap();
            let shifted: SurdVec = std::array::from_fn(|i| sigma[i].try_add(&xi[i].try_mul(&t).unwrap()).unwrap());
            let est = lagrange_estimate_with_sigma(&f, &xi, &shifted, 10_000, 10).unwrap();
            worst = worst.max((est.value.to_f64() - base.value.to_f64()).abs());
        }
    }
    worst
}

fn run<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Check) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new(config).run(&strategy, check).map_err(|e| e.to_string())
}

#[allow(dead_code)]
pub const SUITES: &[&str] = &["cf_round_trip", "total_order", "gl2_invariance", "sl3_equivariance", "m_linearity", "witness_soundness"];

/// Runs one named suite at its pinned case count.
pub fn run_suite(name: &str) -> Result<(), String> {
    match name {
        "cf_round_trip" => run(1000, irrational(), cf_round_trip),
        "total_order" => run(1000, same_field_triple(), total_order),
        "gl2_invariance" => run(100, (irrational(), unimodular2()), gl2_invariance),
        "sl3_equivariance" => run(10, (unimodular3(), 0usize..4), sl3_equivariance),
        "m_linearity" => run(100, (irrational(), 1i64..=12, 1i64..=9), m_linearity),
        "witness_soundness" => run(100, (irrational(), 1i64..=12), witness_soundness),
        _ => Err(format!("unknown suite {name}")),
    }
}
