//! The two published tables as golden data, and the code that recomputes them.

use num_integer::Integer;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::int;
use crate::lattices::{bt_graph, path_decompose};
use crate::qfield::parse_rational;
use crate::quaternion::ring_from_params;
use crate::spectra::{spectrum_search, SearchParams, SpectrumValue};
use crate::Rational;

/// One row of the local table: the conic `-A X^2 - B XY - C Y^2 + D XZ = 0`
/// over `Z_p` (parameters as functions of `p` and a non-residue `a`) and its
/// published `(k, l)`.
struct LocalSpec {
    label: &'static str,
    params: fn(i64, i64) -> [i64; 4],
    k: u32,
    l: u32,
}

const LOCAL: &[LocalSpec] = &[
    LocalSpec { label: "Y^2 = XZ", params: |_, _| [0, 0, 1, 1], k: 0, l: 0 },
    LocalSpec { label: "pY^2 = XZ", params: |p, _| [0, 0, p, 1], k: 0, l: 1 },
    LocalSpec { label: "p^2 Y^2 = XZ", params: |p, _| [0, 0, p * p, 1], k: 0, l: 2 },
    LocalSpec { label: "-X^2 + Y^2 = pXZ", params: |p, _| [-1, 0, 1, p], k: 0, l: 2 },
    LocalSpec { label: "-aX^2 + Y^2 = pXZ", params: |p, a| [-a, 0, 1, p], k: 0, l: 0 },
    LocalSpec { label: "Y^2 = pXZ", params: |p, _| [0, 0, 1, p], k: 0, l: 1 },
    LocalSpec { label: "p^3 Y^2 = XZ", params: |p, _| [0, 0, p.pow(3), 1], k: 0, l: 3 },
    LocalSpec { label: "XY + pY^2 = pXZ", params: |p, _| [0, 1, p, p], k: 0, l: 3 },
    LocalSpec { label: "-X^2 + pY^2 = pXZ", params: |p, _| [-1, 0, p, p], k: 0, l: 1 },
    LocalSpec { label: "-aX^2 + pY^2 = pXZ", params: |p, a| [-a, 0, p, p], k: 0, l: 1 },
    LocalSpec { label: "pY^2 = pXZ (imprimitive)", params: |p, _| [0, 0, p, p], k: 1, l: 0 },
    LocalSpec { label: "p^4 Y^2 = XZ", params: |p, _| [0, 0, p.pow(4), 1], k: 0, l: 4 },
    LocalSpec { label: "XY + p^2 Y^2 = pXZ", params: |p, _| [0, 1, p * p, p], k: 0, l: 4 },
    LocalSpec { label: "-X^2 + Y^2 = p^2 XZ", params: |p, _| [-1, 0, 1, p * p], k: 0, l: 4 },
    LocalSpec { label: "-aX^2 + Y^2 = p^2 XZ", params: |p, a| [-a, 0, 1, p * p], k: 0, l: 0 },
    LocalSpec { label: "Y^2 = p^2 XZ", params: |p, _| [0, 0, 1, p * p], k: 1, l: 0 },
    LocalSpec { label: "-X^2 + p^2 Y^2 = pXZ", params: |p, _| [-1, 0, p * p, p], k: 1, l: 0 },
    LocalSpec { label: "-aX^2 + p^2 Y^2 = pXZ", params: |p, a| [-a, 0, p * p, p], k: 1, l: 0 },
    LocalSpec { label: "-pX^2 + p^2 Y^2 = pXZ", params: |p, _| [-p, 0, p * p, p], k: 1, l: 1 },
    LocalSpec { label: "-paX^2 + p^2 Y^2 = pXZ", params: |p, a| [-p * a, 0, p * p, p], k: 1, l: 1 },
    LocalSpec { label: "p^2 Y^2 = pXZ (imprimitive)", params: |p, _| [0, 0, p * p, p], k: 1, l: 1 },
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalRow {
    pub vp: u32,
    pub label: &'static str,
    /// `[A, B, C, D]`.
    pub params: [i64; 4],
    pub k: u32,
    pub l: u32,
    pub expected: (u32, u32),
}

impl LocalRow {
    pub fn matches(&self) -> bool {
        (self.k, self.l) == self.expected
    }
}

/// Least quadratic non-residue modulo the odd prime `p`.
pub fn least_nonresidue(p: i64) -> Result<i64> {
    if p == 2 || !int::is_prime_i64(p) {
        return Err(Error::NotPrime(p));
    }
    (2..p).find(|&a| (1..p).all(|x| x * x % p != a)).ok_or(Error::NotPrime(p))
}

/// `(k_p, l_p)` of a standard conic, the content of an imprimitive one
/// counted in `k`.
pub fn local_invariants(params: [i64; 4], p: i64) -> Result<(u32, u32)> {
    let g = params.iter().fold(0i64, |g, v| g.gcd(v));
    let [a, b, c, d] = params.map(|v| v / g);
    let dec = path_decompose(&bt_graph(&ring_from_params(a, b, c, d), p)?)?;
    Ok((dec.k + int::valuation(g, p), dec.l))
}

/// Recomputes every local-table row with `v_p(Delta) <= max_vp`.
pub fn local_table(p: i64, max_vp: u32) -> Result<Vec<LocalRow>> {
    let a = least_nonresidue(p)?;
    let mut rows = Vec::new();
    for spec in LOCAL {
        let params = (spec.params)(p, a);
        let vp = int::valuation(params[2] * params[3] * params[3], p);
        if vp > max_vp {
            continue;
        }
        let (k, l) = local_invariants(params, p)?;
        rows.push(LocalRow { vp, label: spec.label, params, k, l, expected: (spec.k, spec.l) });
    }
    Ok(rows)
}

/// Published low-lying approximabilities, truncated to four decimals.
pub const SPECTRA_TABLE: &[(i64, &[&str])] = &[
    (1, &["2.2360", "2.8284", "2.9732", "2.9960", "2.9992"]),
    (2, &["2.8284", "3.4641", "3.8873", "3.9799", "3.9994", "3.9998", "3.9999"]),
    (3, &["3.4641", "3.6055", "3.9949", "3.9999", "3.9999"]),
    (4, &["4.1231", "4.2163", "4.3362", "4.3362"]),
    (
        5,
        &[
            "2.2360", "4.4721", "4.5825", "4.7726", "4.8989", "4.9590", "4.9752", "4.9839", "4.9976", "4.9986", "4.9997",
            "4.9999", "4.9999",
        ],
    ),
    (6, &["3.4641", "4.8989", "5.2915", "5.7445", "5.9194", "5.9254"]),
    (7, &["2.8284", "3.7416", "3.7823", "3.7835", "3.7836"]),
    (8, &["4.1231", "4.8989", "4.9999", "4.9999"]),
    (9, &["3.6055", "5.2915", "5.3935", "5.3944"]),
    (10, &["4.4721", "4.8989", "5.6180", "5.6662", "5.6691"]),
    (11, &["2.2360", "3.4641", "3.8729", "3.9799", "3.9970"]),
    (12, &["5.7445", "6.0052", "6.0053"]),
    (13, &["2.9732", "3.2811", "3.2827"]),
];

/// Agreement required between a listed value and a computed one.
pub fn table_tolerance() -> Rational {
    Rational::new(1.into(), 10_000.into())
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectraRowReport {
    pub n: i64,
    pub listed: Vec<&'static str>,
    /// Computed value matched to each listed one, in order.
    pub matched: Vec<Option<SpectrumValue>>,
    /// Computed values below the last listed one that match nothing.
    pub extra: Vec<SpectrumValue>,
}

impl SpectraRowReport {
    pub fn complete(&self) -> bool {
        self.matched.iter().all(Option::is_some)
    }
}

pub fn listed_values(n: i64) -> Result<&'static [&'static str]> {
    SPECTRA_TABLE
        .iter()
        .find(|(m, _)| *m == n)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Usage(format!("the table has no row n = {n}")))
}

/// Runs the search below the last listed value (plus twice the tolerance) and
/// matches the listed values greedily, in order, to distinct computed ones.
pub fn spectra_row(n: i64, max_term: i64, max_period: usize) -> Result<SpectraRowReport> {
    let listed = listed_values(n)?;
    let tol = table_tolerance();
    let targets: Vec<Rational> = listed.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
    let below = targets.last().expect("rows are nonempty") + &tol + &tol;
    let params = SearchParams { n, m: 1, max_term, max_period, limit: 1000, below: Some(below) };
    let found = spectrum_search(&params)?;
    let mut matched = vec![None; listed.len()];
    let mut extra = Vec::new();
    let mut next = 0;
    for v in found {
        let x = parse_rational(&v.decimal)?;
        if next < targets.len() && (&x - &targets[next]).abs() <= tol {
            matched[next] = Some(v);
            next += 1;
        } else {
            extra.push(v);
        }
    }
    Ok(SpectraRowReport { n, listed: listed.to_vec(), matched, extra })
}
