use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{bt_graph, complete_column, path_decompose, LatticeHNF, PathDecomposition};
use crate::error::{Error, Result};
use crate::int;
use crate::quaternion::{adj2, det2, mul2, Mat2, QuaternionOrder, IDENTITY2};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumInvariants {
    pub m: i64,
    pub n: i64,
    /// Columns `b1, b2`; the invariant lattices are the primitive lattices of
    /// index dividing `m` in `Z<d b1, b2>` for `d | n`.
    pub basis: Mat2,
    /// `p -> (k_p, l_p)`.
    pub per_prime: BTreeMap<i64, (u32, u32)>,
    pub lattices: Vec<LatticeHNF>,
}

/// All primitive lattices preserved by the ring, sorted by `(index, d1, c)`.
pub fn invariant_lattices(r: &QuaternionOrder) -> Result<Vec<LatticeHNF>> {
    let bound = match r.params {
        Some((_, _, c, d)) => (c * d).abs(),
        None => r.ring_index()?,
    };
    let mut out = Vec::new();
    for idx in int::divisors(bound) {
        for d1 in int::divisors(idx) {
            let d2 = idx / d1;
            for c in 0..d1 {
                let l = LatticeHNF { d1, c, d2 };
                if l.is_primitive() && l.invariant_under_order(r) {
                    out.push(l);
                }
            }
        }
    }
    out.sort_by_key(|l| (l.index(), l.d1, l.c));
    Ok(out)
}

fn lambda_d(basis: &Mat2, d: i64) -> LatticeHNF {
    LatticeHNF::from_basis(&mul2(basis, &[[d, 0], [0, 1]]))
}

/// Whether `lats` is exactly the family generated by `(m, n, basis)`.
pub fn verify_lattice_family(lats: &[LatticeHNF], m: i64, n: i64, basis: &Mat2) -> bool {
    if m <= 0 || n <= 0 || det2(basis) == 0 {
        return false;
    }
    let mut family = BTreeSet::new();
    for d in int::divisors(n) {
        let top = lambda_d(basis, d);
        for e in int::divisors(m) {
            family.extend(top.sublattices(e).into_iter().map(|s| s.primitive()));
        }
    }
    let given: BTreeSet<LatticeHNF> = lats.iter().copied().collect();
    given.len() == lats.len() && given == family
}

struct Local {
    p: i64,
    dec: PathDecomposition,
}

fn local_data(r: &QuaternionOrder, p: i64) -> Result<Local> {
    let g = bt_graph(r, p)?;
    if !g.degree_law_holds() {
        return Err(Error::StructureViolation(format!("degree law fails at p = {p}: {:?}", g.degrees())));
    }
    Ok(Local { p, dec: path_decompose(&g)? })
}

/// Coordinates of the lattice `l` with respect to the basis `b0` of a superlattice.
fn relative_basis(b0: &Mat2, l: &LatticeHNF) -> Mat2 {
    let det = det2(b0);
    mul2(&adj2(b0), &l.basis()).map(|row| {
        row.map(|v| {
            debug_assert_eq!(v % det, 0);
            v / det
        })
    })
}

fn primitive_vector_in(m: &Mat2) -> [i64; 2] {
    let n = det2(m).abs();
    let mut cands: Vec<(i64, i64)> = Vec::new();
    for x in -n..=n {
        for y in -n..=n {
            cands.push((x, y));
        }
    }
    cands.sort_by_key(|&(x, y)| (x.abs() + y.abs(), x.abs(), y < 0, x < 0));
    cands
        .into_iter()
        .map(|(x, y)| [m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y])
        .find(|v| int::gcd_i64(v[0], v[1]) == 1)
        .expect("a cyclic sublattice holds a primitive vector")
}

/// Basis for one choice of path orientation at each prime.
fn family_basis(locals: &[Local], flips: u32) -> Mat2 {
    let mut lambda0 = LatticeHNF::UNIT;
    let mut ends = Vec::new();
    for (i, loc) in locals.iter().enumerate() {
        let path = &loc.dec.path;
        let (u0, ul) = if flips >> i & 1 == 1 {
            (path[path.len() - 1], path[0])
        } else {
            (path[0], path[path.len() - 1])
        };
        lambda0 = lambda0.intersect_coprime(&u0);
        // smallest p^j with p^j ul inside u0
        let mut scaled = ul;
        while !u0.contains_lattice(&scaled) {
            scaled = scaled.scaled(loc.p);
        }
        ends.push(scaled);
    }
    let lambda_n = ends.iter().fold(LatticeHNF::UNIT, |acc, l| acc.intersect_coprime(l));
    let b0 = lambda0.basis();
    let rel = relative_basis(&b0, &lambda_n);
    let b2 = primitive_vector_in(&rel);
    let c = complete_column(b2);
    let mut b = mul2(&b0, &c);
    if det2(&b) < 0 {
        b[0][0] = -b[0][0];
        b[1][0] = -b[1][0];
    }
    b
}

/// Aggregates the local decompositions at the primes dividing `delta` into
/// `(m, n)` and a basis certified by [`verify_lattice_family`].
pub fn global_invariants(r: &QuaternionOrder, delta: i64) -> Result<SpectrumInvariants> {
    if delta == 0 {
        return Err(Error::SingularConic);
    }
    let lattices = invariant_lattices(r)?;
    let primes = int::prime_divisors(delta.abs());
    let locals: Vec<Local> = primes.par_iter().map(|&p| local_data(r, p)).collect::<Result<_>>()?;
    let mut m = 1i64;
    let mut n = 1i64;
    let mut per_prime = BTreeMap::new();
    for loc in &locals {
        m *= loc.p.pow(loc.dec.k);
        n *= loc.p.pow(loc.dec.l);
        per_prime.insert(loc.p, (loc.dec.k, loc.dec.l));
    }
    if delta % (n * m * m) != 0 {
        return Err(Error::StructureViolation(format!("n m^2 = {} does not divide {delta}", n * m * m)));
    }
    let oriented: Vec<&Local> = locals.iter().filter(|l| l.dec.l > 0).collect();
    let fixed: Vec<Local> = locals.iter().filter(|l| l.dec.l == 0).map(|l| Local { p: l.p, dec: l.dec.clone() }).collect();
    let ordered: Vec<Local> =
        oriented.iter().map(|l| Local { p: l.p, dec: l.dec.clone() }).chain(fixed).collect();
    let basis = (0..1u32 << oriented.len())
        .map(|flips| family_basis(&ordered, flips))
        .filter(|b| verify_lattice_family(&lattices, m, n, b))
        .min()
        .ok_or_else(|| {
            Error::StructureViolation(format!("no basis realises m = {m}, n = {n} for lattices {lattices:?}"))
        })?;
    Ok(SpectrumInvariants { m, n, basis, per_prime, lattices })
}

impl SpectrumInvariants {
    pub fn trivial() -> Self {
        SpectrumInvariants {
            m: 1,
            n: 1,
            basis: IDENTITY2,
            per_prime: BTreeMap::new(),
            lattices: vec![LatticeHNF::UNIT],
        }
    }
}
