use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::int::{self, egcd};
use crate::quaternion::{Mat2, QuaternionOrder};

/// Full-rank sublattice of `Z^2` with column basis `(d1, 0), (c, d2)`,
/// `0 <= c < d1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeHNF {
    pub d1: i64,
    pub c: i64,
    pub d2: i64,
}

impl Serialize for LatticeHNF {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.d1, self.c, self.d2].serialize(s)
    }
}

impl fmt::Display for LatticeHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.d1, self.c, self.d2)
    }
}

impl LatticeHNF {
    pub const UNIT: LatticeHNF = LatticeHNF { d1: 1, c: 0, d2: 1 };

    /// Hermite normal form of the lattice spanned by `vectors` (full rank required).
    pub fn from_vectors(vectors: &[[i64; 2]]) -> LatticeHNF {
        let mut vs: Vec<[i128; 2]> = vectors.iter().map(|v| v.map(i128::from)).collect();
        // Euclid on the second coordinates until one vector carries their gcd
        loop {
            vs.retain(|v| v[0] != 0 || v[1] != 0);
            let mut nz: Vec<usize> = (0..vs.len()).filter(|&i| vs[i][1] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&i| vs[i][1].abs());
            let pivot = vs[nz[0]];
            for &i in &nz[1..] {
                let q = Integer::div_floor(&vs[i][1], &pivot[1]);
                vs[i] = [vs[i][0] - q * pivot[0], vs[i][1] - q * pivot[1]];
            }
        }
        let w = *vs.iter().find(|v| v[1] != 0).expect("lattice has full rank");
        let w = if w[1] < 0 { [-w[0], -w[1]] } else { w };
        let d1 = vs.iter().filter(|v| v[1] == 0).fold(0i128, |g, v| g.gcd(&v[0]));
        assert!(d1 > 0, "lattice has full rank");
        let fit = |v: i128| i64::try_from(v).expect("HNF entry fits in i64");
        LatticeHNF { d1: fit(d1), c: fit(w[0].rem_euclid(d1)), d2: fit(w[1]) }
    }

    pub fn from_basis(b: &Mat2) -> LatticeHNF {
        Self::from_vectors(&[[b[0][0], b[1][0]], [b[0][1], b[1][1]]])
    }

    /// Columns `(d1, 0)` and `(c, d2)`.
    pub fn basis(&self) -> Mat2 {
        [[self.d1, self.c], [0, self.d2]]
    }

    pub fn index(&self) -> i64 {
        self.d1 * self.d2
    }

    pub fn content(&self) -> i64 {
        self.d1.gcd(&self.c).gcd(&self.d2)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// The primitive representative of the homothety class.
    pub fn primitive(&self) -> LatticeHNF {
        let g = self.content();
        LatticeHNF { d1: self.d1 / g, c: self.c / g, d2: self.d2 / g }
    }

    pub fn scaled(&self, k: i64) -> LatticeHNF {
        LatticeHNF { d1: self.d1 * k, c: self.c * k, d2: self.d2 * k }
    }

    pub fn contains(&self, v: [i64; 2]) -> bool {
        if v[1] % self.d2 != 0 {
            return false;
        }
        (v[0] - self.c * (v[1] / self.d2)) % self.d1 == 0
    }

    pub fn contains_lattice(&self, other: &LatticeHNF) -> bool {
        self.contains([other.d1, 0]) && self.contains([other.c, other.d2])
    }

    /// `g L` is inside `L`.
    pub fn invariant_under(&self, g: &Mat2) -> bool {
        let b = self.basis();
        (0..2).all(|j| {
            let v = [g[0][0] * b[0][j] + g[0][1] * b[1][j], g[1][0] * b[0][j] + g[1][1] * b[1][j]];
            self.contains(v)
        })
    }

    pub fn invariant_under_order(&self, r: &QuaternionOrder) -> bool {
        r.gens.iter().all(|g| self.invariant_under(g))
    }

    /// Image `M L`.
    pub fn image(&self, m: &Mat2) -> LatticeHNF {
        let b = self.basis();
        let prod = [
            [m[0][0] * b[0][0] + m[0][1] * b[1][0], m[0][0] * b[0][1] + m[0][1] * b[1][1]],
            [m[1][0] * b[0][0] + m[1][1] * b[1][0], m[1][0] * b[0][1] + m[1][1] * b[1][1]],
        ];
        Self::from_basis(&prod)
    }

    /// All sublattices of index exactly `k`.
    pub fn sublattices(&self, k: i64) -> Vec<LatticeHNF> {
        let b = self.basis();
        let mut out = Vec::new();
        for a in int::divisors(k) {
            let d = k / a;
            for c in 0..a {
                // columns B (a, 0) and B (c, d)
                let v1 = [b[0][0] * a, b[1][0] * a];
                let v2 = [b[0][0] * c + b[0][1] * d, b[1][0] * c + b[1][1] * d];
                out.push(Self::from_vectors(&[v1, v2]));
            }
        }
        out
    }

    /// Intersection with a lattice of coprime index.
    pub fn intersect_coprime(&self, other: &LatticeHNF) -> LatticeHNF {
        let (i1, i2) = (self.index(), other.index());
        debug_assert_eq!(i1.gcd(&i2), 1);
        let b1 = self.basis();
        let b2 = other.basis();
        Self::from_vectors(&[
            [b1[0][0] * i2, b1[1][0] * i2],
            [b1[0][1] * i2, b1[1][1] * i2],
            [b2[0][0] * i1, b2[1][0] * i1],
            [b2[0][1] * i1, b2[1][1] * i1],
        ])
    }

    /// Distance between the homothety classes in the Bruhat-Tits tree at `p`.
    pub fn tree_distance(&self, other: &LatticeHNF, p: i64) -> u32 {
        let a = crate::quaternion::adj2(&self.basis());
        let b = other.basis();
        let n = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        let det = n[0][0] * n[1][1] - n[0][1] * n[1][0];
        let g = n.iter().flatten().fold(0i64, |g, v| g.gcd(v));
        int::valuation(det, p) - 2 * int::valuation(g, p)
    }
}

/// Basis completion: a unimodular matrix whose second column is the primitive `v`.
pub(crate) fn complete_column(v: [i64; 2]) -> Mat2 {
    let (g, x, y) = egcd(v[0], v[1]);
    debug_assert_eq!(g, 1);
    // x v0 + y v1 = 1 is the determinant
    [[y, v[0]], [-x, v[1]]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        let l = LatticeHNF::from_vectors(&[[4, 2], [6, 0]]);
        // spanned by (4,2), (6,0): second coords gcd 2, vector (4,2); x-axis part gcd(6, 12)
        assert_eq!(l, LatticeHNF { d1: 6, c: 4, d2: 2 });
        assert_eq!(l.index(), 12);
        assert_eq!(l.primitive(), LatticeHNF { d1: 3, c: 2, d2: 1 });
        assert!(l.contains([10, 2]));
        assert!(!l.contains([1, 0]));
        assert_eq!(LatticeHNF::from_vectors(&[[1, 0], [0, 1], [5, 7]]), LatticeHNF::UNIT);
    }

    #[test]
    fn sublattice_counts() {
        // sigma(6) = 12 sublattices of index 6
        assert_eq!(LatticeHNF::UNIT.sublattices(6).len(), 12);
        assert_eq!(LatticeHNF::UNIT.sublattices(3).len(), 4);
        let l = LatticeHNF { d1: 3, c: 1, d2: 1 };
        for s in l.sublattices(2) {
            assert!(l.contains_lattice(&s));
            assert_eq!(s.index(), 6);
        }
    }

    #[test]
    fn distances() {
        let z = LatticeHNF::UNIT;
        assert_eq!(z.tree_distance(&LatticeHNF { d1: 9, c: 0, d2: 1 }, 3), 2);
        assert_eq!(z.tree_distance(&LatticeHNF { d1: 3, c: 0, d2: 3 }, 3), 0);
        let a = LatticeHNF { d1: 3, c: 0, d2: 1 };
        let b = LatticeHNF { d1: 1, c: 0, d2: 3 };
        assert_eq!(a.tree_distance(&b, 3), 2);
        assert_eq!(a.tree_distance(&b, 2), 0);
    }

    #[test]
    fn coprime_intersection() {
        let a = LatticeHNF { d1: 2, c: 1, d2: 1 };
        let b = LatticeHNF { d1: 3, c: 0, d2: 1 };
        let c = a.intersect_coprime(&b);
        assert_eq!(c.index(), 6);
        assert!(a.contains_lattice(&c) && b.contains_lattice(&c));
    }

    #[test]
    fn completion() {
        for v in [[3, 5], [-2, 7], [1, 0], [0, 1], [4, -9]] {
            let m = complete_column(v);
            assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
            assert_eq!([m[0][1], m[1][1]], v);
        }
    }
}
