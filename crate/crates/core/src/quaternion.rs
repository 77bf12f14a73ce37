//! The quaternion ring `R_{A,B,C,D}` inside 2x2 integer matrices.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::forms::StandardConic;
use crate::{int, Rational};

pub type Mat2 = [[i64; 2]; 2];

pub const IDENTITY2: Mat2 = [[1, 0], [0, 1]];

pub fn mul2(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

pub fn det2(m: &Mat2) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Adjugate; the inverse times the determinant.
pub fn adj2(m: &Mat2) -> Mat2 {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

fn flatten(m: &Mat2) -> [i64; 4] {
    [m[0][0], m[0][1], m[1][0], m[1][1]]
}

/// A rank-4 subring of `Mat2(Z)` given by four generators, the first being 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionOrder {
    pub gens: [Mat2; 4],
    /// `(A, B, C, D)` when the generators are the standard ones.
    pub params: Option<(i64, i64, i64, i64)>,
}

/// Multiplication table: `table[i][j]` holds the coordinates of `g_i g_j`.
pub type MulTable = [[[i64; 4]; 4]; 4];

pub fn ring_from_params(a: i64, b: i64, c: i64, d: i64) -> QuaternionOrder {
    QuaternionOrder { gens: [IDENTITY2, [[b, c], [-a, 0]], [[0, 0], [0, d]], [[0, 0], [d, 0]]], params: Some((a, b, c, d)) }
}

pub fn ring_from_conic(c: &StandardConic) -> QuaternionOrder {
    ring_from_params(c.a, c.b, c.c, c.d)
}

impl QuaternionOrder {
    fn basis_matrix(&self) -> [[Rational; 4]; 4] {
        // column i is generator i flattened
        let cols = self.gens.map(|g| flatten(&g));
        std::array::from_fn(|r| std::array::from_fn(|i| Rational::from_integer(cols[i][r].into())))
    }

    /// Rational coordinates of `m` over the generators, `None` if they are dependent.
    pub fn rational_coordinates(&self, m: &Mat2) -> Option<[Rational; 4]> {
        let mut a = self.basis_matrix();
        let mut rhs: [Rational; 4] = flatten(m).map(|v| Rational::from_integer(v.into()));
        for col in 0..4 {
            let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            rhs.swap(col, pivot);
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let factor = &a[r][col] / &a[col][col];
                    for k in col..4 {
                        let sub = &factor * &a[col][k];
                        a[r][k] -= sub;
                    }
                    let sub = &factor * &rhs[col];
                    rhs[r] -= sub;
                }
            }
        }
        Some(std::array::from_fn(|i| &rhs[i] / &a[i][i]))
    }

    /// Integer coordinates of `m`, or `None` when `m` is not in the ring.
    pub fn coordinates(&self, m: &Mat2) -> Option<[i64; 4]> {
        let c = self.rational_coordinates(m)?;
        if c.iter().all(|x| x.is_integer()) {
            Some(c.map(|x| x.to_integer().to_i64().expect("coordinate fits")))
        } else {
            None
        }
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.coordinates(m).is_some()
    }

    /// Checks that every product `g_i g_j` stays in the integral span.
    pub fn ring_closed(&self) -> Result<MulTable> {
        if self.rational_coordinates(&IDENTITY2).is_none() {
            return Err(Error::RankDeficient);
        }
        let mut table = [[[0i64; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                table[i][j] = self.coordinates(&mul2(&self.gens[i], &self.gens[j])).ok_or(Error::NotClosed(i + 1, j + 1))?;
            }
        }
        Ok(table)
    }

    /// `[Mat2(Z) : R]`, the absolute determinant of the generator coordinates.
    pub fn ring_index(&self) -> Result<i64> {
        let m = self.gens.map(|g| flatten(&g).map(i128::from));
        let det = det4(&m);
        if det == 0 {
            return Err(Error::RankDeficient);
        }
        Ok(i64::try_from(det.abs()).expect("index fits"))
    }

    /// Smallest `N > 0` with `N * Mat2(Z)` inside the ring; divides the index.
    pub fn conductor(&self) -> Result<i64> {
        let index = self.ring_index()?;
        let units = [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]];
        let n = int::divisors(index)
            .into_iter()
            .find(|&n| units.iter().all(|e: &Mat2| self.contains(&e.map(|r| r.map(|v| v * n)))))
            .expect("the index itself always works");
        Ok(n)
    }

    /// The order `U R U^{-1}` for `U` in `GL2(Z)`.
    pub fn conjugate(&self, u: &Mat2) -> QuaternionOrder {
        let d = det2(u);
        assert!(d == 1 || d == -1, "conjugator must be unimodular");
        let inv = adj2(u).map(|r| r.map(|v| v * d));
        QuaternionOrder { gens: self.gens.map(|g| mul2(&mul2(u, &g), &inv)), params: None }
    }
}

fn det4(m: &[[i128; 4]; 4]) -> i128 {
    // Laplace expansion along the first row; sizes are tiny
    let minor = |skip: usize| -> i128 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
        let e = |r: usize, c: usize| m[r][cols[c]];
        e(1, 0) * (e(2, 1) * e(3, 2) - e(2, 2) * e(3, 1)) - e(1, 1) * (e(2, 0) * e(3, 2) - e(2, 2) * e(3, 0))
            + e(1, 2) * (e(2, 0) * e(3, 1) - e(2, 1) * e(3, 0))
    };
    (0..4).map(|c| if c % 2 == 0 { m[0][c] * minor(c) } else { -m[0][c] * minor(c) }).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        let r = ring_from_params(1, 1, 3, 2);
        assert_eq!(r.gens, [[[1, 0], [0, 1]], [[1, 3], [-1, 0]], [[0, 0], [0, 2]], [[0, 0], [2, 0]]]);
        assert_eq!(r.ring_index().unwrap(), 12);
        assert_eq!(ring_from_params(0, 0, 6, 1).ring_index().unwrap(), 6);
        assert_eq!(ring_from_params(0, 0, 1, 1).ring_index().unwrap(), 1);
    }

    #[test]
    fn level_n_ring_is_upper_congruence() {
        let r = ring_from_params(0, 0, 5, 1);
        for b in -6..=6 {
            assert_eq!(r.contains(&[[2, b], [-3, 7]]), b % 5 == 0);
        }
        let full = ring_from_params(0, 0, 1, 1);
        assert!(full.contains(&[[3, -2], [5, 7]]));
    }

    #[test]
    fn closure_table() {
        let r = ring_from_params(0, 0, 4, 1);
        let t = r.ring_closed().unwrap();
        assert_eq!(t[2][3], [0, 0, 0, 1]);
        for a in -3..=3 {
            for b in -3..=3 {
                for c in 1..=4 {
                    for d in 1..=4 {
                        assert!(ring_from_params(a, b, c, d).ring_closed().is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn failures() {
        let bad = QuaternionOrder { gens: [IDENTITY2, [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 2]]], params: None };
        assert!(matches!(bad.ring_closed(), Err(Error::NotClosed(..))));
        let flat = QuaternionOrder { gens: [IDENTITY2, IDENTITY2, [[0, 0], [1, 0]], [[0, 0], [0, 2]]], params: None };
        assert_eq!(flat.ring_index(), Err(Error::RankDeficient));
    }

    #[test]
    fn conductor_divides_cd() {
        let r = ring_from_params(1, 1, 3, 2);
        assert_eq!(6 % r.conductor().unwrap(), 0);
        assert_eq!(ring_from_params(0, 0, 1, 9).conductor().unwrap(), 9);
    }
}
