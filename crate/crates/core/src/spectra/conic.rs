use super::value::{n_lagrange, n_markoff, IndefiniteBinaryForm, SpectrumValue};
use crate::error::{Error, Result};
use crate::forms::{find_rational_point, standardize, ProjPoint, StandardConic, SurdVec, TernaryForm};
use crate::lattices::{global_invariants, SpectrumInvariants};
use crate::quaternion::{ring_from_conic, QuaternionOrder};
use crate::Surd;

/// Everything the pipeline derives from an integral conic.
#[derive(Clone, Debug)]
pub struct ConicAnalysis {
    pub source: TernaryForm,
    /// The form was negated to make the discriminant positive.
    pub flipped: bool,
    pub content: i64,
    pub point: ProjPoint,
    pub standard: StandardConic,
    pub ring: QuaternionOrder,
    pub invariants: SpectrumInvariants,
}

impl ConicAnalysis {
    /// Discriminant of the primitive, sign-normalised form.
    pub fn discriminant(&self) -> i64 {
        self.standard.discriminant()
    }

    /// Multiplier including the content of the source form.
    pub fn multiplier(&self) -> i64 {
        self.content * self.invariants.m
    }

    /// The real point with coordinate `x`: `rho(B (1, x))` in source coordinates.
    pub fn point_at(&self, x: &Surd) -> Result<SurdVec> {
        let b = self.invariants.basis;
        let s = x.scale(b[0][1].into(), 1.into())?.add_int(b[0][0].into());
        let t = x.scale(b[1][1].into(), 1.into())?.add_int(b[1][0].into());
        self.standard.point_of(&s, &t)
    }
}

pub fn analyze_conic(f: &TernaryForm, height_bound: i64) -> Result<ConicAnalysis> {
    let delta = f.discriminant();
    if delta == 0 {
        return Err(Error::SingularConic);
    }
    let content = f.content();
    let prim = f.primitive_part();
    let flipped = prim.discriminant() < 0;
    let prim = if flipped { prim.negated() } else { prim };
    let point = find_rational_point(&prim, height_bound)?;
    let standard = standardize(&prim, &point)?;
    let ring = ring_from_conic(&standard);
    ring.ring_closed()?;
    let invariants = global_invariants(&ring, standard.discriminant())?;
    Ok(ConicAnalysis { source: *f, flipped, content, point, standard, ring, invariants })
}

/// Approximability of the point `rho(B (1, x))`, returned together with it.
pub fn conic_lagrange(f: &TernaryForm, x: &Surd, height_bound: i64) -> Result<(SpectrumValue, SurdVec)> {
    let an = analyze_conic(f, height_bound)?;
    let value = n_lagrange(x, an.invariants.n, an.multiplier())?;
    Ok((value, an.point_at(x)?))
}

/// Approximability of the pair of points with coordinates the roots of `q`.
pub fn conic_markoff(f: &TernaryForm, q: &IndefiniteBinaryForm, height_bound: i64) -> Result<(SpectrumValue, [SurdVec; 2])> {
    let an = analyze_conic(f, height_bound)?;
    let value = n_markoff(q, an.invariants.n, an.multiplier())?;
    let root = q.root()?;
    let pair = [an.point_at(&root)?, an.point_at(&root.conjugate())?];
    Ok((value, pair))
}
