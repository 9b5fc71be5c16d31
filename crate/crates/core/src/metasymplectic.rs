//! The meta-symplectic form `Ω` on `C^1` with values in `span(∂p1, ∂p2)`,
//! the trilinear form it induces, three-fold orthogonality, and the
//! orthogonal complements of a quasi-linear distribution.

use crate::algebra::{normalize_vec, MultiPoly};
use crate::jet::{Distribution, Frame, VectorField};
use crate::monge_ampere::{build_ed, line_family_span};
use crate::{Error, Result};
use num_traits::{Signed, Zero};
use std::fmt;

/// `c1 ∂p1 + c2 ∂p2`, identified with `c1 dx1 + c2 dx2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LDual(pub [MultiPoly; 2]);

impl LDual {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Projective equality: `c1 d2 - c2 d1 = 0` and both non-zero.
    pub fn same_line(&self, other: &LDual) -> bool {
        !self.is_zero()
            && !other.is_zero()
            && (&(&self.0[0] * &other.0[1]) - &(&self.0[1] * &other.0[0])).is_zero()
    }

    /// Representative with rational content and monomial factors removed.
    pub fn normalized(&self) -> LDual {
        let v = normalize_vec(self.0.to_vec());
        LDual([v[0].clone(), v[1].clone()])
    }
}

impl fmt::Display for LDual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})∂p1 + ({})∂p2", self.0[0], self.0[1])
    }
}

/// `A dp11 + B dp12 + C dp22`, a covector on the vertical bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalCovector {
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub c: MultiPoly,
}

fn frame_of(x: &VectorField) -> Result<Frame> {
    x.frame().ok_or(Error::OutsideContact)
}

fn omega_frames(x: &Frame, y: &Frame) -> LDual {
    let [a1, a2, a11, a12, a22] = x;
    let [b1, b2, b11, b12, b22] = y;
    let c1 = &(&(a1 * b11) - &(b1 * a11)) + &(&(a2 * b12) - &(b2 * a12));
    let c2 = &(&(a1 * b12) - &(b1 * a12)) + &(&(a2 * b22) - &(b2 * a22));
    LDual([c1, c2])
}

/// `Ω(X, Y)` for `X, Y ∈ C^1`.
pub fn omega_bilinear(x: &VectorField, y: &VectorField) -> Result<LDual> {
    Ok(omega_frames(&frame_of(x)?, &frame_of(y)?))
}

fn trilinear_frames(x1: &Frame, x2: &Frame, x3: &Frame) -> MultiPoly {
    let LDual([c1, c2]) = omega_frames(x1, x2);
    &(&c1 * &x3[0]) + &(&c2 * &x3[1])
}

/// `Ω̃(X1, X2, X3) = ⟨Ω(X1, X2), π_*(X3)⟩`.
pub fn omega_trilinear(x1: &VectorField, x2: &VectorField, x3: &VectorField) -> Result<MultiPoly> {
    Ok(trilinear_frames(
        &frame_of(x1)?,
        &frame_of(x2)?,
        &frame_of(x3)?,
    ))
}

fn frames_of(d: &Distribution) -> Result<Vec<Frame>> {
    d.basis().frames().ok_or(Error::OutsideContact)
}

/// `Ω̃` vanishes identically on every ordered triple of generators taken
/// one from each distribution.
pub fn is_threefold_orthogonal(
    d1: &Distribution,
    d2: &Distribution,
    d3: &Distribution,
) -> Result<bool> {
    let ds = [frames_of(d1)?, frames_of(d2)?, frames_of(d3)?];
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for [i, j, k] in PERMS {
        for x in &ds[i] {
            for y in &ds[j] {
                for z in &ds[k] {
                    if !trilinear_frames(x, y, z).is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The line `Ω(D_i, D_j)` when the values of `Ω` on pairs of generators
/// span exactly one line.
pub fn canonical_line(di: &Distribution, dj: &Distribution) -> Result<Option<LDual>> {
    let (fi, fj) = (frames_of(di)?, frames_of(dj)?);
    let vals: Vec<LDual> = fi
        .iter()
        .flat_map(|x| fj.iter().map(move |y| omega_frames(x, y)))
        .filter(|v| !v.is_zero())
        .collect();
    let Some(first) = vals.first() else {
        return Ok(None);
    };
    Ok(vals
        .iter()
        .all(|v| v.same_line(first))
        .then(|| first.normalized()))
}

/// A projective root `k = num/den` of `A k² + B k + C`; `den = 0` is the
/// root at infinity.
pub type ProjectiveRoot = (MultiPoly, MultiPoly);

/// Roots of `A k² + B k + C = 0` as a pair; constant roots are sorted
/// increasingly with infinity last.
pub fn covector_roots(w: &VerticalCovector) -> Result<[ProjectiveRoot; 2]> {
    let (a, b, c) = (&w.a, &w.b, &w.c);
    let inf = (MultiPoly::one(), MultiPoly::zero());
    let mut roots: [ProjectiveRoot; 2] = if a.is_zero() && b.is_zero() {
        if c.is_zero() {
            return Err(Error::NotDecomposable("zero covector".into()));
        }
        [inf.clone(), inf]
    } else if a.is_zero() {
        [(-c.clone(), b.clone()), inf]
    } else {
        let disc = &(b * b) - &(&(a * c) * &MultiPoly::int(4));
        if disc.as_constant().is_some_and(|d| d.is_negative()) {
            return Err(Error::NotDecomposable("complex".into()));
        }
        let s = disc
            .sqrt()
            .ok_or_else(|| Error::NotDecomposable("irrational".into()))?;
        let den = a * &MultiPoly::int(2);
        [(&(-b.clone()) - &s, den.clone()), (&(-b.clone()) + &s, den)]
    };
    for r in roots.iter_mut() {
        let v = normalize_vec(vec![r.0.clone(), r.1.clone()]);
        *r = (v[0].clone(), v[1].clone());
    }
    let value = |r: &ProjectiveRoot| match (r.0.as_constant(), r.1.as_constant()) {
        (Some(n), Some(d)) if !d.is_zero() => Some(Some(n / d)),
        (Some(_), Some(_)) => Some(None),
        _ => None,
    };
    if let (Some(x), Some(y)) = (value(&roots[0]), value(&roots[1])) {
        let swap = match (x, y) {
            (None, Some(_)) => true,
            (Some(x), Some(y)) => x > y,
            _ => false,
        };
        if swap {
            roots.swap(0, 1);
        }
    }
    Ok(roots)
}

/// The lines `∂p2 + k ∂p1` for the roots `k` of `A k² + B k + C`
/// (`∂p1` for the root at infinity).
pub fn characteristic_lines_of_covector(w: &VerticalCovector) -> Result<[LDual; 2]> {
    Ok(covector_roots(w)?.map(|(n, d)| LDual([n, d]).normalized()))
}

/// The covector annihilating a two-dimensional vertical space spanned by
/// `(r1, s1, t1)` and `(r2, s2, t2)`.
pub fn annihilating_covector(v1: &[MultiPoly; 3], v2: &[MultiPoly; 3]) -> VerticalCovector {
    let cross = |i: usize, j: usize| &(&v1[i] * &v2[j]) - &(&v1[j] * &v2[i]);
    VerticalCovector {
        a: cross(1, 2),
        b: -cross(0, 2),
        c: cross(0, 1),
    }
}

/// For `D` with two-dimensional vertical part, the two distributions that
/// complete it to a three-fold orthogonal triple. Each is swept by the lines
/// of `{E_D}` whose horizontal direction is `D1 - k D2` for a root `k` of
/// the covector annihilating `D^v`.
pub fn orthogonal_complement_pair(d: &Distribution) -> Result<(Distribution, Distribution)> {
    if d.generic_rank() != 3 {
        return Err(Error::RankError(d.generic_rank()));
    }
    let frames = frames_of(d)?;
    if frames.iter().all(|f| f[0].is_zero() && f[1].is_zero()) {
        return Err(Error::DegenerateHorizontal);
    }
    let vert = frames_of(&d.vertical_part()?)?;
    if vert.len() != 2 {
        return Err(Error::NormalFormError(format!(
            "vertical rank {} (expected 2)",
            vert.len()
        )));
    }
    let v = |f: &Frame| [f[2].clone(), f[3].clone(), f[4].clone()];
    let w = annihilating_covector(&v(&vert[0]), &v(&vert[1]));
    let roots = covector_roots(&w)?;
    let f = build_ed(d)?;
    let [a, b] = roots.map(|(num, den)| line_family_span(&f, &[den, -num]));
    Ok((a?, b?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, Coordinate};

    fn vf(r: [i64; 5]) -> VectorField {
        VectorField::from_constant_frame(&r.map(int))
    }

    fn ld(a: i64, b: i64) -> LDual {
        LDual([MultiPoly::int(a), MultiPoly::int(b)])
    }

    fn worked_example() -> [Distribution; 3] {
        [
            Distribution::from_int_frames(&[[1, 0, 0, 0, 0], [0, 0, 1, 1, 0], [0, 0, 2, 0, 1]]),
            Distribution::from_int_frames(&[[1, 1, 0, 0, 0], [0, 0, 2, 1, 0], [0, 0, 0, 0, 1]]),
            Distribution::from_int_frames(&[[1, -2, 0, 0, 0], [0, 0, 1, -1, 0], [0, 0, 0, 0, 1]]),
        ]
    }

    #[test]
    fn bilinear_values() {
        let d1 = vf([1, 0, 0, 0, 0]);
        assert_eq!(omega_bilinear(&d1, &vf([0, 0, 2, 1, 0])).unwrap(), ld(2, 1));
        assert_eq!(
            omega_bilinear(&vf([1, 1, 0, 0, 0]), &vf([0, 0, 1, -1, 0])).unwrap(),
            ld(0, -1)
        );
        let x = vf([1, 2, 3, -1, 5]);
        assert!(omega_bilinear(&x, &x).unwrap().is_zero());
        let off = VectorField::partial(Coordinate::U);
        assert_eq!(omega_bilinear(&off, &x), Err(Error::OutsideContact));
    }

    #[test]
    fn trilinear_values() {
        let (d1, v) = (vf([1, 0, 0, 0, 0]), vf([0, 0, 2, 1, 0]));
        assert!(omega_trilinear(&d1, &v, &vf([1, -2, 0, 0, 0]))
            .unwrap()
            .is_zero());
        assert_eq!(
            omega_trilinear(&d1, &v, &vf([1, 1, 0, 0, 0])).unwrap(),
            MultiPoly::int(3)
        );
    }

    #[test]
    fn sample_triple_is_orthogonal() {
        let [a, b, c] = worked_example();
        assert!(is_threefold_orthogonal(&a, &b, &c).unwrap());
        let d = Distribution::from_int_frames(&[[1, 0, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]);
        assert!(!is_threefold_orthogonal(&d, &d, &d).unwrap());
    }

    #[test]
    fn canonical_lines_of_sample_triple() {
        let [a, b, c] = worked_example();
        assert!(canonical_line(&a, &b)
            .unwrap()
            .unwrap()
            .same_line(&ld(2, 1)));
        assert!(canonical_line(&a, &c)
            .unwrap()
            .unwrap()
            .same_line(&ld(1, -1)));
        assert!(canonical_line(&b, &c)
            .unwrap()
            .unwrap()
            .same_line(&ld(0, 1)));
    }

    #[test]
    fn covector_lines() {
        let w = |a: i64, b: i64, c: i64| VerticalCovector {
            a: MultiPoly::int(a),
            b: MultiPoly::int(b),
            c: MultiPoly::int(c),
        };
        let l = characteristic_lines_of_covector(&w(1, -5, 6)).unwrap();
        assert!(l[0].same_line(&ld(2, 1)) && l[1].same_line(&ld(3, 1)));
        let l = characteristic_lines_of_covector(&w(0, 1, 0)).unwrap();
        assert!(l[0].same_line(&ld(0, 1)) && l[1].same_line(&ld(1, 0)));
        let l = characteristic_lines_of_covector(&w(1, 0, 0)).unwrap();
        assert!(l[0].same_line(&ld(0, 1)) && l[1].same_line(&ld(0, 1)));
        assert_eq!(
            characteristic_lines_of_covector(&w(1, 0, 1)),
            Err(Error::NotDecomposable("complex".into()))
        );
        assert_eq!(
            characteristic_lines_of_covector(&w(1, 0, -2)),
            Err(Error::NotDecomposable("irrational".into()))
        );
    }

    #[test]
    fn complements() {
        let [a, b, c] = worked_example();
        let (x, y) = orthogonal_complement_pair(&a).unwrap();
        assert!(x.same_span(&b) && y.same_span(&c));
        let d1 =
            Distribution::from_int_frames(&[[1, 0, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]);
        let d2 =
            Distribution::from_int_frames(&[[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, 1]]);
        let (x, y) = orthogonal_complement_pair(&d1).unwrap();
        assert!(x.same_span(&d2) && y.same_span(&d2));
        let d = Distribution::from_int_frames(&[[1, 0, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]);
        let (x, y) = orthogonal_complement_pair(&d).unwrap();
        assert!(x.same_span(&d) && y.same_span(&d));
        let vert =
            Distribution::from_int_frames(&[[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]);
        assert_eq!(
            orthogonal_complement_pair(&vert).unwrap_err(),
            Error::DegenerateHorizontal
        );
    }
}
