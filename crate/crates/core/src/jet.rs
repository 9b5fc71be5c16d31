//! Points of `M`, `M^(1)`, `M^(2)`, vector fields on `M^(1)` in the frame
//! adapted to the contact distribution `C^1`, Lie brackets, distributions and
//! their derived flags.

use crate::algebra::{int, poly_kernel, Coordinate, MultiPoly, Rational, RationalMatrix};
use crate::probe;
use crate::{Error, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Components `(h1, h2, v11, v12, v22)` of a section of `C^1` in the frame
/// `(D1, D2, ∂p11, ∂p12, ∂p22)`.
pub type Frame = [MultiPoly; 5];

pub const FRAME_NAMES: [&str; 5] = ["h1", "h2", "v11", "v12", "v22"];

/// A point of `M` (level 0), `M^(1)` (level 1) or `M^(2)` (level 2), with
/// values for exactly the coordinates of that level, in `Coordinate` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPoint {
    level: u8,
    values: Vec<Rational>,
}

impl JetPoint {
    pub fn new(level: u8, values: Vec<Rational>) -> Result<Self> {
        let expected = Coordinate::count_at_level(level);
        if level > 2 || values.len() != expected {
            return Err(Error::BadPoint {
                level,
                expected,
                got: values.len(),
            });
        }
        Ok(JetPoint { level, values })
    }

    pub fn origin(level: u8) -> Self {
        JetPoint {
            level,
            values: vec![Rational::zero(); Coordinate::count_at_level(level)],
        }
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, c: Coordinate) -> Option<&Rational> {
        self.values.get(c.index())
    }

    /// Sets a coordinate of this point's level; panics for higher coordinates.
    pub fn set(&mut self, c: Coordinate, v: Rational) {
        assert!(
            c.index() < self.values.len(),
            "{c} is not a coordinate of a level-{} point",
            self.level
        );
        self.values[c.index()] = v;
    }

    /// All twelve values, coordinates above this point's level set to zero.
    pub fn full(&self) -> [Rational; 12] {
        std::array::from_fn(|i| self.values.get(i).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn project(&self, level: u8) -> JetPoint {
        let n = Coordinate::count_at_level(level.min(self.level));
        JetPoint {
            level: level.min(self.level),
            values: self.values[..n].to_vec(),
        }
    }

    /// The point of `M^(2)` over this level-1 point with the given `p_ijk`.
    pub fn lift(&self, third: &[Rational; 4]) -> JetPoint {
        assert_eq!(self.level, 1, "lift expects a level-1 point");
        let mut values = self.values.clone();
        values.extend(third.iter().cloned());
        JetPoint { level: 2, values }
    }

    pub fn third(&self) -> Option<[Rational; 4]> {
        (self.level == 2).then(|| std::array::from_fn(|i| self.values[8 + i].clone()))
    }
}

/// Evaluates `p` at `point`; coordinates above the point's level count as zero.
pub fn eval_at(p: &MultiPoly, point: &JetPoint) -> Rational {
    p.eval(&point.full())
}

/// A polynomial vector field on `M^(1)`, stored by its eight coordinate
/// components `(x1, x2, u, p1, p2, p11, p12, p22)`. Components may mention the
/// `p_ijk` as parameters (e.g. the generators of a Lagrangian plane).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    comps: [MultiPoly; 8],
}

impl VectorField {
    pub fn zero() -> Self {
        VectorField {
            comps: Default::default(),
        }
    }

    pub fn from_components(comps: [MultiPoly; 8]) -> Self {
        VectorField { comps }
    }

    /// `h1 D1 + h2 D2 + v11 ∂p11 + v12 ∂p12 + v22 ∂p22`, with
    /// `D_i = ∂x_i + p_i ∂u + p_i1 ∂p1 + p_i2 ∂p2`.
    pub fn from_frame(frame: &Frame) -> Self {
        use Coordinate::*;
        let [h1, h2, v11, v12, v22] = frame;
        let v = |c| MultiPoly::var(c);
        let comb = |a: Coordinate, b: Coordinate| &(h1 * &v(a)) + &(h2 * &v(b));
        VectorField {
            comps: [
                h1.clone(),
                h2.clone(),
                comb(P1, P2),
                comb(P11, P12),
                comb(P12, P22),
                v11.clone(),
                v12.clone(),
                v22.clone(),
            ],
        }
    }

    pub fn from_constant_frame(frame: &[Rational; 5]) -> Self {
        VectorField::from_frame(&std::array::from_fn(|i| {
            MultiPoly::constant(frame[i].clone())
        }))
    }

    /// Total derivative truncated to `M^(1)`: `D1` (`i = 0`) or `D2` (`i = 1`).
    pub fn total(i: usize) -> Self {
        let mut f: Frame = Default::default();
        f[i] = MultiPoly::one();
        VectorField::from_frame(&f)
    }

    /// The coordinate field `∂c` for a level-1 coordinate `c`.
    pub fn partial(c: Coordinate) -> Self {
        assert!(c.index() < 8, "∂{c} is not a field on M^(1)");
        let mut comps: [MultiPoly; 8] = Default::default();
        comps[c.index()] = MultiPoly::one();
        VectorField { comps }
    }

    pub fn components(&self) -> &[MultiPoly; 8] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// The adapted-frame components, when the field is a section of `C^1`.
    pub fn frame(&self) -> Option<Frame> {
        let f: Frame = [
            self.comps[0].clone(),
            self.comps[1].clone(),
            self.comps[5].clone(),
            self.comps[6].clone(),
            self.comps[7].clone(),
        ];
        (VectorField::from_frame(&f) == *self).then_some(f)
    }

    pub fn in_contact(&self) -> bool {
        self.frame().is_some()
    }

    /// `X(f) = Σ X^c ∂f/∂c` over the level-1 coordinates.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (c, xc) in Coordinate::LEVEL1.iter().zip(&self.comps) {
            if xc.is_zero() || !f.uses(*c) {
                continue;
            }
            acc += &(xc * &f.derivative(*c));
        }
        acc
    }

    pub fn scale(&self, k: &MultiPoly) -> VectorField {
        VectorField {
            comps: std::array::from_fn(|i| &self.comps[i] * k),
        }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            comps: std::array::from_fn(|i| &self.comps[i] + &other.comps[i]),
        }
    }

    pub fn eval(&self, point: &[Rational; 12]) -> Vec<Rational> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }
}

/// `[X, Y]^c = X(Y^c) - Y(X^c)`, computed in the eight coordinates. Use
/// [`VectorField::frame`] on the result to test whether it stays in `C^1`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    VectorField {
        comps: std::array::from_fn(|i| &x.apply(&y.comps[i]) - &y.apply(&x.comps[i])),
    }
}

/// A distribution on `M^(1)` given by polynomial generators; its rank is the
/// generic rank of the generators.
#[derive(Clone, Debug)]
pub struct Distribution {
    generators: Vec<VectorField>,
    rank: usize,
}

const GENERIC_SAMPLES: usize = 5;

fn generic_points() -> &'static [[Rational; 12]] {
    static PTS: std::sync::OnceLock<Vec<[Rational; 12]>> = std::sync::OnceLock::new();
    PTS.get_or_init(|| probe::sample_points(probe::GENERIC_SEED, GENERIC_SAMPLES))
}

fn rank_of(gens: &[VectorField], point: &[Rational; 12]) -> usize {
    if gens.is_empty() {
        return 0;
    }
    RationalMatrix::new(gens.iter().map(|g| g.eval(point)).collect(), 8).rank()
}

impl Distribution {
    pub fn new(generators: Vec<VectorField>) -> Self {
        let generators: Vec<VectorField> =
            generators.into_iter().filter(|g| !g.is_zero()).collect();
        let rank = generic_points()
            .iter()
            .map(|p| rank_of(&generators, p))
            .max()
            .unwrap_or(0);
        Distribution { generators, rank }
    }

    pub fn from_frames(frames: &[Frame]) -> Self {
        Distribution::new(frames.iter().map(VectorField::from_frame).collect())
    }

    pub fn from_constant_frames(frames: &[[Rational; 5]]) -> Self {
        Distribution::new(
            frames
                .iter()
                .map(VectorField::from_constant_frame)
                .collect(),
        )
    }

    /// Convenience constructor from integer frame rows.
    pub fn from_int_frames(rows: &[[i64; 5]]) -> Self {
        Distribution::from_constant_frames(
            &rows
                .iter()
                .map(|r| std::array::from_fn(|i| int(r[i])))
                .collect::<Vec<_>>(),
        )
    }

    /// The whole contact distribution `C^1`.
    pub fn contact() -> Self {
        Distribution::from_int_frames(&[
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1],
        ])
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.generators
    }

    /// Best rank over five deterministic pseudo-random sample points.
    pub fn generic_rank(&self) -> usize {
        self.rank
    }

    pub fn rank_at(&self, point: &[Rational; 12]) -> usize {
        rank_of(&self.generators, point)
    }

    /// Adapted-frame components of every generator, if all lie in `C^1`.
    pub fn frames(&self) -> Option<Vec<Frame>> {
        self.generators.iter().map(|g| g.frame()).collect()
    }

    /// Frame matrix when every generator has constant frame components.
    pub fn constant_frames(&self) -> Option<RationalMatrix> {
        let rows: Option<Vec<Vec<Rational>>> = self
            .frames()?
            .iter()
            .map(|f| f.iter().map(|c| c.as_constant()).collect())
            .collect();
        Some(RationalMatrix::new(rows?, 5))
    }

    /// A generating subset of size `generic_rank`, chosen greedily at the
    /// sample point where the generators have maximal rank.
    pub fn basis(&self) -> Distribution {
        let pts = generic_points();
        let Some(best) = pts.iter().max_by_key(|p| rank_of(&self.generators, p)) else {
            return self.clone();
        };
        let mut chosen: Vec<VectorField> = Vec::new();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for g in &self.generators {
            if chosen.len() == self.rank {
                break;
            }
            rows.push(g.eval(best));
            if RationalMatrix::new(rows.clone(), 8).rank() > chosen.len() {
                chosen.push(g.clone());
            } else {
                rows.pop();
            }
        }
        Distribution {
            generators: chosen,
            rank: self.rank,
        }
    }

    /// `D' = D + [D, D]`.
    pub fn derived(&self) -> Distribution {
        let b = self.basis();
        let mut gens = b.generators.clone();
        for i in 0..b.generators.len() {
            for j in i + 1..b.generators.len() {
                gens.push(lie_bracket(&b.generators[i], &b.generators[j]));
            }
        }
        Distribution::new(gens).basis()
    }

    /// Generic ranks of `D, D', D'', ...`, stopping once two consecutive
    /// ranks agree or after `max_steps` derivations.
    pub fn derived_flag(&self, max_steps: usize) -> Vec<usize> {
        self.flag_with(max_steps, |d| d.generic_rank())
    }

    /// Ranks of the derived flag evaluated at one point.
    pub fn derived_flag_at(&self, max_steps: usize, point: &[Rational; 12]) -> Vec<usize> {
        self.flag_with(max_steps, |d| d.rank_at(point))
    }

    fn flag_with(&self, max_steps: usize, rank: impl Fn(&Distribution) -> usize) -> Vec<usize> {
        let mut cur = self.basis();
        let mut ranks = vec![rank(&cur)];
        for _ in 0..max_steps {
            let next = cur.derived();
            let r = rank(&next);
            let done = Some(&r) == ranks.last();
            ranks.push(r);
            if done {
                break;
            }
            cur = next;
        }
        ranks
    }

    /// `D ∩ V` with `V = <∂p11, ∂p12, ∂p22>`, by fraction-free elimination
    /// of the components along `x1, x2, u, p1, p2`.
    pub fn vertical_part(&self) -> Result<Distribution> {
        let gens = &self.basis().generators;
        let pts = generic_points();
        let dims: Vec<usize> = pts
            .iter()
            .map(|p| {
                let full = rank_of(gens, p);
                let hor =
                    RationalMatrix::new(gens.iter().map(|g| g.eval(p)[..5].to_vec()).collect(), 5);
                full - if gens.is_empty() { 0 } else { hor.rank() }
            })
            .collect();
        if dims.iter().any(|d| *d != dims[0]) {
            return Err(Error::NonConstantRank(dims));
        }
        let rows: Vec<Vec<MultiPoly>> = (0..5)
            .map(|k| gens.iter().map(|g| g.comps[k].clone()).collect())
            .collect();
        let combos = poly_kernel(&rows, gens.len());
        let fields = combos
            .iter()
            .map(|c| {
                c.iter()
                    .zip(gens)
                    .fold(VectorField::zero(), |acc, (k, g)| acc.add(&g.scale(k)))
            })
            .map(|f| {
                let comps: Vec<MultiPoly> = f.comps.to_vec();
                let comps = crate::algebra::normalize_vec(comps);
                VectorField {
                    comps: comps.try_into().unwrap(),
                }
            })
            .collect();
        Ok(Distribution::new(fields).basis())
    }

    /// Same span: exact RREF comparison for constant frames, otherwise RREF
    /// comparison of the evaluated generators at the generic sample points.
    pub fn same_span(&self, other: &Distribution) -> bool {
        if let (Some(a), Some(b)) = (self.constant_frames(), other.constant_frames()) {
            return a.same_row_space(&b);
        }
        if self.rank != other.rank {
            return false;
        }
        generic_points().iter().all(|p| {
            let a = RationalMatrix::new(self.generators.iter().map(|g| g.eval(p)).collect(), 8);
            let b = RationalMatrix::new(other.generators.iter().map(|g| g.eval(p)).collect(), 8);
            a.same_row_space(&b)
        })
    }

    /// `true` when `v` lies in the span (generically).
    pub fn contains(&self, v: &VectorField) -> bool {
        let mut gens = self.generators.clone();
        gens.push(v.clone());
        Distribution::new(gens).rank == self.rank
    }
}

/// `L_{m2} ⊂ C^1_{m1}`: the Lagrangian plane encoded by a point of `M^(2)`,
/// spanned by `ξ_i = D_i + p_i11 ∂p11 + p_i12 ∂p12 + p_i22 ∂p22`.
#[derive(Clone, Debug)]
pub struct LagrangianPlane {
    pub point: JetPoint,
    pub xi: [[Rational; 5]; 2],
}

pub fn lagrangian_plane(m2: &JetPoint) -> Result<LagrangianPlane> {
    let Some(p) = m2.third() else {
        return Err(Error::BadPoint {
            level: 2,
            expected: 12,
            got: m2.values().len(),
        });
    };
    let z = Rational::zero();
    let o = int(1);
    Ok(LagrangianPlane {
        point: m2.clone(),
        xi: [
            [
                o.clone(),
                z.clone(),
                p[0].clone(),
                p[1].clone(),
                p[2].clone(),
            ],
            [z, o, p[1].clone(), p[2].clone(), p[3].clone()],
        ],
    })
}

impl LagrangianPlane {
    /// Frame vector of `λ1 ξ1 + λ2 ξ2`.
    pub fn line(&self, l1: &Rational, l2: &Rational) -> [Rational; 5] {
        std::array::from_fn(|i| l1 * &self.xi[0][i] + l2 * &self.xi[1][i])
    }

    /// `(λ1, λ2)` with `v = λ1 ξ1 + λ2 ξ2`, if `v` lies in the plane.
    pub fn coordinates_of(&self, v: &[Rational; 5]) -> Option<(Rational, Rational)> {
        let (l1, l2) = (v[0].clone(), v[1].clone());
        (self.line(&l1, &l2) == *v).then_some((l1, l2))
    }

    pub fn as_distribution(&self) -> Distribution {
        Distribution::from_constant_frames(&self.xi)
    }
}

/// `ξ1, ξ2` with the `p_ijk` kept as symbols.
pub fn symbolic_xi() -> [Frame; 2] {
    use Coordinate::*;
    let v = MultiPoly::var;
    [
        [
            MultiPoly::one(),
            MultiPoly::zero(),
            v(P111),
            v(P112),
            v(P122),
        ],
        [
            MultiPoly::zero(),
            MultiPoly::one(),
            v(P112),
            v(P122),
            v(P222),
        ],
    ]
}

/// JSON form of a distribution: generators by adapted-frame components.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DistributionSpec {
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorSpec {
    #[serde(default = "zero_str")]
    pub h1: String,
    #[serde(default = "zero_str")]
    pub h2: String,
    #[serde(default = "zero_str")]
    pub v11: String,
    #[serde(default = "zero_str")]
    pub v12: String,
    #[serde(default = "zero_str")]
    pub v22: String,
}

fn zero_str() -> String {
    "0".into()
}

impl DistributionSpec {
    pub fn to_distribution(&self) -> Result<Distribution> {
        let frames = self
            .generators
            .iter()
            .map(|g| {
                Ok([
                    g.h1.parse()?,
                    g.h2.parse()?,
                    g.v11.parse()?,
                    g.v12.parse()?,
                    g.v22.parse()?,
                ])
            })
            .collect::<Result<Vec<Frame>>>()?;
        Ok(Distribution::from_frames(&frames))
    }

    /// Fails with `OutsideContact` if a generator leaves `C^1`.
    pub fn from_distribution(d: &Distribution) -> Result<Self> {
        let frames = d.frames().ok_or(Error::OutsideContact)?;
        Ok(DistributionSpec {
            generators: frames
                .iter()
                .map(|f| GeneratorSpec {
                    h1: f[0].to_string(),
                    h2: f[1].to_string(),
                    v11: f[2].to_string(),
                    v12: f[3].to_string(),
                    v22: f[4].to_string(),
                })
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Coordinate::*;

    #[test]
    fn brackets_with_total_derivatives() {
        let b = lie_bracket(&VectorField::partial(P22), &VectorField::total(1));
        assert_eq!(b, VectorField::partial(P2));
        let b = lie_bracket(&VectorField::partial(P11), &VectorField::total(0));
        assert_eq!(b, VectorField::partial(P1));
        assert!(!b.in_contact());
        assert!(lie_bracket(&VectorField::total(0), &VectorField::total(1)).is_zero());
    }

    #[test]
    fn frame_roundtrip() {
        let f: Frame = [
            "x1".parse().unwrap(),
            MultiPoly::int(2),
            MultiPoly::zero(),
            "p11".parse().unwrap(),
            MultiPoly::one(),
        ];
        assert_eq!(VectorField::from_frame(&f).frame(), Some(f));
    }

    #[test]
    fn derived_flags_of_model_distributions() {
        let d = Distribution::from_int_frames(&[[1, 0, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]);
        assert_eq!(&d.derived_flag(4)[..2], &[3, 5]);
        let d = Distribution::from_int_frames(&[[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, 1]]);
        assert_eq!(&d.derived_flag(4)[..2], &[3, 4]);
        let v = Distribution::from_int_frames(&[[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]);
        assert_eq!(v.derived_flag(4), vec![3, 3]);
        assert_eq!(Distribution::contact().derived_flag(4), vec![5, 7, 8, 8]);
    }

    #[test]
    fn vertical_part_eliminates_horizontal() {
        let d = Distribution::from_int_frames(&[[1, 0, 1, 0, 0], [1, 0, 0, 1, 0], [0, 1, 0, 0, 1]]);
        let v = d.vertical_part().unwrap();
        assert_eq!(v.generic_rank(), 1);
        let expect = Distribution::from_int_frames(&[[0, 0, 1, -1, 0]]);
        assert!(v.same_span(&expect));
    }

    #[test]
    fn jet_point_levels() {
        assert!(JetPoint::new(1, vec![int(0); 5]).is_err());
        let m = JetPoint::origin(1).lift(&[int(1), int(2), int(3), int(4)]);
        let f: MultiPoly = "p112*p222 + x1".parse().unwrap();
        assert_eq!(eval_at(&f, &m), int(8));
        let l = lagrangian_plane(&m).unwrap();
        assert_eq!(
            l.coordinates_of(&l.line(&int(2), &int(-1))),
            Some((int(2), int(-1)))
        );
    }
}
