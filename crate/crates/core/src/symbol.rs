//! Symbols of third-order equations `F(x, u, p_i, p_ij, p_ijk) = 0`, their
//! factorisation, characteristic lines and the characteristic cone over a
//! point of `M^(1)`.

use crate::algebra::{int, to_f64, Coordinate, MultiPoly, Rational, RationalMatrix, UniPoly};
use crate::jet::{eval_at, lagrangian_plane, Distribution, JetPoint};
use crate::probe;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Coefficients `(a, b, c, d)` of the binary cubic
/// `a ξ1³ + b ξ1²ξ2 + c ξ1ξ2² + d ξ2³`.
pub type Cubic = [Rational; 4];

/// `(∂F/∂p111, ∂F/∂p112, ∂F/∂p122, ∂F/∂p222)` as polynomials.
pub fn symbol_polys(f: &MultiPoly) -> [MultiPoly; 4] {
    Coordinate::THIRD.map(|c| f.derivative(c))
}

/// The symbol of `F` at `m2`, as a binary cubic in `ξ1, ξ2`.
pub fn symbol(f: &MultiPoly, m2: &JetPoint) -> Result<Cubic> {
    let s = symbol_polys(f).map(|p| eval_at(&p, m2));
    if s.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroSymbol);
    }
    Ok(s)
}

/// Coefficients of `ν1³, ν1²ν2, ν1ν2², ν2³` in
/// `Σ_{l1+l2=3} (-1)^l1 ∂F/∂p_{1^l1 2^l2} (ν2)^l1 (ν1)^l2`.
pub fn char_poly(f: &MultiPoly, m2: &JetPoint) -> Result<[Rational; 4]> {
    let [a, b, c, d] = symbol(f, m2)?;
    Ok([d, -c, b, -a])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscriminantClass {
    /// `Δ > 0`: three distinct real roots.
    ThreeDistinct,
    /// `Δ = 0`: a repeated root.
    Repeated,
    /// `Δ < 0`: one real root and a complex pair.
    OneReal,
}

/// `Δ = 18abcd − 4b³d + b²c² − 4ac³ − 27a²d²`.
pub fn discriminant(c: &Cubic) -> Rational {
    let [a, b, cc, d] = c;
    let k = |n: i64| int(n);
    k(18) * a * b * cc * d - k(4) * b * b * b * d + b * b * cc * cc
        - k(4) * a * cc * cc * cc
        - k(27) * a * a * d * d
}

pub fn discriminant_classify(c: &Cubic) -> (Rational, DiscriminantClass) {
    let delta = discriminant(c);
    let class = if delta.is_positive() {
        DiscriminantClass::ThreeDistinct
    } else if delta.is_zero() {
        DiscriminantClass::Repeated
    } else {
        DiscriminantClass::OneReal
    };
    (delta, class)
}

/// A projective direction `(λ1, λ2)`: the linear form `λ1 ξ1 + λ2 ξ2`, which
/// is also the line `λ1 ξ1 + λ2 ξ2` of the Lagrangian plane.
#[derive(Clone, Debug, PartialEq)]
pub enum Direction {
    Exact([Rational; 2]),
    Approx([f64; 2]),
}

impl Direction {
    fn exact(l1: Rational, l2: Rational) -> Self {
        let s = if !l1.is_zero() {
            l1.clone()
        } else {
            l2.clone()
        };
        Direction::Exact([l1 / &s, l2 / &s])
    }

    fn approx(l1: f64, l2: f64) -> Self {
        let s = if l1.abs() > 1e-300 { l1 } else { l2 };
        Direction::Approx([l1 / s, l2 / s])
    }

    pub fn as_f64(&self) -> [f64; 2] {
        match self {
            Direction::Exact([a, b]) => [to_f64(a), to_f64(b)],
            Direction::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Direction::Exact(_))
    }

    fn close(&self, other: &Direction) -> bool {
        match (self, other) {
            (Direction::Exact(a), Direction::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.as_f64(), other.as_f64());
                (a[0] * b[1] - a[1] * b[0]).abs()
                    <= 1e-9 * (1.0 + a[0].abs() + a[1].abs()) * (1.0 + b[0].abs() + b[1].abs())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Quadratic {
    /// `q0 ξ1² + q1 ξ1ξ2 + q2 ξ2²`.
    Exact([Rational; 3]),
    Approx([f64; 3]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicFactorization {
    pub linear: Direction,
    pub quadratic: Quadratic,
}

impl CubicFactorization {
    pub fn is_exact(&self) -> bool {
        self.linear.is_exact()
    }

    /// Coefficients of `linear × quadratic`, in floating point.
    pub fn product_f64(&self) -> [f64; 4] {
        let [l1, l2] = self.linear.as_f64();
        let q = match &self.quadratic {
            Quadratic::Exact(q) => q.clone().map(|x| to_f64(&x)),
            Quadratic::Approx(q) => *q,
        };
        [
            l1 * q[0],
            l1 * q[1] + l2 * q[0],
            l1 * q[2] + l2 * q[1],
            l2 * q[2],
        ]
    }
}

/// Splits a non-zero binary cubic into a linear and a quadratic factor.
///
/// Order of preference: `ξ2` when `a = 0`, `ξ1` when `d = 0`, an exact
/// rational root, and otherwise a numerically located real root (flagged
/// inexact; the product reconstructs the cubic to about `1e-9`).
pub fn factor_cubic(c: &Cubic) -> CubicFactorization {
    let [a, b, cc, d] = c.clone();
    assert!(
        !(a.is_zero() && b.is_zero() && cc.is_zero() && d.is_zero()),
        "zero cubic"
    );
    if a.is_zero() {
        return CubicFactorization {
            linear: Direction::exact(Rational::zero(), Rational::one()),
            quadratic: Quadratic::Exact([b, cc, d]),
        };
    }
    if d.is_zero() {
        return CubicFactorization {
            linear: Direction::exact(Rational::one(), Rational::zero()),
            quadratic: Quadratic::Exact([a, b, cc]),
        };
    }
    // In t = ξ1/ξ2: a t³ + b t² + c t + d.
    let p = UniPoly::new(vec![d.clone(), cc.clone(), b.clone(), a.clone()]);
    if let Some(r) = p.rational_roots().into_iter().next() {
        let q1 = &b + &a * &r;
        let q2 = &cc + &r * &q1;
        return CubicFactorization {
            linear: Direction::exact(Rational::one(), -r),
            quadratic: Quadratic::Exact([a, q1, q2]),
        };
    }
    let roots = p.real_roots();
    let r = roots.iter().copied().fold(f64::NAN, f64::min);
    let r = polish(&p, r);
    let (af, bf, cf) = (to_f64(&a), to_f64(&b), to_f64(&cc));
    let q1 = bf + af * r;
    let q2 = cf + r * q1;
    CubicFactorization {
        linear: Direction::approx(1.0, -r),
        quadratic: Quadratic::Approx([af, q1, q2]),
    }
}

fn polish(p: &UniPoly, mut x: f64) -> f64 {
    let dp = p.derivative();
    for _ in 0..8 {
        let fx = p.eval_f64(x);
        if fx.abs() < 1e-14 {
            break;
        }
        let d = dp.eval_f64(x);
        if d == 0.0 {
            break;
        }
        x -= fx / d;
    }
    x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Linear,
    Quadratic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolRoot {
    pub direction: Direction,
    pub mult: u8,
    pub factor: FactorKind,
}

fn quadratic_roots(q: &Quadratic) -> Vec<Direction> {
    match q {
        Quadratic::Exact([q0, q1, q2]) => {
            if q0.is_zero() {
                // ξ2 (q1 ξ1 + q2 ξ2)
                let mut out = vec![Direction::exact(Rational::zero(), Rational::one())];
                if q1.is_zero() {
                    if !q2.is_zero() {
                        out.push(Direction::exact(Rational::zero(), Rational::one()));
                    } else {
                        out.clear();
                    }
                } else {
                    out.push(Direction::exact(q1.clone(), q2.clone()));
                }
                return out;
            }
            let disc = q1 * q1 - int(4) * q0 * q2;
            let two_a = int(2) * q0;
            if disc.is_negative() {
                return vec![];
            }
            if let Some(s) = crate::algebra::sqrt_rational(&disc) {
                let t1 = (-q1 + &s) / &two_a;
                let t2 = (-q1 - &s) / &two_a;
                let mut v = vec![t1, t2];
                v.sort();
                return v
                    .into_iter()
                    .map(|t| Direction::exact(Rational::one(), -t))
                    .collect();
            }
            let (f0, f1, fd) = (to_f64(q0), to_f64(q1), to_f64(&disc).sqrt());
            let mut v = [(-f1 + fd) / (2.0 * f0), (-f1 - fd) / (2.0 * f0)];
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v.iter().map(|t| Direction::approx(1.0, -t)).collect()
        }
        Quadratic::Approx([q0, q1, q2]) => {
            let disc = q1 * q1 - 4.0 * q0 * q2;
            if disc < 0.0 {
                return vec![];
            }
            let s = disc.sqrt();
            let mut v = [(-q1 + s) / (2.0 * q0), (-q1 - s) / (2.0 * q0)];
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v.iter().map(|t| Direction::approx(1.0, -t)).collect()
        }
    }
}

/// All real roots of the symbol with multiplicities, the linear factor first.
pub fn symbol_roots(c: &Cubic) -> Vec<SymbolRoot> {
    let fz = factor_cubic(c);
    let mut out = vec![SymbolRoot {
        direction: fz.linear.clone(),
        mult: 1,
        factor: FactorKind::Linear,
    }];
    for d in quadratic_roots(&fz.quadratic) {
        if let Some(r) = out.iter_mut().find(|r| r.direction.close(&d)) {
            r.mult += 1;
        } else {
            out.push(SymbolRoot {
                direction: d,
                mult: 1,
                factor: FactorKind::Quadratic,
            });
        }
    }
    out
}

/// A characteristic line `ν1 ξ1 + ν2 ξ2` of an equation at a point of
/// `M^(2)`, as a normalised frame vector (first non-zero entry equal to 1).
#[derive(Clone, Debug, PartialEq)]
pub struct CharLine {
    pub direction: Direction,
    /// Exact frame vector, absent for numerically located roots.
    pub coords: Option<[Rational; 5]>,
    pub numeric: [f64; 5],
    pub mult: u8,
    pub factor: FactorKind,
}

impl CharLine {
    pub fn is_exact(&self) -> bool {
        self.coords.is_some()
    }
}

fn normalize5(v: [Rational; 5]) -> [Rational; 5] {
    match v.iter().find(|x| !x.is_zero()) {
        Some(s) => {
            let s = s.clone();
            v.map(|x| x / &s)
        }
        None => v,
    }
}

/// The characteristic lines of `{F = 0}` at `m2`.
pub fn characteristic_lines(f: &MultiPoly, m2: &JetPoint) -> Result<Vec<CharLine>> {
    if !eval_at(f, m2).is_zero() {
        return Err(Error::NotOnEquation);
    }
    let sym = symbol(f, m2)?;
    let plane = lagrangian_plane(m2)?;
    let xi_f: [[f64; 5]; 2] = plane.xi.clone().map(|r| r.map(|x| to_f64(&x)));
    let mut lines: Vec<CharLine> = symbol_roots(&sym)
        .into_iter()
        .map(|r| {
            let (coords, numeric) = match &r.direction {
                Direction::Exact([l1, l2]) => {
                    let v = normalize5(plane.line(l1, l2));
                    let n = v.clone().map(|x| to_f64(&x));
                    (Some(v), n)
                }
                Direction::Approx([l1, l2]) => {
                    let v: [f64; 5] = std::array::from_fn(|i| l1 * xi_f[0][i] + l2 * xi_f[1][i]);
                    let s = v.iter().copied().find(|x| x.abs() > 1e-300).unwrap_or(1.0);
                    (None, v.map(|x| x / s))
                }
            };
            CharLine {
                direction: r.direction,
                coords,
                numeric,
                mult: r.mult,
                factor: r.factor,
            }
        })
        .collect();
    lines.sort_by(|a, b| {
        let ka = (a.factor != FactorKind::Linear, a.coords.is_none());
        let kb = (b.factor != FactorKind::Linear, b.coords.is_none());
        ka.cmp(&kb).then_with(|| match (&a.coords, &b.coords) {
            (Some(x), Some(y)) => y.cmp(x),
            _ => std::cmp::Ordering::Equal,
        })
    });
    Ok(lines)
}

/// Direction `(α1³, α1²α2, α1α2², α2³)` in `(p111, p112, p122, p222)` along
/// which the Lagrangian planes through the line `(λ1, λ2)` move, with
/// `α = (λ2, −λ1)` the covector annihilating the line.
pub fn cube_direction(l1: &Rational, l2: &Rational) -> [Rational; 4] {
    let (a1, a2) = (l2.clone(), -l1.clone());
    [
        &a1 * &a1 * &a1,
        &a1 * &a1 * &a2,
        &a1 * &a2 * &a2,
        &a2 * &a2 * &a2,
    ]
}

fn third_degree(f: &MultiPoly) -> u32 {
    f.terms()
        .map(|(m, _)| {
            Coordinate::THIRD
                .iter()
                .map(|c| m.exp(*c) as u32)
                .sum::<u32>()
        })
        .max()
        .unwrap_or(0)
}

/// `t ↦ F(m2 + t α³)` for the line `λ1 ξ1 + λ2 ξ2`, by interpolation at
/// `t = 0, …, deg`.
pub fn restriction_to_planes_through(f: &MultiPoly, l: &[Rational; 2], m2: &JetPoint) -> UniPoly {
    let dir = cube_direction(&l[0], &l[1]);
    let base = m2.third().expect("level-2 point");
    let deg = third_degree(f) as i64;
    let ts: Vec<Rational> = (0..=deg).map(int).collect();
    let ys: Vec<Rational> = ts
        .iter()
        .map(|t| {
            let p: [Rational; 4] = std::array::from_fn(|i| &base[i] + t * &dir[i]);
            eval_at(f, &m2.project(1).lift(&p))
        })
        .collect();
    interpolate(&ts, &ys)
}

/// Newton interpolation through `(x_i, y_i)`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut poly = UniPoly::new(vec![coef[n - 1].clone()]);
    for i in (0..n - 1).rev() {
        // poly = poly * (t - x_i) + coef[i]
        let mut next = vec![Rational::zero(); poly.0.len() + 1];
        for (k, c) in poly.0.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * &xs[i];
        }
        next[0] += &coef[i];
        poly = UniPoly::new(next);
    }
    poly
}

/// `F(m2 + t α³) ≡ 0` in `t`: every Lagrangian plane through the line lies
/// on the equation. Inexact lines are checked in floating point.
pub fn is_strong_characteristic(f: &MultiPoly, line: &CharLine, m2: &JetPoint) -> Result<bool> {
    let plane = lagrangian_plane(m2)?;
    match &line.coords {
        Some(v) => {
            let (l1, l2) = plane.coordinates_of(v).ok_or(Error::LineNotInPlane)?;
            Ok(restriction_to_planes_through(f, &[l1, l2], m2).is_zero())
        }
        None => {
            let [l1, l2] = [line.numeric[0], line.numeric[1]];
            let xi: [[f64; 5]; 2] = plane.xi.clone().map(|r| r.map(|x| to_f64(&x)));
            let scale = line
                .numeric
                .iter()
                .fold(0.0f64, |m, x| m.max(x.abs()))
                .max(1.0);
            for i in 0..5 {
                if (l1 * xi[0][i] + l2 * xi[1][i] - line.numeric[i]).abs() > 1e-9 * scale {
                    return Err(Error::LineNotInPlane);
                }
            }
            let (a1, a2) = (l2, -l1);
            let dir = [a1 * a1 * a1, a1 * a1 * a2, a1 * a2 * a2, a2 * a2 * a2];
            let base = m2.full().map(|x| to_f64(&x));
            for t in [0.5, 1.0, 2.0, -1.5] {
                let mut pt = base;
                for i in 0..4 {
                    pt[8 + i] += t * dir[i];
                }
                let (val, mag) = eval_with_magnitude(f, &pt);
                if val.abs() > 1e-8 * (1.0 + mag) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn eval_with_magnitude(f: &MultiPoly, pt: &[f64; 12]) -> (f64, f64) {
    let mut val = 0.0;
    let mut mag = 0.0;
    for (m, c) in f.terms() {
        let mut t = to_f64(c);
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t *= pt[i].powi(e as i32);
            }
        }
        val += t;
        mag += t.abs();
    }
    (val, mag)
}

/// Chooses how to place probe points on `{F = 0}` over a fixed base point:
/// solve for a distinguished `p_ijk` in which `F` is affine, or else find a
/// rational root in the variable of lowest degree.
#[derive(Clone, Debug)]
pub struct FiberSolver {
    g: MultiPoly,
    pub distinguished: Coordinate,
    pub affine: bool,
    pub free: [Coordinate; 3],
}

impl FiberSolver {
    pub fn new(f: &MultiPoly, m1: &JetPoint) -> Result<Self> {
        let subs: Vec<(Coordinate, Rational)> = Coordinate::LEVEL1
            .iter()
            .map(|c| (*c, m1.get(*c).cloned().unwrap_or_else(Rational::zero)))
            .collect();
        let g = f.specialize_all(&subs);
        let used: Vec<Coordinate> = Coordinate::THIRD
            .iter()
            .copied()
            .filter(|c| g.uses(*c))
            .collect();
        if used.is_empty() {
            return Err(Error::ZeroSymbol);
        }
        let canonical = |v: Coordinate| canonical_probes_for(v);
        let mut best: Option<(Coordinate, (bool, usize))> = None;
        for v in used.iter().copied().filter(|v| g.degree_in(*v) == 1) {
            let alpha = g.derivative(v);
            let constant = alpha.as_constant().is_some_and(|a| !a.is_zero());
            let good = canonical(v)
                .iter()
                .filter(|p| !eval4(&alpha, p).is_zero())
                .count();
            let key = (constant, good);
            if best.as_ref().is_none_or(|(_, k)| key > *k) {
                best = Some((v, key));
            }
        }
        let (distinguished, affine) = match best {
            Some((v, _)) => (v, true),
            None => (
                *used.iter().min_by_key(|v| g.degree_in(**v)).unwrap(),
                false,
            ),
        };
        Ok(FiberSolver {
            free: free_of(distinguished),
            g,
            distinguished,
            affine,
        })
    }

    pub fn canonical_probes(&self) -> Vec<[Rational; 4]> {
        canonical_probes_for(self.distinguished)
    }

    pub fn random_probes(&self, seed: u64, n: usize) -> Vec<[Rational; 4]> {
        let mut r = probe::rng(seed);
        (0..n)
            .map(|_| std::array::from_fn(|_| probe::small_rational(&mut r)))
            .collect()
    }

    /// Moves the probe onto `{F = 0}` by changing the distinguished coordinate.
    pub fn solve(&self, probe: &[Rational; 4]) -> Option<[Rational; 4]> {
        let k = self.distinguished.index() - 8;
        let mut p = probe.clone();
        let subs: Vec<(Coordinate, Rational)> = self
            .free
            .iter()
            .map(|c| (*c, probe[c.index() - 8].clone()))
            .collect();
        let h = self.g.specialize_all(&subs);
        let coeffs = h.collect(&[self.distinguished]);
        let deg = coeffs.keys().map(|k| k[0] as usize).max().unwrap_or(0);
        let mut c = vec![Rational::zero(); deg + 1];
        for (e, v) in &coeffs {
            c[e[0] as usize] = v
                .as_constant()
                .expect("only the distinguished variable remains");
        }
        let u = UniPoly::new(c);
        if u.is_zero() {
            return None;
        }
        let root = if self.affine {
            if u.degree() != Some(1) {
                return None;
            }
            -&u.0[0] / &u.0[1]
        } else {
            u.rational_roots().into_iter().next()?
        };
        p[k] = root;
        Some(p)
    }
}

fn free_of(v: Coordinate) -> [Coordinate; 3] {
    let f: Vec<Coordinate> = Coordinate::THIRD
        .iter()
        .copied()
        .filter(|c| *c != v)
        .collect();
    [f[0], f[1], f[2]]
}

fn canonical_probes_for(v: Coordinate) -> Vec<[Rational; 4]> {
    let free = free_of(v);
    let mut out = vec![std::array::from_fn(|_| Rational::zero())];
    for c in free {
        let mut p: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
        p[c.index() - 8] = Rational::one();
        out.push(p);
    }
    out
}

fn eval4(p: &MultiPoly, v: &[Rational; 4]) -> Rational {
    let mut full: [Rational; 12] = std::array::from_fn(|_| Rational::zero());
    full[8..].clone_from_slice(v);
    p.eval(&full)
}

/// One probe of the characteristic cone.
#[derive(Clone, Debug)]
pub struct ConeSample {
    pub point: JetPoint,
    pub lines: Vec<CharLine>,
    pub strong: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct Cone {
    pub point: JetPoint,
    pub distinguished: Coordinate,
    pub samples: Vec<ConeSample>,
    /// Three-dimensional subspaces of `C^1` containing one characteristic
    /// line from every sample, in discovery order (linear-factor lines first).
    pub linear_components: Vec<Distribution>,
}

impl Cone {
    /// The component swept by the linear symbol factor, if it is linear.
    pub fn linear_component(&self) -> Option<&Distribution> {
        self.linear_components.first()
    }
}

/// Characteristic lines at fibre points of `{F = 0}` over `m1`, and the
/// linear three-dimensional components they sweep.
///
/// `samples` are fibre probes; the distinguished coordinate of each is
/// recomputed so that the probe lies on the equation.
pub fn cone_sample(f: &MultiPoly, m1: &JetPoint, samples: &[[Rational; 4]]) -> Result<Cone> {
    let m1 = m1.project(1);
    let solver = FiberSolver::new(f, &m1)?;
    let mut pts: Vec<[Rational; 4]> = Vec::new();
    for s in samples {
        if let Some(p) = solver.solve(s) {
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    let independent = affine_rank(&pts);
    if independent < 4 {
        return Err(Error::InsufficientSamples(independent));
    }
    let mut out = Vec::new();
    for p in &pts {
        let m2 = m1.lift(p);
        let lines = match characteristic_lines(f, &m2) {
            Ok(l) => l,
            Err(Error::ZeroSymbol) => continue,
            Err(e) => return Err(e),
        };
        let strong = lines
            .iter()
            .map(|l| is_strong_characteristic(f, l, &m2))
            .collect::<Result<Vec<bool>>>()?;
        out.push(ConeSample {
            point: m2,
            lines,
            strong,
        });
    }
    let per_point: Vec<Vec<[Rational; 5]>> = out
        .iter()
        .map(|s| s.lines.iter().filter_map(|l| l.coords.clone()).collect())
        .collect();
    let linear_components = linear_components(&per_point)
        .into_iter()
        .map(|m| {
            let rows: Vec<[Rational; 5]> =
                m.rows.into_iter().map(|r| r.try_into().unwrap()).collect();
            Distribution::from_constant_frames(&rows)
        })
        .collect();
    Ok(Cone {
        point: m1,
        distinguished: solver.distinguished,
        samples: out,
        linear_components,
    })
}

/// Default probes: the four canonical ones and `n_random` seeded random ones.
pub fn default_samples(
    f: &MultiPoly,
    m1: &JetPoint,
    seed: u64,
    n_random: usize,
) -> Result<Vec<[Rational; 4]>> {
    let solver = FiberSolver::new(f, &m1.project(1))?;
    let mut s = solver.canonical_probes();
    s.extend(solver.random_probes(seed, n_random));
    Ok(s)
}

/// `1 + rank` of the differences: the number of affinely independent points.
fn affine_rank(pts: &[[Rational; 4]]) -> usize {
    if pts.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = pts[1..]
        .iter()
        .map(|p| (0..4).map(|i| &p[i] - &pts[0][i]).collect())
        .collect();
    if rows.is_empty() {
        return 1;
    }
    1 + RationalMatrix::new(rows, 4).rank()
}

/// Depth-first search for 3-dimensional spans containing one line per point.
fn linear_components(per_point: &[Vec<[Rational; 5]>]) -> Vec<RationalMatrix> {
    let mut found: Vec<RationalMatrix> = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    dfs(per_point, 0, &mut rows, &mut found);
    found
}

fn dfs(
    per_point: &[Vec<[Rational; 5]>],
    i: usize,
    rows: &mut Vec<Vec<Rational>>,
    found: &mut Vec<RationalMatrix>,
) {
    if i == per_point.len() {
        let m = RationalMatrix::new(rows.clone(), 5);
        if m.rank() == 3 {
            let r = m.rref();
            if !found.contains(&r) {
                found.push(r);
            }
        }
        return;
    }
    if per_point[i].is_empty() {
        dfs(per_point, i + 1, rows, found);
        return;
    }
    for line in &per_point[i] {
        rows.push(line.to_vec());
        if RationalMatrix::new(rows.clone(), 5).rank() <= 3 {
            dfs(per_point, i + 1, rows, found);
        }
        rows.pop();
    }
}
