//! Third-order Monge–Ampère equations: `E_D` from rank-3 sub-distributions
//! of `C^1`, `E_ω` from 2-forms, the Hankel-minor (Boillat) normal form,
//! Goursat detection and reconstruction of `D` from the characteristic cone.

use crate::algebra::{
    int, poly_det, poly_kernel, rank_kernel, Coordinate, MultiPoly, Rational, RationalMatrix,
};
use crate::jet::{eval_at, lagrangian_plane, symbolic_xi, Distribution, Frame, JetPoint};
use crate::metasymplectic::{is_threefold_orthogonal, orthogonal_complement_pair};
use crate::probe::{self, ProbeConfig};
use crate::symbol::{
    cone_sample, cube_direction, default_samples, discriminant_classify, is_strong_characteristic,
    symbol_roots, Cone, Direction, DiscriminantClass, FactorKind, FiberSolver,
};
use crate::{Error, Result};
use num_traits::{One, Zero};

const THIRD: [Coordinate; 4] = Coordinate::THIRD;

fn frames3(d: &Distribution) -> Result<Vec<Frame>> {
    if d.generic_rank() != 3 {
        return Err(Error::RankError(d.generic_rank()));
    }
    d.basis().frames().ok_or(Error::OutsideContact)
}

/// `F = det(g1; g2; g3; ξ1; ξ2)`, divided by its content. `{F = 0}` is the
/// set of Lagrangian planes meeting `D` non-trivially.
pub fn build_ed(d: &Distribution) -> Result<MultiPoly> {
    let g = frames3(d)?;
    let xi = symbolic_xi();
    let rows: Vec<Vec<MultiPoly>> = g.iter().chain(xi.iter()).map(|r| r.to_vec()).collect();
    let f = poly_det(&rows);
    if f.is_constant() {
        return Err(Error::TrivialEquation);
    }
    Ok(f.primitive())
}

/// Values of the level-1 coordinates of `m1` as substitutions.
fn level1_subs(m1: &JetPoint) -> Vec<(Coordinate, Rational)> {
    Coordinate::LEVEL1
        .iter()
        .map(|c| (*c, m1.get(*c).cloned().unwrap_or_else(Rational::zero)))
        .collect()
}

/// `F` with the level-1 coordinates frozen at `m1`.
pub fn at_base(f: &MultiPoly, m1: &JetPoint) -> MultiPoly {
    f.specialize_all(&level1_subs(m1))
}

/// `F ∝ G` over the ring of functions on `M^(1)`.
pub fn proportional(f: &MultiPoly, g: &MultiPoly) -> bool {
    f.proportional_over(g, &THIRD)
}

/// Coefficients on the coframe `dx1, dx2, du, dp1, dp2, dp11, dp12, dp22`.
pub type OneForm = [MultiPoly; 8];

pub const COFRAME: [&str; 8] = ["dx1", "dx2", "du", "dp1", "dp2", "dp11", "dp12", "dp22"];

/// An antisymmetric table `w[a][b]`, the form being `Σ_{a<b} w_ab e^a ∧ e^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForm {
    w: [[MultiPoly; 8]; 8],
}

impl TwoForm {
    pub fn zero() -> Self {
        TwoForm {
            w: std::array::from_fn(|_| std::array::from_fn(|_| MultiPoly::zero())),
        }
    }

    /// Adds `c e^a ∧ e^b`.
    pub fn add_term(&mut self, a: usize, b: usize, c: &MultiPoly) {
        self.w[a][b] += c;
        self.w[b][a] -= c;
    }

    pub fn get(&self, a: usize, b: usize) -> &MultiPoly {
        &self.w[a][b]
    }

    pub fn wedge(r1: &OneForm, r2: &OneForm) -> TwoForm {
        let mut t = TwoForm::zero();
        for a in 0..8 {
            for b in a + 1..8 {
                let c = &(&r1[a] * &r2[b]) - &(&r1[b] * &r2[a]);
                if !c.is_zero() {
                    t.add_term(a, b, &c);
                }
            }
        }
        t
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..8).all(|a| (0..8).all(|b| (&self.w[a][b] + &self.w[b][a]).is_zero()))
    }
}

/// Pull-back of the coframe to a Lagrangian plane, as `(α(∂1), α(∂2))`.
fn coframe_on_plane() -> [[MultiPoly; 2]; 8] {
    use Coordinate::*;
    let v = MultiPoly::var;
    [
        [MultiPoly::one(), MultiPoly::zero()],
        [MultiPoly::zero(), MultiPoly::one()],
        [v(P1), v(P2)],
        [v(P11), v(P12)],
        [v(P12), v(P22)],
        [v(P111), v(P112)],
        [v(P112), v(P122)],
        [v(P122), v(P222)],
    ]
}

/// The `dx1 ∧ dx2` coefficient of `w` restricted to the Lagrangian planes.
pub fn build_e_omega(w: &TwoForm) -> Result<MultiPoly> {
    let alpha = coframe_on_plane();
    let mut f = MultiPoly::zero();
    for a in 0..8 {
        for b in a + 1..8 {
            if w.w[a][b].is_zero() {
                continue;
            }
            let minor = &(&alpha[a][0] * &alpha[b][1]) - &(&alpha[a][1] * &alpha[b][0]);
            f += &(&w.w[a][b] * &minor);
        }
    }
    if f.is_zero() {
        return Err(Error::TrivialEquation);
    }
    Ok(f)
}

/// Values of a 1-form on the adapted frame `D1, D2, ∂p11, ∂p12, ∂p22`.
pub fn restrict_to_contact(r: &OneForm) -> Frame {
    use Coordinate::*;
    let v = MultiPoly::var;
    let d1 = &(&(&r[0] + &(&v(P1) * &r[2])) + &(&v(P11) * &r[3])) + &(&v(P12) * &r[4]);
    let d2 = &(&(&r[1] + &(&v(P2) * &r[2])) + &(&v(P12) * &r[3])) + &(&v(P22) * &r[4]);
    [d1, d2, r[5].clone(), r[6].clone(), r[7].clone()]
}

/// `ker ρ1 ∩ ... ∩ C^1`.
pub fn kernel_in_contact(rhos: &[OneForm]) -> Distribution {
    let rows: Vec<Vec<MultiPoly>> = rhos
        .iter()
        .map(|r| restrict_to_contact(r).to_vec())
        .collect();
    let frames: Vec<Frame> = poly_kernel(&rows, 5)
        .into_iter()
        .map(|v| v.try_into().unwrap())
        .collect();
    Distribution::from_frames(&frames)
}

/// `F = A·(M3, −M2, M1) + B·(p111, p112, p122, p222) + C` with the Hankel
/// minors `M1 = p111 p122 − p112²`, `M2 = p111 p222 − p112 p122`,
/// `M3 = p112 p222 − p122²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoillatForm {
    pub a: [MultiPoly; 3],
    pub b: [MultiPoly; 4],
    pub c: MultiPoly,
}

fn mono(e: [u8; 4]) -> MultiPoly {
    THIRD.iter().zip(e).fold(MultiPoly::one(), |acc, (c, k)| {
        &acc * &MultiPoly::var(*c).pow(k as u32)
    })
}

fn monomial_name(e: &[u8]) -> String {
    let parts: Vec<String> = THIRD
        .iter()
        .zip(e)
        .filter(|(_, k)| **k > 0)
        .map(|(c, k)| {
            if *k == 1 {
                c.name().to_string()
            } else {
                format!("{}^{}", c.name(), k)
            }
        })
        .collect();
    parts.join("*")
}

/// The three Hankel minors `(M1, M2, M3)`.
pub fn hankel_minors() -> [MultiPoly; 3] {
    [
        &mono([1, 0, 1, 0]) - &mono([0, 2, 0, 0]),
        &mono([1, 0, 0, 1]) - &mono([0, 1, 1, 0]),
        &mono([0, 1, 0, 1]) - &mono([0, 0, 2, 0]),
    ]
}

impl BoillatForm {
    pub fn is_quasilinear(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    pub fn to_equation(&self) -> MultiPoly {
        let [m1, m2, m3] = hankel_minors();
        let mut f = &(&(&self.a[0] * &m3) - &(&self.a[1] * &m2)) + &(&self.a[2] * &m1);
        for (k, c) in self.b.iter().zip(THIRD) {
            f += &(k * &MultiPoly::var(c));
        }
        &f + &self.c
    }

    /// `(∂F/∂p111, …, ∂F/∂p222)` of the equation, which is the symbol.
    pub fn symbol(&self) -> [MultiPoly; 4] {
        THIRD.map(|c| self.to_equation().derivative(c))
    }
}

/// Writes `F` in the Hankel-minor basis, or names a monomial in
/// `p111, …, p222` that no Monge–Ampère equation can contain.
pub fn boillat_decompose(f: &MultiPoly) -> Result<BoillatForm> {
    let coeffs = f.collect(&THIRD);
    let get = |e: [u8; 4]| {
        coeffs
            .get(e.as_slice())
            .cloned()
            .unwrap_or_else(MultiPoly::zero)
    };
    for e in coeffs.keys() {
        let deg: u8 = e.iter().sum();
        let allowed = deg <= 1
            || matches!(
                e.as_slice(),
                [1, 0, 1, 0]
                    | [0, 2, 0, 0]
                    | [1, 0, 0, 1]
                    | [0, 1, 1, 0]
                    | [0, 1, 0, 1]
                    | [0, 0, 2, 0]
            );
        if !allowed {
            return Err(Error::NotMae(monomial_name(e)));
        }
    }
    let pairs = [
        ([0, 1, 0, 1], [0, 0, 2, 0]),
        ([0, 1, 1, 0], [1, 0, 0, 1]),
        ([1, 0, 1, 0], [0, 2, 0, 0]),
    ];
    for (x, y) in pairs {
        if !(&get(x) + &get(y)).is_zero() {
            return Err(Error::NotMae(monomial_name(&y)));
        }
    }
    Ok(BoillatForm {
        a: [get([0, 1, 0, 1]), get([0, 1, 1, 0]), get([1, 0, 1, 0])],
        b: [
            get([1, 0, 0, 0]),
            get([0, 1, 0, 0]),
            get([0, 0, 1, 0]),
            get([0, 0, 0, 1]),
        ],
        c: get([0, 0, 0, 0]),
    })
}

/// `D = ⟨a D1 + b D2 + f, V1, V2⟩` with `f`, `V1`, `V2` vertical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiLinearNormalForm {
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub f: [MultiPoly; 3],
    pub v: [[MultiPoly; 3]; 2],
}

pub fn quasilinear_normal_form(d: &Distribution) -> Result<QuasiLinearNormalForm> {
    let g = frames3(d)?;
    let Some(h) = g.iter().find(|r| !(r[0].is_zero() && r[1].is_zero())) else {
        return Err(Error::NormalFormError("no horizontal generator".into()));
    };
    for r in &g {
        if !(&(&h[0] * &r[1]) - &(&h[1] * &r[0])).is_zero() {
            return Err(Error::NormalFormError("horizontal part has rank 2".into()));
        }
    }
    let vert = d
        .vertical_part()?
        .basis()
        .frames()
        .ok_or(Error::OutsideContact)?;
    if vert.len() != 2 {
        return Err(Error::NormalFormError(format!(
            "vertical rank {} (expected 2)",
            vert.len()
        )));
    }
    let v3 = |f: &Frame| [f[2].clone(), f[3].clone(), f[4].clone()];
    Ok(QuasiLinearNormalForm {
        a: h[0].clone(),
        b: h[1].clone(),
        f: v3(h),
        v: [v3(&vert[0]), v3(&vert[1])],
    })
}

/// The Boillat form of `E_D` for `D` with two-dimensional vertical part:
/// `A = 0`, `B` from the 2×2 minors of the vertical generators and `C` the
/// 3×3 determinant of `(f; V1; V2)`.
pub fn quasilinear_coefficients(d: &Distribution) -> Result<BoillatForm> {
    Ok(quasilinear_normal_form(d)?.boillat())
}

impl QuasiLinearNormalForm {
    /// `⟨a D1 + b D2 + f, V1, V2⟩`.
    pub fn distribution(&self) -> Distribution {
        let h: Frame = [
            self.a.clone(),
            self.b.clone(),
            self.f[0].clone(),
            self.f[1].clone(),
            self.f[2].clone(),
        ];
        let v = |k: usize| -> Frame {
            [
                MultiPoly::zero(),
                MultiPoly::zero(),
                self.v[k][0].clone(),
                self.v[k][1].clone(),
                self.v[k][2].clone(),
            ]
        };
        Distribution::from_frames(&[h, v(0), v(1)])
    }

    pub fn boillat(&self) -> BoillatForm {
        let nf = self;
        let [r1, s1, t1] = &nf.v[0];
        let [r2, s2, t2] = &nf.v[1];
        let m = |x1: &MultiPoly, y1: &MultiPoly, x2: &MultiPoly, y2: &MultiPoly| {
            &(x1 * y2) - &(x2 * y1)
        };
        let st = m(s1, t1, s2, t2);
        let rt = m(r1, t1, r2, t2);
        let rs = m(r1, s1, r2, s2);
        let (a, b) = (&nf.a, &nf.b);
        let rows = vec![nf.f.to_vec(), nf.v[0].to_vec(), nf.v[1].to_vec()];
        BoillatForm {
            a: std::array::from_fn(|_| MultiPoly::zero()),
            b: [
                -(a * &st),
                &(a * &rt) - &(b * &st),
                &(b * &rt) - &(a * &rs),
                -(b * &rs),
            ],
            c: poly_det(&rows),
        }
    }
}

/// `F = det((p1** − f1); (p2** − f2); (R, S, T))` with
/// `p1** = (p111, p112, p122)` and `p2** = (p112, p122, p222)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoursatForm {
    /// `(f111, f112, f122)`.
    pub f1: [MultiPoly; 3],
    /// `(f211, f212, f222)`.
    pub f2: [MultiPoly; 3],
    /// `(R, S, T)`.
    pub a: [MultiPoly; 3],
    /// `f112 = f211` and `f122 = f212`.
    pub reduced: bool,
}

impl GoursatForm {
    pub fn to_equation(&self) -> MultiPoly {
        use Coordinate::*;
        let v = MultiPoly::var;
        let p1 = [v(P111), v(P112), v(P122)];
        let p2 = [v(P112), v(P122), v(P222)];
        let rows = vec![
            (0..3).map(|i| &p1[i] - &self.f1[i]).collect(),
            (0..3).map(|i| &p2[i] - &self.f2[i]).collect(),
            self.a.to_vec(),
        ];
        poly_det(&rows)
    }
}

/// The Goursat form of `E_D` for `D` with one-dimensional vertical part.
/// The symmetric (reduced) shape is used when `RT − S²` is a non-zero
/// constant, so that it can be reached without denominators.
pub fn goursat_form(d: &Distribution) -> Result<GoursatForm> {
    let g = frames3(d)?;
    let vert = d
        .vertical_part()?
        .basis()
        .frames()
        .ok_or(Error::OutsideContact)?;
    if vert.len() != 1 {
        return Err(Error::NotGoursat(format!(
            "vertical rank {} (expected 1)",
            vert.len()
        )));
    }
    let a = [vert[0][2].clone(), vert[0][3].clone(), vert[0][4].clone()];
    let mut found = None;
    'outer: for i in 0..g.len() {
        for j in i + 1..g.len() {
            let det = &(&g[i][0] * &g[j][1]) - &(&g[i][1] * &g[j][0]);
            if let Some(k) = det.as_constant().filter(|k| !k.is_zero()) {
                found = Some((i, j, k.recip()));
                break 'outer;
            }
        }
    }
    let Some((i, j, inv)) = found else {
        return Err(Error::NormalFormError(
            "horizontal part is not unimodular".into(),
        ));
    };
    let inv = MultiPoly::constant(inv);
    let combo = |ci: &MultiPoly, cj: &MultiPoly| -> [MultiPoly; 3] {
        std::array::from_fn(|k| &(&(ci * &g[i][k + 2]) + &(cj * &g[j][k + 2])) * &inv)
    };
    // E1 has horizontal part (1, 0), E2 has (0, 1).
    let mut f1 = combo(&g[j][1], &-g[i][1].clone());
    let mut f2 = combo(&-g[j][0].clone(), &g[i][0]);
    let [r, s, t] = &a;
    let delta = &(r * t) - &(s * s);
    let reduced = match delta.as_constant().filter(|k| !k.is_zero()) {
        Some(k) => {
            // α S − β R = f211 − f112, α T − β S = f212 − f122.
            let inv = MultiPoly::constant(k.recip());
            let e1 = &f2[0] - &f1[1];
            let e2 = &f2[1] - &f1[2];
            let alpha = &(&(r * &e2) - &(s * &e1)) * &inv;
            let beta = &(&(s * &e2) - &(t * &e1)) * &inv;
            for k in 0..3 {
                f1[k] += &(&alpha * &a[k]);
                f2[k] += &(&beta * &a[k]);
            }
            debug_assert!(f1[1] == f2[0] && f1[2] == f2[1]);
            true
        }
        None => false,
    };
    Ok(GoursatForm { f1, f2, a, reduced })
}

fn quasilinear_parts(f: &MultiPoly) -> Result<([MultiPoly; 4], MultiPoly)> {
    if THIRD.iter().any(|c| f.degree_in(*c) > 1)
        || f.collect(&THIRD).keys().any(|e| e.iter().sum::<u8>() > 1)
    {
        return Err(Error::NormalFormError(
            "equation is not quasi-linear".into(),
        ));
    }
    let coeffs = THIRD.map(|c| f.derivative(c));
    let e = f.specialize_all(&THIRD.map(|c| (c, Rational::zero())));
    Ok((coeffs, e))
}

/// The rank-3 distribution swept by the lines of a quasi-linear `{F = 0}`
/// whose horizontal direction is `μ1 D1 + μ2 D2`: the joint kernel of the
/// covectors on `C^1` that vanish on all of those lines.
pub fn line_family_span(f: &MultiPoly, mu: &[MultiPoly; 2]) -> Result<Distribution> {
    let ([a, b, c, d], e) = quasilinear_parts(f)?;
    let z = MultiPoly::zero;
    let [m1, m2] = mu.clone();
    // Unknowns (r1, r2, r11, r12, r22, λ).
    let rows = vec![
        vec![z(), z(), m1.clone(), z(), z(), -a],
        vec![z(), z(), m2.clone(), m1.clone(), z(), -b],
        vec![z(), z(), z(), m2.clone(), m1.clone(), -c],
        vec![z(), z(), z(), z(), m2.clone(), -d],
        vec![m1, m2, z(), z(), z(), -e],
    ];
    let rhos: Vec<Vec<MultiPoly>> = poly_kernel(&rows, 6)
        .into_iter()
        .map(|mut v| {
            v.truncate(5);
            v
        })
        .collect();
    if rhos.len() != 2 {
        return Err(Error::NotDecomposable(format!(
            "direction sweeps no 3-dimensional distribution ({} covectors)",
            rhos.len()
        )));
    }
    let frames: Vec<Frame> = poly_kernel(&rhos, 5)
        .into_iter()
        .map(|v| v.try_into().unwrap())
        .collect();
    let dist = Distribution::from_frames(&frames);
    if dist.generic_rank() != 3 {
        return Err(Error::RankError(dist.generic_rank()));
    }
    Ok(dist)
}

/// Outcome of [`detect_goursat`].
#[derive(Clone, Debug)]
pub enum GoursatClass {
    /// `D1` is the linear component (absent when only inexact lines were
    /// found); the complements complete it to an orthogonal triple.
    QuasiLinear {
        d1: Option<Distribution>,
        complements: Option<(Distribution, Distribution)>,
        inexact: bool,
    },
    FullyNonlinearGoursat {
        d: Distribution,
        form: Option<GoursatForm>,
    },
    MaeNotGoursat,
    NotMae {
        monomial: String,
    },
}

impl GoursatClass {
    pub fn name(&self) -> &'static str {
        match self {
            GoursatClass::QuasiLinear { .. } => "quasi-linear",
            GoursatClass::FullyNonlinearGoursat { .. } => "fully-nonlinear-goursat",
            GoursatClass::MaeNotGoursat => "mae-not-goursat",
            GoursatClass::NotMae { .. } => "not-mae",
        }
    }

    /// Every distribution attached to the class.
    pub fn distributions(&self) -> Vec<Distribution> {
        match self {
            GoursatClass::QuasiLinear {
                d1, complements, ..
            } => {
                let mut v: Vec<Distribution> = d1.iter().cloned().collect();
                if let Some((a, b)) = complements {
                    v.push(a.clone());
                    v.push(b.clone());
                }
                v
            }
            GoursatClass::FullyNonlinearGoursat { d, .. } => vec![d.clone()],
            _ => vec![],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub class: GoursatClass,
    pub boillat: Option<BoillatForm>,
    /// Level-1 point where the cone was probed.
    pub base: Option<JetPoint>,
}

/// Runs the cone at successive base points until one is regular.
fn probe_cone(f: &MultiPoly, cfg: &ProbeConfig) -> Result<Cone> {
    let mut last = Error::ZeroSymbol;
    for base in probe::base_points(cfg.base.as_ref()) {
        let samples = match default_samples(f, &base, cfg.seed, cfg.random_probes) {
            Ok(s) => s,
            Err(e) => {
                last = e;
                continue;
            }
        };
        match cone_sample(f, &base, &samples) {
            Ok(c) if !c.samples.is_empty() => return Ok(c),
            Ok(_) => last = Error::ZeroSymbol,
            Err(e @ (Error::ZeroSymbol | Error::InsufficientSamples(_))) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Linear components of the cone with `E_D ∝ F` over the base point.
fn verified_components(f: &MultiPoly, cone: &Cone) -> Vec<Distribution> {
    let fb = at_base(f, &cone.point);
    cone.linear_components
        .iter()
        .filter(|d| build_ed(d).is_ok_and(|g| proportional(&fb, &g)))
        .cloned()
        .collect()
}

fn vertical_rank(d: &Distribution) -> Result<usize> {
    Ok(d.vertical_part()?.generic_rank())
}

/// Classifies `{F = 0}` as quasi-linear, fully nonlinear of Goursat type,
/// a Monge–Ampère equation of another kind, or not Monge–Ampère at all.
/// Distributions are computed over the probed base point.
pub fn detect_goursat(f: &MultiPoly, cfg: &ProbeConfig) -> Result<Classification> {
    let boillat = match boillat_decompose(f) {
        Ok(b) => b,
        Err(Error::NotMae(m)) => {
            return Ok(Classification {
                class: GoursatClass::NotMae { monomial: m },
                boillat: None,
                base: None,
            })
        }
        Err(e) => return Err(e),
    };
    let cone = probe_cone(f, cfg)?;
    let comps = verified_components(f, &cone);
    let base = Some(cone.point.clone());
    let Some(d) = comps.into_iter().next() else {
        let class = if boillat.is_quasilinear() {
            GoursatClass::QuasiLinear {
                d1: None,
                complements: None,
                inexact: true,
            }
        } else {
            GoursatClass::MaeNotGoursat
        };
        return Ok(Classification {
            class,
            boillat: Some(boillat),
            base,
        });
    };
    let class = match vertical_rank(&d)? {
        2 => {
            let complements = orthogonal_complement_pair(&d).ok();
            GoursatClass::QuasiLinear {
                d1: Some(d),
                complements,
                inexact: false,
            }
        }
        1 => {
            let form = goursat_form(&d).ok();
            GoursatClass::FullyNonlinearGoursat { d, form }
        }
        r => {
            return Err(Error::NotGoursat(format!(
                "linear component with vertical rank {r}"
            )))
        }
    };
    Ok(Classification {
        class,
        boillat: Some(boillat),
        base,
    })
}

#[derive(Clone, Debug)]
pub struct OrthogonalTriple {
    pub distributions: [Distribution; 3],
    /// Symbol factors `λ1 ξ1 + λ2 ξ2` in the order of the triple.
    pub roots: [[Rational; 2]; 3],
    pub base: JetPoint,
}

/// For a quasi-linear `F` whose symbol splits into real linear factors, the
/// three distributions swept by the corresponding line families. Simple
/// roots come first, the linear symbol factor before the quadratic ones.
pub fn decompose_orthogonal_triple(f: &MultiPoly, cfg: &ProbeConfig) -> Result<OrthogonalTriple> {
    let bf = boillat_decompose(f)?;
    if !bf.is_quasilinear() {
        return Err(Error::NormalFormError(
            "equation is not quasi-linear".into(),
        ));
    }
    let sym = bf.symbol();
    let mut last = Error::ZeroSymbol;
    for base in probe::base_points(cfg.base.as_ref()) {
        let cubic = sym.clone().map(|s| eval_at(&s, &base));
        if cubic.iter().all(|x| x.is_zero()) {
            continue;
        }
        if discriminant_classify(&cubic).1 == DiscriminantClass::OneReal {
            return Err(Error::NotFullyDecomposable);
        }
        let mut roots = symbol_roots(&cubic);
        if roots.iter().any(|r| !r.direction.is_exact()) {
            return Err(Error::NotDecomposable("irrational roots".into()));
        }
        roots.sort_by_key(|r| (r.mult, r.factor != FactorKind::Linear));
        let dirs: Vec<[Rational; 2]> = roots
            .iter()
            .flat_map(|r| match &r.direction {
                Direction::Exact(l) => std::iter::repeat_n(l.clone(), r.mult as usize),
                Direction::Approx(_) => unreachable!(),
            })
            .collect();
        let fb = at_base(f, &base);
        let mut out = Vec::new();
        for l in &dirs {
            let mu = [
                MultiPoly::constant(l[0].clone()),
                MultiPoly::constant(l[1].clone()),
            ];
            match line_family_span(&fb, &mu) {
                Ok(d) if build_ed(&d).is_ok_and(|g| proportional(&fb, &g)) => out.push(d),
                Ok(_) => {
                    last = Error::NormalFormError(
                        "line family does not reproduce the equation".into(),
                    );
                    break;
                }
                Err(e) => {
                    last = e;
                    break;
                }
            }
        }
        if out.len() == 3 {
            let distributions: [Distribution; 3] = out.try_into().unwrap();
            return Ok(OrthogonalTriple {
                distributions,
                roots: dirs.try_into().unwrap(),
                base,
            });
        }
    }
    Err(last)
}

/// `true` when the triple is pairwise orthogonal in the sense of `Ω̃`, a
/// repeated member being allowed to coincide.
pub fn triple_is_orthogonal(t: &[Distribution; 3]) -> Result<bool> {
    is_threefold_orthogonal(&t[0], &t[1], &t[2])
}

#[derive(Clone, Debug)]
pub struct RecoveredDistribution {
    pub distribution: Distribution,
    /// Two covectors on `C^1` (adapted frame) cutting out the distribution.
    pub rho: [[Rational; 5]; 2],
    /// The rank certificate at every probe, on the characteristic line in `D`.
    pub certificate: Vec<Rational>,
    pub base: JetPoint,
    pub distinguished: Coordinate,
}

/// Reconstructs `D` with `{F = 0} = E_D` over a base point from the linear
/// symbol factor's characteristic lines at the fibre probes.
pub fn recover_distribution(f: &MultiPoly, cfg: &ProbeConfig) -> Result<RecoveredDistribution> {
    let cone = probe_cone(f, cfg)?;
    let solver = FiberSolver::new(f, &cone.point)?;
    if !solver.affine {
        return Err(Error::NotGoursat(
            "equation is not affine in any third-order coordinate".into(),
        ));
    }
    let d = verified_components(f, &cone)
        .into_iter()
        .next()
        .ok_or_else(|| {
            Error::NotGoursat(if cone.linear_components.is_empty() {
                "linear-factor lines span more than three dimensions".into()
            } else {
                "no linear component reproduces the equation".into()
            })
        })?;
    let m = d
        .constant_frames()
        .expect("cone components have constant frames");
    let (_, ker) = rank_kernel(&m);
    let rho: [[Rational; 5]; 2] = [
        ker[0].clone().try_into().unwrap(),
        ker[1].clone().try_into().unwrap(),
    ];
    let v = cone.distinguished;
    let mut certificate = Vec::new();
    for s in &cone.samples {
        let Some(line) = s
            .lines
            .iter()
            .find(|l| l.coords.as_ref().is_some_and(|c| in_row_space(&m, c)))
        else {
            continue;
        };
        let Direction::Exact([l1, l2]) = &line.direction else {
            continue;
        };
        certificate.push(rank_certificate(&rho, l1, l2, v, &s.point)?);
    }
    if certificate.iter().all(|x| x.is_zero()) {
        return Err(Error::DiscriminantVanishes);
    }
    Ok(RecoveredDistribution {
        distribution: d,
        rho,
        certificate,
        base: cone.point,
        distinguished: v,
    })
}

fn in_row_space(m: &RationalMatrix, v: &[Rational; 5]) -> bool {
    let mut rows = m.rows.clone();
    rows.push(v.to_vec());
    RationalMatrix::new(rows, 5).rank() == m.rank()
}

/// `det ∂(ρ1(ℓ), ρ2(ℓ)) / ∂(β, v)` for `ℓ = ξ1 + β ξ2` (or `β ξ1 + ξ2`
/// when the line is `ξ2`), `v` the solved-for third-order coordinate.
fn rank_certificate(
    rho: &[[Rational; 5]; 2],
    l1: &Rational,
    l2: &Rational,
    v: Coordinate,
    m2: &JetPoint,
) -> Result<Rational> {
    let plane = lagrangian_plane(m2)?;
    let unit = |k: usize| -> [Rational; 5] {
        std::array::from_fn(|i| {
            if i == k {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    };
    let zero5 = || std::array::from_fn(|_| Rational::zero());
    // ∂ξ1/∂v and ∂ξ2/∂v.
    let k = v.index() - 8;
    let dxi1 = if k < 3 { unit(2 + k) } else { zero5() };
    let dxi2 = if k > 0 { unit(1 + k) } else { zero5() };
    let (d_beta, c) = if !l1.is_zero() {
        (plane.xi[1].clone(), [Rational::one(), l2 / l1])
    } else {
        (plane.xi[0].clone(), [Rational::zero(), Rational::one()])
    };
    let d_v: [Rational; 5] = std::array::from_fn(|i| &c[0] * &dxi1[i] + &c[1] * &dxi2[i]);
    let pair = |r: &[Rational; 5], x: &[Rational; 5]| {
        r.iter()
            .zip(x)
            .fold(Rational::zero(), |s, (a, b)| s + a * b)
    };
    Ok(pair(&rho[0], &d_beta) * pair(&rho[1], &d_v) - pair(&rho[0], &d_v) * pair(&rho[1], &d_beta))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recoverability {
    pub recoverable: bool,
    /// A point of `M^(2)` through a characteristic line but off the equation.
    pub witness: Option<JetPoint>,
    pub checked: usize,
}

/// Samples Lagrangian planes through characteristic lines of `{F = 0}` and
/// checks that each lies on the equation.
pub fn check_recoverable(f: &MultiPoly, cfg: &ProbeConfig) -> Result<Recoverability> {
    boillat_decompose(f)?;
    let cone = probe_cone(f, cfg)?;
    let ts = [int(1), int(-1), int(2), crate::algebra::rat(1, 2), int(3)];
    let mut checked = 0;
    for s in &cone.samples {
        let base = s.point.third().expect("level-2 sample");
        for line in &s.lines {
            match &line.direction {
                Direction::Exact([l1, l2]) => {
                    let dir = cube_direction(l1, l2);
                    for t in &ts {
                        let p: [Rational; 4] = std::array::from_fn(|i| &base[i] + t * &dir[i]);
                        let m2 = cone.point.lift(&p);
                        checked += 1;
                        if !eval_at(f, &m2).is_zero() {
                            return Ok(Recoverability {
                                recoverable: false,
                                witness: Some(m2),
                                checked,
                            });
                        }
                    }
                }
                Direction::Approx(_) => {
                    checked += 1;
                    if !is_strong_characteristic(f, line, &s.point)? {
                        return Ok(Recoverability {
                            recoverable: false,
                            witness: Some(s.point.clone()),
                            checked,
                        });
                    }
                }
            }
        }
    }
    Ok(Recoverability {
        recoverable: true,
        witness: None,
        checked,
    })
}
