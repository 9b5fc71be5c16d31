//! First integrals of distributions on `M^(1)` and intermediate integrals
//! of third-order equations.

use crate::algebra::{rank_kernel, Coordinate, Monomial, MultiPoly, Rational, RationalMatrix};
use crate::jet::{Distribution, JetPoint, VectorField};
use crate::monge_ampere::detect_goursat;
use crate::probe::{self, ProbeConfig};
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// `X(f) = 0` for every generator `X` of `D`.
pub fn is_first_integral(f: &MultiPoly, d: &Distribution) -> bool {
    d.generators().iter().all(|x| x.apply(f).is_zero())
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntegralVerdict {
    Yes,
    /// No Lagrangian plane at the probed points is tangent to a level set.
    YesVacuous,
    /// A point of a prolonged level set lying off the equation.
    No(JetPoint),
}

impl IntegralVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            IntegralVerdict::Yes => "yes",
            IntegralVerdict::YesVacuous => "vacuous",
            IntegralVerdict::No(_) => "no",
        }
    }
}

fn check_level(f: &MultiPoly) -> Result<()> {
    if f.level() > 1 {
        return Err(Error::NotOnFirstProlongation(f.to_string()));
    }
    Ok(())
}

/// Level-1 probe points: the base schedule head and seeded random points.
fn level1_probes(cfg: &ProbeConfig) -> Vec<JetPoint> {
    let mut pts: Vec<JetPoint> = probe::base_points(cfg.base.as_ref())
        .into_iter()
        .take(3)
        .collect();
    for p in probe::sample_points(cfg.seed, 3) {
        pts.push(JetPoint::new(1, p[..8].to_vec()).expect("eight values"));
    }
    pts
}

/// The affine family of `(p111, p112, p122, p222)` with `df|_L = 0` over
/// `m1`: a particular solution and a kernel basis, or `None` if empty.
fn tangent_planes(f: &MultiPoly, m1: &JetPoint) -> Option<([Rational; 4], Vec<[Rational; 4]>)> {
    use Coordinate::*;
    let full = m1.full();
    let ev = |p: &MultiPoly| p.eval(&full);
    let d1 = ev(&VectorField::total(0).apply(f));
    let d2 = ev(&VectorField::total(1).apply(f));
    let (f11, f12, f22) = (
        ev(&f.derivative(P11)),
        ev(&f.derivative(P12)),
        ev(&f.derivative(P22)),
    );
    let z = Rational::zero();
    // df(ξ1) = d1 + f11 p111 + f12 p112 + f22 p122, df(ξ2) = d2 + f11 p112 + f12 p122 + f22 p222.
    let rows = vec![
        vec![f11.clone(), f12.clone(), f22.clone(), z.clone(), d1],
        vec![z.clone(), f11, f12, f22, d2],
    ];
    let (_, ker) = rank_kernel(&RationalMatrix::new(rows, 5));
    // Kernel vectors with last coordinate 1 ↔ affine solutions.
    let part = ker.iter().find(|v| !v[4].is_zero())?;
    let s = part[4].clone();
    let particular: [Rational; 4] = std::array::from_fn(|i| &part[i] / &s);
    let homogeneous: Vec<[Rational; 4]> = ker
        .iter()
        .map(|v| {
            let k = &v[4] / &part[4];
            std::array::from_fn(|i| &v[i] - &k * &part[i])
        })
        .filter(|v: &[Rational; 4]| v.iter().any(|x| !x.is_zero()))
        .collect();
    Some((particular, independent(homogeneous)))
}

fn independent(vs: Vec<[Rational; 4]>) -> Vec<[Rational; 4]> {
    let mut out: Vec<[Rational; 4]> = Vec::new();
    for v in vs {
        let mut rows: Vec<Vec<Rational>> = out.iter().map(|r| r.to_vec()).collect();
        rows.push(v.to_vec());
        if RationalMatrix::new(rows, 4).rank() > out.len() {
            out.push(v);
        }
    }
    out
}

/// Checks that every second-order prolongation point of the level sets of
/// `f` through the probes lies on `{F = 0}`. The family is substituted
/// symbolically, with `p111, …, p222` reused as the family parameters.
pub fn is_intermediate_integral(
    f: &MultiPoly,
    eq: &MultiPoly,
    cfg: &ProbeConfig,
) -> Result<IntegralVerdict> {
    check_level(f)?;
    let mut any = false;
    for m1 in level1_probes(cfg) {
        let Some((p0, basis)) = tangent_planes(f, &m1) else {
            continue;
        };
        any = true;
        let params = Coordinate::THIRD.map(MultiPoly::var);
        let mut subs: [Option<MultiPoly>; 12] = std::array::from_fn(|_| None);
        for (i, c) in Coordinate::LEVEL1.iter().enumerate() {
            subs[c.index()] = Some(MultiPoly::constant(m1.values()[i].clone()));
        }
        for j in 0..4 {
            let mut e = MultiPoly::constant(p0[j].clone());
            for (b, t) in basis.iter().zip(&params) {
                e += &t.scale(&b[j]);
            }
            subs[8 + j] = Some(e);
        }
        let restricted = eq.compose(&subs);
        if !restricted.is_zero() {
            let t = nonzero_point(&restricted, basis.len());
            let p: [Rational; 4] = std::array::from_fn(|j| {
                basis
                    .iter()
                    .zip(&t)
                    .fold(p0[j].clone(), |s, (b, ti)| s + &b[j] * ti)
            });
            return Ok(IntegralVerdict::No(m1.lift(&p)));
        }
    }
    Ok(if any {
        IntegralVerdict::Yes
    } else {
        IntegralVerdict::YesVacuous
    })
}

/// A point of the grid `{0..=deg}^k` where the non-zero polynomial in the
/// first `k` third-order variables does not vanish.
fn nonzero_point(g: &MultiPoly, k: usize) -> Vec<Rational> {
    let deg = g.degree() as i64;
    let mut idx = vec![0i64; k];
    loop {
        let mut full: [Rational; 12] = std::array::from_fn(|_| Rational::zero());
        for i in 0..k {
            full[8 + i] = crate::algebra::int(idx[i]);
        }
        if !g.eval(&full).is_zero() {
            return full[8..8 + k].to_vec();
        }
        let mut i = 0;
        while i < k {
            idx[i] += 1;
            if idx[i] <= deg {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        assert!(i < k, "non-zero polynomial vanishes on its degree grid");
    }
}

/// Index of the first distribution of the Goursat classification of `F`
/// of which `f` is a first integral.
pub fn intermediate_integrals_via_distributions(
    f: &MultiPoly,
    eq: &MultiPoly,
    cfg: &ProbeConfig,
) -> Result<Option<usize>> {
    check_level(f)?;
    let c = detect_goursat(eq, cfg)?;
    Ok(c.class
        .distributions()
        .iter()
        .position(|d| is_first_integral(f, d)))
}

fn monomials_up_to(max_degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![Monomial::one()];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &frontier {
            // Non-decreasing variable index avoids duplicates.
            let start = Coordinate::LEVEL1
                .iter()
                .rposition(|c| m.exp(*c) > 0)
                .unwrap_or(0);
            for c in &Coordinate::LEVEL1[start..] {
                next.push(m.mul(&Monomial::var(*c)));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort_by(|a, b| b.cmp(a));
    out.retain(|m| !m.is_one());
    out
}

/// A basis, modulo constants, of the polynomial first integrals of `D` of
/// degree at most `max_degree` in the level-1 coordinates, in reduced
/// echelon form.
pub fn search_first_integrals(d: &Distribution, max_degree: u32) -> Vec<MultiPoly> {
    let monos = monomials_up_to(max_degree.max(1));
    let images: Vec<Vec<MultiPoly>> = d
        .generators()
        .iter()
        .map(|x| {
            monos
                .iter()
                .map(|m| x.apply(&MultiPoly::term(crate::algebra::one(), *m)))
                .collect()
        })
        .collect();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for img in &images {
        let mut by_mono: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
        for (j, p) in img.iter().enumerate() {
            for (m, c) in p.terms() {
                by_mono
                    .entry(*m)
                    .or_insert_with(|| vec![Rational::zero(); monos.len()])[j] = c.clone();
            }
        }
        rows.extend(by_mono.into_values());
    }
    let n = monos.len();
    let kernel = if rows.is_empty() {
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        if i == j {
                            crate::algebra::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    } else {
        rank_kernel(&RationalMatrix::new(rows, n)).1
    };
    if kernel.is_empty() {
        return vec![];
    }
    let basis = RationalMatrix::new(kernel, n).rref();
    basis
        .rows
        .iter()
        .map(|r| {
            r.iter().zip(&monos).fold(MultiPoly::zero(), |acc, (c, m)| {
                if c.is_zero() {
                    acc
                } else {
                    &acc + &MultiPoly::term(c.clone(), *m)
                }
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagCriterion {
    pub flag: Vec<usize>,
    /// Step of the derived flag at which the whole tangent space is reached.
    pub reaches_at: Option<usize>,
}

impl FlagCriterion {
    pub fn never_reaches_tangent(&self) -> bool {
        self.reaches_at.is_none()
    }
}

/// Derived flag of `D` until it stabilises; when it stays below `T M^(1)`,
/// `E_D` has an intermediate integral.
pub fn derived_flag_criterion(d: &Distribution) -> FlagCriterion {
    let flag = d.derived_flag(8);
    let reaches_at = flag.iter().position(|r| *r == 8);
    FlagCriterion { flag, reaches_at }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn d2() -> Distribution {
        Distribution::from_int_frames(&[[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, 1]])
    }

    #[test]
    fn first_integrals() {
        assert!(is_first_integral(&p("p12"), &d2()));
        assert!(is_first_integral(&p("7"), &d2()));
        assert!(!is_first_integral(&p("p1"), &d2()));
    }

    #[test]
    fn intermediate_integrals() {
        let cfg = ProbeConfig::default();
        assert_eq!(
            is_intermediate_integral(&p("p12"), &p("p122"), &cfg).unwrap(),
            IntegralVerdict::Yes
        );
        assert_eq!(
            is_intermediate_integral(&p("x1"), &p("p122"), &cfg).unwrap(),
            IntegralVerdict::YesVacuous
        );
        let IntegralVerdict::No(w) = is_intermediate_integral(&p("p11"), &p("p122"), &cfg).unwrap()
        else {
            panic!("expected a witness")
        };
        assert!(!crate::jet::eval_at(&p("p122"), &w).is_zero());
        assert!(is_intermediate_integral(&p("p111"), &p("p122"), &cfg).is_err());
    }

    #[test]
    fn via_distributions() {
        let cfg = ProbeConfig::default();
        let eq = p("p122");
        assert!(
            intermediate_integrals_via_distributions(&p("p12"), &eq, &cfg)
                .unwrap()
                .is_some()
        );
        assert!(
            intermediate_integrals_via_distributions(&p("p22"), &eq, &cfg)
                .unwrap()
                .is_some()
        );
        assert_eq!(
            intermediate_integrals_via_distributions(&p("u"), &eq, &cfg).unwrap(),
            None
        );
    }

    #[test]
    fn search() {
        assert_eq!(search_first_integrals(&d2(), 1), vec![p("x1"), p("p12")]);
        assert!(search_first_integrals(&Distribution::contact(), 2).is_empty());
        let d = Distribution::from_int_frames(&[[0, 0, 1, 0, 0]]);
        assert_eq!(search_first_integrals(&d, 1).len(), 7);
    }

    #[test]
    fn flag_criterion() {
        assert!(derived_flag_criterion(&d2()).never_reaches_tangent());
        let vert =
            Distribution::from_int_frames(&[[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]);
        assert_eq!(derived_flag_criterion(&vert).flag, vec![3, 3]);
    }
}
