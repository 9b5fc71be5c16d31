//! Seeded random generators and the property suites run by `metasym verify`.

use crate::algebra::{int, Coordinate, MultiPoly};
use crate::integrals::{
    derived_flag_criterion, is_first_integral, is_intermediate_integral, search_first_integrals,
    IntegralVerdict,
};
use crate::jet::{Distribution, Frame, JetPoint};
use crate::monge_ampere::{
    build_e_omega, build_ed, decompose_orthogonal_triple, detect_goursat, kernel_in_contact,
    proportional, recover_distribution, triple_is_orthogonal, BoillatForm, GoursatClass, OneForm,
    QuasiLinearNormalForm, TwoForm,
};
use crate::probe::{self, ProbeConfig};
use crate::symbol::{characteristic_lines, is_strong_characteristic, FiberSolver};
use crate::{Error, Result};
use rand::Rng;
use serde::Serialize;
use std::fmt;

fn small(rng: &mut impl Rng) -> i64 {
    rng.gen_range(-2..=2)
}

fn c(n: i64) -> MultiPoly {
    MultiPoly::int(n)
}

/// A constant `3×3` integer matrix with non-zero determinant.
fn invertible3(rng: &mut impl Rng) -> [[i64; 3]; 3] {
    loop {
        let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| small(rng)));
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det != 0 {
            return m;
        }
    }
}

fn mix(rows: &[[i64; 5]; 3], m: &[[i64; 3]; 3]) -> Distribution {
    let mixed: Vec<[i64; 5]> = (0..3)
        .map(|i| std::array::from_fn(|k| (0..3).map(|j| m[i][j] * rows[j][k]).sum()))
        .collect();
    Distribution::from_int_frames(&mixed)
}

/// `⟨D1 + f1, D2 + f2, V⟩` with entries in `{-2..2}` and `V` a vertical
/// field of full rank as a symmetric matrix, presented through a random
/// change of generators.
pub fn random_goursat_distribution(rng: &mut impl Rng) -> Distribution {
    loop {
        let mut rows = [[0i64; 5]; 3];
        rows[0][0] = 1;
        rows[1][1] = 1;
        for r in rows.iter_mut() {
            for x in r[2..].iter_mut() {
                *x = small(rng);
            }
        }
        // A rank-one vertical generator makes `E_D` shared with other
        // distributions; keep to the case where `D` is determined.
        let v = &rows[2][2..];
        if v[0] * v[2] == v[1] * v[1] {
            continue;
        }
        let d = mix(&rows, &invertible3(rng));
        if build_ed(&d).is_ok() {
            return d;
        }
    }
}

/// `⟨a D1 + b D2 + f, V1, V2⟩` whose vertical part is the kernel of
/// `dp11 − (k1 + k2) dp12 + k1 k2 dp22` with `k1, k2 ∈ {-2..2}`, so that
/// the orthogonal complements are defined over `Q`.
pub fn random_quasilinear_distribution(rng: &mut impl Rng) -> Distribution {
    loop {
        let (k1, k2) = (small(rng), small(rng));
        let (a, b) = (small(rng), small(rng));
        if a == 0 && b == 0 {
            continue;
        }
        let h = [a, b, small(rng), small(rng), small(rng)];
        let v1 = [0, 0, k1 + k2, 1, 0];
        let v2 = [0, 0, -k1 * k2, 0, 1];
        let rows = [h, v1, v2];
        let mut m = invertible3(rng);
        // Keep a generator with the horizontal part.
        m[0] = [1, small(rng), small(rng)];
        let d = mix(&rows, &m);
        if d.generic_rank() == 3 && build_ed(&d).is_ok() {
            return d;
        }
    }
}

/// A polynomial of degree at most one in the level-1 coordinates with
/// coefficients in `{-2..2}`; `density` is the chance of a linear term.
pub fn random_affine(rng: &mut impl Rng, density: f64) -> MultiPoly {
    let mut p = c(small(rng));
    if rng.gen_bool(density) {
        let v = Coordinate::LEVEL1[rng.gen_range(0..8)];
        p += &MultiPoly::var(v).scale(&int(small(rng)));
    }
    p
}

/// A quasi-linear normal form whose entries are random affine functions.
pub fn random_quasilinear_normal_form(rng: &mut impl Rng) -> QuasiLinearNormalForm {
    loop {
        let mut e = || random_affine(rng, 0.3);
        let nf = QuasiLinearNormalForm {
            a: e(),
            b: e(),
            f: [e(), e(), e()],
            v: [[e(), e(), e()], [e(), e(), e()]],
        };
        if (nf.a.is_zero() && nf.b.is_zero()) || nf.distribution().generic_rank() != 3 {
            continue;
        }
        if build_ed(&nf.distribution()).is_ok() {
            return nf;
        }
    }
}

/// Random `(A, B, C)` with entries in `{-2..2}` and non-zero symbol.
pub fn random_boillat(rng: &mut impl Rng) -> BoillatForm {
    loop {
        let b = BoillatForm {
            a: std::array::from_fn(|_| c(small(rng))),
            b: std::array::from_fn(|_| c(small(rng))),
            c: c(small(rng)),
        };
        if b.a.iter().chain(b.b.iter()).any(|x| !x.is_zero()) {
            return b;
        }
    }
}

/// A 1-form on `M^(1)` with constant coefficients, one of which may be
/// affine.
pub fn random_one_form(rng: &mut impl Rng) -> OneForm {
    let mut w: OneForm = std::array::from_fn(|_| c(small(rng)));
    let i = rng.gen_range(0..8);
    w[i] = random_affine(rng, 0.5);
    w
}

/// `⟨D1 + k D2, −2k ∂p11 + ∂p12, −3k² ∂p11 + k ∂p12 + ∂p22⟩`, the
/// distribution of the fully parabolic equation
/// `p111 + 3k p112 + 3k² p122 + k³ p222 = 0`.
pub fn fully_parabolic_distribution(k: &MultiPoly) -> Distribution {
    let z = MultiPoly::zero;
    let k2 = k * k;
    let frames: [Frame; 3] = [
        [MultiPoly::one(), k.clone(), z(), z(), z()],
        [z(), z(), k.scale(&int(-2)), MultiPoly::one(), z()],
        [z(), z(), k2.scale(&int(-3)), k.clone(), MultiPoly::one()],
    ];
    Distribution::from_frames(&frames)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Roundtrip,
    Orthogonality,
    StrongChar,
    OmegaRestriction,
    Integrals,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Roundtrip,
        Suite::Orthogonality,
        Suite::StrongChar,
        Suite::OmegaRestriction,
        Suite::Integrals,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Roundtrip => "roundtrip",
            Suite::Orthogonality => "orthogonality",
            Suite::StrongChar => "strong-char",
            Suite::OmegaRestriction => "omega-restriction",
            Suite::Integrals => "integrals",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub input: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn describe(d: &Distribution) -> String {
    match d.constant_frames() {
        Some(m) => format!(
            "{:?}",
            m.rows
                .iter()
                .map(|r| r
                    .iter()
                    .map(crate::algebra::fmt_rational)
                    .collect::<Vec<_>>())
                .collect::<Vec<_>>()
        ),
        None => format!(
            "{:?}",
            d.frames().map(|fs| fs
                .iter()
                .map(|f| f.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>())
        ),
    }
}

/// Outcome of one case: `Ok(None)` passes, `Ok(Some(detail))` is a
/// counterexample, errors are counterexamples too.
type Case = (String, Result<Option<String>>);

fn roundtrip_case(rng: &mut impl Rng, cfg: &ProbeConfig) -> Case {
    let d = random_goursat_distribution(rng);
    let input = describe(&d);
    let run = || -> Result<Option<String>> {
        let f = build_ed(&d)?;
        let r = recover_distribution(&f, cfg)?;
        if !r.distribution.same_span(&d) {
            return Ok(Some(format!(
                "recovered {} from {f}",
                describe(&r.distribution)
            )));
        }
        match detect_goursat(&f, cfg)?.class {
            GoursatClass::FullyNonlinearGoursat { .. } => Ok(None),
            other => Ok(Some(format!("{f} classified as {}", other.name()))),
        }
    };
    (input, run())
}

fn orthogonality_case(rng: &mut impl Rng, cfg: &ProbeConfig) -> Case {
    let d = random_quasilinear_distribution(rng);
    let input = describe(&d);
    let run = || -> Result<Option<String>> {
        let f = build_ed(&d)?;
        let t = decompose_orthogonal_triple(&f, cfg)?;
        if !t.distributions.iter().any(|x| x.same_span(&d)) {
            return Ok(Some(format!("{f}: triple does not contain the input")));
        }
        for x in &t.distributions {
            if !proportional(&build_ed(x)?, &f) {
                return Ok(Some(format!("{f}: E_D of {} differs", describe(x))));
            }
        }
        if !triple_is_orthogonal(&t.distributions)? {
            return Ok(Some(format!("{f}: triple is not orthogonal")));
        }
        Ok(None)
    };
    (input, run())
}

/// Characteristic lines at `n` fibre points of `{F = 0}` over `m1`, all
/// strongly characteristic.
pub fn strong_at_probes(
    f: &MultiPoly,
    m1: &JetPoint,
    n: usize,
    seed: u64,
) -> Result<Option<String>> {
    let solver = FiberSolver::new(f, m1)?;
    let mut probes = solver.canonical_probes();
    probes.extend(solver.random_probes(seed, 12));
    let mut done = 0;
    for p in probes {
        if done == n {
            break;
        }
        let Some(p) = solver.solve(&p) else { continue };
        let m2 = m1.lift(&p);
        let lines = match characteristic_lines(f, &m2) {
            Ok(l) => l,
            Err(Error::ZeroSymbol) => continue,
            Err(e) => return Err(e),
        };
        done += 1;
        for l in &lines {
            if !is_strong_characteristic(f, l, &m2)? {
                return Ok(Some(format!(
                    "line {:?} at {:?} is not strong",
                    l.numeric,
                    m2.third()
                )));
            }
        }
    }
    if done < n {
        return Err(Error::InsufficientSamples(done));
    }
    Ok(None)
}

fn strong_case(rng: &mut impl Rng, cfg: &ProbeConfig) -> Case {
    let b = random_boillat(rng);
    let f = b.to_equation();
    let seed = rng.gen();
    let m1 = cfg.base.clone().unwrap_or_else(|| JetPoint::origin(1));
    (f.to_string(), strong_at_probes(&f, &m1, 4, seed))
}

fn omega_case(rng: &mut impl Rng) -> Case {
    loop {
        let (r1, r2) = (random_one_form(rng), random_one_form(rng));
        let d = kernel_in_contact(&[r1.clone(), r2.clone()]);
        if d.generic_rank() != 3 {
            continue;
        }
        let (Ok(fw), Ok(fd)) = (build_e_omega(&TwoForm::wedge(&r1, &r2)), build_ed(&d)) else {
            continue;
        };
        let input = format!(
            "rho1 = {:?}, rho2 = {:?}",
            r1.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            r2.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        );
        let out = if proportional(&fw, &fd) {
            None
        } else {
            Some(format!("{fw} vs {fd}"))
        };
        return (input, Ok(out));
    }
}

fn integrals_case(rng: &mut impl Rng, cfg: &ProbeConfig) -> Case {
    let d = if rng.gen_bool(0.5) {
        random_goursat_distribution(rng)
    } else {
        random_quasilinear_distribution(rng)
    };
    let input = describe(&d);
    let run = || -> Result<Option<String>> {
        let f = build_ed(&d)?;
        let found = search_first_integrals(&d, 1);
        for g in &found {
            if !is_first_integral(g, &d) {
                return Ok(Some(format!("{g} is not a first integral")));
            }
            if let IntegralVerdict::No(w) = is_intermediate_integral(g, &f, cfg)? {
                return Ok(Some(format!(
                    "{g} is not an intermediate integral of {f}: {:?}",
                    w.values()
                )));
            }
        }
        let crit = derived_flag_criterion(&d);
        if !found.is_empty() && !crit.never_reaches_tangent() {
            return Ok(Some(format!(
                "first integrals exist but the flag {:?} reaches 8",
                crit.flag
            )));
        }
        Ok(None)
    };
    (input, run())
}

/// Runs `n` seeded cases of a suite.
pub fn run_suite(suite: Suite, seed: u64, n: usize, cfg: &ProbeConfig) -> SuiteReport {
    let mut rng = probe::rng(seed);
    let mut failures = Vec::new();
    for case in 0..n {
        let (input, res) = match suite {
            Suite::Roundtrip => roundtrip_case(&mut rng, cfg),
            Suite::Orthogonality => orthogonality_case(&mut rng, cfg),
            Suite::StrongChar => strong_case(&mut rng, cfg),
            Suite::OmegaRestriction => omega_case(&mut rng),
            Suite::Integrals => integrals_case(&mut rng, cfg),
        };
        let detail = match res {
            Ok(None) => continue,
            Ok(Some(d)) => d,
            Err(e) => format!("error: {e}"),
        };
        failures.push(Counterexample {
            case,
            input,
            detail,
        });
    }
    SuiteReport {
        suite,
        seed,
        cases: n,
        passed: n - failures.len(),
        failures,
    }
}
