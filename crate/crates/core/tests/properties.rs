use metasym_core::algebra::{int, rank_kernel, Coordinate, MultiPoly, Rational, RationalMatrix};
use metasym_core::integrals::{is_first_integral, search_first_integrals};
use metasym_core::jet::{lagrangian_plane, lie_bracket, symbolic_xi, Frame, VectorField};
use metasym_core::metasymplectic::{
    is_threefold_orthogonal, omega_bilinear, omega_trilinear, orthogonal_complement_pair,
};
use metasym_core::monge_ampere::{boillat_decompose, build_ed, BoillatForm};
use metasym_core::probe::{self, ProbeConfig};
use metasym_core::symbol::{
    char_poly, characteristic_lines, cone_sample, default_samples, discriminant, factor_cubic,
    symbol, symbol_roots, Direction, Quadratic,
};
use metasym_core::verify::{
    random_goursat_distribution, random_quasilinear_distribution, run_suite, Suite,
};
use metasym_core::{Distribution, JetPoint};
use num_traits::Zero;
use proptest::prelude::*;

/// Sparse polynomials with small coefficients in a handful of coordinates.
fn poly_in(vars: &'static [Coordinate], terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(
        (-3i64..=3, prop::collection::vec(0u32..=2, vars.len())),
        0..=terms,
    )
    .prop_map(move |ts| {
        let mut p = MultiPoly::zero();
        for (c, es) in ts {
            let mut t = MultiPoly::int(c);
            for (v, e) in vars.iter().zip(es) {
                t = &t * &MultiPoly::var(*v).pow(e);
            }
            p += &t;
        }
        p
    })
}

const SOME: &[Coordinate] = &[
    Coordinate::X1,
    Coordinate::U,
    Coordinate::P2,
    Coordinate::P12,
    Coordinate::P111,
];
const LEVEL1_FEW: &[Coordinate] = &[
    Coordinate::X2,
    Coordinate::P1,
    Coordinate::P11,
    Coordinate::P22,
];

fn small_poly() -> impl Strategy<Value = MultiPoly> {
    poly_in(SOME, 4)
}

fn frame() -> impl Strategy<Value = Frame> {
    prop::array::uniform5(poly_in(LEVEL1_FEW, 2))
}

fn vertical_frame() -> impl Strategy<Value = Frame> {
    frame().prop_map(|mut f| {
        f[0] = MultiPoly::zero();
        f[1] = MultiPoly::zero();
        f
    })
}

fn field() -> impl Strategy<Value = VectorField> {
    prop::array::uniform8(poly_in(LEVEL1_FEW, 2)).prop_map(VectorField::from_components)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| metasym_core::algebra::rat(n, d))
}

fn level2_point() -> impl Strategy<Value = JetPoint> {
    prop::collection::vec(rational(), 12).prop_map(|v| JetPoint::new(2, v).unwrap())
}

fn scale_frame(f: &Frame, k: &MultiPoly) -> Frame {
    std::array::from_fn(|i| &f[i] * k)
}

fn add_frames(a: &Frame, b: &Frame) -> Frame {
    std::array::from_fn(|i| &a[i] + &b[i])
}

fn vf(f: &Frame) -> VectorField {
    VectorField::from_frame(f)
}

#[test]
fn lagrangian_planes_are_omega_isotropic() {
    let [x1, x2] = symbolic_xi();
    assert!(omega_bilinear(&vf(&x1), &vf(&x2)).unwrap().is_zero());
}

fn neg(l: &metasym_core::metasymplectic::LDual) -> [MultiPoly; 2] {
    [-l.0[0].clone(), -l.0[1].clone()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn mixed_partials_commute(p in small_poly(), i in 0usize..12, j in 0usize..12) {
        let (v, w) = (Coordinate::ALL[i], Coordinate::ALL[j]);
        prop_assert_eq!(p.derivative(v).derivative(w), p.derivative(w).derivative(v));
    }

    #[test]
    fn parse_print_roundtrip(p in small_poly()) {
        let back: MultiPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 1..6)) {
        let m = RationalMatrix::new(
            rows.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect(),
            6,
        );
        let (rank, ker) = rank_kernel(&m);
        prop_assert_eq!(rank + ker.len(), 6);
        prop_assert_eq!(rank, m.rank());
        for v in &ker {
            for r in &m.rows {
                let dot = r.iter().zip(v).fold(Rational::zero(), |s, (a, b)| s + a * b);
                prop_assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn jacobi_identity(x in field(), y in field(), z in field()) {
        let s = lie_bracket(&x, &lie_bracket(&y, &z))
            .add(&lie_bracket(&y, &lie_bracket(&z, &x)))
            .add(&lie_bracket(&z, &lie_bracket(&x, &y)));
        prop_assert!(s.is_zero());
    }

    #[test]
    fn omega_bilinear_antisymmetric(a in frame(), b in frame(), c in frame(), k in poly_in(LEVEL1_FEW, 2)) {
        let ab = omega_bilinear(&vf(&a), &vf(&b)).unwrap();
        let ba = omega_bilinear(&vf(&b), &vf(&a)).unwrap();
        prop_assert_eq!(ab.0.clone(), neg(&ba));
        let lhs = omega_bilinear(&vf(&add_frames(&scale_frame(&a, &k), &c)), &vf(&b)).unwrap();
        let cb = omega_bilinear(&vf(&c), &vf(&b)).unwrap();
        let rhs = [&(&k * &ab.0[0]) + &cb.0[0], &(&k * &ab.0[1]) + &cb.0[1]];
        prop_assert_eq!(lhs.0, rhs);
    }

    #[test]
    fn omega_trilinear_degenerate_cases(a in vertical_frame(), b in vertical_frame(), c in vertical_frame(), h in frame()) {
        prop_assert!(omega_trilinear(&vf(&a), &vf(&b), &vf(&c)).unwrap().is_zero());
        prop_assert!(omega_trilinear(&vf(&h), &vf(&h), &vf(&c)).unwrap().is_zero());
    }

    #[test]
    fn char_poly_matches_symbol(m2 in level2_point(), n1 in rational(), n2 in rational(), seed in any::<u64>()) {
        let f = probe_equation(seed);
        let (Ok(s), Ok(chi)) = (symbol(&f, &m2), char_poly(&f, &m2)) else { return Ok(()) };
        let sv = &s[0] * &n1 * &n1 * &n1 + &s[1] * &n1 * &n1 * &n2 + &s[2] * &n1 * &n2 * &n2 + &s[3] * &n2 * &n2 * &n2;
        // (ν¹, ν²) ↔ (α2, −α1).
        let (a1, a2) = (-n2.clone(), n1.clone());
        let cv = &chi[0] * &a1 * &a1 * &a1 + &chi[1] * &a1 * &a1 * &a2 + &chi[2] * &a1 * &a2 * &a2 + &chi[3] * &a2 * &a2 * &a2;
        prop_assert_eq!(cv, -sv);
    }

    #[test]
    fn cubic_factorisation(c in prop::array::uniform4(-4i64..=4)) {
        prop_assume!(c.iter().any(|x| *x != 0));
        let cubic = c.map(int);
        let fac = factor_cubic(&cubic);
        if let (Direction::Exact(l), Quadratic::Exact(q)) = (&fac.linear, &fac.quadratic) {
            let prod = [
                &l[0] * &q[0],
                &l[0] * &q[1] + &l[1] * &q[0],
                &l[0] * &q[2] + &l[1] * &q[1],
                &l[1] * &q[2],
            ];
            prop_assert!(prod.iter().any(|x| !x.is_zero()));
            // Equal up to a non-zero scalar.
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert_eq!(&prod[i] * &cubic[j], &prod[j] * &cubic[i]);
                }
            }
        }
        if discriminant(&cubic) > Rational::zero() {
            let roots = symbol_roots(&cubic);
            prop_assert_eq!(roots.len(), 3);
            prop_assert!(roots.iter().all(|r| r.mult == 1));
        }
    }

    #[test]
    fn characteristic_lines_lie_in_the_plane(m2 in level2_point(), seed in any::<u64>()) {
        let f = probe_equation(seed);
        // Move onto the equation along a coordinate in which it is affine.
        let Some(m2) = onto_equation(&f, &m2) else { return Ok(()) };
        let Ok(lines) = characteristic_lines(&f, &m2) else { return Ok(()) };
        let plane = lagrangian_plane(&m2).unwrap();
        for l in lines.iter().filter_map(|l| l.coords.as_ref()) {
            prop_assert!(plane.coordinates_of(l).is_some());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derived_flag_monotone(seed in any::<u64>(), p in prop::collection::vec(rational(), 12)) {
        let mut rng = probe::rng(seed);
        let d = if seed % 2 == 0 { random_goursat_distribution(&mut rng) } else { random_quasilinear_distribution(&mut rng) };
        let pt: [Rational; 12] = p.try_into().unwrap();
        let flag = d.derived_flag_at(8, &pt);
        prop_assert!(flag.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(flag.iter().all(|r| *r <= 8));
    }

    #[test]
    fn vertical_part_is_contained(seed in any::<u64>()) {
        let mut rng = probe::rng(seed);
        let d = if seed % 2 == 0 { random_goursat_distribution(&mut rng) } else { random_quasilinear_distribution(&mut rng) };
        let v = d.vertical_part().unwrap();
        for g in v.generators() {
            prop_assert!(d.contains(g));
        }
    }

    #[test]
    fn complements_are_orthogonal_and_symmetric(seed in any::<u64>()) {
        let mut rng = probe::rng(seed);
        let d = random_quasilinear_distribution(&mut rng);
        let (a, b) = orthogonal_complement_pair(&d).unwrap();
        prop_assert!(is_threefold_orthogonal(&d, &a, &b).unwrap());
        for x in [&a, &b] {
            prop_assert_eq!(x.vertical_part().unwrap().generic_rank(), 2);
        }
        let (c, e) = orthogonal_complement_pair(&a).unwrap();
        let same = |x: &Distribution, y: &Distribution| x.same_span(y);
        prop_assert!((same(&c, &d) && same(&e, &b)) || (same(&c, &b) && same(&e, &d)));
    }

    #[test]
    fn boillat_roundtrip(
        a in prop::array::uniform3(poly_in(LEVEL1_FEW, 2)),
        b in prop::array::uniform4(poly_in(LEVEL1_FEW, 2)),
        c in poly_in(LEVEL1_FEW, 2),
    ) {
        let form = BoillatForm { a, b, c };
        prop_assume!(form.a.iter().chain(&form.b).any(|x| !x.is_zero()));
        prop_assert_eq!(boillat_decompose(&form.to_equation()).unwrap(), form);
    }

    #[test]
    fn cone_of_e_d_meets_d(seed in any::<u64>()) {
        let mut rng = probe::rng(seed);
        let d = random_goursat_distribution(&mut rng);
        let f = build_ed(&d).unwrap();
        let m1 = JetPoint::origin(1);
        let Ok(samples) = default_samples(&f, &m1, seed, 3) else { return Ok(()) };
        let Ok(cone) = cone_sample(&f, &m1, &samples) else { return Ok(()) };
        for s in &cone.samples {
            let in_d = s.lines.iter().filter_map(|l| l.coords.as_ref())
                .any(|c| d.contains(&VectorField::from_constant_frame(c)));
            prop_assert!(in_d, "no characteristic line in D at {:?}", s.point.third());
        }
    }

    #[test]
    fn first_integrals_are_intermediate(seed in any::<u64>()) {
        let r = run_suite(Suite::Integrals, seed, 1, &ProbeConfig::default());
        prop_assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn search_results_are_first_integrals(seed in any::<u64>()) {
        let mut rng = probe::rng(seed);
        let d = random_goursat_distribution(&mut rng);
        for f in search_first_integrals(&d, 2) {
            prop_assert!(is_first_integral(&f, &d));
        }
    }
}

/// A random Boillat equation with constant coefficients.
fn probe_equation(seed: u64) -> MultiPoly {
    let mut rng = probe::rng(seed);
    metasym_core::verify::random_boillat(&mut rng).to_equation()
}

/// Adjusts one third-order coordinate in which `F` is affine so that the
/// point lies on `{F = 0}`.
fn onto_equation(f: &MultiPoly, m2: &JetPoint) -> Option<JetPoint> {
    for c in Coordinate::ALL[8..].iter() {
        if f.degree_in(*c) != 1 {
            continue;
        }
        let mut p = m2.clone();
        p.set(*c, Rational::zero());
        let f0 = f.eval(&p.full());
        let mut q = p.clone();
        q.set(*c, int(1));
        let slope = f.eval(&q.full()) - &f0;
        if slope.is_zero() {
            continue;
        }
        p.set(*c, -f0 / slope);
        return Some(p);
    }
    None
}
