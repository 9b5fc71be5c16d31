//! Acceptance criteria. Each prints one PASS/FAIL line; the test fails if
//! any criterion does.

use metasym_core::algebra::{Coordinate, MultiPoly};
use metasym_core::integrals::{
    intermediate_integrals_via_distributions, is_intermediate_integral, search_first_integrals,
    IntegralVerdict,
};
use metasym_core::jet::Distribution;
use metasym_core::metasymplectic::{canonical_line, LDual};
use metasym_core::monge_ampere::{
    build_ed, detect_goursat, quasilinear_coefficients, GoursatClass,
};
use metasym_core::probe::{self, ProbeConfig};
use metasym_core::symbol::{characteristic_lines, is_strong_characteristic, FiberSolver};
use metasym_core::verify::{
    fully_parabolic_distribution, random_quasilinear_distribution, random_quasilinear_normal_form,
    run_suite, Suite,
};
use metasym_core::JetPoint;
use std::time::{Duration, Instant};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

/// Runs a criterion, enforcing its time limit, and prints its line.
fn criterion(n: u32, name: &str, limit: Option<Duration>, body: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let mut o = body();
    let el = t.elapsed();
    if let Some(l) = limit {
        if el >= l {
            o = fail(format!("{} (took {el:.2?}, limit {l:?})", o.detail));
        }
    }
    let limit = limit.map(|l| format!(", limit {l:?}")).unwrap_or_default();
    println!(
        "{} [{n}] {name}: {} ({el:.2?}{limit})",
        if o.ok { "PASS" } else { "FAIL" },
        o.detail
    );
    o.ok
}

fn poly(s: &str) -> MultiPoly {
    s.parse().unwrap()
}

fn dist(rows: &[[i64; 5]]) -> Distribution {
    Distribution::from_int_frames(rows)
}

fn worked_example() -> [Distribution; 3] {
    [
        dist(&[[1, 0, 0, 0, 0], [0, 0, 1, 1, 0], [0, 0, 2, 0, 1]]),
        dist(&[[1, 1, 0, 0, 0], [0, 0, 2, 1, 0], [0, 0, 0, 0, 1]]),
        dist(&[[1, -2, 0, 0, 0], [0, 0, 1, -1, 0], [0, 0, 0, 0, 1]]),
    ]
}

/// Exact equality of the reduced row echelon forms of constant frames.
fn same_rref(a: &Distribution, b: &Distribution) -> bool {
    match (a.constant_frames(), b.constant_frames()) {
        (Some(x), Some(y)) => x.rref() == y.rref(),
        _ => false,
    }
}

/// Every expected span occurs among the found distributions, and nothing
/// else does.
fn spans_match(found: &[Distribution], expected: &[Distribution]) -> bool {
    expected
        .iter()
        .all(|e| found.iter().any(|f| same_rref(f, e)))
        && found
            .iter()
            .all(|f| expected.iter().any(|e| same_rref(f, e)))
}

fn classify_spans(expr: &str, expected: &[Distribution]) -> Result<(), String> {
    let t = Instant::now();
    let c = detect_goursat(&poly(expr), &ProbeConfig::default()).map_err(|e| e.to_string())?;
    let found = c.class.distributions();
    if t.elapsed() >= Duration::from_secs(1) {
        return Err(format!("{expr}: {:?}", t.elapsed()));
    }
    if !spans_match(&found, expected) {
        return Err(format!(
            "{expr}: found {} distributions not matching",
            found.len()
        ));
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let d1122 = dist(&[[1, 0, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]);
    let d2 = dist(&[[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, 1]]);
    let d111 = dist(&[[1, 0, 0, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]);
    let checks = [
        classify_spans("p111 - p112 - 2*p122", &worked_example()),
        classify_spans("p122", &[d1122, d2]),
        classify_spans("p111", &[d111]),
    ];
    match checks.into_iter().find_map(|r| r.err()) {
        None => pass("three distinct spans for p111 - p112 - 2*p122, two for p122, one for p111; exact rref, each < 1 s"),
        Some(e) => fail(e),
    }
}

fn criterion_2() -> Outcome {
    let [d1, d2, d3] = worked_example();
    let expect = [
        (
            &d1,
            &d2,
            LDual([MultiPoly::int(2), MultiPoly::int(1)]),
            "(D1,D2) ~ 2dp1+dp2",
        ),
        (
            &d1,
            &d3,
            LDual([MultiPoly::int(1), MultiPoly::int(-1)]),
            "(D1,D3) ~ dp1-dp2",
        ),
        (
            &d2,
            &d3,
            LDual([MultiPoly::int(0), MultiPoly::int(1)]),
            "(D2,D3) ~ dp2",
        ),
    ];
    for (a, b, want, what) in expect {
        match canonical_line(a, b) {
            Ok(Some(l)) if l.same_line(&want) => {}
            other => return fail(format!("{what}: got {other:?}")),
        }
    }
    pass("all three canonical lines projectively equal, exact")
}

fn criterion_3() -> Outcome {
    let d1 = dist(&[[1, 0, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]);
    let d2 = dist(&[[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, 1]]);
    let origin = JetPoint::origin(1).full();
    let f1 = d1.derived_flag_at(2, &origin);
    let f2 = d2.derived_flag_at(2, &origin);
    if f1.get(1) == Some(&5) && f2.get(1) == Some(&4) {
        pass(format!("flags {f1:?} and {f2:?} at the default probe"))
    } else {
        fail(format!("flags {f1:?} and {f2:?}"))
    }
}

fn criterion_4() -> Outcome {
    let cases = [
        (Coordinate::U, vec![3, 4, 5]),
        (Coordinate::P1, vec![3, 4, 6]),
        (Coordinate::P11, vec![3, 6, 8]),
    ];
    let mut retries = 0;
    for (k, want) in cases {
        let d = fully_parabolic_distribution(&MultiPoly::var(k));
        // Five probes, each with a fallback pool for non-generic points.
        let pool = probe::sample_points(0xF1A6 + k.index() as u64, 25);
        for i in 0..5 {
            let mut ok = false;
            for attempt in 0..5 {
                let p = &pool[i * 5 + attempt];
                let flag = d.derived_flag_at(4, p);
                if flag.len() >= 3 && flag[..3] == want[..] {
                    ok = true;
                    break;
                }
                retries += 1;
            }
            if !ok {
                return fail(format!("k = {}: probe {i} never gave {want:?}", k.name()));
            }
        }
    }
    pass(format!(
        "(3,4,5), (3,4,6), (3,6,8) at 5 probes each, {retries} retries"
    ))
}

fn criterion_5() -> Outcome {
    let cfg = ProbeConfig::default();
    let a = run_suite(Suite::Roundtrip, 1, 50, &cfg);
    let b = run_suite(Suite::Orthogonality, 1, 50, &cfg);
    let bad: Vec<_> = a.failures.iter().chain(&b.failures).collect();
    if bad.is_empty() {
        pass("50/50 vertical rank 1 recovered, 50/50 vertical rank 2 orthogonal triples")
    } else {
        fail(format!("{} failures, first: {:?}", bad.len(), bad[0]))
    }
}

fn criterion_6() -> Outcome {
    let mut rng = probe::rng(6);
    for i in 0..100 {
        let nf = random_quasilinear_normal_form(&mut rng);
        let d = nf.distribution();
        let via_formula = nf.boillat().to_equation().primitive();
        let det = match build_ed(&d) {
            Ok(f) => f,
            Err(e) => return fail(format!("normal form {i}: {e}")),
        };
        if via_formula != det {
            return fail(format!("normal form {i}: {via_formula} vs {det}"));
        }
    }
    for i in 0..100 {
        let d = random_quasilinear_distribution(&mut rng);
        let ok = match (quasilinear_coefficients(&d), build_ed(&d)) {
            (Ok(b), Ok(f)) => b.to_equation().primitive() == f,
            _ => false,
        };
        if !ok {
            return fail(format!("distribution {i} disagrees"));
        }
    }
    pass("100 polynomial normal forms and 100 constant distributions agree up to sign, exact")
}

fn criterion_7() -> Outcome {
    let r = run_suite(Suite::StrongChar, 7, 50, &ProbeConfig::default());
    if !r.ok() {
        return fail(format!("{:?}", r.failures[0]));
    }
    let f = poly("p111 + p112^2");
    let m1 = JetPoint::origin(1);
    let solver = FiberSolver::new(&f, &m1).unwrap();
    let mut probes = solver.canonical_probes();
    probes.extend(solver.random_probes(7, 16));
    for p in probes {
        let Some(p) = solver.solve(&p) else { continue };
        let m2 = m1.lift(&p);
        let Ok(lines) = characteristic_lines(&f, &m2) else {
            continue;
        };
        for l in &lines {
            if is_strong_characteristic(&f, l, &m2) == Ok(false) {
                return pass(format!(
                    "50 Boillat equations strongly characteristic at 4 probes; p111 + p112^2 has a non-strong line {:?}",
                    l.numeric
                ));
            }
        }
    }
    fail("no non-strong line found for p111 + p112^2")
}

fn criterion_8() -> Outcome {
    let r = run_suite(Suite::OmegaRestriction, 8, 30, &ProbeConfig::default());
    if r.ok() {
        pass("30/30 decomposable forms give E_omega proportional to E_D, exact")
    } else {
        fail(format!("{:?}", r.failures[0]))
    }
}

fn criterion_9() -> Outcome {
    let cfg = ProbeConfig::default();
    let (f, eq) = (poly("p12"), poly("p122"));
    match is_intermediate_integral(&f, &eq, &cfg) {
        Ok(IntegralVerdict::Yes) => {}
        other => return fail(format!("direct check: {other:?}")),
    }
    match intermediate_integrals_via_distributions(&f, &eq, &cfg) {
        Ok(Some(_)) => {}
        other => return fail(format!("distribution route: {other:?}")),
    }
    let d = dist(&[[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 0, 1]]);
    let found = search_first_integrals(&d, 1);
    if found != vec![poly("x1"), poly("p12")] {
        return fail(format!("search returned {found:?}"));
    }
    pass("p12 integrates p122 by both routes; degree-1 search gives {x1, p12}")
}

#[test]
fn acceptance() {
    let results = [
        criterion(
            1,
            "worked example spans",
            Some(Duration::from_secs(3)),
            criterion_1,
        ),
        criterion(2, "canonical lines", None, criterion_2),
        criterion(
            3,
            "derived flags of the p122 distributions",
            None,
            criterion_3,
        ),
        criterion(
            4,
            "fully parabolic flags",
            Some(Duration::from_secs(10)),
            criterion_4,
        ),
        criterion(
            5,
            "roundtrip suites",
            Some(Duration::from_secs(60)),
            criterion_5,
        ),
        criterion(6, "quasi-linear coefficient identity", None, criterion_6),
        criterion(7, "strong characteristics", None, criterion_7),
        criterion(8, "omega restriction", None, criterion_8),
        criterion(9, "intermediate integrals", None, criterion_9),
    ];
    let failed: Vec<usize> = (1..=9).filter(|i| !results[i - 1]).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn detection_of_worked_example_is_quasilinear() {
    let c = detect_goursat(&poly("p111 - p112 - 2*p122"), &ProbeConfig::default()).unwrap();
    assert!(matches!(
        c.class,
        GoursatClass::QuasiLinear { inexact: false, .. }
    ));
}
