//! JSON encodings of core types.

use metasym_core::algebra::{fmt_rational, zero, Coordinate};
use metasym_core::jet::DistributionSpec;
use metasym_core::monge_ampere::{BoillatForm, GoursatForm};
use metasym_core::symbol::{CharLine, Direction};
use metasym_core::{Distribution, JetPoint, MultiPoly, Rational};
use serde_json::{json, Map, Value};

pub fn rational(r: &Rational) -> Value {
    Value::String(fmt_rational(r))
}

pub fn poly(p: &MultiPoly) -> Value {
    Value::String(p.to_string())
}

pub fn polys(ps: &[MultiPoly]) -> Value {
    Value::Array(ps.iter().map(poly).collect())
}

pub fn point(p: &JetPoint) -> Value {
    let mut m = Map::new();
    for (c, v) in Coordinate::ALL.iter().zip(p.values()) {
        m.insert(c.name().to_string(), rational(v));
    }
    Value::Object(m)
}

/// Generators as adapted-frame components, plus the reduced echelon form
/// of the span when the distribution has constant coefficients.
pub fn distribution(d: &Distribution) -> Value {
    let gens = match DistributionSpec::from_distribution(d) {
        Ok(spec) => serde_json::to_value(spec.generators).expect("plain strings"),
        Err(_) => Value::Null,
    };
    let rref = d.constant_frames().map(|m| {
        Value::Array(
            m.rref()
                .rows
                .iter()
                .filter(|r| r.iter().any(|x| *x != zero()))
                .map(|r| Value::Array(r.iter().map(rational).collect()))
                .collect(),
        )
    });
    json!({ "generators": gens, "rref": rref })
}

pub fn boillat(b: &BoillatForm) -> Value {
    json!({ "A": polys(&b.a), "B": polys(&b.b), "C": poly(&b.c) })
}

pub fn goursat(g: &GoursatForm) -> Value {
    json!({
        "f1": polys(&g.f1),
        "f2": polys(&g.f2),
        "A": polys(&g.a),
        "reduced": g.reduced,
    })
}

pub fn direction(d: &Direction) -> Value {
    match d {
        Direction::Exact(v) => Value::Array(v.iter().map(rational).collect()),
        Direction::Approx(v) => json!(v),
    }
}

pub fn char_line(l: &CharLine, strong: Option<bool>) -> Value {
    let coords = match &l.coords {
        Some(c) => Value::Array(c.iter().map(rational).collect()),
        None => json!(l.numeric),
    };
    json!({
        "coords": coords,
        "direction": direction(&l.direction),
        "exact": l.is_exact(),
        "mult": l.mult,
        "factor": l.factor,
        "strong": strong,
    })
}
