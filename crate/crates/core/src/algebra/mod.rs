//! Exact arithmetic: rationals, jet coordinates, sparse multivariate
//! polynomials, a small expression language and rational linear algebra.

mod matrix;
mod parse;
mod poly;
mod unipoly;

pub use matrix::{normalize_vec, poly_det, poly_kernel, rank_kernel, RationalMatrix};
pub use parse::{parse_expr, ParseError};
pub use poly::{sqrt_rational, Monomial, MultiPoly};
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: scale down before converting.
        let n = r.numer().to_string().len() as i32;
        let d = r.denom().to_string().len() as i32;
        let shift = (n - d).clamp(-300, 300);
        let s = r / Rational::from_integer(BigInt::from(10).pow(shift.unsigned_abs()));
        let base = s.to_f64().unwrap_or(0.0);
        if shift >= 0 {
            base * 10f64.powi(shift)
        } else {
            base / 10f64.powi(-shift)
        }
    })
}

/// Exact binary expansion of a finite float.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Parses `"3"`, `"-3/4"` or a plain JSON-ish number string.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Rational::from_integer(n));
    }
    let x: f64 = s.parse().ok()?;
    x.is_finite().then(|| from_f64(x))
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators and gcd of the numerators.
pub(crate) fn content_of<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    use num_integer::Integer;
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    let mut any = false;
    for r in it {
        if r.is_zero() {
            continue;
        }
        any = true;
        g = g.gcd(r.numer());
        l = l.lcm(r.denom());
    }
    any.then(|| Rational::new(g, l))
}

/// The twelve coordinates of the second prolongation `M^(2)` of `J^0(R^2, R)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    X1,
    X2,
    U,
    P1,
    P2,
    P11,
    P12,
    P22,
    P111,
    P112,
    P122,
    P222,
}

impl Coordinate {
    pub const ALL: [Coordinate; 12] = [
        Coordinate::X1,
        Coordinate::X2,
        Coordinate::U,
        Coordinate::P1,
        Coordinate::P2,
        Coordinate::P11,
        Coordinate::P12,
        Coordinate::P22,
        Coordinate::P111,
        Coordinate::P112,
        Coordinate::P122,
        Coordinate::P222,
    ];

    /// Coordinates of `M^(1)`, in frame order.
    pub const LEVEL1: [Coordinate; 8] = [
        Coordinate::X1,
        Coordinate::X2,
        Coordinate::U,
        Coordinate::P1,
        Coordinate::P2,
        Coordinate::P11,
        Coordinate::P12,
        Coordinate::P22,
    ];

    /// The fibre coordinates of `M^(2) -> M^(1)`.
    pub const THIRD: [Coordinate; 4] = [
        Coordinate::P111,
        Coordinate::P112,
        Coordinate::P122,
        Coordinate::P222,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Coordinate::X1 => "x1",
            Coordinate::X2 => "x2",
            Coordinate::U => "u",
            Coordinate::P1 => "p1",
            Coordinate::P2 => "p2",
            Coordinate::P11 => "p11",
            Coordinate::P12 => "p12",
            Coordinate::P22 => "p22",
            Coordinate::P111 => "p111",
            Coordinate::P112 => "p112",
            Coordinate::P122 => "p122",
            Coordinate::P222 => "p222",
        }
    }

    pub fn from_name(s: &str) -> Option<Coordinate> {
        Coordinate::ALL.iter().copied().find(|c| c.name() == s)
    }

    /// Jet order of the coordinate: 0 for `x, u`, 1 for `p_i`, ...
    pub fn order(self) -> u8 {
        match self {
            Coordinate::X1 | Coordinate::X2 | Coordinate::U => 0,
            Coordinate::P1 | Coordinate::P2 => 1,
            Coordinate::P11 | Coordinate::P12 | Coordinate::P22 => 2,
            _ => 3,
        }
    }

    /// Jet level of the manifold on which the coordinate first appears:
    /// `M = J^0` (order ≤ 1), `M^(1)` (order 2), `M^(2)` (order 3).
    pub fn level(self) -> u8 {
        self.order().saturating_sub(1)
    }

    /// Number of coordinates living on the manifold of the given level.
    pub fn count_at_level(level: u8) -> usize {
        match level {
            0 => 5,
            1 => 8,
            _ => 12,
        }
    }

    /// `p_i` for `i in {1, 2}`.
    pub fn p(i: usize) -> Coordinate {
        [Coordinate::P1, Coordinate::P2][i]
    }

    /// Symmetric second-order coordinate `p_ij`.
    pub fn pp(i: usize, j: usize) -> Coordinate {
        match i + j {
            0 => Coordinate::P11,
            1 => Coordinate::P12,
            _ => Coordinate::P22,
        }
    }

    /// Symmetric third-order coordinate `p_ijk`.
    pub fn ppp(i: usize, j: usize, k: usize) -> Coordinate {
        Coordinate::THIRD[i + j + k]
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
