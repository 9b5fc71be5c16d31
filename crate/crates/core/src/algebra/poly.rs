use super::{content_of, fmt_rational, Coordinate, Rational};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Exponent vector over the twelve coordinates, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u8; 12]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; 12])
    }

    pub fn var(c: Coordinate) -> Self {
        let mut e = [0; 12];
        e[c.index()] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, c: Coordinate) -> u8 {
        self.0[c.index()]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Monomial(e)
    }

    /// `self / other` when it divides exactly.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(Monomial(e))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = (*a).min(*b);
        }
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn write(&self, f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for c in Coordinate::ALL {
            let e = self.exp(c);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(c.name())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        self.write(f)
    }
}

/// Sparse polynomial with rational coefficients in the twelve jet coordinates.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        MultiPoly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        MultiPoly::constant(super::int(n))
    }

    pub fn var(c: Coordinate) -> Self {
        MultiPoly::term(Rational::one(), Monomial::var(c))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, c: Coordinate) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exp(c) as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn uses(&self, c: Coordinate) -> bool {
        self.terms.keys().any(|m| m.exp(c) > 0)
    }

    /// Highest jet level among the coordinates that occur.
    pub fn level(&self) -> u8 {
        Coordinate::ALL
            .iter()
            .filter(|c| self.uses(**c))
            .map(|c| c.level())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, k: &Rational) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to one coordinate.
    pub fn derivative(&self, c: Coordinate) -> MultiPoly {
        let i = c.index();
        let mut out = MultiPoly::zero();
        for (m, k) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2.0[i] -= 1;
            out.add_term(m2, k * super::int(e as i64));
        }
        out
    }

    pub fn eval(&self, values: &[Rational; 12]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    if values[i].is_zero() {
                        t = Rational::zero();
                        break;
                    }
                    t *= num_traits::pow(values[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, values: &[f64; 12]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = super::to_f64(c);
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t *= values[i].powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Substitutes a rational value for one coordinate.
    pub fn specialize(&self, c: Coordinate, v: &Rational) -> MultiPoly {
        let i = c.index();
        let mut out = MultiPoly::zero();
        for (m, k) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                out.add_term(*m, k.clone());
                continue;
            }
            let mut m2 = *m;
            m2.0[i] = 0;
            out.add_term(m2, k * num_traits::pow(v.clone(), e as usize));
        }
        out
    }

    /// Substitutes values for several coordinates at once.
    pub fn specialize_all(&self, subs: &[(Coordinate, Rational)]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, k) in &self.terms {
            let mut m2 = *m;
            let mut k2 = k.clone();
            for (c, v) in subs {
                let e = m2.0[c.index()];
                if e > 0 {
                    k2 *= num_traits::pow(v.clone(), e as usize);
                    m2.0[c.index()] = 0;
                }
            }
            out.add_term(m2, k2);
        }
        out
    }

    /// Replaces each coordinate `c` with `subs[c]` (or keeps it when `None`).
    pub fn compose(&self, subs: &[Option<MultiPoly>; 12]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        let mut cache: Vec<Vec<MultiPoly>> = vec![Vec::new(); 12];
        for (m, k) in &self.terms {
            let mut t = MultiPoly::term(k.clone(), Monomial::one());
            let mut kept = Monomial::one();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &subs[i] {
                    None => kept.0[i] = e,
                    Some(s) => {
                        let powers = &mut cache[i];
                        while powers.len() < e as usize {
                            let next = match powers.last() {
                                None => s.clone(),
                                Some(p) => p * s,
                            };
                            powers.push(next);
                        }
                        t = &t * &powers[e as usize - 1];
                    }
                }
            }
            out += &t.mul_monomial(&kept);
        }
        out
    }

    /// Collects the polynomial as a polynomial in `vars` whose coefficients
    /// are polynomials in the remaining coordinates. Keys are exponent vectors
    /// over `vars`.
    pub fn collect(&self, vars: &[Coordinate]) -> BTreeMap<Vec<u8>, MultiPoly> {
        let mut out: BTreeMap<Vec<u8>, MultiPoly> = BTreeMap::new();
        for (m, k) in &self.terms {
            let key: Vec<u8> = vars.iter().map(|c| m.exp(*c)).collect();
            let mut rest = *m;
            for c in vars {
                rest.0[c.index()] = 0;
            }
            out.entry(key).or_default().add_term(rest, k.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Rational content: positive gcd of numerators over lcm of denominators.
    pub fn content(&self) -> Option<Rational> {
        content_of(self.terms.values())
    }

    /// Divides by the rational content and makes the leading coefficient positive.
    pub fn primitive(&self) -> MultiPoly {
        let Some(c) = self.content() else {
            return MultiPoly::zero();
        };
        let sign_neg = self
            .leading()
            .map(|(_, k)| k.is_negative())
            .unwrap_or(false);
        let k = if sign_neg { -c.recip() } else { c.recip() };
        self.scale(&k)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(*first, |g, m| g.gcd(m))
    }

    pub fn div_monomial(&self, mono: &Monomial) -> Option<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.div(mono)?, c.clone());
        }
        Some(MultiPoly { terms })
    }

    /// Exact division by `d`, if `d` divides `self` in `Q[x]`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (*dm, dc.clone());
        let mut rem = self.clone();
        let mut q = MultiPoly::zero();
        let mut guard = 0usize;
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            let t = MultiPoly::term(c, m);
            rem -= &(&t * d);
            q += &t;
            guard += 1;
            if guard > 100_000 {
                return None;
            }
        }
        Some(q)
    }

    /// Square root in `Q[x]` when the polynomial is a perfect square.
    pub fn sqrt(&self) -> Option<MultiPoly> {
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        let (lm, lc) = self.leading()?;
        let mut half = Monomial::one();
        for (h, e) in half.0.iter_mut().zip(lm.0.iter()) {
            if e % 2 == 1 {
                return None;
            }
            *h = e / 2;
        }
        let root_c = rational_sqrt(lc)?;
        let lead = MultiPoly::term(root_c.clone(), half);
        let two_lead_c = &root_c * super::int(2);
        let mut q = lead;
        let mut rem = self - &(&q * &q);
        let mut guard = 0usize;
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&half)?;
            if m >= half {
                return None;
            }
            let t = MultiPoly::term(rc / &two_lead_c, m);
            let step = &(&(&q * &t) * &MultiPoly::int(2)) + &(&t * &t);
            rem -= &step;
            q += &t;
            guard += 1;
            if guard > 10_000 {
                return None;
            }
        }
        Some(q)
    }

    /// `self` and `other` are proportional over the field of rational
    /// functions in the coordinates *not* listed in `vars`, viewing both as
    /// polynomials in `vars`. Both must be non-zero.
    pub fn proportional_over(&self, other: &MultiPoly, vars: &[Coordinate]) -> bool {
        if self.is_zero() || other.is_zero() {
            return false;
        }
        let a = self.collect(vars);
        let b = other.collect(vars);
        if a.len() != b.len() || a.keys().zip(b.keys()).any(|(x, y)| x != y) {
            return false;
        }
        let (k0, a0) = a.iter().next().unwrap();
        let b0 = &b[k0];
        a.iter().all(|(k, ak)| (ak * b0) == (&b[k] * a0))
    }

    pub fn parse(s: &str) -> Result<MultiPoly, super::ParseError> {
        super::parse_expr(s)
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

pub fn sqrt_rational(r: &Rational) -> Option<Rational> {
    rational_sqrt(r)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                f.write_str(&fmt_rational(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", fmt_rational(&a))?;
                }
                m.write(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl From<Coordinate> for MultiPoly {
    fn from(c: Coordinate) -> Self {
        MultiPoly::var(c)
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<i64> for MultiPoly {
    fn from(n: i64) -> Self {
        MultiPoly::int(n)
    }
}

impl std::str::FromStr for MultiPoly {
    type Err = super::ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse_expr(s)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly { (&self).$f(&rhs) }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly { (&self).$f(rhs) }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly { self.$f(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
