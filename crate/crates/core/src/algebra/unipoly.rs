use super::Rational;
use num_traits::{One, Zero};

/// Dense univariate polynomial over `Q`, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Rational>);

impl UniPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + super::to_f64(c))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * super::int(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let n = self.0.len();
        if n <= dd {
            return (UniPoly(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); n - dd];
        let lead = d.lead();
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn monic(&self) -> UniPoly {
        let l = self.lead();
        if l.is_zero() {
            return self.clone();
        }
        UniPoly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Rational roots, each listed once.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let Some(deg) = self.degree() else {
            return out;
        };
        if deg == 0 {
            return out;
        }
        // Strip roots at zero first.
        let mut p = self.clone();
        if p.0[0].is_zero() {
            out.push(Rational::zero());
            let k = p.0.iter().position(|c| !c.is_zero()).unwrap();
            p = UniPoly::new(p.0[k..].to_vec());
        }
        let ints = integer_coefficients(&p.0);
        let (a0, an) = (ints[0].clone(), ints.last().unwrap().clone());
        let mut candidates: Vec<Rational> = Vec::new();
        if let (Some(ps), Some(qs)) = (divisors(&a0), divisors(&an)) {
            for n in &ps {
                for d in &qs {
                    let r = Rational::new(n.clone(), d.clone());
                    candidates.push(r.clone());
                    candidates.push(-r);
                }
            }
        }
        for x in real_roots_f64(&p) {
            candidates.extend(convergents(x, 1_000_000_000));
        }
        for c in candidates {
            if !out.contains(&c) && p.eval(&c).is_zero() {
                out.push(c);
            }
        }
        out.sort();
        out
    }

    /// Real roots in floating point, by bracketing between critical points,
    /// bisection and Newton polishing. Repeated roots may be reported once or
    /// missed; callers strip them exactly beforehand.
    pub fn real_roots(&self) -> Vec<f64> {
        real_roots_f64(self)
    }
}

fn integer_coefficients(c: &[Rational]) -> Vec<num_bigint::BigInt> {
    use num_integer::Integer;
    let l = c
        .iter()
        .fold(num_bigint::BigInt::one(), |l, x| l.lcm(x.denom()));
    c.iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect()
}

/// Positive divisors of `n`, or `None` when the number is too large to factor
/// cheaply (the caller then relies on numeric candidates).
fn divisors(n: &num_bigint::BigInt) -> Option<Vec<num_bigint::BigInt>> {
    use num_traits::{Signed, ToPrimitive};
    let mut m = n.abs().to_u64()?;
    if m == 0 {
        return None;
    }
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if p > 1_000_000 {
            break;
        }
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut x = *d;
            for _ in 0..=e {
                next.push(x);
                x = x.saturating_mul(p);
            }
        }
        divs = next;
        if divs.len() > 100_000 {
            return None;
        }
    }
    Some(divs.into_iter().map(num_bigint::BigInt::from).collect())
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        out.push(Rational::new(h2.into(), k2.into()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    out
}

fn real_roots_f64(p: &UniPoly) -> Vec<f64> {
    let Some(deg) = p.degree() else { return vec![] };
    if deg == 0 {
        return vec![];
    }
    let c: Vec<f64> = p.0.iter().map(super::to_f64).collect();
    let lead = c[deg];
    if deg == 1 {
        return vec![-c[0] / lead];
    }
    let bound = 1.0
        + c[..deg]
            .iter()
            .map(|x| (x / lead).abs())
            .fold(0.0, f64::max);
    let mut pts = vec![-bound];
    let mut crit = real_roots_f64(&p.derivative());
    crit.retain(|x| x.is_finite() && x.abs() < bound);
    crit.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.extend(crit);
    pts.push(bound);
    let f = |x: f64| p.eval_f64(x);
    let mut roots: Vec<f64> = Vec::new();
    for w in pts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            push_root(&mut roots, lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            if fhi.abs() < 1e-12 * (1.0 + hi.abs()) {
                push_root(&mut roots, hi);
            }
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * (1.0 + lo.abs()) {
                break;
            }
        }
        let mut x = 0.5 * (lo + hi);
        let dp = p.derivative();
        for _ in 0..5 {
            let d = dp.eval_f64(x);
            if d == 0.0 {
                break;
            }
            let nx = x - f(x) / d;
            if nx >= w[0] && nx <= w[1] && f(nx).abs() <= f(x).abs() {
                x = nx;
            } else {
                break;
            }
        }
        push_root(&mut roots, x);
    }
    if let Some(last) = pts.last() {
        if f(*last) == 0.0 {
            push_root(&mut roots, *last);
        }
    }
    roots
}

fn push_root(roots: &mut Vec<f64>, x: f64) {
    if !roots
        .iter()
        .any(|r| (r - x).abs() <= 1e-12 * (1.0 + x.abs()))
    {
        roots.push(x);
    }
}
