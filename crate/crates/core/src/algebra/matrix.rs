use super::{MultiPoly, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Dense matrix over `Q`, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    pub rows: Vec<Vec<Rational>>,
    pub ncols: usize,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rational>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        RationalMatrix { rows, ncols }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        RationalMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| super::int(x)).collect())
                .collect(),
            ncols,
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self) -> usize {
        rank_kernel(self).0
    }

    /// Reduced row-echelon form with zero rows dropped. Two matrices have the
    /// same row space iff their RREFs are equal.
    pub fn rref(&self) -> RationalMatrix {
        let mut a = self.rows.clone();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..a.len() {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..self.ncols {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
        a.truncate(r);
        RationalMatrix {
            rows: a,
            ncols: self.ncols,
        }
    }

    pub fn same_row_space(&self, other: &RationalMatrix) -> bool {
        self.ncols == other.ncols && self.rref() == other.rref()
    }
}

/// Rank and a basis of the right kernel `{v : M v = 0}`, computed by
/// fraction-free (Bareiss) elimination on the integer-scaled matrix followed
/// by back-substitution. `rank + kernel.len() == ncols` always holds.
pub fn rank_kernel(m: &RationalMatrix) -> (usize, Vec<Vec<Rational>>) {
    let n = m.ncols;
    let mut a: Vec<Vec<BigInt>> = m
        .rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let lr = Rational::from_integer(l);
            row.iter().map(|x| (x * &lr).to_integer()).collect()
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..n {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            for j in c + 1..n {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut kernel = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); n];
        v[f] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Rational::zero();
            for j in pc + 1..n {
                if !a[i][j].is_zero() && !v[j].is_zero() {
                    s += Rational::from_integer(a[i][j].clone()) * &v[j];
                }
            }
            v[pc] = -s / Rational::from_integer(a[i][pc].clone());
        }
        kernel.push(v);
    }
    (rank, kernel)
}

/// Determinant of a square polynomial matrix by Laplace expansion over the
/// first rows, memoised on the set of columns still available.
pub fn poly_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    assert!(
        m.iter().all(|r| r.len() == n),
        "poly_det needs a square matrix"
    );
    if n == 0 {
        return MultiPoly::one();
    }
    let mut memo: HashMap<u32, MultiPoly> = HashMap::new();
    det_rec(m, 0, (1u32 << n) - 1, &mut memo)
}

fn det_rec(
    m: &[Vec<MultiPoly>],
    row: usize,
    cols: u32,
    memo: &mut HashMap<u32, MultiPoly>,
) -> MultiPoly {
    if row == m.len() {
        return MultiPoly::one();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = MultiPoly::zero();
    let mut sign_pos = true;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        if !m[row][c].is_zero() {
            let minor = det_rec(m, row + 1, cols & !(1 << c), memo);
            if !minor.is_zero() {
                let t = &m[row][c] * &minor;
                if sign_pos {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
        }
        sign_pos = !sign_pos;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Generators of the right kernel of a polynomial matrix over the field of
/// rational functions, returned as polynomial vectors (denominators cleared).
/// Fraction-free Gauss–Jordan elimination; rows are divided by their rational
/// content and common monomial factor as they go to limit growth.
pub fn poly_kernel(rows: &[Vec<MultiPoly>], ncols: usize) -> Vec<Vec<MultiPoly>> {
    let mut a: Vec<Vec<MultiPoly>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    // Full pivoting on the simplest entry keeps the kernel small.
    while r < a.len() {
        let cand = (r..a.len())
            .flat_map(|i| (0..ncols).map(move |c| (i, c)))
            .filter(|&(i, c)| !pivots.contains(&c) && !a[i][c].is_zero())
            .min_by_key(|&(i, c)| (!a[i][c].is_constant(), a[i][c].len(), a[i][c].degree()));
        let Some((p, c)) = cand else { break };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in 0..a.len() {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let row: Vec<MultiPoly> = (0..ncols)
                .map(|j| &(&piv * &a[i][j]) - &(&f * &a[r][j]))
                .collect();
            a[i] = normalize_vec(row);
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut v = vec![MultiPoly::zero(); ncols];
        // x_f = product of pivots; x_{p_i} = -a[i][f] * product of the other pivots.
        let mut all = MultiPoly::one();
        for (i, &pc) in pivots.iter().enumerate() {
            if !a[i][f].is_zero() {
                all = &all * &a[i][pc];
            }
        }
        v[f] = all.clone();
        for (i, &pc) in pivots.iter().enumerate() {
            if a[i][f].is_zero() {
                continue;
            }
            let others = all.div_exact(&a[i][pc]).expect("pivot divides product");
            v[pc] = -(&a[i][f] * &others);
        }
        out.push(normalize_vec(v));
    }
    out
}

/// Divides a polynomial vector by its rational content and common monomial
/// factor, and fixes the sign of the first non-zero entry's leading term.
pub fn normalize_vec(v: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut mono: Option<super::Monomial> = None;
    for x in v.iter().filter(|x| !x.is_zero()) {
        let m = x.monomial_content();
        mono = Some(match mono {
            None => m,
            Some(g) => g.gcd(&m),
        });
    }
    let Some(mono) = mono else { return v };
    let c = super::content_of(v.iter().flat_map(|x| x.terms().map(|(_, c)| c))).unwrap();
    let first_neg = v
        .iter()
        .find(|x| !x.is_zero())
        .and_then(|x| x.leading())
        .is_some_and(|(_, k)| num_traits::Signed::is_negative(k));
    let k = if first_neg { -c.recip() } else { c.recip() };
    v.into_iter()
        .map(|x| x.div_monomial(&mono).unwrap().scale(&k))
        .collect()
}
