//! Exact bivariate polynomials over the rationals, a division-free subset
//! determinant, dense rational rank, and tensor-grid Lagrange interpolation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Polynomial in two formal variables with rational coefficients; the
/// interpretation of the variables (tau1/tau2, or x/tau) is up to the caller.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    /// (deg in var1, deg in var2) -> coefficient; zero coefficients removed.
    pub terms: BTreeMap<(u32, u32), Rat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert((0, 0), c);
        }
        p
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn monomial(i: u32, j: u32, c: Rat) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert((i, j), c);
        }
        p
    }

    pub fn var1() -> Self {
        Self::monomial(1, 0, Rat::one())
    }

    pub fn var2() -> Self {
        Self::monomial(0, 1, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let e = out.terms.entry(*k).or_insert_with(Rat::zero);
            *e += v;
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        out
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BiPoly {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                let key = (i1 + i2, j1 + j2);
                let e = out.terms.entry(key).or_insert_with(Rat::zero);
                *e += c1 * c2;
                if e.is_zero() {
                    out.terms.remove(&key);
                }
            }
        }
        out
    }

    pub fn eval(&self, v1: &Rat, v2: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for ((i, j), c) in &self.terms {
            acc += c * pow_rat(v1, *i) * pow_rat(v2, *j);
        }
        acc
    }
}

fn pow_rat(v: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= v;
    }
    acc
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if *i > 0 {
                write!(f, " a^{i}")?;
            }
            if *j > 0 {
                write!(f, " b^{j}")?;
            }
        }
        Ok(())
    }
}

/// Determinant by dynamic programming over column subsets (division-free,
/// exact). Rows are processed in order; the state is the set of used columns.
pub fn det_bipoly(mat: &[Vec<BiPoly>]) -> BiPoly {
    let n = mat.len();
    assert!(n <= 20, "subset determinant caps at 20 columns");
    assert!(mat.iter().all(|r| r.len() == n));
    if n == 0 {
        return BiPoly::one();
    }
    let full = (1usize << n) - 1;
    let mut f: Vec<BiPoly> = vec![BiPoly::zero(); 1 << n];
    f[0] = BiPoly::one();
    for mask in 0..full {
        if f[mask].is_zero() {
            continue;
        }
        let row = (mask as u32).count_ones() as usize;
        for j in 0..n {
            if mask & (1 << j) != 0 || mat[row][j].is_zero() {
                continue;
            }
            let above = ((mask >> (j + 1)) as u32).count_ones();
            let contrib = mat[row][j].mul(&f[mask]);
            let contrib = if above % 2 == 1 { contrib.neg() } else { contrib };
            f[mask | (1 << j)] = f[mask | (1 << j)].add(&contrib);
        }
        f[mask] = BiPoly::zero(); // free memory as layers complete
    }
    f[full].clone()
}

/// Exact rank of a rational matrix by Gaussian elimination.
pub fn rational_rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot else {
            col += 1;
            continue;
        };
        m.swap(rank, pr);
        let pv = m[rank][col].clone();
        for r in rank + 1..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..ncols {
                let delta = &factor * &m[rank][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Exact determinant of a square rational matrix (fraction Gaussian).
pub fn rational_det(rows: &[Vec<Rat>]) -> Rat {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let n = m.len();
    let mut det = Rat::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero());
        let Some(pr) = pivot else {
            return Rat::zero();
        };
        if pr != k {
            m.swap(k, pr);
            det = -det;
        }
        let pv = m[k][k].clone();
        det *= &pv;
        for r in k + 1..n {
            if m[r][k].is_zero() {
                continue;
            }
            let factor = &m[r][k] / &pv;
            for c in k..n {
                let delta = &factor * &m[k][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Coefficients of the univariate interpolating polynomial through the
/// points (xs[i], ys[i]); exact Lagrange with rational nodes.
pub fn lagrange(xs: &[Rat], ys: &[Rat]) -> Vec<Rat> {
    let n = xs.len();
    assert_eq!(n, ys.len());
    let mut coeffs = vec![Rat::zero(); n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![Rat::zero(); n];
        basis[0] = Rat::one();
        let mut deg = 0;
        let mut denom = Rat::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            denom *= &xs[i] - &xs[j];
            // multiply basis by (x - x_j)
            for k in (0..=deg).rev() {
                let b = basis[k].clone();
                basis[k + 1] += &b;
                basis[k] = -&xs[j] * b;
            }
            deg += 1;
        }
        let w = &ys[i] / denom;
        for k in 0..=deg {
            coeffs[k] += &basis[k] * &w;
        }
    }
    while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
    coeffs
}

/// Bivariate polynomial from a tensor grid of exact values:
/// result[i][j] is the coefficient of a^i b^j with a the first grid variable.
pub fn lagrange_bivariate(
    avals: &[Rat],
    bvals: &[Rat],
    value: &dyn Fn(usize, usize) -> Rat,
) -> Vec<Vec<Rat>> {
    // interpolate along b for each a-node, then along a for each b-coefficient
    let per_a: Vec<Vec<Rat>> = (0..avals.len())
        .map(|ia| {
            let ys: Vec<Rat> = (0..bvals.len()).map(|ib| value(ia, ib)).collect();
            lagrange(bvals, &ys)
        })
        .collect();
    let max_bdeg = per_a.iter().map(|c| c.len()).max().unwrap_or(1);
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for jb in 0..max_bdeg {
        let ys: Vec<Rat> = per_a
            .iter()
            .map(|c| c.get(jb).cloned().unwrap_or_else(Rat::zero))
            .collect();
        let acoeffs = lagrange(avals, &ys);
        for (ia, c) in acoeffs.into_iter().enumerate() {
            while out.len() <= ia {
                out.push(Vec::new());
            }
            while out[ia].len() <= jb {
                out[ia].push(Rat::zero());
            }
            out[ia][jb] = c;
        }
    }
    out
}

/// Leading coefficient of a bivariate coefficient table under "degree in the
/// first variable, then in the second" ordering; `None` for the zero table.
pub fn graded_lead(table: &[Vec<Rat>]) -> Option<Rat> {
    for row in table.iter().rev() {
        for c in row.iter().rev() {
            if !c.is_zero() {
                return Some(c.clone());
            }
        }
    }
    None
}

/// Degree of the table in the first variable (-1 encoded as None for zero).
pub fn degree_in_first(table: &[Vec<Rat>]) -> Option<usize> {
    (0..table.len())
        .rev()
        .find(|&i| table[i].iter().any(|c| !c.is_zero()))
}

pub fn degree_in_second(table: &[Vec<Rat>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for row in table {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() && best.map(|b| j > b).unwrap_or(true) {
                best = Some(j);
            }
        }
    }
    best
}

/// Sign check for a rational: strictly positive.
pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}
