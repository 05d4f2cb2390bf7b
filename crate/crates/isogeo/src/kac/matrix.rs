//! The tridiagonal ladder matrix, its two-factor Kronecker sum, and the
//! doubled block matrix whose first-row powers generate the focal row data.

use super::bipoly::{rat, BiPoly, Rat};
use crate::Error;

/// Which formal variable the ladder parameter occupies in a `BiPoly`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Var {
    First,
    Second,
}

fn var_monomial(var: Var, c: Rat) -> BiPoly {
    match var {
        Var::First => BiPoly::monomial(1, 0, c),
        Var::Second => BiPoly::monomial(0, 1, c),
    }
}

/// d x d tridiagonal matrix: superdiagonal (l, l+1) = l+1, subdiagonal
/// (l, l-1) = (d - l) * tau with tau placed in the requested variable slot.
pub fn ladder_matrix(d: usize, var: Var) -> Vec<Vec<BiPoly>> {
    let mut m = vec![vec![BiPoly::zero(); d]; d];
    for l in 0..d {
        if l + 1 < d {
            m[l][l + 1] = BiPoly::constant(rat((l + 1) as i64));
        }
        if l >= 1 {
            m[l][l - 1] = var_monomial(var, rat((d - l) as i64));
        }
    }
    m
}

/// Flat index for the two-factor grid: (l, nu) -> l * n + nu.
pub fn flat(l: usize, nu: usize, n: usize) -> usize {
    l * n + nu
}

/// Kronecker sum I_m (x) L_n(tau1) + L_m(tau2) (x) I_n, size mn x mn.
/// tau1 lives in the first variable slot, tau2 in the second.
pub fn kronecker_sum(m: usize, n: usize) -> Vec<Vec<BiPoly>> {
    let ln = ladder_matrix(n, Var::First);
    let lm = ladder_matrix(m, Var::Second);
    let size = m * n;
    let mut out = vec![vec![BiPoly::zero(); size]; size];
    for l in 0..m {
        for nu in 0..n {
            let row = flat(l, nu, n);
            for nu2 in 0..n {
                if !ln[nu][nu2].is_zero() {
                    let col = flat(l, nu2, n);
                    out[row][col] = out[row][col].add(&ln[nu][nu2]);
                }
            }
            for l2 in 0..m {
                if !lm[l][l2].is_zero() {
                    let col = flat(l2, nu, n);
                    out[row][col] = out[row][col].add(&lm[l][l2]);
                }
            }
        }
    }
    out
}

/// Doubled block matrix [[S, I], [0, S]] of size 2mn for S the Kronecker sum.
pub fn doubled_matrix(m: usize, n: usize) -> Vec<Vec<BiPoly>> {
    let s = kronecker_sum(m, n);
    let size = m * n;
    let mut q = vec![vec![BiPoly::zero(); 2 * size]; 2 * size];
    for i in 0..size {
        for j in 0..size {
            if !s[i][j].is_zero() {
                q[i][j] = s[i][j].clone();
                q[size + i][size + j] = s[i][j].clone();
            }
        }
        q[i][size + i] = BiPoly::one();
    }
    q
}

/// row <- row * mat, exact.
pub fn row_times(row: &[BiPoly], mat: &[Vec<BiPoly>]) -> Vec<BiPoly> {
    let cols = mat[0].len();
    let mut out = vec![BiPoly::zero(); cols];
    for (i, r) in row.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        for j in 0..cols {
            if !mat[i][j].is_zero() {
                out[j] = out[j].add(&r.mul(&mat[i][j]));
            }
        }
    }
    out
}

/// e_1 as a symbolic row of the given length.
pub fn first_unit_row(len: usize) -> Vec<BiPoly> {
    let mut row = vec![BiPoly::zero(); len];
    row[0] = BiPoly::one();
    row
}

/// Successive rows e_1 Q^k for k = 0..=kmax over the doubled matrix.
pub fn doubled_row_powers(m: usize, n: usize, kmax: usize) -> Vec<Vec<BiPoly>> {
    let q = doubled_matrix(m, n);
    let mut rows = Vec::with_capacity(kmax + 1);
    let mut row = first_unit_row(2 * m * n);
    rows.push(row.clone());
    for _ in 0..kmax {
        row = row_times(&row, &q);
        rows.push(row.clone());
    }
    rows
}

/// Evaluate a symbolic matrix at rational (v1, v2).
pub fn eval_matrix(mat: &[Vec<BiPoly>], v1: &Rat, v2: &Rat) -> Vec<Vec<Rat>> {
    mat.iter()
        .map(|row| row.iter().map(|p| p.eval(v1, v2)).collect())
        .collect()
}

/// Evaluate a symbolic row at rational (v1, v2).
pub fn eval_row(row: &[BiPoly], v1: &Rat, v2: &Rat) -> Vec<Rat> {
    row.iter().map(|p| p.eval(v1, v2)).collect()
}

/// Characteristic polynomial det(x I - L_d(tau)) with x in the first
/// variable slot and tau in the second.
pub fn ladder_charpoly(d: usize) -> BiPoly {
    let l = ladder_matrix(d, Var::Second);
    let mut m = vec![vec![BiPoly::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            m[i][j] = if i == j {
                BiPoly::var1().sub(&l[i][j])
            } else {
                l[i][j].neg()
            };
        }
    }
    super::bipoly::det_bipoly(&m)
}

/// The expected factored form: prod over positive k = d-1, d-3, ... of
/// (x^2 - k^2 tau), times x when d is odd.
pub fn ladder_charpoly_expected(d: usize) -> BiPoly {
    let mut acc = BiPoly::one();
    let mut k = (d as i64) - 1;
    while k > 0 {
        // x^2 - k^2 tau
        let factor = BiPoly::monomial(2, 0, rat(1)).sub(&BiPoly::monomial(0, 1, rat(k * k)));
        acc = acc.mul(&factor);
        k -= 2;
    }
    if d % 2 == 1 {
        acc = acc.mul(&BiPoly::var1());
    }
    acc
}

/// Numeric eigenvalues of a matrix that a positive diagonal rescaling turns
/// symmetric, which is the case for the ladder and its Kronecker sums
/// whenever the weights are positive (opposite off-diagonal entries then
/// share a sign). The rescaling is built by propagation over the support
/// graph and validated on every edge, so misuse fails loudly instead of
/// silently returning a wrong spectrum. Unshifted QR on the raw matrix can
/// cycle on these plus/minus-paired spectra; the symmetric solve cannot.
pub fn symmetrized_eigenvalues(mat: &[Vec<Rat>]) -> Result<Vec<f64>, Error> {
    let n = mat.len();
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| crate::series::rat_to_f64(&mat[i][j]));
    // log-scales of the diagonal similarity, one BFS per support component
    let mut log_d = vec![f64::NAN; n];
    for start in 0..n {
        if !log_d[start].is_nan() {
            continue;
        }
        log_d[start] = 0.0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (u, v) = (a[(i, j)], a[(j, i)]);
                if u == 0.0 && v == 0.0 {
                    continue;
                }
                if u * v <= 0.0 {
                    return Err(Error::Numerical(format!(
                        "no positive rescaling: entries ({i},{j}) and ({j},{i}) are not sign-matched"
                    )));
                }
                // d_i u / d_j = d_j v / d_i  =>  log d_j = log d_i + (1/2) ln(u/v)
                let target = log_d[i] + 0.5 * (u / v).ln();
                if log_d[j].is_nan() {
                    log_d[j] = target;
                    queue.push_back(j);
                } else if (log_d[j] - target).abs() > 1e-9 {
                    return Err(Error::Numerical(format!(
                        "no positive rescaling: cycle through ({i},{j}) is inconsistent"
                    )));
                }
            }
        }
    }
    let s = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            a[(i, j)]
        } else {
            a[(i, j)] * (log_d[i] - log_d[j]).exp()
        }
    });
    let sym = (&s + s.transpose()) * 0.5;
    let mut eigs: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

/// Kernel vector of the odd-size ladder matrix at rational tau:
/// v_0 = 1, v_1 = 0, v_{l+1} = -(d - l) tau v_{l-1} / (l + 1).
pub fn ladder_kernel(d: usize, tau: &Rat) -> Vec<Rat> {
    use num_traits::{One, Zero};
    assert!(d % 2 == 1, "ladder kernel exists only in odd size");
    let mut v = vec![Rat::zero(); d];
    v[0] = Rat::one();
    for l in 1..d - 1 {
        let next = -(rat((d - l) as i64) * tau * &v[l - 1]) / rat((l + 1) as i64);
        v[l + 1] = next;
    }
    v
}
