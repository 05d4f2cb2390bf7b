//! Entrywise recurrences for the focal row polynomials and the adjoint
//! transport recurrence, kept independent of the matrix-power code so the
//! two can cross-check each other.

use super::bipoly::{rat, BiPoly, Rat};
use num_traits::Zero;

/// p and q tables indexed [k][l][nu]; p starts as the unit at (0,0) and q at
/// zero. Out-of-range neighbors contribute nothing.
pub struct RowTables {
    pub m: usize,
    pub n: usize,
    pub p: Vec<Vec<Vec<BiPoly>>>,
    pub q: Vec<Vec<Vec<BiPoly>>>,
}

fn zero_grid(m: usize, n: usize) -> Vec<Vec<BiPoly>> {
    vec![vec![BiPoly::zero(); n]; m]
}

fn step_grid(prev: &[Vec<BiPoly>], m: usize, n: usize) -> Vec<Vec<BiPoly>> {
    let mut next = zero_grid(m, n);
    let tau1 = BiPoly::var1();
    let tau2 = BiPoly::var2();
    for l in 0..m {
        for nu in 0..n {
            let mut acc = BiPoly::zero();
            if l >= 1 {
                acc = acc.add(&prev[l - 1][nu].scale(&rat(l as i64)));
            }
            if l + 1 < m {
                let w = prev[l + 1][nu].scale(&rat((m - l - 1) as i64));
                acc = acc.add(&w.mul(&tau2));
            }
            if nu >= 1 {
                acc = acc.add(&prev[l][nu - 1].scale(&rat(nu as i64)));
            }
            if nu + 1 < n {
                let w = prev[l][nu + 1].scale(&rat((n - nu - 1) as i64));
                acc = acc.add(&w.mul(&tau1));
            }
            next[l][nu] = acc;
        }
    }
    next
}

pub fn row_tables(m: usize, n: usize, kmax: usize) -> RowTables {
    let mut p = Vec::with_capacity(kmax + 1);
    let mut q = Vec::with_capacity(kmax + 1);
    let mut p0 = zero_grid(m, n);
    p0[0][0] = BiPoly::one();
    p.push(p0);
    q.push(zero_grid(m, n));
    for k in 0..kmax {
        let pn = step_grid(&p[k], m, n);
        let mut qn = step_grid(&q[k], m, n);
        for l in 0..m {
            for nu in 0..n {
                qn[l][nu] = qn[l][nu].add(&p[k][l][nu]);
            }
        }
        p.push(pn);
        q.push(qn);
    }
    RowTables { m, n, p, q }
}

impl RowTables {
    /// Flatten level k into the doubled row layout (p block, then q block).
    pub fn doubled_row(&self, k: usize) -> Vec<BiPoly> {
        let mut row = Vec::with_capacity(2 * self.m * self.n);
        for l in 0..self.m {
            for nu in 0..self.n {
                row.push(self.p[k][l][nu].clone());
            }
        }
        for l in 0..self.m {
            for nu in 0..self.n {
                row.push(self.q[k][l][nu].clone());
            }
        }
        row
    }
}

/// One level of the adjoint transport recurrence at rational tau values;
/// acts on grids of rational data with out-of-range neighbors zero.
fn adjoint_step(
    grid: &[Vec<Rat>],
    m: usize,
    n: usize,
    t1: &Rat,
    t2: &Rat,
) -> Vec<Vec<Rat>> {
    let mut next = vec![vec![Rat::zero(); n]; m];
    for l in 0..m {
        for nu in 0..n {
            let mut acc = Rat::zero();
            if l + 1 < m {
                acc += rat((l + 1) as i64) * &grid[l + 1][nu];
            }
            if l >= 1 {
                acc += rat((m - l) as i64) * t2 * &grid[l - 1][nu];
            }
            if nu + 1 < n {
                acc += rat((nu + 1) as i64) * &grid[l][nu + 1];
            }
            if nu >= 1 {
                acc += rat((n - nu) as i64) * t1 * &grid[l][nu - 1];
            }
            next[l][nu] = acc;
        }
    }
    next
}

/// Evolve coupled (alpha, beta) grids k steps: beta moves by the adjoint
/// step alone, alpha by the adjoint step plus the previous beta.
pub fn transport_evolve(
    alpha0: &[Vec<Rat>],
    beta0: &[Vec<Rat>],
    m: usize,
    n: usize,
    t1: &Rat,
    t2: &Rat,
    k: usize,
) -> (Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
    let mut a = alpha0.to_vec();
    let mut b = beta0.to_vec();
    for _ in 0..k {
        let an = adjoint_step(&a, m, n, t1, t2);
        let bn = adjoint_step(&b, m, n, t1, t2);
        let mut an2 = an;
        for l in 0..m {
            for nu in 0..n {
                an2[l][nu] += &b[l][nu];
            }
        }
        a = an2;
        b = bn;
    }
    (a, b)
}

/// The transported corner value predicted from the row tables:
/// sum over the grid of p_k * alpha0 + q_k * beta0, evaluated at (t1, t2).
pub fn transported_corner(
    tables: &RowTables,
    alpha0: &[Vec<Rat>],
    beta0: &[Vec<Rat>],
    t1: &Rat,
    t2: &Rat,
    k: usize,
) -> Rat {
    let mut acc = Rat::zero();
    for l in 0..tables.m {
        for nu in 0..tables.n {
            acc += tables.p[k][l][nu].eval(t1, t2) * &alpha0[l][nu];
            acc += tables.q[k][l][nu].eval(t1, t2) * &beta0[l][nu];
        }
    }
    acc
}
