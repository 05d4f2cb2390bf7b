//! Exact verification battery for the ladder-matrix calculus: spectra,
//! determinant doubling, row-power identities, coefficient structure,
//! exceptional parameter angles, and rank statements.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::bipoly::{
    degree_in_first, degree_in_second, lagrange_bivariate, rat, ratio, rational_det,
    rational_rank, BiPoly, Rat,
};
use super::matrix::{
    doubled_matrix, doubled_row_powers, eval_matrix, flat, kronecker_sum, ladder_charpoly,
    ladder_charpoly_expected, ladder_kernel,
};
use super::recurrence::row_tables;
use crate::{Error, Result};

/// det(xI - L_d) equals the product of quadratic factors (x^2 - k^2 tau)
/// over positive k stepping down by 2, times x when d is odd.
pub fn charpoly_product_check(d: usize) -> bool {
    ladder_charpoly(d) == ladder_charpoly_expected(d)
}

/// Symbolic determinant of the doubled block matrix equals the square of
/// the Kronecker-sum determinant.
pub fn doubled_determinant_check(m: usize, n: usize) -> bool {
    let q = doubled_matrix(m, n);
    let s = kronecker_sum(m, n);
    let dq = super::bipoly::det_bipoly(&q);
    let ds = super::bipoly::det_bipoly(&s);
    dq == ds.mul(&ds)
}

/// The entrywise recurrence tables reproduce the first-row powers of the
/// doubled matrix for every level k <= kmax (exact polynomial identity).
pub fn row_power_identity_check(m: usize, n: usize, kmax: usize) -> bool {
    let tables = row_tables(m, n, kmax);
    let rows = doubled_row_powers(m, n, kmax);
    (0..=kmax).all(|k| tables.doubled_row(k) == rows[k])
}

pub struct CoefficientStructure {
    pub parity_ok: bool,
    pub factorial_ok: bool,
}

/// Exhaustive support, parity, and leading-value checks on the tables:
/// p vanishes unless k - l - nu is an even nonnegative integer, q vanishes
/// unless k - 1 - l - nu is, and the first admissible p level is (l + nu)!.
pub fn coefficient_structure_check(m: usize, n: usize, kmax: usize) -> CoefficientStructure {
    let tables = row_tables(m, n, kmax);
    let mut parity_ok = true;
    let mut factorial_ok = true;
    for k in 0..=kmax {
        for l in 0..m {
            for nu in 0..n {
                let d = k as i64 - l as i64 - nu as i64;
                let p_admissible = d >= 0 && d % 2 == 0;
                if !p_admissible && !tables.p[k][l][nu].is_zero() {
                    parity_ok = false;
                }
                let dq = d - 1;
                let q_admissible = dq >= 0 && dq % 2 == 0;
                if !q_admissible && !tables.q[k][l][nu].is_zero() {
                    parity_ok = false;
                }
                if d == 0 {
                    let expect = BiPoly::constant(Rat::from_integer(factorial(l + nu)));
                    if tables.p[k][l][nu] != expect {
                        factorial_ok = false;
                    }
                }
            }
        }
    }
    CoefficientStructure { parity_ok, factorial_ok }
}

fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

pub struct DegreeProfile {
    pub iota: usize,
    pub deg_m: usize,
    pub deg_n: usize,
    pub corner_positive: bool,
}

/// For a fixed cell (l, nu, k) with s = (k - l - nu)/2 steps of ladder
/// weight, interpolate each tau-coefficient as a polynomial in the two grid
/// sizes and report its bidegree. The expected profile for the coefficient
/// of tau1^iota tau2^(s-iota) is degree s - iota in m, iota in n, with a
/// positive coefficient on the corner monomial.
pub fn coefficient_degree_profiles(l: usize, nu: usize, k: usize) -> Result<Vec<DegreeProfile>> {
    let d = k as i64 - l as i64 - nu as i64;
    if d < 0 || d % 2 != 0 {
        return Err(Error::Usage(format!(
            "cell ({l},{nu},{k}) has no admissible ladder weight"
        )));
    }
    let s = (d / 2) as usize;
    let nodes = s + 2;
    let mvals: Vec<Rat> = (0..nodes).map(|i| rat((l + 1 + i) as i64)).collect();
    let nvals: Vec<Rat> = (0..nodes).map(|i| rat((nu + 1 + i) as i64)).collect();
    // table of p_{l,nu,k} at each grid size, one run per (m, n) node pair
    let mut values = vec![vec![BiPoly::zero(); nodes]; nodes];
    for (im, mv) in mvals.iter().enumerate() {
        for (inn, nv) in nvals.iter().enumerate() {
            let mm = rat_to_usize(mv);
            let nn = rat_to_usize(nv);
            let tables = row_tables(mm, nn, k);
            values[im][inn] = tables.p[k][l][nu].clone();
        }
    }
    let mut out = Vec::new();
    for iota in 0..=s {
        let coeffs = lagrange_bivariate(&mvals, &nvals, &|im, inn| {
            values[im][inn].coeff(iota as u32, (s - iota) as u32)
        });
        let deg_m = degree_in_first(&coeffs).unwrap_or(0);
        let deg_n = degree_in_second(&coeffs).unwrap_or(0);
        let corner = coeffs
            .get(s - iota)
            .and_then(|row| row.get(iota))
            .cloned()
            .unwrap_or_else(Rat::zero);
        out.push(DegreeProfile {
            iota,
            deg_m,
            deg_n,
            corner_positive: corner.is_positive(),
        });
    }
    Ok(out)
}

fn rat_to_usize(r: &Rat) -> usize {
    use num_traits::ToPrimitive;
    r.to_integer().to_usize().expect("small positive integer")
}

/// True when every tau-coefficient of the cell matches the expected
/// bidegree and positivity profile.
pub fn coefficient_degree_check(l: usize, nu: usize, k: usize) -> Result<bool> {
    let s = (k - l - nu) / 2;
    let profiles = coefficient_degree_profiles(l, nu, k)?;
    Ok(profiles.iter().all(|p| {
        p.deg_m == s - p.iota && p.deg_n == p.iota && p.corner_positive
    }))
}

pub struct ExceptionalAngles {
    pub singular: Vec<Rat>,
    pub resonance: Vec<Rat>,
}

/// Angle-parameter values in (-1, 1) at which the Kronecker sum either
/// gains extra kernel (singular) or has colliding eigenvalues (resonance).
/// With spectra a * sqrt(tau2) + b * sqrt(tau1) for a = m-1-2i,
/// b = n-1-2j and tau2, tau1 proportional to -(1-C), -(1+C):
///   singular:  C = (a^2 - b^2)/(a^2 + b^2) over positive a, b;
///   resonance: C = (da^2 - db^2)/(da^2 + db^2) over index gaps
///              da = |i - i'| >= 1, db = |j - j'| >= 1.
pub fn exceptional_angles(m: usize, n: usize) -> ExceptionalAngles {
    let pos = |d: usize| -> Vec<i64> {
        let mut v = Vec::new();
        let mut k = d as i64 - 1;
        while k > 0 {
            v.push(k);
            k -= 2;
        }
        v
    };
    let mut singular = Vec::new();
    for a in pos(m) {
        for b in pos(n) {
            singular.push(ratio(a * a - b * b, a * a + b * b));
        }
    }
    let mut resonance = Vec::new();
    for da in 1..m as i64 {
        for db in 1..n as i64 {
            resonance.push(ratio(da * da - db * db, da * da + db * db));
        }
    }
    singular.sort();
    singular.dedup();
    resonance.sort();
    resonance.dedup();
    ExceptionalAngles { singular, resonance }
}

/// Determinant of the Kronecker sum at the geometric parameter values
/// tau1 = -(1+C)/2, tau2 = -(1-C)/2, exact.
pub fn kronecker_det_at_angle(m: usize, n: usize, c: &Rat) -> Rat {
    let one = Rat::one();
    let half = ratio(1, 2);
    let t1 = -(&one + c) * &half;
    let t2 = -(&one - c) * &half;
    let s = eval_matrix(&kronecker_sum(m, n), &t1, &t2);
    rational_det(&s)
}

/// Rank statements need parameter values avoiding every eigenvalue-gap
/// collision da^2 tau2 = db^2 tau1; refuse degenerate input by name.
pub fn genericity_check(m: usize, n: usize, t1: &Rat, t2: &Rat) -> Result<()> {
    if t1.is_zero() || t2.is_zero() {
        return Err(Error::Degenerate(
            "rank statements need nonzero ladder parameters".into(),
        ));
    }
    for da in 0..m as i64 {
        for db in 0..n as i64 {
            if da == 0 && db == 0 {
                continue;
            }
            if rat(da * da) * t2 == rat(db * db) * t1 {
                return Err(Error::Degenerate(format!(
                    "parameter collision {da}^2 * t2 = {db}^2 * t1 breaks genericity"
                )));
            }
        }
    }
    Ok(())
}

/// Rational first-row powers of the doubled matrix for k in [0, kmax].
fn rational_row_powers(m: usize, n: usize, kmax: usize, t1: &Rat, t2: &Rat) -> Vec<Vec<Rat>> {
    let q = eval_matrix(&doubled_matrix(m, n), t1, t2);
    let size = 2 * m * n;
    let mut row = vec![Rat::zero(); size];
    row[0] = Rat::one();
    let mut rows = vec![row.clone()];
    for _ in 0..kmax {
        let mut next = vec![Rat::zero(); size];
        for (i, r) in row.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            for j in 0..size {
                if !q[i][j].is_zero() {
                    next[j] += r * &q[i][j];
                }
            }
        }
        rows.push(next.clone());
        row = next;
    }
    rows
}

/// Exact rank of the stack of first-row powers over the given level set.
pub fn row_stack_rank(m: usize, n: usize, levels: &[usize], t1: &Rat, t2: &Rat) -> Result<usize> {
    genericity_check(m, n, t1, t2)?;
    let kmax = levels.iter().copied().max().unwrap_or(0);
    let rows = rational_row_powers(m, n, kmax, t1, t2);
    let stack: Vec<Vec<Rat>> = levels.iter().map(|&k| rows[k].clone()).collect();
    Ok(rational_rank(&stack))
}

pub struct RankReport {
    pub m: usize,
    pub n: usize,
    pub both_odd: bool,
    pub expected: usize,
    pub windows: Vec<(usize, usize)>,
    pub pass: bool,
}

/// Rank of consecutive-level windows of first-row powers: full 2mn when m, n
/// are not both odd, and 2mn - 2 when both are odd (the doubled kernel
/// vector removes two dimensions). Window starts are caller-chosen.
pub fn rank_windows_check(
    m: usize,
    n: usize,
    starts: &[usize],
    window: usize,
    t1: &Rat,
    t2: &Rat,
) -> Result<RankReport> {
    let both_odd = m % 2 == 1 && n % 2 == 1;
    let expected = if both_odd { 2 * m * n - 2 } else { 2 * m * n };
    let mut windows = Vec::new();
    let mut pass = true;
    for &s in starts {
        let levels: Vec<usize> = (s..s + window).collect();
        let r = row_stack_rank(m, n, &levels, t1, t2)?;
        if r != expected {
            pass = false;
        }
        windows.push((s, r));
    }
    Ok(RankReport { m, n, both_odd, expected, windows, pass })
}

pub struct KernelColumnReport {
    pub kernel_annihilated: bool,
    pub support_even: bool,
    pub column_relation: bool,
}

/// For both-odd (m, n): the tensor kernel vector u of the Kronecker sum
/// annihilates the row stack in both block positions, is supported on cells
/// with both indices even, and writes the first column of each block as an
/// explicit combination of the later columns in its support.
pub fn kernel_column_check(
    m: usize,
    n: usize,
    levels: &[usize],
    t1: &Rat,
    t2: &Rat,
) -> Result<KernelColumnReport> {
    if m % 2 == 0 || n % 2 == 0 {
        return Err(Error::Usage(
            "kernel column relations need both grid sizes odd".into(),
        ));
    }
    let xbar = ladder_kernel(m, t2);
    let ybar = ladder_kernel(n, t1);
    let mn = m * n;
    let mut u = vec![Rat::zero(); mn];
    let mut support_even = true;
    for l in 0..m {
        for nu in 0..n {
            let val = &xbar[l] * &ybar[nu];
            if !val.is_zero() && (l % 2 == 1 || nu % 2 == 1) {
                support_even = false;
            }
            u[flat(l, nu, n)] = val;
        }
    }
    let kmax = levels.iter().copied().max().unwrap_or(0);
    let rows = rational_row_powers(m, n, kmax, t1, t2);
    let stack: Vec<&Vec<Rat>> = levels.iter().map(|&k| &rows[k]).collect();

    let dot_block = |row: &[Rat], offset: usize| -> Rat {
        let mut acc = Rat::zero();
        for j in 0..mn {
            acc += &row[offset + j] * &u[j];
        }
        acc
    };
    let kernel_annihilated = stack
        .iter()
        .all(|row| dot_block(row, 0).is_zero() && dot_block(row, mn).is_zero());

    // column 0 of each block equals -sum_{j>0} u_j * column j (u_0 = 1)
    let mut column_relation = u[0] == Rat::one();
    for row in &stack {
        for offset in [0, mn] {
            let mut acc = row[offset].clone();
            for j in 1..mn {
                acc += &u[j] * &row[offset + j];
            }
            if !acc.is_zero() {
                column_relation = false;
            }
        }
    }
    Ok(KernelColumnReport { kernel_annihilated, support_even, column_relation })
}

/// Chessboard vanishing of the undoubled row powers: the (l, nu) entry of
/// e_1 S^k is identically zero whenever l + nu + k is odd. Exhaustive and
/// symbolic up to kmax.
pub fn chessboard_check(m: usize, n: usize, kmax: usize) -> bool {
    let tables = row_tables(m, n, kmax);
    for k in 0..=kmax {
        for l in 0..m {
            for nu in 0..n {
                if (l + nu + k) % 2 == 1 && !tables.p[k][l][nu].is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Verify the kernel construction directly: S u = 0 at the given parameters.
pub fn kernel_product_residual(m: usize, n: usize, t1: &Rat, t2: &Rat) -> Result<Rat> {
    if m % 2 == 0 || n % 2 == 0 {
        return Err(Error::Usage("tensor kernel needs both sizes odd".into()));
    }
    let xbar = ladder_kernel(m, t2);
    let ybar = ladder_kernel(n, t1);
    let s = eval_matrix(&kronecker_sum(m, n), t1, t2);
    let mn = m * n;
    let mut worst = Rat::zero();
    for i in 0..mn {
        let mut acc = Rat::zero();
        for l in 0..m {
            for nu in 0..n {
                acc += &s[i][flat(l, nu, n)] * &xbar[l] * &ybar[nu];
            }
        }
        if acc.abs() > worst {
            worst = acc.abs();
        }
    }
    Ok(worst)
}
