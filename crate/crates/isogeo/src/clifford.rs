//! Integer Clifford systems.
//!
//! A skew family {E_1, ..., E_{p-1}} on R^l satisfies
//!     E_a E_b + E_b E_a = -2 delta_ab I,   E_a^T = -E_a,   E_a^T E_a = I,
//! and the induced symmetric family {P_0, ..., P_p} on R^{2l} satisfies
//!     P_a P_b + P_b P_a = 2 delta_ab I,    P_a^T = P_a.
//!
//! Everything is built from signed-permutation blocks (entries in {-1,0,1})
//! so all relations can be checked in exact integer arithmetic. Irreducible
//! modules have dimension delta(p) with delta(1..8) = 1,2,4,4,8,8,8,8 and
//! delta(p+8) = 16 delta(p); reducible systems are block-diagonal sums.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{left_mult_matrix, mult_table};
use crate::{Error, Result};

pub fn delta(p: usize) -> Result<u64> {
    if p == 0 {
        return Err(Error::Usage("delta(p) needs p >= 1".into()));
    }
    const TABLE: [u64; 8] = [1, 2, 4, 4, 8, 8, 8, 8];
    let mut v = TABLE[(p - 1) % 8];
    for _ in 0..(p - 1) / 8 {
        v *= 16;
    }
    Ok(v)
}

#[derive(Debug, Clone)]
pub struct CliffordSystem {
    pub p: usize,
    pub k: usize,
    /// Module dimension l = k * delta(p).
    pub l: usize,
    /// Skew generators E_1..E_{p-1} (empty for p = 1).
    pub e: Vec<DMatrix<i64>>,
    /// Symmetric system P_0..P_p on R^{2l}.
    pub pmats: Option<Vec<DMatrix<i64>>>,
}

fn kron(a: &DMatrix<i64>, b: &DMatrix<i64>) -> DMatrix<i64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            if a[(i, j)] != 0 {
                for k in 0..br {
                    for m in 0..bc {
                        out[(i * br + k, j * bc + m)] = a[(i, j)] * b[(k, m)];
                    }
                }
            }
        }
    }
    out
}

fn block_diag(a: &DMatrix<i64>, copies: usize) -> DMatrix<i64> {
    let n = a.nrows();
    let mut out = DMatrix::zeros(n * copies, n * copies);
    for c in 0..copies {
        out.view_mut((c * n, c * n), (n, n)).copy_from(a);
    }
    out
}

/// Irreducible skew family on R^{delta(p)}.
fn irreducible_e(p: usize) -> Vec<DMatrix<i64>> {
    match p {
        1 => vec![],
        2 => {
            // the 2x2 rotation generator
            vec![DMatrix::from_row_slice(2, 2, &[0, -1, 1, 0])]
        }
        3 | 4 => {
            let t = mult_table(4);
            (1..p).map(|i| left_mult_matrix(&t, i)).collect()
        }
        5..=8 => {
            let t = mult_table(8);
            (1..p).map(|i| left_mult_matrix(&t, i)).collect()
        }
        9 => {
            // double the octonion left multiplications and add the swap form:
            // B_i = [[0, L_i], [L_i, 0]] (i = 1..7), B_8 = [[0, -I], [I, 0]]
            let t = mult_table(8);
            let id = DMatrix::<i64>::identity(8, 8);
            let mut out = Vec::with_capacity(8);
            for i in 1..8 {
                let li = left_mult_matrix(&t, i);
                let mut b = DMatrix::zeros(16, 16);
                b.view_mut((0, 8), (8, 8)).copy_from(&li);
                b.view_mut((8, 0), (8, 8)).copy_from(&li);
                out.push(b);
            }
            let mut b8 = DMatrix::zeros(16, 16);
            b8.view_mut((0, 8), (8, 8)).copy_from(&(-&id));
            b8.view_mut((8, 0), (8, 8)).copy_from(&id);
            out.push(b8);
            out
        }
        _ => {
            // periodicity: with {B_i} the nine-generator family on R^16 and
            // W = B_1 ... B_8 (symmetric, W^2 = I, anticommuting with each B_i),
            // take E_i = B_i (x) I and E_{8+j} = W (x) A_j for the (p-8) family.
            let b = irreducible_e(9);
            let w = b.iter().fold(DMatrix::<i64>::identity(16, 16), |acc, m| acc * m);
            let inner = irreducible_e(p - 8);
            let inner_dim = delta(p - 8).unwrap() as usize;
            let id_inner = DMatrix::<i64>::identity(inner_dim, inner_dim);
            let mut out: Vec<DMatrix<i64>> = b.iter().map(|bi| kron(bi, &id_inner)).collect();
            for a in &inner {
                out.push(kron(&w, a));
            }
            out
        }
    }
}

/// Assemble the symmetric system on R^{2l} from the skew one:
/// P_0 = diag(I, -I), P_1 = antidiag(I, I), P_{1+a} = [[0, E_a], [-E_a, 0]].
fn assemble_p(e: &[DMatrix<i64>], l: usize) -> Vec<DMatrix<i64>> {
    let id = DMatrix::<i64>::identity(l, l);
    let mut out = Vec::with_capacity(e.len() + 2);
    let mut p0 = DMatrix::zeros(2 * l, 2 * l);
    p0.view_mut((0, 0), (l, l)).copy_from(&id);
    p0.view_mut((l, l), (l, l)).copy_from(&(-&id));
    out.push(p0);
    let mut p1 = DMatrix::zeros(2 * l, 2 * l);
    p1.view_mut((0, l), (l, l)).copy_from(&id);
    p1.view_mut((l, 0), (l, l)).copy_from(&id);
    out.push(p1);
    for ea in e {
        let mut pa = DMatrix::zeros(2 * l, 2 * l);
        pa.view_mut((0, l), (l, l)).copy_from(ea);
        pa.view_mut((l, 0), (l, l)).copy_from(&(-ea));
        out.push(pa);
    }
    out
}

pub fn gen_system(p: usize, k: usize) -> Result<CliffordSystem> {
    if p == 0 || k == 0 {
        return Err(Error::Usage("gen_system needs p >= 1 and k >= 1".into()));
    }
    let l = (delta(p)? as usize)
        .checked_mul(k)
        .filter(|&l| l <= 1 << 12)
        .ok_or_else(|| Error::Usage(format!("module dimension too large for p={p}, k={k}")))?;
    let e: Vec<DMatrix<i64>> = irreducible_e(p)
        .iter()
        .map(|m| block_diag(m, k))
        .collect();
    let pmats = assemble_p(&e, l);
    Ok(CliffordSystem { p, k, l, e, pmats: Some(pmats) })
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub pass: bool,
    /// First violating index pair, when any.
    pub violation: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn first_violation<F: Fn(usize, usize) -> bool>(n1: usize, n2: usize, ok: F) -> Option<(usize, usize)> {
    for i in 0..n1 {
        for j in 0..n2 {
            if !ok(i, j) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Exact integer verification of every defining relation.
pub fn verify_system(sys: &CliffordSystem) -> RelationReport {
    let mut checks = Vec::new();
    let idl = DMatrix::<i64>::identity(sys.l, sys.l);

    let v = first_violation(sys.e.len(), 1, |a, _| sys.e[a].transpose() == -&sys.e[a]);
    checks.push(RelationCheck { name: "E skew-symmetric".into(), pass: v.is_none(), violation: v });

    let v = first_violation(sys.e.len(), 1, |a, _| sys.e[a].transpose() * &sys.e[a] == idl);
    checks.push(RelationCheck { name: "E orthogonal".into(), pass: v.is_none(), violation: v });

    let v = first_violation(sys.e.len(), sys.e.len(), |a, b| {
        let s = &sys.e[a] * &sys.e[b] + &sys.e[b] * &sys.e[a];
        if a == b { s == -2 * &idl } else { s == DMatrix::zeros(sys.l, sys.l) }
    });
    checks.push(RelationCheck { name: "E anticommutation".into(), pass: v.is_none(), violation: v });

    if let Some(pm) = &sys.pmats {
        let id2 = DMatrix::<i64>::identity(2 * sys.l, 2 * sys.l);

        let v = first_violation(pm.len(), 1, |a, _| pm[a].transpose() == pm[a]);
        checks.push(RelationCheck { name: "P symmetric".into(), pass: v.is_none(), violation: v });

        let v = first_violation(pm.len(), 1, |a, _| pm[a].transpose() * &pm[a] == id2);
        checks.push(RelationCheck { name: "P orthogonal".into(), pass: v.is_none(), violation: v });

        let v = first_violation(pm.len(), pm.len(), |a, b| {
            let s = &pm[a] * &pm[b] + &pm[b] * &pm[a];
            if a == b { s == 2 * &id2 } else { s == DMatrix::zeros(2 * sys.l, 2 * sys.l) }
        });
        checks.push(RelationCheck { name: "P anticommutation".into(), pass: v.is_none(), violation: v });

        let canonical = {
            let expect = assemble_p(&sys.e, sys.l);
            pm.len() >= 2 && pm[0] == expect[0] && pm[1] == expect[1]
        };
        checks.push(RelationCheck {
            name: "P0/P1 canonical blocks".into(),
            pass: canonical,
            violation: if canonical { None } else { Some((0, 1)) },
        });
    }

    RelationReport { checks }
}

/// The sphere-restricted quartic level function
///     f(x, y) = <x,y>^2 + sum_a <E_a x, y>^2,
/// with values in [0, 1] for unit x, y.
pub fn otfkm_restricted_f(sys: &CliffordSystem, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != sys.l || y.len() != sys.l {
        return Err(Error::Usage(format!(
            "f needs vectors of length l={}, got {} and {}",
            sys.l,
            x.len(),
            y.len()
        )));
    }
    let dot = |u: &[f64], v: &[f64]| -> f64 { u.iter().zip(v).map(|(a, b)| a * b).sum() };
    for (name, v) in [("x", x), ("y", y)] {
        if (dot(v, v) - 1.0).abs() > 1e-10 {
            return Err(Error::Usage(format!("{name} must be a unit vector")));
        }
    }
    let mut f = dot(x, y).powi(2);
    for ea in &sys.e {
        let mut eax = vec![0.0; sys.l];
        for (i, row) in ea.row_iter().enumerate() {
            eax[i] = row.iter().zip(x).map(|(&m, &xv)| m as f64 * xv).sum();
        }
        f += dot(&eax, y).powi(2);
    }
    Ok(f)
}

/// Ambient quartic F(Z) = |Z|^4 - 2 sum_a <P_a Z, Z>^2 at Z = (x, y); on unit
/// pairs this equals 4 - 8 f(x, y), which tests use as an oracle for f.
pub fn otfkm_ambient_polynomial(sys: &CliffordSystem, x: &[f64], y: &[f64]) -> Result<f64> {
    let pm = sys
        .pmats
        .as_ref()
        .ok_or_else(|| Error::Usage("system has no symmetric part".into()))?;
    if x.len() != sys.l || y.len() != sys.l {
        return Err(Error::Usage("ambient polynomial needs length-l factors".into()));
    }
    let z: Vec<f64> = x.iter().chain(y).copied().collect();
    let zz: f64 = z.iter().map(|v| v * v).sum();
    let mut f = zz * zz;
    for pa in pm {
        let mut paz = vec![0.0; 2 * sys.l];
        for (i, row) in pa.row_iter().enumerate() {
            paz[i] = row.iter().zip(&z).map(|(&m, &zv)| m as f64 * zv).sum();
        }
        let q: f64 = paz.iter().zip(&z).map(|(a, b)| a * b).sum();
        f -= 2.0 * q * q;
    }
    Ok(f)
}

/// JSON wire format for a system.
#[derive(Debug, Serialize, Deserialize)]
pub struct CliffordSystemDto {
    pub p: usize,
    pub k: usize,
    pub l: usize,
    /// Row-major integer entries, one matrix per generator.
    pub e: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pmats: Option<Vec<Vec<i64>>>,
}

impl CliffordSystem {
    pub fn to_dto(&self) -> CliffordSystemDto {
        let flat = |m: &DMatrix<i64>| -> Vec<i64> {
            let mut v = Vec::with_capacity(m.len());
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    v.push(m[(i, j)]);
                }
            }
            v
        };
        CliffordSystemDto {
            p: self.p,
            k: self.k,
            l: self.l,
            e: self.e.iter().map(flat).collect(),
            pmats: self.pmats.as_ref().map(|pm| pm.iter().map(flat).collect()),
        }
    }

    pub fn from_dto(dto: &CliffordSystemDto) -> Result<CliffordSystem> {
        let unflat = |v: &Vec<i64>, n: usize| -> Result<DMatrix<i64>> {
            if v.len() != n * n {
                return Err(Error::Usage(format!(
                    "matrix payload has {} entries, expected {}",
                    v.len(),
                    n * n
                )));
            }
            Ok(DMatrix::from_row_slice(n, n, v))
        };
        let e = dto
            .e
            .iter()
            .map(|v| unflat(v, dto.l))
            .collect::<Result<Vec<_>>>()?;
        let pmats = match &dto.pmats {
            None => None,
            Some(pm) => Some(
                pm.iter()
                    .map(|v| unflat(v, 2 * dto.l))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(CliffordSystem { p: dto.p, k: dto.k, l: dto.l, e, pmats })
    }
}
