//! Real normed division algebras R, C, H (and the octonion multiplication
//! table used to build Clifford representations).
//!
//! Multiplication tables are generated by Cayley-Dickson doubling
//!     (a, b)(c, d) = (ac - conj(d) b, da + b conj(c))
//! starting from the reals, so the quaternion and octonion sign conventions
//! are fixed by construction rather than hard-coded.

use nalgebra::DMatrix;

use crate::{Error, Result};

/// e_i * e_j = sign * e_k, encoded as table[i][j] = (k, sign).
pub type MulTable = Vec<Vec<(usize, i64)>>;

/// Cayley-Dickson table of dimension 1, 2, 4 or 8.
pub fn mult_table(dim: usize) -> MulTable {
    assert!(matches!(dim, 1 | 2 | 4 | 8), "dimension must be 1, 2, 4, or 8");
    if dim == 1 {
        return vec![vec![(0, 1)]];
    }
    let half = mult_table(dim / 2);
    let d = dim / 2;
    let mul = |i: usize, j: usize| half[i][j];
    // basis conjugation sign: conj(e_j) = +e_0 or -e_j
    let csign = |j: usize| if j == 0 { 1i64 } else { -1i64 };
    let mut table = vec![vec![(0usize, 0i64); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            // pairs: first half = (e_i, 0), second half = (0, e_{i-d})
            table[i][j] = match (i < d, j < d) {
                (true, true) => mul(i, j),
                (true, false) => {
                    // (e_i,0)(0,e_b) = (0, e_b e_i)
                    let (k, s) = mul(j - d, i);
                    (k + d, s)
                }
                (false, true) => {
                    // (0,e_a)(e_j,0) = (0, e_a conj(e_j))
                    let (k, s) = mul(i - d, j);
                    (k + d, s * csign(j))
                }
                (false, false) => {
                    // (0,e_a)(0,e_b) = (-conj(e_b) e_a, 0)
                    let (k, s) = mul(j - d, i - d);
                    (k, -s * csign(j - d))
                }
            };
        }
    }
    table
}

/// Real matrix of left multiplication by basis unit e_i.
pub fn left_mult_matrix(table: &MulTable, i: usize) -> DMatrix<i64> {
    let d = table.len();
    let mut m = DMatrix::zeros(d, d);
    for j in 0..d {
        let (k, s) = table[i][j];
        m[(k, j)] = s;
    }
    m
}

/// Real matrix of right multiplication by basis unit e_i.
pub fn right_mult_matrix(table: &MulTable, i: usize) -> DMatrix<i64> {
    let d = table.len();
    let mut m = DMatrix::zeros(d, d);
    for j in 0..d {
        let (k, s) = table[j][i];
        m[(k, j)] = s;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub fn dim(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    pub fn parse(s: &str) -> Result<Field> {
        match s.to_ascii_lowercase().as_str() {
            "r" => Ok(Field::R),
            "c" => Ok(Field::C),
            "h" => Ok(Field::H),
            other => Err(Error::Usage(format!("unknown scalar field '{other}', expected R, C or H"))),
        }
    }
}

/// A scalar of R, C or H stored in the quaternion coordinate slots; the unused
/// slots stay zero, and multiplication uses the quaternion table (R and C are
/// subalgebras spanned by the first 1 resp. 2 units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FScalar {
    pub d: usize,
    pub q: [f64; 4],
}

impl FScalar {
    pub fn zero(field: Field) -> Self {
        FScalar { d: field.dim(), q: [0.0; 4] }
    }

    pub fn one(field: Field) -> Self {
        let mut s = Self::zero(field);
        s.q[0] = 1.0;
        s
    }

    pub fn from_parts(field: Field, parts: &[f64]) -> Self {
        let mut s = Self::zero(field);
        s.q[..parts.len().min(field.dim())]
            .copy_from_slice(&parts[..parts.len().min(field.dim())]);
        s
    }

    pub fn conj(self) -> Self {
        let mut q = self.q;
        for qi in q.iter_mut().skip(1) {
            *qi = -*qi;
        }
        FScalar { d: self.d, q }
    }

    pub fn norm2(self) -> f64 {
        self.q.iter().map(|v| v * v).sum()
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        let mut q = self.q;
        for qi in q.iter_mut() {
            *qi *= s;
        }
        FScalar { d: self.d, q }
    }

    pub fn add(self, o: Self) -> Self {
        let mut q = self.q;
        for (a, b) in q.iter_mut().zip(o.q) {
            *a += b;
        }
        FScalar { d: self.d, q }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.scale(-1.0))
    }

    pub fn mul(self, o: Self) -> Self {
        // quaternion product (i^2 = j^2 = k^2 = ijk = -1)
        let [a0, a1, a2, a3] = self.q;
        let [b0, b1, b2, b3] = o.q;
        FScalar {
            d: self.d.max(o.d),
            q: [
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ],
        }
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm2();
        if n2 < 1e-300 {
            return Err(Error::Numerical("inverse of (near-)zero scalar".into()));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// Principal square root of a unit scalar: (1 + q) / |1 + q|. Fails near
    /// q = -1, where any unit imaginary direction is a square root instead.
    pub fn unit_sqrt(self) -> Result<Self> {
        let mut s = self;
        let one = {
            let mut o = FScalar::zero(Field::H);
            o.d = self.d;
            o.q[0] = 1.0;
            o
        };
        s = s.add(one);
        let n = s.norm();
        if n < 1e-8 {
            return Err(Error::Numerical("square root at the -1 branch point".into()));
        }
        Ok(s.scale(1.0 / n))
    }
}

/// F-valued Hermitian pairing sum conj(x_i) y_i.
pub fn hermitian_form(x: &[FScalar], y: &[FScalar]) -> FScalar {
    let d = x.first().map(|s| s.d).unwrap_or(1);
    let mut acc = FScalar { d, q: [0.0; 4] };
    for (a, b) in x.iter().zip(y) {
        acc = acc.add(a.conj().mul(*b));
    }
    acc
}

/// Unpack a real vector of length (n+1)*d into F-coordinates.
pub fn to_fvector(v: &[f64], field: Field) -> Vec<FScalar> {
    let d = field.dim();
    assert_eq!(v.len() % d, 0);
    v.chunks(d)
        .map(|ch| FScalar::from_parts(field, ch))
        .collect()
}

/// Pack F-coordinates back into a real vector.
pub fn to_real(v: &[FScalar]) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len() * v.first().map(|s| s.d).unwrap_or(1));
    for s in v {
        out.extend_from_slice(&s.q[..s.d]);
    }
    out
}

/// Real matrix of right multiplication by the scalar a on F^k (block diagonal).
pub fn right_scalar_matrix(a: FScalar, k: usize) -> DMatrix<f64> {
    let d = a.d;
    let mut block = DMatrix::zeros(d, d);
    for j in 0..d {
        let mut e = FScalar { d, q: [0.0; 4] };
        e.q[j] = 1.0;
        let col = e.mul(a);
        for i in 0..d {
            block[(i, j)] = col.q[i];
        }
    }
    let mut m = DMatrix::zeros(k * d, k * d);
    for b in 0..k {
        m.view_mut((b * d, b * d), (d, d)).copy_from(&block);
    }
    m
}

/// The d-1 right-multiplication structure matrices (by imaginary units) that a
/// witness matrix has to commute with to be F-linear.
pub fn right_structure_matrices(field: Field, k: usize) -> Vec<DMatrix<f64>> {
    let d = field.dim();
    (1..d)
        .map(|i| {
            let mut unit = FScalar::zero(field);
            unit.q[i] = 1.0;
            right_scalar_matrix(unit, k)
        })
        .collect()
}
