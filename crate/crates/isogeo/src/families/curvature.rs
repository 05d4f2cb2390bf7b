//! Intrinsic curvature of a level hypersurface via the Gauss equation:
//! the ambient product has constant factor curvatures, so the ambient
//! curvature tensor is exact and only the shape operator is measured.

use nalgebra::DMatrix;

use crate::spaceforms::TangentVec;
use crate::Result;

use super::shape::{cluster_eigenvalues, shape_operator, ShapeOperator};
use super::Family;

#[derive(Debug, Clone)]
pub struct CurvatureScalars {
    /// Mean curvature (trace of A).
    pub mean: f64,
    /// Scalar curvature (trace of the Ricci form).
    pub scalar: f64,
    /// Ricci eigenvalue clusters (value, multiplicity), ascending.
    pub ricci_clusters: Vec<(f64, usize)>,
    /// Max |Ric - (scalar/dim) g| entry; 0 means Einstein.
    pub einstein_residual: f64,
}

/// Ambient curvature pairing <R(x,y)z, w> for the product of two space forms:
/// each factor contributes c <y,z><x,w> - c <x,z><y,w> in its own metric.
fn ambient_r(
    c1: f64,
    c2: f64,
    x: &TangentVec,
    y: &TangentVec,
    z: &TangentVec,
    w: &TangentVec,
) -> f64 {
    let p = &x.base;
    let i1 = |a: &TangentVec, b: &TangentVec| p.x.inner(&a.v1, &b.v1);
    let i2 = |a: &TangentVec, b: &TangentVec| p.y.inner(&a.v2, &b.v2);
    c1 * (i1(y, z) * i1(x, w) - i1(x, z) * i1(y, w))
        + c2 * (i2(y, z) * i2(x, w) - i2(x, z) * i2(y, w))
}

/// Ricci form in the operator's frame, assembled from the Gauss equation:
/// Ric(Y,Z) = sum_i <R_amb(e_i, Y) Z, e_i> + H <A Y, Z> - <A Y, A Z>.
pub fn ricci_matrix(fam: &Family, op: &ShapeOperator) -> DMatrix<f64> {
    let amb = fam.ambient();
    let dim = op.frame.len();
    let a = &op.matrix;
    let h = a.trace();
    let a2 = a * a;
    let mut ric = DMatrix::zeros(dim, dim);
    for iy in 0..dim {
        for iz in iy..dim {
            let mut s = 0.0;
            for ie in 0..dim {
                s += ambient_r(
                    amb.c1,
                    amb.c2,
                    &op.frame[ie],
                    &op.frame[iy],
                    &op.frame[iz],
                    &op.frame[ie],
                );
            }
            let v = s + h * a[(iy, iz)] - a2[(iy, iz)];
            ric[(iy, iz)] = v;
            ric[(iz, iy)] = v;
        }
    }
    ric
}

pub fn curvature_scalars(
    fam: &Family,
    p: &crate::spaceforms::ProductPoint,
    cluster_tol: f64,
) -> Result<CurvatureScalars> {
    let op = shape_operator(fam, p)?;
    let ric = ricci_matrix(fam, &op);
    let scalar = ric.trace();
    let dim = ric.nrows();
    let eigs: Vec<f64> = ric
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    let (ricci_clusters, _) = cluster_eigenvalues(&eigs, cluster_tol);
    let einstein = &ric - DMatrix::identity(dim, dim) * (scalar / dim as f64);
    Ok(CurvatureScalars {
        mean: op.matrix.trace(),
        scalar,
        ricci_clusters,
        einstein_residual: einstein.amax(),
    })
}
