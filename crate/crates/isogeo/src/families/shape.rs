//! Shape operator by finite differences of the analytic unit normal, the
//! adapted frame (V first, then horizontal, then vertical slice directions),
//! principal curvature clustering, slice blocks, and the second-order
//! balance identity between the two slice families.

use nalgebra::DMatrix;

use crate::spaceforms::{product_exp, product_structure, TangentVec};
use crate::{Error, Result};

use super::Family;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-5;
const ASYM_TOL: f64 = 1e-5;

/// Shape operator A = -grad N at a point, expressed in the adapted frame.
#[derive(Debug, Clone)]
pub struct ShapeOperator {
    /// Symmetrized matrix <A e_j, e_i> (frame order: V, horizontal, vertical).
    pub matrix: DMatrix<f64>,
    pub frame: Vec<TangentVec>,
    /// Counts of horizontal / vertical slice directions in the frame.
    pub n_h: usize,
    pub n_v: usize,
    /// Angle function value at the base point.
    pub c: f64,
    /// Norms of the normal's factor components (C1, C2).
    pub c1: f64,
    pub c2: f64,
    /// Max absolute asymmetry removed by symmetrization.
    pub asym: f64,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Clusters (mean value, multiplicity), ascending in value.
    pub clusters: Vec<(f64, usize)>,
    pub trace: f64,
    pub symmetry_residual: f64,
    /// Set when two clusters are separated by less than twice the tolerance,
    /// so the grouping should not be trusted blindly.
    pub ambiguous: bool,
}

#[derive(Debug, Clone)]
pub struct SliceBlocks {
    /// Eigenvalues of the horizontal block, ascending.
    pub horizontal: Vec<f64>,
    /// Eigenvalues of the vertical block, ascending.
    pub vertical: Vec<f64>,
    /// Frobenius norm of the horizontal-vertical coupling block.
    pub mixing: f64,
    /// Norm of A V (the adapted direction is formally curvature-free).
    pub av_norm: f64,
}

#[derive(Debug, Clone)]
pub struct PairingOutcome {
    /// Max of |lambda * partner + 1/2| over matched nonzero cluster pairs.
    pub max_residual: f64,
    pub mult_match: bool,
}

/// The adapted frame and the angle data it was built from.
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    /// [V/|V|, horizontal..., vertical...], orthonormal.
    pub frame: Vec<TangentVec>,
    pub n_h: usize,
    pub n_v: usize,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Orthonormal frame of the tangent space of the level hypersurface:
/// V/|V| first (V = PN - CN), then the horizontal slice directions
/// (factor-1 tangents orthogonal to N^h), then the vertical ones.
/// Fails with `Degenerate` when |C| is within 1e-8 of 1.
pub fn adapted_frame(fam: &Family, p: &crate::spaceforms::ProductPoint) -> Result<AdaptedFrame> {
    let n = fam.unit_normal(p)?;
    let pn = product_structure(&n);
    let c = pn.metric_inner(&n);
    if c.abs() >= 1.0 - 1e-8 {
        return Err(Error::Degenerate(format!(
            "angle function {c:.9} too close to +-1 for an adapted frame"
        )));
    }
    let v = pn.sub(&n.scale(c));
    let vhat = v.scale(1.0 / v.norm());
    let c1 = p.x.norm(&n.v1);
    let c2 = p.y.norm(&n.v2);

    // slice directions per factor: tangent, orthogonal to the normal's
    // component in that factor, Gram-Schmidt within the slice
    let slice_dirs = |factor: &crate::spaceforms::FactorPoint, ncomp: &nalgebra::DVector<f64>| {
        let q = factor.inner(ncomp, ncomp);
        let mut dirs: Vec<nalgebra::DVector<f64>> = Vec::new();
        for b in factor.tangent_basis() {
            let mut w = b;
            if q > 1e-16 {
                let coef = factor.inner(&w, ncomp) / q;
                w -= ncomp * coef;
            }
            for d in &dirs {
                let coef = factor.inner(&w, d);
                w -= d * coef;
            }
            let nn = factor.norm(&w);
            if nn > 1e-8 {
                dirs.push(w / nn);
            }
        }
        dirs
    };
    let horiz = slice_dirs(&p.x, &n.v1);
    let vert = slice_dirs(&p.y, &n.v2);
    let (n_h, n_v) = (horiz.len(), vert.len());

    let mut frame = Vec::with_capacity(1 + n_h + n_v);
    frame.push(vhat);
    for w in horiz {
        frame.push(TangentVec {
            v1: w,
            v2: nalgebra::DVector::zeros(p.y.coords.len()),
            base: p.clone(),
        });
    }
    for w in vert {
        frame.push(TangentVec {
            v1: nalgebra::DVector::zeros(p.x.coords.len()),
            v2: w,
            base: p.clone(),
        });
    }
    let amb = fam.ambient();
    if frame.len() != amb.sigma_dim() || n_h != amb.d1 - 2 || n_v != amb.d2 - 2 {
        return Err(Error::Numerical(format!(
            "adapted frame has {} vectors ({n_h} horizontal, {n_v} vertical), expected {}",
            frame.len(),
            amb.sigma_dim()
        )));
    }
    Ok(AdaptedFrame { frame, n_h, n_v, c, c1, c2 })
}

/// Weingarten map by central differences of the analytic unit normal along
/// ambient product geodesics, projected to the frame and symmetrized.
pub fn shape_operator(fam: &Family, p: &crate::spaceforms::ProductPoint) -> Result<ShapeOperator> {
    let af = adapted_frame(fam, p)?;
    let AdaptedFrame { frame, n_h, n_v, c, c1, c2 } = af;
    let dim = frame.len();

    let n0 = fam.unit_normal(p)?;
    let mut a = DMatrix::zeros(dim, dim);
    for (j, e) in frame.iter().enumerate() {
        let qp = product_exp(p, e, FD_STEP);
        let qm = product_exp(p, e, -FD_STEP);
        let np = oriented_normal(fam, &qp, &n0)?;
        let nm = oriented_normal(fam, &qm, &n0)?;
        let d1 = (&np.v1 - &nm.v1) / (2.0 * FD_STEP);
        let d2 = (&np.v2 - &nm.v2) / (2.0 * FD_STEP);
        // A e = -(dN/ds)^tangent
        let ae = crate::spaceforms::tangent_project(p, &d1, &d2).scale(-1.0);
        for (i, f) in frame.iter().enumerate() {
            a[(i, j)] = ae.metric_inner(f);
        }
    }
    let asym = 0.5 * (&a - &a.transpose()).amax();
    if asym > ASYM_TOL {
        return Err(Error::Numerical(format!(
            "shape operator asymmetry {asym:.3e} exceeds {ASYM_TOL:.1e}"
        )));
    }
    let sym = 0.5 * (&a + &a.transpose());
    Ok(ShapeOperator { matrix: sym, frame, n_h, n_v, c, c1, c2, asym })
}

/// Unit normal at q with sign aligned to a reference normal (the analytic
/// gradient direction can flip across branch seams).
fn oriented_normal(
    fam: &Family,
    q: &crate::spaceforms::ProductPoint,
    reference: &TangentVec,
) -> Result<TangentVec> {
    let n = fam.unit_normal(q)?;
    // compare componentwise in the ambient linear spaces; points are close
    let align = n.v1.dot(&reference.v1) + n.v2.dot(&reference.v2);
    Ok(if align < 0.0 { n.scale(-1.0) } else { n })
}

/// Group sorted eigenvalues into clusters with relative gap tolerance.
pub fn cluster_eigenvalues(eigs: &[f64], tol: f64) -> (Vec<(f64, usize)>, bool) {
    let mut sorted = eigs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    let mut ambiguous = false;
    for i in 0..sorted.len() {
        let next_gap = if i + 1 < sorted.len() {
            sorted[i + 1] - sorted[i]
        } else {
            f64::INFINITY
        };
        let scale = 1.0 + sorted[i].abs();
        if next_gap > tol * scale {
            let slice = &sorted[start..=i];
            let mean = slice.iter().sum::<f64>() / slice.len() as f64;
            clusters.push((mean, slice.len()));
            if next_gap.is_finite() && next_gap < 2.0 * tol * scale {
                ambiguous = true;
            }
            start = i + 1;
        }
    }
    (clusters, ambiguous)
}

pub fn spectrum_from_operator(op: &ShapeOperator, cluster_tol: f64) -> SpectrumReport {
    let eig = op.matrix.clone().symmetric_eigen();
    let eigs: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let (clusters, ambiguous) = cluster_eigenvalues(&eigs, cluster_tol);
    SpectrumReport {
        clusters,
        trace: op.matrix.trace(),
        symmetry_residual: op.asym,
        ambiguous,
    }
}

/// Principal curvature clusters at a point.
pub fn principal_spectrum(
    fam: &Family,
    p: &crate::spaceforms::ProductPoint,
    cluster_tol: f64,
) -> Result<SpectrumReport> {
    let op = shape_operator(fam, p)?;
    Ok(spectrum_from_operator(&op, cluster_tol))
}

/// Diagonal blocks of A over the two slice distributions, plus coupling.
pub fn slice_blocks(op: &ShapeOperator) -> SliceBlocks {
    let h0 = 1;
    let v0 = 1 + op.n_h;
    let hb = op.matrix.view((h0, h0), (op.n_h, op.n_h)).into_owned();
    let vb = op.matrix.view((v0, v0), (op.n_v, op.n_v)).into_owned();
    let coupling = op.matrix.view((h0, v0), (op.n_h, op.n_v)).into_owned();
    let mut horizontal: Vec<f64> = if op.n_h > 0 {
        hb.symmetric_eigen().eigenvalues.iter().copied().collect()
    } else {
        Vec::new()
    };
    let mut vertical: Vec<f64> = if op.n_v > 0 {
        vb.symmetric_eigen().eigenvalues.iter().copied().collect()
    } else {
        Vec::new()
    };
    horizontal.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vertical.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let av_norm = op.matrix.column(0).norm() * (1.0 - op.c * op.c).max(0.0).sqrt();
    SliceBlocks {
        horizontal,
        vertical,
        mixing: coupling.norm(),
        av_norm,
    }
}

/// Residual of the second-order balance between the two slice families:
/// (1-C)^2 (c1 C1^2 (n-1) + sum lambda_i^2) - (1+C)^2 (c2 C2^2 (m-1) + sum mu_a^2),
/// with lambda/mu the horizontal/vertical block eigenvalues.
pub fn rigidity_residual(fam: &Family, op: &ShapeOperator) -> f64 {
    let amb = fam.ambient();
    let blocks = slice_blocks(op);
    let sum_h: f64 = blocks.horizontal.iter().map(|l| l * l).sum();
    let sum_v: f64 = blocks.vertical.iter().map(|l| l * l).sum();
    let lhs = (1.0 - op.c).powi(2) * (amb.c1 * op.c1 * op.c1 * op.n_h as f64 + sum_h);
    let rhs = (1.0 + op.c).powi(2) * (amb.c2 * op.c2 * op.c2 * op.n_v as f64 + sum_v);
    (lhs - rhs).abs()
}

/// Check the product pairing of nonzero clusters: each nonzero cluster value
/// lambda has a partner with lambda * partner = -1/2 and equal multiplicity.
/// Only meaningful for the sphere-sphere families; callers scope it.
pub fn pairing_check(clusters: &[(f64, usize)]) -> PairingOutcome {
    let nonzero: Vec<(f64, usize)> = clusters
        .iter()
        .copied()
        .filter(|(v, _)| v.abs() > 1e-3)
        .collect();
    let mut max_residual: f64 = 0.0;
    let mut mult_match = true;
    for &(v, mult) in &nonzero {
        let mut best = f64::INFINITY;
        let mut best_mult = 0;
        for &(w, wm) in &nonzero {
            let r = (v * w + 0.5).abs();
            if r < best {
                best = r;
                best_mult = wm;
            }
        }
        max_residual = max_residual.max(best);
        if best_mult != mult {
            mult_match = false;
        }
    }
    PairingOutcome { max_residual, mult_match }
}
