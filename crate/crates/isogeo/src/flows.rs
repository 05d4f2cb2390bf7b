//! Normal flows of the level hypersurfaces: geodesic flow along the unit
//! normal with parallel transport, the closed-form curvature evolution for
//! the sphere-sphere families, focal distance detection, the tangential
//! V-flow, and a Jacobi-determinant consistency check.

use nalgebra::DMatrix;

use crate::families::{
    adapted_frame, shape_operator, slice_blocks, spectrum_from_operator, Family, ShapeOperator,
    SliceBlocks, DEFAULT_CLUSTER_TOL,
};
use crate::spaceforms::{factor_geodesic, product_exp, product_structure, ProductPoint, TangentVec};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct FlowState {
    pub point: ProductPoint,
    /// Parallel-transported unit normal (the geodesic velocity).
    pub normal: TangentVec,
    pub t: f64,
}

/// Flow a point along its unit normal for parameter t (each factor moves on
/// its own geodesic at the speed given by the normal's component there).
pub fn normal_flow(fam: &Family, p: &ProductPoint, t: f64) -> Result<FlowState> {
    let n = fam.unit_normal(p)?;
    let (qx, vx) = factor_geodesic(&p.x, &n.v1, t);
    let (qy, vy) = factor_geodesic(&p.y, &n.v2, t);
    let point = ProductPoint { x: qx, y: qy };
    let normal = TangentVec { v1: vx, v2: vy, base: point.clone() };
    Ok(FlowState { point, normal, t })
}

/// Shape operator at a flowed point, oriented along the transported normal
/// (the gradient direction may flip relative to the flow).
pub fn flowed_shape(fam: &Family, state: &FlowState) -> Result<ShapeOperator> {
    let mut op = shape_operator(fam, &state.point)?;
    let analytic = fam.unit_normal(&state.point)?;
    let align = analytic.v1.dot(&state.normal.v1) + analytic.v2.dot(&state.normal.v2);
    if align < 0.0 {
        op.matrix.neg_mut();
    }
    Ok(op)
}

/// Closed-form evolution of a principal curvature under the normal flow in
/// the sphere-sphere product: lambda(t) = cot(theta/2 - t/sqrt(2))/sqrt(2)
/// with lambda(0) = cot(theta/2)/sqrt(2), theta/2 in (0, pi). The zero
/// eigenvalue of the flow-invariant direction is flat and stays zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Riccati {
    Finite(f64),
    Pole,
}

/// Angle parameter theta/2 in (0, pi) of a curvature value.
pub fn riccati_half_angle(lambda: f64) -> f64 {
    let half = (1.0 / (std::f64::consts::SQRT_2 * lambda)).atan();
    if half > 0.0 {
        half
    } else {
        half + std::f64::consts::PI
    }
}

pub fn riccati_predict(lambda: f64, t: f64) -> Riccati {
    let arg = riccati_half_angle(lambda) - t / std::f64::consts::SQRT_2;
    let s = arg.sin();
    if s.abs() < 1e-12 {
        return Riccati::Pole;
    }
    Riccati::Finite(arg.cos() / s / std::f64::consts::SQRT_2)
}

/// First positive flow distance at which the curvature blows up.
pub fn riccati_first_pole(lambda: f64) -> f64 {
    std::f64::consts::SQRT_2 * riccati_half_angle(lambda)
}

#[derive(Debug, Clone)]
pub struct FocalScan {
    pub distances: Vec<f64>,
    /// Grid points where the spectrum could not be measured (singular level).
    pub skipped: usize,
}

/// Scan (0, t_max] for focal distances: parameters where the largest
/// principal curvature of the flowed hypersurface blows up. Tracks
/// h(t) = 1 / lambda_max and looks for guarded sign changes of h.
pub fn focal_distances(fam: &Family, p: &ProductPoint, t_max: f64, step: f64) -> Result<FocalScan> {
    if !(step > 0.0 && t_max > step) {
        return Err(Error::Usage("focal scan needs 0 < step < t_max".into()));
    }
    let h_at = |t: f64| -> Option<f64> {
        let state = normal_flow(fam, p, t).ok()?;
        let op = flowed_shape(fam, &state).ok()?;
        let spec = spectrum_from_operator(&op, DEFAULT_CLUSTER_TOL);
        let lead = spec
            .clusters
            .iter()
            .map(|&(v, _)| v)
            .max_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())?;
        if lead.abs() < 1e-12 {
            return None;
        }
        Some(1.0 / lead)
    };

    let mut distances = Vec::new();
    let mut skipped = 0usize;
    let mut prev: Option<(f64, f64)> = None;
    let nsteps = (t_max / step).floor() as usize;
    for k in 1..=nsteps {
        let t = k as f64 * step;
        let Some(h) = h_at(t) else {
            // a grid point can land on the degenerate level at the focal
            // parameter itself; keep the bracket alive across it
            skipped += 1;
            continue;
        };
        if let Some((t0, h0)) = prev {
            // a focal crossing sends h through 0; an identity swap of the
            // dominant cluster also flips the sign but with |h| large
            if h0 * h < 0.0 && h0.abs().min(h.abs()) < 4.0 * step && t - t0 < 3.5 * step {
                let (mut a, mut ha) = (t0, h0);
                let (mut b, mut hb) = (t, h);
                // bisect down to a short bracket, then one secant step; the
                // finite-difference spectrum is unreliable too close to the pole
                while b - a > 2e-4 {
                    let mid = 0.5 * (a + b);
                    match h_at(mid) {
                        Some(hm) => {
                            if ha * hm <= 0.0 {
                                b = mid;
                                hb = hm;
                            } else {
                                a = mid;
                                ha = hm;
                            }
                        }
                        None => {
                            // the level itself degenerates within ~1e-8 of here
                            a = mid;
                            b = mid;
                            break;
                        }
                    }
                }
                let focal = if b > a && (hb - ha).abs() > 1e-300 {
                    a - ha * (b - a) / (hb - ha)
                } else {
                    0.5 * (a + b)
                };
                distances.push(focal);
            }
        }
        prev = Some((t, h));
    }
    Ok(FocalScan { distances, skipped })
}

/// Geodesic flow along V = PN - CN (tangent to the hypersurface); moves
/// every point within the same level.
pub fn v_flow(fam: &Family, p: &ProductPoint, t: f64) -> Result<ProductPoint> {
    let n = fam.unit_normal(p)?;
    let c = product_structure(&n).metric_inner(&n);
    let v = product_structure(&n).sub(&n.scale(c));
    Ok(product_exp(p, &v, t))
}

#[derive(Debug, Clone)]
pub struct SliceIsometry {
    /// Max difference of sorted horizontal block eigenvalues before/after.
    pub horizontal_diff: f64,
    pub vertical_diff: f64,
    pub level_drift: f64,
    pub blocks_before: SliceBlocks,
    pub blocks_after: SliceBlocks,
}

/// Flow along V and compare the slice block spectra before and after.
pub fn v_flow_isometry_check(fam: &Family, p: &ProductPoint, t: f64) -> Result<SliceIsometry> {
    let before = slice_blocks(&shape_operator(fam, p)?);
    let f0 = fam.evaluate(p)?.f;
    let q = v_flow(fam, p, t)?;
    let f1 = fam.evaluate(&q)?.f;
    let after = slice_blocks(&shape_operator(fam, &q)?);
    let diff = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max)
    };
    Ok(SliceIsometry {
        horizontal_diff: diff(&before.horizontal, &after.horizontal),
        vertical_diff: diff(&before.vertical, &after.vertical),
        level_drift: (f1 - f0).abs(),
        blocks_before: before,
        blocks_after: after,
    })
}

#[derive(Debug, Clone)]
pub struct JacobiReport {
    /// max |D'(r) + H(r) D(r)| over the usable grid.
    pub max_residual: f64,
    /// Grid value after which the check stopped (first focal or singular level).
    pub truncated_at: Option<f64>,
    pub evaluated: usize,
}

/// Generalized sine/cosine for curvature tau of the normal Jacobi equation.
fn sc(tau: f64, r: f64) -> (f64, f64) {
    if tau < -1e-14 {
        let w = (-tau).sqrt();
        ((w * r).sin() / w, (w * r).cos())
    } else if tau > 1e-14 {
        let w = tau.sqrt();
        ((w * r).sinh() / w, (w * r).cosh())
    } else {
        (r, 1.0)
    }
}

/// Determinant of the normal Jacobi matrix predicted from the shape operator
/// at r = 0, checked against the mean curvature of the flowed hypersurface
/// through D'(r) = -H(r) D(r). Rows are ordered vertical, V, horizontal;
/// each row evolves with its own effective curvature
/// tau_2 = -c2 (1-C)/2, 0, tau_1 = -c1 (1+C)/2.
pub fn jacobi_determinant_check(fam: &Family, p: &ProductPoint, r_grid: &[f64]) -> Result<JacobiReport> {
    let af = adapted_frame(fam, p)?;
    let op = shape_operator(fam, p)?;
    let amb = fam.ambient();
    let (n_h, n_v) = (af.n_h, af.n_v);
    let dim = 1 + n_h + n_v;
    let tau1 = -amb.c1 * (1.0 + af.c) / 2.0;
    let tau2 = -amb.c2 * (1.0 - af.c) / 2.0;

    // permutation from adapted order [V, h.., v..] to [v.., V, h..]
    let perm: Vec<usize> = (0..n_v)
        .map(|i| 1 + n_h + i)
        .chain(std::iter::once(0))
        .chain((0..n_h).map(|j| 1 + j))
        .collect();
    let row_tau = |i: usize| -> f64 {
        if i < n_v {
            tau2
        } else if i == n_v {
            0.0
        } else {
            tau1
        }
    };
    // B(r) and its derivative: per row s' = c and c' = tau s, so
    // B' = diag(tau_i s_i) - A . diag(c_i) and D' = D tr(B^{-1} B')
    let det_and_derivative = |r: f64| -> (f64, Option<f64>) {
        let mut b = DMatrix::zeros(dim, dim);
        let mut bp = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let tau = row_tau(i);
            let (s, c) = sc(tau, r);
            for j in 0..dim {
                let a_ij = op.matrix[(perm[i], perm[j])];
                b[(i, j)] = if i == j { c - a_ij * s } else { -a_ij * s };
                bp[(i, j)] = if i == j { tau * s - a_ij * c } else { -a_ij * c };
            }
        }
        let d = b.clone().determinant();
        let dprime = b.lu().solve(&bp).map(|x| d * x.trace());
        (d, dprime)
    };

    let mut max_residual: f64 = 0.0;
    let mut truncated_at = None;
    let mut evaluated = 0usize;
    for &r in r_grid {
        let (d, dprime) = det_and_derivative(r);
        let Some(dprime) = dprime else {
            truncated_at = Some(r);
            break;
        };
        if d <= 0.0 {
            // past the first focal parameter the product formula loses validity
            truncated_at = Some(r);
            break;
        }
        let state = normal_flow(fam, p, r)?;
        let h = match flowed_shape(fam, &state) {
            Ok(op_r) => op_r.matrix.trace(),
            Err(_) => {
                truncated_at = Some(r);
                break;
            }
        };
        max_residual = max_residual.max((dprime + h * d).abs());
        evaluated += 1;
    }
    Ok(JacobiReport { max_residual, truncated_at, evaluated })
}
