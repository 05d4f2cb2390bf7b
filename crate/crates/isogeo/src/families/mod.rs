//! The verified hypersurface families living in sphere-sphere and
//! sphere-hyperbolic products, with their defining level functions,
//! analytic gradients and Laplacians, normals, angle function, and
//! seeded sampling on a fixed regular level.
//!
//! Family tags (also used by the CLI and the JSON wire format):
//! - `MT`      level sets of <x, y> on S^n x S^n
//! - `MHat`    level sets of <x,y>^2 + sum <E_a x, y>^2 for a skew Clifford family
//! - `GraphSH` log-spiral graphs over S^1 x H^m built from a lightlike direction
//! - `MTF`     level sets of |<x, y>_F|^2 on the F-unit spheres, F in {R, C, H}

mod curvature;
mod shape;
mod witness;

pub use curvature::{curvature_scalars, CurvatureScalars};
pub use shape::{
    adapted_frame, cluster_eigenvalues, pairing_check, principal_spectrum, rigidity_residual,
    shape_operator, slice_blocks, spectrum_from_operator, AdaptedFrame, PairingOutcome,
    ShapeOperator, SliceBlocks, SpectrumReport, DEFAULT_CLUSTER_TOL,
};
pub use witness::{boost_residual, graph_symmetry_check, mtf_witness, GroupWitness};

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{right_scalar_matrix, FScalar, Field};
use crate::clifford::CliffordSystem;
use crate::spaceforms::{
    gaussian, lorentz_inner, mix_seed, product_exp, sample_factor, tangent_project, FactorPoint,
    LightVec, ProductPoint, TangentVec,
};
use crate::{Error, Result};

/// Ambient product data: per-factor vector-space dimension and curvature sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientSpec {
    pub d1: usize,
    pub c1: f64,
    pub d2: usize,
    pub c2: f64,
}

impl AmbientSpec {
    /// Dimension of a regular level hypersurface: (d1-1) + (d2-1) - 1.
    pub fn sigma_dim(&self) -> usize {
        self.d1 + self.d2 - 3
    }
}

#[derive(Debug, Clone)]
pub enum Family {
    Mt {
        n: usize,
        t: f64,
    },
    MHat {
        sys: CliffordSystem,
        t: f64,
    },
    GraphSh {
        m: usize,
        a: f64,
        /// Lightlike direction in Minkowski R^{1,m}; fixes the horosphere pencil.
        u: Vec<f64>,
        t: f64,
        /// Sample the cos(Theta) < 0 component instead of the default one.
        negative_branch: bool,
    },
    Mtf {
        field: Field,
        n: usize,
        t: f64,
    },
}

/// Evaluation of the defining function at an ambient point: value, tangential
/// gradient, and the product (sum-of-factor-Laplacians) Laplacian.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub f: f64,
    pub grad: TangentVec,
    pub lap: f64,
}

impl Family {
    pub fn graph_default(m: usize, a: f64, t: f64) -> Family {
        Family::GraphSh {
            m,
            a,
            u: LightVec::axis(m).u.as_slice().to_vec(),
            t,
            negative_branch: false,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Family::Mt { .. } => "MT",
            Family::MHat { .. } => "MHat",
            Family::GraphSh { .. } => "GraphSH",
            Family::Mtf { .. } => "MTF",
        }
    }

    pub fn instance_label(&self) -> String {
        match self {
            Family::Mt { n, t } => format!("MT n={n} t={t}"),
            Family::MHat { sys, t } => format!("MHat p={} l={} t={t}", sys.p, sys.l),
            Family::GraphSh { m, a, t, negative_branch, .. } => {
                if *negative_branch {
                    format!("GraphSH m={m} a={a} t={t} branch=-")
                } else {
                    format!("GraphSH m={m} a={a} t={t}")
                }
            }
            Family::Mtf { field, n, t } => format!("MTF field={field:?} n={n} t={t}"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Family::Mt { n, t } => {
                if *n < 1 {
                    return Err(Error::Usage("MT needs n >= 1".into()));
                }
                if !(-1.0 < *t && *t < 1.0) {
                    return Err(Error::Usage(format!("MT level must be in (-1,1), got {t}")));
                }
            }
            Family::MHat { sys, t } => {
                if sys.e.len() + 1 != sys.p {
                    return Err(Error::Usage("Clifford system is inconsistent".into()));
                }
                if sys.l < sys.p + 1 {
                    return Err(Error::Domain(format!(
                        "MHat needs l >= p+1 for a regular level family (p={}, l={})",
                        sys.p, sys.l
                    )));
                }
                if !(0.0 < *t && *t < 1.0) {
                    return Err(Error::Usage(format!("MHat level must be in (0,1), got {t}")));
                }
            }
            Family::GraphSh { m, a, u, t, .. } => {
                if *m < 1 {
                    return Err(Error::Usage("GraphSH needs m >= 1".into()));
                }
                if *a == 0.0 {
                    return Err(Error::Usage("GraphSH needs a != 0".into()));
                }
                if u.len() != m + 1 {
                    return Err(Error::Usage(format!(
                        "GraphSH lightlike direction must have length m+1={}, got {}",
                        m + 1,
                        u.len()
                    )));
                }
                let lv = LightVec { u: DVector::from_column_slice(u) };
                if lv.null_residual() > 1e-10 || u[0] <= 0.0 {
                    return Err(Error::Usage("GraphSH direction must be future lightlike".into()));
                }
                if !(-1.0 < *t && *t < 1.0) {
                    return Err(Error::Usage(format!("GraphSH level must be in (-1,1), got {t}")));
                }
            }
            Family::Mtf { n, t, .. } => {
                if *n < 1 {
                    return Err(Error::Usage("MTF needs n >= 1".into()));
                }
                if !(0.0 < *t && *t < 1.0) {
                    return Err(Error::Usage(format!("MTF level must be in (0,1), got {t}")));
                }
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> AmbientSpec {
        match self {
            Family::Mt { n, .. } => AmbientSpec { d1: n + 1, c1: 1.0, d2: n + 1, c2: 1.0 },
            Family::MHat { sys, .. } => AmbientSpec { d1: sys.l, c1: 1.0, d2: sys.l, c2: 1.0 },
            Family::GraphSh { m, .. } => AmbientSpec { d1: 2, c1: 1.0, d2: m + 1, c2: -1.0 },
            Family::Mtf { field, n, .. } => {
                let dl = (n + 1) * field.dim();
                AmbientSpec { d1: dl, c1: 1.0, d2: dl, c2: 1.0 }
            }
        }
    }

    pub fn level(&self) -> f64 {
        match self {
            Family::Mt { t, .. }
            | Family::MHat { t, .. }
            | Family::GraphSh { t, .. }
            | Family::Mtf { t, .. } => *t,
        }
    }

    /// Square-sum quadratic data shared by MHat and MTF: the orthogonal
    /// matrices M_a with level function sum_a <M_a x, y>^2 (M_0 = I).
    pub(crate) fn quadratic_mats(&self) -> Option<Vec<DMatrix<f64>>> {
        match self {
            Family::MHat { sys, .. } => {
                let mut mats = vec![DMatrix::identity(sys.l, sys.l)];
                for e in &sys.e {
                    mats.push(e.map(|v| v as f64));
                }
                Some(mats)
            }
            Family::Mtf { field, n, .. } => {
                let k = n + 1;
                let dl = k * field.dim();
                let mut mats = vec![DMatrix::identity(dl, dl)];
                for a in 1..field.dim() {
                    let mut unit = FScalar::zero(*field);
                    unit.q[a] = 1.0;
                    mats.push(right_scalar_matrix(unit, k));
                }
                Some(mats)
            }
            _ => None,
        }
    }

    /// `|grad F|^2` as a function of the level value.
    pub fn b_of(&self, f: f64) -> f64 {
        match self {
            Family::Mt { .. } => 2.0 * (1.0 - f * f),
            Family::MHat { .. } | Family::Mtf { .. } => 8.0 * f * (1.0 - f),
            Family::GraphSh { a, .. } => (1.0 + a * a) * (1.0 - f * f),
        }
    }

    /// Product Laplacian as a function of the level value. For GraphSH the
    /// branch sign enters through sgn(cos Theta).
    pub fn a_of(&self, f: f64) -> f64 {
        match self {
            Family::Mt { n, .. } => -2.0 * (*n as f64) * f,
            Family::MHat { sys, .. } => 4.0 * (sys.p as f64) - 4.0 * (sys.l as f64) * f,
            Family::Mtf { field, n, .. } => {
                let d = field.dim() as f64;
                4.0 * d * (1.0 - (*n as f64 + 1.0) * f)
            }
            Family::GraphSh { m, a, negative_branch, .. } => {
                let sgn = if *negative_branch { -1.0 } else { 1.0 };
                let cos_theta = sgn * (1.0 - f * f).max(0.0).sqrt();
                -(1.0 + a * a) * f - a * (*m as f64 - 1.0) * cos_theta
            }
        }
    }

    /// Constant value of the angle function C = <PN, N>.
    pub fn closed_form_angle(&self) -> f64 {
        match self {
            Family::GraphSh { a, .. } => (1.0 - a * a) / (1.0 + a * a),
            _ => 0.0,
        }
    }

    /// Mean curvature (trace convention H = sum of principal curvatures)
    /// with respect to N = grad F / |grad F|.
    pub fn closed_form_mean_curvature(&self) -> f64 {
        // For a level set of an isoparametric F: H = (b'(F)/2 - a(F)) / sqrt(b(F)).
        let t = self.level();
        match self {
            Family::Mt { n, .. } => {
                2.0 * (*n as f64 - 1.0) * t / (2.0 * (1.0 - t * t)).sqrt()
            }
            Family::MHat { sys, .. } => {
                let ns = (sys.l - 1) as f64;
                let p = sys.p as f64;
                (4.0 * t * (ns - 1.0) - 4.0 * (p - 1.0)) / (8.0 * t * (1.0 - t)).sqrt()
            }
            Family::Mtf { field, n, .. } => {
                let d = field.dim() as f64;
                let ns = (*n as f64 + 1.0) * d - 1.0;
                (4.0 * t * (ns - 1.0) - 4.0 * (d - 1.0)) / (8.0 * t * (1.0 - t)).sqrt()
            }
            Family::GraphSh { m, a, negative_branch, .. } => {
                let sgn = if *negative_branch { -1.0 } else { 1.0 };
                a * (*m as f64 - 1.0) * sgn / (1.0 + a * a).sqrt()
            }
        }
    }

    /// Closed-form principal curvature clusters (value, multiplicity),
    /// ascending. Zero-multiplicity clusters are dropped.
    pub fn closed_form_spectrum(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = match self {
            Family::Mt { n, t } => {
                let lp = ((1.0 + t) / (2.0 * (1.0 - t))).sqrt();
                let lm = -((1.0 - t) / (2.0 * (1.0 + t))).sqrt();
                vec![(lp, n - 1), (lm, n - 1), (0.0, 1)]
            }
            Family::MHat { sys, t } => four_point_ladder(*t, sys.l - 1 - sys.p, sys.p - 1),
            Family::Mtf { field, n, t } => {
                let d = field.dim();
                let ns = (n + 1) * d - 1;
                four_point_ladder(*t, ns - d, d - 1)
            }
            Family::GraphSh { m, a, negative_branch, .. } => {
                let sgn = if *negative_branch { -1.0 } else { 1.0 };
                vec![(a * sgn / (1.0 + a * a).sqrt(), m - 1), (0.0, 1)]
            }
        };
        out.retain(|&(_, mult)| mult > 0);
        out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        out
    }

    pub fn evaluate(&self, p: &ProductPoint) -> Result<Evaluation> {
        let amb = self.ambient();
        if p.x.dim() + 1 != amb.d1 || p.y.dim() + 1 != amb.d2 {
            return Err(Error::Usage(format!(
                "point has factor dims ({}, {}), family needs ({}, {})",
                p.x.dim() + 1,
                p.y.dim() + 1,
                amb.d1,
                amb.d2
            )));
        }
        match self {
            Family::Mt { n, .. } => {
                let f = p.x.coords.dot(&p.y.coords);
                let grad = tangent_project(p, &p.y.coords.clone(), &p.x.coords.clone());
                Ok(Evaluation { f, grad, lap: -2.0 * (*n as f64) * f })
            }
            Family::MHat { .. } | Family::Mtf { .. } => {
                let mats = self.quadratic_mats().unwrap();
                let l = amb.d1;
                let pcount = mats.len();
                let mut f = 0.0;
                let mut gx = DVector::zeros(l);
                let mut gy = DVector::zeros(l);
                for ma in &mats {
                    let max = ma * &p.x.coords;
                    let c = max.dot(&p.y.coords);
                    f += c * c;
                    // d/dx <M x, y>^2 = 2 c M^T y ; d/dy = 2 c M x
                    gx += 2.0 * c * (ma.transpose() * &p.y.coords);
                    gy += 2.0 * c * max;
                }
                let grad = tangent_project(p, &gx, &gy);
                let lap = 4.0 * pcount as f64 - 4.0 * l as f64 * f;
                Ok(Evaluation { f, grad, lap })
            }
            Family::GraphSh { m, a, u, .. } => {
                let g = GraphGeometry::at(p, a, u)?;
                let gx = DVector::from_vec(vec![-p.x.coords[1], p.x.coords[0]]) * g.cos_theta;
                let gy = g.w.clone() * (-a * g.cos_theta);
                // both parts are already tangent; run through the projector anyway
                let grad = tangent_project(p, &gx, &gy);
                let lap = -(1.0 + a * a) * g.sin_theta
                    - a * (*m as f64 - 1.0) * g.cos_theta;
                Ok(Evaluation { f: g.sin_theta, grad, lap })
            }
        }
    }

    pub fn unit_normal(&self, p: &ProductPoint) -> Result<TangentVec> {
        let ev = self.evaluate(p)?;
        let norm = ev.grad.norm();
        if norm < 1e-8 {
            return Err(Error::SingularLevel(format!(
                "gradient norm {norm:.3e} at level {:.6}; focal or singular set",
                ev.f
            )));
        }
        Ok(ev.grad.scale(1.0 / norm))
    }

    /// Independently assembled unit normal (not via `evaluate`), for
    /// cross-checking: each family's normal written out in closed form.
    pub fn closed_form_normal(&self, p: &ProductPoint) -> Result<TangentVec> {
        match self {
            Family::Mt { .. } => {
                let f = p.x.coords.dot(&p.y.coords);
                let scale = (2.0 * (1.0 - f * f)).sqrt();
                if scale < 1e-8 {
                    return Err(Error::SingularLevel("level +-1 is singular".into()));
                }
                let v1 = (&p.y.coords - f * &p.x.coords) / scale;
                let v2 = (&p.x.coords - f * &p.y.coords) / scale;
                Ok(TangentVec { v1, v2, base: p.clone() })
            }
            Family::MHat { .. } => {
                let ev = self.evaluate(p)?;
                let scale = (8.0 * ev.f * (1.0 - ev.f)).sqrt();
                if scale < 1e-8 {
                    return Err(Error::SingularLevel("levels 0 and 1 are singular".into()));
                }
                Ok(ev.grad.scale(1.0 / scale))
            }
            Family::Mtf { field, .. } => {
                // N = (y lam* - F x, x lam - F y) / sqrt(2 F (1 - F))
                let d = field.dim();
                let lam = witness::form_value(*field, &p.x.coords, &p.y.coords);
                let f = lam.norm2();
                let scale = (2.0 * f * (1.0 - f)).sqrt();
                if scale < 1e-8 {
                    return Err(Error::SingularLevel("levels 0 and 1 are singular".into()));
                }
                let k = p.x.coords.len() / d;
                let v1 =
                    (right_scalar_matrix(lam.conj(), k) * &p.y.coords - f * &p.x.coords) / scale;
                let v2 = (right_scalar_matrix(lam, k) * &p.x.coords - f * &p.y.coords) / scale;
                Ok(TangentVec { v1, v2, base: p.clone() })
            }
            Family::GraphSh { a, u, .. } => {
                let g = GraphGeometry::at(p, a, u)?;
                let sgn = g.cos_theta.signum();
                let scale = (1.0 + a * a).sqrt();
                let v1 = DVector::from_vec(vec![-p.x.coords[1], p.x.coords[0]]) * (sgn / scale);
                let v2 = g.w.clone() * (-a * sgn / scale);
                Ok(TangentVec { v1, v2, base: p.clone() })
            }
        }
    }

    /// C = <PN, N> at a regular point.
    pub fn angle_function(&self, p: &ProductPoint) -> Result<f64> {
        let n = self.unit_normal(p)?;
        let h = n.v1.dot(&n.v1);
        let v = match self.ambient().c2 as i32 {
            -1 => lorentz_inner(n.v2.as_slice(), n.v2.as_slice())?,
            _ => n.v2.dot(&n.v2),
        };
        Ok(h - v)
    }

    /// Deterministic sample of the ambient product (not on any level).
    pub fn ambient_sample(&self, seed: u64) -> ProductPoint {
        let amb = self.ambient();
        crate::spaceforms::sample_point(amb.d1 - 1, amb.c1, amb.d2 - 1, amb.c2, seed)
    }

    /// Deterministic sample exactly on the family's level, built
    /// algebraically (no iteration).
    pub fn sample_on_level(&self, seed: u64) -> Result<ProductPoint> {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 0x15EA5E));
        match self {
            Family::Mt { n, t } => {
                let x = sample_factor(*n, 1.0, &mut rng);
                let w = random_unit_orthogonal(&mut rng, &[&x.coords]);
                let y = FactorPoint::new(*t * &x.coords + (1.0 - t * t).sqrt() * w, 1.0)?;
                Ok(ProductPoint { x, y })
            }
            Family::MHat { .. } | Family::Mtf { .. } => {
                let mats = self.quadratic_mats().unwrap();
                let t = self.level();
                let l = self.ambient().d1;
                let x = sample_factor(l - 1, 1.0, &mut rng);
                let cols: Vec<DVector<f64>> = mats.iter().map(|m| m * &x.coords).collect();
                let refs: Vec<&DVector<f64>> = cols.iter().collect();
                // random unit vector inside span{M_a x} and another orthogonal to it
                let mut inside = DVector::zeros(l);
                for c in &cols {
                    inside += gaussian(&mut rng) * c;
                }
                let inside = &inside / inside.norm();
                let outside = random_unit_orthogonal(&mut rng, &refs);
                let y = FactorPoint::new(t.sqrt() * inside + (1.0 - t).sqrt() * outside, 1.0)?;
                Ok(ProductPoint { x, y })
            }
            Family::GraphSh { m, a, u, t, negative_branch } => {
                let y = sample_factor(*m, -1.0, &mut rng);
                let r = -lorentz_inner(y.coords.as_slice(), u)?;
                if r <= 0.0 {
                    return Err(Error::Domain("sampled point has nonpositive horocycle radius".into()));
                }
                let theta = if *negative_branch { PI - t.asin() } else { t.asin() };
                let phi = theta + a * r.ln();
                let x = FactorPoint::new(DVector::from_vec(vec![phi.cos(), phi.sin()]), 1.0)?;
                Ok(ProductPoint { x, y })
            }
        }
    }

    /// Newton iteration along the gradient from a nearby point onto the
    /// family's level. Tolerance 1e-12 on |F - t|, at most 50 steps.
    pub fn project_to_level(&self, start: &ProductPoint) -> Result<ProductPoint> {
        let t = self.level();
        let mut p = start.clone();
        for _ in 0..50 {
            let ev = self.evaluate(&p)?;
            if (ev.f - t).abs() < 1e-12 {
                return Ok(p);
            }
            let b = ev.grad.metric_inner(&ev.grad);
            if b.abs() < 1e-16 {
                return Err(Error::SingularLevel(
                    "gradient vanished during level projection".into(),
                ));
            }
            let step = (t - ev.f) / b.sqrt();
            p = product_exp(&p, &ev.grad.scale(1.0 / b.sqrt()), step);
        }
        Err(Error::Numerical("level projection did not converge in 50 steps".into()))
    }
}

/// Cot-ladder clusters for the sphere-sphere quartic families: values
/// cot(phi_1 + j pi/4)/sqrt(2), j = 0..3, with alternating multiplicities
/// (big, small, big, small), plus the flow-invariant 0 with multiplicity 1.
fn four_point_ladder(t: f64, big: usize, small: usize) -> Vec<(f64, usize)> {
    let u0 = t.sqrt().asin();
    let phi1 = FRAC_PI_4 - u0 / 2.0;
    let mut out = Vec::with_capacity(5);
    for (j, mult) in [(0, big), (1, small), (2, big), (3, small)] {
        let ang = phi1 + j as f64 * FRAC_PI_4;
        out.push((ang.cos() / ang.sin() / std::f64::consts::SQRT_2, mult));
    }
    out.push((0.0, 1));
    out
}

/// Shared geometric data for the graph family at a point.
pub(crate) struct GraphGeometry {
    pub sin_theta: f64,
    pub cos_theta: f64,
    /// Unit tangent w = y + u / <y,u>_L, the gradient of ln(-<y,u>_L) on H^m.
    pub w: DVector<f64>,
}

impl GraphGeometry {
    pub fn at(p: &ProductPoint, a: &f64, u: &[f64]) -> Result<GraphGeometry> {
        let yu = lorentz_inner(p.y.coords.as_slice(), u)?;
        if yu >= 0.0 {
            return Err(Error::Domain(format!(
                "<y,u>_L = {yu:.3e} must be negative for the graph family"
            )));
        }
        let r = -yu;
        let ab = a * r.ln();
        let (cphi, sphi) = (p.x.coords[0], p.x.coords[1]);
        // Theta = phi - a ln r, assembled by angle addition
        let sin_theta = sphi * ab.cos() - cphi * ab.sin();
        let cos_theta = cphi * ab.cos() + sphi * ab.sin();
        let w = &p.y.coords + DVector::from_column_slice(u) / yu;
        Ok(GraphGeometry { sin_theta, cos_theta, w })
    }
}

/// Random unit vector orthogonal (Euclidean) to the given vectors.
fn random_unit_orthogonal(rng: &mut ChaCha8Rng, avoid: &[&DVector<f64>]) -> DVector<f64> {
    let dim = avoid[0].len();
    loop {
        let mut v = DVector::from_fn(dim, |_, _| gaussian(rng));
        for b in avoid {
            let bn = b.norm_squared();
            if bn > 1e-12 {
                let c = v.dot(b) / bn;
                v -= c * *b;
            }
        }
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// JSON wire format for a family instance: {tag, params..., clifford_ref}.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct FamilySpec {
    pub tag: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative_branch: Option<bool>,
    /// Path to a serialized Clifford system (output of `clifford gen`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clifford_ref: Option<String>,
}

impl FamilySpec {
    pub fn build(&self) -> Result<Family> {
        let need = |v: Option<f64>, what: &str| {
            v.ok_or_else(|| Error::Usage(format!("family {} needs {what}", self.tag)))
        };
        let fam = match self.tag.to_ascii_lowercase().as_str() {
            "mt" => Family::Mt {
                n: self.n.ok_or_else(|| Error::Usage("family MT needs n".into()))?,
                t: need(self.t, "t")?,
            },
            "mhat" => {
                let sys = if let Some(path) = &self.clifford_ref {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Usage(format!("cannot read {path}: {e}")))?;
                    let dto: crate::clifford::CliffordSystemDto = serde_json::from_str(&text)
                        .map_err(|e| Error::Usage(format!("bad clifford json: {e}")))?;
                    CliffordSystem::from_dto(&dto)?
                } else {
                    let p = self.p.ok_or_else(|| Error::Usage("family MHat needs p (or clifford_ref)".into()))?;
                    let k = self.k.ok_or_else(|| Error::Usage("family MHat needs k (or clifford_ref)".into()))?;
                    crate::clifford::gen_system(p, k)?
                };
                Family::MHat { sys, t: need(self.t, "t")? }
            }
            "graphsh" | "graph" | "graph_sh" => {
                let m = self.m.ok_or_else(|| Error::Usage("family GraphSH needs m".into()))?;
                Family::GraphSh {
                    m,
                    a: need(self.a, "a")?,
                    u: self.u.clone().unwrap_or_else(|| LightVec::axis(m).u.as_slice().to_vec()),
                    t: need(self.t, "t")?,
                    negative_branch: self.negative_branch.unwrap_or(false),
                }
            }
            "mtf" => {
                let field = Field::parse(
                    self.field
                        .as_deref()
                        .ok_or_else(|| Error::Usage("family MTF needs field".into()))?,
                )?;
                Family::Mtf {
                    field,
                    n: self.n.ok_or_else(|| Error::Usage("family MTF needs n".into()))?,
                    t: need(self.t, "t")?,
                }
            }
            other => return Err(Error::Usage(format!("unknown family tag '{other}'"))),
        };
        fam.validate()?;
        Ok(fam)
    }
}

