//! Factor geometry: the unit sphere S^n in R^{n+1} and the upper-sheet
//! hyperboloid H^m in Lorentz space L^{m+1}, their product, the product
//! structure P(v1, v2) = (v1, -v2), exponential maps with parallel transport,
//! and seeded random sampling.
//!
//! Conventions: curvature sign c = +1 selects the sphere with the Euclidean
//! inner product, c = -1 the hyperboloid with <u,v>_L = -u0 v0 + sum u_i v_i.
//! Hyperboloid points live on the upper sheet (coords[0] >= 1).

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub const CONSTRAINT_TOL: f64 = 1e-12;

pub fn lorentz_inner(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() || u.len() < 2 {
        return Err(Error::Usage(format!(
            "lorentz_inner needs two equal-length vectors of length >= 2, got {} and {}",
            u.len(),
            v.len()
        )));
    }
    Ok(lz(u, v))
}

/// Unchecked Lorentz form; callers guarantee equal lengths.
pub(crate) fn lz(u: &[f64], v: &[f64]) -> f64 {
    let mut s = -u[0] * v[0];
    for i in 1..u.len() {
        s += u[i] * v[i];
    }
    s
}

fn euclid(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// One factor: a point of S^n (c = +1) or H^m (c = -1), stored in the ambient
/// linear space.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPoint {
    pub coords: DVector<f64>,
    pub c: f64,
}

impl FactorPoint {
    pub fn new(coords: DVector<f64>, c: f64) -> Result<Self> {
        if c != 1.0 && c != -1.0 {
            return Err(Error::Usage(format!("curvature sign must be +-1, got {c}")));
        }
        if coords.len() < 2 {
            return Err(Error::Usage("factor points need ambient dimension >= 2".into()));
        }
        let p = FactorPoint { coords, c };
        let r = p.constraint_residual();
        if r > CONSTRAINT_TOL {
            return Err(Error::Usage(format!("point off the quadric by {r:.3e}")));
        }
        if c < 0.0 && p.coords[0] < 1.0 - CONSTRAINT_TOL {
            return Err(Error::Usage("hyperboloid point must be on the upper sheet".into()));
        }
        Ok(p)
    }

    pub(crate) fn new_unchecked(coords: DVector<f64>, c: f64) -> Self {
        FactorPoint { coords, c }
    }

    /// Intrinsic dimension n (ambient is n+1).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// |<x,x> - c| in the factor's metric (0 on the quadric).
    pub fn constraint_residual(&self) -> f64 {
        (self.inner_raw(self.coords.as_slice(), self.coords.as_slice()) - self.c).abs()
    }

    /// The factor's ambient bilinear form (Euclidean or Lorentz).
    pub fn inner_raw(&self, u: &[f64], v: &[f64]) -> f64 {
        if self.c > 0.0 {
            euclid(u, v)
        } else {
            lz(u, v)
        }
    }

    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        self.inner_raw(u.as_slice(), v.as_slice())
    }

    /// Norm of a tangent vector (the form is positive definite on tangent spaces
    /// of both factors).
    pub fn norm(&self, v: &DVector<f64>) -> f64 {
        self.inner(v, v).max(0.0).sqrt()
    }

    /// Metric-orthogonal projection of an ambient vector onto the tangent space.
    pub fn project(&self, a: &DVector<f64>) -> DVector<f64> {
        // sphere: <x,x> = 1, subtract <a,x> x; hyperboloid: <y,y> = -1, add <a,y>_L y
        let coef = self.inner(a, &self.coords) / self.c;
        a - &self.coords * coef
    }

    /// Pull a drifted point back onto the quadric (used after long flows).
    pub fn renormalized(&self) -> FactorPoint {
        let q = self.inner(&self.coords, &self.coords);
        let scale = (q / self.c).max(f64::MIN_POSITIVE).sqrt();
        FactorPoint::new_unchecked(&self.coords / scale, self.c)
    }

    /// Orthonormal basis of the tangent space at this point.
    pub fn tangent_basis(&self) -> Vec<DVector<f64>> {
        let k = self.coords.len();
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(k - 1);
        for i in 0..k {
            let mut e = DVector::zeros(k);
            e[i] = 1.0;
            let mut v = self.project(&e);
            for b in &basis {
                let c = self.inner(&v, b);
                v -= b * c;
            }
            let n = self.norm(&v);
            if n > 1e-8 {
                basis.push(v / n);
            }
            if basis.len() == k - 1 {
                break;
            }
        }
        basis
    }
}

/// Geodesic from p with initial velocity v, evaluated at time t; returns the
/// point and the transported velocity (same speed as v).
pub fn factor_geodesic(p: &FactorPoint, v: &DVector<f64>, t: f64) -> (FactorPoint, DVector<f64>) {
    let speed = p.norm(v);
    if speed == 0.0 {
        return (p.clone(), v.clone());
    }
    let dir = v / speed;
    let s = speed * t;
    let (pt, unit_vel) = if p.c > 0.0 {
        (
            &p.coords * s.cos() + &dir * s.sin(),
            &p.coords * (-s.sin()) + &dir * s.cos(),
        )
    } else {
        (
            &p.coords * s.cosh() + &dir * s.sinh(),
            &p.coords * s.sinh() + &dir * s.cosh(),
        )
    };
    let q = FactorPoint::new_unchecked(pt, p.c).renormalized();
    (q, unit_vel * speed)
}

/// Exponential map of one factor.
pub fn factor_exp(p: &FactorPoint, v: &DVector<f64>, t: f64) -> FactorPoint {
    factor_geodesic(p, v, t).0
}

/// Parallel transport of w along the geodesic from p with velocity v, to time t.
pub fn factor_transport(
    p: &FactorPoint,
    v: &DVector<f64>,
    t: f64,
    w: &DVector<f64>,
) -> DVector<f64> {
    let speed = p.norm(v);
    if speed == 0.0 {
        return w.clone();
    }
    let dir = v / speed;
    let along = p.inner(w, &dir);
    let perp = w - &dir * along;
    let (_, vel) = factor_geodesic(p, v, t);
    // perp components (pointwise orthogonal to the 2-plane of motion) are fixed
    perp + (vel / speed) * along
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductPoint {
    pub x: FactorPoint,
    pub y: FactorPoint,
}

impl ProductPoint {
    pub fn new(x: FactorPoint, y: FactorPoint) -> Self {
        ProductPoint { x, y }
    }

    pub fn dim(&self) -> usize {
        self.x.dim() + self.y.dim()
    }
}

/// A tangent vector of the product, split into its two factor components and
/// anchored at a base point.
#[derive(Debug, Clone)]
pub struct TangentVec {
    pub v1: DVector<f64>,
    pub v2: DVector<f64>,
    pub base: ProductPoint,
}

impl TangentVec {
    pub fn zero(base: &ProductPoint) -> Self {
        TangentVec {
            v1: DVector::zeros(base.x.coords.len()),
            v2: DVector::zeros(base.y.coords.len()),
            base: base.clone(),
        }
    }

    pub fn metric_inner(&self, other: &TangentVec) -> f64 {
        self.base.x.inner(&self.v1, &other.v1) + self.base.y.inner(&self.v2, &other.v2)
    }

    pub fn norm(&self) -> f64 {
        self.metric_inner(self).max(0.0).sqrt()
    }

    /// Max violation of the two tangency constraints.
    pub fn tangency_residual(&self) -> f64 {
        let a = self.base.x.inner(&self.v1, &self.base.x.coords).abs();
        let b = self.base.y.inner(&self.v2, &self.base.y.coords).abs();
        a.max(b)
    }

    pub fn scale(&self, s: f64) -> TangentVec {
        TangentVec {
            v1: &self.v1 * s,
            v2: &self.v2 * s,
            base: self.base.clone(),
        }
    }

    pub fn add(&self, other: &TangentVec) -> TangentVec {
        TangentVec {
            v1: &self.v1 + &other.v1,
            v2: &self.v2 + &other.v2,
            base: self.base.clone(),
        }
    }

    pub fn sub(&self, other: &TangentVec) -> TangentVec {
        TangentVec {
            v1: &self.v1 - &other.v1,
            v2: &self.v2 - &other.v2,
            base: self.base.clone(),
        }
    }
}

/// The product structure P: (v1, v2) -> (v1, -v2). Involutive isometry.
pub fn product_structure(v: &TangentVec) -> TangentVec {
    TangentVec {
        v1: v.v1.clone(),
        v2: -&v.v2,
        base: v.base.clone(),
    }
}

/// Componentwise metric-orthogonal projection of an ambient pair onto T_p.
pub fn tangent_project(p: &ProductPoint, a1: &DVector<f64>, a2: &DVector<f64>) -> TangentVec {
    TangentVec {
        v1: p.x.project(a1),
        v2: p.y.project(a2),
        base: p.clone(),
    }
}

/// Product exponential map: each factor flows along its own geodesic.
pub fn product_exp(p: &ProductPoint, v: &TangentVec, t: f64) -> ProductPoint {
    ProductPoint {
        x: factor_exp(&p.x, &v.v1, t),
        y: factor_exp(&p.y, &v.v2, t),
    }
}

/// A lightlike direction u = (u0, w) with <u,u>_L = 0, u0 > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LightVec {
    pub u: DVector<f64>,
}

impl LightVec {
    /// u = (1, w) for a unit spatial direction w.
    pub fn from_spatial(w: &[f64]) -> Result<Self> {
        let n = euclid(w, w).sqrt();
        if !(n > 0.0) {
            return Err(Error::Usage("lightlike spatial part must be nonzero".into()));
        }
        let mut u = DVector::zeros(w.len() + 1);
        u[0] = 1.0;
        for (i, &wi) in w.iter().enumerate() {
            u[i + 1] = wi / n;
        }
        Ok(LightVec { u })
    }

    /// Axis-aligned default: u = (1, 1, 0, ..., 0) in L^{m+1}; exact null vector.
    pub fn axis(m: usize) -> Self {
        let mut u = DVector::zeros(m + 1);
        u[0] = 1.0;
        u[1] = 1.0;
        LightVec { u }
    }

    pub fn null_residual(&self) -> f64 {
        lz(self.u.as_slice(), self.u.as_slice()).abs()
    }
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; two uniforms per normal keeps the stream simple and seeded.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn sample_factor(dim: usize, c: f64, rng: &mut ChaCha8Rng) -> FactorPoint {
    if c > 0.0 {
        loop {
            let v = DVector::from_fn(dim + 1, |_, _| gaussian(rng));
            let n = v.norm();
            if n > 1e-6 {
                return FactorPoint::new_unchecked(v / n, 1.0);
            }
        }
    } else {
        // flow from the hyperboloid's base point along a random unit tangent
        let mut base = DVector::zeros(dim + 1);
        base[0] = 1.0;
        let p = FactorPoint::new_unchecked(base, -1.0);
        let mut v = DVector::zeros(dim + 1);
        loop {
            for i in 1..=dim {
                v[i] = gaussian(rng);
            }
            if v.norm() > 1e-6 {
                break;
            }
        }
        let radius = gaussian(rng).abs();
        let vn = p.norm(&v);
        factor_exp(&p, &(v / vn), radius)
    }
}

/// Deterministic seeded sample on M_{c1}^n x M_{c2}^m.
pub fn sample_point(n: usize, c1: f64, m: usize, c2: f64, seed: u64) -> ProductPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = sample_factor(n, c1, &mut rng);
    let y = sample_factor(m, c2, &mut rng);
    ProductPoint::new(x, y)
}

/// SplitMix64 step, used to derive independent per-sample seeds from a master
/// seed so results do not depend on worker scheduling.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
