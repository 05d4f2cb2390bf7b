//! Explicit symmetry witnesses.
//!
//! `mtf_witness` produces, for two points on the same MTF level, a pair
//! (A, a) with A an F-unitary matrix (real orthogonal, commuting with the
//! right scalar action) and a a unit scalar, acting by (x, y) -> (A x a, A y a*),
//! that carries one point to the other. Over R a witness exists only when
//! the form values share a sign.
//!
//! `graph_symmetry_check` verifies that GraphSH is a level set of a
//! cohomogeneity-one action: a rotation of the circle factor by theta paired
//! with a boost of parameter theta/a along the fixed lightlike direction,
//! composed with a random element of the stabilizer (parabolic translation
//! and a spatial rotation fixing the direction).

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    hermitian_form, right_structure_matrices, to_fvector, to_real, FScalar, Field,
};
use crate::spaceforms::{lorentz_inner, FactorPoint, ProductPoint};
use crate::{Error, Result};

use super::Family;

#[derive(Debug, Clone)]
pub struct GroupWitness {
    pub field: Field,
    /// Real orthogonal matrix commuting with the right scalar structure.
    pub a_mat: DMatrix<f64>,
    /// Unit scalar.
    pub scalar: FScalar,
    /// max(|A x a - x'|, |A y a* - y'|).
    pub residual: f64,
    pub orthogonality_residual: f64,
    pub commutation_residual: f64,
}

pub(crate) fn form_value(field: Field, x: &DVector<f64>, y: &DVector<f64>) -> FScalar {
    let xf = to_fvector(x.as_slice(), field);
    let yf = to_fvector(y.as_slice(), field);
    hermitian_form(&xf, &yf)
}

/// F-linear (right-module) map sending the j-th source basis vector to the
/// j-th target basis vector, realified: A v = sum_j target_j <source_j, v>_F.
fn unitary_from_bases(field: Field, source: &[Vec<FScalar>], target: &[Vec<FScalar>]) -> DMatrix<f64> {
    let d = field.dim();
    let k = source[0].len();
    let n = k * d;
    let mut a = DMatrix::zeros(n, n);
    for col in 0..n {
        let mut e = vec![0.0; n];
        e[col] = 1.0;
        let ef = to_fvector(&e, field);
        let mut out = vec![FScalar::zero(field); k];
        for (s, t) in source.iter().zip(target) {
            let coef = hermitian_form(s, &ef);
            for (o, ti) in out.iter_mut().zip(t) {
                *o = o.add(ti.mul(coef));
            }
        }
        let real = to_real(&out);
        for row in 0..n {
            a[(row, col)] = real[row];
        }
    }
    a
}

/// Complete the given orthonormal F-vectors to an orthonormal basis of F^k.
fn complete_basis(field: Field, seed: &[Vec<FScalar>]) -> Vec<Vec<FScalar>> {
    let d = field.dim();
    let k = seed[0].len();
    let mut basis: Vec<Vec<FScalar>> = seed.to_vec();
    for idx in 0..k * d {
        if basis.len() == k {
            break;
        }
        let mut e = vec![0.0; k * d];
        e[idx] = 1.0;
        let mut v = to_fvector(&e, field);
        for b in &basis {
            let coef = hermitian_form(b, &v);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = vi.sub(bi.mul(coef));
            }
        }
        let norm = v.iter().map(|s| s.norm2()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for vi in v.iter_mut() {
                *vi = vi.scale(1.0 / norm);
            }
            basis.push(v);
        }
    }
    assert_eq!(basis.len(), k, "basis completion failed");
    basis
}

fn fvec_scale(v: &[FScalar], s: FScalar) -> Vec<FScalar> {
    v.iter().map(|vi| vi.mul(s)).collect()
}

fn fvec_sub(a: &[FScalar], b: &[FScalar]) -> Vec<FScalar> {
    a.iter().zip(b).map(|(x, y)| x.sub(*y)).collect()
}

fn fvec_norm(v: &[FScalar]) -> f64 {
    v.iter().map(|s| s.norm2()).sum::<f64>().sqrt()
}

/// Witness construction for two points of the same MTF level set.
pub fn mtf_witness(fam: &Family, p: &ProductPoint, q: &ProductPoint) -> Result<GroupWitness> {
    let (field, _n) = match fam {
        Family::Mtf { field, n, .. } => (*field, *n),
        _ => return Err(Error::Usage("witness construction is for MTF".into())),
    };
    let d = field.dim();
    let k = p.x.coords.len() / d;

    let lam1 = form_value(field, &p.x.coords, &p.y.coords);
    let lam2 = form_value(field, &q.x.coords, &q.y.coords);
    let t1 = lam1.norm2();
    let t2 = lam2.norm2();
    if (t1 - t2).abs() > 1e-10 {
        return Err(Error::Usage(format!(
            "points lie on different levels: {t1:.12} vs {t2:.12}"
        )));
    }
    let t = t1;
    if field == Field::R && lam1.q[0] * lam2.q[0] < 0.0 {
        return Err(Error::NoWitness(
            "real form values have opposite signs; the level has two components over R".into(),
        ));
    }

    let xf = to_fvector(p.x.coords.as_slice(), field);
    let xf2 = to_fvector(q.x.coords.as_slice(), field);
    let yf2 = to_fvector(q.y.coords.as_slice(), field);

    // step 1: an F-unitary A1 with A1 x = x'
    let b1 = complete_basis(field, &[xf.clone()]);
    let b2 = complete_basis(field, &[xf2.clone()]);
    let a1 = unitary_from_bases(field, &b1, &b2);

    // the transported pair is (x', A1 y); its form value is still lam1
    let a1y = {
        let v = &a1 * &p.y.coords;
        to_fvector(v.as_slice(), field)
    };

    // step 2: unit scalar b with b lam1 b = lam2; the action with a = b*
    // multiplies the form value by a* . a* on the left/right
    let b_scalar = if t < 1e-14 {
        FScalar::one(field)
    } else {
        let mu = lam1.scale(1.0 / t.sqrt());
        let nu = lam2.scale(1.0 / t.sqrt());
        let prod = mu.mul(nu);
        match prod.unit_sqrt() {
            // b mu b = mu^{-1} (mu nu)^{1/2} mu mu^{-1} (mu nu)^{1/2} = nu
            Ok(root) => mu.inverse()?.mul(root),
            Err(_) => {
                // mu nu = -1: b = mu^{-1} sigma works for any unit imaginary sigma
                if d == 1 {
                    return Err(Error::NoWitness(
                        "real form values need matching signs".into(),
                    ));
                }
                let mut sigma = FScalar::zero(field);
                sigma.q[1] = 1.0;
                mu.inverse()?.mul(sigma)
            }
        }
    };
    let a_scalar = b_scalar.conj();

    // step 3: A2 fixing the x'-line (x' -> x' a*) and rotating the residues
    let v1 = fvec_sub(&a1y, &fvec_scale(&xf2, lam1));
    let v2 = fvec_sub(&fvec_scale(&yf2, a_scalar), &fvec_scale(&xf2, b_scalar.mul(lam1)));
    let n1 = fvec_norm(&v1);
    let n2 = fvec_norm(&v2);
    // the composite acts as v -> (A2 A1 v) a, so the x'-line must return to
    // itself with the scalar pre-cancelled: A2 x' = x' conj(a)
    let line_image = fvec_scale(&xf2, a_scalar.conj());
    let a2 = if n1 < 1e-9 || n2 < 1e-9 {
        // y is a scalar multiple of x (t = 1 edge); only the line needs moving
        let src = complete_basis(field, &[xf2.clone()]);
        let mut dst_seed = vec![line_image];
        dst_seed.extend_from_slice(&src[1..]);
        unitary_from_bases(field, &src, &dst_seed)
    } else {
        let v1n: Vec<FScalar> = v1.iter().map(|s| s.scale(1.0 / n1)).collect();
        let v2n: Vec<FScalar> = v2.iter().map(|s| s.scale(1.0 / n2)).collect();
        let src = complete_basis(field, &[xf2.clone(), v1n]);
        let dst = complete_basis(field, &[line_image, v2n]);
        unitary_from_bases(field, &src, &dst)
    };

    let a_mat = &a2 * &a1;

    // verify
    let right_a = crate::algebra::right_scalar_matrix(a_scalar, k);
    let right_abar = crate::algebra::right_scalar_matrix(a_scalar.conj(), k);
    let gx = &right_a * (&a_mat * &p.x.coords);
    let gy = &right_abar * (&a_mat * &p.y.coords);
    let residual = (&gx - &q.x.coords).norm().max((&gy - &q.y.coords).norm());

    let dim = k * d;
    let orr = (&a_mat.transpose() * &a_mat - DMatrix::identity(dim, dim)).amax();
    let mut comm: f64 = 0.0;
    for j in right_structure_matrices(field, k) {
        comm = comm.max((&a_mat * &j - &j * &a_mat).amax());
    }
    Ok(GroupWitness {
        field,
        a_mat,
        scalar: a_scalar,
        residual,
        orthogonality_residual: orr,
        commutation_residual: comm,
    })
}

/// Lorentz boost along the null plane spanned by u and its spatial mirror:
/// u -> e^{-s} u, v -> e^{s} v, identity on the spacelike complement.
pub fn boost(u: &[f64], s: f64, y: &DVector<f64>) -> Result<DVector<f64>> {
    let mut v = DVector::from_column_slice(u);
    for i in 1..v.len() {
        v[i] = -v[i];
    }
    let uv = lorentz_inner(u, v.as_slice())?;
    if uv.abs() < 1e-12 {
        return Err(Error::Usage("degenerate null pair for boost".into()));
    }
    let alpha = lorentz_inner(y.as_slice(), v.as_slice())? / uv;
    let beta = lorentz_inner(y.as_slice(), u)? / uv;
    let w = y - alpha * DVector::from_column_slice(u) - beta * &v;
    Ok((-s).exp() * alpha * DVector::from_column_slice(u) + s.exp() * beta * v + w)
}

/// |<h_s y, u>_L - e^s <y, u>_L|: the boost rescales horocycle coordinates.
pub fn boost_residual(u: &[f64], s: f64, y: &DVector<f64>) -> Result<f64> {
    let hy = boost(u, s, y)?;
    let before = lorentz_inner(y.as_slice(), u)?;
    let after = lorentz_inner(hy.as_slice(), u)?;
    Ok((after - s.exp() * before).abs())
}

/// Apply a seeded random stabilizer element followed by the screw motion
/// (rotate the circle by theta, boost by theta/a) and return |F(g p) - F(p)|.
/// Errors with `Usage` if a = 0.
///
/// The group element is assembled in null-plane coordinates y = alpha u +
/// beta v + sum zc_i z_i, where the stabilizer and the boost act exactly
/// (rotation of zc, the parabolic shift below, and scaling alpha, beta by
/// e^{-s}, e^{s}); this keeps the residual at rounding level even for boosts
/// that stretch coordinates by e^{2 pi}.
pub fn graph_symmetry_check(
    fam: &Family,
    p: &ProductPoint,
    theta: f64,
    seed: u64,
) -> Result<f64> {
    let (m, a, u) = match fam {
        Family::GraphSh { m, a, u, .. } => (*m, *a, u.clone()),
        _ => return Err(Error::Usage("symmetry check is for GraphSH".into())),
    };
    if a == 0.0 {
        return Err(Error::Usage("graph symmetry needs a != 0".into()));
    }
    let f0 = fam.evaluate(p)?.f;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DVector::from_column_slice(&u);
    for i in 1..v.len() {
        v[i] = -v[i];
    }
    let uv = lorentz_inner(&u, v.as_slice())?;
    // spacelike orthonormal complement of span{u, v}
    let mut zs: Vec<DVector<f64>> = Vec::new();
    for i in 0..m + 1 {
        let mut e = DVector::zeros(m + 1);
        e[i] = 1.0;
        let cu = lorentz_inner(e.as_slice(), v.as_slice())? / uv;
        let cv = lorentz_inner(e.as_slice(), &u)? / uv;
        let mut w = e - cu * DVector::from_column_slice(&u) - cv * &v;
        for z in &zs {
            let c = lorentz_inner(w.as_slice(), z.as_slice())?;
            w -= c * z;
        }
        let n = lorentz_inner(w.as_slice(), w.as_slice())?.max(0.0).sqrt();
        if n > 1e-8 {
            zs.push(w / n);
        }
    }
    let zdim = zs.len();

    // coordinates of y in the null-plane + z basis
    let mut alpha = lorentz_inner(p.y.coords.as_slice(), v.as_slice())? / uv;
    let mut beta = lorentz_inner(p.y.coords.as_slice(), &u)? / uv;
    let mut zc = DVector::zeros(zdim);
    for (i, z) in zs.iter().enumerate() {
        zc[i] = lorentz_inner(p.y.coords.as_slice(), z.as_slice())?;
    }

    // stabilizer: spatial rotation fixing u, v (QR with sign fix, det
    // corrected), then a parabolic translation fixing u, which shifts
    //   zc -> zc + beta e,  alpha -> alpha - (zc . e)/uv - beta |e|^2/(2 uv)
    // and preserves <y,y>_L and <y,u>_L exactly
    if zdim > 0 {
        let mut g = DMatrix::from_fn(zdim, zdim, |_, _| crate::spaceforms::gaussian(&mut rng));
        if zdim == 1 {
            g[(0, 0)] = 1.0;
        }
        let qr = g.clone().qr();
        let mut qmat = qr.q();
        let r = qr.r();
        for j in 0..zdim {
            if r[(j, j)] < 0.0 {
                for i in 0..zdim {
                    qmat[(i, j)] = -qmat[(i, j)];
                }
            }
        }
        if qmat.determinant() < 0.0 && zdim > 1 {
            for i in 0..zdim {
                qmat[(i, 0)] = -qmat[(i, 0)];
            }
        }
        zc = &qmat * &zc;
        let evec = DVector::from_fn(zdim, |_, _| 0.5 * crate::spaceforms::gaussian(&mut rng));
        alpha -= zc.dot(&evec) / uv + 0.5 * evec.norm_squared() * beta / uv;
        zc += beta * &evec;
    }

    // screw motion: rotation of S^1 by theta, boost by theta/a
    let s = theta / a;
    alpha *= (-s).exp();
    beta *= s.exp();
    let (ct, st) = (theta.cos(), theta.sin());
    let x_rot = DVector::from_vec(vec![
        ct * p.x.coords[0] - st * p.x.coords[1],
        st * p.x.coords[0] + ct * p.x.coords[1],
    ]);
    let mut y_new = alpha * DVector::from_column_slice(&u) + beta * &v;
    for (i, z) in zs.iter().enumerate() {
        y_new += zc[i] * z;
    }

    // no renormalization: the rebuilt point, evaluated through <y,u>_L, is
    // relatively accurate even where the shell residual (a difference of
    // e^{2s}-sized products) is not
    let gp = ProductPoint {
        x: FactorPoint::new(x_rot, 1.0)?,
        y: FactorPoint::new_unchecked(y_new, -1.0),
    };
    let f1 = fam.evaluate(&gp)?.f;
    Ok((f1 - f0).abs())
}
