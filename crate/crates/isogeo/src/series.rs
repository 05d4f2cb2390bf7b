//! Exact Laurent-series bookkeeping for the focal rigidity identities:
//! trigonometric expansions with rational rate parameters, the cotangent
//! summation identity, the curvature cubics, and the inhomogeneous-family
//! multiplicity enumeration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rat = BigRational;

fn rint(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

fn rq(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Truncated even Laurent series in the flow parameter s: coefficients on
/// even exponents from -2 up to `order`, everything else identically zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentSeries {
    pub order: i32,
    pub coeffs: BTreeMap<i32, Rat>,
}

impl LaurentSeries {
    pub fn zero(order: i32) -> Self {
        LaurentSeries { order, coeffs: BTreeMap::new() }
    }

    pub fn constant(c: Rat, order: i32) -> Self {
        let mut s = Self::zero(order);
        s.set(0, c);
        s
    }

    pub fn coeff(&self, e: i32) -> Rat {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, e: i32, c: Rat) {
        if c.is_zero() {
            self.coeffs.remove(&e);
        } else if e <= self.order {
            self.coeffs.insert(e, c);
        }
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let order = self.order.min(other.order);
        let mut out = LaurentSeries::zero(order);
        for e in exponents(order) {
            out.set(e, self.coeff(e) + other.coeff(e));
        }
        out
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> LaurentSeries {
        let mut out = LaurentSeries::zero(self.order);
        for (e, v) in &self.coeffs {
            out.set(*e, v * c);
        }
        out
    }

    pub fn add_constant(&self, c: &Rat) -> LaurentSeries {
        let mut out = self.clone();
        out.set(0, out.coeff(0) + c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Numeric evaluation, for cross-checks against direct function calls.
    pub fn eval_f64(&self, s: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| rat_to_f64(c) * s.powi(*e))
            .sum()
    }
}

fn exponents(order: i32) -> impl Iterator<Item = i32> {
    (-1..=order / 2).map(|k| 2 * k)
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// The even trigonometric kernels whose expansions drive the rigidity
/// series. `QuarterShiftPair` is cot^2(z + pi/4) + tan^2(z + pi/4).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeriesFn {
    Csc2,
    Cot2,
    Tan2,
    QuarterShiftPair,
}

fn base_series(f: SeriesFn) -> Vec<(i32, Rat)> {
    match f {
        SeriesFn::Csc2 => vec![
            (-2, rint(1)),
            (0, rq(1, 3)),
            (2, rq(1, 15)),
            (4, rq(2, 189)),
            (6, rq(1, 675)),
            (8, rq(2, 10395)),
        ],
        SeriesFn::Cot2 => vec![
            (-2, rint(1)),
            (0, rq(-2, 3)),
            (2, rq(1, 15)),
            (4, rq(2, 189)),
            (6, rq(1, 675)),
            (8, rq(2, 10395)),
        ],
        SeriesFn::Tan2 => vec![
            (2, rint(1)),
            (4, rq(2, 3)),
            (6, rq(17, 45)),
            (8, rq(62, 315)),
        ],
        SeriesFn::QuarterShiftPair => vec![
            (0, rint(2)),
            (2, rint(16)),
            (4, rq(128, 3)),
            (6, rq(4352, 45)),
            (8, rq(63488, 315)),
        ],
    }
}

pub const MAX_ORDER: i32 = 8;

/// Expand f(w s) in s where w^2 = rate_sq is rational: the coefficient of
/// s^e picks up rate_sq^(e/2). Orders above 8 exceed the stored kernels.
pub fn expand(f: SeriesFn, rate_sq: &Rat, order: i32) -> Result<LaurentSeries> {
    if order > MAX_ORDER {
        return Err(Error::Usage(format!(
            "series kernels stored through order {MAX_ORDER}, got {order}"
        )));
    }
    if rate_sq.is_zero() {
        return Err(Error::Usage("series rate must be nonzero".into()));
    }
    let mut out = LaurentSeries::zero(order);
    for (e, c) in base_series(f) {
        if e > order {
            continue;
        }
        let half = e / 2;
        let factor = if half >= 0 {
            pow_rat(rate_sq, half as u32)
        } else {
            pow_rat(&(Rat::one() / rate_sq), (-half) as u32)
        };
        out.set(e, c * factor);
    }
    Ok(out)
}

fn pow_rat(v: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= v;
    }
    acc
}

/// Numeric check of the cotangent summation identity
/// sum_{j<g} cot(theta + j pi / g) = g cot(g theta); returns the worst
/// absolute residual over pseudo-random sample angles.
pub fn cot_sum_identity_residual(g: u32, samples: usize, seed: u64) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let g_f = g as f64;
    let mut worst: f64 = 0.0;
    let mut tried = 0;
    while tried < samples {
        let theta: f64 = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
        // keep every summand and the right side away from poles
        let near_pole = (0..g).any(|j| {
            let z = theta + j as f64 * std::f64::consts::PI / g_f;
            (z.sin()).abs() < 1e-3
        }) || (g_f * theta).sin().abs() < 1e-3;
        if near_pole {
            continue;
        }
        tried += 1;
        let lhs: f64 = (0..g)
            .map(|j| {
                let z = theta + j as f64 * std::f64::consts::PI / g_f;
                z.cos() / z.sin()
            })
            .sum();
        let rhs = g_f * (g_f * theta).cos() / (g_f * theta).sin();
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

/// All rational roots of an integer cubic, with multiplicity, provided the
/// cubic splits completely over Q; error otherwise.
pub fn cubic_rational_roots(c3: i64, c2: i64, c1: i64, c0: i64) -> Result<Vec<Rat>> {
    if c3 == 0 {
        return Err(Error::Usage("leading cubic coefficient must be nonzero".into()));
    }
    let mut coeffs = vec![rint(c0), rint(c1), rint(c2), rint(c3)];
    let mut roots = Vec::new();
    while coeffs.len() > 1 {
        let root = find_rational_root(&coeffs)
            .ok_or_else(|| Error::Domain("cubic does not split over the rationals".into()))?;
        coeffs = deflate(&coeffs, &root);
        roots.push(root);
    }
    roots.sort();
    Ok(roots)
}

fn find_rational_root(coeffs: &[Rat]) -> Option<Rat> {
    // candidates p/q with p | constant, q | leading (after clearing to ints)
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| lcm_big(&acc, c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let a0 = ints.first()?.clone();
    let an = ints.last()?.clone();
    if a0.is_zero() {
        return Some(Rat::zero());
    }
    let ps = small_divisors(&a0);
    let qs = small_divisors(&an);
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let cand = Rat::new(p * BigInt::from(sign), q.clone());
                if eval_poly(coeffs, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.abs();
    let mut y = b.abs();
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    (a * b).abs() / x
}

fn small_divisors(v: &BigInt) -> Vec<BigInt> {
    use num_traits::ToPrimitive;
    let n = v.abs().to_i64().unwrap_or(i64::MAX).min(1_000_000);
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            out.push(BigInt::from(n / d));
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

fn eval_poly(coeffs: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn deflate(coeffs: &[Rat], root: &Rat) -> Vec<Rat> {
    // synthetic division by (x - root), highest degree first internally
    let n = coeffs.len();
    let mut out = vec![Rat::zero(); n - 1];
    let mut carry = Rat::zero();
    for i in (1..n).rev() {
        let c = &coeffs[i] + &carry;
        out[i - 1] = c.clone();
        carry = c * root;
    }
    out
}

/// Multiplicity pattern of one side of the rigidity identity: how the
/// principal curvature multiplicities sit on the focal phase lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ladder {
    /// One multiplicity repeated over g equally spaced phases.
    Uniform { g: u32, mult: Rat },
    /// Two multiplicities alternating with quarter-period spacing pi/2.
    AlternatingG2 { m0: Rat, m1: Rat },
    /// Four phases with multiplicities m0, m1, m0, m1 spaced by pi/4.
    AlternatingG4 { m0: Rat, m1: Rat },
}

impl Ladder {
    pub fn period_count(&self) -> u32 {
        match self {
            Ladder::Uniform { g, .. } => *g,
            Ladder::AlternatingG2 { .. } => 2,
            Ladder::AlternatingG4 { .. } => 4,
        }
    }

    /// Laurent series of sum_j m_j cot^2(phase_j + w s) with w^2 = rate_sq.
    pub fn series(&self, rate_sq: &Rat, order: i32) -> Result<LaurentSeries> {
        match self {
            Ladder::Uniform { g, mult } => {
                // sum over g phases collapses to g^2 csc^2(g w s) - g
                let gg = rint((*g as i64) * (*g as i64));
                let csc = expand(SeriesFn::Csc2, &(rate_sq * &gg), order)?;
                Ok(csc
                    .scale(&(mult * &gg))
                    .add_constant(&-(mult * rint(*g as i64))))
            }
            Ladder::AlternatingG2 { m0, m1 } => {
                let c = expand(SeriesFn::Cot2, rate_sq, order)?;
                let t = expand(SeriesFn::Tan2, rate_sq, order)?;
                Ok(c.scale(m0).add(&t.scale(m1)))
            }
            Ladder::AlternatingG4 { m0, m1 } => {
                // cot^2 + tan^2 at the even phases is 4 csc^2(2 w s) - 2
                let four = rint(4);
                let csc = expand(SeriesFn::Csc2, &(rate_sq * &four), order)?;
                let even = csc.scale(&(m0 * &four)).add_constant(&(-(m0 * rint(2))));
                let odd = expand(SeriesFn::QuarterShiftPair, rate_sq, order)?.scale(m1);
                Ok(even.add(&odd))
            }
        }
    }
}

/// One side of the rigidity identity: an ambient factor dimension and the
/// multiplicity ladder of the corresponding focal spectrum.
#[derive(Clone, Debug)]
pub struct Side {
    pub dim: usize,
    pub ladder: Ladder,
}

/// Series of one side: (1 -/+ C) * [(dim - 1) + ladder(w s)] where the
/// first side carries prefactor (1 - C) and rate w^2 = 2/(1 + C), the
/// second (1 + C) and 2/(1 - C).
pub fn side_series(side: &Side, c: &Rat, first: bool, order: i32) -> Result<LaurentSeries> {
    let one = Rat::one();
    if c.abs() >= one {
        return Err(Error::Domain("angle parameter must lie in (-1, 1)".into()));
    }
    let (prefactor, rate_sq) = if first {
        (&one - c, rint(2) / (&one + c))
    } else {
        (&one + c, rint(2) / (&one - c))
    };
    let inner = side
        .ladder
        .series(&rate_sq, order)?
        .add_constant(&rint(side.dim as i64 - 1));
    Ok(inner.scale(&prefactor))
}

/// Outcome of comparing the two sides coefficient by coefficient.
#[derive(Clone, Debug)]
pub struct SeriesComparison {
    /// (exponent, side1 - side2) for each stored even exponent.
    pub diffs: Vec<(i32, Rat)>,
    /// Whether the two pole lattices are rationally commensurable:
    /// g2^2 (1 + C) / (g1^2 (1 - C)) is a perfect rational square.
    pub commensurable: bool,
    pub identically_zero: bool,
}

pub fn rigidity_series_residual(
    side1: &Side,
    side2: &Side,
    c: &Rat,
    order: i32,
) -> Result<SeriesComparison> {
    let s1 = side_series(side1, c, true, order)?;
    let s2 = side_series(side2, c, false, order)?;
    let diff = s1.sub(&s2);
    let diffs: Vec<(i32, Rat)> = exponents(order).map(|e| (e, diff.coeff(e))).collect();
    let g1 = rint(side1.ladder.period_count() as i64);
    let g2 = rint(side2.ladder.period_count() as i64);
    let one = Rat::one();
    let ratio_sq = &g2 * &g2 * (&one + c) / (&g1 * &g1 * (&one - c));
    let commensurable = is_rational_square(&ratio_sq);
    let identically_zero = diffs.iter().all(|(_, d)| d.is_zero());
    Ok(SeriesComparison { diffs, commensurable, identically_zero })
}

fn is_rational_square(r: &Rat) -> bool {
    if r.is_negative() {
        return false;
    }
    is_square_big(r.numer()) && is_square_big(r.denom())
}

fn is_square_big(v: &BigInt) -> bool {
    if v.is_negative() {
        return false;
    }
    let s = v.sqrt();
    &(&s * &s) == v
}

/// One admissible inhomogeneous-family multiplicity pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicityEntry {
    pub p: usize,
    pub k: usize,
    pub l: usize,
    pub m1: usize,
    pub m2: usize,
}

/// Dimension of the irreducible module for the Clifford family on p
/// generators: 1, 2, 4, 4, 8, 8, 8, 8, then x16 per additional octave.
pub fn clifford_module_dim(p: usize) -> usize {
    const BASE: [usize; 8] = [1, 2, 4, 4, 8, 8, 8, 8];
    assert!(p >= 1);
    let octaves = (p - 1) / 8;
    BASE[(p - 1) % 8] * 16usize.pow(octaves as u32)
}

/// All multiplicity pairs (m1, m2) = (p, k delta(p) - p - 1) with m2 >= 1
/// and total module size l = k delta(p) <= bound, sorted by (l, p).
pub fn enumerate_otfkm_multiplicities(bound_l: usize) -> Vec<MultiplicityEntry> {
    let mut out = Vec::new();
    for p in 1.. {
        let delta = clifford_module_dim(p);
        if delta > bound_l {
            break;
        }
        for k in 1..=bound_l / delta {
            let l = k * delta;
            if l < p + 2 {
                continue;
            }
            out.push(MultiplicityEntry { p, k, l, m1: p, m2: l - p - 1 });
        }
    }
    out.sort_by_key(|e| (e.l, e.p));
    out
}
