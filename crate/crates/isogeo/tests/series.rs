use isogeo::series::{
    cot_sum_identity_residual, cubic_rational_roots, enumerate_otfkm_multiplicities, expand,
    rat_to_f64, rigidity_series_residual, side_series, Ladder, LaurentSeries, SeriesFn, Side,
};
use isogeo::spaceforms::mix_seed;
use isogeo::Error;
use num_rational::BigRational as Rat;
use num_traits::Zero;

fn rq(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn ri(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Coefficients of cot z = 1/z + sum b_e z^e solved order by order from the
/// defining equation cot' = -1 - cot^2; nothing here touches the library's
/// stored tables.
fn cot_coeffs(max_e: i32) -> std::collections::HashMap<i32, Rat> {
    let mut c = std::collections::HashMap::new();
    c.insert(-1, ri(1));
    for e_eq in -1..max_e {
        // coefficient of z^e_eq in cot^2, using only already-known entries
        let mut conv = Rat::zero();
        for (i, ci) in c.iter() {
            if let Some(cj) = c.get(&(e_eq - i)) {
                conv += ci * cj;
            }
        }
        let delta = if e_eq == 0 { ri(1) } else { ri(0) };
        // (e+1) c_{e+1} = -delta - conv - 2 c_{e+1}  (the cross term with 1/z)
        let next = (-delta - conv) / ri((e_eq + 3) as i64);
        c.insert(e_eq + 1, next);
    }
    c
}

/// Coefficients of tan z from tan' = 1 + tan^2.
fn tan_coeffs(max_e: usize) -> Vec<Rat> {
    let mut a = vec![Rat::zero(); max_e + 1];
    a[1] = ri(1);
    for k in 1..max_e {
        let mut conv = Rat::zero();
        for i in 0..=k {
            conv += &a[i] * &a[k - i];
        }
        let delta = if k == 0 { ri(1) } else { ri(0) };
        a[k + 1] = (delta + conv) / ri((k + 1) as i64);
    }
    a
}

fn square_laurent(c: &std::collections::HashMap<i32, Rat>, e: i32) -> Rat {
    let mut acc = Rat::zero();
    for (i, ci) in c.iter() {
        if let Some(cj) = c.get(&(e - i)) {
            acc += ci * cj;
        }
    }
    acc
}

#[test]
fn inverse_square_table_rederived_from_the_defining_equation() {
    let cot = cot_coeffs(9);
    let csc2 = expand(SeriesFn::Csc2, &ri(1), 8).unwrap();
    for e in [-2i32, 0, 2, 4, 6, 8] {
        // csc^2 = -cot'
        let derived = -ri((e + 1) as i64) * cot.get(&(e + 1)).cloned().unwrap_or_else(Rat::zero);
        assert_eq!(csc2.coeff(e), derived, "exponent {e}");
    }
    // spot values
    assert_eq!(csc2.coeff(-2), ri(1));
    assert_eq!(csc2.coeff(0), rq(1, 3));
    assert_eq!(csc2.coeff(2), rq(1, 15));
    assert_eq!(csc2.coeff(4), rq(2, 189));
}

#[test]
fn cot_square_table_rederived_by_convolution() {
    let cot = cot_coeffs(9);
    let cot2 = expand(SeriesFn::Cot2, &ri(1), 8).unwrap();
    for e in [-2i32, 0, 2, 4, 6, 8] {
        assert_eq!(cot2.coeff(e), square_laurent(&cot, e), "exponent {e}");
    }
    // and the pythagorean relation against the other table
    let csc2 = expand(SeriesFn::Csc2, &ri(1), 8).unwrap();
    let diff = csc2.sub(&cot2).add_constant(&ri(-1));
    assert!(diff.is_zero());
}

#[test]
fn tan_square_table_rederived_from_the_defining_equation() {
    let a = tan_coeffs(9);
    let tan2 = expand(SeriesFn::Tan2, &ri(1), 8).unwrap();
    for e in [2usize, 4, 6, 8] {
        let mut conv = Rat::zero();
        for i in 0..=e {
            conv += &a[i] * &a[e - i];
        }
        assert_eq!(tan2.coeff(e as i32), conv, "exponent {e}");
    }
    assert_eq!(tan2.coeff(6), rq(17, 45));
    assert_eq!(tan2.coeff(8), rq(62, 315));
}

#[test]
fn quarter_shift_pair_is_a_scaled_double_angle_tangent() {
    // cot^2(z + pi/4) + tan^2(z + pi/4) = (cot + tan)^2 - 2 = 4 csc^2(2z + pi/2) - 2
    //                                  = 4 sec^2(2z) - 2 = 2 + 4 tan^2(2z)
    let pair = expand(SeriesFn::QuarterShiftPair, &ri(1), 8).unwrap();
    let four_tan = expand(SeriesFn::Tan2, &ri(4), 8).unwrap().scale(&ri(4)).add_constant(&ri(2));
    let diff = pair.sub(&four_tan);
    assert!(diff.is_zero(), "{:?}", diff);
}

#[test]
fn truncated_expansions_match_direct_evaluation() {
    let direct = |f: SeriesFn, z: f64| -> f64 {
        match f {
            SeriesFn::Csc2 => 1.0 / (z.sin() * z.sin()),
            SeriesFn::Cot2 => (z.cos() / z.sin()).powi(2),
            SeriesFn::Tan2 => z.tan() * z.tan(),
            SeriesFn::QuarterShiftPair => {
                let w = z + std::f64::consts::FRAC_PI_4;
                (w.cos() / w.sin()).powi(2) + w.tan() * w.tan()
            }
        }
    };
    for f in [SeriesFn::Csc2, SeriesFn::Cot2, SeriesFn::Tan2, SeriesFn::QuarterShiftPair] {
        let s = expand(f, &ri(1), 8).unwrap();
        for z in [-0.01, -0.005, 0.004, 0.01] {
            let err = (s.eval_f64(z) - direct(f, z)).abs();
            assert!(err < 1e-10, "{f:?} at {z}: err {err}");
        }
    }
    // rate scaling: csc^2(3z) expanded with rate_sq = 9
    let s = expand(SeriesFn::Csc2, &ri(9), 8).unwrap();
    for z in [0.003, -0.008] {
        let w = 3.0 * z;
        assert!((s.eval_f64(z) - 1.0 / (w.sin() * w.sin())).abs() < 1e-10);
    }
}

#[test]
fn expansion_guards() {
    assert!(matches!(expand(SeriesFn::Csc2, &ri(1), 10), Err(Error::Usage(_))));
    assert!(expand(SeriesFn::Csc2, &ri(0), 8).is_err());
}

#[test]
fn laurent_arithmetic() {
    let a = expand(SeriesFn::Csc2, &ri(1), 8).unwrap();
    let b = expand(SeriesFn::Tan2, &ri(1), 8).unwrap();
    let roundtrip = a.add(&b).sub(&b);
    for e in -2..=8 {
        assert_eq!(roundtrip.coeff(e), a.coeff(e));
    }
    let scaled = a.scale(&rq(3, 7)).scale(&rq(7, 3));
    for e in -2..=8 {
        assert_eq!(scaled.coeff(e), a.coeff(e));
    }
    assert!(LaurentSeries::zero(8).is_zero());
    assert!(!a.is_zero());
    assert_eq!(LaurentSeries::constant(rq(5, 2), 8).coeff(0), rq(5, 2));
}

#[test]
fn cotangent_summation_identity_numerically() {
    for g in [1u32, 2, 3, 4, 6] {
        let res = cot_sum_identity_residual(g, 300, mix_seed(42, g as u64));
        assert!(res < 1e-10, "g={g}: {res}");
    }
}

#[test]
fn curvature_cubics_split_with_the_expected_roots() {
    // (k - 1)(k - 4)(5k + 4) = 5k^3 - 21k^2 + 16
    let mut roots = cubic_rational_roots(5, -21, 0, 16).unwrap();
    roots.sort();
    assert_eq!(roots, vec![rq(-4, 5), ri(1), ri(4)]);
    // (k - 4)(k - 16)(5k + 16) = 5k^3 - 84k^2 + 1024
    let mut roots = cubic_rational_roots(5, -84, 0, 1024).unwrap();
    roots.sort();
    assert_eq!(roots, vec![rq(-16, 5), ri(4), ri(16)]);

    // substitution oracle: each root kills its cubic exactly
    for (c, roots) in [
        ((5i64, -21i64, 0i64, 16i64), [rq(-4, 5), ri(1), ri(4)]),
        ((5, -84, 0, 1024), [rq(-16, 5), ri(4), ri(16)]),
    ] {
        for r in roots {
            let v = ri(c.0) * &r * &r * &r + ri(c.1) * &r * &r + ri(c.2) * &r + ri(c.3);
            assert!(v.is_zero());
        }
    }
}

#[test]
fn cubic_root_finder_on_constructed_and_irrational_cases() {
    // (x - 2)(x + 3)(x - 1/1) with integer leading coefficient
    let mut roots = cubic_rational_roots(1, 0, -7, 6).unwrap(); // roots 1, 2, -3
    roots.sort();
    assert_eq!(roots, vec![ri(-3), ri(1), ri(2)]);
    // repeated root
    let mut roots = cubic_rational_roots(1, -3, 3, -1).unwrap();
    roots.sort();
    assert_eq!(roots, vec![ri(1), ri(1), ri(1)]);
    // x^3 - 2x does not split over Q
    assert!(matches!(cubic_rational_roots(1, 0, -2, 0), Err(Error::Domain(_))));
    assert!(cubic_rational_roots(0, 1, 1, 1).is_err());
}

fn uniform(g: u32, mult: i64) -> Ladder {
    Ladder::Uniform { g, mult: ri(mult) }
}

fn g2(m0: i64, m1: i64) -> Ladder {
    Ladder::AlternatingG2 { m0: ri(m0), m1: ri(m1) }
}

fn g4(m0: i64, m1: i64) -> Ladder {
    Ladder::AlternatingG4 { m0: ri(m0), m1: ri(m1) }
}

#[test]
fn symmetric_configurations_balance_identically() {
    let cases: Vec<(Side, Side)> = vec![
        (Side { dim: 4, ladder: uniform(1, 3) }, Side { dim: 4, ladder: uniform(1, 3) }),
        (Side { dim: 6, ladder: g2(2, 3) }, Side { dim: 6, ladder: g2(2, 3) }),
        (Side { dim: 7, ladder: uniform(3, 2) }, Side { dim: 7, ladder: uniform(3, 2) }),
        (Side { dim: 7, ladder: g4(2, 1) }, Side { dim: 7, ladder: g4(2, 1) }),
        (Side { dim: 7, ladder: uniform(6, 1) }, Side { dim: 7, ladder: uniform(6, 1) }),
    ];
    for (s1, s2) in cases {
        let cmp = rigidity_series_residual(&s1, &s2, &ri(0), 8).unwrap();
        assert!(cmp.identically_zero, "{:?}: {:?}", s1.ladder, cmp.diffs);
        assert!(cmp.commensurable);
    }
}

#[test]
fn mixed_period_configurations_balance_at_the_three_fifths_angle() {
    // one g=1 factor against one g=2 factor with equal alternating
    // multiplicities; dimensions (l+1, 2l+1)
    for l in [5usize, 6, 7] {
        let s1 = Side { dim: l + 1, ladder: uniform(1, l as i64) };
        let s2 = Side { dim: 2 * l + 1, ladder: g2(l as i64, l as i64) };
        let cmp = rigidity_series_residual(&s1, &s2, &rq(-3, 5), 8).unwrap();
        assert!(cmp.identically_zero, "l={l}: {:?}", cmp.diffs);
        assert!(cmp.commensurable);
    }
}

#[test]
fn quarter_period_configuration_balances_at_the_seventeenths_angle() {
    let s1 = Side { dim: 6, ladder: uniform(1, 5) };
    let s2 = Side { dim: 21, ladder: g4(5, 5) };
    let cmp = rigidity_series_residual(&s1, &s2, &rq(-15, 17), 8).unwrap();
    assert!(cmp.identically_zero, "{:?}", cmp.diffs);
}

#[test]
fn double_period_configurations_balance_at_the_three_fifths_angle() {
    for (n, k) in [(5usize, 2i64), (6, 2), (7, 3)] {
        let s1 = Side { dim: n, ladder: g2(k, k) };
        let s2 = Side { dim: 4 * n - 4 * k as usize - 3, ladder: g4(k, k) };
        let cmp = rigidity_series_residual(&s1, &s2, &rq(-3, 5), 8).unwrap();
        assert!(cmp.identically_zero, "(n,k)=({n},{k}): {:?}", cmp.diffs);
    }
}

#[test]
fn unbalanced_multiplicities_leave_an_exact_constant_defect() {
    // same leading and quadratic orders, but the constant coefficient
    // mismatches by exactly 8/5 when the second-side data is thinned to
    // dimensions (l+1, 2l-3) with multiplicities (l, l-4)
    let l = 5usize;
    let s1 = Side { dim: l + 1, ladder: uniform(1, l as i64) };
    let s2 = Side { dim: 2 * l - 3, ladder: g2(l as i64, l as i64 - 4) };
    let cmp = rigidity_series_residual(&s1, &s2, &rq(-3, 5), 8).unwrap();
    assert!(!cmp.identically_zero);
    let at = |e: i32| cmp.diffs.iter().find(|(ee, _)| *ee == e).unwrap().1.clone();
    assert!(at(-2).is_zero(), "leading order should still match");
    assert_eq!(at(0), rq(8, 5));

    // same picture for the (g=2, g=4) pairing thinned to (n, 2n-3)
    let (n, k) = (5usize, 2i64);
    let s1 = Side { dim: n, ladder: g2(k, k) };
    let s2 = Side { dim: 2 * n - 3, ladder: g4(k, n as i64 - 2 - k) };
    let cmp = rigidity_series_residual(&s1, &s2, &rq(-3, 5), 8).unwrap();
    assert!(!cmp.identically_zero);
    let at = |e: i32| cmp.diffs.iter().find(|(ee, _)| *ee == e).unwrap().1.clone();
    assert!(at(-2).is_zero());
    assert_eq!(at(0), rq(8, 5));
}

#[test]
fn perturbed_angle_breaks_the_balance() {
    let l = 5usize;
    let s1 = Side { dim: l + 1, ladder: uniform(1, l as i64) };
    let s2 = Side { dim: 2 * l + 1, ladder: g2(l as i64, l as i64) };
    let c = rq(-3, 5) + rq(1, 100);
    let cmp = rigidity_series_residual(&s1, &s2, &c, 8).unwrap();
    assert!(!cmp.identically_zero);
    let constant = cmp.diffs.iter().find(|(e, _)| *e == 0).unwrap().1.clone();
    assert!(!constant.is_zero());
}

#[test]
fn incommensurable_pole_lattices_are_flagged() {
    // equal periods at C = 1/2: ratio (1+C)/(1-C) = 3 is not a square
    let s = Side { dim: 4, ladder: uniform(1, 3) };
    let cmp = rigidity_series_residual(&s, &s, &rq(1, 2), 8).unwrap();
    assert!(!cmp.commensurable);
    // g = (1, 2) at C = -3/5: ratio 4 (1 + C)/(1 - C) = 1, a perfect square
    let s2 = Side { dim: 11, ladder: g2(5, 5) };
    let cmp = rigidity_series_residual(&s, &s2, &rq(-3, 5), 8).unwrap();
    assert!(cmp.commensurable);
}

#[test]
fn side_series_rejects_angles_outside_the_interval() {
    let s = Side { dim: 4, ladder: uniform(1, 3) };
    assert!(side_series(&s, &ri(1), true, 8).is_err());
    assert!(side_series(&s, &rq(-7, 5), false, 8).is_err());
    assert!(side_series(&s, &rq(1, 2), true, 8).is_ok());
}

#[test]
fn admissible_multiplicity_pairs() {
    let entries = enumerate_otfkm_multiplicities(64);
    // the (1, k-2) string exists for every k >= 3
    for k in 3..=64usize {
        assert!(
            entries.iter().any(|e| e.p == 1 && e.k == k && e.m1 == 1 && e.m2 == k - 2),
            "missing (1, {})",
            k - 2
        );
    }
    // entries eight generators up scale the module size by sixteen
    for e in &entries {
        if e.p + 8 <= 9 {
            let up: Vec<_> = entries.iter().filter(|f| f.p == e.p + 8 && f.k == e.k).collect();
            for f in up {
                assert_eq!(f.l, 16 * e.l);
            }
        }
    }
    // the only pair with multiplicity difference four, in either order
    let diff4: Vec<_> = entries
        .iter()
        .filter(|e| (e.m1 as i64 - e.m2 as i64).abs() == 4)
        .collect();
    assert_eq!(diff4.len(), 1);
    let e = diff4[0];
    assert_eq!((e.p, e.k, e.l), (1, 7, 7));
    assert_eq!((e.m1.min(e.m2), e.m1.max(e.m2)), (1, 5));
    // every entry respects the defining relations
    for e in &entries {
        assert_eq!(e.m1, e.p);
        assert_eq!(e.m2, e.l - e.p - 1);
        assert!(e.m2 >= 1);
        assert!(e.l <= 64);
    }
}

#[test]
fn rational_to_float_conversion() {
    assert_eq!(rat_to_f64(&rq(1, 2)), 0.5);
    assert!((rat_to_f64(&rq(2, 189)) - 2.0 / 189.0).abs() < 1e-17);
    assert!(rat_to_f64(&rq(-16, 5)).is_sign_negative());
}
