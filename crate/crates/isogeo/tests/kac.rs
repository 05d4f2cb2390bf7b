use isogeo::kac::{
    charpoly_product_check, chessboard_check, coefficient_degree_check,
    coefficient_degree_profiles, coefficient_structure_check, det_bipoly, doubled_determinant_check,
    doubled_matrix, doubled_row_powers, eval_matrix, exceptional_angles, first_unit_row,
    genericity_check, kernel_column_check, kernel_product_residual, kronecker_det_at_angle,
    kronecker_sum, ladder_charpoly, ladder_charpoly_expected, ladder_matrix, rank_windows_check,
    rat, ratio, rational_det, rational_rank, row_power_identity_check, row_stack_rank, row_tables,
    transport_evolve, transported_corner, BiPoly, Rat, Var,
};
use isogeo::Error;
use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Textbook cofactor expansion along the first row; exponential, but an
/// entirely separate algorithm from the fraction-free elimination under test.
fn cofactor_det(m: &[Vec<BiPoly>]) -> BiPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BiPoly::zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BiPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = entry.mul(&cofactor_det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn random_bipoly(rng: &mut ChaCha8Rng) -> BiPoly {
    let mut acc = BiPoly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..=2u32);
        let j = rng.gen_range(0..=2u32);
        let c = ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        acc = acc.add(&BiPoly::monomial(i, j, c));
    }
    acc
}

#[test]
fn elimination_determinant_matches_cofactor_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDE7);
    for trial in 0..12 {
        let n = 2 + trial % 3;
        let m: Vec<Vec<BiPoly>> =
            (0..n).map(|_| (0..n).map(|_| random_bipoly(&mut rng)).collect()).collect();
        assert_eq!(det_bipoly(&m), cofactor_det(&m), "trial {trial}");
    }
    // and on the structured matrices actually used downstream
    for d in 1..=4 {
        let l = ladder_matrix(d, Var::Second);
        assert_eq!(det_bipoly(&l), cofactor_det(&l), "ladder d={d}");
    }
    let ks = kronecker_sum(2, 2);
    assert_eq!(det_bipoly(&ks), cofactor_det(&ks));
}

#[test]
fn rational_det_agrees_with_polynomial_det_after_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACE);
    for (m, n) in [(2usize, 2usize), (2, 3)] {
        let ks = kronecker_sum(m, n);
        let poly = det_bipoly(&ks);
        for _ in 0..5 {
            let t1 = ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            let t2 = ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            let direct = rational_det(&eval_matrix(&ks, &t1, &t2));
            assert_eq!(poly.eval(&t1, &t2), direct, "m={m} n={n} t=({t1},{t2})");
        }
    }
}

#[test]
fn small_ladder_charpolys_by_hand() {
    // d = 1: x
    assert_eq!(ladder_charpoly(1), BiPoly::var1());
    // d = 2: x^2 - tau
    let want2 = BiPoly::monomial(2, 0, rat(1)).sub(&BiPoly::monomial(0, 1, rat(1)));
    assert_eq!(ladder_charpoly(2), want2);
    // d = 3: x^3 - 4 x tau
    let want3 = BiPoly::monomial(3, 0, rat(1)).sub(&BiPoly::monomial(1, 1, rat(4)));
    assert_eq!(ladder_charpoly(3), want3);
    // d = 4: (x^2 - tau)(x^2 - 9 tau)
    let want4 = want2.mul(
        &BiPoly::monomial(2, 0, rat(1)).sub(&BiPoly::monomial(0, 1, rat(9))),
    );
    assert_eq!(ladder_charpoly(4), want4);
}

#[test]
fn charpoly_factors_over_the_odd_integer_grid() {
    for d in 1..=7 {
        assert!(charpoly_product_check(d), "d={d}");
        assert_eq!(ladder_charpoly(d), ladder_charpoly_expected(d));
    }
}

/// Sorted eigenvalues through the validated diagonal symmetrization; the
/// positive-weight evaluations below are exactly the matrices it admits.
fn real_eigenvalues(mat: &[Vec<Rat>]) -> Vec<f64> {
    symmetrized_eigenvalues(mat).unwrap()
}

#[test]
fn ladder_spectrum_is_the_symmetric_integer_string() {
    let tau = ratio(5, 2);
    for d in 2..=9 {
        let l = eval_matrix(&ladder_matrix(d, Var::Second), &rat(0), &tau);
        let eigs = real_eigenvalues(&l);
        let mut want: Vec<f64> = (0..d)
            .map(|j| (d as f64 - 1.0 - 2.0 * j as f64) * (2.5f64).sqrt())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, w) in eigs.iter().zip(&want) {
            assert!((e - w).abs() < 1e-8, "d={d}: {e} vs {w}");
        }
    }
}

#[test]
fn kronecker_sum_spectrum_is_the_double_string() {
    // eigenvalues a sqrt(tau2) + b sqrt(tau1) over the two integer strings
    let (t1, t2) = (rat(2), rat(3));
    for (m, n) in [(2usize, 3usize), (3, 3)] {
        let ks = eval_matrix(&kronecker_sum(m, n), &t1, &t2);
        let eigs = real_eigenvalues(&ks);
        let mut want = Vec::new();
        for i in 0..m {
            for j in 0..n {
                let a = m as f64 - 1.0 - 2.0 * i as f64;
                let b = n as f64 - 1.0 - 2.0 * j as f64;
                want.push(a * 3.0f64.sqrt() + b * 2.0f64.sqrt());
            }
        }
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, w) in eigs.iter().zip(&want) {
            assert!((e - w).abs() < 1e-8, "m={m} n={n}: {e} vs {w}");
        }
    }
}

#[test]
fn doubled_matrix_has_the_jordan_block_shape() {
    let (m, n) = (2usize, 2usize);
    let ks = kronecker_sum(m, n);
    let q = doubled_matrix(m, n);
    let s = m * n;
    for i in 0..s {
        for j in 0..s {
            assert_eq!(q[i][j], ks[i][j], "top-left");
            assert_eq!(q[s + i][s + j], ks[i][j], "bottom-right");
            let want_id = if i == j { BiPoly::one() } else { BiPoly::zero() };
            assert_eq!(q[i][s + j], want_id, "top-right");
            assert!(q[s + i][j].is_zero(), "bottom-left");
        }
    }
}

#[test]
fn recurrence_rows_match_direct_matrix_powers() {
    for (m, n) in [(1usize, 2usize), (2, 2), (2, 3)] {
        let kmax = 2 * m * n + 4;
        assert!(row_power_identity_check(m, n, kmax), "m={m} n={n}");
        // the same comparison done by hand, plus a teeth check: a perturbed
        // power table must not match
        let tables = row_tables(m, n, kmax);
        let powers = doubled_row_powers(m, n, kmax);
        for (k, row) in powers.iter().enumerate() {
            assert_eq!(&tables.doubled_row(k + 1), row, "m={m} n={n} k={}", k + 1);
        }
        let mut broken = powers[1].clone();
        broken[0] = broken[0].add(&BiPoly::one());
        assert_ne!(tables.doubled_row(2), broken);
    }
}

#[test]
fn first_rows_in_closed_form() {
    let (m, n) = (2usize, 3usize);
    let tables = row_tables(m, n, 4);
    // p_0 = e1, q_0 = 0, q_1 = e1
    for l in 0..m {
        for nu in 0..n {
            let e1 = if l == 0 && nu == 0 { BiPoly::one() } else { BiPoly::zero() };
            assert_eq!(tables.p[0][l][nu], e1);
            assert!(tables.q[0][l][nu].is_zero());
            assert_eq!(tables.q[1][l][nu], e1);
        }
    }
    // (K~^2)_{11} picks up one up-down excursion in each grid direction
    let want = BiPoly::monomial(1, 0, rat(n as i64 - 1)).add(&BiPoly::monomial(
        0,
        1,
        rat(m as i64 - 1),
    ));
    assert_eq!(tables.p[2][0][0], want);
}

#[test]
fn coefficient_support_and_leading_values() {
    for (m, n) in [(2usize, 3usize), (3, 3), (1, 3)] {
        let cs = coefficient_structure_check(m, n, 2 * m * n + 4);
        assert!(cs.parity_ok, "m={m} n={n}");
        assert!(cs.factorial_ok, "m={m} n={n}");
        assert!(chessboard_check(m, n, 2 * m * n + 4), "m={m} n={n}");
    }
}

#[test]
fn interpolated_coefficient_degrees() {
    let profiles = coefficient_degree_profiles(0, 0, 2).unwrap();
    assert_eq!(profiles.len(), 2);
    for p in &profiles {
        assert_eq!(p.deg_m, 1 - p.iota, "iota={}", p.iota);
        assert_eq!(p.deg_n, p.iota);
        assert!(p.corner_positive);
    }
    for (l, nu, k) in [(0usize, 0usize, 4usize), (1, 0, 3), (1, 1, 4), (2, 1, 5)] {
        assert!(coefficient_degree_check(l, nu, k).unwrap(), "cell ({l},{nu},{k})");
    }
}

#[test]
fn block_determinant_is_a_perfect_square() {
    for (m, n) in [(1usize, 2usize), (1, 3), (2, 2), (2, 3)] {
        assert!(doubled_determinant_check(m, n), "m={m} n={n}");
    }
}

#[test]
fn exceptional_angle_lists_by_hand() {
    let ex = exceptional_angles(2, 3);
    assert_eq!(ex.singular, vec![ratio(-3, 5)]);
    assert_eq!(ex.resonance, vec![ratio(-3, 5), ratio(0, 1)]);

    let ex = exceptional_angles(3, 4);
    assert_eq!(ex.singular, vec![ratio(-5, 13), ratio(3, 5)]);
    assert_eq!(
        ex.resonance,
        vec![ratio(-4, 5), ratio(-3, 5), ratio(-5, 13), ratio(0, 1), ratio(3, 5)]
    );
}

#[test]
fn determinant_vanishes_exactly_at_singular_angles() {
    for (m, n) in [(2usize, 3usize), (3, 4)] {
        let ex = exceptional_angles(m, n);
        for c in &ex.singular {
            assert!(kronecker_det_at_angle(m, n, c).is_zero(), "m={m} n={n} c={c}");
        }
        for c in [ratio(0, 1), ratio(1, 2), ratio(-1, 2), ratio(9, 10)] {
            if !ex.singular.contains(&c) {
                assert!(!kronecker_det_at_angle(m, n, &c).is_zero(), "m={m} n={n} c={c}");
            }
        }
    }
    // resonance without kernel: -4/5 collides eigenvalues of the (3,4) sum
    // but leaves the determinant alone
    assert!(!kronecker_det_at_angle(3, 4, &ratio(-4, 5)).is_zero());
}

#[test]
fn resonant_angles_collide_eigenvalues() {
    let (m, n) = (3usize, 4usize);
    let gap_at = |c: Rat| -> f64 {
        let one = Rat::from_integer(1.into());
        let half = ratio(1, 2);
        let t1 = -(&one + &c) * &half;
        let t2 = -(&one - &c) * &half;
        let ks = eval_matrix(&kronecker_sum(m, n), &t1, &t2);
        let mm = DMatrix::from_fn(m * n, m * n, |i, j| isogeo::series::rat_to_f64(&ks[i][j]));
        let eigs = mm.complex_eigenvalues();
        let mut min_gap = f64::INFINITY;
        for i in 0..eigs.len() {
            for j in 0..i {
                min_gap = min_gap.min((eigs[i] - eigs[j]).norm());
            }
        }
        min_gap
    };
    for c in exceptional_angles(m, n).resonance {
        assert!(gap_at(c.clone()) < 1e-8, "expected collision at {c}");
    }
    assert!(gap_at(ratio(1, 3)) > 1e-4);
    assert!(gap_at(ratio(-9, 10)) > 1e-4);
}

#[test]
fn degenerate_parameters_are_refused_by_name() {
    assert!(matches!(genericity_check(2, 2, &rat(1), &rat(1)), Err(Error::Degenerate(_))));
    // tau2/tau1 = 4 collides the |i-i'| = 1, |j-j'| = 2 gap pair
    assert!(genericity_check(3, 3, &rat(1), &rat(4)).is_err());
    assert!(genericity_check(2, 2, &rat(2), &rat(3)).is_ok());
    assert!(row_stack_rank(2, 2, &[0, 1, 2], &rat(1), &rat(1)).is_err());
}

#[test]
fn row_stack_ranks_with_and_without_kernel() {
    let (t1, t2) = (rat(2), rat(3));
    // not both odd: full rank 2mn from any 2mn consecutive levels
    let rep = rank_windows_check(2, 2, &[0, 3], 8, &t1, &t2).unwrap();
    assert!(rep.pass, "windows {:?}", rep.windows);
    assert_eq!(rep.expected, 8);
    assert!(!rep.both_odd);

    // both odd: the kernel vector costs two dimensions
    let rep = rank_windows_check(1, 3, &[6, 9], 6, &t1, &t2).unwrap();
    assert!(rep.pass, "windows {:?}", rep.windows);
    assert_eq!(rep.expected, 4);
    assert!(rep.both_odd);
    let dense: Vec<usize> = (2..6).collect();
    assert_eq!(row_stack_rank(1, 3, &dense, &t1, &t2).unwrap(), 4);
}

#[test]
fn kernel_vector_relations_in_the_odd_case() {
    let (t1, t2) = (rat(2), rat(3));
    for (m, n) in [(1usize, 3usize), (3, 3)] {
        let levels: Vec<usize> = (2..2 * m * n).collect();
        let kc = kernel_column_check(m, n, &levels, &t1, &t2).unwrap();
        assert!(kc.kernel_annihilated, "m={m} n={n}");
        assert!(kc.support_even, "m={m} n={n}");
        assert!(kc.column_relation, "m={m} n={n}");
        assert!(kernel_product_residual(m, n, &t1, &t2).unwrap().is_zero());
    }
    assert!(kernel_column_check(2, 3, &[0, 1], &t1, &t2).is_err());
}

#[test]
fn transported_corner_equals_the_evolved_grid() {
    let (m, n) = (2usize, 3usize);
    let mut rng = ChaCha8Rng::seed_from_u64(0xFEED);
    let mut draw = || ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
    let alpha0: Vec<Vec<Rat>> = (0..m).map(|_| (0..n).map(|_| draw()).collect()).collect();
    let beta0: Vec<Vec<Rat>> = (0..m).map(|_| (0..n).map(|_| draw()).collect()).collect();
    let (t1, t2) = (ratio(-1, 2), ratio(5, 7));
    let kmax = 10;
    let tables = row_tables(m, n, kmax);
    for k in 0..=kmax {
        let (a_k, _) = transport_evolve(&alpha0, &beta0, m, n, &t1, &t2, k);
        let corner = transported_corner(&tables, &alpha0, &beta0, &t1, &t2, k);
        assert_eq!(a_k[0][0], corner, "k={k}");
    }
}

#[test]
fn rank_helper_on_planted_matrices() {
    // identity rows plus their combinations have exactly the planted rank
    let rows = vec![
        vec![rat(1), rat(0), rat(0), rat(0)],
        vec![rat(0), rat(1), rat(0), rat(0)],
        vec![rat(2), ratio(-3, 2), rat(0), rat(0)],
        vec![rat(1), rat(1), rat(0), rat(0)],
    ];
    assert_eq!(rational_rank(&rows), 2);
    let tri = vec![
        vec![rat(2), rat(5), rat(1)],
        vec![rat(0), ratio(1, 3), rat(7)],
        vec![rat(0), rat(0), ratio(-3, 4)],
    ];
    assert_eq!(rational_det(&tri), rat(2) * ratio(1, 3) * ratio(-3, 4));
}

#[test]
fn first_unit_row_shape() {
    let row = first_unit_row(5);
    assert_eq!(row.len(), 5);
    assert_eq!(row[0], BiPoly::one());
    assert!(row[1..].iter().all(|e| e.is_zero()));
}
