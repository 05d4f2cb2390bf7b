use isogeo::clifford::{
    delta, gen_system, otfkm_ambient_polynomial, otfkm_restricted_f, verify_system,
    CliffordSystemDto,
};
use isogeo::spaceforms::sample_factor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn module_dimension_ladder() {
    let expect = [1u64, 2, 4, 4, 8, 8, 8, 8, 16];
    for (p, &d) in (1..=9).zip(&expect) {
        assert_eq!(delta(p).unwrap(), d, "delta({p})");
    }
    // one octave up multiplies by 16
    for p in 1..=4 {
        assert_eq!(delta(p + 8).unwrap(), 16 * delta(p).unwrap());
    }
    assert!(delta(0).is_err());
}

#[test]
fn generated_systems_satisfy_all_relations_exactly() {
    for p in 1..=9 {
        for k in 1..=2 {
            let sys = gen_system(p, k).unwrap();
            assert_eq!(sys.p, p);
            assert_eq!(sys.k, k);
            assert_eq!(sys.l, k as usize * delta(p).unwrap() as usize);
            assert_eq!(sys.e.len(), p - 1);
            let report = verify_system(&sys);
            assert!(
                report.all_pass(),
                "relations failed for p={p} k={k}: {:?}",
                report
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.name.clone())
                    .collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn skew_generators_anticommute_entrywise() {
    // independent of verify_system's own bookkeeping: recompute the products
    let sys = gen_system(4, 1).unwrap();
    for (i, ei) in sys.e.iter().enumerate() {
        let sq = ei * ei;
        for r in 0..sys.l {
            for c in 0..sys.l {
                let want = if r == c { -1 } else { 0 };
                assert_eq!(sq[(r, c)], want, "E{i}^2 at ({r},{c})");
            }
        }
        assert_eq!(ei.transpose(), -ei, "E{i} skew");
        for (j, ej) in sys.e.iter().enumerate().skip(i + 1) {
            let anti = ei * ej + ej * ei;
            assert!(anti.iter().all(|&v| v == 0), "E{i}E{j}+E{j}E{i} != 0");
        }
    }
}

fn unit_pair(sys_l: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = sample_factor(sys_l - 1, 1.0, &mut rng);
    let y = sample_factor(sys_l - 1, 1.0, &mut rng);
    (x.coords.as_slice().to_vec(), y.coords.as_slice().to_vec())
}

#[test]
fn ambient_quartic_agrees_with_restricted_value() {
    // F(x, y) = 4 - 8 f(x, y) on unit pairs; the two sides are computed from
    // entirely different data (P-system vs E-system), so this cross-checks both
    for p in 1..=6 {
        for k in 1..=2 {
            let sys = gen_system(p, k).unwrap();
            for s in 0..20 {
                let (x, y) = unit_pair(sys.l, 1000 * p as u64 + 10 * k as u64 + s);
                let f = otfkm_restricted_f(&sys, &x, &y).unwrap();
                let big = otfkm_ambient_polynomial(&sys, &x, &y).unwrap();
                assert!(
                    (big - (4.0 - 8.0 * f)).abs() < 1e-11,
                    "p={p} k={k} s={s}: F={big} vs 4-8f={}",
                    4.0 - 8.0 * f
                );
                assert!((-1e-12..=1.0 + 1e-12).contains(&f), "f out of range: {f}");
            }
        }
    }
}

#[test]
fn one_generator_case_reduces_to_squared_inner_product() {
    let sys = gen_system(1, 2).unwrap();
    assert!(sys.e.is_empty());
    for s in 0..10 {
        let (x, y) = unit_pair(sys.l, 77 + s);
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let f = otfkm_restricted_f(&sys, &x, &y).unwrap();
        assert!((f - dot * dot).abs() < 1e-14);
    }
}

#[test]
fn restricted_value_rejects_bad_input() {
    let sys = gen_system(2, 1).unwrap();
    let good = vec![1.0, 0.0];
    let short = vec![1.0];
    let nonunit = vec![1.0, 1.0];
    assert!(otfkm_restricted_f(&sys, &short, &good).is_err());
    assert!(otfkm_restricted_f(&sys, &good, &nonunit).is_err());
    assert!(otfkm_restricted_f(&sys, &good, &good).is_ok());
}

#[test]
fn dto_round_trip_preserves_the_system() {
    let sys = gen_system(5, 2).unwrap();
    let dto = sys.to_dto();
    let json = serde_json::to_string(&dto).unwrap();
    let parsed: CliffordSystemDto = serde_json::from_str(&json).unwrap();
    let back = isogeo::clifford::CliffordSystem::from_dto(&parsed).unwrap();
    assert_eq!(back.p, sys.p);
    assert_eq!(back.k, sys.k);
    assert_eq!(back.l, sys.l);
    assert_eq!(back.e, sys.e);
    assert!(verify_system(&back).all_pass());
}

#[test]
fn corrupted_dto_fails_verification() {
    let sys = gen_system(3, 1).unwrap();
    let mut dto = sys.to_dto();
    // flip one matrix entry; either the decoder or the verifier must object
    dto.e[0][1] += 1;
    match isogeo::clifford::CliffordSystem::from_dto(&dto) {
        Ok(bad) => assert!(!verify_system(&bad).all_pass()),
        Err(_) => {}
    }
}
