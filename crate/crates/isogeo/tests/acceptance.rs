//! The release gate. Each test verifies one advertised guarantee end to end
//! and prints a single PASS/FAIL line. Two of the stated reference values
//! (the graph-family curvature sign and the quaternionic/complex cluster
//! structure, plus two of the mixed-period balancing configurations) do not
//! match the verified geometry; those tests fail deliberately and their
//! messages carry the measured values. See README.

use std::sync::Mutex;
use std::time::Instant;

use isogeo::algebra::Field;
use isogeo::clifford::gen_system;
use isogeo::families::{
    graph_symmetry_check, mtf_witness, pairing_check, principal_spectrum, rigidity_residual,
    shape_operator, slice_blocks, spectrum_from_operator, Family,
};
use isogeo::flows::focal_distances;
use isogeo::report::golden_equal;
use isogeo::runner::{
    clifford_battery, default_families, family_battery, flow_battery, kac_battery, run_all,
    RunConfig,
};
use isogeo::series::{
    cot_sum_identity_residual, cubic_rational_roots, enumerate_otfkm_multiplicities, expand,
    rigidity_series_residual, Ladder, SeriesFn, Side,
};
use isogeo::spaceforms::mix_seed;
use isogeo::Result;
use num_bigint::BigInt;
use num_rational::BigRational as Rat;
use num_traits::One;
use rayon::prelude::*;

// Serialize the criteria so the per-criterion wall-clock budgets are not
// distorted by the test harness running them concurrently.
static GATE: Mutex<()> = Mutex::new(());

fn lock() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn conclude(n: usize, failures: Vec<String>) {
    if failures.is_empty() {
        println!("acceptance criterion {n}: PASS");
    } else {
        println!("acceptance criterion {n}: FAIL");
        panic!("criterion {n}:\n  {}", failures.join("\n  "));
    }
}

fn rq(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

fn cfg() -> RunConfig {
    RunConfig { samples: 1000, seed: 42, tol_residual: 1e-9 }
}

/// The instance ranges the sampled-identity guarantees are quoted over.
/// Degenerate members whose curvature frame is empty (quadratic family at
/// l = p+1 is kept; the real form at n = 1 has no off-diagonal directions
/// at all and is excluded).
fn identity_grid() -> Vec<Family> {
    let mut v = Vec::new();
    for n in 2..=7 {
        for t in [-0.4, 0.3] {
            v.push(Family::Mt { n, t });
        }
    }
    for (p, k) in [(2usize, 2usize), (2, 3), (2, 4), (3, 1), (3, 2)] {
        for t in [0.3, 0.5] {
            v.push(Family::MHat { sys: gen_system(p, k).unwrap(), t });
        }
    }
    for m in 2..=5 {
        for a in [0.5, 1.0, 2.0] {
            v.push(Family::graph_default(m, a, 0.25));
        }
    }
    let fields = [
        (Field::R, vec![2usize, 3]),
        (Field::C, vec![1, 2, 3]),
        (Field::H, vec![1, 2, 3]),
    ];
    for (field, ns) in fields {
        for n in ns {
            for t in [0.3, 0.5] {
                v.push(Family::Mtf { field, n, t });
            }
        }
    }
    v
}

#[test]
fn criterion_01_clifford_relations() {
    let _g = lock();
    let start = Instant::now();
    let mut failures = Vec::new();
    for check in clifford_battery(&cfg()) {
        if !check.pass {
            failures.push(format!("{} {}: {:?}", check.name, check.instance, check.witness));
        }
    }
    let dt = start.elapsed().as_secs_f64();
    if dt >= 5.0 {
        failures.push(format!("relation verification took {dt:.2}s (budget 5s)"));
    }
    conclude(1, failures);
}

#[test]
fn criterion_02_level_identities() {
    let _g = lock();
    let start = Instant::now();
    let mut failures = Vec::new();
    for fam in identity_grid() {
        let worst: Result<Vec<f64>> = (0..1000u64)
            .into_par_iter()
            .map(|i| {
                let p = fam.sample_on_level(mix_seed(42, i))?;
                let ev = fam.evaluate(&p)?;
                let grad2 = ev.grad.metric_inner(&ev.grad);
                Ok([
                    (ev.f - fam.level()).abs(),
                    (grad2 - fam.b_of(ev.f)).abs(),
                    (ev.lap - fam.a_of(ev.f)).abs(),
                    ev.grad.tangency_residual(),
                ]
                .into_iter()
                .fold(0.0, f64::max))
            })
            .collect();
        match worst.map(|v| v.into_iter().fold(0.0, f64::max)) {
            Ok(w) if w < 1e-9 => {}
            Ok(w) => failures.push(format!(
                "{}: max identity residual {w:.3e} over 1000 samples",
                fam.instance_label()
            )),
            Err(e) => failures.push(format!("{}: {e}", fam.instance_label())),
        }
    }
    let dt = start.elapsed().as_secs_f64();
    if dt >= 30.0 {
        failures.push(format!("identity sweep took {dt:.2}s (budget 30s)"));
    }
    conclude(2, failures);
}

fn stated_vs_measured(fam: &Family, stated: &[(f64, usize)], failures: &mut Vec<String>) {
    for s in 0..2u64 {
        let p = match fam.sample_on_level(mix_seed(42, 7000 + s)) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("{}: {e}", fam.instance_label()));
                return;
            }
        };
        let spec = match principal_spectrum(fam, &p, 1e-6) {
            Ok(spec) => spec,
            Err(e) => {
                failures.push(format!("{}: {e}", fam.instance_label()));
                return;
            }
        };
        if spec.clusters.len() != stated.len() {
            failures.push(format!(
                "{}: stated {} clusters {:?}, measured {} clusters {:?}",
                fam.instance_label(),
                stated.len(),
                stated,
                spec.clusters.len(),
                spec.clusters
            ));
            return;
        }
        for ((gv, gm), (sv, sm)) in spec.clusters.iter().zip(stated) {
            if (gv - sv).abs() > 1e-6 || gm != sm {
                failures.push(format!(
                    "{}: stated cluster ({sv:.6}, x{sm}) vs measured ({gv:.6}, x{gm}); full measured {:?}",
                    fam.instance_label(),
                    spec.clusters
                ));
                return;
            }
        }
    }
}

#[test]
fn criterion_03_stated_spectra() {
    let _g = lock();
    let mut failures = Vec::new();

    for n in [2usize, 3, 5, 7] {
        for t in [-0.4f64, 0.3] {
            let fam = Family::Mt { n, t };
            let lp = ((1.0 + t) / (2.0 * (1.0 - t))).sqrt();
            let lm = -((1.0 - t) / (2.0 * (1.0 + t))).sqrt();
            let stated = vec![(lm, n - 1), (0.0, 1), (lp, n - 1)];
            stated_vs_measured(&fam, &stated, &mut failures);
        }
    }

    // quadratic Clifford levels: five distinct curvature values whenever
    // both alternating multiplicities are present (l >= p+2)
    for (p, k) in [(2usize, 2usize), (2, 3), (2, 4), (3, 2)] {
        for t in [0.3, 0.5] {
            let fam = Family::MHat { sys: gen_system(p, k).unwrap(), t };
            let q = fam.sample_on_level(mix_seed(42, 7000)).unwrap();
            let spec = principal_spectrum(&fam, &q, 1e-6).unwrap();
            if spec.clusters.len() != 5 {
                failures.push(format!(
                    "{}: expected exactly 5 clusters, measured {:?}",
                    fam.instance_label(),
                    spec.clusters
                ));
            }
        }
    }

    for m in [2usize, 3, 5] {
        for a in [0.5f64, 1.0, 2.0] {
            let fam = Family::graph_default(m, a, 0.25);
            // stated value: -a sgn(cos theta) / sqrt(1+a^2) on the positive branch
            let stated_val = -a / (1.0 + a * a).sqrt();
            let mut stated = vec![(stated_val, m - 1), (0.0, 1)];
            stated.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            stated_vs_measured(&fam, &stated, &mut failures);
        }
    }

    let fields = [(Field::R, vec![2usize, 3]), (Field::C, vec![1, 2, 3]), (Field::H, vec![1, 2])];
    for (field, ns) in fields {
        for n in ns {
            for t in [0.3f64, 0.5] {
                let fam = Family::Mtf { field, n, t };
                let d = field.dim();
                let rt = t.sqrt();
                let lp = ((1.0 + rt) / (2.0 * (1.0 - rt))).sqrt();
                let lm = -((1.0 - rt) / (2.0 * (1.0 + rt))).sqrt();
                let mult = (n + 1) * d - 2;
                let stated = vec![(lm, mult), (0.0, 1), (lp, mult)];
                stated_vs_measured(&fam, &stated, &mut failures);
            }
        }
    }

    if !failures.is_empty() {
        failures.push(
            "analysis: on the graph family the measured nonzero curvature is \
             +a sgn(cos theta)/sqrt(1+a^2) (mean curvature trace and the scalar-curvature \
             closed form both confirm the positive sign); the stated value has the opposite \
             sign. For the complex/quaternionic forms the stated +/- values are correct but \
             each carries multiplicity (n+1)d-d-1, not (n+1)d-2: the remaining d-1 scalar \
             directions split into two extra clusters at +/- tan/cot(asin(sqrt(t))/2)/sqrt(2), \
             so the measured spectrum has 5 clusters for d > 1 and the stated 3-cluster form \
             holds only over the reals."
                .into(),
        );
    }
    conclude(3, failures);
}

#[test]
fn criterion_04_angle_constancy() {
    let _g = lock();
    let mut failures = Vec::new();
    for fam in identity_grid() {
        let angles: Result<Vec<f64>> = (0..1000u64)
            .into_par_iter()
            .map(|i| {
                let p = fam.sample_on_level(mix_seed(42, i))?;
                fam.angle_function(&p)
            })
            .collect();
        match angles {
            Ok(vals) => {
                let n = vals.len() as f64;
                let mean = vals.iter().sum::<f64>() / n;
                let std = (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
                let closed = fam.closed_form_angle();
                let dev = vals.iter().map(|v| (v - closed).abs()).fold(0.0, f64::max);
                if std >= 1e-9 {
                    failures.push(format!("{}: angle std {std:.3e}", fam.instance_label()));
                }
                if dev >= 1e-9 {
                    failures.push(format!(
                        "{}: angle deviates from {closed} by {dev:.3e}",
                        fam.instance_label()
                    ));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", fam.instance_label())),
        }
    }
    conclude(4, failures);
}

#[test]
fn criterion_05_structural_identities() {
    let _g = lock();
    let mut failures = Vec::new();
    for fam in default_families() {
        let per_sample: Result<Vec<(f64, f64, f64, bool)>> = (0..40u64)
            .into_par_iter()
            .map(|s| {
                let p = fam.sample_on_level(mix_seed(42, 7000 + s))?;
                let op = shape_operator(&fam, &p)?;
                let av = slice_blocks(&op).av_norm;
                let rig = rigidity_residual(&fam, &op);
                let (pair, mults) = if matches!(fam, Family::GraphSh { .. }) {
                    (0.0, true)
                } else {
                    let spec = spectrum_from_operator(&op, 1e-6);
                    let pr = pairing_check(&spec.clusters);
                    (pr.max_residual, pr.mult_match)
                };
                Ok((av, rig, pair, mults))
            })
            .collect();
        match per_sample {
            Ok(rows) => {
                let av = rows.iter().map(|r| r.0).fold(0.0, f64::max);
                let rig = rows.iter().map(|r| r.1).fold(0.0, f64::max);
                let pair = rows.iter().map(|r| r.2).fold(0.0, f64::max);
                let mults = rows.iter().all(|r| r.3);
                if av >= 1e-6 {
                    failures.push(format!("{}: |AV| = {av:.3e}", fam.instance_label()));
                }
                if rig >= 1e-7 {
                    failures.push(format!("{}: rigidity residual {rig:.3e}", fam.instance_label()));
                }
                if pair >= 1e-6 || !mults {
                    failures.push(format!(
                        "{}: pairing residual {pair:.3e}, multiplicities matched: {mults}",
                        fam.instance_label()
                    ));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", fam.instance_label())),
        }
    }
    conclude(5, failures);
}

#[test]
fn criterion_06_flow_checks() {
    let _g = lock();
    let mut failures = Vec::new();
    let cfg = cfg();
    for fam in default_families() {
        for check in flow_battery(&cfg, &fam) {
            if !check.pass {
                failures.push(format!(
                    "{} {}: residual {} (witness {:?})",
                    check.name,
                    check.instance,
                    check.residual_f64(),
                    check.witness
                ));
            }
        }
    }

    // sharp first focal distance for the bilinear family at the symmetric level
    let fam = Family::Mt { n: 3, t: 0.0 };
    let expected = std::f64::consts::PI / (2.0 * std::f64::consts::SQRT_2);
    match fam
        .sample_on_level(mix_seed(42, 31))
        .and_then(|p| focal_distances(&fam, &p, 1.25 * expected, expected / 50.0))
    {
        Ok(scan) => match scan.distances.first() {
            Some(d) if (d - expected).abs() <= 1e-6 => {}
            Some(d) => failures.push(format!(
                "MT t=0 first focal distance {d:.9} vs pi/(2 sqrt 2) = {expected:.9}"
            )),
            None => failures.push("MT t=0 focal scan found no focal point".into()),
        },
        Err(e) => failures.push(format!("MT t=0 focal scan: {e}")),
    }
    conclude(6, failures);
}

#[test]
fn criterion_07_exact_ladder_suite() {
    let _g = lock();
    let start = Instant::now();
    let mut failures = Vec::new();
    for check in kac_battery(&cfg()) {
        if !check.pass {
            failures.push(format!(
                "{} {}: {:?}",
                check.name, check.instance, check.witness
            ));
        }
    }
    let dt = start.elapsed().as_secs_f64();
    if dt >= 120.0 {
        failures.push(format!("exact suite took {dt:.1}s (budget 120s)"));
    }
    conclude(7, failures);
}

#[test]
fn criterion_08_series_suite() {
    let _g = lock();
    let mut failures = Vec::new();

    let csc = expand(SeriesFn::Csc2, &Rat::one(), 8).unwrap();
    for (e, want) in [(-2, rq(1, 1)), (0, rq(1, 3)), (2, rq(1, 15)), (4, rq(2, 189))] {
        if csc.coeff(e) != want {
            failures.push(format!("csc^2 coefficient at order {e}: {}", csc.coeff(e)));
        }
    }

    for g in [1u32, 2, 3, 4, 6] {
        let res = cot_sum_identity_residual(g, 300, mix_seed(42, g as u64));
        if res >= 1e-10 {
            failures.push(format!("cot-sum identity residual {res:.3e} at g={g}"));
        }
    }

    let roots1 = cubic_rational_roots(5, -21, 0, 16);
    if !roots1.as_ref().map_or(false, |v| v[..] == [rq(-4, 5), rq(1, 1), rq(4, 1)]) {
        failures.push(format!("first curvature cubic roots: {roots1:?}"));
    }
    let roots2 = cubic_rational_roots(5, -84, 0, 1024);
    if !roots2.as_ref().map_or(false, |v| v[..] == [rq(-16, 5), rq(4, 1), rq(16, 1)]) {
        failures.push(format!("second curvature cubic roots: {roots2:?}"));
    }

    // rigidity coefficient matching on the quoted parameter configurations
    let mut balance = |label: &str, s1: Side, s2: Side, c: Rat| {
        match rigidity_series_residual(&s1, &s2, &c, 8) {
            Ok(cmp) if cmp.identically_zero => {}
            Ok(cmp) => {
                let nonzero: Vec<String> = cmp
                    .diffs
                    .iter()
                    .filter(|(_, d)| !num_traits::Zero::is_zero(d))
                    .map(|(e, d)| format!("s^{e}: {d}"))
                    .collect();
                failures.push(format!("{label}: coefficient diffs [{}]", nonzero.join(", ")));
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    };

    // (symmetric) equal dimensions, equal ladders, C = 0
    balance(
        "symmetric g=1",
        Side { dim: 5, ladder: Ladder::Uniform { g: 1, mult: rq(4, 1) } },
        Side { dim: 5, ladder: Ladder::Uniform { g: 1, mult: rq(4, 1) } },
        rq(0, 1),
    );
    balance(
        "symmetric g=2",
        Side { dim: 6, ladder: Ladder::AlternatingG2 { m0: rq(2, 1), m1: rq(3, 1) } },
        Side { dim: 6, ladder: Ladder::AlternatingG2 { m0: rq(2, 1), m1: rq(3, 1) } },
        rq(0, 1),
    );

    // (mixed period) C = -3/5, first side uniform with n = l+1, second side
    // alternating with the quoted dimension m = 2l-3
    for l in [5i64, 6, 7] {
        balance(
            &format!("mixed-period l={l} (quoted dimension 2l-3)"),
            Side { dim: (l + 1) as usize, ladder: Ladder::Uniform { g: 1, mult: rq(l, 1) } },
            Side {
                dim: (2 * l - 3) as usize,
                ladder: Ladder::AlternatingG2 { m0: rq(l, 1), m1: rq(l - 4, 1) },
            },
            rq(-3, 5),
        );
    }

    // (double period) C = -3/5, m = 2n-3, equal leading multiplicities
    for (n, k) in [(5i64, 2i64), (6, 2), (7, 3)] {
        balance(
            &format!("double-period n={n} k={k} (quoted dimension 2n-3)"),
            Side {
                dim: n as usize,
                ladder: Ladder::AlternatingG2 { m0: rq(k, 1), m1: rq(n - 1 - k, 1) },
            },
            Side {
                dim: (2 * n - 3) as usize,
                ladder: Ladder::AlternatingG4 { m0: rq(k, 1), m1: rq(n - 2 - k, 1) },
            },
            rq(-3, 5),
        );
    }

    let entries = enumerate_otfkm_multiplicities(64);
    let diff4: Vec<(usize, usize)> = entries
        .iter()
        .filter(|e| e.m1.abs_diff(e.m2) == 4)
        .map(|e| (e.m1.min(e.m2), e.m1.max(e.m2)))
        .collect();
    if diff4.is_empty() || diff4.iter().any(|&pair| pair != (1, 5)) {
        failures.push(format!("multiplicity gap-4 pairs: {diff4:?}"));
    }

    if !failures.is_empty() {
        failures.push(
            "analysis: with the quoted dimensions the mixed-period and double-period \
             configurations leave an exact constant defect (the s^-2 and s^2 coefficients \
             balance; the s^0 coefficient does not). The balancing dimensions are m = 2l+1 \
             with equal alternating multiplicities (l, l) for the mixed-period case and \
             m = 4n-4k-3 with multiplicities (k, k) for the double-period case; both \
             variants cancel identically to order 8 and are exercised in the series battery."
                .into(),
        );
    }
    conclude(8, failures);
}

#[test]
fn criterion_09_homogeneity_witnesses() {
    let _g = lock();
    let mut failures = Vec::new();

    for (field, n) in [(Field::R, 2usize), (Field::C, 2), (Field::H, 1)] {
        let fam = Family::Mtf { field, n, t: 0.4 };
        let worst: Result<Vec<f64>> = (0..100u64)
            .into_par_iter()
            .map(|i| {
                let p = fam.sample_on_level(mix_seed(42, 21_000 + 2 * i))?;
                let mut q = fam.sample_on_level(mix_seed(42, 21_001 + 2 * i))?;
                if field == Field::R {
                    let s1 = p.x.coords.dot(&p.y.coords);
                    let s2 = q.x.coords.dot(&q.y.coords);
                    if s1 * s2 < 0.0 {
                        q.y.coords *= -1.0;
                    }
                }
                let w = mtf_witness(&fam, &p, &q)?;
                Ok(w.residual.max(w.orthogonality_residual).max(w.commutation_residual))
            })
            .collect();
        match worst.map(|v| v.into_iter().fold(0.0, f64::max)) {
            Ok(w) if w < 1e-8 => {}
            Ok(w) => failures.push(format!("{}: witness residual {w:.3e}", fam.instance_label())),
            Err(e) => failures.push(format!("{}: {e}", fam.instance_label())),
        }
    }

    for (m, a) in [(2usize, 0.5f64), (3, 1.0), (5, 2.0)] {
        let fam = Family::graph_default(m, a, 0.25);
        let worst: Result<Vec<f64>> = (0..100u64)
            .into_par_iter()
            .map(|i| {
                let p = fam.sample_on_level(mix_seed(42, 23_000 + i))?;
                let theta = std::f64::consts::PI * (i as f64 / 100.0 - 0.5);
                graph_symmetry_check(&fam, &p, theta, mix_seed(42, 24_000 + i))
            })
            .collect();
        match worst.map(|v| v.into_iter().fold(0.0, f64::max)) {
            Ok(w) if w < 1e-10 => {}
            Ok(w) => failures.push(format!("{}: symmetry residual {w:.3e}", fam.instance_label())),
            Err(e) => failures.push(format!("{}: {e}", fam.instance_label())),
        }
    }
    conclude(9, failures);
}

#[test]
fn criterion_10_determinism() {
    let _g = lock();
    let mut failures = Vec::new();
    let cfg = RunConfig { samples: 48, seed: 42, tol_residual: 1e-9 };
    let a = run_all(&cfg);
    let b = run_all(&cfg);
    if !golden_equal(&a.to_json(), &b.to_json()) {
        failures.push("repeated runs differ outside the timestamp".into());
    }
    if a.to_csv() != b.to_csv() {
        failures.push("CSV reports differ between repeated runs".into());
    }
    conclude(10, failures);
}

#[test]
fn criterion_05_also_holds_in_the_battery() {
    // cross-check: the shipped battery reports the same three structural
    // identities; make sure filtering by name stays in sync with the runner
    let _g = lock();
    let cfg = RunConfig { samples: 40, seed: 42, tol_residual: 1e-9 };
    let fam = Family::Mt { n: 3, t: 0.2 };
    let names: Vec<String> = family_battery(&cfg, &fam)
        .into_iter()
        .filter(|c| {
            matches!(c.name.as_str(), "shape_av_norm" | "rigidity_identity" | "spectral_pairing")
        })
        .map(|c| format!("{}:{}", c.name, c.pass))
        .collect();
    assert_eq!(
        names,
        vec!["shape_av_norm:true", "rigidity_identity:true", "spectral_pairing:true"]
    );
}
