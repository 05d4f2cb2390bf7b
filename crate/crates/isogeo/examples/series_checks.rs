//! Exact Laurent expansions of the trigonometric kernels, the partial
//! fraction identity for g-fold cotangent sums, the two curvature cubics,
//! and the balanced parameter families for which the two sides of the
//! rigidity identity agree as formal series.
//!
//!     cargo run --example series_checks

use isogeo::kac::bipoly::{rat, ratio, Rat};
use isogeo::series::{
    cot_sum_identity_residual, cubic_rational_roots, enumerate_otfkm_multiplicities, expand,
    rigidity_series_residual, Ladder, SeriesFn, Side,
};

fn main() -> isogeo::Result<()> {
    let one = Rat::from_integer(1.into());
    let csc2 = expand(SeriesFn::Csc2, &one, 8)?;
    println!("csc^2 z (even Laurent coefficients up to z^8):");
    for e in (-2..=8).step_by(2) {
        println!("  z^{e:>2}: {}", csc2.coeff(e));
    }

    println!("\ncotangent partial-fraction sums, max residual over 200 samples:");
    for g in [1u32, 2, 3, 4, 6] {
        println!("  g = {g}: {:.3e}", cot_sum_identity_residual(g, 200, 99 + g as u64));
    }

    println!("\ncurvature cubics:");
    for (c3, c2, c1, c0) in [(5i64, -21, 0, 16), (5, -84, 0, 1024)] {
        let roots = cubic_rational_roots(c3, c2, c1, c0)?;
        let shown: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
        println!("  {c3}k^3 + {c2}k^2 + {c1}k + {c0} = 0: roots {{{}}}", shown.join(", "));
    }

    println!("\nbalanced rigidity pairs (series difference identically zero):");
    let pairs: Vec<(&str, Side, Side, Rat)> = vec![
        (
            "mixed-period l=5",
            Side { dim: 6, ladder: Ladder::Uniform { g: 1, mult: rat(5) } },
            Side { dim: 11, ladder: Ladder::AlternatingG2 { m0: rat(5), m1: rat(5) } },
            ratio(-3, 5),
        ),
        (
            "quarter-period",
            Side { dim: 6, ladder: Ladder::Uniform { g: 1, mult: rat(5) } },
            Side { dim: 21, ladder: Ladder::AlternatingG4 { m0: rat(5), m1: rat(5) } },
            ratio(-15, 17),
        ),
        (
            "double-period n=5 k=2",
            Side { dim: 5, ladder: Ladder::AlternatingG2 { m0: rat(2), m1: rat(2) } },
            Side { dim: 9, ladder: Ladder::AlternatingG4 { m0: rat(2), m1: rat(2) } },
            ratio(-3, 5),
        ),
    ];
    for (label, s1, s2, c) in &pairs {
        let cmp = rigidity_series_residual(s1, s2, c, 8)?;
        println!(
            "  {label}: zero = {}, commensurable poles = {}",
            cmp.identically_zero, cmp.commensurable
        );
        if !cmp.identically_zero {
            for (e, d) in &cmp.diffs {
                println!("    s^{e}: {d}");
            }
        }
    }

    // a near miss: same shape with the wrong angle leaves an s^0 defect
    let c = ratio(-1, 2);
    let cmp = rigidity_series_residual(&pairs[0].1, &pairs[0].2, &c, 8)?;
    println!("  mixed-period l=5 at C=-1/2 instead: zero = {}", cmp.identically_zero);
    for (e, d) in cmp.diffs.iter().take(3) {
        println!("    s^{e}: {d}");
    }

    println!("\nmultiplicity pairs from the Clifford dimension ladder (l <= 64):");
    let entries = enumerate_otfkm_multiplicities(64);
    let diff4: Vec<_> = entries.iter().filter(|e| e.m1.abs_diff(e.m2) == 4).collect();
    println!("  total entries: {}", entries.len());
    for e in diff4 {
        println!(
            "  |m1 - m2| = 4 only at p = {}, k = {}, l = {}: ({}, {})",
            e.p, e.k, e.l, e.m1, e.m2
        );
    }
    Ok(())
}
