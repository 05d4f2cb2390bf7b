//! Exact ladder-matrix calculus in two-variable polynomial arithmetic over
//! the rationals: characteristic polynomials in product form, the doubled
//! block matrix, symbolic row powers against the entrywise recurrence, and
//! the rank drop for odd-by-odd ladders.
//!
//!     cargo run --example kac_exact

use isogeo::kac::{
    self,
    bipoly::{rat, ratio},
};

fn main() -> isogeo::Result<()> {
    println!("characteristic polynomials split into x^e * prod (x^2 - k^2 t):");
    for d in 1..=9 {
        println!("  d = {d}: {}", if kac::charpoly_product_check(d) { "ok" } else { "FAIL" });
    }

    println!("\ndoubled block matrix: det Q = (det K)^2 symbolically:");
    for (m, n) in [(1, 2), (2, 2), (2, 3)] {
        let ok = kac::doubled_determinant_check(m, n);
        println!("  (m, n) = ({m}, {n}): {}", if ok { "ok" } else { "FAIL" });
    }

    println!("\nrow powers e1 Q^k vs the entrywise recurrence:");
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        let kmax = 2 * m * n + 4;
        let ok = kac::row_power_identity_check(m, n, kmax);
        println!("  (m, n) = ({m}, {n}), k <= {kmax}: {}", if ok { "ok" } else { "FAIL" });
    }

    // the corner coefficients are polynomials in (m, n) of known bidegree
    for (l, nu, k) in [(0, 0, 4), (1, 1, 4)] {
        println!("\ncoefficient degrees at (l, nu, k) = ({l}, {nu}, {k}):");
        for prof in kac::coefficient_degree_profiles(l, nu, k)? {
            println!(
                "  iota = {}: deg_m = {}, deg_n = {}, corner positive: {}",
                prof.iota, prof.deg_m, prof.deg_n, prof.corner_positive
            );
        }
    }

    println!("\nexceptional angle values for (m, n) = (3, 4):");
    let angles = kac::exceptional_angles(3, 4);
    println!("  singular:  {:?}", angles.singular.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("  resonance: {:?}", angles.resonance.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    for c in &angles.singular {
        let det = kac::kronecker_det_at_angle(3, 4, c);
        println!("  det K at C = {c}: {det}");
    }

    let (t1, t2) = (rat(2), rat(3));
    println!("\nrow-stack ranks at generic (t1, t2) = (2, 3):");
    for (m, n) in [(2usize, 3usize), (3, 3)] {
        let mn2 = 2 * m * n;
        let both_odd = m % 2 == 1 && n % 2 == 1;
        let starts = if both_odd { [mn2, mn2 + 3] } else { [0, 3] };
        let rep = kac::rank_windows_check(m, n, &starts, mn2, &t1, &t2)?;
        println!(
            "  (m, n) = ({m}, {n}): windows {:?} -> ranks {:?} (expected {})",
            starts,
            rep.windows.iter().map(|w| w.1).collect::<Vec<_>>(),
            rep.expected
        );
        if both_odd {
            let levels: Vec<usize> = (2..mn2).collect();
            let kernel = kac::kernel_column_check(m, n, &levels, &t1, &t2)?;
            println!(
                "    kernel annihilates rows: {}, even support: {}, column relation: {}",
                kernel.kernel_annihilated, kernel.support_even, kernel.column_relation
            );
        }
    }

    // transported corner data reproduces the row pairing identity
    let (m, n) = (2usize, 2usize);
    let tables = kac::row_tables(m, n, 6);
    let alpha0 = vec![vec![rat(1), ratio(1, 2)], vec![rat(0), rat(2)]];
    let beta0 = vec![vec![rat(0), rat(1)], vec![ratio(-1, 3), rat(1)]];
    let (t1, t2) = (ratio(-1, 2), ratio(5, 7));
    println!("\ntransport identity, (m, n) = (2, 2), t = (-1/2, 5/7):");
    for k in 0..=6 {
        let (a_k, _) = kac::transport_evolve(&alpha0, &beta0, m, n, &t1, &t2, k);
        let corner = kac::transported_corner(&tables, &alpha0, &beta0, &t1, &t2, k);
        println!(
            "  k = {k}: evolved corner {} = row pairing {}  {}",
            a_k[0][0],
            corner,
            if a_k[0][0] == corner { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}
