//! Homogeneity made concrete: for two random points on the same MTF level,
//! produce the unitary-plus-scalar pair moving one to the other; for the
//! graph family, move a point by a random screw motion composed with a
//! stabilizer element and watch the level function stay put.
//!
//!     cargo run --example homogeneity_witness

use isogeo::algebra::Field;
use isogeo::families::{graph_symmetry_check, mtf_witness, Family};
use isogeo::spaceforms::mix_seed;

fn main() -> isogeo::Result<()> {
    for field in [Field::R, Field::C, Field::H] {
        let fam = Family::Mtf { field, n: 2, t: 0.4 };
        println!("{}", fam.instance_label());
        let mut worst = 0.0f64;
        for i in 0..50 {
            let p = fam.sample_on_level(mix_seed(21, 2 * i))?;
            let mut q = fam.sample_on_level(mix_seed(21, 2 * i + 1))?;
            if field == Field::R {
                // stay on one connected component: over R the two form signs
                // are separate diagonal orbits
                if p.x.coords.dot(&p.y.coords) * q.x.coords.dot(&q.y.coords) < 0.0 {
                    q.y.coords *= -1.0;
                }
            }
            let w = mtf_witness(&fam, &p, &q)?;
            worst = worst
                .max(w.residual)
                .max(w.orthogonality_residual)
                .max(w.commutation_residual);
            if i == 0 {
                println!(
                    "  sample witness: |g p - q| = {:.3e}, A orthogonal to {:.3e}, F-linear to {:.3e}",
                    w.residual, w.orthogonality_residual, w.commutation_residual
                );
                println!("  scalar part a = {:?}", &w.scalar.q[..field.dim()]);
            }
        }
        println!("  worst residual over 50 pairs: {worst:.3e}\n");
    }

    let fam = Family::graph_default(4, 0.7, 0.3);
    println!("{}", fam.instance_label());
    let mut worst = 0.0f64;
    for i in 0..100 {
        let p = fam.sample_on_level(mix_seed(33, i))?;
        let theta = std::f64::consts::PI * ((i as f64 / 50.0) - 1.0);
        worst = worst.max(graph_symmetry_check(&fam, &p, theta, mix_seed(34, i))?);
    }
    println!("  screw motion + stabilizer: max |F(g p) - F(p)| = {worst:.3e} over 100 draws");
    Ok(())
}
