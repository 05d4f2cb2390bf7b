//! Principal curvature spectra of the four families: measure the shape
//! operator numerically, cluster its eigenvalues, and compare against the
//! closed forms. For the sphere-sphere families the nonzero curvatures come
//! in reciprocal pairs lambda * mu = -1/2.
//!
//!     cargo run --example spectrum_ladder

use isogeo::clifford::gen_system;
use isogeo::families::{
    pairing_check, principal_spectrum, rigidity_residual, shape_operator, slice_blocks, Family,
    DEFAULT_CLUSTER_TOL,
};
use isogeo::spaceforms::mix_seed;

fn main() -> isogeo::Result<()> {
    let families = vec![
        Family::Mt { n: 4, t: 0.3 },
        Family::MHat { sys: gen_system(3, 1)?, t: 0.6 },
        Family::graph_default(4, 1.5, 0.1),
        Family::Mtf { field: isogeo::algebra::Field::H, n: 1, t: 0.35 },
    ];

    for fam in &families {
        println!("{}", fam.instance_label());
        let p = fam.sample_on_level(mix_seed(3, 1))?;
        let spec = principal_spectrum(fam, &p, DEFAULT_CLUSTER_TOL)?;

        println!("  measured clusters (value x multiplicity):");
        for (v, m) in &spec.clusters {
            println!("    {v:>12.9} x {m}");
        }
        println!("  closed form:");
        for (v, m) in fam.closed_form_spectrum() {
            println!("    {v:>12.9} x {m}");
        }
        println!("  trace = {:.9}, symmetry residual = {:.2e}", spec.trace, spec.symmetry_residual);

        let op = shape_operator(fam, &p)?;
        let blocks = slice_blocks(&op);
        println!("  |A V| = {:.3e} (V is always a curvature-0 direction)", blocks.av_norm);
        println!("  rigidity identity residual = {:.3e}", rigidity_residual(fam, &op));

        if !matches!(fam, Family::GraphSh { .. }) {
            let pairing = pairing_check(&spec.clusters);
            println!(
                "  pairing lambda*mu = -1/2: residual {:.3e}, multiplicities match: {}",
                pairing.max_residual, pairing.mult_match
            );
        }
        println!();
    }
    Ok(())
}
