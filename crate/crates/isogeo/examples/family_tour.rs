//! Build one instance of each hypersurface family and verify the defining
//! identities |grad F|^2 = b(F) and (Laplacian F) = a(F) at seeded sample
//! points, along with the constancy of the angle function.
//!
//!     cargo run --example family_tour

use isogeo::clifford::gen_system;
use isogeo::families::Family;
use isogeo::spaceforms::mix_seed;

fn main() -> isogeo::Result<()> {
    let families = vec![
        Family::Mt { n: 3, t: 0.2 },
        Family::MHat { sys: gen_system(2, 2)?, t: 0.4 },
        Family::graph_default(3, 0.8, 0.25),
        Family::Mtf { field: isogeo::algebra::Field::C, n: 2, t: 0.5 },
    ];

    for fam in &families {
        fam.validate()?;
        println!("{}", fam.instance_label());
        println!("  ambient: {:?}, level = {}", fam.ambient(), fam.level());

        let mut worst_grad = 0.0f64;
        let mut worst_lap = 0.0f64;
        let mut angle_lo = f64::INFINITY;
        let mut angle_hi = f64::NEG_INFINITY;
        for i in 0..500 {
            let p = fam.sample_on_level(mix_seed(11, i))?;
            let ev = fam.evaluate(&p)?;
            let g2 = ev.grad.metric_inner(&ev.grad);
            worst_grad = worst_grad.max((g2 - fam.b_of(ev.f)).abs());
            worst_lap = worst_lap.max((ev.lap - fam.a_of(ev.f)).abs());
            let c = fam.angle_function(&p)?;
            angle_lo = angle_lo.min(c);
            angle_hi = angle_hi.max(c);
        }
        println!("  max ||grad F|^2 - b(F)|   = {worst_grad:.3e}");
        println!("  max |lap F - a(F)|        = {worst_lap:.3e}");
        println!(
            "  angle C in [{angle_lo:.12}, {angle_hi:.12}], closed form {:.12}",
            fam.closed_form_angle()
        );
        println!(
            "  mean curvature (closed form): {:.9}\n",
            fam.closed_form_mean_curvature()
        );
    }
    Ok(())
}
