//! Generate anticommuting matrix systems, check their defining relations in
//! integer arithmetic, and evaluate the ambient degree-4 polynomial they
//! induce.
//!
//!     cargo run --example clifford_systems

use isogeo::clifford::{delta, gen_system, otfkm_restricted_f, verify_system};
use isogeo::spaceforms::sample_factor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> isogeo::Result<()> {
    println!("minimal representation dimensions:");
    for p in 1..=9 {
        println!("  p = {p}: delta = {}", delta(p)?);
    }

    println!("\nrelation checks, integer arithmetic:");
    for p in 1..=9 {
        for k in 1..=2 {
            let sys = gen_system(p, k)?;
            let report = verify_system(&sys);
            let status = if report.all_pass() { "ok" } else { "FAIL" };
            println!("  p = {p}, k = {k}: l = {:>4}  {status}", sys.l);
            for check in report.checks.iter().filter(|c| !c.pass) {
                println!("    failing: {}", check.name);
            }
        }
    }

    // the induced quartic stays inside [0, 1] on unit pairs: it is the level
    // function of the Clifford family on the sphere product
    let sys = gen_system(3, 2)?;
    println!("\nsampled range of the induced level function (p = 3, l = {}):", sys.l);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..2000 {
        let x = sample_factor(sys.l - 1, 1.0, &mut rng);
        let y = sample_factor(sys.l - 1, 1.0, &mut rng);
        let f = otfkm_restricted_f(&sys, x.coords.as_slice(), y.coords.as_slice())?;
        lo = lo.min(f);
        hi = hi.max(f);
    }
    println!("  f in [{lo:.6}, {hi:.6}]");
    Ok(())
}
