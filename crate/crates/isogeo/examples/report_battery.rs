//! Run the same verification batteries the CLI uses and assemble a report
//! programmatically, then render it as JSON and CSV.
//!
//!     cargo run --example report_battery

use isogeo::report::Report;
use isogeo::runner::{self, RunConfig};

fn main() {
    let cfg = RunConfig { samples: 200, seed: 7, tol_residual: 1e-9 };

    let mut report = Report::new(cfg.seed);
    report.extend(runner::clifford_battery(&cfg));
    for fam in runner::mt_grid().iter().take(2) {
        report.extend(runner::family_battery(&cfg, fam));
        report.extend(runner::flow_battery(&cfg, fam));
    }
    report.extend(runner::series_battery(&cfg));
    report.sort();

    println!("{}", report.to_json());
    eprintln!("\ncsv form:\n{}", report.to_csv());
    eprintln!(
        "\n{} checks, {} failing",
        report.checks.len(),
        report.fail_count()
    );
}
