// Scaled-down five-server sweep of prmp-LGFS, np-LGFS and FCFS with delays
// of 1 or 100 and `B ∈ {10, ∞}`, written as CSV to stdout.

use aoi_sim::experiment::{run_sweep, write_report, ExperimentConfig};

pub fn run_example() -> aoi_sim::Result<()> {
    let cfg = ExperimentConfig {
        rho: vec![0.5, 0.9],
        horizon: Some(1_500.0),
        warmup: Some(300.0),
        replications: 4,
        ..ExperimentConfig::fig4()
    };
    write_report(&run_sweep(&cfg)?, std::io::stdout().lock())
}

fn main() {
    run_example().expect("fig4 sweep");
}
