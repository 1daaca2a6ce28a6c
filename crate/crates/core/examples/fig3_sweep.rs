// Scaled-down one-server sweep: Erlang-2 arrivals, zero delay, average age
// of prmp-LGFS, non-preemptive LCFS with one buffer slot, and FCFS.

use aoi_sim::experiment::{run_sweep, write_report, ExperimentConfig};

pub fn run_example() -> aoi_sim::Result<()> {
    let cfg = ExperimentConfig {
        rho: vec![0.3, 0.6, 0.9],
        horizon: Some(2_000.0),
        warmup: Some(100.0),
        replications: 8,
        ..ExperimentConfig::fig3()
    };
    let reports = run_sweep(&cfg)?;
    for &rho in &cfg.rho {
        let row: Vec<String> = reports
            .iter()
            .filter(|r| r.rho == rho)
            .map(|r| format!("{} {:.3} +/- {:.3}", r.policy, r.avg_age.mean, r.avg_age.half_width))
            .collect();
        println!("rho={rho}: {}", row.join(" | "));
    }
    write_report(&reports, std::io::sink())?;
    Ok(())
}

fn main() {
    run_example().expect("fig3 sweep");
}
