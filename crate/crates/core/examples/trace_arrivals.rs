// Arrivals from an `s,a` CSV trace, validated and simulated under three policies.

use std::io::Write;

use aoi_sim::experiment::{load_trace_arrivals, run_sweep, ArrivalKind, ExperimentConfig};
use aoi_sim::model::Buffer;
use aoi_sim::policies::PolicyName;

pub fn run_example() -> aoi_sim::Result<()> {
    let dir = std::env::temp_dir().join(format!("aoi-trace-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("arrivals.csv");
    let mut f = std::fs::File::create(&path)?;
    writeln!(f, "s,a")?;
    for k in 0..400 {
        let s = k as f64 * 0.8;
        // every third packet is held back and overtaken by the next two
        let a = if k % 3 == 0 { s + 2.0 } else { s + 0.1 };
        writeln!(f, "{s},{a}")?;
    }
    drop(f);

    let pairs = load_trace_arrivals(&path)?;
    println!("{} arrivals, last at a = {}", pairs.len(), pairs.last().map_or(0.0, |p| p.1));

    let cfg = ExperimentConfig {
        policies: vec![PolicyName::PrmpLgfs, PolicyName::LcfsPrmp, PolicyName::Fcfs],
        m: 1,
        buffers: vec![Buffer::Finite(2)],
        rho: vec![0.8],
        arrival: ArrivalKind::Trace(path.clone()),
        horizon: Some(330.0),
        warmup: Some(10.0),
        replications: 20,
        ..ExperimentConfig::fig3()
    };
    for r in run_sweep(&cfg)? {
        println!("{:<10} average age {:.3} +/- {:.3}", r.policy, r.avg_age.mean, r.avg_age.half_width);
    }

    std::fs::write(&path, "s,a\n1.0,0.5\n")?;
    match load_trace_arrivals(&path) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("a < s must be rejected"),
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() {
    run_example().expect("trace arrivals");
}
