// The age process of preemptive LGFS does not depend on the buffer size.

use aoi_sim::engine::{apply_arrival_delays, gen_poisson_arrivals, run_with, DelayMode, RngStreams, RunOptions};
use aoi_sim::metrics::time_average_age;
use aoi_sim::model::{Buffer, Scenario};
use aoi_sim::policies::PolicyName;

pub fn run_example() -> aoi_sim::Result<()> {
    let streams = RngStreams::new(3);
    let horizon = 2_000.0;
    let gens = gen_poisson_arrivals(4.5, horizon, &streams)?;
    let pairs = apply_arrival_delays(&gens, DelayMode::TwoPoint { low: 0.0, high: 4.0, p: 0.5 }, &streams)?;
    let base = Scenario::new(&pairs, Buffer::Infinite, 5, 1.0, horizon, 3)?;

    let buffers = [Buffer::Finite(0), Buffer::Finite(1), Buffer::Finite(10), Buffer::Infinite];
    let mut reference = None;
    for b in buffers {
        let sc = base.with_buffer(b);
        let lgfs = run_with(&sc, &PolicyName::PrmpLgfs, &streams, RunOptions::lean())?;
        let fcfs = run_with(&sc, &PolicyName::Fcfs, &streams, RunOptions::lean())?;
        println!(
            "B={b:<4} prmp-lgfs {:.6}  fcfs {:.6}",
            time_average_age(&lgfs.age)?,
            time_average_age(&fcfs.age)?
        );
        match &reference {
            None => reference = Some(lgfs.age),
            Some(r) => assert_eq!(r, &lgfs.age, "prmp-lgfs age changed with B"),
        }
    }
    println!("prmp-lgfs age process identical for every B");
    Ok(())
}

fn main() {
    run_example().expect("B invariance");
}
