// One replication of preemptive LGFS with two servers and out-of-order arrivals.

use aoi_sim::engine::{apply_arrival_delays, gen_poisson_arrivals, run, DelayMode, RngStreams};
use aoi_sim::metrics::{average_peak_age, throughput_and_delay, time_average_age};
use aoi_sim::model::{Buffer, Scenario};
use aoi_sim::policies::PolicyName;

pub fn run_example() -> aoi_sim::Result<()> {
    let streams = RngStreams::new(7);
    let horizon = 500.0;
    let gens = gen_poisson_arrivals(1.6, horizon, &streams)?;
    let pairs = apply_arrival_delays(&gens, DelayMode::TwoPoint { low: 0.0, high: 3.0, p: 0.5 }, &streams)?;
    let scenario = Scenario::new(&pairs, Buffer::Finite(4), 2, 1.0, horizon, 7)?;

    let trace = run(&scenario, &PolicyName::PrmpLgfs, &streams)?;
    trace.check_invariants().map_err(aoi_sim::Error::InvalidScenario)?;
    let td = throughput_and_delay(&trace)?;
    println!("packets        {}", scenario.n());
    println!("events logged  {}", trace.events.len());
    println!("average age    {:.4}", time_average_age(&trace.age)?);
    println!("peak age       {:.4}", average_peak_age(&trace.age)?);
    println!("throughput     {:.4}", td.throughput);
    println!("delivered      {}", td.delivered);
    Ok(())
}

fn main() {
    run_example().expect("single run");
}
