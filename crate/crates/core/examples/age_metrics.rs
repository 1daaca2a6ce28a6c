// Exact age functionals on a hand-built sawtooth, plus penalty functions.

use aoi_sim::metrics::{average_peak_age, peak_ages, time_average_age, time_average_penalty, PenaltyFn};
use aoi_sim::model::AgeProcess;

pub fn run_example() -> aoi_sim::Result<()> {
    // U jumps to 0.5 at t = 1 and to 2 at t = 3; horizon 4
    let age = AgeProcess::new(0.0, vec![(1.0, 0.5), (3.0, 2.0)], 4.0)?;
    println!("age at 2.5     {}", age.age_at(2.5)?);
    println!("average age    {}", time_average_age(&age)?);
    println!("average peak   {}", average_peak_age(&age)?);
    for (t, peak) in peak_ages(&age) {
        println!("peak {peak} at t = {t}");
    }
    for h in [PenaltyFn::Identity, PenaltyFn::Power(2.0), PenaltyFn::Exp(0.5), PenaltyFn::Step(1.0)] {
        println!("{h:?}: {:.6}", time_average_penalty(&age, &h)?);
    }
    Ok(())
}

fn main() {
    run_example().expect("age metrics");
}
