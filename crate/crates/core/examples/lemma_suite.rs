// The state-transition lemmas as randomized checks, and one transition by hand.

use aoi_sim::engine::RngStreams;
use aoi_sim::lemma_lab::{alpha_construction_p, lemma4_insertion_transition, run_lemma_suite, ArrivedSet, SuiteConfig};

pub fn run_example() -> aoi_sim::Result<()> {
    let set = ArrivedSet::new([1.0, 4.0, 2.5, 3.0])?;
    let alphas = alpha_construction_p(&set, 2.0, 3);
    println!("P state for U = 2, m = 3: {alphas:?}");
    let (grown, step) = lemma4_insertion_transition(&set, 2.0, 1.5, 5.0, 3)?;
    println!("after inserting s = 5 ({} packets): P {:?} vs pi {:?}, holds = {}", grown.len(), step.p, step.pi, step.holds);

    let cfg = SuiteConfig { cases: 20_000, walks: 100, walk_len: 300, ..SuiteConfig::default() };
    for r in run_lemma_suite(&cfg, &RngStreams::new(5)) {
        println!("{:<20} cases {:>6} violations {} {}", r.name, r.cases, r.violations, if r.passed { "ok" } else { "FAILED" });
        assert!(r.passed);
    }
    Ok(())
}

fn main() {
    run_example().expect("lemma suite");
}
