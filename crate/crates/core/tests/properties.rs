use aoi_sim::engine::{apply_arrival_delays, gen_poisson_arrivals, run, DelayMode, RngStreams};
use aoi_sim::metrics::{certify, time_average_age, time_average_penalty, PenaltyFn};
use aoi_sim::model::{dominates, state_from_servers, AgeProcess, Buffer, Scenario, StateVector};
use aoi_sim::policies::PolicyName;
use approx::assert_relative_eq;
use proptest::prelude::*;

fn policy() -> impl Strategy<Value = PolicyName> {
    prop_oneof![
        Just(PolicyName::PrmpLgfs),
        Just(PolicyName::NpLgfs),
        Just(PolicyName::Fcfs),
        Just(PolicyName::LcfsPrmp),
        Just(PolicyName::LcfsNpB1),
    ]
}

fn buffer() -> impl Strategy<Value = Buffer> {
    prop_oneof![(0usize..4).prop_map(Buffer::Finite), Just(Buffer::Infinite)]
}

fn scenario(seed: u64, m: usize, rho: f64, b: Buffer, late: f64) -> Scenario {
    let streams = RngStreams::new(seed);
    let horizon = 60.0;
    let gens = gen_poisson_arrivals(rho * m as f64, horizon, &streams).unwrap();
    let pairs = apply_arrival_delays(&gens, DelayMode::TwoPoint { low: 0.0, high: late, p: 0.5 }, &streams).unwrap();
    Scenario::new(&pairs, b, m, 1.0, horizon, seed).unwrap()
}

/// Sawtooth with delivery times `t_k` and strictly increasing `U`.
fn sawtooth(points: &[(f64, f64)], horizon: f64) -> AgeProcess {
    let mut u: f64 = 0.0;
    let resets = points
        .iter()
        .map(|&(t, du)| {
            u = (u + du).min(t);
            (t, u)
        })
        .collect();
    AgeProcess::new(0.0, resets, horizon).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_invariants_hold(seed in any::<u64>(), m in 1usize..5, rho in 0.1f64..1.2, b in buffer(), p in policy(), late in 0.0f64..6.0) {
        let sc = scenario(seed, m, rho, b, late);
        let tr = run(&sc, &p, &RngStreams::new(seed)).unwrap();
        prop_assert!(tr.check_invariants().is_ok(), "{:?}", tr.check_invariants());
        prop_assert!(tr.age.resets().windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 < w[1].1));
        prop_assert!(tr.age.resets().iter().all(|&(t, u)| u <= t));
    }

    #[test]
    fn same_seed_same_trace(seed in any::<u64>(), m in 1usize..4, p in policy()) {
        let sc = scenario(seed, m, 0.8, Buffer::Finite(2), 2.0);
        let a = run(&sc, &p, &RngStreams::new(seed)).unwrap();
        let b = run(&sc, &p, &RngStreams::new(seed)).unwrap();
        prop_assert_eq!(a.events, b.events);
        prop_assert_eq!(a.age, b.age);
    }

    #[test]
    fn system_dominance_matches_state_vectors(seed in any::<u64>(), m in 1usize..5, b in buffer(), p in policy()) {
        let sc = scenario(seed, m, 0.9, b, 3.0);
        let v = certify(&PolicyName::PrmpLgfs, &p, 2, &RngStreams::new(seed), |_| Ok(sc.clone()), |e| {
            let fast = e.leader.dominates(e.follower);
            let slow = dominates(&e.leader.state_vector(), &e.follower.state_vector()).unwrap();
            (fast != slow).then(|| format!("t={}: {fast} vs {slow}", e.t))
        }).unwrap();
        prop_assert!(v.passed(), "{:?}", v.first_violation.map(|x| x.1.reason));
    }

    #[test]
    fn dominance_is_a_partial_order(u in 0.0f64..10.0, serving in prop::collection::vec(0.0f64..20.0, 0..4), bump in 0.0f64..3.0) {
        let x = state_from_servers(u, &serving, 4).unwrap();
        let lifted: Vec<f64> = serving.iter().map(|s| s + bump).collect();
        let y = state_from_servers(u + bump, &lifted, 4).unwrap();
        prop_assert!(dominates(&x, &x).unwrap());
        prop_assert!(dominates(&y, &x).unwrap());
        prop_assert!(x.alphas().windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(x.alphas().iter().all(|&a| a >= x.u()));
        if bump > 0.0 {
            prop_assert!(!dominates(&x, &y).unwrap());
        }
    }

    #[test]
    fn functionals_monotone_in_age(gaps in prop::collection::vec((0.1f64..2.0, 0.05f64..1.5), 1..12), extra in 0.0f64..1.0) {
        let mut t = 0.0;
        let pts: Vec<(f64, f64)> = gaps.iter().map(|&(g, du)| { t += g; (t, du) }).collect();
        let horizon = t + 1.0;
        let low = sawtooth(&pts, horizon);
        // same delivery times, each U reduced by at most `extra`: pointwise larger age
        let high = AgeProcess::new(0.0, low.resets().iter().enumerate().map(|(i, &(t, u))| {
            let prev = if i == 0 { 0.0 } else { low.resets()[i - 1].1 };
            (t, (u - extra).max(prev + (u - prev) / 2.0))
        }).collect(), horizon).unwrap();
        for k in 0..50 {
            let s = horizon * k as f64 / 50.0;
            prop_assert!(high.age_at(s).unwrap() >= low.age_at(s).unwrap() - 1e-12);
        }
        prop_assert!(time_average_age(&high).unwrap() >= time_average_age(&low).unwrap() - 1e-12);
        for h in [PenaltyFn::Power(2.0), PenaltyFn::Exp(0.3), PenaltyFn::Step(0.7)] {
            prop_assert!(time_average_penalty(&high, &h).unwrap() >= time_average_penalty(&low, &h).unwrap() - 1e-9);
        }
    }
}

#[test]
fn closed_form_integrals_match_quadrature() {
    let sc = scenario(17, 2, 0.8, Buffer::Finite(3), 2.0);
    let age = run(&sc, &PolicyName::PrmpLgfs, &RngStreams::new(17)).unwrap().age;
    let pairs = [
        (PenaltyFn::Identity, PenaltyFn::custom(|x| x)),
        (PenaltyFn::Power(3.0), PenaltyFn::custom(|x| x * x * x)),
        (PenaltyFn::Exp(0.2), PenaltyFn::custom(|x| (0.2 * x).exp())),
    ];
    for (exact, numeric) in pairs {
        let a = time_average_penalty(&age, &exact).unwrap();
        let b = time_average_penalty(&age, &numeric).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-8);
    }
    assert_relative_eq!(
        time_average_penalty(&age, &PenaltyFn::Identity).unwrap(),
        time_average_age(&age).unwrap(),
        max_relative = 1e-12
    );
}

#[test]
fn lgfs_and_lcfs_coincide_for_ordered_arrivals() {
    for seed in 0..20 {
        let sc = scenario(seed, 1 + (seed % 4) as usize, 0.9, Buffer::Finite(2), 0.0);
        let streams = RngStreams::new(seed);
        let pairs = [(PolicyName::PrmpLgfs, PolicyName::LcfsPrmp), (PolicyName::NpLgfs, PolicyName::LcfsNpB1)];
        let a = run(&sc, &pairs[0].0, &streams).unwrap();
        let b = run(&sc, &pairs[0].1, &streams).unwrap();
        assert_eq!(a.age, b.age, "seed {seed}");
        assert_eq!(a.events, b.events, "seed {seed}");
        // non-preemptive LGFS with B=1 matches LCFS with one slot
        let c = run(&sc.with_buffer(Buffer::Finite(1)), &pairs[1].0, &streams).unwrap();
        let d = run(&sc.with_buffer(Buffer::Finite(1)), &pairs[1].1, &streams).unwrap();
        assert_eq!(c.age, d.age, "seed {seed}");
    }
}

#[test]
fn out_of_order_arrivals_separate_lgfs_from_lcfs() {
    let differs = (0..20).any(|seed| {
        let sc = scenario(seed, 2, 0.9, Buffer::Finite(2), 4.0);
        let streams = RngStreams::new(seed);
        run(&sc, &PolicyName::PrmpLgfs, &streams).unwrap().age != run(&sc, &PolicyName::LcfsPrmp, &streams).unwrap().age
    });
    assert!(differs);
}

#[test]
fn state_vector_rejects_bad_input() {
    assert!(StateVector::new(1.0, vec![0.5]).is_err());
    assert!(StateVector::new(1.0, vec![2.0, 3.0]).is_err());
    assert!(StateVector::new(1.0, vec![3.0, 2.0]).is_ok());
}
