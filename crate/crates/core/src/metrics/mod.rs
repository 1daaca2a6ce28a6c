//! Age penalty functionals, throughput/delay, and dominance tests.

mod certificate;
mod dominance;
mod functionals;
mod penalty;
mod report;

pub use certificate::{
    certify, coupled_dominance_certificate, coupled_dominance_certificate_with, state_dominance, CertificateVerdict,
};
pub use dominance::{marginal_dominance_test, DominanceVerdict};
pub use functionals::{
    average_peak_age, average_peak_age_window, peak_ages, throughput_and_delay, throughput_and_delay_window,
    time_average_age, time_average_age_window, time_average_penalty, time_average_penalty_window, ThroughputDelay,
};
pub use penalty::PenaltyFn;
pub use report::{Estimate, MetricsReport, RunMetrics, CSV_HEADER};
