//! Multi-server age-of-information simulation.
//!
//! The crate simulates information-update systems in which packets generated
//! at times `s_i` reach a queue at times `a_i ≥ s_i` and are forwarded by `m`
//! servers with i.i.d. exponential service. It provides:
//!
//! - [`model`]: packets, scenarios, the state vector `(U, α_1, …, α_m)` and
//!   the age process Δ(t) = t − U(t);
//! - [`engine`]: a deterministic seeded event kernel plus a coupled dual-run
//!   driver;
//! - [`policies`]: preemptive and non-preemptive LGFS, FCFS and LCFS;
//! - [`metrics`]: exact age functionals, throughput/delay, and dominance
//!   tests (DKW marginal test, coupled certificate);
//! - [`lemma_lab`]: the state-transition lemmas behind the optimality of
//!   preemptive LGFS as randomized executable checks;
//! - [`experiment`]: configuration, sweeps, verification and trace files.

pub mod engine;
pub mod error;
pub mod experiment;
pub mod lemma_lab;
pub mod metrics;
pub mod model;
pub mod policies;

pub use error::{Error, Result};
