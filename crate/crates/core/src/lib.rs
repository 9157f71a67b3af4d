//! Multiparameter quantum metrology for SU(2) sensors: Fisher-information
//! bounds, asymptotic Bayesian cost minimization (quantum compass solutions),
//! simulated maximum-likelihood estimation, domains of unambiguous
//! estimation, and circuit-model sensors.

pub mod catalog;
pub mod cost;
pub mod deriv;
pub mod error;
pub mod linalg;
pub mod info;
pub mod majorana;
pub mod optimizer;
pub mod povm;
pub mod prior;
pub mod sensor;
pub mod spin;

pub use error::{Error, Result};
pub use spin::{make_spin_system, Axis, PhasePoint, SpinSystem};
