//! Initial–boundary value problem for the reduced flow on `[0, θ₀]`.

pub mod config;
pub mod monitors;
pub mod rhs;
pub mod run;
pub mod step;
pub mod tridiag;

pub use config::{
    BoundaryMode, InitialKind, MonitorSchedule, NeumannVariant, Scheme, SolverConfig,
};
pub use monitors::{boundary_b, boundary_u, monitor, MonitorRecord};
pub use rhs::{reduced_rhs, RhsContext};
pub use run::{decay_slope, run, run_observed, Snapshot, SteadyReport};
pub use step::{apply_boundary, make_initial, Stepper};
