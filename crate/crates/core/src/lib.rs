//! One-dimensional coupled shallow-water and movable-bed (Exner) solver.
//!
//! The hyperbolic system is split at each interface into a non-conservative
//! pressure subsystem, solved with a path-conservative Godunov method built on
//! star states of the stationary-bed invariant system, and a conservative
//! advection subsystem, solved with a sign-based upwind flux. First-order and
//! second-order (ADER with AENO reconstruction) time stepping are provided,
//! together with independent reference solutions used by the test suite.

pub mod ader2;
pub mod config;
pub mod error;
pub mod model;
pub mod oracles;
pub mod pressure_riemann;
pub mod splitting;

pub use config::{
    Preset, RunConfig, RunOutput, SourceSpec, manufactured_convergence, run_preset, simulate,
    spin_up_fixed_bed,
};
pub use error::{Result, SveError};
pub use model::{
    BedloadClosure, CellState, Eigenvalues3, FieldState, PrimitiveState, G_DEFAULT,
    cfl_timestep, full_system_eigenvalues, pressure_matrix,
};
pub use pressure_riemann::{RiemannInputs, StarSolver, StarState, star_state};
pub use splitting::{
    AdvectionFlux, BoundarySpec, FluctuationPair, QuadratureRule, SourceFn,
    advection_flux_first_order, apply_boundary, fluctuations, step_first_order,
    step_first_order_with_source,
};
pub use ader2::{AenoParams, aeno_slope, step_second_order, step_second_order_with_source};
