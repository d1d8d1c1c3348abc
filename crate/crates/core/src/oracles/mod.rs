//! Independent reference solutions and error metrology used to verify the
//! solver: an exact manufactured solution, an exact fixed-bed shallow-water
//! Riemann solver, a deliberately simple centered reference scheme, steady
//! backwater profiles and norm / convergence-rate bookkeeping.

pub mod backwater;
pub mod centered;
pub mod manufactured;
pub mod norms;
pub mod swe_riemann;

pub use backwater::backwater_profile;
pub use centered::reference_centered_step;
pub use manufactured::{manufactured_state, ManufacturedParams};
pub use norms::{error_norms, rate, ErrorReport, ErrorRow, NormPair};
pub use swe_riemann::{exact_swe_riemann, SweRiemannSolution};
