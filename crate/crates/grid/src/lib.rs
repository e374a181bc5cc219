//! Floating-point star product on periodic 2-planes.
//!
//! Fields are sampled on an `N x N` grid over `[-L/2, L/2)^2` at a fixed time
//! slice, where the deformation reduces to one scalar `theta`. Plane waves
//! multiply as
//!
//! ```text
//! e^{i a.x} * e^{i b.x} = e^{-(i/2) theta (a1 b2 - a2 b1)} e^{i (a+b).x}
//! ```
//!
//! and [`grid_star`] applies this phase to every mode pair.

mod error;
mod field;
pub mod io;
mod star;
mod symbolic;

pub use error::{GridError, Result};
pub use field::GridField;
pub use star::{
    associativity_defect, grid_cyclicity_defect, grid_star, grid_trace_defect, relative_defect,
};
pub use symbolic::{cross_validate_symbolic, symbolic_star_values, WindowedPoly};

/// Default resolution.
pub const DEFAULT_N: usize = 256;

/// Default box length `2 pi 16`.
pub const DEFAULT_BOX_LENGTH: f64 = 2.0 * std::f64::consts::PI * 16.0;
