//! Exact algebra for a Moyal-type deformation of flat spacetime whose
//! noncommutativity parameter `theta^{ij}(t)` depends on time.
//!
//! The crate covers the deformed product on polynomials, the differential
//! calculus it forces, the scalar and U(1) gauge sectors built on top of it,
//! and the plane-wave reduction of the gauge action.

pub mod error;
pub mod forms;
pub mod gauge;
pub mod planewave;
pub mod poly;
pub mod sample;
pub mod scalar;
pub mod star;
pub mod trig;

pub use error::{Error, Result};
pub use poly::{ci, cr, q, CRat, Monomial, Poly, Var};
pub use forms::{DifferentialForm, Wedge};
pub use star::{StarContext, ThetaProfile};
