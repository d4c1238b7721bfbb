//! Scalar numerical building blocks shared by the model engines.

pub mod ode;
pub mod quadrature;
pub mod root;

pub use ode::{DenseSolution, OdeError, OdeOptions};
pub use quadrature::{integrate, integrate_to_infinity, QuadError, QuadResult};
pub use root::{brent, golden_section_max, RootError};
