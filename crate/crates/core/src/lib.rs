//! Certified numerical and exact checks of the Euler-number identities
//! behind the hyperbolic secant distribution.

pub mod error;
pub mod exact;
pub mod precision;
pub mod series;
pub mod report;
pub mod closed_forms;
pub mod quadrature;
pub mod sech;
pub mod convolution;
pub mod cli;

pub use error::{Error, Result};
pub use precision::{pi_at, PrecReal};
pub use series::SeriesValue;
