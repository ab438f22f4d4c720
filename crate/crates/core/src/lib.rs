//! Large-degree expansion of the limiting spectral measure of diluted random
//! graphs, with two independent checks: exact enumeration of closed walks on
//! Galton-Watson trees, and Monte Carlo spectra of finite graphs.

pub mod error;
pub mod generating;
pub mod graphs;
pub mod measures;
pub mod par;
pub mod rational;
pub mod series;
pub mod verify;
pub mod walks;

pub use error::{Error, Result};
pub use par::Exec;
pub use rational::Rational;
pub use series::Series;
