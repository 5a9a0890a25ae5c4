pub mod cli;
pub mod correlations;
pub mod ensembles;
pub mod error;
pub mod kernel;
pub mod report;
pub mod specfun;
pub mod stats;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
