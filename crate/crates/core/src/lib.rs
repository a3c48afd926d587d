pub mod canon;
pub mod classify;
pub mod cli;
pub mod cyclo;
pub mod error;
pub mod fiber;
pub mod proj;
pub mod report;
pub mod rng;
pub mod smith;
pub mod suite;
pub mod torsion;

pub use error::{Error, Result};
