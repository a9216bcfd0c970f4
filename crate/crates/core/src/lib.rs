pub mod askey_wilson;
pub mod check;
pub mod connection;
pub mod chebpoly;
pub mod cli;
pub mod error;
pub mod qcore;
pub mod quadrature;
pub mod sturm_liouville;
pub mod suite;

pub use check::CheckResult;
pub use error::{Error, Result};
