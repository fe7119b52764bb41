pub mod casebook;
pub mod discovery;
pub mod distributions;
pub mod error;
pub mod faithfulness;
pub mod graphs;
pub mod io;
pub mod quantum;
pub mod varset;

pub use error::{Error, Result};
pub use varset::VarSet;
