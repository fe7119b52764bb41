//! Directed acyclic graphs, d-separation, latent structures and patterns.

mod dag;
pub mod dot;
mod dsep;
mod latent;
mod pattern;

pub use dag::{parse_order_constraints, Dag, Relatives, VStructure};
pub use dsep::{d_separated, dsep_ci_set, DsepOracle};
pub(crate) use dsep::PairTable;
pub use latent::{LatentStructure, StructureKey};
pub use pattern::{expand_pattern, Expansion, Link, Mark, Pattern};
