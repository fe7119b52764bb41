//! Causal discovery from CI statements, with and without latent variables.

mod icstar;
mod latent;
mod ordering;

pub use icstar::{icstar, icstar_pattern, IcStar};
pub use latent::{enumerate_latent_structures, reproduces, LatentMode, MAX_OBSERVED};
pub use ordering::{candidates_by_ordering, filter_faithful, minimal_parent_set, wermuth_lauritzen, OrderingCandidate};
