//! Structural versus fine-tuned independences, parameter perturbation,
//! no-signalling checks and the expressiveness gap of pairwise confounding.

mod classify;
mod gap;
mod perturb;
mod signalling;

pub use classify::{classify_independences, classify_with_survival, FaithfulnessReport, StatementReport, Verdict};
pub use gap::{
    agreement, expressive_gap_demo, max_agreement, pairwise_deterministic_max, triangle_structures, GapConfig, GapResult,
};
pub use perturb::{perturb_model, perturbation_stability, trial_rng, Perturbation, Stability};
pub use signalling::{no_signalling_stability, signalling_check, Signalling};
