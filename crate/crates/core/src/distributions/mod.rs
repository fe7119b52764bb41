//! Exact discrete probability: CPTs, joints, CI tests and the closure engine.

pub mod ci;
mod extension;
pub mod joint;
mod markov;
pub mod model;
pub mod prob;

pub use ci::{is_generated_by, semigraphoid_closure, CiSet, CiStatement};
pub use extension::deterministic_extension;
pub use joint::{ExactJoint, FloatJoint, JointDistribution, Scope, DEFAULT_TOL, FULL_SET_LIMIT};
pub use markov::markov_ci;
pub use model::{joint_from_model, CausalModel, Cpt, ExactModel};
pub use prob::{parse_rational, rat, Prob, Rational};
