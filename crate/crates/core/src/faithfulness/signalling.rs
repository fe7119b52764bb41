use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{CausalModel, CiStatement, Prob};
use crate::error::{Error, Result};
use crate::faithfulness::perturb::{perturb_model, trial_rng, Perturbation, Stability};
use crate::varset::VarSet;

/// No-signalling verdicts per wing; `true` means no signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signalling {
    /// `(A ⊥ T | S)`: the left outcome carries no trace of the right setting.
    pub left: bool,
    /// `(B ⊥ S | T)`: the right outcome carries no trace of the left setting.
    pub right: bool,
}

impl Signalling {
    pub fn no_signalling(&self) -> bool {
        self.left && self.right
    }
}

/// Evaluates both no-signalling statements on a model declaring the roles
/// `S`, `T`, `A` and `B`.
pub fn signalling_check<P: Prob>(m: &CausalModel<P>) -> Result<Signalling> {
    let (s, t, a, b) = (m.role("S")?, m.role("T")?, m.role("A")?, m.role("B")?);
    let joint = m.joint();
    let left = CiStatement::pair(a, t, VarSet::singleton(s))?;
    let right = CiStatement::pair(b, s, VarSet::singleton(t))?;
    Ok(Signalling { left: joint.ci_holds(&left), right: joint.ci_holds(&right) })
}

/// Fraction of seeded perturbations of `m` that still show no signalling
/// in either direction.
pub fn no_signalling_stability<P: Prob>(m: &CausalModel<P>, settings: Perturbation) -> Result<Stability> {
    if settings.trials == 0 {
        return Err(Error::OutOfRange("trials must be at least 1".into()));
    }
    signalling_check(m)?;
    let held: Vec<bool> = (0..settings.trials)
        .into_par_iter()
        .map(|t| {
            let pm = perturb_model(m, settings.magnitude, &mut trial_rng(settings.seed, t))?;
            Ok(signalling_check(&pm)?.no_signalling())
        })
        .collect::<Result<_>>()?;
    let surviving_trials: Vec<usize> = held.iter().enumerate().filter(|(_, &h)| h).map(|(i, _)| i).collect();
    Ok(Stability { trials: settings.trials, survived: surviving_trials.len(), surviving_trials })
}
