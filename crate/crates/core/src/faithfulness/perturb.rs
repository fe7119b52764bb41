use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{CausalModel, CiStatement, Prob};
use crate::error::{Error, Result};

/// Resolution of the mixing weight and of the random rows, so that exact
/// models stay rational.
const GRAIN: i64 = 1_000_000;

/// Settings of the randomized parameter-variation test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Perturbation {
    pub trials: usize,
    /// Weight of the random distribution mixed into every CPT row.
    pub magnitude: f64,
    pub seed: u64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation { trials: 200, magnitude: 0.1, seed: 0 }
    }
}

/// Outcome of [`perturbation_stability`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stability {
    pub trials: usize,
    pub survived: usize,
    /// Trial indices in which the statement still held.
    pub surviving_trials: Vec<usize>,
}

impl Stability {
    pub fn rate(&self) -> f64 {
        self.survived as f64 / self.trials as f64
    }
}

/// The per-trial generator: stream `trial` of the master seed.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Mixes every CPT row of `m` with a random distribution:
/// `row ← (1 − w)·row + w·r`.
pub fn perturb_model<P: Prob>(m: &CausalModel<P>, magnitude: f64, rng: &mut impl Rng) -> Result<CausalModel<P>> {
    let w = P::from_ratio((magnitude * GRAIN as f64).round() as i64, GRAIN);
    let keep = P::one().sub(&w);
    m.map_rows(|_, row| {
        let raw: Vec<i64> = row.iter().map(|_| rng.gen_range(1..=GRAIN)).collect();
        let total: i64 = raw.iter().sum();
        row.iter()
            .zip(&raw)
            .map(|(p, &r)| keep.mul(p).add(&w.mul(&P::from_ratio(r, total))))
            .collect()
    })
}

/// Fraction of seeded perturbations of `m` under which `s` (over the
/// model's variables) still holds in the joint.
pub fn perturbation_stability<P: Prob>(m: &CausalModel<P>, s: &CiStatement, settings: Perturbation) -> Result<Stability> {
    if settings.trials == 0 {
        return Err(Error::OutOfRange("trials must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&settings.magnitude) {
        return Err(Error::OutOfRange(format!("magnitude {} not in [0, 1]", settings.magnitude)));
    }
    if !s.vars().is_subset(m.dag().all()) {
        return Err(Error::UnknownVariable(format!("{:?}", s.vars())));
    }
    let held: Vec<bool> = (0..settings.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(settings.seed, t);
            let pm = perturb_model(m, settings.magnitude, &mut rng)?;
            Ok(pm.joint().ci_holds(s))
        })
        .collect::<Result<_>>()?;
    let surviving_trials: Vec<usize> = held.iter().enumerate().filter(|(_, &h)| h).map(|(i, _)| i).collect();
    Ok(Stability { trials: settings.trials, survived: surviving_trials.len(), surviving_trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casebook::models::{and_gate, and_gate_fine_tuned};
    use crate::distributions::{rat, Rational};

    fn ab() -> CiStatement {
        CiStatement::pair(0, 1, crate::VarSet::EMPTY).unwrap()
    }

    #[test]
    fn rows_stay_exact_distributions() {
        let m = and_gate_fine_tuned();
        let pm = perturb_model(&m, 0.3, &mut trial_rng(5, 0)).unwrap();
        for cpt in pm.cpts() {
            for row in cpt.rows() {
                assert_eq!(row.iter().sum::<Rational>(), rat(1, 1));
                assert!(row.iter().all(|p| *p > rat(0, 1)));
            }
        }
    }

    #[test]
    fn zero_magnitude_is_identity() {
        let m = and_gate_fine_tuned();
        assert_eq!(perturb_model(&m, 0.0, &mut trial_rng(0, 3)).unwrap().joint(), m.joint());
        let s = perturbation_stability(&m, &ab(), Perturbation { magnitude: 0.0, ..Default::default() }).unwrap();
        assert_eq!(s.rate(), 1.0);
    }

    #[test]
    fn mixing_weight_is_applied_exactly() {
        // full weight forgets the original row, so two models of one shape agree
        let a = and_gate();
        let b = a
            .map_rows(|_, r| {
                let mut point = vec![rat(0, 1); r.len()];
                point[0] = rat(1, 1);
                point
            })
            .unwrap();
        let pa = perturb_model(&a, 1.0, &mut trial_rng(9, 1)).unwrap();
        let pb = perturb_model(&b, 1.0, &mut trial_rng(9, 1)).unwrap();
        assert_eq!(pa.joint(), pb.joint());
        // half weight lands midway between the row and the random draw
        let half = perturb_model(&a, 0.5, &mut trial_rng(9, 1)).unwrap();
        let (orig, full, mid) = (&a.cpt(0).rows()[0][0], &pa.cpt(0).rows()[0][0], &half.cpt(0).rows()[0][0]);
        assert_eq!(*mid, (orig + full) / rat(2, 1));
    }

    #[test]
    fn trials_are_seeded_streams() {
        let m = and_gate();
        let x = perturb_model(&m, 0.2, &mut trial_rng(1, 4)).unwrap();
        assert_eq!(x, perturb_model(&m, 0.2, &mut trial_rng(1, 4)).unwrap());
        assert_ne!(x, perturb_model(&m, 0.2, &mut trial_rng(1, 5)).unwrap());
        assert_ne!(x, perturb_model(&m, 0.2, &mut trial_rng(2, 4)).unwrap());
    }

    #[test]
    fn structural_and_tuned_survival() {
        let settings = Perturbation { trials: 50, ..Default::default() };
        let s = perturbation_stability(&and_gate(), &ab(), settings).unwrap();
        assert_eq!((s.survived, s.trials), (50, 50));
        let s = perturbation_stability(&and_gate_fine_tuned(), &ab(), settings).unwrap();
        assert_eq!(s.survived, 0);
        assert!(s.surviving_trials.is_empty());
    }

    #[test]
    fn invalid_settings() {
        let m = and_gate();
        let bad = |p: Perturbation| perturbation_stability(&m, &ab(), p).unwrap_err().code();
        assert_eq!(bad(Perturbation { trials: 0, ..Default::default() }), "E-RANGE");
        assert_eq!(bad(Perturbation { magnitude: 1.5, ..Default::default() }), "E-RANGE");
        assert_eq!(bad(Perturbation { magnitude: -0.1, ..Default::default() }), "E-RANGE");
        let far = CiStatement::pair(0, 7, crate::VarSet::EMPTY).unwrap();
        assert_eq!(perturbation_stability(&m, &far, Perturbation::default()).unwrap_err().code(), "E-UNKNOWN-VAR");
    }
}
