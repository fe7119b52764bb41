//! Numerical illustration that three pairwise common causes cannot mimic
//! one common cause of three variables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::CausalModel;
use crate::error::{Error, Result};
use crate::graphs::LatentStructure;
use crate::varset::VarSet;

/// Search settings for [`expressive_gap_demo`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapConfig {
    /// Values of every latent variable.
    pub latent_card: usize,
    /// Initial refinement step is `1/grid`.
    pub grid: usize,
    /// Random parameter draws before refinement.
    pub samples: usize,
    pub seed: u64,
}

impl Default for GapConfig {
    fn default() -> Self {
        GapConfig { latent_card: 4, grid: 20, samples: 10_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapResult {
    pub pairwise_max: f64,
    pub triple_max: f64,
    /// Exact optimum of the pairwise structure over deterministic responses
    /// with binary latents, priors on the `1/grid` lattice.
    pub pairwise_deterministic_max: f64,
    pub config: GapConfig,
}

/// Overlap of `P(X,Y,Z)` with `½[000] + ½[111]`: one minus the total
/// variation distance, equal to 1 exactly for perfectly correlated
/// unbiased bits.
pub fn agreement(p: &[f64]) -> f64 {
    p[0].min(0.5) + p[7].min(0.5)
}

/// The two structures over `X, Y, Z`: three pairwise latent causes, and a
/// single latent cause of all three.
pub fn triangle_structures() -> (LatentStructure, LatentStructure) {
    let names: Vec<String> = ["X", "Y", "Z"].map(String::from).to_vec();
    let pair = |a, b| VarSet::from_iter([a, b]);
    let pairwise = LatentStructure::new(names.clone(), &[], &[pair(0, 1), pair(1, 2), pair(0, 2)])
        .expect("valid structure");
    let triple = LatentStructure::new(names, &[], &[VarSet::full(3)]).expect("valid structure");
    (pairwise, triple)
}

/// Parameters: one row per parent assignment for every vertex.
type Params = Vec<Vec<Vec<f64>>>;

fn check_shape(s: &LatentStructure) -> Result<()> {
    if s.n_observed() != 3 {
        return Err(Error::OutOfRange("the agreement objective needs exactly three observed variables".into()));
    }
    Ok(())
}

fn cards(s: &LatentStructure, k: usize) -> Vec<usize> {
    (0..s.dag().len()).map(|v| if v < s.n_observed() { 2 } else { k }).collect()
}

fn row_count(s: &LatentStructure, cards: &[usize], v: usize) -> usize {
    s.dag().parents(v).iter().map(|p| cards[p]).product()
}

fn evaluate(s: &LatentStructure, cards: &[usize], params: &Params) -> f64 {
    let m = CausalModel::new(s.dag().clone(), cards.to_vec(), params.clone()).expect("normalized parameters");
    let obs = m.observed_joint(s.observed()).expect("observed variables exist");
    agreement(obs.probs())
}

fn random_params(s: &LatentStructure, cards: &[usize], rng: &mut impl Rng) -> Params {
    (0..cards.len())
        .map(|v| {
            (0..row_count(s, cards, v))
                .map(|_| {
                    if v < s.n_observed() {
                        let q = match rng.gen_range(0..3) {
                            0 => 0.0,
                            1 => 1.0,
                            _ => rng.gen::<f64>(),
                        };
                        vec![q, 1.0 - q]
                    } else {
                        let w: Vec<f64> = (0..cards[v]).map(|_| rng.gen::<f64>() + 1e-9).collect();
                        let t: f64 = w.iter().sum();
                        w.iter().map(|x| x / t).collect()
                    }
                })
                .collect()
        })
        .collect()
}

/// Coordinate hill climbing with a halving step.
fn refine(s: &LatentStructure, cards: &[usize], mut params: Params, grid: usize) -> (f64, Params) {
    let mut best = evaluate(s, cards, &params);
    let mut step = 1.0 / grid as f64;
    while step > 1e-6 {
        let mut improved = false;
        for v in 0..params.len() {
            for r in 0..params[v].len() {
                for i in 0..params[v][r].len() {
                    for dir in [1.0, -1.0] {
                        let mut cand = params.clone();
                        let row = &mut cand[v][r];
                        if row.len() == 2 {
                            let q = (row[0] + dir * step).clamp(0.0, 1.0);
                            *row = vec![q, 1.0 - q];
                        } else {
                            row[i] = (row[i] + dir * step).max(0.0);
                            let t: f64 = row.iter().sum();
                            if t <= 0.0 {
                                continue;
                            }
                            row.iter_mut().for_each(|x| *x /= t);
                        }
                        let val = evaluate(s, cards, &cand);
                        if val > best + 1e-15 {
                            best = val;
                            params = cand;
                            improved = true;
                        }
                    }
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (best, params)
}

/// Seeded random search followed by refinement of the best few draws.
pub fn max_agreement(s: &LatentStructure, latent_card: usize, samples: usize, grid: usize, seed: u64) -> Result<f64> {
    check_shape(s)?;
    if latent_card == 0 || grid == 0 {
        return Err(Error::OutOfRange("latent cardinality and grid must be positive".into()));
    }
    let cards = cards(s, latent_card);
    let mut draws: Vec<(f64, Params)> = (0..samples.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let p = random_params(s, &cards, &mut rng);
            (evaluate(s, &cards, &p), p)
        })
        .collect();
    draws.sort_by(|a, b| b.0.total_cmp(&a.0));
    draws.truncate(8);
    let best = draws
        .into_par_iter()
        .map(|(_, p)| refine(s, &cards, p, grid).0)
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max);
    Ok(best)
}

/// Exact optimum of the triangle with binary latents and deterministic
/// observed responses, over latent priors on the `1/grid` lattice.
pub fn pairwise_deterministic_max(pairwise: &LatentStructure, grid: usize) -> Result<f64> {
    check_shape(pairwise)?;
    let latents: Vec<usize> = pairwise.latents().collect();
    if latents.len() != 3 || pairwise.latent_children().iter().any(|c| c.len() != 2) {
        return Err(Error::OutOfRange("expected three pairwise latents".into()));
    }
    // bit positions of each observed vertex's two latent parents
    let parent_bits: Vec<[usize; 2]> = (0..3)
        .map(|o| {
            let ps: Vec<usize> = latents.iter().enumerate().filter(|(_, &l)| pairwise.dag().has_edge(l, o)).map(|(i, _)| i).collect();
            [ps[0], ps[1]]
        })
        .collect();
    let best = (0..4096usize)
        .into_par_iter()
        .map(|code| {
            let f = [code & 15, (code >> 4) & 15, (code >> 8) & 15];
            // which latent assignments produce 000 and 111
            let (mut zeros, mut ones) = (Vec::new(), Vec::new());
            for lam in 0..8usize {
                let out: Vec<usize> = (0..3)
                    .map(|o| {
                        let [i, j] = parent_bits[o];
                        let idx = ((lam >> i) & 1) * 2 + ((lam >> j) & 1);
                        (f[o] >> idx) & 1
                    })
                    .collect();
                if out == [0, 0, 0] {
                    zeros.push(lam);
                } else if out == [1, 1, 1] {
                    ones.push(lam);
                }
            }
            let mut local: f64 = 0.0;
            for a in 0..=grid {
                for b in 0..=grid {
                    for c in 0..=grid {
                        let q = [a as f64 / grid as f64, b as f64 / grid as f64, c as f64 / grid as f64];
                        let pr = |lam: usize| (0..3).map(|i| if (lam >> i) & 1 == 0 { q[i] } else { 1.0 - q[i] }).product::<f64>();
                        let p0: f64 = zeros.iter().map(|&l| pr(l)).sum();
                        let p1: f64 = ones.iter().map(|&l| pr(l)).sum();
                        local = local.max(p0.min(0.5) + p1.min(0.5));
                    }
                }
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// Searches both structures for the best agreement with perfectly
/// correlated unbiased bits.
pub fn expressive_gap_demo(pairwise: &LatentStructure, triple: &LatentStructure, config: GapConfig) -> Result<GapResult> {
    let triple_max = max_agreement(triple, 2, config.samples, config.grid, config.seed)?;
    let pairwise_max = max_agreement(pairwise, config.latent_card, config.samples, config.grid, config.seed)?;
    let pairwise_deterministic_max = pairwise_deterministic_max(pairwise, config.grid)?;
    Ok(GapResult { pairwise_max, triple_max, pairwise_deterministic_max, config })
}
