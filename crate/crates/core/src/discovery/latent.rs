//! Brute-force enumeration of latent-variable structures reproducing a CI
//! set. Exponential; used as the reference for the pattern algorithm.

use rayon::prelude::*;

use crate::distributions::{CiSet, CiStatement};
use crate::error::{Error, Result};
use crate::graphs::{LatentStructure, PairTable};
use crate::varset::VarSet;

/// Largest observed universe accepted by [`enumerate_latent_structures`].
pub const MAX_OBSERVED: usize = 4;

/// Which latent common causes the enumeration may introduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatentMode {
    /// Each latent confounds exactly two observed variables, at most one
    /// latent per pair.
    Pairwise,
    /// A latent may confound any set of two or more observed variables.
    Unrestricted,
}

/// Whether the d-separation statements of `s` over its observed variables
/// are exactly `ci` (given over the same universe, in the same order).
pub fn reproduces(s: &LatentStructure, ci: &CiSet) -> bool {
    let obs: Vec<usize> = (0..s.n_observed()).collect();
    let table = PairTable::build(s.dag(), &obs);
    CiStatement::universe(obs.len())
        .iter()
        .all(|st| table.holds(st) == ci.contains(st))
}

/// Every acyclic structure over `observed` (directed edges among observed
/// variables plus up to `max_latents` latent common causes) whose
/// d-separation statements over `observed` equal `ci`.
///
/// Results are sorted by [`LatentStructure::key`].
pub fn enumerate_latent_structures(
    ci: &CiSet,
    observed: &[String],
    mode: LatentMode,
    max_latents: usize,
) -> Result<Vec<LatentStructure>> {
    let n = observed.len();
    if n > MAX_OBSERVED {
        return Err(Error::EnumerationTooLarge(format!(
            "{n} observed variables (limit {MAX_OBSERVED})"
        )));
    }
    let ci = ci.reindexed(observed)?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
    let groups: Vec<VarSet> = match mode {
        LatentMode::Pairwise => pairs.iter().map(|&(a, b)| VarSet::from_iter([a, b])).collect(),
        LatentMode::Unrestricted => VarSet::full(n).subsets().filter(|s| s.len() >= 2).collect(),
    };
    if mode == LatentMode::Pairwise && max_latents > pairs.len() {
        return Err(Error::OutOfRange(format!(
            "at most {} pairwise latents over {n} variables",
            pairs.len()
        )));
    }
    let latent_sets: Vec<Vec<VarSet>> = (0u64..1 << groups.len())
        .filter(|m| m.count_ones() as usize <= max_latents)
        .map(|m| groups.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, g)| *g).collect())
        .collect();
    let edge_choices = 3usize.pow(pairs.len() as u32);

    let mut out: Vec<LatentStructure> = (0..edge_choices)
        .into_par_iter()
        .flat_map_iter(|code| {
            let mut edges = Vec::new();
            let mut c = code;
            for &(a, b) in &pairs {
                match c % 3 {
                    1 => edges.push((a, b)),
                    2 => edges.push((b, a)),
                    _ => {}
                }
                c /= 3;
            }
            let ci = &ci;
            latent_sets.iter().filter_map(move |latents| {
                let s = LatentStructure::new(observed.to_vec(), &edges, latents).ok()?;
                reproduces(&s, ci).then_some(s)
            })
        })
        .collect();
    out.sort_by_key(LatentStructure::key);
    Ok(out)
}
