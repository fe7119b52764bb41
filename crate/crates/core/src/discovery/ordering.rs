//! Discovery without latent variables: one minimal DAG per causal ordering.

use rayon::prelude::*;

use crate::distributions::{CiSet, CiStatement};
use crate::error::Result;
use crate::graphs::{dsep_ci_set, Dag};
use crate::varset::VarSet;

/// The DAG that one ordering produces.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderingCandidate {
    pub ordering: Vec<usize>,
    pub dag: Dag,
}

/// Smallest `S ⊆ predecessors` with `(y ⊥ predecessors∖S | S)` in `ci`;
/// ties go to the lexicographically least set. The full predecessor set
/// always qualifies.
pub fn minimal_parent_set(ci: &CiSet, y: usize, predecessors: VarSet) -> VarSet {
    for s in predecessors.subsets_by_size() {
        let rest = predecessors.difference(s);
        if rest.is_empty() {
            return s;
        }
        if let Ok(stmt) = CiStatement::new(VarSet::singleton(y), rest, s) {
            if ci.contains(&stmt) {
                return s;
            }
        }
    }
    predecessors
}

/// Runs every admissible ordering and keeps the per-ordering DAG.
///
/// `ci` must be a closed set over `variables`; constraints are
/// `(before, after)` index pairs into `variables`.
pub fn candidates_by_ordering(
    ci: &CiSet,
    variables: &[String],
    constraints: &[(usize, usize)],
) -> Result<Vec<OrderingCandidate>> {
    let ci = ci.reindexed(variables)?;
    let orderings = Dag::empty(variables)?.topological_orderings(constraints)?;
    orderings
        .into_par_iter()
        .map(|ordering| {
            let mut edges = Vec::new();
            for (i, &y) in ordering.iter().enumerate() {
                let preds: VarSet = ordering[..i].iter().copied().collect();
                for p in minimal_parent_set(&ci, y, preds).iter() {
                    edges.push((p, y));
                }
            }
            let dag = Dag::from_indices(variables.to_vec(), &edges)?;
            Ok(OrderingCandidate { ordering, dag })
        })
        .collect()
}

/// Distinct DAGs over all admissible orderings, sorted by edge list.
pub fn wermuth_lauritzen(ci: &CiSet, variables: &[String], constraints: &[(usize, usize)]) -> Result<Vec<Dag>> {
    let mut dags: Vec<Dag> = candidates_by_ordering(ci, variables, constraints)?
        .into_iter()
        .map(|c| c.dag)
        .collect();
    dags.sort_by_key(|d| d.edges());
    dags.dedup_by_key(|d| d.edges());
    Ok(dags)
}

/// The DAGs whose d-separation statements are exactly `ci`.
pub fn filter_faithful(dags: &[Dag], ci: &CiSet) -> Vec<Dag> {
    dags.iter()
        .filter(|d| dsep_ci_set(d, d.all()).is_ok_and(|s| s.same_as(ci)))
        .cloned()
        .collect()
}
