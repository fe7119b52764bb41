use crate::distributions::ci::{CiSet, CiStatement};
use crate::graphs::Dag;

/// The local Markov statements `(v ⊥ Nd(v)∖Pa(v) | Pa(v))`, one per vertex
/// whose non-descendants are not all parents.
pub fn markov_ci(dag: &Dag) -> CiSet {
    let mut out = CiSet::new(dag.names().to_vec());
    for v in 0..dag.len() {
        let r = dag.relatives(v).expect("vertex of the graph");
        let rest = r.nondescendants.difference(r.parents);
        if !rest.is_empty() {
            let s = CiStatement::new(crate::varset::VarSet::singleton(v), rest, r.parents)
                .expect("parents, non-descendants and v are disjoint");
            out.insert(s);
        }
    }
    out
}
