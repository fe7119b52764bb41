use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::dsep::PairTable;
use crate::graphs::Dag;
use crate::varset::VarSet;

/// A causal structure whose vertices are split into observed variables
/// (the first `n_observed` vertices) and latent common causes.
///
/// Latent vertices are exogenous and each has at least two observed
/// children. They are named `L1`, `L2`, … in creation order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatentStructure {
    dag: Dag,
    n_observed: usize,
}

/// Identity of a latent structure up to renaming of its latents:
/// observed edges plus the sorted list of latent child sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StructureKey {
    pub edges: Vec<(usize, usize)>,
    pub latents: Vec<VarSet>,
}

impl LatentStructure {
    /// Builds a structure from observed names, directed observed edges and
    /// one child set per latent.
    pub fn new(observed: Vec<String>, edges: &[(usize, usize)], latents: &[VarSet]) -> Result<Self> {
        let n = observed.len();
        let mut dag = Dag::from_indices(observed, edges)?;
        let obs = VarSet::full(n);
        let mut counter = 1;
        for &children in latents {
            if !children.is_subset(obs) {
                return Err(Error::Schema {
                    path: "latent".into(),
                    msg: "latent children must be observed".into(),
                });
            }
            if children.len() < 2 {
                return Err(Error::Schema {
                    path: "latent".into(),
                    msg: "a latent needs at least two observed children".into(),
                });
            }
            let mut name = format!("L{counter}");
            while dag.names().contains(&name) {
                counter += 1;
                name = format!("L{counter}");
            }
            counter += 1;
            let l = dag.add_vertex(&name, VarSet::EMPTY)?;
            for c in children.iter() {
                dag.add_edge(l, c)?;
            }
        }
        Ok(LatentStructure { dag, n_observed: n })
    }

    /// Wraps a DAG whose trailing vertices are latent; validates that every
    /// latent is an exogenous common cause of two or more observed vertices.
    pub fn from_dag(dag: Dag, n_observed: usize) -> Result<Self> {
        let obs = VarSet::full(n_observed);
        for l in n_observed..dag.len() {
            if !dag.is_exogenous(l) {
                return Err(Error::Schema {
                    path: dag.name(l).into(),
                    msg: "latent vertices must be exogenous".into(),
                });
            }
            let ch = dag.children(l);
            if !ch.is_subset(obs) || ch.len() < 2 {
                return Err(Error::Schema {
                    path: dag.name(l).into(),
                    msg: "a latent must be a common cause of at least two observed vertices".into(),
                });
            }
        }
        Ok(LatentStructure { dag, n_observed })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn n_observed(&self) -> usize {
        self.n_observed
    }

    pub fn observed(&self) -> VarSet {
        VarSet::full(self.n_observed)
    }

    pub fn observed_names(&self) -> &[String] {
        &self.dag.names()[..self.n_observed]
    }

    pub fn latents(&self) -> impl Iterator<Item = usize> + '_ {
        self.n_observed..self.dag.len()
    }

    pub fn latent_children(&self) -> Vec<VarSet> {
        self.latents().map(|l| self.dag.children(l)).collect()
    }

    pub fn observed_edges(&self) -> Vec<(usize, usize)> {
        self.dag
            .edges()
            .into_iter()
            .filter(|&(p, _)| p < self.n_observed)
            .collect()
    }

    pub fn key(&self) -> StructureKey {
        let mut latents = self.latent_children();
        latents.sort();
        StructureKey { edges: self.observed_edges(), latents }
    }

    /// Every latent confounds exactly two observed variables.
    pub fn is_pairwise(&self) -> bool {
        self.latent_children().iter().all(|c| c.len() == 2)
    }

    /// Observed variables joined by a direct edge or a shared latent.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.dag.adjacent(a, b)
            || self
                .latent_children()
                .iter()
                .any(|c| c.contains(a) && c.contains(b))
    }

    /// Honors `(before, after)` constraints: `after` is never an ancestor
    /// of `before`.
    pub fn respects(&self, constraints: &[(usize, usize)]) -> bool {
        constraints
            .iter()
            .all(|&(b, a)| !self.dag.ancestors_of(VarSet::singleton(b)).contains(a))
    }

    /// True when every pair of non-adjacent observed variables can be
    /// d-separated by some set of observed variables, i.e. the structure has
    /// no inducing path between non-adjacent observed variables.
    pub fn is_maximal(&self) -> bool {
        let obs: Vec<usize> = (0..self.n_observed).collect();
        let table = PairTable::build(&self.dag, &obs);
        for a in 0..self.n_observed {
            for b in (a + 1)..self.n_observed {
                if !self.adjacent(a, b) && !table.separable(a, b) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for LatentStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.dag.names();
        let mut parts: Vec<String> = self
            .observed_edges()
            .iter()
            .map(|&(p, c)| format!("{}→{}", names[p], names[c]))
            .collect();
        for l in self.latents() {
            let ch: Vec<&str> = self.dag.children(l).iter().map(|c| names[c].as_str()).collect();
            parts.push(format!("{}→{{{}}}", names[l], ch.join(",")));
        }
        if parts.is_empty() {
            write!(f, "(no edges)")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

impl fmt::Debug for LatentStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatentStructure({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn invariants_enforced() {
        assert!(LatentStructure::new(names(&["A", "B"]), &[], &[VarSet::from_iter([0])]).is_err());
        let s = LatentStructure::new(names(&["A", "B"]), &[], &[VarSet::from_iter([0, 1])]).unwrap();
        assert_eq!(s.dag().name(2), "L1");
        assert!(s.is_pairwise());
        assert!(s.adjacent(0, 1));

        let mut d = Dag::new(&["A", "B", "L"], &[("L", "A")]).unwrap();
        assert!(LatentStructure::from_dag(d.clone(), 2).is_err());
        d.add_edge(2, 1).unwrap();
        assert!(LatentStructure::from_dag(d, 2).is_ok());
    }

    #[test]
    fn key_ignores_latent_order() {
        let a = VarSet::from_iter([0, 1]);
        let b = VarSet::from_iter([1, 2]);
        let s1 = LatentStructure::new(names(&["X", "Y", "Z"]), &[], &[a, b]).unwrap();
        let s2 = LatentStructure::new(names(&["X", "Y", "Z"]), &[], &[b, a]).unwrap();
        assert_ne!(s1, s2);
        assert_eq!(s1.key(), s2.key());
    }

    #[test]
    fn inducing_path_is_not_maximal() {
        // X ↔ Y, Y → Z, Y ↔ Z: X and Z are never separable yet non-adjacent
        let s = LatentStructure::new(
            names(&["X", "Y", "Z"]),
            &[(1, 2)],
            &[VarSet::from_iter([0, 1]), VarSet::from_iter([1, 2])],
        )
        .unwrap();
        assert!(!s.is_maximal());
        let chain = LatentStructure::new(names(&["X", "Y", "Z"]), &[(0, 1), (1, 2)], &[]).unwrap();
        assert!(chain.is_maximal());
    }

    #[test]
    fn ordering_constraints() {
        let s = LatentStructure::new(names(&["S", "T"]), &[(1, 0)], &[]).unwrap();
        assert!(!s.respects(&[(0, 1)]));
        assert!(s.respects(&[(1, 0)]));
    }
}
