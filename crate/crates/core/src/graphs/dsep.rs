//! d-separation by explicit search over undirected simple paths.
//!
//! A path is blocked by `Z` when one of its interior vertices is a chain or
//! fork vertex in `Z`, or a collider that is neither in `Z` nor an ancestor
//! of a vertex in `Z`. The search extends a path only through open triples,
//! so reaching a target means an unblocked path exists.

use crate::distributions::ci::{CiSet, CiStatement};
use crate::error::{Error, Result};
use crate::graphs::Dag;
use crate::varset::VarSet;

/// Precomputed per-graph data for repeated d-separation queries.
pub struct DsepOracle<'a> {
    dag: &'a Dag,
    children: Vec<VarSet>,
    /// Each vertex with its descendants.
    down: Vec<VarSet>,
}

impl<'a> DsepOracle<'a> {
    pub fn new(dag: &'a Dag) -> Self {
        let n = dag.len();
        let children = (0..n).map(|v| dag.children(v)).collect();
        let down = (0..n).map(|v| dag.descendants(v).with(v)).collect();
        DsepOracle { dag, children, down }
    }

    /// True iff some path between a vertex of `xs` and a vertex of `ys` is
    /// unblocked given `z`. Assumes the three sets are disjoint.
    pub fn connected(&self, xs: VarSet, ys: VarSet, z: VarSet) -> bool {
        // collider at v is open iff v or a descendant of v is in z
        let open_collider: VarSet = (0..self.dag.len())
            .filter(|&v| !self.down[v].is_disjoint(z))
            .collect();
        xs.iter().any(|x| self.search(x, None, VarSet::singleton(x), ys, z, open_collider))
    }

    /// `came_in` records whether the edge used to reach `cur` points into it.
    fn search(
        &self,
        cur: usize,
        came_in: Option<bool>,
        on_path: VarSet,
        ys: VarSet,
        z: VarSet,
        open_collider: VarSet,
    ) -> bool {
        let steps = self
            .dag
            .parents(cur)
            .iter()
            .map(|p| (p, false))
            .chain(self.children[cur].iter().map(|c| (c, true)));
        for (next, next_in) in steps {
            if on_path.contains(next) {
                continue;
            }
            if let Some(into_cur) = came_in {
                // next_in == false means next → cur
                let collider = into_cur && !next_in;
                let open = if collider {
                    open_collider.contains(cur)
                } else {
                    !z.contains(cur)
                };
                if !open {
                    continue;
                }
            }
            if ys.contains(next) {
                return true;
            }
            if self.search(next, Some(next_in), on_path.with(next), ys, z, open_collider) {
                return true;
            }
        }
        false
    }

    pub fn separated(&self, xs: VarSet, ys: VarSet, z: VarSet) -> bool {
        !self.connected(xs, ys, z)
    }
}

/// Whether `z` d-separates `x` from `y` in `dag`.
pub fn d_separated(dag: &Dag, x: VarSet, y: VarSet, z: VarSet) -> Result<bool> {
    let all = dag.all();
    if !x.union(y).union(z).is_subset(all) {
        return Err(Error::UnknownVariable(format!("{:?}", x.union(y).union(z).difference(all))));
    }
    if x.is_empty() {
        return Err(Error::EmptySet("X"));
    }
    if y.is_empty() {
        return Err(Error::EmptySet("Y"));
    }
    if !x.is_disjoint(y) || !x.is_disjoint(z) || !y.is_disjoint(z) {
        return Err(Error::OverlappingSets(format!("X={x:?} Y={y:?} Z={z:?}")));
    }
    Ok(DsepOracle::new(dag).separated(x, y, z))
}

/// Table of singleton d-separation facts `(x ⊥ y | Z)` over a subset of
/// observed vertices, indexed in the observed universe.
pub(crate) struct PairTable {
    n: usize,
    /// `table[x * n + y][z]` is true iff `(x ⊥ y | z)`
    table: Vec<Vec<bool>>,
}

impl PairTable {
    pub(crate) fn build(dag: &Dag, observed: &[usize]) -> Self {
        let oracle = DsepOracle::new(dag);
        let n = observed.len();
        let full = VarSet::full(n);
        let mut table = vec![Vec::new(); n * n];
        for x in 0..n {
            for y in (x + 1)..n {
                let rest = full.without(x).without(y);
                let mut row = vec![false; 1 << n];
                for zs in rest.subsets() {
                    let z_dag: VarSet = zs.iter().map(|i| observed[i]).collect();
                    row[zs.bits() as usize] = oracle.separated(
                        VarSet::singleton(observed[x]),
                        VarSet::singleton(observed[y]),
                        z_dag,
                    );
                }
                table[x * n + y] = row.clone();
                table[y * n + x] = row;
            }
        }
        PairTable { n, table }
    }

    pub(crate) fn pair(&self, x: usize, y: usize, z: VarSet) -> bool {
        self.table[x * self.n + y][z.bits() as usize]
    }

    /// Set-level separation via the pairwise decomposition property of
    /// d-separation.
    pub(crate) fn holds(&self, s: &CiStatement) -> bool {
        s.x().iter().all(|a| s.y().iter().all(|b| self.pair(a, b, s.z())))
    }

    /// Whether `x` and `y` are separated by some subset of the others.
    pub(crate) fn separable(&self, x: usize, y: usize) -> bool {
        self.table[x * self.n + y].iter().any(|&b| b)
    }
}

/// All d-separation statements among `observed` vertices, as a CI set over
/// the observed names in index order.
pub fn dsep_ci_set(dag: &Dag, observed: VarSet) -> Result<CiSet> {
    if !observed.is_subset(dag.all()) {
        return Err(Error::UnknownVariable(format!("{:?}", observed.difference(dag.all()))));
    }
    let obs = observed.to_vec();
    let names: Vec<String> = obs.iter().map(|&i| dag.name(i).to_string()).collect();
    let table = PairTable::build(dag, &obs);
    let mut out = CiSet::new(names);
    for s in CiStatement::universe(obs.len()) {
        if table.holds(&s) {
            out.insert(s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(g: &Dag, names: &[&str]) -> VarSet {
        g.set_of(names).unwrap()
    }

    #[test]
    fn fig2_y_independent_of_s_given_t() {
        let g = Dag::new(
            &["S", "T", "W", "X", "Y"],
            &[("W", "X"), ("W", "Y"), ("S", "X"), ("T", "X"), ("T", "Y")],
        )
        .unwrap();
        assert!(d_separated(&g, s(&g, &["Y"]), s(&g, &["S"]), s(&g, &["T"])).unwrap());
        // conditioning on the collider X opens S–X–W–Y
        assert!(!d_separated(&g, s(&g, &["Y"]), s(&g, &["S"]), s(&g, &["T", "X"])).unwrap());
    }

    #[test]
    fn collider_and_fork() {
        let col = Dag::new(&["A", "B", "C"], &[("A", "C"), ("B", "C")]).unwrap();
        assert!(d_separated(&col, s(&col, &["A"]), s(&col, &["B"]), VarSet::EMPTY).unwrap());
        assert!(!d_separated(&col, s(&col, &["A"]), s(&col, &["B"]), s(&col, &["C"])).unwrap());

        let fork = Dag::new(&["A", "B", "C"], &[("C", "A"), ("C", "B")]).unwrap();
        assert!(d_separated(&fork, s(&fork, &["A"]), s(&fork, &["B"]), s(&fork, &["C"])).unwrap());
        assert!(!d_separated(&fork, s(&fork, &["A"]), s(&fork, &["B"]), VarSet::EMPTY).unwrap());
    }

    #[test]
    fn descendant_of_collider_opens_path() {
        let g = Dag::new(&["A", "B", "C", "D"], &[("A", "C"), ("B", "C"), ("C", "D")]).unwrap();
        assert!(!d_separated(&g, s(&g, &["A"]), s(&g, &["B"]), s(&g, &["D"])).unwrap());
    }

    #[test]
    fn argument_errors() {
        let g = Dag::empty(&["A", "B"]).unwrap();
        let a = s(&g, &["A"]);
        assert!(matches!(d_separated(&g, a, a, VarSet::EMPTY), Err(Error::OverlappingSets(_))));
        assert!(matches!(d_separated(&g, VarSet::EMPTY, a, VarSet::EMPTY), Err(Error::EmptySet(_))));
    }

    #[test]
    fn dsep_sets_of_small_graphs() {
        let pair = Dag::empty(&["A", "B"]).unwrap();
        let ci = dsep_ci_set(&pair, pair.all()).unwrap();
        assert_eq!(ci.len(), 1);
        assert!(ci.contains_named(&["A"], &["B"], &[]).unwrap());

        // one latent common cause of three observed variables
        let tri = Dag::new(&["X", "Y", "Z", "L"], &[("L", "X"), ("L", "Y"), ("L", "Z")]).unwrap();
        let ci = dsep_ci_set(&tri, tri.set_of(&["X", "Y", "Z"]).unwrap()).unwrap();
        assert!(ci.is_empty());
    }

    #[test]
    fn local_causality_independences() {
        let g = Dag::new(
            &["S", "T", "A", "B", "λ"],
            &[("λ", "A"), ("λ", "B"), ("S", "A"), ("T", "B")],
        )
        .unwrap();
        let ci = dsep_ci_set(&g, g.set_of(&["S", "T", "A", "B"]).unwrap()).unwrap();
        assert!(ci.contains_named(&["S"], &["T"], &[]).unwrap());
        assert!(ci.contains_named(&["A"], &["T"], &["S"]).unwrap());
        assert!(ci.contains_named(&["B"], &["S"], &["T"]).unwrap());
        assert!(!ci.contains_named(&["A"], &["B"], &["S", "T"]).unwrap());
    }
}
