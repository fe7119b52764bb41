use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::varset::{VarSet, MAX_VARS};

/// A directed acyclic graph over named variables.
///
/// Vertices are dense indices `0..n`; names are unique. Parent sets are
/// stored per vertex, so the edge set has set semantics by construction.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dag {
    names: Vec<String>,
    parents: Vec<VarSet>,
}

/// Family relations of one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relatives {
    pub parents: VarSet,
    /// Proper descendants (the vertex itself excluded).
    pub descendants: VarSet,
    /// Everything that is neither the vertex nor one of its descendants.
    pub nondescendants: VarSet,
}

/// A `(parent, collider, parent)` triple with non-adjacent parents,
/// stored with the smaller parent index first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VStructure {
    pub left: usize,
    pub collider: usize,
    pub right: usize,
}

impl Dag {
    /// Builds a DAG from names and `(parent, child)` edges given by name.
    pub fn new<S: AsRef<str>>(names: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let lookup = |n: &str| {
            names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| Error::UnknownVariable(n.to_string()))
        };
        let idx_edges = edges
            .iter()
            .map(|(p, c)| Ok((lookup(p.as_ref())?, lookup(c.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(names, &idx_edges)
    }

    pub fn from_indices(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        let mut parents = vec![VarSet::EMPTY; names.len()];
        for &(p, c) in edges {
            if p >= names.len() {
                return Err(Error::UnknownVariable(format!("#{p}")));
            }
            if c >= names.len() {
                return Err(Error::UnknownVariable(format!("#{c}")));
            }
            if p == c {
                return Err(Error::SelfLoop(names[p].clone()));
            }
            parents[c].insert(p);
        }
        let dag = Dag { names, parents };
        if let Some(v) = dag.cycle_witness(&[]) {
            return Err(Error::Cycle(dag.names[v].clone()));
        }
        Ok(dag)
    }

    /// An edgeless graph.
    pub fn empty<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::new(names, &[])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn all(&self) -> VarSet {
        VarSet::full(self.len())
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn set_of(&self, names: &[&str]) -> Result<VarSet> {
        names.iter().map(|n| self.index(n)).collect()
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVariable(format!("#{v}")))
        }
    }

    pub fn parents(&self, v: usize) -> VarSet {
        self.parents[v]
    }

    pub fn children(&self, v: usize) -> VarSet {
        (0..self.len()).filter(|&c| self.parents[c].contains(v)).collect()
    }

    pub fn has_edge(&self, parent: usize, child: usize) -> bool {
        self.parents[child].contains(parent)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    pub fn is_exogenous(&self, v: usize) -> bool {
        self.parents[v].is_empty()
    }

    /// Edges sorted by `(parent, child)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|c| self.parents[c].iter().map(move |p| (p, c)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(|p| p.len()).sum()
    }

    /// Proper descendants of `v`.
    pub fn descendants(&self, v: usize) -> VarSet {
        let mut seen = VarSet::EMPTY;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for c in self.children(u).iter() {
                if !seen.contains(c) {
                    seen.insert(c);
                    stack.push(c);
                }
            }
        }
        seen
    }

    /// Ancestors of every vertex in `set`, the set itself included.
    pub fn ancestors_of(&self, set: VarSet) -> VarSet {
        let mut seen = set;
        let mut stack: Vec<usize> = set.to_vec();
        while let Some(u) = stack.pop() {
            for p in self.parents[u].iter() {
                if !seen.contains(p) {
                    seen.insert(p);
                    stack.push(p);
                }
            }
        }
        seen
    }

    pub fn relatives(&self, v: usize) -> Result<Relatives> {
        self.check(v)?;
        let descendants = self.descendants(v);
        Ok(Relatives {
            parents: self.parents[v],
            descendants,
            nondescendants: self.all().difference(descendants).without(v),
        })
    }

    /// Returns a vertex on a directed cycle of `edges ∪ extra`, if any.
    fn cycle_witness(&self, extra: &[(usize, usize)]) -> Option<usize> {
        let n = self.len();
        let mut preds = self.parents.clone();
        for &(b, a) in extra {
            preds[a].insert(b);
        }
        let mut indeg: Vec<usize> = preds.iter().map(|p| p.len()).collect();
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut done = VarSet::EMPTY;
        while let Some(u) = ready.pop() {
            done.insert(u);
            for c in 0..n {
                if preds[c].contains(u) {
                    indeg[c] -= 1;
                    if indeg[c] == 0 {
                        ready.push(c);
                    }
                }
            }
        }
        VarSet::full(n).difference(done).first()
    }

    /// All total orders consistent with the edges and with the extra
    /// `(before, after)` constraints, in lexicographic order of the index
    /// sequences.
    pub fn topological_orderings(&self, constraints: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
        for &(b, a) in constraints {
            self.check(b)?;
            self.check(a)?;
            if a == b {
                return Err(Error::ContradictoryConstraints);
            }
        }
        if self.cycle_witness(constraints).is_some() {
            return Err(Error::ContradictoryConstraints);
        }
        let mut preds = self.parents.clone();
        for &(b, a) in constraints {
            preds[a].insert(b);
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.len());
        extend_orderings(&preds, VarSet::EMPTY, &mut prefix, &mut out);
        Ok(out)
    }

    /// Every v-structure `P1 → C ← P2` with `P1`, `P2` non-adjacent.
    pub fn v_structures(&self) -> Vec<VStructure> {
        let mut out = Vec::new();
        for c in 0..self.len() {
            let ps = self.parents[c].to_vec();
            for (i, &a) in ps.iter().enumerate() {
                for &b in &ps[i + 1..] {
                    if !self.adjacent(a, b) {
                        out.push(VStructure { left: a, collider: c, right: b });
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Appends a vertex with the given parents; fails if the name is taken.
    pub fn add_vertex(&mut self, name: &str, parents: VarSet) -> Result<usize> {
        if self.names.iter().any(|n| n == name) {
            return Err(Error::DuplicateVariable(name.to_string()));
        }
        if self.len() >= MAX_VARS {
            return Err(Error::TooManyVariables(self.len() + 1));
        }
        if !parents.is_subset(self.all()) {
            return Err(Error::UnknownVariable(format!("{parents:?}")));
        }
        self.names.push(name.to_string());
        self.parents.push(parents);
        Ok(self.len() - 1)
    }

    /// Adds `parent → child`, rejecting self-loops and cycles.
    pub fn add_edge(&mut self, parent: usize, child: usize) -> Result<()> {
        self.check(parent)?;
        self.check(child)?;
        if parent == child {
            return Err(Error::SelfLoop(self.names[parent].clone()));
        }
        if self.descendants(child).with(child).contains(parent) {
            return Err(Error::Cycle(self.names[parent].clone()));
        }
        self.parents[child].insert(parent);
        Ok(())
    }

    /// The complete DAG of a total order: every earlier vertex is a parent
    /// of every later one.
    pub fn complete(names: Vec<String>, order: &[usize]) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, &a) in order.iter().enumerate() {
            for &b in &order[i + 1..] {
                edges.push((a, b));
            }
        }
        Self::from_indices(names, &edges)
    }

    /// Human-readable edge list such as `S→T, T→C`.
    pub fn describe(&self) -> String {
        let edges = self.edges();
        if edges.is_empty() {
            return "(no edges)".to_string();
        }
        edges
            .iter()
            .map(|&(p, c)| format!("{}→{}", self.names[p], self.names[c]))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn extend_orderings(preds: &[VarSet], placed: VarSet, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == preds.len() {
        out.push(prefix.clone());
        return;
    }
    for v in 0..preds.len() {
        if !placed.contains(v) && preds[v].is_subset(placed) {
            prefix.push(v);
            extend_orderings(preds, placed.with(v), prefix, out);
            prefix.pop();
        }
    }
}

/// Parses constraints like `S<T` into index pairs.
pub fn parse_order_constraints<S: AsRef<str>>(names: &[String], specs: &[S]) -> Result<Vec<(usize, usize)>> {
    let find = |n: &str| {
        names
            .iter()
            .position(|x| x == n.trim())
            .ok_or_else(|| Error::UnknownVariable(n.trim().to_string()))
    };
    specs
        .iter()
        .map(|s| {
            let s = s.as_ref();
            let (a, b) = s
                .split_once('<')
                .ok_or_else(|| Error::BadStatement(format!("ordering constraint `{s}`")))?;
            Ok((find(a)?, find(b)?))
        })
        .collect()
}
