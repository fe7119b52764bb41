use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::varset::{render_set, VarSet};

/// `(X ⊥ Y | Z)` over variable indices of some universe.
///
/// Stored in canonical form with `X ≤ Y`, so symmetric statements coincide.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CiStatement {
    x: VarSet,
    y: VarSet,
    z: VarSet,
}

impl CiStatement {
    pub fn new(x: VarSet, y: VarSet, z: VarSet) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptySet("X"));
        }
        if y.is_empty() {
            return Err(Error::EmptySet("Y"));
        }
        if !x.is_disjoint(y) || !x.is_disjoint(z) || !y.is_disjoint(z) {
            return Err(Error::OverlappingSets(format!("X={x:?} Y={y:?} Z={z:?}")));
        }
        Ok(Self::canonical(x, y, z))
    }

    fn canonical(x: VarSet, y: VarSet, z: VarSet) -> Self {
        if y < x {
            CiStatement { x: y, y: x, z }
        } else {
            CiStatement { x, y, z }
        }
    }

    /// `(x ⊥ y | z)` for single variables.
    pub fn pair(x: usize, y: usize, z: VarSet) -> Result<Self> {
        Self::new(VarSet::singleton(x), VarSet::singleton(y), z)
    }

    pub fn x(&self) -> VarSet {
        self.x
    }
    pub fn y(&self) -> VarSet {
        self.y
    }
    pub fn z(&self) -> VarSet {
        self.z
    }

    pub fn vars(&self) -> VarSet {
        self.x.union(self.y).union(self.z)
    }

    /// Maps every index through `f`.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        let m = |s: VarSet| s.iter().map(&f).collect::<VarSet>();
        Self::canonical(m(self.x), m(self.y), m(self.z))
    }

    /// Every canonical statement over `n` variables: all disjoint triples
    /// with `X`, `Y` non-empty, in canonical order.
    pub fn universe(n: usize) -> Vec<CiStatement> {
        let mut out = BTreeSet::new();
        let total = 4usize.pow(n as u32);
        for code in 0..total {
            let (mut x, mut y, mut z) = (VarSet::EMPTY, VarSet::EMPTY, VarSet::EMPTY);
            let mut c = code;
            for v in 0..n {
                match c % 4 {
                    1 => x.insert(v),
                    2 => y.insert(v),
                    3 => z.insert(v),
                    _ => {}
                }
                c /= 4;
            }
            if !x.is_empty() && !y.is_empty() && x < y {
                out.insert(CiStatement { x, y, z });
            }
        }
        out.into_iter().collect()
    }

    /// Statements `(x ⊥ y | Z)` with singleton sides over `n` variables.
    pub fn singleton_universe(n: usize) -> Vec<CiStatement> {
        let full = VarSet::full(n);
        let mut out = BTreeSet::new();
        for x in 0..n {
            for y in (x + 1)..n {
                for z in full.without(x).without(y).subsets() {
                    out.insert(Self::canonical(VarSet::singleton(x), VarSet::singleton(y), z));
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn render(&self, names: &[String]) -> String {
        let x = render_set(self.x, names);
        let y = render_set(self.y, names);
        if self.z.is_empty() {
            format!("({x} ⊥ {y})")
        } else {
            format!("({x} ⊥ {y} | {})", render_set(self.z, names))
        }
    }
}

/// A canonical set of CI statements over a named universe of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CiSet {
    names: Vec<String>,
    stmts: BTreeSet<CiStatement>,
}

impl CiSet {
    pub fn new(names: Vec<String>) -> Self {
        CiSet { names, stmts: BTreeSet::new() }
    }

    pub fn from_statements(names: Vec<String>, stmts: impl IntoIterator<Item = CiStatement>) -> Self {
        CiSet { names, stmts: stmts.into_iter().collect() }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn universe_size(&self) -> usize {
        self.names.len()
    }

    pub fn len(&self) -> usize {
        self.stmts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stmts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CiStatement> {
        self.stmts.iter()
    }

    pub fn insert(&mut self, s: CiStatement) -> bool {
        self.stmts.insert(s)
    }

    pub fn contains(&self, s: &CiStatement) -> bool {
        self.stmts.contains(s)
    }

    /// Membership of `(x ⊥ y | z)`; false for malformed triples.
    pub fn holds(&self, x: VarSet, y: VarSet, z: VarSet) -> bool {
        CiStatement::new(x, y, z).is_ok_and(|s| self.contains(&s))
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

    pub fn statement(&self, x: &[&str], y: &[&str], z: &[&str]) -> Result<CiStatement> {
        CiStatement::new(self.set_of(x)?, self.set_of(y)?, self.set_of(z)?)
    }

    pub fn contains_named(&self, x: &[&str], y: &[&str], z: &[&str]) -> Result<bool> {
        Ok(self.contains(&self.statement(x, y, z)?))
    }

    /// The same statements expressed over `names` (a permutation of this
    /// set's universe).
    pub fn reindexed(&self, names: &[String]) -> Result<CiSet> {
        if names.len() != self.names.len() {
            return Err(Error::UniverseMismatch);
        }
        let map: Vec<usize> = self
            .names
            .iter()
            .map(|n| names.iter().position(|m| m == n).ok_or(Error::UniverseMismatch))
            .collect::<Result<_>>()?;
        Ok(CiSet {
            names: names.to_vec(),
            stmts: self.stmts.iter().map(|s| s.map(|i| map[i])).collect(),
        })
    }

    /// Equality up to the order of the variable universe.
    pub fn same_as(&self, other: &CiSet) -> bool {
        match other.reindexed(&self.names) {
            Ok(o) => o.stmts == self.stmts,
            Err(_) => false,
        }
    }

    /// Statements whose variables all lie in `scope`.
    pub fn restricted(&self, scope: VarSet) -> CiSet {
        CiSet {
            names: self.names.clone(),
            stmts: self.stmts.iter().filter(|s| s.vars().is_subset(scope)).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &CiSet) -> bool {
        match other.reindexed(&self.names) {
            Ok(o) => self.stmts.is_subset(&o.stmts),
            Err(_) => false,
        }
    }

    /// Only statements with single variables on both sides.
    pub fn singleton_part(&self) -> CiSet {
        CiSet {
            names: self.names.clone(),
            stmts: self
                .stmts
                .iter()
                .filter(|s| s.x.len() == 1 && s.y.len() == 1)
                .copied()
                .collect(),
        }
    }

    pub fn render(&self, s: &CiStatement) -> String {
        s.render(&self.names)
    }

    pub fn lines(&self) -> Vec<String> {
        self.stmts.iter().map(|s| s.render(&self.names)).collect()
    }

    /// Least superset closed under symmetry, decomposition, weak union and
    /// contraction (each side ranging over sets).
    pub fn closure(&self) -> CiSet {
        let all = VarSet::full(self.names.len());
        let mut seen: HashSet<CiStatement> = self.stmts.iter().copied().collect();
        let mut queue: VecDeque<CiStatement> = self.stmts.iter().copied().collect();

        fn add(seen: &mut HashSet<CiStatement>, queue: &mut VecDeque<CiStatement>, x: VarSet, y: VarSet, z: VarSet) {
            let s = CiStatement::canonical(x, y, z);
            if seen.insert(s) {
                queue.push_back(s);
            }
        }

        while let Some(s) = queue.pop_front() {
            for (x, y, z) in [(s.x, s.y, s.z), (s.y, s.x, s.z)] {
                // decomposition and weak union on the right-hand side
                for w in y.proper_nonempty_subsets() {
                    add(&mut seen, &mut queue, x, w, z);
                    add(&mut seen, &mut queue, x, w, z.union(y.difference(w)));
                }
                // contraction, s as the first premise:
                // (x ⊥ y | z) ∧ (x ⊥ w | z y) ⇒ (x ⊥ y w | z)
                let free = all.difference(x.union(y).union(z));
                for w in free.subsets().filter(|w| !w.is_empty()) {
                    if seen.contains(&CiStatement::canonical(x, w, z.union(y))) {
                        add(&mut seen, &mut queue, x, y.union(w), z);
                    }
                }
                // s as the second premise: s = (x ⊥ y | z), z = z' ∪ v
                // (x ⊥ v | z') ∧ (x ⊥ y | z' v) ⇒ (x ⊥ v y | z')
                for v in z.subsets().filter(|v| !v.is_empty()) {
                    let rest = z.difference(v);
                    if seen.contains(&CiStatement::canonical(x, v, rest)) {
                        add(&mut seen, &mut queue, x, y.union(v), rest);
                    }
                }
            }
        }
        CiSet { names: self.names.clone(), stmts: seen.into_iter().collect() }
    }

    pub fn is_closed(&self) -> bool {
        self.closure().stmts.len() == self.stmts.len()
    }

    /// Parses a statement such as `A,B _||_ C | D` or `AB ⊥ C | D`.
    pub fn parse_statement(&self, text: &str) -> Result<CiStatement> {
        let bad = || Error::BadStatement(text.to_string());
        let (lhs, rest) = text
            .split_once('⊥')
            .or_else(|| text.split_once("_||_"))
            .ok_or_else(bad)?;
        let (rhs, cond) = match rest.split_once('|') {
            Some((r, c)) => (r, c),
            None => (rest, ""),
        };
        let side = |s: &str| -> Result<VarSet> {
            let s = s.trim().trim_matches(|c| c == '(' || c == ')');
            let mut set = VarSet::EMPTY;
            for tok in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                if let Ok(i) = self.index(tok) {
                    set.insert(i);
                } else {
                    for ch in tok.chars() {
                        set.insert(self.index(&ch.to_string()).map_err(|_| bad())?);
                    }
                }
            }
            Ok(set)
        };
        CiStatement::new(side(lhs)?, side(rhs)?, side(cond)?)
    }
}

impl fmt::Display for CiSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.stmts.is_empty() {
            return write!(f, "no independences");
        }
        write!(f, "{}", self.lines().join(", "))
    }
}

/// Semi-graphoid closure of a generating set.
pub fn semigraphoid_closure(g: &CiSet) -> CiSet {
    g.closure()
}

/// Whether `target` is exactly the semi-graphoid closure of `g`.
pub fn is_generated_by(g: &CiSet, target: &CiSet) -> bool {
    g.closure().same_as(target)
}
