use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::LatentStructure;
use crate::varset::{VarSet, MAX_VARS};

/// Edge marks of a pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    /// `a → b`: direct cause, no confounder.
    Directed,
    /// `a o→ b`: direct cause, common cause, or both.
    CircleTail,
    /// `a ↔ b`: common cause only.
    Bidirected,
    /// `a o–o b`: any of the five ways two variables can be connected.
    CircleCircle,
}

/// One link of a pattern. `Directed` and `CircleTail` links point from `a`
/// to `b`; symmetric links are stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub mark: Mark,
}

impl Link {
    /// Whether this link carries an arrowhead into `v`.
    pub fn head_at(&self, v: usize) -> bool {
        match self.mark {
            Mark::Directed | Mark::CircleTail => v == self.b,
            Mark::Bidirected => v == self.a || v == self.b,
            Mark::CircleCircle => false,
        }
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// A mixed graph over observed variables summarizing a set of latent
/// variable causal structures.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pattern {
    names: Vec<String>,
    links: BTreeMap<(usize, usize), Link>,
}

/// How a single link is realized in a concrete structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Realization {
    Edge(usize, usize),
    Latent,
    Both(usize, usize),
}

impl Realization {
    fn edge(self) -> Option<(usize, usize)> {
        match self {
            Realization::Edge(p, c) | Realization::Both(p, c) => Some((p, c)),
            Realization::Latent => None,
        }
    }

    fn latent(self) -> bool {
        !matches!(self, Realization::Edge(..))
    }

    fn head_at(self, v: usize) -> bool {
        self.latent() || self.edge().is_some_and(|(_, c)| c == v)
    }
}

/// Outcome of expanding a pattern, with the counts needed for reporting.
#[derive(Clone, Debug)]
pub struct Expansion {
    /// Number of link-realization combinations before filtering.
    pub combinations: usize,
    /// Combinations discarded because their observed edges form a cycle.
    pub cyclic: usize,
    /// Combinations discarded because they create a new v-structure.
    pub new_v_structures: usize,
    pub structures: Vec<LatentStructure>,
}

impl Pattern {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len()));
        }
        Ok(Pattern { names, links: BTreeMap::new() })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Adds or replaces the link between `a` and `b`.
    pub fn set_link(&mut self, a: usize, b: usize, mark: Mark) -> Result<()> {
        if a >= self.len() || b >= self.len() {
            return Err(Error::UnknownVariable(format!("#{}", a.max(b))));
        }
        if a == b {
            return Err(Error::SelfLoop(self.names[a].clone()));
        }
        let (a, b) = match mark {
            Mark::Bidirected | Mark::CircleCircle => (a.min(b), a.max(b)),
            _ => (a, b),
        };
        self.links.insert((a.min(b), a.max(b)), Link { a, b, mark });
        Ok(())
    }

    pub fn remove_link(&mut self, a: usize, b: usize) {
        self.links.remove(&(a.min(b), a.max(b)));
    }

    pub fn link(&self, a: usize, b: usize) -> Option<&Link> {
        self.links.get(&(a.min(b), a.max(b)))
    }

    pub fn links(&self) -> impl Iterator<Item = &Link> {
        self.links.values()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.link(a, b).is_some()
    }

    pub fn neighbors(&self, v: usize) -> VarSet {
        self.links()
            .filter(|l| l.a == v || l.b == v)
            .map(|l| l.other(v))
            .collect()
    }

    /// Collisions `(p1, c, p2)`, `p1 < p2` non-adjacent, where both links
    /// already carry arrowheads into `c` in the pattern itself.
    pub fn colliders(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for c in 0..self.len() {
            let heads: Vec<usize> = self
                .neighbors(c)
                .iter()
                .filter(|&n| self.link(n, c).is_some_and(|l| l.head_at(c)))
                .collect();
            for (i, &p) in heads.iter().enumerate() {
                for &q in &heads[i + 1..] {
                    if !self.adjacent(p, q) {
                        out.push((p, c, q));
                    }
                }
            }
        }
        out
    }

    fn realizations(link: &Link) -> Vec<Realization> {
        use Realization::*;
        let (a, b) = (link.a, link.b);
        match link.mark {
            Mark::Directed => vec![Edge(a, b)],
            Mark::CircleTail => vec![Edge(a, b), Latent, Both(a, b)],
            Mark::Bidirected => vec![Latent],
            Mark::CircleCircle => vec![Edge(a, b), Edge(b, a), Latent, Both(a, b), Both(b, a)],
        }
    }

    /// Substitutes every link by its realizations and keeps the acyclic
    /// combinations that create no v-structure absent from
    /// [`Pattern::colliders`]. Latent common causes become fresh two-child
    /// latent vertices named in link order.
    pub fn expand(&self) -> Expansion {
        let links: Vec<Link> = self.links().copied().collect();
        let options: Vec<Vec<Realization>> = links.iter().map(Self::realizations).collect();
        let total: usize = options.iter().map(Vec::len).product();
        let existing = self.colliders();
        let mut out = Expansion {
            combinations: total,
            cyclic: 0,
            new_v_structures: 0,
            structures: Vec::new(),
        };
        let mut choice = vec![0usize; links.len()];
        for _ in 0..total {
            let picked: Vec<Realization> = choice.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            match self.realize(&links, &picked, &existing) {
                Ok(s) => out.structures.push(s),
                Err(Rejection::Cyclic) => out.cyclic += 1,
                Err(Rejection::NewVStructure) => out.new_v_structures += 1,
            }
            // mixed-radix increment, last link fastest
            for k in (0..choice.len()).rev() {
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
            }
        }
        out
    }

    fn realize(
        &self,
        links: &[Link],
        picked: &[Realization],
        existing: &[(usize, usize, usize)],
    ) -> std::result::Result<LatentStructure, Rejection> {
        // new v-structures over observed vertices
        for c in 0..self.len() {
            let heads: Vec<usize> = links
                .iter()
                .zip(picked)
                .filter(|(l, r)| (l.a == c || l.b == c) && r.head_at(c))
                .map(|(l, _)| l.other(c))
                .collect();
            for (i, &p) in heads.iter().enumerate() {
                for &q in &heads[i + 1..] {
                    let (p, q) = (p.min(q), p.max(q));
                    if !self.adjacent(p, q) && !existing.contains(&(p, c, q)) {
                        return Err(Rejection::NewVStructure);
                    }
                }
            }
        }
        let edges: Vec<(usize, usize)> = picked.iter().filter_map(|r| r.edge()).collect();
        let latents: Vec<VarSet> = links
            .iter()
            .zip(picked)
            .filter(|(_, r)| r.latent())
            .map(|(l, _)| VarSet::from_iter([l.a, l.b]))
            .collect();
        LatentStructure::new(self.names.clone(), &edges, &latents).map_err(|_| Rejection::Cyclic)
    }
}

enum Rejection {
    Cyclic,
    NewVStructure,
}

/// Free-function form of [`Pattern::expand`], returning only the surviving
/// structures.
pub fn expand_pattern(p: &Pattern) -> Vec<LatentStructure> {
    p.expand().structures
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.links.is_empty() {
            return write!(f, "(no links)");
        }
        let parts: Vec<String> = self
            .links()
            .map(|l| {
                let (a, b) = (&self.names[l.a], &self.names[l.b]);
                match l.mark {
                    Mark::Directed => format!("{a} → {b}"),
                    Mark::CircleTail => format!("{a} o→ {b}"),
                    Mark::Bidirected => format!("{a} ↔ {b}"),
                    Mark::CircleCircle => format!("{a} o–o {b}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn smoking() -> Pattern {
        let mut p = Pattern::new(names(&["S", "T", "C"])).unwrap();
        p.set_link(0, 1, Mark::CircleCircle).unwrap();
        p.set_link(1, 2, Mark::CircleCircle).unwrap();
        p
    }

    #[test]
    fn smoking_pattern_expands_to_nine_of_twenty_five() {
        let e = smoking().expand();
        assert_eq!(e.combinations, 25);
        assert_eq!(e.new_v_structures, 16);
        assert_eq!(e.cyclic, 0);
        assert_eq!(e.structures.len(), 9);
    }

    #[test]
    fn single_directed_edge() {
        let mut p = Pattern::new(names(&["A", "B"])).unwrap();
        p.set_link(0, 1, Mark::Directed).unwrap();
        let e = p.expand();
        assert_eq!(e.structures.len(), 1);
        assert_eq!(e.structures[0].observed_edges(), vec![(0, 1)]);
    }

    #[test]
    fn circle_circle_links_multiply_before_filtering() {
        for k in 1..=3usize {
            // a star around vertex 0 has k circle-circle links
            let n = k + 1;
            let mut p = Pattern::new((0..n).map(|i| format!("V{i}")).collect()).unwrap();
            for i in 1..n {
                p.set_link(0, i, Mark::CircleCircle).unwrap();
            }
            assert_eq!(p.expand().combinations, 5usize.pow(k as u32));
        }
    }

    #[test]
    fn circle_tail_has_three_realizations() {
        let mut p = Pattern::new(names(&["A", "B"])).unwrap();
        p.set_link(0, 1, Mark::CircleTail).unwrap();
        let keys: Vec<_> = p.expand().structures.iter().map(|s| s.key()).collect();
        assert_eq!(keys.len(), 3);
        assert!(keys.iter().all(|k| k.edges.iter().all(|&e| e == (0, 1))));
    }

    #[test]
    fn bell_pattern_contains_local_causality() {
        let mut p = Pattern::new(names(&["S", "T", "A", "B"])).unwrap();
        p.set_link(0, 2, Mark::CircleTail).unwrap();
        p.set_link(1, 3, Mark::CircleTail).unwrap();
        p.set_link(2, 3, Mark::Bidirected).unwrap();
        assert_eq!(p.colliders(), vec![(0, 2, 3), (1, 3, 2)]);
        let e = p.expand();
        assert_eq!(e.structures.len(), 9);
        let local = LatentStructure::new(names(&["S", "T", "A", "B"]), &[(0, 2), (1, 3)], &[VarSet::from_iter([2, 3])]).unwrap();
        assert!(e.structures.iter().any(|s| s.key() == local.key()));
    }

    #[test]
    fn display() {
        assert_eq!(smoking().to_string(), "S o–o T, T o–o C");
    }
}
