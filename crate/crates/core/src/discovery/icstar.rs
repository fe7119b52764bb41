//! Pattern discovery with latent variables: skeleton from separability,
//! collider orientation, then mark propagation.

use std::collections::BTreeMap;

use crate::discovery::latent::reproduces;
use crate::distributions::{CiSet, CiStatement};
use crate::error::{Error, Result};
use crate::graphs::{Mark, Pattern};
use crate::varset::{VarSet, MAX_VARS};

/// Patterns with more realization combinations than this are returned
/// without the final consistency check.
const VERIFY_LIMIT: usize = 5usize.pow(6);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Circle,
    Arrow,
    Tail,
}

/// Result of the pattern search, with the separating sets it used.
#[derive(Clone, Debug)]
pub struct IcStar {
    pub pattern: Pattern,
    /// First separating set found (smallest, then lexicographically least)
    /// for every non-adjacent pair `a < b`.
    pub sepsets: BTreeMap<(usize, usize), VarSet>,
}

struct Marks {
    n: usize,
    /// `end[u * n + v]` is the mark at `v` on the link `u – v`.
    end: Vec<Option<End>>,
}

impl Marks {
    fn get(&self, u: usize, v: usize) -> Option<End> {
        self.end[u * self.n + v]
    }

    fn set(&mut self, u: usize, v: usize, e: End) -> bool {
        let slot = &mut self.end[u * self.n + v];
        if *slot == Some(e) {
            return false;
        }
        *slot = Some(e);
        true
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.get(u, v).is_some()
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.adjacent(u, v)).collect()
    }
}

fn sep(sepsets: &BTreeMap<(usize, usize), VarSet>, a: usize, b: usize) -> Option<VarSet> {
    sepsets.get(&(a.min(b), a.max(b))).copied()
}

/// `a *→ b ←* c`, `a *–o d o–* c`, `a`, `c` non-adjacent and `d *–o b`:
/// arrowhead at `b` on `d – b`.
fn definite_non_colliders(marks: &mut Marks) -> bool {
    let n = marks.n;
    let mut changed = false;
    for b in 0..n {
        for d in marks.neighbors(b) {
            if marks.get(d, b) != Some(End::Circle) {
                continue;
            }
            let nb = marks.neighbors(b);
            let found = nb.iter().any(|&a| {
                nb.iter().any(|&c| {
                    a < c
                        && a != d
                        && c != d
                        && !marks.adjacent(a, c)
                        && marks.get(a, b) == Some(End::Arrow)
                        && marks.get(c, b) == Some(End::Arrow)
                        && marks.get(a, d) == Some(End::Circle)
                        && marks.get(c, d) == Some(End::Circle)
                })
            });
            if found {
                changed |= marks.set(d, b, End::Arrow);
            }
        }
    }
    changed
}

/// Discriminating paths `⟨θ, …, α, β, γ⟩` for `β` with `β o–* γ`: every
/// vertex strictly between `θ` and `β` is a collider on the path and a
/// parent of `γ`, and `θ`, `γ` are non-adjacent. Then `β *→ γ` when `β`
/// separates `θ` from `γ`, otherwise `α ↔ β ↔ γ`.
fn discriminating_paths(marks: &mut Marks, sepsets: &BTreeMap<(usize, usize), VarSet>) -> bool {
    let n = marks.n;
    let parent_of = |m: &Marks, a: usize, g: usize| m.get(g, a) == Some(End::Tail) && m.get(a, g) == Some(End::Arrow);
    for beta in 0..n {
        for gamma in marks.neighbors(beta) {
            if marks.get(gamma, beta) != Some(End::Circle) {
                continue;
            }
            for alpha in marks.neighbors(beta) {
                if alpha == gamma || !parent_of(marks, alpha, gamma) || marks.get(beta, alpha) != Some(End::Arrow) {
                    continue;
                }
                // depth-first extension of ⟨…, α, β⟩ backwards
                let mut stack = vec![vec![alpha]];
                while let Some(path) = stack.pop() {
                    let last = *path.last().expect("non-empty path");
                    for theta in marks.neighbors(last) {
                        if theta == beta || theta == gamma || path.contains(&theta) {
                            continue;
                        }
                        if marks.get(theta, last) != Some(End::Arrow) {
                            continue;
                        }
                        if !marks.adjacent(theta, gamma) {
                            let Some(z) = sep(sepsets, theta, gamma) else { continue };
                            return if z.contains(beta) {
                                // β is an ancestor of γ, but the pair may
                                // still share a latent cause
                                marks.set(beta, gamma, End::Arrow)
                            } else {
                                let a = marks.set(alpha, beta, End::Arrow);
                                let b = marks.set(gamma, beta, End::Arrow);
                                marks.set(beta, gamma, End::Arrow) | a | b
                            };
                        }
                        // θ continues the path as an interior collider
                        if parent_of(marks, theta, gamma) && marks.get(last, theta) == Some(End::Arrow) {
                            let mut longer = path.clone();
                            longer.push(theta);
                            stack.push(longer);
                        }
                    }
                }
            }
        }
    }
    false
}

/// See [`icstar`]; returns only the pattern.
pub fn icstar_pattern(ci: &CiSet, observed: &[String]) -> Result<Pattern> {
    icstar(ci, observed).map(|r| r.pattern)
}

/// Builds the pattern of a closed CI set over `observed`.
///
/// Fails with [`Error::NoFaithfulStructure`] when no realization of the
/// resulting pattern reproduces `ci`.
pub fn icstar(ci: &CiSet, observed: &[String]) -> Result<IcStar> {
    let n = observed.len();
    if n > MAX_VARS {
        return Err(Error::TooManyVariables(n));
    }
    let ci = ci.reindexed(observed)?;
    let full = VarSet::full(n);

    let mut marks = Marks { n, end: vec![None; n * n] };
    let mut sepsets = BTreeMap::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let sep = full.without(a).without(b).subsets_by_size().into_iter().find(|z| {
                ci.contains(&CiStatement::pair(a, b, *z).expect("distinct singletons"))
            });
            match sep {
                Some(z) => {
                    sepsets.insert((a, b), z);
                }
                None => {
                    marks.set(a, b, End::Circle);
                    marks.set(b, a, End::Circle);
                }
            }
        }
    }

    // colliders at unshielded triples whose middle vertex is not in the
    // separating set
    for (&(a, b), &z) in &sepsets {
        for c in 0..n {
            if marks.adjacent(a, c) && marks.adjacent(b, c) && !z.contains(c) {
                marks.set(a, c, End::Arrow);
                marks.set(b, c, End::Arrow);
            }
        }
    }

    // propagation to a fixed point
    loop {
        let mut changed = false;
        for b in 0..n {
            let nb = marks.neighbors(b);
            for &a in &nb {
                for &c in &nb {
                    if a == c {
                        continue;
                    }
                    // a *→ b o–* c with a, c non-adjacent: b → c
                    if !marks.adjacent(a, c)
                        && marks.get(a, b) == Some(End::Arrow)
                        && marks.get(c, b) == Some(End::Circle)
                    {
                        changed |= marks.set(c, b, End::Tail);
                        changed |= marks.set(b, c, End::Arrow);
                    }
                    // a → b *→ c or a *→ b → c, with a *–o c: arrowhead at c
                    if marks.get(a, c) == Some(End::Circle) {
                        let first = marks.get(b, a) == Some(End::Tail)
                            && marks.get(a, b) == Some(End::Arrow)
                            && marks.get(b, c) == Some(End::Arrow);
                        let second = marks.get(a, b) == Some(End::Arrow)
                            && marks.get(c, b) == Some(End::Tail)
                            && marks.get(b, c) == Some(End::Arrow);
                        if first || second {
                            changed |= marks.set(a, c, End::Arrow);
                        }
                    }
                }
            }
        }
        changed |= definite_non_colliders(&mut marks);
        changed |= discriminating_paths(&mut marks, &sepsets);
        if !changed {
            break;
        }
    }

    let mut pattern = Pattern::new(observed.to_vec())?;
    for a in 0..n {
        for b in (a + 1)..n {
            let (Some(at_b), Some(at_a)) = (marks.get(a, b), marks.get(b, a)) else {
                continue;
            };
            let (from, to, mark) = match (at_a, at_b) {
                (End::Arrow, End::Arrow) => (a, b, Mark::Bidirected),
                (End::Tail, End::Arrow) => (a, b, Mark::Directed),
                (End::Arrow, End::Tail) => (b, a, Mark::Directed),
                (End::Circle, End::Arrow) => (a, b, Mark::CircleTail),
                (End::Arrow, End::Circle) => (b, a, Mark::CircleTail),
                _ => (a, b, Mark::CircleCircle),
            };
            pattern.set_link(from, to, mark)?;
        }
    }

    let combinations: usize = pattern
        .links()
        .map(|l| match l.mark {
            Mark::Directed | Mark::Bidirected => 1,
            Mark::CircleTail => 3,
            Mark::CircleCircle => 5,
        })
        .product();
    if combinations <= VERIFY_LIMIT && !pattern.expand().structures.iter().any(|s| reproduces(s, &ci)) {
        return Err(Error::NoFaithfulStructure);
    }
    Ok(IcStar { pattern, sepsets })
}
