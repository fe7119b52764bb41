use std::fmt;

use rayon::prelude::*;

use crate::distributions::ci::{CiSet, CiStatement};
use crate::distributions::prob::{Prob, Rational};
use crate::error::{Error, Result};
use crate::varset::{VarSet, MAX_VARS};

/// Default tolerance for CI tests on floating-point tables.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest universe for which [`Scope::FullSets`] is enumerated.
pub const FULL_SET_LIMIT: usize = 6;

/// Which CI statements [`JointDistribution::all_ci`] examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// `(x ⊥ y | Z)` for single variables `x`, `y` and every `Z`.
    SingletonPairs,
    /// Every disjoint triple of sets.
    FullSets,
}

/// A dense probability table over an ordered list of discrete variables.
///
/// Cells are laid out row-major with the first variable most significant,
/// so for binary variables the cell index reads as the bit string `[x1 x2 …]`.
#[derive(Clone, PartialEq, Debug)]
pub struct JointDistribution<P> {
    names: Vec<String>,
    cards: Vec<usize>,
    strides: Vec<usize>,
    probs: Vec<P>,
    tol: f64,
}

pub type ExactJoint = JointDistribution<Rational>;
pub type FloatJoint = JointDistribution<f64>;

fn strides(cards: &[usize]) -> Vec<usize> {
    let mut s = vec![1; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * cards[i + 1];
    }
    s
}

impl<P: Prob> JointDistribution<P> {
    /// Validates non-negativity and normalization (exact, or within
    /// [`DEFAULT_TOL`] for floats).
    pub fn new(names: Vec<String>, cards: Vec<usize>, probs: Vec<P>) -> Result<Self> {
        if names.len() != cards.len() {
            return Err(Error::OutOfRange(format!("{} names for {} cardinalities", names.len(), cards.len())));
        }
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        if cards.contains(&0) {
            return Err(Error::OutOfRange("cardinality 0".into()));
        }
        let size: usize = cards.iter().product();
        if probs.len() != size {
            return Err(Error::OutOfRange(format!("{} cells for a table of size {size}", probs.len())));
        }
        if probs.iter().any(P::is_negative) {
            return Err(Error::OutOfRange("negative probability".into()));
        }
        let total = P::sum(&probs);
        if !total.close(&P::one(), DEFAULT_TOL) {
            return Err(Error::OutOfRange(format!("probabilities sum to {total}")));
        }
        Ok(Self::raw(names, cards, probs))
    }

    fn raw(names: Vec<String>, cards: Vec<usize>, probs: Vec<P>) -> Self {
        let strides = strides(&cards);
        JointDistribution { names, cards, strides, probs, tol: DEFAULT_TOL }
    }

    /// Builds a table by evaluating `f` on every assignment.
    pub fn from_fn(names: Vec<String>, cards: Vec<usize>, f: impl Fn(&[usize]) -> P + Sync) -> Result<Self> {
        let size: usize = cards.iter().product();
        let st = strides(&cards);
        let probs: Vec<P> = (0..size)
            .into_par_iter()
            .map(|i| {
                let a: Vec<usize> = st.iter().zip(&cards).map(|(s, c)| (i / s) % c).collect();
                f(&a)
            })
            .collect();
        Self::new(names, cards, probs)
    }

    /// Sets the tolerance used by CI tests in float mode.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn all(&self) -> VarSet {
        VarSet::full(self.len())
    }

    pub fn probs(&self) -> &[P] {
        &self.probs
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

    /// The assignment stored in cell `i`.
    pub fn assignment(&self, i: usize) -> Vec<usize> {
        self.strides.iter().zip(&self.cards).map(|(s, c)| (i / s) % c).collect()
    }

    fn cell(&self, a: &[usize]) -> usize {
        a.iter().zip(&self.strides).map(|(v, s)| v * s).sum()
    }

    /// Probability of a full assignment.
    pub fn prob(&self, a: &[usize]) -> &P {
        &self.probs[self.cell(a)]
    }

    /// Probability of a partial assignment.
    pub fn prob_of(&self, evidence: &[(usize, usize)]) -> P {
        P::sum(
            self.probs
                .iter()
                .enumerate()
                .filter(|(i, _)| evidence.iter().all(|&(v, x)| (i / self.strides[v]) % self.cards[v] == x))
                .map(|(_, p)| p),
        )
    }

    /// Cell index with every variable outside `keep` zeroed.
    fn masked(&self, i: usize, keep: VarSet) -> usize {
        keep.iter().map(|v| ((i / self.strides[v]) % self.cards[v]) * self.strides[v]).sum()
    }

    /// Sums out the variables not in `keep`; kept variables retain their
    /// relative order.
    pub fn marginalize(&self, keep: VarSet) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptySet("keep"));
        }
        if !keep.is_subset(self.all()) {
            return Err(Error::UnknownVariable(format!("{keep:?}")));
        }
        let vars = keep.to_vec();
        let cards: Vec<usize> = vars.iter().map(|&v| self.cards[v]).collect();
        let st = strides(&cards);
        let mut probs = vec![P::zero(); cards.iter().product()];
        for (i, p) in self.probs.iter().enumerate() {
            let j: usize = vars
                .iter()
                .zip(&st)
                .map(|(&v, s)| ((i / self.strides[v]) % self.cards[v]) * s)
                .sum();
            probs[j] = probs[j].add(p);
        }
        let names = vars.iter().map(|&v| self.names[v].clone()).collect();
        Ok(Self::raw(names, cards, probs).with_tolerance(self.tol))
    }

    /// Marginal over named variables.
    pub fn marginal(&self, names: &[&str]) -> Result<Self> {
        self.marginalize(self.set_of(names)?)
    }

    /// Renormalized distribution of the remaining variables given
    /// `evidence` (pairs of variable index and value).
    pub fn condition(&self, evidence: &[(usize, usize)]) -> Result<Self> {
        let mut fixed = VarSet::EMPTY;
        for &(v, x) in evidence {
            if v >= self.len() {
                return Err(Error::UnknownVariable(format!("#{v}")));
            }
            if x >= self.cards[v] {
                return Err(Error::ValueOutOfRange { var: self.names[v].clone(), value: x, cardinality: self.cards[v] });
            }
            fixed.insert(v);
        }
        if evidence.is_empty() {
            return Ok(self.clone());
        }
        let norm = self.prob_of(evidence);
        if norm.is_zero() {
            return Err(Error::ZeroProbabilityEvidence);
        }
        let rest = self.all().difference(fixed);
        if rest.is_empty() {
            return Err(Error::EmptySet("remaining variables"));
        }
        let vars = rest.to_vec();
        let cards: Vec<usize> = vars.iter().map(|&v| self.cards[v]).collect();
        let probs = (0..cards.iter().product::<usize>())
            .map(|j| {
                let sub = strides(&cards);
                let mut a = vec![0; self.len()];
                for (k, &v) in vars.iter().enumerate() {
                    a[v] = (j / sub[k]) % cards[k];
                }
                for &(v, x) in evidence {
                    a[v] = x;
                }
                self.prob(&a).div(&norm)
            })
            .collect();
        let names = vars.iter().map(|&v| self.names[v].clone()).collect();
        Ok(Self::raw(names, cards, probs).with_tolerance(self.tol))
    }

    /// Whether `P(X,Y|Z) = P(X|Z) P(Y|Z)` for every `z` with `P(z) > 0`.
    ///
    /// Exact tables compare `P(xyz) P(z)` with `P(xz) P(yz)`. Float tables
    /// compare the conditional forms within the tolerance and treat contexts
    /// with `P(z) ≤ tol` as having probability zero.
    pub fn ci_holds(&self, s: &CiStatement) -> bool {
        let (x, y, z) = (s.x(), s.y(), s.z());
        let xyz = x.union(y).union(z);
        let (xz, yz) = (x.union(z), y.union(z));
        let size = self.probs.len();
        let mut m = [vec![P::zero(); size], vec![P::zero(); size], vec![P::zero(); size], vec![P::zero(); size]];
        for (i, p) in self.probs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (k, set) in [xyz, xz, yz, z].into_iter().enumerate() {
                let j = self.masked(i, set);
                m[k][j] = m[k][j].add(p);
            }
        }
        let [m_xyz, m_xz, m_yz, m_z] = &m;
        // Visit each (x, y, z) cell once: the cells of the `xyz` marginal.
        (0..size).filter(|&i| self.masked(i, xyz) == i).all(|i| {
            let pz = &m_z[self.masked(i, z)];
            let pxz = &m_xz[self.masked(i, xz)];
            let pyz = &m_yz[self.masked(i, yz)];
            if P::EXACT {
                pz.is_zero() || m_xyz[i].mul(pz) == pxz.mul(pyz)
            } else {
                let pz = pz.to_f64();
                if pz <= self.tol {
                    return true;
                }
                let lhs = m_xyz[i].to_f64() / pz;
                let rhs = (pxz.to_f64() / pz) * (pyz.to_f64() / pz);
                (lhs - rhs).abs() <= self.tol
            }
        })
    }

    /// [`Self::ci_holds`] on a statement given by variable names.
    pub fn ci_holds_named(&self, x: &[&str], y: &[&str], z: &[&str]) -> Result<bool> {
        let s = CiStatement::new(self.set_of(x)?, self.set_of(y)?, self.set_of(z)?)?;
        Ok(self.ci_holds(&s))
    }

    /// Every statement in `scope` that holds in this table.
    pub fn all_ci(&self, scope: Scope) -> Result<CiSet> {
        let n = self.len();
        let candidates = match scope {
            Scope::SingletonPairs => CiStatement::singleton_universe(n),
            Scope::FullSets if n > FULL_SET_LIMIT => return Err(Error::ScopeTooLarge(n)),
            Scope::FullSets => CiStatement::universe(n),
        };
        let holding: Vec<CiStatement> = candidates.into_par_iter().filter(|s| self.ci_holds(s)).collect();
        Ok(CiSet::from_statements(self.names.clone(), holding))
    }

    /// Float copy of the table.
    pub fn to_float(&self) -> FloatJoint {
        JointDistribution::raw(self.names.clone(), self.cards.clone(), self.probs.iter().map(P::to_f64).collect())
            .with_tolerance(self.tol)
    }

    /// Cell-wise comparison within `tol` (exact equality for rationals).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.names == other.names
            && self.cards == other.cards
            && self.probs.iter().zip(&other.probs).all(|(a, b)| a.close(b, tol))
    }

    /// Sum of all cells.
    pub fn total(&self) -> P {
        P::sum(&self.probs)
    }

    /// The support with probabilities, e.g. `1/4[000] + 3/4[111]`.
    pub fn render(&self) -> String {
        let sep = if self.cards.iter().all(|&c| c <= 10) { "" } else { "," };
        let parts: Vec<String> = self
            .probs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| {
                let a: Vec<String> = self.assignment(i).iter().map(usize::to_string).collect();
                format!("{}[{}]", p.to_text(), a.join(sep))
            })
            .collect();
        parts.join(" + ")
    }
}

impl<P: Prob> fmt::Display for JointDistribution<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({}) = {}", self.names.join(","), self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::prob::rat;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn pabc() -> ExactJoint {
        let q = rat(1, 4);
        let z = rat(0, 1);
        // cells 000 001 010 011 100 101 110 111
        JointDistribution::new(
            names(&["A", "B", "C"]),
            vec![2, 2, 2],
            vec![q.clone(), z.clone(), q.clone(), z.clone(), q.clone(), z.clone(), z, q],
        )
        .unwrap()
    }

    #[test]
    fn marginals_of_the_and_gate_distribution() {
        let d = pabc();
        let ab = d.marginal(&["A", "B"]).unwrap();
        assert!(ab.probs().iter().all(|p| *p == rat(1, 4)));
        let ac = d.marginal(&["A", "C"]).unwrap();
        assert_eq!(ac.render(), "1/2[00] + 1/4[10] + 1/4[11]");
        assert_eq!(d.marginalize(d.all()).unwrap(), d);
        assert!(d.marginalize(VarSet::EMPTY).is_err());
    }

    #[test]
    fn conditioning() {
        let d = pabc();
        let c = d.index("C").unwrap();
        let given = d.condition(&[(c, 1)]).unwrap();
        assert_eq!(given.render(), "1[11]");
        assert_eq!(d.condition(&[]).unwrap(), d);

        let a = d.index("A").unwrap();
        let b = d.index("B").unwrap();
        assert_eq!(
            d.condition(&[(a, 0), (c, 1)]).unwrap_err(),
            Error::ZeroProbabilityEvidence
        );
        assert!(d.condition(&[(b, 2)]).is_err());
    }

    #[test]
    fn ci_on_the_and_gate_distribution() {
        let d = pabc();
        assert!(d.ci_holds_named(&["A"], &["B"], &[]).unwrap());
        assert!(!d.ci_holds_named(&["A"], &["C"], &[]).unwrap());
        assert!(!d.ci_holds_named(&["A"], &["B"], &["C"]).unwrap());
        let singles = d.all_ci(Scope::SingletonPairs).unwrap();
        assert_eq!(singles.lines(), vec!["(A ⊥ B)"]);
    }

    #[test]
    fn product_distributions_satisfy_everything() {
        let d = JointDistribution::from_fn(names(&["A", "B", "C"]), vec![2, 3, 2], |a| {
            let pa = [rat(1, 3), rat(2, 3)];
            let pb = [rat(1, 6), rat(1, 2), rat(1, 3)];
            let pc = [rat(3, 4), rat(1, 4)];
            &(&pa[a[0]] * &pb[a[1]]) * &pc[a[2]]
        })
        .unwrap();
        let all = d.all_ci(Scope::FullSets).unwrap();
        assert_eq!(all.len(), CiStatement::universe(3).len());
    }

    #[test]
    fn float_mode_uses_tolerance() {
        let h = 0.5f64;
        let d = JointDistribution::new(names(&["A", "B"]), vec![2, 2], vec![h * h, h * h, h * h + 1e-12, h * h - 1e-12])
            .unwrap();
        assert!(d.ci_holds_named(&["A"], &["B"], &[]).unwrap());
        assert!(!d.clone().with_tolerance(1e-15).ci_holds_named(&["A"], &["B"], &[]).unwrap());
    }

    #[test]
    fn full_set_guard() {
        let n = 7;
        let d = JointDistribution::from_fn((0..n).map(|i| format!("V{i}")).collect(), vec![2; n], |_| 1.0 / 128.0).unwrap();
        assert_eq!(d.all_ci(Scope::FullSets).unwrap_err(), Error::ScopeTooLarge(7));
        assert!(d.all_ci(Scope::SingletonPairs).is_ok());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(JointDistribution::new(names(&["A"]), vec![2], vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(JointDistribution::new(names(&["A"]), vec![2], vec![rat(3, 2), rat(-1, 2)]).is_err());
        assert!(JointDistribution::new(names(&["A", "A"]), vec![1, 1], vec![rat(1, 1)]).is_err());
    }
}
