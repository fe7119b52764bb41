use std::collections::BTreeMap;

use crate::distributions::joint::JointDistribution;
use crate::distributions::prob::{Prob, Rational};
use crate::error::{Error, Result};
use crate::graphs::Dag;
use crate::varset::VarSet;

/// Row-sum tolerance for float CPTs.
pub const ROW_TOL: f64 = 1e-12;

/// `P(child | parents)`: one probability vector per parent assignment.
///
/// Parents are listed in ascending index order and rows are laid out with
/// the first parent most significant.
#[derive(Clone, PartialEq, Debug)]
pub struct Cpt<P> {
    child: usize,
    parents: Vec<usize>,
    parent_cards: Vec<usize>,
    rows: Vec<Vec<P>>,
}

impl<P: Prob> Cpt<P> {
    pub fn child(&self) -> usize {
        self.child
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn rows(&self) -> &[Vec<P>] {
        &self.rows
    }

    /// Row index of a parent-value assignment, given in parent order.
    pub fn row_index(&self, parent_values: &[usize]) -> usize {
        parent_values
            .iter()
            .zip(&self.parent_cards)
            .fold(0, |acc, (v, c)| acc * c + v)
    }

    /// Parent values of row `r`, in parent order.
    pub fn row_assignment(&self, mut r: usize) -> Vec<usize> {
        let mut out = vec![0; self.parents.len()];
        for k in (0..self.parents.len()).rev() {
            out[k] = r % self.parent_cards[k];
            r /= self.parent_cards[k];
        }
        out
    }

    /// The row used under a full assignment of the model's variables.
    pub fn row_for(&self, full: &[usize]) -> &[P] {
        let r = self.parents.iter().zip(&self.parent_cards).fold(0, |acc, (&p, c)| acc * c + full[p]);
        &self.rows[r]
    }

    /// Whether every row is a point mass.
    pub fn is_deterministic(&self) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().filter(|p| !p.is_zero()).count() == 1)
    }
}

/// A causal structure together with a CPT for every variable.
#[derive(Clone, PartialEq, Debug)]
pub struct CausalModel<P> {
    dag: Dag,
    cards: Vec<usize>,
    cpts: Vec<Cpt<P>>,
    roles: BTreeMap<String, usize>,
}

pub type ExactModel = CausalModel<Rational>;

pub(crate) fn check_row<P: Prob>(row: &[P], card: usize, var: &str, path: &str) -> Result<()> {
    if row.len() != card {
        return Err(Error::Schema {
            path: path.to_string(),
            msg: format!("row of `{var}` has {} entries, cardinality is {card}", row.len()),
        });
    }
    if row.iter().any(P::is_negative) {
        return Err(Error::NegativeProbability { path: path.to_string(), var: var.to_string() });
    }
    let sum = P::sum(row);
    if !sum.close(&P::one(), ROW_TOL) {
        return Err(Error::RowSum { path: path.to_string(), var: var.to_string(), sum: sum.to_text() });
    }
    Ok(())
}

impl<P: Prob> CausalModel<P> {
    /// `rows[v]` lists the rows of `P(v | parents)` with parents in
    /// ascending index order, first parent most significant.
    pub fn new(dag: Dag, cards: Vec<usize>, rows: Vec<Vec<Vec<P>>>) -> Result<Self> {
        if cards.len() != dag.len() || rows.len() != dag.len() {
            return Err(Error::Schema {
                path: "cpts".into(),
                msg: format!("{} variables, {} cardinalities, {} CPTs", dag.len(), cards.len(), rows.len()),
            });
        }
        if let Some(v) = cards.iter().position(|&c| c == 0) {
            return Err(Error::Schema { path: format!("variables[{v}]"), msg: "cardinality 0".into() });
        }
        let mut cpts = Vec::with_capacity(dag.len());
        for (v, table) in rows.into_iter().enumerate() {
            let parents = dag.parents(v).to_vec();
            let parent_cards: Vec<usize> = parents.iter().map(|&p| cards[p]).collect();
            let expected: usize = parent_cards.iter().product();
            let name = dag.name(v);
            if table.len() != expected {
                return Err(Error::Schema {
                    path: format!("cpts.{name}"),
                    msg: format!("{} rows, expected {expected}", table.len()),
                });
            }
            for (r, row) in table.iter().enumerate() {
                check_row(row, cards[v], name, &format!("cpts.{name}[{r}]"))?;
            }
            cpts.push(Cpt { child: v, parents, parent_cards, rows: table });
        }
        Ok(CausalModel { dag, cards, cpts, roles: BTreeMap::new() })
    }

    /// Builds every CPT row from `f(variable, parent values)`.
    pub fn from_fn(dag: Dag, cards: Vec<usize>, f: impl Fn(usize, &[usize]) -> Vec<P>) -> Result<Self> {
        let rows = (0..dag.len())
            .map(|v| {
                let parents = dag.parents(v).to_vec();
                let pc: Vec<usize> = parents.iter().map(|&p| cards[p]).collect();
                let n: usize = pc.iter().product();
                (0..n)
                    .map(|mut r| {
                        let mut a = vec![0; pc.len()];
                        for k in (0..pc.len()).rev() {
                            a[k] = r % pc[k];
                            r /= pc[k];
                        }
                        f(v, &a)
                    })
                    .collect()
            })
            .collect();
        Self::new(dag, cards, rows)
    }

    /// CPTs read off `joint` as conditionals given the DAG parents. Rows for
    /// parent contexts of probability zero are uniform.
    pub fn from_joint(dag: Dag, joint: &JointDistribution<P>) -> Result<Self> {
        if joint.names() != dag.names() {
            return Err(Error::UniverseMismatch);
        }
        let cards = joint.cards().to_vec();
        Self::from_fn(dag.clone(), cards.clone(), |v, pa| {
            let parents = dag.parents(v).to_vec();
            let mut evidence: Vec<(usize, usize)> = parents.iter().copied().zip(pa.iter().copied()).collect();
            let norm = joint.prob_of(&evidence);
            if norm.is_zero() {
                return vec![P::from_ratio(1, cards[v] as i64); cards[v]];
            }
            (0..cards[v])
                .map(|x| {
                    evidence.push((v, x));
                    let p = joint.prob_of(&evidence).div(&norm);
                    evidence.pop();
                    p
                })
                .collect()
        })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn names(&self) -> &[String] {
        self.dag.names()
    }

    pub fn len(&self) -> usize {
        self.dag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dag.is_empty()
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn cpt(&self, v: usize) -> &Cpt<P> {
        &self.cpts[v]
    }

    pub fn cpts(&self) -> &[Cpt<P>] {
        &self.cpts
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.dag.index(name)
    }

    /// Replaces the CPT of `v`, revalidating its rows.
    pub fn with_rows(&self, v: usize, rows: Vec<Vec<P>>) -> Result<Self> {
        let mut all: Vec<Vec<Vec<P>>> = self.cpts.iter().map(|c| c.rows.clone()).collect();
        all[v] = rows;
        let mut m = Self::new(self.dag.clone(), self.cards.clone(), all)?;
        m.roles = self.roles.clone();
        Ok(m)
    }

    /// Applies `f(variable, row)` to every CPT row and revalidates.
    pub fn map_rows(&self, mut f: impl FnMut(usize, &[P]) -> Vec<P>) -> Result<Self> {
        let all = self
            .cpts
            .iter()
            .map(|c| c.rows.iter().map(|r| f(c.child, r)).collect())
            .collect();
        let mut m = Self::new(self.dag.clone(), self.cards.clone(), all)?;
        m.roles = self.roles.clone();
        Ok(m)
    }

    /// Declares that variable `name` plays `role` (such as `S` or `A`).
    pub fn with_role(mut self, role: &str, name: &str) -> Result<Self> {
        let v = self.index(name)?;
        self.roles.insert(role.to_string(), v);
        Ok(self)
    }

    pub fn role(&self, role: &str) -> Result<usize> {
        self.roles.get(role).copied().ok_or_else(|| Error::MissingRole(role.to_string()))
    }

    pub fn roles(&self) -> &BTreeMap<String, usize> {
        &self.roles
    }

    /// The joint `∏ P(v | Pa(v))` over all variables.
    pub fn joint(&self) -> JointDistribution<P> {
        JointDistribution::from_fn(self.names().to_vec(), self.cards.clone(), |a| {
            let mut p = P::one();
            for c in &self.cpts {
                let q = &c.row_for(a)[a[c.child]];
                if q.is_zero() {
                    return P::zero();
                }
                p = p.mul(q);
            }
            p
        })
        .expect("validated CPTs yield a normalized joint")
    }

    /// The joint marginalized to `observed`.
    pub fn observed_joint(&self, observed: VarSet) -> Result<JointDistribution<P>> {
        self.joint().marginalize(observed)
    }

    pub fn is_deterministic(&self) -> bool {
        self.cpts.iter().all(|c| c.parents.is_empty() || c.is_deterministic())
    }

    /// Float copy of the model.
    pub fn to_float(&self) -> CausalModel<f64> {
        let rows = self
            .cpts
            .iter()
            .map(|c| c.rows.iter().map(|r| r.iter().map(P::to_f64).collect()).collect())
            .collect();
        let mut m = CausalModel::new(self.dag.clone(), self.cards.clone(), rows).expect("float copy of a valid model");
        m.roles = self.roles.clone();
        m
    }
}

/// Free-function form of [`CausalModel::joint`].
pub fn joint_from_model<P: Prob>(m: &CausalModel<P>) -> JointDistribution<P> {
    m.joint()
}
