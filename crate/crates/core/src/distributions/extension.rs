//! Deterministic extensions: every endogenous variable becomes a function
//! of its parents and one fresh exogenous "noise" parent.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distributions::model::CausalModel;
use crate::distributions::prob::{Prob, Rational};
use crate::error::Result;
use crate::graphs::Dag;
use crate::varset::VarSet;

fn fresh_name(dag: &Dag, base: &str) -> String {
    let mut name = format!("U{base}");
    while dag.index(&name).is_ok() {
        name.push('\'');
    }
    name
}

/// Extends `m` so that every endogenous variable `v` gains an exogenous
/// parent `Uv` and a deterministic CPT, with the original joint recovered
/// exactly by summing out the new variables.
///
/// `Uv` ranges over the cells of the common refinement of the cumulative
/// distributions of all rows of `P(v | Pa(v))`; `v` takes the value whose
/// cumulative interval contains that cell. The seed only permutes the
/// labels of each `Uv`.
pub fn deterministic_extension(m: &CausalModel<Rational>, seed: u64) -> Result<CausalModel<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = m.len();
    let mut dag = m.dag().clone();
    let mut cards = m.cards().to_vec();
    let mut rows: Vec<Vec<Vec<Rational>>> = m.cpts().iter().map(|c| c.rows().to_vec()).collect();

    for v in 0..n {
        let cpt = m.cpt(v);
        if cpt.parents().is_empty() {
            continue;
        }
        let cumulative: Vec<Vec<Rational>> = cpt
            .rows()
            .iter()
            .map(|row| {
                let mut acc = Rational::zero();
                row.iter().map(|p| { acc = acc.add(p); acc.clone() }).collect()
            })
            .collect();
        let mut cuts: Vec<Rational> = cumulative.iter().flatten().filter(|c| !c.is_zero()).cloned().collect();
        cuts.sort();
        cuts.dedup();
        let mut labels: Vec<usize> = (0..cuts.len()).collect();
        labels.shuffle(&mut rng);

        let u = dag.add_vertex(&fresh_name(&dag, dag.name(v)), VarSet::EMPTY)?;
        dag.add_edge(u, v)?;
        cards.push(cuts.len());
        // the prior of cell k is the width of the k-th refinement interval
        let mut prior = vec![Rational::zero(); cuts.len()];
        let mut lo = Rational::zero();
        for (k, c) in cuts.iter().enumerate() {
            prior[labels[k]] = c.sub(&lo);
            lo = c.clone();
        }
        rows.push(vec![prior]);

        // new parent set is Pa(v) ∪ {u}; u has the largest index so it is
        // the least significant digit of the row index
        let card = cards[v];
        let mut new_rows = Vec::with_capacity(cpt.rows().len() * cuts.len());
        for cum in &cumulative {
            for label in 0..cuts.len() {
                let k = labels.iter().position(|&l| l == label).expect("labels are a permutation");
                let x = cum.iter().position(|c| *c >= cuts[k]).expect("last cumulative value is 1");
                let mut row = vec![Rational::zero(); card];
                row[x] = Rational::one();
                new_rows.push(row);
            }
        }
        rows[v] = new_rows;
    }
    let mut out = CausalModel::new(dag, cards, rows)?;
    for (role, &v) in m.roles() {
        out = out.with_role(role, &m.names()[v].clone())?;
    }
    Ok(out)
}
