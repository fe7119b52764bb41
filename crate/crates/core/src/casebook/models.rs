//! Worked causal models: the two explanations of an AND-gate distribution,
//! the five-variable example, and tuned hidden-variable models of the
//! Bell scenario.

use crate::distributions::{rat, CiSet, CiStatement, ExactModel, Rational};
use crate::graphs::Dag;
use crate::VarSet;

fn point(card: usize, value: usize) -> Vec<Rational> {
    (0..card).map(|i| rat((i == value) as i64, 1)).collect()
}

fn uniform(card: usize) -> Vec<Rational> {
    vec![rat(1, card as i64); card]
}

fn dag(names: &[&str], edges: &[(&str, &str)]) -> Dag {
    Dag::new(names, edges).expect("built-in graph is acyclic")
}

/// `A`, `B` uniform and independent, `C = A·B`.
pub fn and_gate() -> ExactModel {
    let g = dag(&["A", "B", "C"], &[("A", "C"), ("B", "C")]);
    ExactModel::from_fn(g, vec![2, 2, 2], |v, pa| match v {
        2 => point(2, pa[0] * pa[1]),
        _ => uniform(2),
    })
    .expect("valid model")
}

/// The same joint from `C → B`, `C → A`, `B → A` with parameters chosen
/// so that `A` and `B` come out independent.
pub fn and_gate_fine_tuned() -> ExactModel {
    let g = dag(&["A", "B", "C"], &[("C", "B"), ("C", "A"), ("B", "A")]);
    ExactModel::from_fn(g, vec![2, 2, 2], |v, pa| match v {
        // parents (B, C)
        0 => match (pa[0], pa[1]) {
            (1, c) => point(2, c),
            _ => uniform(2),
        },
        1 if pa[0] == 0 => vec![rat(2, 3), rat(1, 3)],
        1 => point(2, 1),
        _ => vec![rat(3, 4), rat(1, 4)],
    })
    .expect("valid model")
}

/// `W → X`, `W → Y`, `S → X`, `T → X`, `T → Y` with generic parameters.
pub fn five_variable() -> ExactModel {
    let g = dag(
        &["S", "T", "W", "X", "Y"],
        &[("W", "X"), ("W", "Y"), ("S", "X"), ("T", "X"), ("T", "Y")],
    );
    ExactModel::from_fn(g, vec![2, 2, 2, 2, 2], |v, pa| {
        let k = pa.iter().fold(v as i64 + 1, |acc, &x| acc * 2 + x as i64);
        let num = 1 + k % 9;
        vec![rat(num, 11), rat(11 - num, 11)]
    })
    .expect("valid model")
}

/// Index of the hidden variable in the Bell-scenario models below, which
/// order their variables `S, T, A, B, L`.
pub const HIDDEN: usize = 4;

/// The observed variables `S, T, A, B` of the Bell-scenario models.
pub fn bell_observed() -> VarSet {
    VarSet::full(4)
}

/// `(S ⊥ T)`, `(A ⊥ T | S)`, `(B ⊥ S | T)` over `S, T, A, B`, closed
/// under the semi-graphoid rules.
pub fn no_signalling_ci() -> CiSet {
    let names = ["S", "T", "A", "B"].map(String::from).to_vec();
    let g = [(0, 1, VarSet::EMPTY), (2, 1, VarSet::singleton(0)), (3, 0, VarSet::singleton(1))]
        .map(|(x, y, z)| CiStatement::pair(x, y, z).expect("disjoint singletons"));
    CiSet::from_statements(names, g).closure()
}

/// The independences of the smoking example: `(S ⊥ C | T)` over `S, T, C`.
pub fn smoking_ci() -> CiSet {
    let names = ["S", "T", "C"].map(String::from).to_vec();
    let s = CiStatement::pair(0, 2, VarSet::singleton(1)).expect("disjoint singletons");
    CiSet::from_statements(names, [s]).closure()
}

fn with_bell_roles(m: ExactModel) -> ExactModel {
    ["S", "T", "A", "B"]
        .iter()
        .try_fold(m, |m, r| m.with_role(r, r))
        .expect("roles name model variables")
}

/// Hidden `L = (l1, l2)` with four states `2·l1 + l2`, plus a direct
/// influence `S → B`. `A = l1`; `B = S ⊕ l1` when `T = 1`, else `l2`.
/// The prior `l1 = l2` uniform yields `A ⊕ B = S·T` with no signalling,
/// which hinges on `l1` being exactly uniform. `prior` is over the four
/// hidden states.
pub fn xor_superluminal(prior: [Rational; 4]) -> ExactModel {
    let g = dag(
        &["S", "T", "A", "B", "L"],
        &[("L", "A"), ("L", "B"), ("S", "A"), ("T", "B"), ("S", "B")],
    );
    let m = ExactModel::from_fn(g, vec![2, 2, 2, 2, 4], |v, pa| match v {
        // parents (S, L)
        2 => point(2, pa[1] >> 1),
        // parents (S, T, L)
        3 => {
            let (s, t, l) = (pa[0], pa[1], pa[2]);
            point(2, if t == 1 { s ^ (l >> 1) } else { l & 1 })
        }
        HIDDEN => prior.to_vec(),
        _ => uniform(2),
    })
    .expect("valid model");
    with_bell_roles(m)
}

/// The tuned prior of [`xor_superluminal`]: `l1 = l2`, uniform.
pub fn xor_tuned_prior() -> [Rational; 4] {
    [rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)]
}

/// Hidden `L = (σ, r)`, states `2σ + r`, uniform; `S = σ`, `A = r`,
/// `B = r ⊕ σ·T`. `σ` is correlated with the parity `A ⊕ B = S·T` but not
/// with `B` alone.
pub fn parity_superdeterminism() -> ExactModel {
    let g = dag(
        &["S", "T", "A", "B", "L"],
        &[("L", "S"), ("L", "A"), ("L", "B"), ("S", "A"), ("T", "B")],
    );
    let m = ExactModel::from_fn(g, vec![2, 2, 2, 2, 4], |v, pa| match v {
        // parent L
        0 => point(2, pa[0] >> 1),
        // parents (S, L)
        2 => point(2, pa[1] & 1),
        // parents (T, L)
        3 => {
            let (t, l) = (pa[0], pa[1]);
            point(2, (l & 1) ^ ((l >> 1) & t))
        }
        HIDDEN => uniform(4),
        _ => uniform(2),
    })
    .expect("valid model");
    with_bell_roles(m)
}

/// [`parity_superdeterminism`] with the `L → S` arrow reversed: `σ` copies
/// `S`, `r` is uniform.
pub fn parity_retrocausal() -> ExactModel {
    let g = dag(
        &["S", "T", "A", "B", "L"],
        &[("S", "L"), ("L", "A"), ("L", "B"), ("S", "A"), ("T", "B")],
    );
    let m = ExactModel::from_fn(g, vec![2, 2, 2, 2, 4], |v, pa| match v {
        // parents (S, L)
        2 => point(2, pa[1] & 1),
        // parents (T, L)
        3 => {
            let (t, l) = (pa[0], pa[1]);
            point(2, (l & 1) ^ ((l >> 1) & t))
        }
        // parent S
        HIDDEN => (0..4).map(|l| rat(((l >> 1) == pa[0]) as i64, 2)).collect(),
        _ => uniform(2),
    })
    .expect("valid model");
    with_bell_roles(m)
}
