//! Property tests. Every library result is compared with a small, slow,
//! independent implementation written here.

use std::collections::{BTreeSet, HashSet};

use num_traits::Zero;
use proptest::prelude::*;

use causal_core::discovery::{enumerate_latent_structures, icstar, reproduces, LatentMode};
use causal_core::distributions::{
    deterministic_extension, markov_ci, rat, CausalModel, CiSet, CiStatement, ExactModel, Rational, Scope,
};
use causal_core::faithfulness::{perturb_model, perturbation_stability, trial_rng, Perturbation};
use causal_core::graphs::{dsep_ci_set, Dag, DsepOracle, LatentStructure, Link, Mark, Pattern};
use causal_core::quantum::{bell_joint, chsh_value, outcome_distribution, preset_spec, Axis, BellSpec, Experiment};
use causal_core::VarSet;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("V{i}")).collect()
}

/// A DAG whose edges follow a random topological order.
fn arb_dag(max: usize) -> impl Strategy<Value = Dag> {
    (2..=max)
        .prop_flat_map(|n| {
            let order = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            (order, prop::collection::vec(any::<bool>(), n * (n - 1) / 2))
        })
        .prop_map(|(order, bits)| {
            let n = order.len();
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if bits[k] {
                        edges.push((order[i], order[j]));
                    }
                    k += 1;
                }
            }
            Dag::from_indices(names(n), &edges).unwrap()
        })
}

/// Binary model parameters: `P(v = 0 | pa) = w / 10`.
#[derive(Clone, Debug)]
struct Params(Vec<i64>);

impl Params {
    fn p(&self, dag: &Dag, v: usize, full: &[usize]) -> Rational {
        let code = dag.parents(v).iter().fold(0, |acc, p| acc * 2 + full[p]);
        let w = self.0[(v * 32 + code) % self.0.len()];
        if full[v] == 0 {
            rat(w, 10)
        } else {
            rat(10 - w, 10)
        }
    }
}

fn arb_model(max: usize) -> impl Strategy<Value = (Dag, Params)> {
    (arb_dag(max), prop::collection::vec(1i64..=9, 160)).prop_map(|(d, w)| (d, Params(w)))
}

fn build(dag: &Dag, params: &Params) -> ExactModel {
    CausalModel::from_fn(dag.clone(), vec![2; dag.len()], |v, pa| {
        // rebuild a full assignment holding only the parent values
        let mut full = vec![0; dag.len()];
        for (p, &x) in dag.parents(v).iter().zip(pa) {
            full[p] = x;
        }
        (0..2).map(|a| {
            full[v] = a;
            params.p(dag, v, &full)
        })
        .collect()
    })
    .unwrap()
}

fn assignments(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..1usize << n).map(move |i| (0..n).map(|v| (i >> v) & 1).collect())
}

/// Product of CPT entries over all assignments, indexed by the bit code.
fn oracle_joint(dag: &Dag, params: &Params) -> Vec<Rational> {
    assignments(dag.len())
        .map(|a| (0..dag.len()).map(|v| params.p(dag, v, &a)).product())
        .collect()
}

fn marginal(joint: &[Rational], n: usize, keep: VarSet, a: &[usize]) -> Rational {
    assignments(n)
        .enumerate()
        .filter(|(_, b)| keep.iter().all(|v| a[v] == b[v]))
        .map(|(i, _)| joint[i].clone())
        .sum()
}

/// `P(xyz)·P(z) = P(xz)·P(yz)` for every assignment.
fn oracle_ci(joint: &[Rational], n: usize, s: &CiStatement) -> bool {
    let (x, y, z) = (s.x(), s.y(), s.z());
    assignments(n).all(|a| {
        marginal(joint, n, x.union(y).union(z), &a) * marginal(joint, n, z, &a)
            == marginal(joint, n, x.union(z), &a) * marginal(joint, n, y.union(z), &a)
    })
}

/// d-separation by moralizing the ancestral graph of `x ∪ y ∪ z`.
fn oracle_dsep(dag: &Dag, x: VarSet, y: VarSet, z: VarSet) -> bool {
    let n = dag.len();
    let mut anc = x.union(y).union(z);
    loop {
        let grown = anc.iter().fold(anc, |acc, v| acc.union(dag.parents(v)));
        if grown == anc {
            break;
        }
        anc = grown;
    }
    let mut adj = vec![BTreeSet::new(); n];
    for v in anc.iter() {
        let ps: Vec<usize> = dag.parents(v).iter().collect();
        for &p in &ps {
            adj[v].insert(p);
            adj[p].insert(v);
        }
        for &p in &ps {
            for &q in &ps {
                if p != q {
                    adj[p].insert(q);
                }
            }
        }
    }
    let mut seen: HashSet<usize> = x.iter().collect();
    let mut stack: Vec<usize> = x.iter().collect();
    while let Some(v) = stack.pop() {
        if y.contains(v) {
            return false;
        }
        for &w in &adj[v] {
            if !z.contains(w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    true
}

fn all_statements(n: usize) -> Vec<CiStatement> {
    CiStatement::universe(n)
}

/// Naive semi-graphoid fixpoint over ordered triples.
fn oracle_closure(gens: &[CiStatement]) -> BTreeSet<CiStatement> {
    let mut set: HashSet<(VarSet, VarSet, VarSet)> = HashSet::new();
    for s in gens {
        set.insert((s.x(), s.y(), s.z()));
        set.insert((s.y(), s.x(), s.z()));
    }
    loop {
        let cur: Vec<_> = set.iter().copied().collect();
        let mut added = Vec::new();
        for &(x, yw, z) in &cur {
            added.push((yw, x, z));
            for y in yw.subsets().filter(|s| !s.is_empty() && *s != yw) {
                let w = yw.difference(y);
                added.push((x, y, z));
                added.push((x, y, z.union(w)));
            }
            for &(x2, w, zy) in &cur {
                let y = zy.difference(z);
                if x2 == x && z.is_subset(zy) && y == yw && !y.is_empty() && w.is_disjoint(y) {
                    added.push((x, y.union(w), z));
                }
            }
        }
        let before = set.len();
        set.extend(added);
        if set.len() == before {
            break;
        }
    }
    set.into_iter().map(|(x, y, z)| CiStatement::new(x, y, z).unwrap()).collect()
}

fn as_set(ci: &CiSet) -> BTreeSet<CiStatement> {
    ci.iter().copied().collect()
}

/// Born-rule probabilities in closed form for real-plane axes.
fn oracle_table(p: f64, a: &Axis, b: &Axis) -> [[f64; 2]; 2] {
    let c = 2.0 * (p * (1.0 - p)).sqrt();
    let ma = (2.0 * p - 1.0) * a.z;
    let mb = (2.0 * p - 1.0) * b.z;
    let e = a.z * b.z + c * (a.x * b.x - a.y * b.y);
    let mut t = [[0.0; 2]; 2];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let (si, sj) = (1.0 - 2.0 * i as f64, 1.0 - 2.0 * j as f64);
            *cell = 0.25 * (1.0 + si * ma + sj * mb + si * sj * e);
        }
    }
    t
}

fn arb_axis() -> impl Strategy<Value = Axis> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(th, ph)| Axis {
        x: th.sin() * ph.cos(),
        y: th.sin() * ph.sin(),
        z: th.cos(),
    })
}

fn arb_spec() -> impl Strategy<Value = BellSpec> {
    (0.0..=1.0f64, [arb_axis(), arb_axis()], [arb_axis(), arb_axis()])
        .prop_map(|(p, l, r)| BellSpec { p, left: l, right: r, prior: [[0.25; 2]; 2] })
}

fn keys(v: &[LatentStructure]) -> BTreeSet<causal_core::graphs::StructureKey> {
    v.iter().map(LatentStructure::key).collect()
}

/// A latent structure with random observed edges and pairwise latents.
fn arb_latent(max: usize) -> impl Strategy<Value = LatentStructure> {
    (arb_dag(max), prop::collection::vec(any::<bool>(), 10)).prop_map(|(d, bits)| {
        let n = d.len();
        let mut latents = Vec::new();
        let mut k = 0;
        for a in 0..n {
            for b in (a + 1)..n {
                if bits[k] {
                    latents.push(VarSet::from_iter([a, b]));
                }
                k += 1;
            }
        }
        LatentStructure::new(names(n), &d.edges(), &latents).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dsep_matches_moralization(dag in arb_dag(6)) {
        let oracle = DsepOracle::new(&dag);
        for s in all_statements(dag.len()) {
            prop_assert_eq!(oracle.separated(s.x(), s.y(), s.z()), oracle_dsep(&dag, s.x(), s.y(), s.z()));
        }
    }

    #[test]
    fn dsep_is_symmetric_and_pairwise(dag in arb_dag(5)) {
        let oracle = DsepOracle::new(&dag);
        for s in all_statements(dag.len()) {
            let (x, y, z) = (s.x(), s.y(), s.z());
            prop_assert_eq!(oracle.separated(x, y, z), oracle.separated(y, x, z));
            let each = x.iter().all(|a| y.iter().all(|b| oracle.separated(VarSet::singleton(a), VarSet::singleton(b), z)));
            // set separation implies separation of every member pair
            if oracle.separated(x, y, z) {
                prop_assert!(each);
            }
        }
    }

    #[test]
    fn dsep_set_is_closed(dag in arb_dag(5)) {
        let d = dsep_ci_set(&dag, dag.all()).unwrap();
        prop_assert!(d.is_closed());
    }

    #[test]
    fn closure_of_markov_is_dsep(dag in arb_dag(5)) {
        let d = dsep_ci_set(&dag, dag.all()).unwrap();
        prop_assert!(markov_ci(&dag).closure().same_as(&d));
    }

    #[test]
    fn cycles_are_rejected(n in 2usize..6, k in 0usize..6) {
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, k % n));
        prop_assert_eq!(Dag::from_indices(names(n), &edges).unwrap_err().code(), if k % n == n - 1 { "E-SELF-LOOP" } else { "E-CYCLE" });
    }

    #[test]
    fn closure_matches_naive_fixpoint(picks in prop::collection::vec(0usize..1000, 0..4)) {
        let n = 4;
        let universe = all_statements(n);
        let gens: Vec<CiStatement> = picks.iter().map(|&i| universe[i % universe.len()]).collect();
        let g = CiSet::from_statements(names(n), gens.iter().copied());
        let closed = g.closure();
        prop_assert_eq!(as_set(&closed), oracle_closure(&gens));
        prop_assert!(closed.closure().same_as(&closed));
        prop_assert!(g.is_subset(&closed));
    }

    #[test]
    fn closure_is_monotone(picks in prop::collection::vec(0usize..1000, 1..4), extra in 0usize..1000) {
        let n = 4;
        let universe = all_statements(n);
        let gens: Vec<CiStatement> = picks.iter().map(|&i| universe[i % universe.len()]).collect();
        let small = CiSet::from_statements(names(n), gens.iter().copied());
        let mut big = small.clone();
        big.insert(universe[extra % universe.len()]);
        prop_assert!(small.closure().is_subset(&big.closure()));
    }

    #[test]
    fn pattern_combination_count(marks in prop::collection::vec(0usize..5, 6)) {
        let mut p = Pattern::new(names(4)).unwrap();
        let mut expected = 1usize;
        let mut k = 0;
        for a in 0..4 {
            for b in (a + 1)..4 {
                let (mark, options) = match marks[k] {
                    0 => (None, 1),
                    1 => (Some(Mark::Directed), 1),
                    2 => (Some(Mark::CircleTail), 3),
                    3 => (Some(Mark::Bidirected), 1),
                    _ => (Some(Mark::CircleCircle), 5),
                };
                if let Some(m) = mark {
                    p.set_link(a, b, m).unwrap();
                }
                expected *= options;
                k += 1;
            }
        }
        let e = p.expand();
        prop_assert_eq!(e.combinations, expected);
        prop_assert_eq!(e.combinations, e.cyclic + e.new_v_structures + e.structures.len());
        let links: Vec<Link> = p.links().copied().collect();
        let circles = links.iter().filter(|l| l.mark == Mark::CircleCircle).count() as u32;
        if circles as usize == links.len() {
            prop_assert_eq!(e.combinations, 5usize.pow(circles));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn model_joint_is_the_cpt_product((dag, params) in arb_model(5)) {
        let m = build(&dag, &params);
        let j = m.joint();
        let oracle = oracle_joint(&dag, &params);
        for (i, a) in assignments(dag.len()).enumerate() {
            prop_assert_eq!(j.prob(&a), &oracle[i]);
        }
    }

    #[test]
    fn dsep_statements_hold_exactly((dag, params) in arb_model(5)) {
        let joint = oracle_joint(&dag, &params);
        let d = dsep_ci_set(&dag, dag.all()).unwrap();
        for s in d.iter() {
            prop_assert!(oracle_ci(&joint, dag.len(), s), "{}", d.render(s));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ci_scan_matches_oracle_and_contains_dsep((dag, params) in arb_model(4)) {
        let m = build(&dag, &params);
        let found = m.joint().all_ci(Scope::FullSets).unwrap();
        let joint = oracle_joint(&dag, &params);
        for s in all_statements(dag.len()) {
            prop_assert_eq!(found.contains(&s), oracle_ci(&joint, dag.len(), &s));
        }
        prop_assert!(dsep_ci_set(&dag, dag.all()).unwrap().is_subset(&found));
    }

    #[test]
    fn extension_is_exact_and_deterministic((dag, params) in arb_model(4), seed in any::<u64>()) {
        let m = build(&dag, &params);
        let ext = deterministic_extension(&m, seed).unwrap();
        let (recovered, original) = (ext.observed_joint(VarSet::full(dag.len())).unwrap(), m.joint());
        prop_assert_eq!(recovered.probs(), original.probs());
        for v in 0..dag.len() {
            if !dag.parents(v).is_empty() {
                prop_assert!(ext.cpt(v).is_deterministic());
            }
        }
        for u in dag.len()..ext.len() {
            prop_assert!(ext.dag().is_exogenous(u));
        }
    }

    #[test]
    fn structural_independences_survive_perturbation((dag, params) in arb_model(4), seed in any::<u64>()) {
        let m = build(&dag, &params);
        let d = dsep_ci_set(&dag, dag.all()).unwrap();
        let settings = Perturbation { trials: 4, magnitude: 0.3, seed };
        for s in d.iter().take(3) {
            prop_assert_eq!(perturbation_stability(&m, s, settings).unwrap().rate(), 1.0);
        }
    }

    #[test]
    fn perturbation_is_seeded((dag, params) in arb_model(4), seed in any::<u64>(), trial in 0usize..1000) {
        let m = build(&dag, &params);
        let a = perturb_model(&m, 0.25, &mut trial_rng(seed, trial)).unwrap();
        let b = perturb_model(&m, 0.25, &mut trial_rng(seed, trial)).unwrap();
        prop_assert_eq!(&a, &b);
        for cpt in a.cpts() {
            for row in cpt.rows() {
                prop_assert_eq!(row.iter().sum::<Rational>(), rat(1, 1));
                prop_assert!(row.iter().all(|p| !p.is_zero()));
            }
        }
    }

    #[test]
    fn pattern_expansion_covers_enumeration(s in arb_latent(4)) {
        let n = s.n_observed();
        let ci = dsep_ci_set(s.dag(), s.observed()).unwrap();
        let found = icstar(&ci, ci.names()).unwrap();
        let expansion = found.pattern.expand();
        let brute: Vec<LatentStructure> = enumerate_latent_structures(&ci, ci.names(), LatentMode::Pairwise, n * (n - 1) / 2)
            .unwrap()
            .into_iter()
            .filter(LatentStructure::is_maximal)
            .collect();
        let maximal: Vec<LatentStructure> = expansion.structures.iter().filter(|t| t.is_maximal()).cloned().collect();
        prop_assert!(keys(&brute).is_subset(&keys(&maximal)));
        let reproducing: Vec<LatentStructure> = maximal.into_iter().filter(|t| reproduces(t, &ci)).collect();
        prop_assert_eq!(keys(&reproducing), keys(&brute));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn born_rule_matches_closed_form(spec in arb_spec(), s in 0usize..2, t in 0usize..2) {
        let got = outcome_distribution(&spec, s, t).unwrap();
        let want = oracle_table(spec.p, &spec.left[s], &spec.right[t]);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((got[i][j] - want[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quantum_statistics_never_signal(spec in arb_spec()) {
        let j = bell_joint(&spec).unwrap();
        prop_assert!(j.ci_holds_named(&["A"], &["T"], &["S"]).unwrap());
        prop_assert!(j.ci_holds_named(&["B"], &["S"], &["T"]).unwrap());
        prop_assert!(chsh_value(&spec).unwrap().abs() <= 2.0 * std::f64::consts::SQRT_2 + 1e-9);
    }

    #[test]
    fn rotation_is_invisible_at_half(theta in -3.0..3.0f64) {
        let spec = preset_spec(Experiment::Chsh, 0.5).unwrap();
        let r = spec.rotated(theta);
        for s in 0..2 {
            for t in 0..2 {
                let (a, b) = (outcome_distribution(&spec, s, t).unwrap(), outcome_distribution(&r, s, t).unwrap());
                for i in 0..2 {
                    for k in 0..2 {
                        prop_assert!((a[i][k] - b[i][k]).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn unbalanced_states_reveal_settings(p in prop_oneof![0.05..0.45f64, 0.55..0.95f64]) {
        let tilted = preset_spec(Experiment::Chsh, p).unwrap().rotated(std::f64::consts::FRAC_PI_8);
        let j = bell_joint(&tilted).unwrap();
        prop_assert!(!j.ci_holds_named(&["A"], &["S"], &[]).unwrap());
        prop_assert!(!j.ci_holds_named(&["B"], &["T"], &[]).unwrap());
        let epr = bell_joint(&preset_spec(Experiment::Epr, p).unwrap()).unwrap();
        prop_assert!(!epr.ci_holds_named(&["A"], &["S"], &[]).unwrap());
        prop_assert!(!epr.ci_holds_named(&["B"], &["T"], &[]).unwrap());
        // the untilted preset measures B along axes with equal ẑ parts
        let preset = bell_joint(&preset_spec(Experiment::Chsh, p).unwrap()).unwrap();
        prop_assert!(preset.ci_holds_named(&["B"], &["T"], &[]).unwrap());
    }
}
