//! Exact Born-rule statistics of spin measurements on the two-qubit state
//! `√p |+z,+z⟩ + √(1−p) |−z,−z⟩`.
//!
//! Outcome `+1` is recorded as bit 0 and `−1` as bit 1.

use num_complex::Complex64;

use crate::distributions::{CausalModel, FloatJoint, JointDistribution};
use crate::error::{Error, Result};
use crate::graphs::Dag;

const AXIS_TOL: f64 = 1e-12;

/// A measurement direction: a unit vector in three dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Axis {
    pub const Z: Axis = Axis { x: 0.0, y: 0.0, z: 1.0 };
    pub const X: Axis = Axis { x: 1.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > AXIS_TOL {
            return Err(Error::NonUnitAxis(norm));
        }
        Ok(Axis { x, y, z })
    }

    /// `(ẑ + sign·x̂)/√2`.
    pub fn diagonal(sign: f64) -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Axis { x: sign * r, y: 0.0, z: r }
    }

    /// Rotation by `theta` about the ŷ axis, carrying ẑ towards x̂.
    pub fn rotated(&self, theta: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        Axis { x: cos * self.x + sin * self.z, y: self.y, z: cos * self.z - sin * self.x }
    }

    fn check(&self) -> Result<()> {
        Axis::new(self.x, self.y, self.z).map(|_| ())
    }

    /// Projector `½(I + s n·σ)` onto outcome `s = ±1`, row-major.
    fn projector(&self, outcome: usize) -> [[Complex64; 2]; 2] {
        let s = if outcome == 0 { 1.0 } else { -1.0 };
        let c = |re: f64, im: f64| Complex64::new(re, im);
        [
            [c(0.5 * (1.0 + s * self.z), 0.0), c(0.5 * s * self.x, -0.5 * s * self.y)],
            [c(0.5 * s * self.x, 0.5 * s * self.y), c(0.5 * (1.0 - s * self.z), 0.0)],
        ]
    }
}

/// Which measurement settings a preset uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    /// ẑ or x̂ on both wings.
    Epr,
    /// ẑ or x̂ on the left; `(ẑ ± x̂)/√2` on the right.
    Chsh,
}

/// A Bell experiment: state weight, two axes per wing, and the prior over
/// the setting pair `(S, T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BellSpec {
    pub p: f64,
    pub left: [Axis; 2],
    pub right: [Axis; 2],
    /// `prior[s][t]`.
    pub prior: [[f64; 2]; 2],
}

impl BellSpec {
    pub fn new(p: f64, left: [Axis; 2], right: [Axis; 2]) -> Result<Self> {
        let spec = BellSpec { p, left, right, prior: [[0.25; 2]; 2] };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_prior(mut self, prior: [[f64; 2]; 2]) -> Result<Self> {
        self.prior = prior;
        self.validate()?;
        Ok(self)
    }

    /// The same experiment with every axis rotated by `theta` about ŷ.
    /// At `p = ½` the state is invariant under this joint rotation, so all
    /// outcome tables are unchanged; for other `p` the single-wing
    /// marginals follow the new ẑ components.
    pub fn rotated(&self, theta: f64) -> Self {
        BellSpec {
            left: self.left.map(|a| a.rotated(theta)),
            right: self.right.map(|a| a.rotated(theta)),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::OutOfRange(format!("state weight p = {} not in [0, 1]", self.p)));
        }
        for a in self.left.iter().chain(&self.right) {
            a.check()?;
        }
        let flat = self.prior.iter().flatten();
        if flat.clone().any(|&q| q < 0.0) || (flat.sum::<f64>() - 1.0).abs() > AXIS_TOL {
            return Err(Error::OutOfRange("settings prior is not a distribution".into()));
        }
        Ok(())
    }

    fn state(&self) -> [Complex64; 4] {
        let z = Complex64::new(0.0, 0.0);
        [Complex64::new(self.p.sqrt(), 0.0), z, z, Complex64::new((1.0 - self.p).sqrt(), 0.0)]
    }
}

/// The preset axes of either experiment with uniform independent settings.
pub fn preset_spec(kind: Experiment, p: f64) -> Result<BellSpec> {
    let right = match kind {
        Experiment::Epr => [Axis::Z, Axis::X],
        Experiment::Chsh => [Axis::diagonal(1.0), Axis::diagonal(-1.0)],
    };
    BellSpec::new(p, [Axis::Z, Axis::X], right)
}

/// `P(A, B | S = s, T = t)` as `table[a][b]`.
pub fn outcome_distribution(spec: &BellSpec, s: usize, t: usize) -> Result<[[f64; 2]; 2]> {
    spec.validate()?;
    if s > 1 || t > 1 {
        return Err(Error::OutOfRange(format!("setting ({s}, {t})")));
    }
    let psi = spec.state();
    let mut table = [[0.0; 2]; 2];
    for (a, row) in table.iter_mut().enumerate() {
        let pa = spec.left[s].projector(a);
        for (b, cell) in row.iter_mut().enumerate() {
            let pb = spec.right[t].projector(b);
            // ⟨ψ| Pa ⊗ Pb |ψ⟩ with basis index 2·i + j
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            acc += psi[2 * i + j].conj() * pa[i][k] * pb[j][l] * psi[2 * k + l];
                        }
                    }
                }
            }
            *cell = acc.re.max(0.0);
        }
    }
    Ok(table)
}

/// `P(S, T, A, B) = prior(S, T) · P(A, B | S, T)` in float mode.
pub fn bell_joint(spec: &BellSpec) -> Result<FloatJoint> {
    let mut tables = [[[[0.0; 2]; 2]; 2]; 2];
    for s in 0..2 {
        for t in 0..2 {
            tables[s][t] = outcome_distribution(spec, s, t)?;
        }
    }
    let names = ["S", "T", "A", "B"].map(String::from).to_vec();
    JointDistribution::from_fn(names, vec![2; 4], |v| spec.prior[v[0]][v[1]] * tables[v[0]][v[1]][v[2]][v[3]])
}

/// Correlator `E(s, t) = Σ (−1)^(a+b) P(a, b | s, t)`.
pub fn correlator(spec: &BellSpec, s: usize, t: usize) -> Result<f64> {
    let t = outcome_distribution(spec, s, t)?;
    Ok(t[0][0] + t[1][1] - t[0][1] - t[1][0])
}

/// `E(0,0) + E(0,1) + E(1,0) − E(1,1)`.
pub fn chsh_value(spec: &BellSpec) -> Result<f64> {
    Ok(correlator(spec, 0, 0)? + correlator(spec, 0, 1)? + correlator(spec, 1, 0)? - correlator(spec, 1, 1)?)
}

/// The Bell joint as a causal model over the complete DAG
/// `S → T → A → B` (plus all forward edges), with roles S, T, A, B.
pub fn bell_model(spec: &BellSpec) -> Result<CausalModel<f64>> {
    let joint = bell_joint(spec)?;
    let names = ["S", "T", "A", "B"];
    let dag = Dag::complete(names.map(String::from).to_vec(), &[0, 1, 2, 3])?;
    let m = CausalModel::from_joint(dag, &joint)?;
    m.with_role("S", "S")?.with_role("T", "T")?.with_role("A", "A")?.with_role("B", "B")
}
