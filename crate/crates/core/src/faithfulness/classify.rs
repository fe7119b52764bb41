use std::fmt;

use serde::Serialize;

use crate::distributions::{CausalModel, CiStatement, Prob, Scope, FULL_SET_LIMIT};
use crate::error::Result;
use crate::faithfulness::perturb::{perturbation_stability, Perturbation};
use crate::graphs::DsepOracle;
use crate::varset::VarSet;

/// Whether an observed independence follows from the causal structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Implied by d-separation, hence by every choice of parameters.
    Structural,
    /// Holds only because of the particular parameter values.
    FineTuned,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Structural => "structural",
            Verdict::FineTuned => "fine_tuned",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatementReport {
    pub statement: String,
    pub verdict: Verdict,
    /// Fraction of perturbed models in which the statement still holds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survival: Option<f64>,
    #[serde(skip)]
    pub ci: CiStatement,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaithfulnessReport {
    pub observed: Vec<String>,
    pub statements: Vec<StatementReport>,
    /// True iff every observed independence is structural.
    pub faithful: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<Perturbation>,
}

impl FaithfulnessReport {
    pub fn verdict(&self) -> &'static str {
        if self.faithful {
            "faithful"
        } else {
            "unfaithful"
        }
    }

    pub fn get(&self, statement: &str) -> Option<&StatementReport> {
        self.statements.iter().find(|s| s.statement == statement)
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report is serializable");
        v["verdict"] = self.verdict().into();
        serde_json::to_string_pretty(&v).expect("report is serializable")
    }

    /// Fixed-width table: statement, verdict, survival.
    pub fn table(&self) -> String {
        let width = self.statements.iter().map(|s| s.statement.chars().count()).max().unwrap_or(9).max(9);
        let mut out = format!("{:<width$}  {:<10}  {}\n", "statement", "verdict", "survival");
        for s in &self.statements {
            let surv = s.survival.map_or("-".to_string(), |r| format!("{r:.3}"));
            out += &format!("{:<width$}  {:<10}  {}\n", s.statement, s.verdict.to_string(), surv);
        }
        if self.statements.is_empty() {
            out += "no independences\n";
        }
        out += &format!("overall: {}\n", self.verdict());
        out
    }
}

/// Scans the observed marginal of `m` for independences and labels each
/// as structural (d-separated in the full graph, latents included) or
/// fine-tuned.
pub fn classify_independences<P: Prob>(m: &CausalModel<P>, observed: VarSet) -> Result<FaithfulnessReport> {
    let joint = m.observed_joint(observed)?;
    let scope = if observed.len() <= FULL_SET_LIMIT { Scope::FullSets } else { Scope::SingletonPairs };
    let found = joint.all_ci(scope)?;
    let obs = observed.to_vec();
    let oracle = DsepOracle::new(m.dag());
    let lift = |s: VarSet| s.iter().map(|i| obs[i]).collect::<VarSet>();
    let statements: Vec<StatementReport> = found
        .iter()
        .map(|s| {
            let structural = oracle.separated(lift(s.x()), lift(s.y()), lift(s.z()));
            StatementReport {
                statement: found.render(s),
                verdict: if structural { Verdict::Structural } else { Verdict::FineTuned },
                survival: None,
                ci: s.map(|i| obs[i]),
            }
        })
        .collect();
    let faithful = statements.iter().all(|s| s.verdict == Verdict::Structural);
    Ok(FaithfulnessReport {
        observed: found.names().to_vec(),
        statements,
        faithful,
        perturbation: None,
    })
}

/// [`classify_independences`] plus the perturbation survival rate of
/// every statement.
pub fn classify_with_survival<P: Prob>(
    m: &CausalModel<P>,
    observed: VarSet,
    settings: Perturbation,
) -> Result<FaithfulnessReport> {
    let mut r = classify_independences(m, observed)?;
    for s in &mut r.statements {
        s.survival = Some(perturbation_stability(m, &s.ci, settings)?.rate());
    }
    r.perturbation = Some(settings);
    Ok(r)
}
