mod args;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use causal_core::casebook::{case_list, models, run_case, CaseSettings, CASES};
use causal_core::discovery::{
    candidates_by_ordering, enumerate_latent_structures, filter_faithful, icstar, wermuth_lauritzen, LatentMode,
};
use causal_core::distributions::{CausalModel, CiSet, ExactModel, Prob, Scope, FULL_SET_LIMIT};
use causal_core::faithfulness::{classify_independences, classify_with_survival, perturbation_stability, Perturbation};
use causal_core::graphs::dot::{dag_to_dot, latent_to_dot, pattern_to_dot};
use causal_core::graphs::{parse_order_constraints, LatentStructure};
use causal_core::io::{load_model, model_to_json, LoadedModel};
use causal_core::quantum::{bell_joint, chsh_value, correlator, outcome_distribution, preset_spec, BellSpec, Experiment};
use causal_core::{Error, VarSet};

use args::*;

enum Failure {
    /// Bad arguments or input files.
    Usage(String),
    Core(Error),
    /// A case ran but missed its expectations.
    CaseFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome<T> = Result<T, Failure>;

/// One rendered result; `stem` names the file written under `--out`.
struct Rendered {
    stem: String,
    body: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::CaseFailed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome<()> {
    let rendered = match &cli.command {
        Command::Model(cmd) => model(cli, cmd)?,
        Command::Discover(cmd) => discover(cli, cmd)?,
        Command::Faithfulness(cmd) => faithfulness(cli, cmd)?,
        Command::Bell(cmd) => bell(cli, cmd)?,
        Command::Case(cmd) => return case(cli, cmd),
    };
    emit(cli, &rendered)
}

fn extension(f: Format) -> &'static str {
    match f {
        Format::Text => "txt",
        Format::Json => "json",
        Format::Dot => "dot",
    }
}

fn emit(cli: &Cli, r: &Rendered) -> Outcome<()> {
    match &cli.out {
        None => print!("{}", r.body),
        Some(dir) => {
            let path = dir.join(format!("{}.{}", r.stem, extension(cli.format)));
            write_file(&path, &r.body)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn write_file(path: &Path, body: &str) -> Outcome<()> {
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), msg: e.to_string() };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, body).map_err(io)?;
    Ok(())
}

fn json_text(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

fn lines(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().map(|l| l + "\n").collect()
}

fn no_dot(what: &str) -> Failure {
    Failure::Usage(format!("--format dot is not available for {what}"))
}

fn rendered(stem: &str, body: String) -> Outcome<Rendered> {
    Ok(Rendered { stem: stem.to_string(), body })
}

macro_rules! with_model {
    ($loaded:expr, $m:ident => $body:expr) => {
        match $loaded {
            LoadedModel::Exact($m) => $body,
            LoadedModel::Float($m) => $body,
        }
    };
}

fn observed_set(names: &[String], observed: &[String]) -> Outcome<VarSet> {
    if observed.is_empty() {
        return Ok(VarSet::full(names.len()));
    }
    let mut set = VarSet::EMPTY;
    for o in observed {
        let i = names.iter().position(|n| n == o).ok_or_else(|| Error::UnknownVariable(o.clone()))?;
        set.insert(i);
    }
    Ok(set)
}

fn show_text<P: Prob>(m: &CausalModel<P>) -> String {
    let names = m.names();
    let vars: Vec<String> = names.iter().zip(m.cards()).map(|(n, c)| format!("{n}({c})")).collect();
    let mut out = format!("variables: {}\nedges: {}\n", vars.join(", "), m.dag().describe());
    for cpt in m.cpts() {
        let child = &names[cpt.child()];
        for (r, row) in cpt.rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(Prob::to_text).collect();
            let given: Vec<String> = cpt
                .parents()
                .iter()
                .zip(cpt.row_assignment(r))
                .map(|(&p, v)| format!("{}={v}", names[p]))
                .collect();
            if given.is_empty() {
                out += &format!("P({child}) = [{}]\n", cells.join(", "));
            } else {
                out += &format!("P({child} | {}) = [{}]\n", given.join(", "), cells.join(", "));
            }
        }
    }
    if !m.roles().is_empty() {
        let roles: Vec<String> = m.roles().iter().map(|(r, &v)| format!("{r}={}", names[v])).collect();
        out += &format!("roles: {}\n", roles.join(", "));
    }
    out
}

fn joint_output<P: Prob>(j: &causal_core::distributions::JointDistribution<P>, format: Format) -> Outcome<String> {
    Ok(match format {
        Format::Text => format!("{j}\n"),
        Format::Json => json_text(json!({
            "variables": j.names(),
            "cardinalities": j.cards(),
            "probabilities": j.probs().iter().map(Prob::to_text).collect::<Vec<_>>(),
        })),
        Format::Dot => return Err(no_dot("joint distributions")),
    })
}

fn ci_output(ci: &CiSet, format: Format) -> Outcome<String> {
    Ok(match format {
        Format::Text if ci.is_empty() => "no independences\n".to_string(),
        Format::Text => lines(ci.lines()),
        Format::Json => json_text(json!({"variables": ci.names(), "independences": ci.lines()})),
        Format::Dot => return Err(no_dot("independence lists")),
    })
}

const BUILTINS: &[(&str, fn() -> ExactModel)] = &[
    ("and-gate", models::and_gate),
    ("and-gate-fine-tuned", models::and_gate_fine_tuned),
    ("five-variable", models::five_variable),
    ("xor-superluminal", || models::xor_superluminal(models::xor_tuned_prior())),
    ("parity-superdeterminism", models::parity_superdeterminism),
    ("parity-retrocausal", models::parity_retrocausal),
];

fn model(cli: &Cli, cmd: &ModelCmd) -> Outcome<Rendered> {
    match cmd {
        ModelCmd::Show { file } => {
            let m = load_model(file)?;
            let body = match cli.format {
                Format::Text => with_model!(&m, m => show_text(m)),
                Format::Json => m.to_json(),
                Format::Dot => dag_to_dot(m.dag(), "model"),
            };
            rendered("model", body)
        }
        ModelCmd::Joint { file } => {
            let body = with_model!(load_model(file)?, m => joint_output(&m.joint().with_tolerance(cli.tol), cli.format)?);
            rendered("joint", body)
        }
        ModelCmd::Ci { file, scope } => {
            let loaded = load_model(file)?;
            let set = observed_set(loaded.names(), &scope.observed)?;
            let sc = if scope.pairs { Scope::SingletonPairs } else { Scope::FullSets };
            let ci = with_model!(&loaded, m => m.observed_joint(set)?.with_tolerance(cli.tol).all_ci(sc)?);
            rendered("ci", ci_output(&ci, cli.format)?)
        }
        ModelCmd::Dot { file } => rendered("model", dag_to_dot(load_model(file)?.dag(), "model")),
        ModelCmd::Builtin { name: None } => rendered("builtin", lines(BUILTINS.iter().map(|(n, _)| n.to_string()))),
        ModelCmd::Builtin { name: Some(name) } => {
            let (_, make) = BUILTINS.iter().find(|(n, _)| n == name).ok_or_else(|| {
                let known: Vec<&str> = BUILTINS.iter().map(|(n, _)| *n).collect();
                Failure::Usage(format!("unknown built-in model `{name}`; available: {}", known.join(", ")))
            })?;
            rendered(name, model_to_json(&make()))
        }
    }
}

/// The closed CI set described by `input`, and its ordering constraints.
fn ci_input(cli: &Cli, input: &CiInput) -> Outcome<(CiSet, Vec<(usize, usize)>)> {
    let ci = match &input.model {
        Some(file) => {
            let loaded = load_model(file)?;
            let set = observed_set(loaded.names(), &input.observed)?;
            if set.len() > FULL_SET_LIMIT {
                return Err(Error::ScopeTooLarge(set.len()).into());
            }
            with_model!(&loaded, m => m.observed_joint(set)?.with_tolerance(cli.tol).all_ci(Scope::FullSets)?)
        }
        None => {
            if input.vars.is_empty() {
                return Err(Failure::Usage("give --vars with --ci, or --model".into()));
            }
            let mut g = CiSet::new(input.vars.clone());
            for s in &input.statements {
                let st = g.parse_statement(s)?;
                g.insert(st);
            }
            g.closure()
        }
    };
    let order = parse_order_constraints(ci.names(), &input.order)?;
    Ok((ci, order))
}

fn dags_json(dags: &[causal_core::graphs::Dag]) -> Vec<String> {
    dags.iter().map(|d| d.describe()).collect()
}

fn structures_dot(structures: &[LatentStructure]) -> String {
    structures.iter().enumerate().map(|(i, s)| latent_to_dot(s, &format!("structure-{}", i + 1))).collect()
}

fn discover(cli: &Cli, cmd: &DiscoverCmd) -> Outcome<Rendered> {
    match cmd {
        DiscoverCmd::Nolatent(input) => {
            let (ci, order) = ci_input(cli, input)?;
            let names = ci.names().to_vec();
            let candidates = candidates_by_ordering(&ci, &names, &order)?;
            let dags = wermuth_lauritzen(&ci, &names, &order)?;
            let faithful = filter_faithful(&dags, &ci);
            let per_order: Vec<String> = candidates
                .iter()
                .map(|c| {
                    let o: Vec<&str> = c.ordering.iter().map(|&i| names[i].as_str()).collect();
                    format!("{}: {}", o.join("<"), c.dag.describe())
                })
                .collect();
            let body = match cli.format {
                Format::Text => {
                    let mut out = format!("independences: {ci}\n\norderings ({}):\n", candidates.len());
                    out += &lines(per_order.iter().map(|l| format!("  {l}")));
                    out += &format!("\ndistinct structures ({}):\n", dags.len());
                    out += &lines(dags.iter().map(|d| format!("  {}", d.describe())));
                    out += &format!("\nfaithful structures ({}):\n", faithful.len());
                    out += &lines(faithful.iter().map(|d| format!("  {}", d.describe())));
                    if faithful.is_empty() {
                        out += "  (none)\n";
                    }
                    out
                }
                Format::Json => json_text(json!({
                    "independences": ci.lines(),
                    "orderings": per_order,
                    "structures": dags_json(&dags),
                    "faithful": dags_json(&faithful),
                })),
                Format::Dot => faithful.iter().enumerate().map(|(i, d)| dag_to_dot(d, &format!("faithful-{}", i + 1))).collect(),
            };
            rendered("nolatent", body)
        }
        DiscoverCmd::Latent { input, mode, max_latents, maximal } => {
            let (ci, order) = ci_input(cli, input)?;
            let mode = match mode {
                Mode::Pairwise => LatentMode::Pairwise,
                Mode::Unrestricted => LatentMode::Unrestricted,
            };
            let found: Vec<LatentStructure> = enumerate_latent_structures(&ci, ci.names(), mode, *max_latents)?
                .into_iter()
                .filter(|s| s.respects(&order) && (!maximal || s.is_maximal()))
                .collect();
            let body = match cli.format {
                Format::Text => {
                    let mut out = format!("independences: {ci}\n\nstructures ({}):\n", found.len());
                    out += &lines(found.iter().map(|s| format!("  {s}")));
                    out
                }
                Format::Json => json_text(json!({
                    "independences": ci.lines(),
                    "structures": found.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                })),
                Format::Dot => structures_dot(&found),
            };
            rendered("latent", body)
        }
        DiscoverCmd::Pattern(input) => {
            let (ci, order) = ci_input(cli, input)?;
            let result = icstar(&ci, ci.names())?;
            let expansion = result.pattern.expand();
            let kept: Vec<LatentStructure> =
                expansion.structures.iter().filter(|s| s.respects(&order)).cloned().collect();
            let body = match cli.format {
                Format::Text => {
                    let mut out = format!("independences: {ci}\npattern: {}\n", result.pattern);
                    out += &format!(
                        "expansion: {} combinations, {} new v-structures, {} cyclic, {} structures",
                        expansion.combinations,
                        expansion.new_v_structures,
                        expansion.cyclic,
                        expansion.structures.len()
                    );
                    if !order.is_empty() {
                        out += &format!(", {} respecting the ordering", kept.len());
                    }
                    out += "\n";
                    out += &lines(kept.iter().map(|s| format!("  {s}")));
                    out
                }
                Format::Json => json_text(json!({
                    "independences": ci.lines(),
                    "pattern": result.pattern.to_string(),
                    "combinations": expansion.combinations,
                    "structures": kept.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                })),
                Format::Dot => pattern_to_dot(&result.pattern, "pattern") + &structures_dot(&kept),
            };
            rendered("pattern", body)
        }
    }
}

fn perturbation(cli: &Cli, p: &PerturbArgs) -> Perturbation {
    Perturbation { trials: p.trials, magnitude: p.magnitude, seed: cli.seed }
}

fn faithfulness(cli: &Cli, cmd: &FaithCmd) -> Outcome<Rendered> {
    match cmd {
        FaithCmd::Classify { file, observed, perturb, no_perturb } => {
            let loaded = load_model(file)?;
            let set = observed_set(loaded.names(), observed)?;
            let report = with_model!(&loaded, m => {
                if *no_perturb {
                    classify_independences(m, set)?
                } else {
                    classify_with_survival(m, set, perturbation(cli, perturb))?
                }
            });
            let body = match cli.format {
                Format::Text => report.table(),
                Format::Json => report.to_json() + "\n",
                Format::Dot => return Err(no_dot("faithfulness reports")),
            };
            rendered("faithfulness", body)
        }
        FaithCmd::Perturb { file, statement, perturb } => {
            let loaded = load_model(file)?;
            let universe = CiSet::new(loaded.names().to_vec());
            let s = universe.parse_statement(statement)?;
            let settings = perturbation(cli, perturb);
            let stab = with_model!(&loaded, m => perturbation_stability(m, &s, settings)?);
            let text = universe.render(&s);
            let body = match cli.format {
                Format::Text => format!(
                    "{text}: survived {} of {} perturbations ({:.3}), magnitude {}, seed {}\n",
                    stab.survived,
                    stab.trials,
                    stab.rate(),
                    settings.magnitude,
                    settings.seed
                ),
                Format::Json => json_text(json!({
                    "statement": text,
                    "survival": stab.rate(),
                    "stability": stab,
                    "perturbation": settings,
                })),
                Format::Dot => return Err(no_dot("perturbation results")),
            };
            rendered("perturb", body)
        }
    }
}

fn bell_spec(a: &BellArgs) -> Outcome<BellSpec> {
    let kind = match a.kind {
        Kind::Epr => Experiment::Epr,
        Kind::Chsh => Experiment::Chsh,
    };
    let spec = preset_spec(kind, a.p)?;
    Ok(if a.tilt == 0.0 { spec } else { spec.rotated(a.tilt) })
}

fn bell(cli: &Cli, cmd: &BellCmd) -> Outcome<Rendered> {
    match cmd {
        BellCmd::Tables(a) => {
            let spec = bell_spec(a)?;
            let mut tables = Vec::new();
            for s in 0..2 {
                for t in 0..2 {
                    tables.push((s, t, outcome_distribution(&spec, s, t)?));
                }
            }
            let body = match cli.format {
                Format::Text => {
                    let mut out = String::new();
                    for (s, t, tab) in &tables {
                        out += &format!("S={s} T={t}   B=0       B=1\n");
                        for (av, row) in tab.iter().enumerate() {
                            out += &format!("  A={av}    {:.6}  {:.6}\n", row[0], row[1]);
                        }
                    }
                    out
                }
                Format::Json => json_text(json!(tables
                    .iter()
                    .map(|(s, t, tab)| json!({"s": s, "t": t, "table": tab}))
                    .collect::<Vec<_>>())),
                Format::Dot => return Err(no_dot("outcome tables")),
            };
            rendered("tables", body)
        }
        BellCmd::Joint(a) => rendered("joint", joint_output(&bell_joint(&bell_spec(a)?)?.with_tolerance(cli.tol), cli.format)?),
        BellCmd::Ci(a) => {
            let ci = bell_joint(&bell_spec(a)?)?.with_tolerance(cli.tol).all_ci(Scope::FullSets)?;
            rendered("ci", ci_output(&ci, cli.format)?)
        }
        BellCmd::Chsh(a) => {
            let spec = bell_spec(a)?;
            let value = chsh_value(&spec)?;
            let mut corr = Vec::new();
            for s in 0..2 {
                for t in 0..2 {
                    corr.push(correlator(&spec, s, t)?);
                }
            }
            let body = match cli.format {
                Format::Text => format!(
                    "E(0,0) = {:.9}\nE(0,1) = {:.9}\nE(1,0) = {:.9}\nE(1,1) = {:.9}\nCHSH = {value:.9}\n",
                    corr[0], corr[1], corr[2], corr[3]
                ),
                Format::Json => json_text(json!({"correlators": corr, "chsh": value})),
                Format::Dot => return Err(no_dot("CHSH values")),
            };
            rendered("chsh", body)
        }
    }
}

fn case(cli: &Cli, cmd: &CaseCmd) -> Outcome<()> {
    let settings = CaseSettings { tol: cli.tol, seed: cli.seed };
    match cmd {
        CaseCmd::List => {
            for (name, title) in case_list() {
                println!("{name:<28}{title}");
            }
            Ok(())
        }
        CaseCmd::Run { name, all } => {
            let names: Vec<&str> = if *all {
                CASES.iter().map(|c| c.name).collect()
            } else {
                vec![name.as_deref().expect("clap requires a name without --all")]
            };
            let mut failed = false;
            for n in names {
                let r = run_case(n, &settings)?;
                failed |= !r.passed();
                if let Some(dir) = &cli.out {
                    let target: PathBuf = if *all { dir.join(n) } else { dir.clone() };
                    r.write(&target)?;
                }
                match (cli.format, *all) {
                    (Format::Json, _) => print!("{}", r.json_report()),
                    (_, true) => println!("{} {}", if r.passed() { "pass" } else { "FAIL" }, n),
                    _ => print!("{}", r.text_report()),
                }
            }
            if failed {
                Err(Failure::CaseFailed)
            } else {
                Ok(())
            }
        }
    }
}
