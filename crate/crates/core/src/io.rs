//! JSON model files.
//!
//! ```json
//! {
//!   "variables": [{"name": "A", "cardinality": 2}, ...],
//!   "edges": [["A", "C"], ...],
//!   "cpts": {
//!     "C": [{"given": {"A": 0, "B": 1}, "dist": ["1", "0"]}, ...]
//!   },
//!   "roles": {"S": "S"}
//! }
//! ```
//!
//! Probabilities written as strings (`"1/3"`) load as exact rationals,
//! JSON numbers as floats. A file must use one kind throughout.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::distributions::model::check_row;
use crate::distributions::{parse_rational, CausalModel, ExactModel, Prob, Rational};
use crate::error::{Error, Result};
use crate::graphs::Dag;

/// A model read from disk, in whichever numeric mode the file used.
#[derive(Clone, Debug)]
pub enum LoadedModel {
    Exact(ExactModel),
    Float(CausalModel<f64>),
}

impl LoadedModel {
    pub fn names(&self) -> &[String] {
        match self {
            LoadedModel::Exact(m) => m.names(),
            LoadedModel::Float(m) => m.names(),
        }
    }

    pub fn dag(&self) -> &Dag {
        match self {
            LoadedModel::Exact(m) => m.dag(),
            LoadedModel::Float(m) => m.dag(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            LoadedModel::Exact(m) => model_to_json(m),
            LoadedModel::Float(m) => model_to_json(m),
        }
    }
}

fn schema(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), msg: msg.into() }
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing field `{key}`")))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(path, "expected a non-negative integer"))
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Exact,
    Float,
}

/// One probability entry, before the numeric mode is fixed.
enum Entry {
    Exact(Rational),
    Float(f64),
}

fn entry(v: &Value, path: &str) -> Result<Entry> {
    match v {
        Value::String(s) => parse_rational(s)
            .map(Entry::Exact)
            .ok_or_else(|| Error::MalformedRational { path: path.to_string(), text: s.clone() }),
        Value::Number(n) => Ok(Entry::Float(n.as_f64().expect("JSON numbers are finite"))),
        _ => Err(schema(path, "probability must be a string like \"1/3\" or a number")),
    }
}

/// Parses a model from JSON text.
pub fn parse_model(text: &str) -> Result<LoadedModel> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
        path: format!("line {}, column {}", e.line(), e.column()),
        msg: e.to_string(),
    })?;
    let vars = field(&root, "variables", "$")?.as_array().ok_or_else(|| schema("variables", "expected an array"))?;
    let mut names = Vec::with_capacity(vars.len());
    let mut cards = Vec::with_capacity(vars.len());
    for (i, v) in vars.iter().enumerate() {
        let path = format!("variables[{i}]");
        names.push(as_str(field(v, "name", &path)?, &format!("{path}.name"))?.to_string());
        cards.push(as_usize(field(v, "cardinality", &path)?, &format!("{path}.cardinality"))?);
    }
    let mut edges = Vec::new();
    if let Some(es) = root.get("edges") {
        for (i, e) in es.as_array().ok_or_else(|| schema("edges", "expected an array"))?.iter().enumerate() {
            let path = format!("edges[{i}]");
            match e.as_array().map(Vec::as_slice) {
                Some([p, c]) => edges.push((as_str(p, &path)?.to_string(), as_str(c, &path)?.to_string())),
                _ => return Err(schema(path, "expected [parent, child]")),
            }
        }
    }
    let dag = Dag::new(&names, &edges)?;
    let cpts = field(&root, "cpts", "$")?.as_object().ok_or_else(|| schema("cpts", "expected an object"))?;
    if let Some(k) = cpts.keys().find(|k| !names.contains(k)) {
        return Err(Error::UnknownVariable(k.clone()));
    }

    let mut mode = None;
    let mut tables: Vec<Vec<Vec<Entry>>> = Vec::with_capacity(names.len());
    for (v, name) in names.iter().enumerate() {
        let path = format!("cpts.{name}");
        let rows = cpts
            .get(name)
            .ok_or_else(|| schema("cpts", format!("missing CPT for `{name}`")))?
            .as_array()
            .ok_or_else(|| schema(&path, "expected an array of rows"))?;
        let parents = dag.parents(v).to_vec();
        let expected: Vec<String> = parents.iter().map(|&p| names[p].clone()).collect();
        let pcards: Vec<usize> = parents.iter().map(|&p| cards[p]).collect();
        let n_rows: usize = pcards.iter().product();
        let mut slots: Vec<Option<Vec<Entry>>> = (0..n_rows).map(|_| None).collect();
        for (r, row) in rows.iter().enumerate() {
            let rpath = format!("{path}[{r}]");
            let given = match row.get("given") {
                None => Map::new(),
                Some(g) => g.as_object().cloned().ok_or_else(|| schema(format!("{rpath}.given"), "expected an object"))?,
            };
            let mut found: Vec<String> = given.keys().cloned().collect();
            found.sort_by_key(|k| names.iter().position(|n| n == k));
            if found != expected {
                return Err(Error::ParentMismatch { path: rpath, var: name.clone(), expected, found });
            }
            let mut slot = 0;
            for (k, &p) in parents.iter().enumerate() {
                let val = as_usize(&given[&names[p]], &format!("{rpath}.given.{}", names[p]))?;
                if val >= pcards[k] {
                    return Err(Error::ValueOutOfRange { var: names[p].clone(), value: val, cardinality: pcards[k] });
                }
                slot = slot * pcards[k] + val;
            }
            let dist = field(row, "dist", &rpath)?.as_array().ok_or_else(|| schema(format!("{rpath}.dist"), "expected an array"))?;
            let entries: Vec<Entry> = dist
                .iter()
                .enumerate()
                .map(|(i, x)| entry(x, &format!("{rpath}.dist[{i}]")))
                .collect::<Result<_>>()?;
            for e in &entries {
                let m = match e {
                    Entry::Exact(_) => Mode::Exact,
                    Entry::Float(_) => Mode::Float,
                };
                if *mode.get_or_insert(m) != m {
                    return Err(Error::MixedNumericModes);
                }
            }
            match &entries.first() {
                Some(Entry::Exact(_)) => {
                    let row: Vec<Rational> = entries.iter().map(|e| if let Entry::Exact(q) = e { q.clone() } else { unreachable!() }).collect();
                    check_row(&row, cards[v], name, &rpath)?;
                }
                Some(Entry::Float(_)) => {
                    let row: Vec<f64> = entries.iter().map(|e| if let Entry::Float(x) = e { *x } else { unreachable!() }).collect();
                    check_row(&row, cards[v], name, &rpath)?;
                }
                None => check_row::<f64>(&[], cards[v], name, &rpath)?,
            }
            if slots[slot].replace(entries).is_some() {
                return Err(schema(rpath, "duplicate parent assignment"));
            }
        }
        if let Some(missing) = slots.iter().position(Option::is_none) {
            return Err(schema(path, format!("no row for parent assignment #{missing}")));
        }
        tables.push(slots.into_iter().map(Option::unwrap).collect());
    }

    let mut loaded = match mode.unwrap_or(Mode::Exact) {
        Mode::Exact => LoadedModel::Exact(CausalModel::new(dag, cards, convert(tables, |e| match e {
            Entry::Exact(q) => q,
            Entry::Float(_) => unreachable!(),
        }))?),
        Mode::Float => LoadedModel::Float(CausalModel::new(dag, cards, convert(tables, |e| match e {
            Entry::Float(x) => x,
            Entry::Exact(_) => unreachable!(),
        }))?),
    };
    if let Some(roles) = root.get("roles") {
        let roles = roles.as_object().ok_or_else(|| schema("roles", "expected an object"))?;
        for (role, var) in roles {
            let var = as_str(var, &format!("roles.{role}"))?;
            loaded = match loaded {
                LoadedModel::Exact(m) => LoadedModel::Exact(m.with_role(role, var)?),
                LoadedModel::Float(m) => LoadedModel::Float(m.with_role(role, var)?),
            };
        }
    }
    Ok(loaded)
}

fn convert<T>(tables: Vec<Vec<Vec<Entry>>>, f: impl Fn(Entry) -> T + Copy) -> Vec<Vec<Vec<T>>> {
    tables.into_iter().map(|t| t.into_iter().map(|r| r.into_iter().map(f).collect()).collect()).collect()
}

fn prob_value<P: Prob>(p: &P) -> Value {
    if P::EXACT {
        Value::String(p.to_text())
    } else {
        json!(p.to_f64())
    }
}

/// Canonical JSON form: variables in model order, edges sorted, rows in
/// parent-assignment order.
pub fn model_to_json<P: Prob>(m: &CausalModel<P>) -> String {
    let names = m.names();
    let variables: Vec<Value> = names
        .iter()
        .zip(m.cards())
        .map(|(n, c)| json!({"name": n, "cardinality": c}))
        .collect();
    let edges: Vec<Value> = m.dag().edges().iter().map(|&(p, c)| json!([names[p], names[c]])).collect();
    let mut cpts = Map::new();
    for cpt in m.cpts() {
        let rows: Vec<Value> = cpt
            .rows()
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let given: Map<String, Value> = cpt
                    .parents()
                    .iter()
                    .zip(cpt.row_assignment(r))
                    .map(|(&p, v)| (names[p].clone(), json!(v)))
                    .collect();
                json!({"given": given, "dist": row.iter().map(prob_value).collect::<Vec<_>>()})
            })
            .collect();
        cpts.insert(names[cpt.child()].clone(), Value::Array(rows));
    }
    let mut root = json!({"variables": variables, "edges": edges, "cpts": cpts});
    if !m.roles().is_empty() {
        let roles: Map<String, Value> = m.roles().iter().map(|(r, &v)| (r.clone(), json!(names[v]))).collect();
        root["roles"] = Value::Object(roles);
    }
    serde_json::to_string_pretty(&root).expect("model is serializable") + "\n"
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), msg: e.to_string() }
}

pub fn load_model(path: impl AsRef<Path>) -> Result<LoadedModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_model(&text)
}

pub fn save_model<P: Prob>(m: &CausalModel<P>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, model_to_json(m)).map_err(|e| io_error(path, e))
}
