//! Graphviz DOT export. Output is deterministic: vertices in index order,
//! edges sorted, attributes in a fixed order.

use std::fmt::Write;

use crate::graphs::{Dag, LatentStructure, Mark, Pattern};
use crate::varset::VarSet;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn write_dag(out: &mut String, dag: &Dag, latent: VarSet) {
    for (i, n) in dag.names().iter().enumerate() {
        if latent.contains(i) {
            let _ = writeln!(out, "  {} [style=dashed];", quote(n));
        } else {
            let _ = writeln!(out, "  {};", quote(n));
        }
    }
    for (p, c) in dag.edges() {
        let style = if latent.contains(p) { " [style=dashed]" } else { "" };
        let _ = writeln!(out, "  {} -> {}{};", quote(dag.name(p)), quote(dag.name(c)), style);
    }
}

pub fn dag_to_dot(dag: &Dag, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    write_dag(&mut out, dag, VarSet::EMPTY);
    out.push_str("}\n");
    out
}

/// A DAG with the vertices in `hidden` and their outgoing edges dashed.
pub fn dag_to_dot_hidden(dag: &Dag, hidden: VarSet, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    write_dag(&mut out, dag, hidden);
    out.push_str("}\n");
    out
}

/// Latent vertices and their outgoing edges are drawn dashed.
pub fn latent_to_dot(s: &LatentStructure, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    let latent: VarSet = s.latents().collect();
    write_dag(&mut out, s.dag(), latent);
    out.push_str("}\n");
    out
}

/// Bidirected links use `dir=both`; circle marks use `odot` ends.
pub fn pattern_to_dot(p: &Pattern, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for n in p.names() {
        let _ = writeln!(out, "  {};", quote(n));
    }
    for l in p.links() {
        let attrs = match l.mark {
            Mark::Directed => "",
            Mark::CircleTail => " [dir=both, arrowtail=odot, arrowhead=normal]",
            Mark::Bidirected => " [dir=both, arrowtail=normal, arrowhead=normal]",
            Mark::CircleCircle => " [dir=both, arrowtail=odot, arrowhead=odot]",
        };
        let _ = writeln!(out, "  {} -> {}{};", quote(&p.names()[l.a]), quote(&p.names()[l.b]), attrs);
    }
    out.push_str("}\n");
    out
}
