//! Graphviz export of a single pattern inside its induced graph.

use std::fmt::Write;

use scpm_core::{AttributedGraph, GraphView, PatternRecord};

/// Members of the pattern are filled and their edges drawn bold; the rest of
/// the view is drawn in grey.
pub fn export_pattern_dot(g: &AttributedGraph, p: &PatternRecord, view: &GraphView) -> String {
    let members = p.quasi_clique.vertices();
    let inside = |v: u32| members.binary_search(&v).is_ok();
    let mut out = String::new();
    let label = p.attribute_set.display_with(g, ", ");
    writeln!(out, "graph pattern {{").unwrap();
    writeln!(out, "  label=\"{{{}}} size={} density={:.2}\";", escape(&label), members.len(), p.quasi_clique.density_f64()).unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for &v in view.members() {
        let id = g.original_id(v);
        if inside(v) {
            writeln!(out, "  {id} [style=filled, fillcolor=\"#f4a261\", penwidth=2];").unwrap();
        } else {
            writeln!(out, "  {id} [color=gray70, fontcolor=gray60];").unwrap();
        }
    }
    for (u, v) in view.edges() {
        let (a, b) = (g.original_id(u), g.original_id(v));
        if inside(u) && inside(v) {
            writeln!(out, "  {a} -- {b} [penwidth=2];").unwrap();
        } else {
            writeln!(out, "  {a} -- {b} [color=gray80];").unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
