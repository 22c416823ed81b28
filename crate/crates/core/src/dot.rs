//! Graphviz output. Vertices appear in topological order and edges sorted by
//! the positions of their endpoints, so the text is stable across runs.

use std::fmt::Write;

use crate::graph::EdgeId;
use crate::instance::PlanningInstance;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `inst`; edges in `highlight` are drawn thick.
pub fn export_dot(inst: &PlanningInstance, highlight: Option<&[EdgeId]>) -> String {
    let g = &inst.graph;
    let mut out = String::from("digraph G {\n  rankdir=LR;\n");
    for &v in g.topo_order() {
        let mut attrs = Vec::new();
        if v == inst.s || v == inst.t {
            attrs.push("shape=doublecircle".to_string());
        }
        let attrs = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        writeln!(out, "  {}{};", quote(g.name(v)), attrs).unwrap();
    }
    let mut edges: Vec<EdgeId> = (0..g.edge_count()).collect();
    edges.sort_by_key(|&e| (g.topo_pos(g.edge(e).tail), g.topo_pos(g.edge(e).head)));
    for e in edges {
        let edge = g.edge(e);
        let mut attrs = vec![format!("label={}", quote(&edge.weight.to_string()))];
        if highlight.is_some_and(|h| h.contains(&e)) {
            attrs.push("penwidth=3".to_string());
        }
        writeln!(
            out,
            "  {} -> {} [{}];",
            quote(g.name(edge.tail)),
            quote(g.name(edge.head)),
            attrs.join(", ")
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
