//! Graphviz rendering.

use std::fmt::Write;

use crate::graph::{DecoratedReebGraph, VertexKind};
use crate::rational::Canon;

fn shape(kind: &VertexKind) -> &'static str {
    match kind {
        VertexKind::Min => "invtriangle",
        VertexKind::Max => "triangle",
        VertexKind::Saddle => "diamond",
        VertexKind::TwistSaddle => "Mdiamond",
        VertexKind::Boundary { .. } => "doublecircle",
        VertexKind::Regular => "ellipse",
    }
}

pub fn export_dot(g: &DecoratedReebGraph) -> String {
    let mut out = String::from("digraph reeb {\n");
    for v in g.vertices.values() {
        let label = match &v.kind {
            VertexKind::Boundary { label, sign } => format!("{} {label} {sign}\\n{}", v.id, Canon(v.angle)),
            k => format!("{} {}\\n{}", v.id, k.name(), Canon(v.angle)),
        };
        let _ = writeln!(out, "  v{} [shape={}, label=\"{label}\"];", v.id, shape(&v.kind));
    }
    for e in g.edges.values() {
        let t = if e.twist { ",t" } else { "" };
        let _ = writeln!(out, "  v{} -> v{} [label=\"δ={}{t}\"];", e.tail, e.head, Canon(e.delta));
    }
    out.push_str("}\n");
    out
}
