use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{DecoratedReebGraph, VertexKind};
use crate::homology::{EdgeId, VertexId};
use crate::rational::Q;

/// The orientation double cover and its deck involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCover {
    pub graph: DecoratedReebGraph,
    pub deck_vertices: BTreeMap<VertexId, VertexId>,
    pub deck_edges: BTreeMap<EdgeId, EdgeId>,
}

impl DoubleCover {
    /// Connected components as separate graphs.
    pub fn components(&self) -> Vec<DecoratedReebGraph> {
        self.graph
            .multigraph()
            .components()
            .into_iter()
            .map(|vs| {
                let keep: BTreeSet<VertexId> = vs.into_iter().collect();
                let mut h = DecoratedReebGraph::new();
                for v in self.graph.vertices.values().filter(|v| keep.contains(&v.id)) {
                    h.vertices.insert(v.id, v.clone());
                }
                for e in self.graph.edges.values().filter(|e| keep.contains(&e.tail)) {
                    h.edges.insert(e.id, *e);
                }
                h
            })
            .collect()
    }

    /// Check that the deck maps are an involutive automorphism of the
    /// decorated graph (boundary labels swap their sheet suffix).
    pub fn deck_is_automorphism(&self) -> bool {
        let g = &self.graph;
        let vmap = |v: &VertexId| self.deck_vertices.get(v).copied();
        let involutive = self.deck_vertices.iter().all(|(a, b)| self.deck_vertices.get(b) == Some(a))
            && self.deck_edges.iter().all(|(a, b)| self.deck_edges.get(b) == Some(a));
        let vertices_ok = self.deck_vertices.len() == g.vertices.len()
            && g.vertices.values().all(|v| {
                let Some(w) = vmap(&v.id).and_then(|w| g.vertices.get(&w)) else { return false };
                let kinds = match (&v.kind, &w.kind) {
                    (VertexKind::Boundary { label: a, sign: s }, VertexKind::Boundary { label: b, sign: t }) => {
                        s == t && swap_sheet(a).as_deref() == Some(b.as_str())
                    }
                    (a, b) => a == b,
                };
                kinds && v.angle == w.angle
            });
        let edges_ok = self.deck_edges.len() == g.edges.len()
            && g.edges.values().all(|e| {
                let Some(f) = self.deck_edges.get(&e.id).and_then(|f| g.edges.get(f)) else { return false };
                vmap(&e.tail) == Some(f.tail) && vmap(&e.head) == Some(f.head) && e.delta == f.delta && e.twist == f.twist
            });
        involutive && vertices_ok && edges_ok
    }
}

fn sheet_label(label: &str, s: u32) -> String {
    format!("{label}.{s}")
}

fn swap_sheet(label: &str) -> Option<String> {
    let (base, s) = label.rsplit_once('.')?;
    match s {
        "0" => Some(sheet_label(base, 1)),
        "1" => Some(sheet_label(base, 0)),
        _ => None,
    }
}

/// Orientation double cover. Vertex `v` lifts to `2v` and `2v+1`, edge `e`
/// to `2e` and `2e+1`; an edge with twist bit 1 changes sheet. A twist
/// saddle at angle θ lifts to a merging saddle `2v` at θ followed by a
/// splitting saddle `2v+1` halfway along its outgoing edge, both fixed by
/// the deck involution.
pub fn orientation_double_cover(g: &DecoratedReebGraph) -> DoubleCover {
    let mut h = DecoratedReebGraph::new();
    let mut deck_vertices = BTreeMap::new();
    let mut deck_edges = BTreeMap::new();
    let half = Q::new(1, 2);
    let is_twist = |v: VertexId| g.vertices[&v].kind == VertexKind::TwistSaddle;
    let out_delta = |v: VertexId| g.edges[&g.out_edges(v)[0]].delta;
    for v in g.vertices.values() {
        if v.kind == VertexKind::TwistSaddle {
            let (m, s) = (2 * v.id, 2 * v.id + 1);
            h.add_vertex(m, VertexKind::Saddle, v.angle);
            h.add_vertex(s, VertexKind::Saddle, v.angle + out_delta(v.id) * half);
            deck_vertices.insert(m, m);
            deck_vertices.insert(s, s);
            continue;
        }
        for s in 0..2 {
            let kind = match &v.kind {
                VertexKind::Boundary { label, sign } => VertexKind::Boundary { label: sheet_label(label, s), sign: *sign },
                k => k.clone(),
            };
            h.add_vertex(2 * v.id + s, kind, v.angle);
            deck_vertices.insert(2 * v.id + s, 2 * v.id + (1 - s));
        }
    }
    for e in g.edges.values() {
        let tail_twist = is_twist(e.tail);
        let delta = if tail_twist { e.delta * half } else { e.delta };
        for s in 0..2u32 {
            let tail = if tail_twist { 2 * e.tail + 1 } else { 2 * e.tail + s };
            let head = if is_twist(e.head) { 2 * e.head } else { 2 * e.head + (s ^ e.twist as u32) };
            h.add_edge(2 * e.id + s, tail, head, delta, false);
            deck_edges.insert(2 * e.id + s, 2 * e.id + (1 - s));
        }
    }
    let base = 2 * g.next_edge_id();
    for v in g.vertices.values().filter(|v| v.kind == VertexKind::TwistSaddle) {
        let id = base + v.id;
        h.add_edge(id, 2 * v.id, 2 * v.id + 1, out_delta(v.id) * half, false);
        deck_edges.insert(id, id);
    }
    DoubleCover { graph: h, deck_vertices, deck_edges }
}
