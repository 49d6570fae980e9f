//! Cutting the surface along a regular fiber: the circle-valued function
//! lifts to a real-valued one on the cut surface with values in `[a, a + 1]`.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{DecoratedReebGraph, Sign, VertexKind};
use crate::homology::{EdgeId, Multigraph, VertexId};
use crate::invariants::{is_regular, CriticalType, InvariantError};
use crate::rational::{frac, lift_from, Q};
use num_traits::One;

/// Vertex of a cut piece, ordered so originals come first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PieceKey {
    Orig(VertexId),
    /// Lower end of a severed circle, at level `a`.
    Bottom(usize),
    /// Upper end of a severed circle, at level `a + 1`.
    Top(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StubPart {
    Whole,
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceEdge {
    pub edge: EdgeId,
    pub part: StubPart,
    pub tail: PieceKey,
    pub head: PieceKey,
    pub twist: bool,
}

/// Where a fiber circle came from: an edge crossing the cut angle, or a
/// marker vertex sitting exactly on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkOrigin {
    Marker(VertexId),
    Edge(EdgeId),
}

/// A connected piece of the cut surface with a real-valued lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealPiece {
    pub levels: BTreeMap<PieceKey, Q>,
    pub edges: Vec<PieceEdge>,
}

impl RealPiece {
    pub fn has_bottom(&self) -> bool {
        self.levels.keys().any(|k| matches!(k, PieceKey::Bottom(_)))
    }

    pub fn has_top(&self) -> bool {
        self.levels.keys().any(|k| matches!(k, PieceKey::Top(_)))
    }

    pub fn bottom_marks(&self) -> Vec<usize> {
        self.levels.keys().filter_map(|k| if let PieceKey::Bottom(i) = k { Some(*i) } else { None }).collect()
    }

    pub fn top_marks(&self) -> Vec<usize> {
        self.levels.keys().filter_map(|k| if let PieceKey::Top(i) = k { Some(*i) } else { None }).collect()
    }

    pub fn original_vertices(&self) -> Vec<VertexId> {
        self.levels.keys().filter_map(|k| if let PieceKey::Orig(v) = k { Some(*v) } else { None }).collect()
    }

    /// Critical type of the restriction; cut circles carry no sign entry.
    pub fn critical_type(&self, g: &DecoratedReebGraph) -> CriticalType {
        let mut t = CriticalType::default();
        for v in self.original_vertices() {
            match &g.vertices[&v].kind {
                VertexKind::Min => t.c0 += 1,
                VertexKind::Max => t.c2 += 1,
                VertexKind::Saddle | VertexKind::TwistSaddle => t.c1 += 1,
                VertexKind::Boundary { label, sign } => {
                    t.sign.insert(label.clone(), *sign);
                }
                VertexKind::Regular => {}
            }
        }
        t
    }

    /// The piece's critical type viewed as a real-valued Morse function:
    /// bottom cut circles act as negative boundary, top ones as positive.
    pub fn real_type(&self, g: &DecoratedReebGraph) -> CriticalType {
        let mut t = self.critical_type(g);
        for i in self.bottom_marks() {
            t.sign.insert(format!("cut{i}"), Sign::Neg);
        }
        for i in self.top_marks() {
            t.sign.insert(format!("cut{i}"), Sign::Pos);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub angle: Q,
    pub marks: Vec<MarkOrigin>,
    pub pieces: Vec<RealPiece>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentClass {
    LowerUnessential,
    UpperUnessential,
    Essential,
}

fn is_marker_at(g: &DecoratedReebGraph, v: VertexId, a: Q) -> bool {
    let v = &g.vertices[&v];
    v.kind == VertexKind::Regular && v.angle == a
}

pub fn cut_at(g: &DecoratedReebGraph, a: Q) -> Result<Cut, InvariantError> {
    crate::invariants::extract_critical_type(g)?;
    let a = frac(a);
    if !is_regular(g, a) {
        return Err(InvariantError::NotRegular(a));
    }
    let top = a + Q::one();
    let mut marks: Vec<MarkOrigin> = g
        .vertices
        .values()
        .filter(|v| is_marker_at(g, v.id, a))
        .map(|v| MarkOrigin::Marker(v.id))
        .collect();
    for e in g.edges.values() {
        if is_marker_at(g, e.tail, a) || is_marker_at(g, e.head, a) {
            continue;
        }
        let t = lift_from(a, g.vertices[&e.tail].angle);
        if t + e.delta > top {
            marks.push(MarkOrigin::Edge(e.id));
        }
    }
    let mark_of: BTreeMap<MarkOrigin, usize> = marks.iter().enumerate().map(|(i, m)| (*m, i)).collect();

    let mut levels: BTreeMap<PieceKey, Q> = BTreeMap::new();
    for v in g.vertices.values() {
        if let Some(&i) = mark_of.get(&MarkOrigin::Marker(v.id)) {
            levels.insert(PieceKey::Bottom(i), a);
            levels.insert(PieceKey::Top(i), top);
        } else {
            levels.insert(PieceKey::Orig(v.id), lift_from(a, v.angle));
        }
    }
    let mut edges = Vec::new();
    for e in g.edges.values() {
        let tail = match mark_of.get(&MarkOrigin::Marker(e.tail)) {
            Some(&i) => PieceKey::Bottom(i),
            None => PieceKey::Orig(e.tail),
        };
        let head = match mark_of.get(&MarkOrigin::Marker(e.head)) {
            Some(&i) => PieceKey::Top(i),
            None => PieceKey::Orig(e.head),
        };
        if let Some(&i) = mark_of.get(&MarkOrigin::Edge(e.id)) {
            levels.insert(PieceKey::Top(i), top);
            levels.insert(PieceKey::Bottom(i), a);
            edges.push(PieceEdge { edge: e.id, part: StubPart::Lower, tail, head: PieceKey::Top(i), twist: e.twist });
            edges.push(PieceEdge { edge: e.id, part: StubPart::Upper, tail: PieceKey::Bottom(i), head, twist: e.twist });
        } else {
            edges.push(PieceEdge { edge: e.id, part: StubPart::Whole, tail, head, twist: e.twist });
        }
    }

    // Connected components over piece keys.
    let keys: Vec<PieceKey> = levels.keys().copied().collect();
    let idx: BTreeMap<PieceKey, u32> = keys.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
    let mg = Multigraph::new(
        (0..keys.len() as u32).collect(),
        edges.iter().enumerate().map(|(i, pe)| (i as u32, idx[&pe.tail], idx[&pe.head])).collect(),
    );
    let pieces = mg
        .components()
        .into_iter()
        .map(|comp| {
            let members: BTreeSet<PieceKey> = comp.iter().map(|&i| keys[i as usize]).collect();
            RealPiece {
                levels: members.iter().map(|k| (*k, levels[k])).collect(),
                edges: edges.iter().filter(|pe| members.contains(&pe.tail)).cloned().collect(),
            }
        })
        .collect();
    Ok(Cut { angle: a, marks, pieces })
}

impl Cut {
    pub fn classify(&self) -> Vec<ComponentClass> {
        if self.marks.is_empty() {
            return vec![ComponentClass::Essential; self.pieces.len()];
        }
        self.pieces
            .iter()
            .map(|p| match (p.has_bottom(), p.has_top()) {
                (true, false) => ComponentClass::LowerUnessential,
                (false, true) => ComponentClass::UpperUnessential,
                _ => ComponentClass::Essential,
            })
            .collect()
    }

    /// Index of the piece containing an original vertex.
    pub fn piece_of(&self, v: VertexId) -> Option<usize> {
        self.pieces.iter().position(|p| p.levels.contains_key(&PieceKey::Orig(v)))
    }

    /// Glue every top mark back to the bottom mark with the same index.
    pub fn reassemble(&self) -> DecoratedReebGraph {
        let a = self.angle;
        let mut g = DecoratedReebGraph::new();
        let mut level: BTreeMap<PieceKey, Q> = BTreeMap::new();
        for p in &self.pieces {
            level.extend(p.levels.iter().map(|(k, q)| (*k, *q)));
        }
        let resolve = |k: PieceKey| -> Option<VertexId> {
            match k {
                PieceKey::Orig(v) => Some(v),
                PieceKey::Bottom(i) | PieceKey::Top(i) => match self.marks[i] {
                    MarkOrigin::Marker(v) => Some(v),
                    MarkOrigin::Edge(_) => None,
                },
            }
        };
        for (k, q) in &level {
            if let PieceKey::Orig(v) = k {
                // Kinds are not stored on pieces; reassemble leaves them to the caller.
                g.add_vertex(*v, VertexKind::Regular, *q);
            }
        }
        for m in &self.marks {
            if let MarkOrigin::Marker(v) = m {
                g.add_vertex(*v, VertexKind::Regular, a);
            }
        }
        let mut halves: BTreeMap<EdgeId, (Option<(VertexId, Q)>, Option<(VertexId, Q)>, bool)> = BTreeMap::new();
        for p in &self.pieces {
            for pe in &p.edges {
                let dl = level[&pe.head] - level[&pe.tail];
                match pe.part {
                    StubPart::Whole => {
                        g.add_edge(pe.edge, resolve(pe.tail).unwrap(), resolve(pe.head).unwrap(), dl, pe.twist);
                    }
                    StubPart::Lower => {
                        halves.entry(pe.edge).or_insert((None, None, pe.twist)).0 = Some((resolve(pe.tail).unwrap(), dl));
                    }
                    StubPart::Upper => {
                        halves.entry(pe.edge).or_insert((None, None, pe.twist)).1 = Some((resolve(pe.head).unwrap(), dl));
                    }
                }
            }
        }
        for (e, (lo, hi, twist)) in halves {
            let (t, d1) = lo.expect("lower stub");
            let (h, d2) = hi.expect("upper stub");
            g.add_edge(e, t, h, d1 + d2, twist);
        }
        g
    }
}

/// Classification of each component of the fiber complement at `a`.
pub fn component_images(g: &DecoratedReebGraph, a: Q) -> Result<Vec<ComponentClass>, InvariantError> {
    Ok(cut_at(g, a)?.classify())
}

/// Whether every component of the complement of the fiber at `a` is essential.
pub fn is_reduced(g: &DecoratedReebGraph, a: Q) -> Result<bool, InvariantError> {
    Ok(component_images(g, a)?.iter().all(|c| *c == ComponentClass::Essential))
}

/// Reassemble and restore vertex kinds from the original graph.
pub fn reassemble_with_kinds(cut: &Cut, original: &DecoratedReebGraph) -> DecoratedReebGraph {
    let mut g = cut.reassemble();
    for v in g.vertices.values_mut() {
        if let Some(o) = original.vertices.get(&v.id) {
            v.kind = o.kind.clone();
        }
    }
    g
}
