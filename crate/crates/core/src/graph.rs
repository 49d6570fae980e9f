//! Decorated Reeb graphs: the combinatorial encoding of a circle-valued Morse
//! function. Vertex angles live in `R/Z`; every edge runs upward by a
//! displacement in `(0, 1]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed};

use crate::homology::{EdgeId, Multigraph, VertexId};
use crate::rational::{frac, Canon, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Pos => 1,
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    /// Index 0.
    Min,
    /// Index 2.
    Max,
    /// Index 1, pair of pants: degree 3.
    Saddle,
    /// Index 1, one circle to one circle through a cross-cap: degree 2.
    TwistSaddle,
    /// A boundary circle; `Pos` means the gradient points outward, so the
    /// single edge arrives from below.
    Boundary { label: String, sign: Sign },
    /// Degree-2 marker on a cylinder; not critical.
    Regular,
}

impl VertexKind {
    pub fn is_critical(&self) -> bool {
        !matches!(self, VertexKind::Regular | VertexKind::Boundary { .. })
    }

    /// Angles a regular value must avoid.
    pub fn blocks_regularity(&self) -> bool {
        !matches!(self, VertexKind::Regular)
    }

    pub fn index(&self) -> Option<u8> {
        match self {
            VertexKind::Min => Some(0),
            VertexKind::Saddle | VertexKind::TwistSaddle => Some(1),
            VertexKind::Max => Some(2),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            VertexKind::Min => "min",
            VertexKind::Max => "max",
            VertexKind::Saddle => "saddle",
            VertexKind::TwistSaddle => "twist-saddle",
            VertexKind::Boundary { .. } => "boundary",
            VertexKind::Regular => "regular",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: VertexId,
    pub kind: VertexKind,
    pub angle: Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    pub delta: Q,
    pub twist: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct DecoratedReebGraph {
    pub vertices: BTreeMap<VertexId, Vertex>,
    pub edges: BTreeMap<EdgeId, Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    Empty,
    AngleOutOfRange(VertexId),
    DisplacementOutOfRange(EdgeId),
    AngleInconsistent(EdgeId),
    UnknownEndpoint(EdgeId),
    Degree { vertex: VertexId, incoming: usize, outgoing: usize },
    ExtremumDirection(VertexId),
    BoundaryDirection(VertexId),
    DuplicateLabel(String),
    Disconnected,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Empty => write!(f, "graph has no vertices"),
            Diagnostic::AngleOutOfRange(v) => write!(f, "vertex {v}: angle outside [0, 1)"),
            Diagnostic::DisplacementOutOfRange(e) => write!(f, "edge {e}: displacement outside (0, 1]"),
            Diagnostic::AngleInconsistent(e) => {
                write!(f, "edge {e}: angle-consistency violated (head angle != tail angle + displacement mod 1)")
            }
            Diagnostic::UnknownEndpoint(e) => write!(f, "edge {e}: unknown endpoint"),
            Diagnostic::Degree { vertex, incoming, outgoing } => {
                write!(f, "vertex {vertex}: degree rule violated ({incoming} in, {outgoing} out)")
            }
            Diagnostic::ExtremumDirection(v) => write!(f, "vertex {v}: extremum-direction violated"),
            Diagnostic::BoundaryDirection(v) => write!(f, "vertex {v}: boundary edge direction does not match its sign"),
            Diagnostic::DuplicateLabel(l) => write!(f, "boundary label {l:?} used twice"),
            Diagnostic::Disconnected => write!(f, "underlying graph is disconnected"),
        }
    }
}

impl DecoratedReebGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: VertexId, kind: VertexKind, angle: Q) -> &mut Self {
        self.vertices.insert(id, Vertex { id, kind, angle: frac(angle) });
        self
    }

    /// Adds an edge with an explicit displacement.
    pub fn add_edge(&mut self, id: EdgeId, tail: VertexId, head: VertexId, delta: Q, twist: bool) -> &mut Self {
        self.edges.insert(id, Edge { id, tail, head, delta, twist });
        self
    }

    /// Adds an edge whose displacement is the upward gap from tail to head angle.
    pub fn connect(&mut self, id: EdgeId, tail: VertexId, head: VertexId, twist: bool) -> &mut Self {
        let delta = crate::rational::displacement(self.vertices[&tail].angle, self.vertices[&head].angle);
        self.add_edge(id, tail, head, delta, twist)
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn next_vertex_id(&self) -> VertexId {
        self.vertices.keys().next_back().map_or(0, |v| v + 1)
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.edges.keys().next_back().map_or(0, |e| e + 1)
    }

    pub fn in_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges.values().filter(|e| e.head == v).map(|e| e.id).collect()
    }

    pub fn out_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges.values().filter(|e| e.tail == v).map(|e| e.id).collect()
    }

    pub fn multigraph(&self) -> Multigraph {
        Multigraph::new(
            self.vertices.keys().copied().collect(),
            self.edges.values().map(|e| (e.id, e.tail, e.head)).collect(),
        )
    }

    pub fn twist_bits(&self) -> BTreeMap<EdgeId, u8> {
        self.edges.values().map(|e| (e.id, e.twist as u8)).collect()
    }

    pub fn boundary_labels(&self) -> Vec<String> {
        self.vertices
            .values()
            .filter_map(|v| match &v.kind {
                VertexKind::Boundary { label, .. } => Some(label.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn count_kind(&self, pred: impl Fn(&VertexKind) -> bool) -> usize {
        self.vertices.values().filter(|v| pred(&v.kind)).count()
    }

    pub fn is_valid(&self) -> bool {
        validate(self).is_empty()
    }

    /// Angles at which the fiber is not regular.
    pub fn singular_angles(&self) -> BTreeSet<Q> {
        self.vertices.values().filter(|v| v.kind.blocks_regularity()).map(|v| v.angle).collect()
    }

    pub fn all_angles(&self) -> BTreeSet<Q> {
        self.vertices.values().map(|v| v.angle).collect()
    }
}

fn degree_ok(kind: &VertexKind, incoming: usize, outgoing: usize) -> bool {
    match kind {
        VertexKind::Min | VertexKind::Max | VertexKind::Boundary { .. } => incoming + outgoing == 1,
        VertexKind::Regular | VertexKind::TwistSaddle => incoming == 1 && outgoing == 1,
        VertexKind::Saddle => matches!((incoming, outgoing), (2, 1) | (1, 2)),
    }
}

/// Every violated invariant, one diagnostic per offending vertex or edge.
pub fn validate(g: &DecoratedReebGraph) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if g.vertices.is_empty() {
        out.push(Diagnostic::Empty);
        return out;
    }
    for v in g.vertices.values() {
        if v.angle.is_negative() || v.angle >= Q::one() {
            out.push(Diagnostic::AngleOutOfRange(v.id));
        }
    }
    let mut incoming: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut outgoing: BTreeMap<VertexId, usize> = BTreeMap::new();
    for e in g.edges.values() {
        let (Some(t), Some(h)) = (g.vertices.get(&e.tail), g.vertices.get(&e.head)) else {
            out.push(Diagnostic::UnknownEndpoint(e.id));
            continue;
        };
        *outgoing.entry(e.tail).or_default() += 1;
        *incoming.entry(e.head).or_default() += 1;
        if !e.delta.is_positive() || e.delta > Q::one() {
            out.push(Diagnostic::DisplacementOutOfRange(e.id));
        } else if !(t.angle + e.delta - h.angle).is_integer() {
            out.push(Diagnostic::AngleInconsistent(e.id));
        }
    }
    let mut labels = BTreeSet::new();
    for v in g.vertices.values() {
        let i = incoming.get(&v.id).copied().unwrap_or(0);
        let o = outgoing.get(&v.id).copied().unwrap_or(0);
        if !degree_ok(&v.kind, i, o) {
            out.push(Diagnostic::Degree { vertex: v.id, incoming: i, outgoing: o });
            continue;
        }
        match &v.kind {
            VertexKind::Min if i > 0 => out.push(Diagnostic::ExtremumDirection(v.id)),
            VertexKind::Max if o > 0 => out.push(Diagnostic::ExtremumDirection(v.id)),
            VertexKind::Boundary { label, sign } => {
                let expected_in = usize::from(*sign == Sign::Pos);
                if i != expected_in {
                    out.push(Diagnostic::BoundaryDirection(v.id));
                }
                if !labels.insert(label.clone()) {
                    out.push(Diagnostic::DuplicateLabel(label.clone()));
                }
            }
            _ => {}
        }
    }
    if !g.multigraph().is_connected() {
        out.push(Diagnostic::Disconnected);
    }
    out
}

impl fmt::Display for DecoratedReebGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.vertices.values() {
            writeln!(f, "v{} {} @ {}", v.id, v.kind.name(), Canon(v.angle))?;
        }
        for e in self.edges.values() {
            writeln!(f, "e{}: v{} -> v{} δ={}{}", e.id, e.tail, e.head, Canon(e.delta), if e.twist { " t" } else { "" })?;
        }
        Ok(())
    }
}

/// Small graphs used throughout the tests and documentation.
pub mod samples {
    use super::*;
    use crate::rational::q;

    /// Sphere: minimum at 1/10, maximum at 2/5.
    pub fn sphere() -> DecoratedReebGraph {
        let mut g = DecoratedReebGraph::new();
        g.add_vertex(0, VertexKind::Min, q(1, 10))
            .add_vertex(1, VertexKind::Max, q(2, 5))
            .add_edge(0, 0, 1, q(3, 10), false);
        g
    }

    /// Torus fibred over the circle: two markers at 0 and 1/2.
    pub fn torus_fibration() -> DecoratedReebGraph {
        let mut g = DecoratedReebGraph::new();
        g.add_vertex(0, VertexKind::Regular, q(0, 1))
            .add_vertex(1, VertexKind::Regular, q(1, 2))
            .add_edge(0, 0, 1, q(1, 2), false)
            .add_edge(1, 1, 0, q(1, 2), false);
        g
    }

    /// Klein bottle: the torus fibration with an orientation-reversing gluing.
    pub fn klein_fibration() -> DecoratedReebGraph {
        let mut g = torus_fibration();
        g.edges.get_mut(&1).unwrap().twist = true;
        g
    }

    /// Height function on the torus: min, two saddles joined by a double edge, max.
    pub fn torus_height() -> DecoratedReebGraph {
        let mut g = DecoratedReebGraph::new();
        g.add_vertex(0, VertexKind::Min, q(1, 10))
            .add_vertex(1, VertexKind::Saddle, q(1, 5))
            .add_vertex(2, VertexKind::Saddle, q(3, 10))
            .add_vertex(3, VertexKind::Max, q(2, 5));
        g.connect(0, 0, 1, false).connect(1, 1, 2, false).connect(2, 1, 2, false).connect(3, 2, 3, false);
        g
    }

    /// Annulus from boundary `A` (sign -1) up to boundary `B` (sign +1).
    pub fn annulus() -> DecoratedReebGraph {
        let mut g = DecoratedReebGraph::new();
        g.add_vertex(0, VertexKind::Boundary { label: "A".into(), sign: Sign::Neg }, q(1, 10))
            .add_vertex(1, VertexKind::Boundary { label: "B".into(), sign: Sign::Pos }, q(3, 5))
            .add_edge(0, 0, 1, q(1, 2), false);
        g
    }

    /// Projective plane: min, one cross-cap saddle, max.
    pub fn projective_plane() -> DecoratedReebGraph {
        let mut g = DecoratedReebGraph::new();
        g.add_vertex(0, VertexKind::Min, q(1, 10))
            .add_vertex(1, VertexKind::TwistSaddle, q(1, 4))
            .add_vertex(2, VertexKind::Max, q(1, 2));
        g.connect(0, 0, 1, false).connect(1, 1, 2, false);
        g
    }
}
