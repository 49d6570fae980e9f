//! Elementary moves on decorated Reeb graphs. Each move keeps the graph
//! valid and either preserves the critical type or changes it by one
//! cancelling pair; replaying a list of moves witnesses a path through Morse
//! functions.

mod certificate;
mod circle_map;
mod cover;
mod realize;
mod redistribute;
mod reduce;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

pub use certificate::{fingerprint, replay, CertificateError, MoveCertificate};
pub use circle_map::{CircleMap, CircleMapError};
pub use cover::{orientation_double_cover, DoubleCover};
pub use realize::{minimal_counts, realize, realize_with_basis, RealizeError};
pub use redistribute::{piece_targets, redistribute, RedistributeError};
pub use reduce::reduce_unessential_all;

use crate::cut::{cut_at, ComponentClass, MarkOrigin, PieceKey};
use crate::graph::{validate, DecoratedReebGraph, Diagnostic, VertexKind};
use crate::homology::{EdgeId, SignedEdge, VertexId};
use crate::rational::{displacement, frac, lift_from, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairKind {
    /// A minimum and a merging saddle.
    MinSaddle,
    /// A splitting saddle and a maximum.
    SaddleMax,
}

impl PairKind {
    pub fn code(self) -> &'static str {
        match self {
            PairKind::MinSaddle => "01",
            PairKind::SaddleMax => "12",
        }
    }
}

/// Where a saddle is inserted: inside an edge at a given angle, or in place
/// of a marker vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Site {
    Edge { edge: EdgeId, angle: Q },
    Marker(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Placement {
    pub site: Site,
    pub extremum: Q,
    /// Twist bit of the upper half of the split host edge.
    pub upper_twist: bool,
    pub leaf_twist: bool,
}

impl Placement {
    pub fn on_edge(edge: EdgeId, angle: Q, extremum: Q) -> Self {
        Self { site: Site::Edge { edge, angle }, extremum, upper_twist: false, leaf_twist: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    CreatePair { kind: PairKind, at: Placement },
    CancelPair { extremum: VertexId, saddle: VertexId },
    /// Move the extremum/saddle pair hanging off `edge` to a new place.
    ShiftTerminalEdge { edge: EdgeId, to: Placement },
    /// Push an unessential component of the complement of the fiber at
    /// `angle` off that fiber.
    ReduceUnessential { angle: Q, component: Vec<VertexId> },
    Reangle(CircleMap),
    /// Shift the lifted value of each listed vertex; edge displacements
    /// change by the difference of the shifts at their ends.
    Retime { shifts: Vec<(VertexId, Q)> },
    InsertMarker { edge: EdgeId, angle: Q, upper_twist: bool },
    RemoveMarker { vertex: VertexId },
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::CreatePair { .. } => "create-pair",
            Move::CancelPair { .. } => "cancel-pair",
            Move::ShiftTerminalEdge { .. } => "shift",
            Move::ReduceUnessential { .. } => "reduce",
            Move::Reangle(_) => "reangle",
            Move::Retime { .. } => "retime",
            Move::InsertMarker { .. } => "insert-marker",
            Move::RemoveMarker { .. } => "remove-marker",
        }
    }

    /// Change of `(c0, c1, c2)` this move causes.
    pub fn count_delta(&self, g: &DecoratedReebGraph) -> (i64, i64, i64) {
        match self {
            Move::CreatePair { kind: PairKind::MinSaddle, .. } => (1, 1, 0),
            Move::CreatePair { kind: PairKind::SaddleMax, .. } => (0, 1, 1),
            Move::CancelPair { extremum, .. } => match g.vertices.get(extremum).map(|v| &v.kind) {
                Some(VertexKind::Min) => (-1, -1, 0),
                _ => (0, -1, -1),
            },
            _ => (0, 0, 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("input graph is invalid: {0:?}")]
    InvalidInput(Vec<Diagnostic>),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} is not an extremum")]
    NotExtremum(VertexId),
    #[error("vertex {0} is not a saddle of the matching type")]
    NotSaddle(VertexId),
    #[error("extremum {0} is not joined to saddle {1} by its unique edge")]
    NotLeafPair(VertexId, VertexId),
    #[error("edge {0} is not the terminal edge of an extremum")]
    NotTerminal(EdgeId),
    #[error("vertex angle {0} lies strictly between the extremum and the saddle")]
    Intervening(Q),
    #[error("angle {0} is not strictly inside edge {1}")]
    OutsideEdge(Q, EdgeId),
    #[error("cannot place on the edge being moved")]
    SelfPlacement,
    #[error("vertex {0} is not a marker")]
    NotMarker(VertexId),
    #[error("marker {0} cannot be removed: merged displacement would exceed one turn or it sits on a loop")]
    MarkerStuck(VertexId),
    #[error("vertex set is not an unessential component at angle {0}")]
    NotUnessential(Q),
    #[error("retime leaves edge {0} with a displacement outside (0, 1]")]
    Retime(EdgeId),
    #[error(transparent)]
    CircleMap(#[from] CircleMapError),
    #[error(transparent)]
    Invariant(#[from] crate::invariants::InvariantError),
    #[error("move produced an invalid graph: {0:?}")]
    Broken(Vec<Diagnostic>),
}

/// Image of each changed edge as a walk in the new graph; unchanged edges map
/// to themselves.
pub type Transport = BTreeMap<EdgeId, Vec<SignedEdge>>;

#[derive(Debug, Clone)]
pub struct Applied {
    pub graph: DecoratedReebGraph,
    pub transport: Transport,
}

pub fn transport_walk(walk: &[SignedEdge], t: &Transport) -> Vec<SignedEdge> {
    let mut out = Vec::new();
    for &(e, s) in walk {
        match t.get(&e) {
            None => out.push((e, s)),
            Some(img) if s > 0 => out.extend(img.iter().copied()),
            Some(img) => out.extend(img.iter().rev().map(|&(f, r)| (f, -r))),
        }
    }
    out
}

/// `second ∘ first`.
pub fn compose_transport(first: &Transport, second: &Transport) -> Transport {
    let mut out: Transport = first.iter().map(|(e, img)| (*e, transport_walk(img, second))).collect();
    for (e, img) in second {
        out.entry(*e).or_insert_with(|| img.clone());
    }
    out
}

fn vertex<'a>(g: &'a DecoratedReebGraph, v: VertexId) -> Result<&'a crate::graph::Vertex, MoveError> {
    g.vertices.get(&v).ok_or(MoveError::UnknownVertex(v))
}

fn edge(g: &DecoratedReebGraph, e: EdgeId) -> Result<crate::graph::Edge, MoveError> {
    g.edges.get(&e).copied().ok_or(MoveError::UnknownEdge(e))
}

/// An extremum, the saddle its single edge reaches, and the saddle's two
/// other edges (`low` enters the saddle, `high` leaves it).
#[derive(Debug, Clone, Copy)]
struct LeafPair {
    kind: PairKind,
    extremum: VertexId,
    saddle: VertexId,
    leaf: EdgeId,
    low: EdgeId,
    high: EdgeId,
}

fn leaf_pair(g: &DecoratedReebGraph, x: VertexId) -> Result<LeafPair, MoveError> {
    let xv = vertex(g, x)?;
    let (kind, leaf) = match xv.kind {
        VertexKind::Min => (PairKind::MinSaddle, g.out_edges(x)[0]),
        VertexKind::Max => (PairKind::SaddleMax, g.in_edges(x)[0]),
        _ => return Err(MoveError::NotExtremum(x)),
    };
    let le = g.edges[&leaf];
    let s = if kind == PairKind::MinSaddle { le.head } else { le.tail };
    if g.vertices[&s].kind != VertexKind::Saddle {
        return Err(MoveError::NotSaddle(s));
    }
    let ins: Vec<EdgeId> = g.in_edges(s).into_iter().filter(|&e| e != leaf).collect();
    let outs: Vec<EdgeId> = g.out_edges(s).into_iter().filter(|&e| e != leaf).collect();
    match (kind, ins.len(), outs.len()) {
        (PairKind::MinSaddle, 1, 1) | (PairKind::SaddleMax, 1, 1) => {}
        _ => return Err(MoveError::NotSaddle(s)),
    }
    Ok(LeafPair { kind, extremum: x, saddle: s, leaf, low: ins[0], high: outs[0] })
}

/// Leaf pair whose terminal edge is `e`.
fn leaf_pair_of_edge(g: &DecoratedReebGraph, e: EdgeId) -> Result<LeafPair, MoveError> {
    let ed = edge(g, e)?;
    for x in [ed.tail, ed.head] {
        if matches!(g.vertices[&x].kind, VertexKind::Min | VertexKind::Max) {
            return leaf_pair(g, x);
        }
    }
    Err(MoveError::NotTerminal(e))
}

/// All extremum/saddle pairs in the graph, by extremum id.
pub fn leaf_pairs(g: &DecoratedReebGraph) -> Vec<(VertexId, VertexId, PairKind)> {
    g.vertices
        .keys()
        .filter_map(|&x| leaf_pair(g, x).ok())
        .map(|p| (p.extremum, p.saddle, p.kind))
        .collect()
}

/// Angles strictly inside the open arc swept by edge `e`, excluding `skip`.
fn angles_inside(g: &DecoratedReebGraph, e: EdgeId, skip: &[VertexId]) -> Option<Q> {
    let ed = g.edges[&e];
    let t = g.vertices[&ed.tail].angle;
    g.vertices
        .values()
        .filter(|v| !skip.contains(&v.id))
        .map(|v| v.angle)
        .find(|&a| {
            let off = frac(a - t);
            !off.is_zero() && off < ed.delta
        })
}

/// Remove a leaf pair. Returns the new graph, the transport, and the site that
/// re-inserting at the old position would use.
fn detach(g: &DecoratedReebGraph, p: &LeafPair) -> (DecoratedReebGraph, Transport, Site) {
    let mut h = g.clone();
    let low = g.edges[&p.low];
    let high = g.edges[&p.high];
    let s_angle = g.vertices[&p.saddle].angle;
    h.vertices.remove(&p.extremum);
    h.edges.remove(&p.leaf);
    let mut t = Transport::new();
    t.insert(p.leaf, Vec::new());
    if p.low != p.high && low.delta + high.delta <= Q::one() {
        let m = g.next_edge_id();
        h.vertices.remove(&p.saddle);
        h.edges.remove(&p.low);
        h.edges.remove(&p.high);
        h.add_edge(m, low.tail, high.head, low.delta + high.delta, low.twist ^ high.twist);
        t.insert(p.low, vec![(m, 1)]);
        t.insert(p.high, Vec::new());
        (h, t, Site::Edge { edge: m, angle: s_angle })
    } else {
        h.vertices.get_mut(&p.saddle).unwrap().kind = VertexKind::Regular;
        (h, t, Site::Marker(p.saddle))
    }
}

/// Insert a saddle at `at.site` with an extremum hanging off it.
fn attach(
    g: &DecoratedReebGraph,
    kind: PairKind,
    at: &Placement,
    ids: Option<(VertexId, VertexId, EdgeId)>,
) -> Result<(DecoratedReebGraph, Transport), MoveError> {
    let mut h = g.clone();
    let mut t = Transport::new();
    let ext_kind = match kind {
        PairKind::MinSaddle => VertexKind::Min,
        PairKind::SaddleMax => VertexKind::Max,
    };
    let x_angle = frac(at.extremum);
    let (s, s_angle) = match &at.site {
        Site::Edge { edge: e, angle } => {
            let ed = edge(g, *e)?;
            let tail_angle = g.vertices[&ed.tail].angle;
            let d1 = frac(*angle - tail_angle);
            if d1.is_zero() || d1 >= ed.delta {
                return Err(MoveError::OutsideEdge(*angle, *e));
            }
            let s = match ids {
                Some((s, _, _)) if !h.vertices.contains_key(&s) => s,
                _ => h.next_vertex_id(),
            };
            h.add_vertex(s, VertexKind::Saddle, frac(*angle));
            let lo = h.next_edge_id().max(ids.map_or(0, |i| i.2 + 1));
            let hi = lo + 1;
            h.edges.remove(e);
            h.add_edge(lo, ed.tail, s, d1, ed.twist ^ at.upper_twist);
            h.add_edge(hi, s, ed.head, ed.delta - d1, at.upper_twist);
            t.insert(*e, vec![(lo, 1), (hi, 1)]);
            (s, frac(*angle))
        }
        Site::Marker(v) => {
            let vv = vertex(g, *v)?;
            if vv.kind != VertexKind::Regular {
                return Err(MoveError::NotMarker(*v));
            }
            if at.upper_twist {
                let out = g.out_edges(*v)[0];
                let inn = g.in_edges(*v)[0];
                if out == inn {
                    return Err(MoveError::NotMarker(*v));
                }
                h.edges.get_mut(&out).unwrap().twist ^= true;
                h.edges.get_mut(&inn).unwrap().twist ^= true;
            }
            h.vertices.get_mut(v).unwrap().kind = VertexKind::Saddle;
            (*v, vv.angle)
        }
    };
    let x = match ids {
        Some((_, x, _)) if !h.vertices.contains_key(&x) => x,
        _ => h.next_vertex_id(),
    };
    let leaf = match ids {
        Some((_, _, l)) if !h.edges.contains_key(&l) => l,
        _ => h.next_edge_id(),
    };
    h.add_vertex(x, ext_kind, x_angle);
    match kind {
        PairKind::MinSaddle => h.add_edge(leaf, x, s, displacement(x_angle, s_angle), at.leaf_twist),
        PairKind::SaddleMax => h.add_edge(leaf, s, x, displacement(s_angle, x_angle), at.leaf_twist),
    };
    Ok((h, t))
}

fn reduce_component(g: &DecoratedReebGraph, a: Q, component: &[VertexId]) -> Result<DecoratedReebGraph, MoveError> {
    let a = frac(a);
    let cut = cut_at(g, a)?;
    let want: BTreeSet<VertexId> = component.iter().copied().collect();
    let classes = cut.classify();
    let (idx, class) = cut
        .pieces
        .iter()
        .enumerate()
        .find(|(_, p)| p.original_vertices().into_iter().collect::<BTreeSet<_>>() == want)
        .map(|(i, _)| (i, classes[i]))
        .ok_or(MoveError::NotUnessential(a))?;
    if class == ComponentClass::Essential {
        return Err(MoveError::NotUnessential(a));
    }
    let piece = &cut.pieces[idx];
    // Vertices that move: the piece's own vertices plus markers on its cut circles.
    let mut moving: BTreeMap<VertexId, Q> = BTreeMap::new();
    for (k, level) in &piece.levels {
        match k {
            PieceKey::Orig(v) => {
                moving.insert(*v, *level);
            }
            PieceKey::Bottom(i) | PieceKey::Top(i) => {
                if let MarkOrigin::Marker(v) = cut.marks[*i] {
                    moving.insert(v, *level);
                }
            }
        }
    }
    let level_of = |v: VertexId| lift_from(a, g.vertices[&v].angle);
    let one = Q::one();
    let half = Q::new(1, 2);
    let new_level: BTreeMap<VertexId, Q> = if class == ComponentClass::LowerUnessential {
        let floor = g
            .edges
            .values()
            .filter(|e| moving.contains_key(&e.head) && !moving.contains_key(&e.tail))
            .map(|e| level_of(e.tail) - one)
            .max()
            .ok_or(MoveError::NotUnessential(a))?;
        moving.iter().map(|(v, l)| (*v, floor + (a - floor) * (*l - a + one) * half)).collect()
    } else {
        let ceil = g
            .edges
            .values()
            .filter(|e| moving.contains_key(&e.tail) && !moving.contains_key(&e.head))
            .map(|e| level_of(e.head) + one)
            .min()
            .ok_or(MoveError::NotUnessential(a))?;
        let top = a + one;
        moving.iter().map(|(v, l)| (*v, top + (ceil - top) * (*l - top + one) * half)).collect()
    };
    let mut h = g.clone();
    for (v, l) in &new_level {
        h.vertices.get_mut(v).unwrap().angle = frac(*l);
    }
    for e in h.edges.values_mut() {
        let (tm, hm) = (new_level.get(&e.tail), new_level.get(&e.head));
        if tm.is_none() && hm.is_none() {
            continue;
        }
        let tl = tm.copied().unwrap_or_else(|| level_of(e.tail));
        let hl = hm.copied().unwrap_or_else(|| level_of(e.head));
        // The lift of the head relative to the tail: differs from the old
        // displacement by the potential shift only.
        let old_tail = tm.map(|_| moving[&e.tail]).unwrap_or(tl);
        let old_head = hm.map(|_| moving[&e.head]).unwrap_or(hl);
        let wrap = old_tail + e.delta - old_head;
        e.delta = hl + wrap - tl;
    }
    Ok(h)
}

fn apply_inner(g: &DecoratedReebGraph, m: &Move) -> Result<Applied, MoveError> {
    match m {
        Move::CreatePair { kind, at } => {
            let (graph, transport) = attach(g, *kind, at, None)?;
            Ok(Applied { graph, transport })
        }
        Move::CancelPair { extremum, saddle } => {
            let p = leaf_pair(g, *extremum)?;
            if p.saddle != *saddle {
                vertex(g, *saddle)?;
                return Err(MoveError::NotLeafPair(*extremum, *saddle));
            }
            if let Some(a) = angles_inside(g, p.leaf, &[p.extremum, p.saddle]) {
                return Err(MoveError::Intervening(a));
            }
            let (graph, transport, _) = detach(g, &p);
            Ok(Applied { graph, transport })
        }
        Move::ShiftTerminalEdge { edge: e, to } => {
            let p = leaf_pair_of_edge(g, *e)?;
            let (mid, t1, old_site) = detach(g, &p);
            let site = match (&to.site, &old_site) {
                (Site::Edge { edge: d, .. }, _) if *d == p.leaf => return Err(MoveError::SelfPlacement),
                (Site::Edge { edge: d, angle }, Site::Edge { edge: m, .. }) if *d == p.low || *d == p.high => {
                    Site::Edge { edge: *m, angle: *angle }
                }
                (other, _) => other.clone(),
            };
            let to = Placement { site, ..to.clone() };
            let (graph, t2) = attach(&mid, p.kind, &to, Some((p.saddle, p.extremum, p.leaf)))?;
            Ok(Applied { graph, transport: compose_transport(&t1, &t2) })
        }
        Move::ReduceUnessential { angle, component } => {
            Ok(Applied { graph: reduce_component(g, *angle, component)?, transport: Transport::new() })
        }
        Move::Reangle(map) => {
            map.check()?;
            let mut h = g.clone();
            for e in h.edges.values_mut() {
                let t = g.vertices[&e.tail].angle;
                e.delta = map.lift(t + e.delta) - map.lift(t);
            }
            for v in h.vertices.values_mut() {
                v.angle = map.apply(v.angle);
            }
            Ok(Applied { graph: h, transport: Transport::new() })
        }
        Move::Retime { shifts } => {
            let mut shift: BTreeMap<VertexId, Q> = BTreeMap::new();
            for (v, s) in shifts {
                vertex(g, *v)?;
                if shift.insert(*v, *s).is_some() {
                    return Err(MoveError::UnknownVertex(*v));
                }
            }
            let by = |v: &VertexId| shift.get(v).copied().unwrap_or_else(Q::zero);
            let mut h = g.clone();
            for e in h.edges.values_mut() {
                e.delta += by(&e.head) - by(&e.tail);
                if e.delta <= Q::zero() || e.delta > Q::one() {
                    return Err(MoveError::Retime(e.id));
                }
            }
            for v in h.vertices.values_mut() {
                v.angle = frac(v.angle + by(&v.id));
            }
            Ok(Applied { graph: h, transport: Transport::new() })
        }
        Move::InsertMarker { edge: e, angle, upper_twist } => {
            let ed = edge(g, *e)?;
            let d1 = frac(*angle - g.vertices[&ed.tail].angle);
            if d1.is_zero() || d1 >= ed.delta {
                return Err(MoveError::OutsideEdge(*angle, *e));
            }
            let mut h = g.clone();
            let v = h.next_vertex_id();
            let lo = h.next_edge_id();
            h.add_vertex(v, VertexKind::Regular, *angle);
            h.edges.remove(e);
            h.add_edge(lo, ed.tail, v, d1, ed.twist ^ upper_twist);
            h.add_edge(lo + 1, v, ed.head, ed.delta - d1, *upper_twist);
            let transport = Transport::from([(*e, vec![(lo, 1), (lo + 1, 1)])]);
            Ok(Applied { graph: h, transport })
        }
        Move::RemoveMarker { vertex: v } => {
            if vertex(g, *v)?.kind != VertexKind::Regular {
                return Err(MoveError::NotMarker(*v));
            }
            let inn = edge(g, g.in_edges(*v)[0])?;
            let out = edge(g, g.out_edges(*v)[0])?;
            if inn.id == out.id || inn.delta + out.delta > Q::one() {
                return Err(MoveError::MarkerStuck(*v));
            }
            let mut h = g.clone();
            let m = g.next_edge_id();
            h.vertices.remove(v);
            h.edges.remove(&inn.id);
            h.edges.remove(&out.id);
            h.add_edge(m, inn.tail, out.head, inn.delta + out.delta, inn.twist ^ out.twist);
            let transport = Transport::from([(inn.id, vec![(m, 1)]), (out.id, Vec::new())]);
            Ok(Applied { graph: h, transport })
        }
    }
}

/// Apply one move to a valid graph.
pub fn apply(g: &DecoratedReebGraph, m: &Move) -> Result<Applied, MoveError> {
    let d = validate(g);
    if !d.is_empty() {
        return Err(MoveError::InvalidInput(d));
    }
    let out = apply_inner(g, m)?;
    let d = validate(&out.graph);
    if !d.is_empty() {
        return Err(MoveError::Broken(d));
    }
    Ok(out)
}

/// Apply a sequence of moves, composing their transports.
pub fn apply_all(g: &DecoratedReebGraph, moves: &[Move]) -> Result<Applied, MoveError> {
    let mut cur = Applied { graph: g.clone(), transport: Transport::new() };
    for m in moves {
        let step = apply(&cur.graph, m)?;
        cur = Applied { graph: step.graph, transport: compose_transport(&cur.transport, &step.transport) };
    }
    Ok(cur)
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::move_line(self))
    }
}

#[cfg(test)]
mod tests;
