use std::collections::BTreeMap;

use num_traits::Zero;

use super::{apply, transport_walk, Move, MoveError, PairKind, Placement, Site};
use crate::decision::CountIndex;
use crate::graph::{DecoratedReebGraph, Sign, VertexKind};
use crate::homology::{EdgeId, SignedEdge, VertexId};
use crate::invariants::{descriptor_of, subgroup_generator, BasisMap, InvariantError, MorseDescriptor};
use crate::rational::{frac, q, Q};
use crate::surface::{basis_slots, BasisSlot, SurfaceDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizeError {
    #[error(transparent)]
    Inconsistent(#[from] InvariantError),
    #[error("{} = {got} is below the minimum {min}", .which.name())]
    BelowMinimum { which: CountIndex, min: u32, got: u32 },
    #[error("minimal saddle count would be negative ({0}); no such function exists on this surface")]
    NegativeSaddles(i64),
    #[error("basis loop {0} runs around a boundary circle and must have winding 0")]
    BoundaryWinding(usize),
    #[error("cross-cap windings must sum to 0 on a non-orientable surface with boundary")]
    CrossCapSum,
    #[error("sign map keys do not match the boundary labels")]
    SignKeys,
    #[error(transparent)]
    Move(#[from] MoveError),
}

/// Smallest `(c0, c1, c2)` of a Morse function on `s` with the given
/// boundary signs, in the null-homotopic or the nonzero class.
pub fn minimal_counts(
    s: &SurfaceDescriptor,
    signs: &BTreeMap<String, Sign>,
    nonzero: bool,
) -> Result<(u32, u32, u32), RealizeError> {
    let mut labels: Vec<&String> = s.boundary.iter().collect();
    labels.sort();
    if labels != signs.keys().collect::<Vec<_>>() {
        return Err(RealizeError::SignKeys);
    }
    let (c0, c2) = if nonzero {
        (0, 0)
    } else {
        let has = |x: Sign| signs.values().any(|&v| v == x);
        (u32::from(!has(Sign::Neg)), u32::from(!has(Sign::Pos)))
    };
    let c1 = c0 as i64 + c2 as i64 - s.euler_characteristic();
    if c1 < 0 {
        return Err(RealizeError::NegativeSaddles(c1));
    }
    Ok((c0, c1 as u32, c2))
}

/// Pieces strung along the spine of the construction.
#[derive(Debug, Clone)]
enum Item {
    Handle,
    CrossCap,
    Inflow(String),
    Outflow(String),
}

struct Builder {
    g: DecoratedReebGraph,
    levels: Vec<Q>,
    next_level: usize,
    /// Walk along the spine, taking the first branch of every handle.
    spine: Vec<SignedEdge>,
}

impl Builder {
    fn new(levels: Vec<Q>) -> Self {
        Self { g: DecoratedReebGraph::new(), levels, next_level: 0, spine: Vec::new() }
    }

    fn level(&mut self) -> Q {
        let l = self.levels[self.next_level];
        self.next_level += 1;
        l
    }

    fn vertex(&mut self, kind: VertexKind) -> VertexId {
        let id = self.g.next_vertex_id();
        let l = self.level();
        self.g.add_vertex(id, kind, l);
        id
    }

    fn edge(&mut self, t: VertexId, h: VertexId, twist: bool, on_spine: bool) -> EdgeId {
        let id = self.g.next_edge_id();
        self.g.connect(id, t, h, twist);
        if on_spine {
            self.spine.push((id, 1));
        }
        id
    }

    /// Append `item` after `prev`, returning the new end of the spine.
    fn push(&mut self, prev: VertexId, item: &Item) -> VertexId {
        match item {
            Item::Handle => {
                let s = self.vertex(VertexKind::Saddle);
                self.edge(prev, s, false, true);
                let m = self.vertex(VertexKind::Saddle);
                self.edge(s, m, false, true);
                self.edge(s, m, false, false);
                m
            }
            Item::CrossCap => {
                let c = self.vertex(VertexKind::TwistSaddle);
                self.edge(prev, c, false, true);
                c
            }
            Item::Inflow(label) => {
                let b = self.vertex(VertexKind::Boundary { label: label.clone(), sign: Sign::Neg });
                let s = self.vertex(VertexKind::Saddle);
                self.edge(prev, s, false, true);
                self.edge(b, s, false, false);
                s
            }
            Item::Outflow(label) => {
                let s = self.vertex(VertexKind::Saddle);
                self.edge(prev, s, false, true);
                let b = self.vertex(VertexKind::Boundary { label: label.clone(), sign: Sign::Pos });
                self.edge(s, b, false, false);
                s
            }
        }
    }
}

fn level_count(items: &[Item]) -> usize {
    items.iter().map(|i| if matches!(i, Item::CrossCap) { 1 } else { 2 }).sum()
}

fn check_counts(d: &MorseDescriptor, min: (u32, u32, u32)) -> Result<(), RealizeError> {
    let got = (d.ctype.c0, d.ctype.c1, d.ctype.c2);
    for (which, m, g) in [(CountIndex::C0, min.0, got.0), (CountIndex::C1, min.1, got.1), (CountIndex::C2, min.2, got.2)] {
        if g < m {
            return Err(RealizeError::BelowMinimum { which, min: m, got: g });
        }
    }
    Ok(())
}

fn check_windings(d: &MorseDescriptor) -> Result<(), RealizeError> {
    let slots = basis_slots(&d.surface);
    let mut caps = 0i64;
    for (i, (slot, w)) in slots.iter().zip(&d.winding.0).enumerate() {
        match slot {
            BasisSlot::BoundaryLoop(_) if *w != 0 => return Err(RealizeError::BoundaryWinding(i)),
            BasisSlot::CrossCap(_) => caps += w,
            _ => {}
        }
    }
    if !d.surface.orientable && !d.surface.boundary.is_empty() && caps != 0 {
        return Err(RealizeError::CrossCapSum);
    }
    Ok(())
}

/// Pick a spot for a new extremum pair: the middle of the longest edge.
fn pad_site(g: &DecoratedReebGraph, kind: PairKind) -> Placement {
    let e = g.edges.values().max_by(|a, b| a.delta.cmp(&b.delta).then(b.id.cmp(&a.id))).expect("graph has an edge");
    let t = g.vertices[&e.tail].angle;
    let quarter = e.delta / Q::from(4);
    let extremum = match kind {
        PairKind::MinSaddle => t + quarter,
        PairKind::SaddleMax => t + quarter * Q::from(3),
    };
    Placement { site: Site::Edge { edge: e.id, angle: frac(t + e.delta / Q::from(2)) }, extremum: frac(extremum), upper_twist: false, leaf_twist: false }
}

fn repeat_walk(gamma: &[SignedEdge], times: i64) -> Vec<SignedEdge> {
    let one: Vec<SignedEdge> = if times >= 0 {
        gamma.to_vec()
    } else {
        gamma.iter().rev().map(|&(e, s)| (e, -s)).collect()
    };
    (0..times.unsigned_abs()).flat_map(|_| one.iter().copied()).collect()
}

/// Build a graph together with the basis map that realizes `d`.
pub fn realize_with_basis(d: &MorseDescriptor) -> Result<(DecoratedReebGraph, BasisMap), RealizeError> {
    d.check()?;
    check_windings(d)?;
    let gcd = subgroup_generator(d.winding.0.iter().copied());
    let nonzero = gcd != 0;
    let min = minimal_counts(&d.surface, &d.ctype.sign, nonzero)?;
    check_counts(d, min)?;
    let s = &d.surface;
    let mut labels: Vec<String> = s.boundary.clone();
    labels.sort();
    let neg: Vec<String> = labels.iter().filter(|l| d.ctype.sign[*l] == Sign::Neg).cloned().collect();
    let pos: Vec<String> = labels.iter().filter(|l| d.ctype.sign[*l] == Sign::Pos).cloned().collect();

    let mut items = Vec::new();
    let mut twist_main = false;
    if s.orientable {
        let handles = if nonzero { s.genus - 1 } else { s.genus };
        items.extend((0..handles).map(|_| Item::Handle));
    } else if nonzero && s.genus == 2 {
        twist_main = true;
    } else {
        let caps = if nonzero { s.genus - 2 } else { s.genus };
        items.extend((0..caps).map(|_| Item::CrossCap));
    }

    let (graph, gamma) = if nonzero {
        let turns = gcd as u32;
        items.extend(neg.iter().cloned().map(Item::Inflow));
        items.extend(pos.iter().cloned().map(Item::Outflow));
        let n = level_count(&items);
        let mut levels = vec![Q::zero()];
        levels.extend((1..=n).map(|j| q(j as i64, 2 * (n as i64 + 1))));
        let mut b = Builder::new(levels);
        let r0 = b.vertex(VertexKind::Regular);
        let mut prev = r0;
        for it in &items {
            prev = b.push(prev, it);
        }
        for j in 1..2 * turns {
            let id = b.g.next_vertex_id();
            let angle = if j % 2 == 1 { Q::new(1, 2) } else { Q::zero() };
            b.g.add_vertex(id, VertexKind::Regular, angle);
            b.edge(prev, id, false, true);
            prev = id;
        }
        b.edge(prev, r0, twist_main, true);
        let gamma = std::mem::take(&mut b.spine);
        (b.g, gamma)
    } else {
        let mut ins = neg.iter().cloned();
        let mut outs = pos.iter().cloned();
        let start = ins.next();
        let end = outs.next();
        items.extend(ins.map(Item::Inflow));
        items.extend(outs.map(Item::Outflow));
        let n = level_count(&items) + 2;
        let levels = (1..=n).map(|j| q(j as i64, n as i64 + 1)).collect();
        let mut b = Builder::new(levels);
        let mut prev = b.vertex(match start {
            Some(label) => VertexKind::Boundary { label, sign: Sign::Neg },
            None => VertexKind::Min,
        });
        for it in &items {
            prev = b.push(prev, it);
        }
        let last = b.vertex(match end {
            Some(label) => VertexKind::Boundary { label, sign: Sign::Pos },
            None => VertexKind::Max,
        });
        b.edge(prev, last, false, true);
        (b.g, Vec::new())
    };

    let mut g = graph;
    let mut gamma = gamma;
    let pads = [(PairKind::MinSaddle, d.ctype.c0 - min.0), (PairKind::SaddleMax, d.ctype.c2 - min.2)];
    for (kind, count) in pads {
        for _ in 0..count {
            let m = Move::CreatePair { kind, at: pad_site(&g, kind) };
            let step = apply(&g, &m)?;
            gamma = transport_walk(&gamma, &step.transport);
            g = step.graph;
        }
    }
    let basis: BasisMap = d
        .winding
        .0
        .iter()
        .map(|&w| if nonzero { repeat_walk(&gamma, w / gcd) } else { Vec::new() })
        .collect();
    let got = descriptor_of(&g, &basis)?;
    debug_assert!(got.surface.same_marked_surface(&d.surface) && got.ctype == d.ctype && got.winding == d.winding);
    Ok((g, basis))
}

pub fn realize(d: &MorseDescriptor) -> Result<DecoratedReebGraph, RealizeError> {
    realize_with_basis(d).map(|(g, _)| g)
}
