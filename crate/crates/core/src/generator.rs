//! Deterministic random graphs and exhaustive enumeration of small graphs.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{DecoratedReebGraph, Sign, VertexKind};
use crate::homology::{cycle_basis, VertexId};
use crate::invariants::{BasisMap, CriticalType, InvariantError, MorseDescriptor, WindingVector};
use crate::iso::{find_isomorphism, AngleRule};
use crate::moves::{
    apply, leaf_pairs, realize_with_basis, transport_walk, CircleMap, Move, PairKind, Placement, Site,
};
use crate::rational::{displacement, frac, q, Q};
use crate::surface::{basis_slots, BasisSlot, SurfaceDescriptor};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub max_vertices: usize,
    pub max_saddles: usize,
    pub allow_nonorientable: bool,
    pub allow_boundary: bool,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self { max_vertices: 8, max_saddles: 4, allow_nonorientable: true, allow_boundary: true, seed: 0 }
    }
}

impl GenParams {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("bounds must be positive")]
    Bounds,
    #[error("no graph within bounds after {0} attempts")]
    Exhausted(usize),
}

const ATTEMPTS: usize = 200;

fn small_rational(rng: &mut ChaCha8Rng) -> Q {
    let d = rng.gen_range(2..=12i128);
    Q::new(rng.gen_range(0..d), d)
}

/// Strictly between 0 and 1.
fn open_fraction(rng: &mut ChaCha8Rng) -> Q {
    let d = rng.gen_range(2..=12i128);
    Q::new(rng.gen_range(1..d), d)
}

fn random_descriptor(p: &GenParams, rng: &mut ChaCha8Rng) -> MorseDescriptor {
    let orientable = !p.allow_nonorientable || rng.gen_bool(0.6);
    let genus = if orientable { rng.gen_range(0..=2) } else { rng.gen_range(1..=3) };
    let nb = if p.allow_boundary { rng.gen_range(0..=2usize) } else { 0 };
    let labels: Vec<String> = (0..nb).map(|i| format!("B{i}")).collect();
    let surface = SurfaceDescriptor::new(orientable, genus, labels.clone()).expect("valid surface");
    let mut winding = vec![0i64; crate::surface::h1_free_rank(&surface)];
    if rng.gen_bool(0.5) {
        let slots = basis_slots(&surface);
        let caps: Vec<usize> = (0..slots.len()).filter(|&i| matches!(slots[i], BasisSlot::CrossCap(_))).collect();
        for (i, s) in slots.iter().enumerate() {
            if matches!(s, BasisSlot::HandleA(_) | BasisSlot::HandleB(_) | BasisSlot::CrossCap(_)) {
                winding[i] = rng.gen_range(-2..=2);
            }
        }
        if !surface.orientable && nb > 0 {
            if let Some(&last) = caps.last() {
                let others: i64 = caps.iter().filter(|&&c| c != last).map(|&c| winding[c]).sum();
                winding[last] = -others;
            }
        }
    }
    let nonzero = winding.iter().any(|&w| w != 0);
    let mut sign = BTreeMap::new();
    for l in &labels {
        sign.insert(l.clone(), if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg });
    }
    let min = crate::moves::minimal_counts(&surface, &sign, nonzero).unwrap_or((1, 0, 1));
    let ctype = CriticalType { c0: min.0, c1: min.1, c2: min.2, sign };
    MorseDescriptor { surface, ctype, winding: WindingVector(winding) }
}

/// Pick a random move that is likely to be legal on `g`.
pub fn random_move(g: &DecoratedReebGraph, rng: &mut ChaCha8Rng, twists: bool) -> Option<Move> {
    let edges: Vec<_> = g.edges.values().copied().collect();
    let vertices: Vec<VertexId> = g.vertices.keys().copied().collect();
    let bit = |rng: &mut ChaCha8Rng| twists && rng.gen_bool(0.3);
    match rng.gen_range(0..8) {
        0 | 1 => {
            let e = edges.choose(rng)?;
            let angle = frac(g.vertices[&e.tail].angle + e.delta * open_fraction(rng));
            let kind = if rng.gen_bool(0.5) { PairKind::MinSaddle } else { PairKind::SaddleMax };
            let at = Placement {
                site: Site::Edge { edge: e.id, angle },
                extremum: small_rational(rng),
                upper_twist: bit(rng),
                leaf_twist: bit(rng),
            };
            Some(Move::CreatePair { kind, at })
        }
        2 => {
            let (x, s, _) = *leaf_pairs(g).choose(rng)?;
            Some(Move::CancelPair { extremum: x, saddle: s })
        }
        3 => {
            let (x, _, kind) = *leaf_pairs(g).choose(rng)?;
            let leaf = match kind {
                PairKind::MinSaddle => g.out_edges(x)[0],
                PairKind::SaddleMax => g.in_edges(x)[0],
            };
            let e = edges.iter().filter(|e| e.id != leaf).collect::<Vec<_>>().choose(rng).copied()?;
            let angle = frac(g.vertices[&e.tail].angle + e.delta * open_fraction(rng));
            let to = Placement {
                site: Site::Edge { edge: e.id, angle },
                extremum: small_rational(rng),
                upper_twist: bit(rng),
                leaf_twist: bit(rng),
            };
            Some(Move::ShiftTerminalEdge { edge: leaf, to })
        }
        4 => {
            let n = rng.gen_range(1..=3);
            let mut xs: Vec<Q> = (0..n).map(|_| small_rational(rng)).collect();
            xs.sort();
            xs.dedup();
            let mut ys: Vec<Q> = (0..xs.len()).map(|_| small_rational(rng)).collect();
            ys.sort();
            ys.dedup();
            if ys.len() != xs.len() {
                return Some(Move::Reangle(CircleMap::rotation(small_rational(rng))));
            }
            let shift = small_rational(rng);
            let points = xs.into_iter().zip(ys.into_iter().map(|y| y + shift)).collect();
            CircleMap::new(points).ok().map(Move::Reangle)
        }
        7 => {
            let v = *vertices.choose(rng)?;
            Some(Move::Retime { shifts: vec![(v, small_rational(rng) - q(1, 2))] })
        }
        5 => {
            let e = edges.choose(rng)?;
            let angle = frac(g.vertices[&e.tail].angle + e.delta * open_fraction(rng));
            Some(Move::InsertMarker { edge: e.id, angle, upper_twist: bit(rng) })
        }
        _ => {
            let markers: Vec<VertexId> =
                vertices.into_iter().filter(|v| g.vertices[v].kind == VertexKind::Regular).collect();
            Some(Move::RemoveMarker { vertex: *markers.choose(rng)? })
        }
    }
}

/// A random valid graph together with a basis map for its surface.
pub fn random_marked(p: &GenParams) -> Result<(DecoratedReebGraph, BasisMap), GenError> {
    if p.max_vertices == 0 || p.max_saddles == 0 {
        return Err(GenError::Bounds);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let saddles = |g: &DecoratedReebGraph| g.count_kind(|k| matches!(k, VertexKind::Saddle | VertexKind::TwistSaddle));
    for _ in 0..ATTEMPTS {
        let d = random_descriptor(p, &mut rng);
        let Ok((mut g, mut basis)) = realize_with_basis(&d) else { continue };
        if g.vertices.len() > p.max_vertices || saddles(&g) > p.max_saddles {
            continue;
        }
        let steps = rng.gen_range(0..=8);
        for _ in 0..steps {
            let Some(m) = random_move(&g, &mut rng, p.allow_nonorientable) else { continue };
            let Ok(step) = apply(&g, &m) else { continue };
            if step.graph.vertices.len() > p.max_vertices || saddles(&step.graph) > p.max_saddles {
                continue;
            }
            basis = basis.iter().map(|w| transport_walk(w, &step.transport)).collect();
            g = step.graph;
        }
        return Ok((g, basis));
    }
    Err(GenError::Exhausted(ATTEMPTS))
}

pub fn random_graph(p: &GenParams) -> Result<DecoratedReebGraph, GenError> {
    random_marked(p).map(|(g, _)| g)
}

/// Reverse the direction of the circle: angles `a -> 1 - a`, edges flipped,
/// minima and maxima swapped, boundary signs negated. Ids are kept; a walk
/// with its edge signs negated stays closed and its winding negates.
pub fn reverse_orientation(g: &DecoratedReebGraph) -> DecoratedReebGraph {
    let mut h = DecoratedReebGraph::new();
    for v in g.vertices.values() {
        let kind = match &v.kind {
            VertexKind::Min => VertexKind::Max,
            VertexKind::Max => VertexKind::Min,
            VertexKind::Boundary { label, sign } => VertexKind::Boundary { label: label.clone(), sign: sign.negate() },
            k => k.clone(),
        };
        h.add_vertex(v.id, kind, frac(-v.angle));
    }
    for e in g.edges.values() {
        h.add_edge(e.id, e.head, e.tail, e.delta, e.twist);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBounds {
    pub max_vertices: usize,
    pub allow_nonorientable: bool,
    pub allow_boundary: bool,
    pub allow_markers: bool,
}

impl EnumBounds {
    pub fn new(max_vertices: usize) -> Self {
        Self { max_vertices, allow_nonorientable: true, allow_boundary: true, allow_markers: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Min,
    Max,
    Merge,
    Split,
    Twist,
    Marker,
    Inflow,
    Outflow,
}

impl Slot {
    fn degrees(self) -> (usize, usize) {
        match self {
            Slot::Min | Slot::Inflow => (0, 1),
            Slot::Max | Slot::Outflow => (1, 0),
            Slot::Merge => (2, 1),
            Slot::Split => (1, 2),
            Slot::Twist | Slot::Marker => (1, 1),
        }
    }
}

fn multisets(slots: &[Slot], n: usize, from: usize, cur: &mut Vec<Slot>, out: &mut Vec<Vec<Slot>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for i in from..slots.len() {
        cur.push(slots[i]);
        multisets(slots, n, i, cur, out);
        cur.pop();
    }
}

/// All ways to wire the out-stubs to the in-stubs, as edge lists.
fn wirings(types: &[Slot]) -> Vec<Vec<(VertexId, VertexId)>> {
    let mut tails = Vec::new();
    let mut room: Vec<usize> = Vec::new();
    for (v, t) in types.iter().enumerate() {
        let (i, o) = t.degrees();
        tails.extend(std::iter::repeat(v as VertexId).take(o));
        room.push(i);
    }
    if tails.len() != room.iter().sum::<usize>() {
        return Vec::new();
    }
    let mut out = Vec::new();
    fn go(
        k: usize,
        tails: &[VertexId],
        room: &mut [usize],
        cur: &mut Vec<(VertexId, VertexId)>,
        out: &mut Vec<Vec<(VertexId, VertexId)>>,
    ) {
        if k == tails.len() {
            out.push(cur.clone());
            return;
        }
        // Stubs of one vertex are interchangeable: keep heads non-decreasing.
        let start = if k > 0 && tails[k - 1] == tails[k] { cur[k - 1].1 as usize } else { 0 };
        for h in start..room.len() {
            if room[h] == 0 {
                continue;
            }
            room[h] -= 1;
            cur.push((tails[k], h as VertexId));
            go(k + 1, tails, room, cur, out);
            cur.pop();
            room[h] += 1;
        }
    }
    go(0, &tails, &mut room, &mut Vec::new(), &mut out);
    out
}

fn kind_of(t: Slot, label: &mut usize) -> VertexKind {
    let mut boundary = |sign| {
        let k = VertexKind::Boundary { label: format!("B{label}"), sign };
        *label += 1;
        k
    };
    match t {
        Slot::Min => VertexKind::Min,
        Slot::Max => VertexKind::Max,
        Slot::Merge | Slot::Split => VertexKind::Saddle,
        Slot::Twist => VertexKind::TwistSaddle,
        Slot::Marker => VertexKind::Regular,
        Slot::Inflow => boundary(Sign::Neg),
        Slot::Outflow => boundary(Sign::Pos),
    }
}

/// Connected shapes up to relabelling, with all angles zero and no twists.
fn shapes(n: usize, b: &EnumBounds) -> Vec<DecoratedReebGraph> {
    let mut slots = vec![Slot::Min, Slot::Max, Slot::Merge, Slot::Split];
    if b.allow_nonorientable {
        slots.push(Slot::Twist);
    }
    if b.allow_markers {
        slots.push(Slot::Marker);
    }
    if b.allow_boundary {
        slots.extend([Slot::Inflow, Slot::Outflow]);
    }
    let mut kinds = Vec::new();
    multisets(&slots, n, 0, &mut Vec::new(), &mut kinds);
    let mut out = Vec::new();
    for types in kinds {
        let mut label = 0;
        let vkinds: Vec<VertexKind> = types.iter().map(|&t| kind_of(t, &mut label)).collect();
        let mut found: BTreeMap<Vec<(Slot, Vec<Slot>, Vec<Slot>)>, Vec<DecoratedReebGraph>> = BTreeMap::new();
        for wiring in wirings(&types) {
            let mut g = DecoratedReebGraph::new();
            for (v, k) in vkinds.iter().enumerate() {
                g.add_vertex(v as VertexId, k.clone(), Q::from(0));
            }
            for (i, &(t, h)) in wiring.iter().enumerate() {
                g.add_edge(i as u32, t, h, Q::from(1), false);
            }
            if !g.multigraph().is_connected() {
                continue;
            }
            // Neighbour profile of every vertex; isomorphic shapes share it.
            let mut key: Vec<(Slot, Vec<Slot>, Vec<Slot>)> =
                types.iter().map(|&t| (t, Vec::new(), Vec::new())).collect();
            for &(t, h) in &wiring {
                key[t as usize].1.push(types[h as usize]);
                key[h as usize].2.push(types[t as usize]);
            }
            for k in &mut key {
                k.1.sort();
                k.2.sort();
            }
            key.sort();
            let bucket = found.entry(key).or_default();
            if bucket.iter().any(|f| find_isomorphism(f, &g, AngleRule::Ignore, &BTreeMap::new()).is_some()) {
                continue;
            }
            bucket.push(g);
        }
        out.extend(found.into_values().flatten());
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Every connected valid graph with at most `max_vertices` vertices, up to
/// relabelling and reparametrization of the circle. Vertices get distinct
/// angles `k / (2 max_vertices + 1)`, vertex 0 at angle 0; twist bits are
/// zero on a spanning tree.
pub fn enumerate_graphs(b: &EnumBounds) -> Vec<DecoratedReebGraph> {
    let mut out = Vec::new();
    for_each_graph(b, |g| out.push(g));
    out
}

/// Streaming form of [`enumerate_graphs`].
pub fn for_each_graph(b: &EnumBounds, mut f: impl FnMut(DecoratedReebGraph)) {
    let grid = 2 * b.max_vertices as i64 + 1;
    let angle: Vec<Q> = (0..b.max_vertices as i64).map(|k| q(k, grid)).collect();
    let shift: Vec<Vec<Q>> = (0..b.max_vertices).map(|t| angle.iter().map(|&h| displacement(angle[t], h)).collect()).collect();
    for n in 1..=b.max_vertices {
        for shape in shapes(n, b) {
            let cycles = cycle_basis(&shape.multigraph()).cycles;
            let free: Vec<u32> = cycles.iter().map(|c| c[0].0).collect();
            let twist_sets: u32 = if b.allow_nonorientable { 1 << free.len() } else { 1 };
            let rest: Vec<usize> = (1..n).collect();
            for perm in permutations(&rest) {
                let mut pos = vec![0usize; n];
                for (i, &v) in perm.iter().enumerate() {
                    pos[v] = i + 1;
                }
                let mut base = DecoratedReebGraph::new();
                for v in shape.vertices.values() {
                    base.add_vertex(v.id, v.kind.clone(), angle[pos[v.id as usize]]);
                }
                for e in shape.edges.values() {
                    base.add_edge(e.id, e.tail, e.head, shift[pos[e.tail as usize]][pos[e.head as usize]], false);
                }
                for mask in 0..twist_sets {
                    let mut g = base.clone();
                    for (i, e) in free.iter().enumerate() {
                        g.edges.get_mut(e).unwrap().twist = mask >> i & 1 == 1;
                    }
                    f(g);
                }
            }
        }
    }
}

/// Every critical type on `s` with at most `max_c1` saddles that satisfies
/// the Euler identity, with every choice of boundary signs.
pub fn enumerate_critical_types(s: &SurfaceDescriptor, max_c1: u32) -> Vec<CriticalType> {
    let chi = s.euler_characteristic();
    let mut labels = s.boundary.clone();
    labels.sort();
    let mut out = Vec::new();
    for mask in 0..1u32 << labels.len() {
        let sign: BTreeMap<String, Sign> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), if mask >> i & 1 == 1 { Sign::Pos } else { Sign::Neg }))
            .collect();
        for c1 in 0..=max_c1 {
            for c0 in 0..=c1 as i64 + chi {
                let c2 = chi + c1 as i64 - c0;
                if c0 >= 0 && c2 >= 0 {
                    out.push(CriticalType { c0: c0 as u32, c1, c2: c2 as u32, sign: sign.clone() });
                }
            }
        }
    }
    out
}

/// Descriptor with a zero winding vector.
pub fn zero_class(s: &SurfaceDescriptor, t: CriticalType) -> Result<MorseDescriptor, InvariantError> {
    MorseDescriptor::new(s.clone(), t, WindingVector(vec![0; crate::surface::h1_free_rank(s)]))
}
