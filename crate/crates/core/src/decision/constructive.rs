//! Certificate search: push unessential pieces off a common regular fiber,
//! normalize both graphs by removing markers and cancelling extremum pairs,
//! match the normal forms after shifting critical values, then walk the
//! second graph's normalization backwards.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{decide_circle, Decider, DecisionError, Marked, Outcome, SearchStatus};
use crate::graph::{DecoratedReebGraph, VertexKind};
use crate::homology::VertexId;
use crate::iso::{find_isomorphism, find_isomorphism_where, AngleRule, Isomorphism};
use crate::moves::{
    apply, fingerprint, leaf_pairs, reduce_unessential_all, replay, Move, MoveCertificate, PairKind, Placement, Site,
};
use crate::rational::{displacement, frac, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Longest normalization allowed on either side.
    pub max_steps: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { max_steps: 64 }
    }
}

/// A graph, the moves that bring it to normal form, and every intermediate
/// graph (`trail[0]` is the input, the last entry the normal form).
#[derive(Debug, Clone)]
pub struct Normalized {
    pub moves: Vec<Move>,
    pub trail: Vec<DecoratedReebGraph>,
}

impl Normalized {
    pub fn normal_form(&self) -> &DecoratedReebGraph {
        self.trail.last().expect("trail is never empty")
    }
}

/// An angle at the middle of the widest gap between vertex angles.
pub fn common_regular_angle<'a>(graphs: impl IntoIterator<Item = &'a DecoratedReebGraph>) -> Q {
    let angles: BTreeSet<Q> = graphs.into_iter().flat_map(|g| g.vertices.values().map(|v| v.angle)).collect();
    let v: Vec<Q> = angles.into_iter().collect();
    if v.is_empty() {
        return Q::from(0);
    }
    let mut best = (Q::one() + v[0] - v[v.len() - 1], v[v.len() - 1]);
    for w in v.windows(2) {
        if w[1] - w[0] > best.0 {
            best = (w[1] - w[0], w[0]);
        }
    }
    frac(best.1 + best.0 / Q::from(2))
}

/// Smallest positive distance from `a` down to another vertex angle.
fn gap_below(g: &DecoratedReebGraph, a: Q) -> Q {
    g.vertices.values().map(|v| frac(a - v.angle)).filter(|d| *d > Q::from(0)).min().unwrap_or(Q::one())
}

fn gap_above(g: &DecoratedReebGraph, a: Q) -> Q {
    g.vertices.values().map(|v| frac(v.angle - a)).filter(|d| *d > Q::from(0)).min().unwrap_or(Q::one())
}

/// Site that re-attaches a leaf pair exactly where it sits now.
fn same_site(g: &DecoratedReebGraph, extremum: VertexId) -> Option<(Site, bool)> {
    let (_, s, kind) = leaf_pairs(g).into_iter().find(|p| p.0 == extremum)?;
    let leaf = match kind {
        PairKind::MinSaddle => g.out_edges(extremum)[0],
        PairKind::SaddleMax => g.in_edges(extremum)[0],
    };
    let low = *g.in_edges(s).iter().find(|&&e| e != leaf)?;
    let high = *g.out_edges(s).iter().find(|&&e| e != leaf)?;
    let (le, he) = (g.edges[&low], g.edges[&high]);
    if low != high && le.delta + he.delta <= Q::one() {
        Some((Site::Edge { edge: low, angle: g.vertices[&s].angle }, he.twist))
    } else {
        Some((Site::Marker(s), false))
    }
}

/// One normalization step, if any applies.
fn normal_step(g: &DecoratedReebGraph) -> Option<Move> {
    for v in g.vertices.values().filter(|v| v.kind == VertexKind::Regular) {
        let m = Move::RemoveMarker { vertex: v.id };
        if apply(g, &m).is_ok() {
            return Some(m);
        }
    }
    for (x, s, kind) in leaf_pairs(g) {
        let m = Move::CancelPair { extremum: x, saddle: s };
        if apply(g, &m).is_ok() {
            return Some(m);
        }
        // Blocked: pull the extremum right next to its saddle first.
        let sa = g.vertices[&s].angle;
        let (site, upper_twist) = same_site(g, x)?;
        let leaf = match kind {
            PairKind::MinSaddle => g.out_edges(x)[0],
            PairKind::SaddleMax => g.in_edges(x)[0],
        };
        let extremum = match kind {
            PairKind::MinSaddle => frac(sa - gap_below(g, sa) / Q::from(2)),
            PairKind::SaddleMax => frac(sa + gap_above(g, sa) / Q::from(2)),
        };
        let to = Placement { site, extremum, upper_twist, leaf_twist: g.edges[&leaf].twist };
        return Some(Move::ShiftTerminalEdge { edge: leaf, to });
    }
    None
}

/// Remove markers and cancel extremum pairs until neither is possible.
pub fn normalize(g: &DecoratedReebGraph, bounds: &Bounds) -> Option<Normalized> {
    let mut out = Normalized { moves: Vec::new(), trail: vec![g.clone()] };
    while let Some(m) = normal_step(out.normal_form()) {
        if out.moves.len() >= bounds.max_steps {
            return None;
        }
        let next = apply(out.normal_form(), &m).ok()?.graph;
        out.moves.push(m);
        out.trail.push(next);
    }
    Some(out)
}

/// Inverse of `m : before -> after`, written in the ids of `after`.
fn inverse(before: &DecoratedReebGraph, after: &DecoratedReebGraph, m: &Move) -> Option<Move> {
    match m {
        Move::ReduceUnessential { .. } | Move::Reangle(_) | Move::Retime { .. } => {
            let id: BTreeMap<VertexId, VertexId> = after.vertices.keys().map(|v| (*v, *v)).collect();
            if !after.vertices.keys().eq(before.vertices.keys()) {
                return None;
            }
            let shifts = potential(after, before, &id)?.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            Some(Move::Retime { shifts })
        }
        Move::RemoveMarker { vertex } => {
            let out = before.edges[&before.out_edges(*vertex)[0]];
            let merged = *after.edges.keys().find(|e| !before.edges.contains_key(e))?;
            Some(Move::InsertMarker { edge: merged, angle: before.vertices[vertex].angle, upper_twist: out.twist })
        }
        Move::CancelPair { extremum, saddle } => {
            let (_, _, kind) = leaf_pairs(before).into_iter().find(|p| p.0 == *extremum)?;
            let leaf = match kind {
                PairKind::MinSaddle => before.out_edges(*extremum)[0],
                PairKind::SaddleMax => before.in_edges(*extremum)[0],
            };
            let high = *before.out_edges(*saddle).iter().find(|&&e| e != leaf)?;
            let sa = before.vertices[saddle].angle;
            let (site, upper_twist) = if after.vertices.contains_key(saddle) {
                (Site::Marker(*saddle), false)
            } else {
                let merged = *after.edges.keys().find(|e| !before.edges.contains_key(e))?;
                (Site::Edge { edge: merged, angle: sa }, before.edges[&high].twist)
            };
            let at = Placement {
                site,
                extremum: before.vertices[extremum].angle,
                upper_twist,
                leaf_twist: before.edges[&leaf].twist,
            };
            Some(Move::CreatePair { kind, at })
        }
        Move::ShiftTerminalEdge { edge, .. } => {
            let e = before.edges[edge];
            let x = if matches!(before.vertices[&e.tail].kind, VertexKind::Min) { e.tail } else { e.head };
            let (_, _, kind) = leaf_pairs(after).into_iter().find(|p| p.0 == x)?;
            let leaf_after = match kind {
                PairKind::MinSaddle => after.out_edges(x)[0],
                PairKind::SaddleMax => after.in_edges(x)[0],
            };
            let (site, upper_twist) = same_site(after, x)?;
            let to = Placement { site, extremum: before.vertices[&x].angle, upper_twist, leaf_twist: e.twist };
            Some(Move::ShiftTerminalEdge { edge: leaf_after, to })
        }
        _ => None,
    }
}

fn translate_site(site: &Site, iso: &Isomorphism) -> Option<Site> {
    Some(match site {
        Site::Edge { edge, angle } => Site::Edge { edge: *iso.edges.get(edge)?, angle: *angle },
        Site::Marker(v) => Site::Marker(*iso.vertices.get(v)?),
    })
}

/// Rewrite a move in the ids of an isomorphic copy. New vertices can take
/// any gauge, so twist parameters carry over unchanged.
fn translate(m: &Move, iso: &Isomorphism) -> Option<Move> {
    let place = |p: &Placement| -> Option<Placement> { Some(Placement { site: translate_site(&p.site, iso)?, ..p.clone() }) };
    Some(match m {
        Move::InsertMarker { edge, angle, upper_twist } => {
            Move::InsertMarker { edge: *iso.edges.get(edge)?, angle: *angle, upper_twist: *upper_twist }
        }
        Move::CreatePair { kind, at } => Move::CreatePair { kind: *kind, at: place(at)? },
        Move::ShiftTerminalEdge { edge, to } => Move::ShiftTerminalEdge { edge: *iso.edges.get(edge)?, to: place(to)? },
        Move::Retime { shifts } => {
            let mut shifts: Vec<(VertexId, Q)> =
                shifts.iter().map(|(v, x)| Some((*iso.vertices.get(v)?, *x))).collect::<Option<_>>()?;
            shifts.sort();
            Move::Retime { shifts }
        }
        _ => return None,
    })
}

fn exact_iso(g: &DecoratedReebGraph, h: &DecoratedReebGraph, seed: &BTreeMap<VertexId, VertexId>) -> Option<Isomorphism> {
    find_isomorphism(g, h, AngleRule::Exact, seed).or_else(|| find_isomorphism(g, h, AngleRule::Exact, &BTreeMap::new()))
}

/// Shifts carrying the values of `a` onto those of `b` along a vertex map,
/// keeping every displacement in (0, 1].
fn potential(a: &DecoratedReebGraph, b: &DecoratedReebGraph, map: &BTreeMap<VertexId, VertexId>) -> Option<BTreeMap<VertexId, Q>> {
    let mut adj: BTreeMap<VertexId, Vec<(VertexId, Q)>> = BTreeMap::new();
    for e in a.edges.values() {
        let want = displacement(b.vertices[&map[&e.tail]].angle, b.vertices[&map[&e.head]].angle);
        adj.entry(e.tail).or_default().push((e.head, want - e.delta));
        adj.entry(e.head).or_default().push((e.tail, e.delta - want));
    }
    let mut s: BTreeMap<VertexId, Q> = BTreeMap::new();
    for (&root, v) in &a.vertices {
        if s.contains_key(&root) {
            continue;
        }
        let mut r = frac(b.vertices[&map[&root]].angle - v.angle);
        if r > q(1, 2) {
            r -= Q::one();
        }
        s.insert(root, r);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &(w, d) in adj.get(&u).into_iter().flatten() {
                let x = s[&u] + d;
                match s.get(&w) {
                    Some(&y) if y != x => return None,
                    Some(_) => {}
                    None => {
                        s.insert(w, x);
                        stack.push(w);
                    }
                }
            }
        }
    }
    Some(s)
}

/// Join two normalizations into a certificate `f -> g'` with `g'`
/// isomorphic to `g`. `prefix` are moves already applied to reach the start
/// of `nf` from `f`.
pub fn join(f: &DecoratedReebGraph, prefix: &[Move], nf: &Normalized, ng: &Normalized) -> Option<MoveCertificate> {
    let (a, b) = (nf.normal_form(), ng.normal_form());
    let mut moves: Vec<Move> = prefix.iter().chain(&nf.moves).cloned().collect();
    let (phi, first) = match find_isomorphism(a, b, AngleRule::CyclicOrder, &BTreeMap::new()) {
        Some(phi) => {
            let map = phi.circle_map(a, b)?;
            let moved = map.points.is_empty() || map.points.iter().any(|(x, y)| x != y);
            (phi, moved.then_some(Move::Reangle(map)))
        }
        None => {
            let mut shifts = None;
            let phi = find_isomorphism_where(a, b, AngleRule::Ignore, &BTreeMap::new(), &mut |map| {
                shifts = potential(a, b, map);
                shifts.is_some()
            })?;
            let shifts: Vec<(VertexId, Q)> = shifts?.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            (phi, (!shifts.is_empty()).then_some(Move::Retime { shifts }))
        }
    };
    let mut cur = a.clone();
    if let Some(m) = first {
        cur = apply(&cur, &m).ok()?.graph;
        moves.push(m);
    }
    let seed: BTreeMap<VertexId, VertexId> = phi.vertices.iter().map(|(x, y)| (*y, *x)).collect();
    let mut sigma = exact_iso(b, &cur, &seed)?;
    for i in (0..ng.moves.len()).rev() {
        let (before, after) = (&ng.trail[i], &ng.trail[i + 1]);
        let inv = inverse(before, after, &ng.moves[i])?;
        let m = translate(&inv, &sigma)?;
        let next = apply(&cur, &m).ok()?.graph;
        let seed: BTreeMap<VertexId, VertexId> = sigma
            .vertices
            .iter()
            .filter(|(x, y)| before.vertices.contains_key(x) && next.vertices.contains_key(y))
            .map(|(x, y)| (*x, *y))
            .collect();
        sigma = exact_iso(before, &next, &seed)?;
        cur = next;
        moves.push(m);
    }
    Some(MoveCertificate { initial: fingerprint(f), terminal: fingerprint(&cur), moves })
}

/// Check that a certificate takes `f` to a graph isomorphic to `g`.
pub fn certifies(f: &DecoratedReebGraph, g: &DecoratedReebGraph, cert: &MoveCertificate) -> bool {
    replay(f, cert).is_ok_and(|end| crate::iso::isomorphic(&end, g))
}

/// Search for a certificate between two graphs known to have the same
/// invariants.
pub fn search_certificate(f: &DecoratedReebGraph, g: &DecoratedReebGraph, bounds: &Bounds) -> Option<MoveCertificate> {
    let a = common_regular_angle([f, g]);
    let (rf, red) = reduce_unessential_all(f, a).ok()?;
    let nf = normalize(&rf, bounds)?;
    let (rg, reg) = reduce_unessential_all(g, a).ok()?;
    let tail = normalize(&rg, bounds)?;
    let mut trail = vec![g.clone()];
    for m in &reg.moves {
        trail.push(apply(trail.last()?, m).ok()?.graph);
    }
    trail.extend(tail.trail.into_iter().skip(1));
    let ng = Normalized { moves: reg.moves.into_iter().chain(tail.moves).collect(), trail };
    let cert = join(f, &red.moves, &nf, &ng)?;
    certifies(f, g, &cert).then_some(cert)
}

pub fn decide_constructive(f: &Marked, g: &Marked, bounds: &Bounds) -> Result<Outcome, DecisionError> {
    let decision = decide_circle(&f.descriptor()?, &g.descriptor()?);
    if !decision.equivalent {
        return Ok(Outcome::plain(decision));
    }
    let certificate = search_certificate(&f.graph, &g.graph, bounds);
    let search = Some(if certificate.is_some() { SearchStatus::Found } else { SearchStatus::Exhausted });
    Ok(Outcome { decision, search, certificate })
}

pub struct Constructive;

impl Decider for Constructive {
    fn name(&self) -> &'static str {
        "constructive"
    }

    fn decide(&self, f: &Marked, g: &Marked, bounds: &Bounds) -> Result<Outcome, DecisionError> {
        decide_constructive(f, g, bounds)
    }
}
