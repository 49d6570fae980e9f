use std::collections::BTreeSet;

use super::{apply, fingerprint, leaf_pair, Move, MoveCertificate, MoveError, PairKind, Placement, Site};
use crate::cut::{cut_at, Cut, PieceKey, StubPart};
use crate::graph::{DecoratedReebGraph, Sign, VertexKind};
use crate::homology::VertexId;
use crate::invariants::{CriticalType, InvariantError};
use crate::rational::{frac, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RedistributeError {
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("expected {expected} targets, one per component, got {got}")]
    Length { expected: usize, got: usize },
    #[error("target for component {0} changes its Euler characteristic or boundary signs")]
    Shape(usize),
    #[error("targets do not add up to the critical type of the graph")]
    Sum,
    #[error("target for component {0} is below that component's minimum")]
    BelowMinimum(usize),
    #[error("no movable extremum pair left in component {0}")]
    Stuck(usize),
    #[error("component structure changed unexpectedly")]
    Lost,
    #[error(transparent)]
    Move(#[from] MoveError),
}

/// Current critical type of every component of the complement of the fiber
/// at `a`, in the order `cut_at` lists them.
pub fn piece_targets(g: &DecoratedReebGraph, a: Q) -> Result<Vec<CriticalType>, InvariantError> {
    let cut = cut_at(g, a)?;
    Ok(cut.pieces.iter().map(|p| p.critical_type(g)).collect())
}

fn minimum(cut: &Cut, g: &DecoratedReebGraph, i: usize) -> (u32, u32) {
    let t = cut.pieces[i].real_type(g);
    let has = |s: Sign| t.sign.values().any(|&v| v == s);
    (u32::from(!has(Sign::Neg)), u32::from(!has(Sign::Pos)))
}

fn count(t: &CriticalType, kind: PairKind) -> u32 {
    match kind {
        PairKind::MinSaddle => t.c0,
        PairKind::SaddleMax => t.c2,
    }
}

/// Match each recomputed piece to the original index holding the same
/// vertices.
fn align(cut: &Cut, residents: &[BTreeSet<VertexId>]) -> Result<Vec<usize>, RedistributeError> {
    let mut out = Vec::with_capacity(residents.len());
    for r in residents {
        let hits: Vec<usize> = cut
            .pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.original_vertices().into_iter().collect::<BTreeSet<_>>() == *r)
            .map(|(i, _)| i)
            .collect();
        match hits.as_slice() {
            [i] => out.push(*i),
            _ => return Err(RedistributeError::Lost),
        }
    }
    Ok(out)
}

/// A spot strictly inside the longest stub of a piece.
fn landing(cut: &Cut, piece: usize, kind: PairKind, leaf_twist: bool) -> Option<Placement> {
    let p = &cut.pieces[piece];
    let (lo, span, e) = p
        .edges
        .iter()
        .map(|pe| (p.levels[&pe.tail], p.levels[&pe.head] - p.levels[&pe.tail], pe.edge))
        .max_by(|x, y| x.1.cmp(&y.1).then(y.2.cmp(&x.2)))?;
    let four = Q::from(4);
    let saddle = lo + span / Q::from(2);
    let extremum = match kind {
        PairKind::MinSaddle => lo + span / four,
        PairKind::SaddleMax => lo + span * Q::from(3) / four,
    };
    Some(Placement {
        site: Site::Edge { edge: e, angle: frac(saddle) },
        extremum: frac(extremum),
        upper_twist: false,
        leaf_twist,
    })
}

/// A leaf pair of the given kind lying wholly inside a piece.
fn movable(g: &DecoratedReebGraph, cut: &Cut, piece: usize, kind: PairKind) -> Option<(VertexId, VertexId, u32, bool)> {
    let p = &cut.pieces[piece];
    let want = match kind {
        PairKind::MinSaddle => VertexKind::Min,
        PairKind::SaddleMax => VertexKind::Max,
    };
    p.original_vertices().into_iter().filter(|v| g.vertices[v].kind == want).find_map(|x| {
        let lp = leaf_pair(g, x).ok()?;
        let whole = p.edges.iter().any(|pe| pe.edge == lp.leaf && pe.part == StubPart::Whole);
        (whole && p.levels.contains_key(&PieceKey::Orig(lp.saddle))).then(|| (x, lp.saddle, lp.leaf, g.edges[&lp.leaf].twist))
    })
}

/// Move extremum pairs between the components of the complement of the
/// fiber at `a` until each has its target critical type. Greedy: one pair
/// at a time from a component with a surplus to one with a deficit.
pub fn redistribute(
    g: &DecoratedReebGraph,
    targets: &[CriticalType],
    a: Q,
) -> Result<(DecoratedReebGraph, MoveCertificate), RedistributeError> {
    let a = frac(a);
    let cut = cut_at(g, a)?;
    let current: Vec<CriticalType> = cut.pieces.iter().map(|p| p.critical_type(g)).collect();
    if targets.len() != current.len() {
        return Err(RedistributeError::Length { expected: current.len(), got: targets.len() });
    }
    for (i, (t, c)) in targets.iter().zip(&current).enumerate() {
        if t.euler() != c.euler() || t.sign != c.sign {
            return Err(RedistributeError::Shape(i));
        }
        let (m0, m2) = minimum(&cut, g, i);
        if t.c0 < m0 || t.c2 < m2 {
            return Err(RedistributeError::BelowMinimum(i));
        }
    }
    let total = |ts: &[CriticalType]| ts.iter().fold((0, 0, 0), |(a, b, c), t| (a + t.c0, b + t.c1, c + t.c2));
    if total(targets) != total(&current) {
        return Err(RedistributeError::Sum);
    }

    let mut residents: Vec<BTreeSet<VertexId>> =
        cut.pieces.iter().map(|p| p.original_vertices().into_iter().collect()).collect();
    let mut have = current;
    let mut cur = g.clone();
    let mut moves = Vec::new();
    for kind in [PairKind::MinSaddle, PairKind::SaddleMax] {
        loop {
            let from = (0..have.len()).find(|&i| count(&have[i], kind) > count(&targets[i], kind));
            let to = (0..have.len()).find(|&i| count(&have[i], kind) < count(&targets[i], kind));
            let (Some(from), Some(to)) = (from, to) else { break };
            let cut = cut_at(&cur, a)?;
            let idx = align(&cut, &residents)?;
            let (x, saddle, leaf, twist) = movable(&cur, &cut, idx[from], kind).ok_or(RedistributeError::Stuck(from))?;
            let to_site = landing(&cut, idx[to], kind, twist).ok_or(RedistributeError::Stuck(to))?;
            let m = Move::ShiftTerminalEdge { edge: leaf, to: to_site };
            cur = apply(&cur, &m)?.graph;
            moves.push(m);
            // The saddle keeps its id unless it was left behind as a marker.
            let new_saddle = leaf_pair(&cur, x)?.saddle;
            residents[from].remove(&x);
            residents[to].insert(x);
            if new_saddle == saddle || !cur.vertices.contains_key(&saddle) {
                residents[from].remove(&saddle);
            }
            residents[to].insert(new_saddle);
            let delta = |t: &mut CriticalType, s: i32| {
                t.c1 = (t.c1 as i32 + s) as u32;
                match kind {
                    PairKind::MinSaddle => t.c0 = (t.c0 as i32 + s) as u32,
                    PairKind::SaddleMax => t.c2 = (t.c2 as i32 + s) as u32,
                }
            };
            delta(&mut have[from], -1);
            delta(&mut have[to], 1);
        }
    }
    let cert = MoveCertificate { initial: fingerprint(g), terminal: fingerprint(&cur), moves };
    Ok((cur, cert))
}
