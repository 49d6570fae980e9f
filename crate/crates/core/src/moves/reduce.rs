use super::{apply, fingerprint, Move, MoveCertificate, MoveError};
use crate::cut::{cut_at, ComponentClass};
use crate::graph::DecoratedReebGraph;
use crate::invariants::{is_regular, InvariantError};
use crate::rational::{frac, Q};

/// Push every unessential component of the complement of the fiber at `a`
/// off that fiber, one component at a time.
pub fn reduce_unessential_all(g: &DecoratedReebGraph, a: Q) -> Result<(DecoratedReebGraph, MoveCertificate), MoveError> {
    let a = frac(a);
    if !is_regular(g, a) {
        return Err(InvariantError::NotRegular(a).into());
    }
    let mut cur = g.clone();
    let mut moves = Vec::new();
    // Each step removes at least one cut mark from a piece, so this is bounded.
    for _ in 0..=g.edges.len() + g.vertices.len() {
        let cut = cut_at(&cur, a)?;
        let classes = cut.classify();
        let next = cut
            .pieces
            .iter()
            .zip(&classes)
            .find(|(p, c)| **c != ComponentClass::Essential && !p.original_vertices().is_empty())
            .map(|(p, _)| p.original_vertices());
        let Some(component) = next else {
            let cert = MoveCertificate { initial: fingerprint(g), terminal: fingerprint(&cur), moves };
            return Ok((cur, cert));
        };
        let m = Move::ReduceUnessential { angle: a, component };
        cur = apply(&cur, &m)?.graph;
        moves.push(m);
    }
    Err(MoveError::NotUnessential(a))
}
