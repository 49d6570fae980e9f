use super::*;
use crate::cut::is_reduced;
use crate::graph::samples::*;
use crate::invariants::{descriptor_of, extract_critical_type, reconstruct_surface, CriticalType, WindingVector};
use crate::invariants::MorseDescriptor;
use crate::rational::q;
use crate::surface::SurfaceDescriptor;

fn create_on_sphere() -> (DecoratedReebGraph, Move) {
    let m = Move::CreatePair { kind: PairKind::MinSaddle, at: Placement::on_edge(0, q(1, 5), q(3, 20)) };
    (sphere(), m)
}

#[test]
fn create_pair_on_sphere() {
    let (g, m) = create_on_sphere();
    let h = apply(&g, &m).unwrap().graph;
    assert_eq!(extract_critical_type(&h).unwrap(), CriticalType::new(2, 1, 1));
    assert_eq!(reconstruct_surface(&h).unwrap(), SurfaceDescriptor::orientable(0));
}

#[test]
fn cancel_undoes_create() {
    let (g, m) = create_on_sphere();
    let h = apply(&g, &m).unwrap().graph;
    let (x, s, _) = leaf_pairs(&h).into_iter().find(|p| h.vertices[&p.0].angle == q(3, 20)).unwrap();
    let back = apply(&h, &Move::CancelPair { extremum: x, saddle: s }).unwrap().graph;
    assert_eq!(back.vertices, g.vertices);
    assert_eq!(back.edges.values().map(|e| (e.tail, e.head, e.delta, e.twist)).collect::<Vec<_>>(), vec![(0, 1, q(3, 10), false)]);
}

#[test]
fn cancel_on_fibration_fails() {
    let err = apply(&torus_fibration(), &Move::CancelPair { extremum: 0, saddle: 1 }).unwrap_err();
    assert_eq!(err, MoveError::NotExtremum(0));
}

#[test]
fn cancel_blocked_by_intervening_angle() {
    // Min at 1/10 reaches the saddle at 1/5 but the lower saddle of the
    // torus sits in between only on the other branch, so cancel the upper pair.
    let g = torus_height();
    assert!(matches!(apply(&g, &Move::CancelPair { extremum: 0, saddle: 1 }), Err(MoveError::NotSaddle(1))));
}

#[test]
fn reangle_rotation_keeps_invariants() {
    let g = torus_height();
    let h = apply(&g, &Move::Reangle(CircleMap::rotation(q(3, 10)))).unwrap().graph;
    assert_eq!(h.vertices[&0].angle, q(2, 5));
    assert_eq!(extract_critical_type(&h).unwrap(), extract_critical_type(&g).unwrap());
    assert_eq!(h.edges.values().map(|e| e.delta).collect::<Vec<_>>(), g.edges.values().map(|e| e.delta).collect::<Vec<_>>());
}

#[test]
fn markers_round_trip() {
    let g = torus_fibration();
    let a = apply(&g, &Move::InsertMarker { edge: 0, angle: q(1, 4), upper_twist: false }).unwrap();
    assert_eq!(a.graph.vertices.len(), 3);
    let cyc = transport_walk(&[(0, 1), (1, 1)], &a.transport);
    assert_eq!(crate::invariants::winding_on_cycle(&a.graph, &cyc).unwrap(), 1);
    let b = apply(&a.graph, &Move::RemoveMarker { vertex: 2 }).unwrap();
    assert_eq!(b.graph.vertices, g.vertices);
}

#[test]
fn shift_moves_pair_between_edges() {
    let g = torus_height();
    let h = apply(&g, &Move::CreatePair { kind: PairKind::SaddleMax, at: Placement::on_edge(1, q(6, 25), q(13, 50)) })
        .unwrap()
        .graph;
    let (x, _, _) = leaf_pairs(&h).into_iter().find(|p| h.vertices[&p.0].angle == q(13, 50)).unwrap();
    let leaf = h.in_edges(x)[0];
    let target = Placement::on_edge(2, q(6, 25), q(13, 50));
    let k = apply(&h, &Move::ShiftTerminalEdge { edge: leaf, to: target }).unwrap().graph;
    assert_eq!(extract_critical_type(&k).unwrap(), extract_critical_type(&h).unwrap());
    assert!(k.vertices.contains_key(&x));
}

#[test]
fn certificate_replays() {
    let (g, m) = create_on_sphere();
    let (cert, end) = MoveCertificate::record(&g, vec![m, Move::Reangle(CircleMap::rotation(q(1, 2)))]).unwrap();
    assert_eq!(replay(&g, &cert).unwrap(), end);
    assert_eq!(replay(&torus_fibration(), &cert), Err(CertificateError::InitialMismatch));
}

#[test]
fn reduce_leaves_sphere_alone() {
    let (h, cert) = reduce_unessential_all(&sphere(), q(7, 10)).unwrap();
    assert_eq!(h, sphere());
    assert!(cert.is_empty());
}

#[test]
fn reduce_leaves_reduced_fibration_alone() {
    let (h, cert) = reduce_unessential_all(&torus_fibration(), q(1, 4)).unwrap();
    assert_eq!(h, torus_fibration());
    assert!(cert.is_empty());
}

/// A torus fibration with a sphere bubble (min/saddle pair) hanging below 0
/// and straddling it.
fn bubble_torus() -> DecoratedReebGraph {
    let mut g = DecoratedReebGraph::new();
    g.add_vertex(0, VertexKind::Regular, q(1, 2))
        .add_vertex(1, VertexKind::Min, q(9, 10))
        .add_vertex(2, VertexKind::Saddle, q(1, 10));
    g.connect(0, 0, 2, false).connect(1, 1, 2, false).connect(2, 2, 0, false);
    g
}

#[test]
fn reduce_pushes_bubble_off_fiber() {
    let g = bubble_torus();
    let a = q(0, 1);
    assert!(!is_reduced(&g, a).unwrap());
    let (h, cert) = reduce_unessential_all(&g, a).unwrap();
    assert!(is_reduced(&h, a).unwrap());
    assert_eq!(replay(&g, &cert).unwrap(), h);
    assert_eq!(extract_critical_type(&h).unwrap(), extract_critical_type(&g).unwrap());
    let w = |x: &DecoratedReebGraph| crate::invariants::winding_on_cycle(x, &[(0, 1), (2, 1)]).unwrap();
    assert_eq!(w(&h), w(&g));
}

#[test]
fn minimal_counts_examples() {
    let none = BTreeMap::new();
    assert_eq!(minimal_counts(&SurfaceDescriptor::orientable(2), &none, false).unwrap(), (1, 4, 1));
    assert_eq!(minimal_counts(&SurfaceDescriptor::orientable(1), &none, true).unwrap(), (0, 0, 0));
    let ann = SurfaceDescriptor::orientable(0).with_boundary(["A", "B"]);
    let signs = BTreeMap::from([("A".to_string(), Sign::Neg), ("B".to_string(), Sign::Pos)]);
    assert_eq!(minimal_counts(&ann, &signs, false).unwrap(), (0, 0, 0));
    assert!(minimal_counts(&SurfaceDescriptor::orientable(0), &none, true).is_err());
}

use crate::graph::Sign;

fn descriptor(s: SurfaceDescriptor, t: CriticalType, w: Vec<i64>) -> MorseDescriptor {
    MorseDescriptor::new(s, t, WindingVector(w)).unwrap()
}

#[test]
fn realize_torus_is_the_fibration() {
    let d = descriptor(SurfaceDescriptor::orientable(1), CriticalType::new(0, 0, 0), vec![1, 0]);
    let (g, b) = realize_with_basis(&d).unwrap();
    assert_eq!(g, torus_fibration());
    assert_eq!(descriptor_of(&g, &b).unwrap(), d);
}

#[test]
fn realize_sphere_is_a_min_max_pair() {
    let d = descriptor(SurfaceDescriptor::orientable(0), CriticalType::new(1, 0, 1), vec![]);
    let g = realize(&d).unwrap();
    assert_eq!(g.vertices.len(), 2);
    assert_eq!(g.count_kind(|k| *k == VertexKind::Min), 1);
}

#[test]
fn realize_below_minimum_fails() {
    let d = MorseDescriptor {
        surface: SurfaceDescriptor::orientable(0),
        ctype: CriticalType::new(0, 0, 0),
        winding: WindingVector(vec![]),
    };
    assert!(realize(&d).is_err());
    let d = descriptor(SurfaceDescriptor::orientable(0), CriticalType::new(0, 1, 3), vec![]);
    assert!(matches!(realize(&d), Err(RealizeError::BelowMinimum { .. })));
}

#[test]
fn realize_round_trips_examples() {
    let ann = SurfaceDescriptor::orientable(0).with_boundary(["A", "B", "C"]);
    let cases = vec![
        descriptor(SurfaceDescriptor::orientable(2), CriticalType::new(2, 6, 2), vec![0, 0, 0, 0]),
        descriptor(SurfaceDescriptor::orientable(2), CriticalType::new(0, 3, 1), vec![2, 0, -4, 6]),
        descriptor(SurfaceDescriptor::nonorientable(1), CriticalType::new(1, 1, 1), vec![]),
        descriptor(SurfaceDescriptor::nonorientable(2), CriticalType::new(0, 0, 0), vec![3]),
        descriptor(SurfaceDescriptor::nonorientable(3), CriticalType::new(0, 1, 0), vec![1, -1]),
        descriptor(
            ann.clone(),
            CriticalType::new(1, 2, 0).with_sign("A", Sign::Pos).with_sign("B", Sign::Pos).with_sign("C", Sign::Pos),
            vec![0, 0],
        ),
    ];
    for d in cases {
        let (g, b) = realize_with_basis(&d).unwrap();
        let got = descriptor_of(&g, &b).unwrap();
        assert!(got.surface.same_marked_surface(&d.surface), "{d:?}");
        assert_eq!((got.ctype, got.winding), (d.ctype.clone(), d.winding.clone()));
    }
}

#[test]
fn klein_cover_is_torus() {
    let c = orientation_double_cover(&klein_fibration());
    assert!(c.graph.is_valid());
    assert_eq!(reconstruct_surface(&c.graph).unwrap(), SurfaceDescriptor::orientable(1));
    assert!(c.deck_is_automorphism());
}

#[test]
fn orientable_cover_splits() {
    let c = orientation_double_cover(&torus_fibration());
    let parts = c.components();
    assert_eq!(parts.len(), 2);
    for p in parts {
        assert_eq!(reconstruct_surface(&p).unwrap(), SurfaceDescriptor::orientable(1));
    }
}

#[test]
fn projective_plane_cover_is_sphere() {
    let c = orientation_double_cover(&projective_plane());
    assert_eq!(reconstruct_surface(&c.graph).unwrap(), SurfaceDescriptor::orientable(0));
    assert_eq!(extract_critical_type(&c.graph).unwrap().counts(), (2, 2, 2));
    assert!(c.deck_is_automorphism());
}

#[test]
fn redistribute_identity_is_empty() {
    let g = torus_height();
    let t = piece_targets(&g, q(1, 2)).unwrap();
    let (h, cert) = redistribute(&g, &t, q(1, 2)).unwrap();
    assert_eq!(h, g);
    assert!(cert.is_empty());
}

#[test]
fn retime_moves_values_and_keeps_winding() {
    let g = torus_height();
    let before = descriptor_of(&g, &crate::invariants::graph_basis_map(&g).unwrap()).unwrap();
    let m = Move::Retime { shifts: vec![(0, q(1, 20))] };
    let h = apply(&g, &m).unwrap().graph;
    assert_eq!(h.vertices[&0].angle, frac(g.vertices[&0].angle + q(1, 20)));
    assert!(h.is_valid());
    let after = descriptor_of(&h, &crate::invariants::graph_basis_map(&h).unwrap()).unwrap();
    assert_eq!(before, after);
    let too_far = Move::Retime { shifts: vec![(0, q(3, 2))] };
    assert!(matches!(apply(&g, &too_far), Err(MoveError::Retime(_))));
}
