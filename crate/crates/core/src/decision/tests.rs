use super::*;
use crate::graph::samples::*;
use crate::graph::Sign;
use crate::invariants::{CriticalType, WindingVector};
use crate::iso::isomorphic;
use crate::moves::{apply, replay, CircleMap, Move, PairKind, Placement};
use crate::rational::q;
use crate::surface::SurfaceDescriptor;

fn desc(s: SurfaceDescriptor, t: CriticalType, w: Vec<i64>) -> MorseDescriptor {
    MorseDescriptor::new(s, t, WindingVector(w)).unwrap()
}

fn torus(t: CriticalType, w: Vec<i64>) -> MorseDescriptor {
    desc(SurfaceDescriptor::orientable(1), t, w)
}

#[test]
fn homotopic_examples() {
    let a = torus(CriticalType::new(0, 0, 0), vec![1, 0]);
    let b = torus(CriticalType::new(0, 0, 0), vec![0, 1]);
    assert!(homotopic(&a, &a).unwrap());
    assert!(!homotopic(&a, &b).unwrap());
    let s = desc(SurfaceDescriptor::orientable(0), CriticalType::new(1, 0, 1), vec![]);
    assert!(homotopic(&s, &s).unwrap());
    assert_eq!(homotopic(&a, &s), Err(DecisionError::SurfaceMismatch));
}

#[test]
fn decide_real_examples() {
    let sph = |c0, c1, c2| desc(SurfaceDescriptor::orientable(0), CriticalType::new(c0, c1, c2), vec![]);
    assert!(decide_real(&sph(1, 0, 1), &sph(1, 0, 1)).unwrap().equivalent);
    assert_eq!(decide_real(&sph(2, 1, 1), &sph(1, 1, 2)).unwrap().reason, Reason::CountMismatch(CountIndex::C0));
    let ann = SurfaceDescriptor::orientable(0).with_boundary(["A", "B"]);
    let f = desc(ann.clone(), CriticalType::new(0, 0, 0).with_sign("A", Sign::Neg).with_sign("B", Sign::Pos), vec![0]);
    let g = desc(ann, CriticalType::new(0, 0, 0).with_sign("A", Sign::Pos).with_sign("B", Sign::Neg), vec![0]);
    assert_eq!(decide_real(&f, &g).unwrap().reason, Reason::SignMismatch("A".into()));
    let t = torus(CriticalType::new(0, 0, 0), vec![1, 0]);
    assert_eq!(decide_real(&t, &t), Err(DecisionError::NonzeroWinding));
}

#[test]
fn decide_circle_examples() {
    let a = torus(CriticalType::new(0, 0, 0), vec![1, 0]);
    let b = torus(CriticalType::new(0, 0, 0), vec![0, 1]);
    assert_eq!(decide_circle(&a, &b), Decision { equivalent: false, reason: Reason::WindingMismatch(0) });
    let c = torus(CriticalType::new(1, 2, 1), vec![1, 0]);
    assert!(decide_circle(&c, &c).equivalent);
    let d = torus(CriticalType::new(2, 3, 1), vec![1, 0]);
    assert_eq!(decide_circle(&c, &d).reason, Reason::CountMismatch(CountIndex::C0));
}

#[test]
fn registry_lists_strategies() {
    let r = Registry::default();
    assert_eq!(r.names(), vec!["circle", "constructive", "real"]);
    assert!(matches!(r.get("nope"), Err(DecisionError::UnknownStrategy(_))));
}

fn marked(g: crate::graph::DecoratedReebGraph) -> Marked {
    let b = crate::invariants::graph_basis_map(&g).unwrap();
    Marked::new(g, b)
}

#[test]
fn rotated_sphere_gets_reangle_certificate() {
    let g = apply(&sphere(), &Move::Reangle(CircleMap::rotation(q(3, 10)))).unwrap().graph;
    let out = decide_constructive(&marked(sphere()), &marked(g.clone()), &Bounds::default()).unwrap();
    assert!(out.decision.equivalent);
    assert_eq!(out.search, Some(SearchStatus::Found));
    let cert = out.certificate.unwrap();
    assert!(cert.moves.iter().any(|m| matches!(m, Move::Reangle(_))));
    assert!(isomorphic(&replay(&sphere(), &cert).unwrap(), &g));
}

#[test]
fn torus_vs_klein_is_surface_mismatch() {
    let out = decide_constructive(&marked(torus_fibration()), &marked(klein_fibration()), &Bounds::default()).unwrap();
    assert_eq!(out.decision.reason, Reason::SurfaceMismatch);
    assert_eq!(out.search, None);
}

#[test]
fn extremum_pair_on_either_side_is_certified() {
    // The same pair created on the two parallel edges of the torus height
    // function, in the two complementary regions of the fiber at 1/4.
    let base = torus_height();
    let on = |e| {
        let at = Placement::on_edge(e, q(6, 25), q(13, 50));
        apply(&base, &Move::CreatePair { kind: PairKind::SaddleMax, at }).unwrap().graph
    };
    let (f, g) = (on(1), on(2));
    let out = decide_constructive(&marked(f.clone()), &marked(g.clone()), &Bounds::default()).unwrap();
    assert!(out.decision.equivalent);
    let cert = out.certificate.expect("certificate");
    assert!(isomorphic(&replay(&f, &cert).unwrap(), &g));
}

#[test]
fn created_pair_elsewhere_is_certified() {
    let f = apply(&sphere(), &Move::CreatePair { kind: PairKind::MinSaddle, at: Placement::on_edge(0, q(1, 5), q(3, 20)) })
        .unwrap()
        .graph;
    let g = apply(&sphere(), &Move::CreatePair { kind: PairKind::SaddleMax, at: Placement::on_edge(0, q(1, 4), q(7, 20)) })
        .unwrap()
        .graph;
    let g = apply(&g, &Move::CreatePair { kind: PairKind::MinSaddle, at: Placement::on_edge(2, q(3, 10), q(1, 20)) })
        .unwrap()
        .graph;
    let f = apply(&f, &Move::CreatePair { kind: PairKind::SaddleMax, at: Placement::on_edge(2, q(3, 10), q(1, 2)) })
        .unwrap()
        .graph;
    let out = decide_constructive(&marked(f.clone()), &marked(g.clone()), &Bounds::default()).unwrap();
    assert!(out.decision.equivalent);
    let cert = out.certificate.expect("certificate");
    assert!(isomorphic(&replay(&f, &cert).unwrap(), &g));
}
