use circle_morse::decision::{certifies, decide_circle, search_certificate, Bounds};
use circle_morse::format::{emit, parse, Document};
use circle_morse::generator::{random_marked, random_move, reverse_orientation, GenParams};
use circle_morse::graph::{validate, DecoratedReebGraph, VertexKind};
use circle_morse::invariants::{descriptor_of, BasisMap, extract_critical_type, reconstruct_surface};
use circle_morse::moves::{apply, orientation_double_cover, realize_with_basis, transport_walk, Move, PairKind};
use circle_morse::surface::euler_characteristic;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn marked(seed: u64) -> (DecoratedReebGraph, BasisMap) {
    random_marked(&GenParams::with_seed(seed)).unwrap()
}

fn counts(g: &DecoratedReebGraph) -> (i64, i64, i64) {
    let t = extract_critical_type(g).unwrap();
    (t.c0 as i64, t.c1 as i64, t.c2 as i64)
}

/// Expected count change, read off the move and the graph it acts on.
fn expected_delta(g: &DecoratedReebGraph, m: &Move) -> (i64, i64, i64) {
    match m {
        Move::CreatePair { kind: PairKind::MinSaddle, .. } => (1, 1, 0),
        Move::CreatePair { kind: PairKind::SaddleMax, .. } => (0, 1, 1),
        Move::CancelPair { extremum, .. } if g.vertices[extremum].kind == VertexKind::Min => (-1, -1, 0),
        Move::CancelPair { .. } => (0, -1, -1),
        _ => (0, 0, 0),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn document_round_trip(seed in any::<u64>()) {
        let (graph, basis) = marked(seed);
        // An empty marking is written as no cycle lines.
        let basis = (!basis.is_empty()).then_some(basis);
        let doc = Document::Graph { graph, basis };
        let text = emit(&doc);
        prop_assert_eq!(parse(&text).unwrap(), doc.clone());
        prop_assert_eq!(emit(&parse(&text).unwrap()), text);
    }

    #[test]
    fn moves_preserve_surface_and_winding(seed in any::<u64>(), mseed in any::<u64>()) {
        let (g, basis) = marked(seed);
        let before = descriptor_of(&g, &basis).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(mseed);
        for _ in 0..4 {
            let Some(m) = random_move(&g, &mut rng, true) else { continue };
            let Ok(step) = apply(&g, &m) else { continue };
            let h = step.graph;
            prop_assert!(validate(&h).is_empty(), "{:?}", m);
            let moved: Vec<_> = basis.iter().map(|w| transport_walk(w, &step.transport)).collect();
            let after = descriptor_of(&h, &moved).unwrap();
            prop_assert_eq!(&after.surface, &before.surface);
            prop_assert_eq!(&after.winding, &before.winding);
            let (a, b) = (counts(&g), counts(&h));
            prop_assert_eq!((b.0 - a.0, b.1 - a.1, b.2 - a.2), expected_delta(&g, &m));
        }
    }

    #[test]
    fn euler_identity(seed in any::<u64>()) {
        let (g, _) = marked(seed);
        let t = extract_critical_type(&g).unwrap();
        prop_assert_eq!(t.euler(), euler_characteristic(&reconstruct_surface(&g).unwrap()));
    }

    #[test]
    fn reversal_is_an_involution(seed in any::<u64>()) {
        let (g, basis) = marked(seed);
        let r = reverse_orientation(&g);
        prop_assert!(validate(&r).is_empty());
        prop_assert_eq!(reverse_orientation(&r), g.clone());
        let (t, u) = (extract_critical_type(&g).unwrap(), extract_critical_type(&r).unwrap());
        prop_assert_eq!((t.c0, t.c1, t.c2), (u.c2, u.c1, u.c0));
        let w = descriptor_of(&g, &basis).unwrap().winding.0;
        let flipped: BasisMap = basis.iter().map(|w| w.iter().map(|&(e, s)| (e, -s)).collect()).collect();
        let v = descriptor_of(&r, &flipped).unwrap().winding.0;
        prop_assert_eq!(v, w.iter().map(|x| -x).collect::<Vec<_>>());
    }

    #[test]
    fn decide_circle_is_an_equivalence(a in any::<u64>(), b in any::<u64>()) {
        let (f, fb) = marked(a);
        let (g, gb) = marked(b);
        let (df, dg) = (descriptor_of(&f, &fb).unwrap(), descriptor_of(&g, &gb).unwrap());
        prop_assert!(decide_circle(&df, &df).equivalent);
        prop_assert_eq!(decide_circle(&df, &dg).equivalent, decide_circle(&dg, &df).equivalent);
    }

    #[test]
    fn realize_round_trip(seed in any::<u64>()) {
        let (g, basis) = marked(seed);
        let d = descriptor_of(&g, &basis).unwrap();
        let (h, hb) = realize_with_basis(&d).unwrap();
        prop_assert!(validate(&h).is_empty());
        prop_assert_eq!(descriptor_of(&h, &hb).unwrap(), d);
    }

    #[test]
    fn cover_doubles_euler_characteristic(seed in any::<u64>()) {
        let (g, _) = marked(seed);
        let c = orientation_double_cover(&g);
        let orientable = reconstruct_surface(&g).unwrap().orientable;
        let parts = c.components();
        prop_assert_eq!(parts.len(), if orientable { 2 } else { 1 });
        prop_assert!(c.deck_is_automorphism());
        let chi = |g: &DecoratedReebGraph| extract_critical_type(g).unwrap().euler();
        let total: i64 = parts.iter().map(|p| {
            assert!(validate(p).is_empty());
            chi(p)
        }).sum();
        prop_assert_eq!(total, 2 * chi(&g));
    }

    #[test]
    fn returned_certificates_are_sound(seed in any::<u64>(), mseed in any::<u64>()) {
        let (f, _) = marked(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(mseed);
        let mut g = f.clone();
        for _ in 0..3 {
            if let Some(m) = random_move(&g, &mut rng, true) {
                if let Ok(s) = apply(&g, &m) {
                    g = s.graph;
                }
            }
        }
        if let Some(cert) = search_certificate(&f, &g, &Bounds::default()) {
            prop_assert!(certifies(&f, &g, &cert));
        }
    }
}
