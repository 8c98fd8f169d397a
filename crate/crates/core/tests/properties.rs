use std::collections::BTreeMap;
use std::sync::Arc;

use dendrodyn::action::{apply_word, evaluate_word, GeneratorSet, Letter, Word};
use dendrodyn::dendrite::{
    arc_between, convex_hull, hausdorff_distance, retract, DPoint, Dendrite, EdgeId, FiniteClosedSet, Subdendrite,
    VertexId,
};
use dendrodyn::homeo::{Homeo, IntervalPL, TreeAuto};
use dendrodyn::measure::{canonical_measure, push_forward, PLMeasure, Piece};
use dendrodyn::rational::{q, qi};
use dendrodyn::zoo::{gehman_dendrite, gehman_tail_closed, odometer_on, thompson_generators};
use dendrodyn::Q;
use proptest::prelude::*;

fn dendrites() -> Vec<Arc<Dendrite>> {
    vec![
        Arc::new(Dendrite::unit_interval()),
        Arc::new(gehman_dendrite(3)),
        Arc::new(gehman_tail_closed(4)),
    ]
}

/// A vertex, or a dyadic interior point of some edge.
fn point(d: &Dendrite, raw: (u32, u32, bool)) -> DPoint {
    let (idx, num, on_vertex) = raw;
    if on_vertex {
        DPoint::Vertex(d.vertices()[idx as usize % d.vertices().len()])
    } else {
        let e = d.edges()[idx as usize % d.edges().len()].id;
        d.edge_point(e, q(i64::from(num % 31 + 1), 32)).unwrap()
    }
}

fn raw_point() -> impl Strategy<Value = (u32, u32, bool)> {
    (any::<u32>(), any::<u32>(), any::<bool>())
}

/// Odometer plus a reparametrisation of the first edge on the depth-3 tree.
fn tree_gens() -> GeneratorSet {
    let d = Arc::new(gehman_dendrite(3));
    let odo = odometer_on(d.clone());
    let bend = IntervalPL::new(vec![qi(0), q(1, 4), qi(1)], vec![qi(0), q(1, 2), qi(1)]).unwrap();
    let ids: BTreeMap<VertexId, VertexId> = d.vertices().iter().map(|v| (*v, *v)).collect();
    let p = Homeo::tree_auto(d, TreeAuto::new(ids, BTreeMap::from([(EdgeId(0), bend)])));
    GeneratorSet::new(vec![("a".into(), odo), ("b".into(), p)]).unwrap()
}

fn thompson_gens() -> GeneratorSet {
    let (f, g) = thompson_generators();
    GeneratorSet::new(vec![("f".into(), f), ("g".into(), g)]).unwrap()
}

fn word(gens: &GeneratorSet, raw: &[(bool, bool)]) -> Word {
    Word(
        raw.iter()
            .map(|(second, inv)| Letter::new(gens.names()[usize::from(*second)].clone(), *inv))
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms(which in 0usize..3, a in raw_point(), b in raw_point(), c in raw_point()) {
        let d = &dendrites()[which];
        let (x, y, z) = (point(d, a), point(d, b), point(d, c));
        let dxy = d.distance(&x, &y).unwrap();
        prop_assert_eq!(&dxy, &d.distance(&y, &x).unwrap());
        prop_assert_eq!(dxy == qi(0), x == y);
        prop_assert!(dxy <= d.distance(&x, &z).unwrap() + d.distance(&z, &y).unwrap());
        prop_assert_eq!(dxy, arc_between(d, &x, &y).unwrap().length(d));
    }

    #[test]
    fn hull_is_union_of_pairwise_arcs(which in 0usize..3, raw in prop::collection::vec(raw_point(), 1..=6)) {
        let d = &dendrites()[which];
        let pts: Vec<DPoint> = raw.into_iter().map(|r| point(d, r)).collect();
        let hull = convex_hull(d, &pts).unwrap();
        let mut union = Subdendrite::point(d, &pts[0]).unwrap();
        for (i, x) in pts.iter().enumerate() {
            for y in &pts[i..] {
                union.merge(d, &arc_between(d, x, y).unwrap());
            }
        }
        prop_assert_eq!(hull, union);
    }

    #[test]
    fn retraction_is_idempotent_and_nearest(
        which in 0usize..3,
        raw in prop::collection::vec(raw_point(), 1..=4),
        x in raw_point(),
    ) {
        let d = &dendrites()[which];
        let pts: Vec<DPoint> = raw.into_iter().map(|r| point(d, r)).collect();
        let y = convex_hull(d, &pts).unwrap();
        let x = point(d, x);
        let r = retract(d, &y, &x).unwrap();
        prop_assert!(y.contains(&r));
        prop_assert_eq!(&retract(d, &y, &r).unwrap(), &r);
        let dr = d.distance(&x, &r).unwrap();
        for p in pts.iter().chain(y.endpoints(d).iter()) {
            prop_assert!(dr <= d.distance(&x, p).unwrap());
        }
        // the arc from x to its foot meets y only at the foot
        prop_assert_eq!(arc_between(d, &x, &r).unwrap().intersection(&y).as_point(), Some(r));
    }

    #[test]
    fn hausdorff_triangle(which in 0usize..3, raw in prop::collection::vec(prop::collection::vec(raw_point(), 1..=4), 3)) {
        let d = &dendrites()[which];
        let sets: Vec<FiniteClosedSet> = raw.iter().map(|c| c.iter().map(|r| point(d, *r)).collect()).collect();
        let h = |i: usize, j: usize| hausdorff_distance(d, &sets[i], &sets[j]).unwrap();
        prop_assert!(h(0, 1) <= h(0, 2) + h(2, 1));
        prop_assert_eq!(h(0, 0), qi(0));
    }

    #[test]
    fn group_laws_on_trees(
        u in prop::collection::vec((any::<bool>(), any::<bool>()), 0..4),
        v in prop::collection::vec((any::<bool>(), any::<bool>()), 0..4),
        w in prop::collection::vec((any::<bool>(), any::<bool>()), 0..4),
        x in raw_point(),
    ) {
        let gens = tree_gens();
        let (hu, hv, hw) = (
            evaluate_word(&word(&gens, &u), &gens).unwrap(),
            evaluate_word(&word(&gens, &v), &gens).unwrap(),
            evaluate_word(&word(&gens, &w), &gens).unwrap(),
        );
        let left = hu.compose(&hv).unwrap().compose(&hw).unwrap();
        let right = hu.compose(&hv.compose(&hw).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(hu.compose(&hu.invert().unwrap()).unwrap().is_identity());
        let x = point(gens.dendrite(), x);
        prop_assert_eq!(hu.apply(&x).unwrap(), apply_word(&word(&gens, &u), &gens, &x).unwrap());
        prop_assert_eq!(hu.invert().unwrap().apply(&hu.apply(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn group_laws_on_interval(
        u in prop::collection::vec((any::<bool>(), any::<bool>()), 0..5),
        v in prop::collection::vec((any::<bool>(), any::<bool>()), 0..5),
        t in 1i64..64,
    ) {
        let gens = thompson_gens();
        let (hu, hv) = (
            evaluate_word(&word(&gens, &u), &gens).unwrap(),
            evaluate_word(&word(&gens, &v), &gens).unwrap(),
        );
        let x = gens.dendrite().edge_point(EdgeId(0), q(t, 64)).unwrap();
        prop_assert_eq!(hu.compose(&hv).unwrap().apply(&x).unwrap(), hu.apply(&hv.apply(&x).unwrap()).unwrap());
        prop_assert!(hv.invert().unwrap().compose(&hv).unwrap().is_identity());
    }

    #[test]
    fn push_forward_conserves_mass(
        u in prop::collection::vec((any::<bool>(), any::<bool>()), 0..4),
        atom in raw_point(),
        lo in 0i64..8,
        len in 1i64..8,
    ) {
        let gens = tree_gens();
        let d = gens.dendrite().clone();
        let h = evaluate_word(&word(&gens, &u), &gens).unwrap();
        let (a, b) = (q(lo, 16), q(lo + len, 16));
        let piece = PLMeasure::new(
            d.clone(),
            Vec::new(),
            vec![(EdgeId(0), vec![Piece::new(a, b, qi(3))])],
            qi(1),
        ).unwrap();
        let mu = canonical_measure(d.clone())
            .add(&PLMeasure::dirac(d.clone(), &point(&d, atom)).unwrap()).unwrap()
            .add(&piece).unwrap();
        let image = push_forward(&h, &mu).unwrap();
        prop_assert_eq!(image.total_mass(), mu.total_mass());
        let whole = Subdendrite::whole(&d);
        prop_assert_eq!(image.mass_of(&whole), mu.mass_of(&whole));
        let back = push_forward(&h.invert().unwrap(), &image).unwrap();
        prop_assert_eq!(back, mu);
    }
}

#[test]
fn canonical_measure_of_arcs_is_distance() {
    for d in dendrites() {
        let mu = canonical_measure(d.clone());
        let total: Q = d.total_weight();
        let pts = d.skeleton_points();
        for x in &pts {
            for y in &pts {
                let arc = arc_between(&d, x, y).unwrap();
                assert_eq!(mu.mass_of(&arc) * &total, d.distance(x, y).unwrap());
            }
        }
    }
}
