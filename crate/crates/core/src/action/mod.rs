//! Words over generator sets, orbit enumeration, finite-orbit detection and
//! minimal-set approximation.

mod generators;
mod orbit;
mod word;

pub use generators::{apply_word, evaluate_word, reduced_words, word_ball, GeneratorSet};
pub use orbit::{
    classify_minimal_set, detect_finite_orbit, detect_recurrence, invariant_subdendrite, minimal_set_approx, orbit,
    Classification, FiniteOrbitOutcome, MinimalSetKind, MinimalSetReport, OrbitReport, RecurrenceReport,
    RecurrenceWitness,
};
pub use word::{reduce_word, Letter, Word};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::dendrite::{DPoint, Dendrite, Edge, EdgeId, FiniteClosedSet, VertexId, WeightRule};
    use crate::homeo::{Homeo, IntervalPL, TreeAuto};
    use crate::rational::{q, qi};
    use crate::Error;

    fn thompson() -> GeneratorSet {
        let d = Arc::new(Dendrite::unit_interval());
        let f = IntervalPL::new(
            vec![qi(0), q(1, 2), q(3, 4), qi(1)],
            vec![qi(0), q(1, 4), q(1, 2), qi(1)],
        )
        .unwrap();
        let g = IntervalPL::new(
            vec![qi(0), q(1, 2), q(3, 4), q(7, 8), qi(1)],
            vec![qi(0), q(1, 2), q(5, 8), q(3, 4), qi(1)],
        )
        .unwrap();
        GeneratorSet::new(vec![
            ("f".into(), Homeo::interval(d.clone(), f).unwrap()),
            ("g".into(), Homeo::interval(d, g).unwrap()),
        ])
        .unwrap()
    }

    /// A 3-star rotated by one click.
    fn star_rotation() -> GeneratorSet {
        let d = Arc::new(
            Dendrite::new(
                (0..4).map(VertexId).collect(),
                vec![Edge::new(0, 0, 1, 1), Edge::new(1, 0, 2, 1), Edge::new(2, 0, 3, 1)],
                WeightRule::Dyadic,
            )
            .unwrap(),
        );
        let perm: BTreeMap<_, _> = [(0, 0), (1, 2), (2, 3), (3, 1)]
            .into_iter()
            .map(|(a, b)| (VertexId(a), VertexId(b)))
            .collect();
        GeneratorSet::new(vec![("r".into(), Homeo::tree_auto(d, TreeAuto::from_permutation(perm)))]).unwrap()
    }

    fn pt(gens: &GeneratorSet, x: crate::Q) -> DPoint {
        gens.dendrite().edge_point(EdgeId(0), x).unwrap()
    }

    #[test]
    fn thompson_orbit_of_zero_is_fixed() {
        let gens = thompson();
        let o = orbit(&gens, &DPoint::vertex(0), 3).unwrap();
        assert_eq!(o.points, FiniteClosedSet::singleton(DPoint::vertex(0)));
        assert!(o.closed);
        let found = detect_finite_orbit(&gens, &DPoint::vertex(0), 4).unwrap();
        assert_eq!(
            found,
            FiniteOrbitOutcome::Found {
                orbit: FiniteClosedSet::singleton(DPoint::vertex(0)),
                radius: 1
            }
        );
    }

    #[test]
    fn thompson_orbit_of_half() {
        let gens = thompson();
        let x = pt(&gens, q(1, 2));
        let o = orbit(&gens, &x, 1).unwrap();
        let expected: FiniteClosedSet = [q(1, 4), q(1, 2), q(3, 4)].into_iter().map(|t| pt(&gens, t)).collect();
        assert_eq!(o.points, expected);
        assert!(!o.closed);
        assert_eq!(o.growth, vec![1, 3]);
    }

    #[test]
    fn orbit_equals_literal_word_ball_images() {
        let gens = thompson();
        let x = pt(&gens, q(1, 2));
        for r in 0..=3 {
            let literal: FiniteClosedSet = word_ball(&gens, r)
                .iter()
                .map(|w| evaluate_word(w, &gens).unwrap().apply(&x).unwrap())
                .collect();
            assert_eq!(orbit(&gens, &x, r).unwrap().points, literal, "radius {r}");
        }
    }

    #[test]
    fn orbit_off_dendrite_fails() {
        let gens = thompson();
        assert!(matches!(
            orbit(&gens, &DPoint::vertex(9), 1),
            Err(Error::PointOffDendrite(_))
        ));
    }

    #[test]
    fn star_leaves_form_a_closed_orbit() {
        let gens = star_rotation();
        let leaves: FiniteClosedSet = (1..4).map(DPoint::vertex).collect();
        let found = detect_finite_orbit(&gens, &DPoint::vertex(1), 5).unwrap();
        assert_eq!(found.orbit(), Some(&leaves));
        let report = minimal_set_approx(&gens, &DPoint::vertex(1), 3, &q(1, 100)).unwrap();
        assert_eq!(report.increments.last(), Some(&qi(0)));
        assert!(report.converged && report.closed);
        let verdict = classify_minimal_set(gens.dendrite(), &leaves, &q(1, 8), true).unwrap();
        assert_eq!(verdict.verdict, MinimalSetKind::FiniteOrbit);
        let hull = invariant_subdendrite(&gens, &DPoint::vertex(1), 2).unwrap();
        assert_eq!(hull, crate::dendrite::Subdendrite::whole(gens.dendrite()));
    }

    #[test]
    fn increments_match_hausdorff_oracle() {
        let gens = thompson();
        let x = pt(&gens, q(1, 2));
        let report = minimal_set_approx(&gens, &x, 4, &q(1, 64)).unwrap();
        for r in 1..=4 {
            let a = orbit(&gens, &x, r - 1).unwrap().points;
            let b = orbit(&gens, &x, r).unwrap().points;
            let oracle = crate::dendrite::hausdorff_distance(gens.dendrite(), &a, &b).unwrap();
            assert_eq!(report.increments[r - 1], oracle);
        }
    }

    #[test]
    fn classification_clauses() {
        let d = Dendrite::unit_interval();
        let e = EdgeId(0);
        let net: FiniteClosedSet = (0..=8)
            .map(|k| match k {
                0 => DPoint::vertex(0),
                8 => DPoint::vertex(1),
                k => d.edge_point(e, q(k, 8)).unwrap(),
            })
            .collect();
        let c = classify_minimal_set(&d, &net, &q(1, 8), false).unwrap();
        assert_eq!(c.verdict, MinimalSetKind::WholeSpace);
        let two: FiniteClosedSet = [DPoint::vertex(0), DPoint::vertex(1)].into_iter().collect();
        assert!(matches!(
            classify_minimal_set(&d, &two, &q(1, 8), false),
            Err(Error::Inconclusive { .. })
        ));
        let cluster: FiniteClosedSet = [DPoint::vertex(0), d.edge_point(e, q(1, 16)).unwrap()].into_iter().collect();
        let c = classify_minimal_set(&d, &cluster, &q(1, 8), false).unwrap();
        assert_eq!(c.verdict, MinimalSetKind::CantorLike);
    }

    #[test]
    fn recurrence_witnesses() {
        let gens = thompson();
        let fixed = detect_recurrence(&gens, &DPoint::vertex(0), &q(1, 8), 3).unwrap();
        assert!(!fixed.recurrent);
        let x = pt(&gens, q(1, 2));
        let report = detect_recurrence(&gens, &x, &q(1, 8), 4).unwrap();
        assert!(report.recurrent);
        for w in &report.witnesses {
            assert_eq!(apply_word(&w.word, &gens, &x).unwrap(), w.image);
            assert!(w.distance < q(1, 8) && w.image != x);
            assert!(w.word.is_reduced() && !w.word.is_empty() && w.word.len() <= 4);
        }
    }
}
