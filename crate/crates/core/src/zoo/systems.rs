use std::collections::BTreeMap;
use std::sync::Arc;

use crate::action::GeneratorSet;
use crate::dendrite::{DPoint, Dendrite, Edge, FiniteClosedSet, VertexId, WeightRule};
use crate::homeo::{Homeo, IntervalPL, TreeAuto};
use crate::rational::{dyadic, q, qi};

/// Thompson's `f` and `g` on the unit interval:
/// `f(x) = x/2` on `[0, 1/2]`, `x − 1/4` on `[1/2, 3/4]`, `2x − 1` on `[3/4, 1]`;
/// `g` is the identity on `[0, 1/2]` and `f` rescaled onto `[1/2, 1]`.
pub fn thompson_generators() -> (Homeo, Homeo) {
    let d = Arc::new(Dendrite::unit_interval());
    let f = IntervalPL::new(
        vec![qi(0), q(1, 2), q(3, 4), qi(1)],
        vec![qi(0), q(1, 4), q(1, 2), qi(1)],
    )
    .expect("valid table");
    let g = IntervalPL::new(
        vec![qi(0), q(1, 2), q(3, 4), q(7, 8), qi(1)],
        vec![qi(0), q(1, 2), q(5, 8), q(3, 4), qi(1)],
    )
    .expect("valid table");
    (
        Homeo::interval(d.clone(), f).expect("unit interval"),
        Homeo::interval(d, g).expect("unit interval"),
    )
}

fn heap_level(v: u32) -> u32 {
    31 - (v + 1).leading_zeros()
}

fn binary_tree(depth: u32, rule: impl Fn(u32) -> Option<crate::Q>) -> Dendrite {
    assert!(depth >= 1, "depth must be at least 1");
    let n = (1u32 << (depth + 1)) - 1;
    let edges: Vec<Edge> = (1..n).map(|c| Edge::new(c - 1, (c - 1) / 2, c, heap_level(c))).collect();
    let weights: Vec<_> = edges.iter().map(|e| rule(e.level)).collect();
    let rule = if weights.iter().all(Option::is_none) {
        WeightRule::Dyadic
    } else {
        WeightRule::Custom(
            edges
                .iter()
                .zip(weights)
                .map(|(e, w)| w.unwrap_or_else(|| dyadic(e.level)))
                .collect(),
        )
    };
    Dendrite::new((0..n).map(VertexId).collect(), edges, rule).expect("binary trees are trees")
}

/// Complete binary tree of depth `depth` in heap numbering (root 0, children
/// of `i` are `2i+1` and `2i+2`, edge id = child − 1) with level-`i` edges of
/// weight `2^{-i}`.
pub fn gehman_dendrite(depth: u32) -> Dendrite {
    binary_tree(depth, |_| None)
}

/// As [`gehman_dendrite`], but the leaf edges carry the whole tail
/// `Σ_{i ≥ depth} 2^{-i} = 2^{1-depth}`, so every vertex at level `n` is at
/// distance exactly `2^{-n}` from each leaf below it.
pub fn gehman_tail_closed(depth: u32) -> Dendrite {
    binary_tree(depth, |level| (level == depth).then(|| dyadic(depth - 1)))
}

/// Vertex ids of level `k` in heap numbering, left to right.
pub fn level_vertices(k: u32) -> impl Iterator<Item = VertexId> {
    ((1u32 << k) - 1..(1u32 << (k + 1)) - 1).map(VertexId)
}

/// The adding machine on a heap-numbered binary tree: a vertex with branch
/// bits `b_1 … b_k` (from the root, `b_1` least significant) goes to the
/// vertex labelled `b + 1 mod 2^k`.
pub fn odometer_on(d: Arc<Dendrite>) -> Homeo {
    let map: BTreeMap<VertexId, VertexId> = d
        .vertices()
        .iter()
        .map(|v| {
            let k = heap_level(v.0);
            let bits = v.0 + 1 - (1 << k);
            // heap order reads b_1 as the most significant bit
            let label = bits.reverse_bits().checked_shr(32 - k).unwrap_or(0);
            let next = (label + 1) & ((1 << k) - 1);
            let next_bits = next.reverse_bits().checked_shr(32 - k).unwrap_or(0);
            (*v, VertexId((1 << k) - 1 + next_bits))
        })
        .collect();
    Homeo::tree_auto(d, TreeAuto::from_permutation(map))
}

/// The odometer on the tail-closed Gehman tree of the given depth.
pub fn odometer(depth: u32) -> Homeo {
    odometer_on(Arc::new(gehman_tail_closed(depth)))
}

pub fn leaves(depth: u32) -> FiniteClosedSet {
    level_vertices(depth).map(DPoint::Vertex).collect()
}

/// Center `0` joined to `1..=4`; vertex `i` carries leaves `3 + 2i` and
/// `4 + 2i`. The rotation cycles the branches and swaps the leaf pair on the
/// step back to branch 1, so the eight leaves form a single cycle.
pub fn star4() -> GeneratorSet {
    let mut edges = Vec::new();
    for i in 1..=4u32 {
        edges.push(Edge::new(i - 1, 0, i, 1));
    }
    for i in 1..=4u32 {
        edges.push(Edge::new(2 + 2 * i, i, 3 + 2 * i, 2));
        edges.push(Edge::new(3 + 2 * i, i, 4 + 2 * i, 2));
    }
    let d = Arc::new(Dendrite::new((0..13).map(VertexId).collect(), edges, WeightRule::Dyadic).expect("a tree"));
    let mut map = BTreeMap::from([(VertexId(0), VertexId(0))]);
    for i in 1..=4u32 {
        let j = i % 4 + 1;
        map.insert(VertexId(i), VertexId(j));
        let (a, b) = (3 + 2 * j, 4 + 2 * j);
        let (a, b) = if i == 4 { (b, a) } else { (a, b) };
        map.insert(VertexId(3 + 2 * i), VertexId(a));
        map.insert(VertexId(4 + 2 * i), VertexId(b));
    }
    let r = Homeo::tree_auto(d, TreeAuto::from_permutation(map));
    GeneratorSet::new(vec![("r".into(), r)]).expect("rotation is an automorphism")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{detect_finite_orbit, FiniteOrbitOutcome};
    use crate::dendrite::{boundary_classification, EdgeId};
    use crate::homeo::validate;

    #[test]
    fn thompson_values() {
        let (f, g) = thompson_generators();
        let d = f.dendrite().clone();
        let at = |t| d.edge_point(EdgeId(0), t).unwrap();
        assert_eq!(f.apply(&at(q(1, 2))).unwrap(), at(q(1, 4)));
        assert_eq!(f.apply(&at(q(3, 4))).unwrap(), at(q(1, 2)));
        assert_eq!(g.apply(&at(q(3, 4))).unwrap(), at(q(5, 8)));
        assert_eq!(g.apply(&at(q(7, 8))).unwrap(), at(q(3, 4)));
        assert_eq!(g.apply(&at(q(1, 2))).unwrap(), at(q(1, 2)));
        assert!(validate(&f).is_ok() && validate(&g).is_ok());
        assert_ne!(f.compose(&g).unwrap(), g.compose(&f).unwrap());
    }

    #[test]
    fn gehman_shapes() {
        let d1 = gehman_dendrite(1);
        assert_eq!(d1.edges().len(), 2);
        let d3 = gehman_dendrite(3);
        assert_eq!(d3.edges().len(), 14);
        assert_eq!(boundary_classification(&d3).endpoints.len(), 8);
        assert_eq!(d3.total_weight(), qi(3));
        let t = gehman_tail_closed(3);
        assert_eq!(t.distance(&DPoint::vertex(1), &DPoint::vertex(7)).unwrap(), q(1, 2));
        assert_eq!(t.distance(&DPoint::vertex(0), &DPoint::vertex(14)).unwrap(), qi(1));
    }

    #[test]
    fn odometer_cycles() {
        let h1 = odometer(1);
        assert_eq!(h1.apply(&DPoint::vertex(1)).unwrap(), DPoint::vertex(2));
        assert_eq!(h1.apply(&DPoint::vertex(2)).unwrap(), DPoint::vertex(1));
        let h = odometer(3);
        assert!(validate(&h).unwrap().isometric);
        let mut p = DPoint::vertex(7);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..8 {
            seen.insert(p.clone());
            p = h.apply(&p).unwrap();
        }
        assert_eq!(p, DPoint::vertex(7));
        assert_eq!(seen.len(), 8);
        let mut power = Homeo::identity(h.dendrite().clone());
        for _ in 0..8 {
            power = power.compose(&h).unwrap();
        }
        assert!(power.is_identity());
    }

    #[test]
    fn star4_orbits_nest() {
        let gens = star4();
        let leaves = detect_finite_orbit(&gens, &DPoint::vertex(5), 8).unwrap();
        assert_eq!(leaves.orbit().map(|o| o.len()), Some(8));
        let branches = detect_finite_orbit(&gens, &DPoint::vertex(1), 4).unwrap();
        assert_eq!(branches.orbit().map(|o| o.len()), Some(4));
        assert!(matches!(
            detect_finite_orbit(&gens, &DPoint::vertex(0), 1).unwrap(),
            FiniteOrbitOutcome::Found { radius: 1, .. }
        ));
    }
}
