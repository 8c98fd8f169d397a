use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num::{Signed, Zero};

use super::{ArcPath, DPoint, Dendrite, EdgeId, FiniteClosedSet, Loc, Subdendrite};
use crate::error::{Error, Result};
use crate::rational::{dyadic, qi, Q};

/// `d(a, b) = Σ_i w_i |h_i^{-1}([a, b] ∩ A_i)|`.
pub fn weighted_metric(d: &Dendrite, a: &DPoint, b: &DPoint) -> Result<Q> {
    d.distance(a, b)
}

/// Distance from `p` to the nearest point of a nonempty set.
pub fn nearest_distance(d: &Dendrite, p: &DPoint, set: &FiniteClosedSet) -> Result<Q> {
    let lp = d.locate(p)?;
    let mut best: Option<Q> = None;
    for x in set {
        let dist = d.distance_loc(&lp, &d.locate(x)?);
        if best.as_ref().is_none_or(|b| dist < *b) {
            best = Some(dist);
        }
    }
    best.ok_or(Error::EmptySet)
}

fn directed(d: &Dendrite, from: &[Loc], to: &[Loc]) -> Q {
    let mut sup = Q::zero();
    for a in from {
        let inf = to
            .iter()
            .map(|b| d.distance_loc(a, b))
            .min()
            .expect("nonempty");
        if inf > sup {
            sup = inf;
        }
    }
    sup
}

/// Hausdorff distance between two nonempty finite sets.
pub fn hausdorff_distance(d: &Dendrite, a: &FiniteClosedSet, b: &FiniteClosedSet) -> Result<Q> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let la: Vec<Loc> = a.iter().map(|p| d.locate(p)).collect::<Result<_>>()?;
    let lb: Vec<Loc> = b.iter().map(|p| d.locate(p)).collect::<Result<_>>()?;
    let ab = directed(d, &la, &lb);
    let ba = directed(d, &lb, &la);
    Ok(if ab >= ba { ab } else { ba })
}

/// Largest diameter among the members of a cover.
pub fn mesh(d: &Dendrite, cover: &[Subdendrite]) -> Result<Q> {
    if cover.is_empty() {
        return Err(Error::EmptyCover);
    }
    Ok(cover
        .iter()
        .map(|c| c.diameter(d))
        .max()
        .expect("nonempty"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryClasses {
    pub endpoints: FiniteClosedSet,
    pub branch_points: FiniteClosedSet,
}

/// Endpoints are the degree-1 vertices, branch points the degree >= 3 ones.
pub fn boundary_classification(d: &Dendrite) -> BoundaryClasses {
    let mut endpoints = FiniteClosedSet::new();
    let mut branch_points = FiniteClosedSet::new();
    for v in d.vertices() {
        match d.degree(*v) {
            1 => {
                endpoints.insert(DPoint::Vertex(*v));
            }
            k if k >= 3 => {
                branch_points.insert(DPoint::Vertex(*v));
            }
            _ => {}
        }
    }
    BoundaryClasses {
        endpoints,
        branch_points,
    }
}

/// The stored arc enumeration with its weights, after checking that each arc
/// meets the union of the previous ones in exactly one vertex.
///
/// `ChainingViolation::index` is the 1-based position of the offending arc.
pub fn arc_decomposition(d: &Dendrite) -> Result<Vec<(EdgeId, Q)>> {
    let mut seen = HashSet::new();
    for (i, e) in d.edges().iter().enumerate() {
        if i == 0 {
            seen.insert(e.u);
            seen.insert(e.v);
            continue;
        }
        let (hu, hv) = (seen.contains(&e.u), seen.contains(&e.v));
        if hu == hv {
            return Err(Error::ChainingViolation { index: i + 1 });
        }
        seen.insert(e.u);
        seen.insert(e.v);
    }
    Ok(d
        .edges()
        .iter()
        .zip(d.weights())
        .map(|(e, w)| (e.id, w.clone()))
        .collect())
}

/// Sample points for the modulus check: vertices plus a dyadic subdivision of
/// every edge fine enough to realize each `ε` of the grid.
fn modulus_samples(d: &Dendrite, finest: &Q) -> Vec<DPoint> {
    let wmax = d.weights().iter().max().cloned().unwrap_or_else(|| qi(1));
    let mut r = 1u32;
    while &wmax * dyadic(r) * qi(2) > *finest && r < 5 {
        r += 1;
    }
    let mut pts: Vec<DPoint> = d.vertices().iter().map(|v| DPoint::Vertex(*v)).collect();
    for e in d.edges() {
        for j in 1..(1u64 << r) {
            let t = Q::new(j.into(), (1u64 << r).into());
            pts.push(d.edge_point(e.id, t).expect("interior parameter"));
        }
    }
    pts
}

/// For each `ε`, the largest dyadic `δ` such that every sampled pair at
/// distance `< δ` spans an arc of diameter `< ε`. Zero when no candidate
/// qualifies.
pub fn arc_diameter_modulus(d: &Dendrite, eps_grid: &[Q]) -> Vec<(Q, Q)> {
    if eps_grid.is_empty() {
        return Vec::new();
    }
    let finest = eps_grid.iter().min().expect("nonempty").clone();
    let pts = modulus_samples(d, &finest);
    let mut pairs: Vec<(Q, Q)> = Vec::with_capacity(pts.len() * pts.len() / 2);
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i + 1..] {
            let arc = ArcPath::new(d, x, y).expect("samples lie on the dendrite");
            let diam = Subdendrite::from_arc(d, &arc).diameter(d);
            let dist = d.distance(x, y).expect("samples lie on the dendrite");
            pairs.push((dist, diam));
        }
    }
    let candidates: Vec<Q> = (-4i32..=40)
        .map(|k| {
            if k < 0 {
                qi(1i64 << (-k))
            } else {
                dyadic(k as u32)
            }
        })
        .collect();
    eps_grid
        .iter()
        .map(|eps| {
            let worst = pairs
                .iter()
                .filter(|(_, diam)| diam >= eps)
                .map(|(dist, _)| dist)
                .min();
            let delta = candidates
                .iter()
                .find(|c| worst.is_none_or(|w| *c <= w))
                .cloned()
                .unwrap_or_else(Q::zero);
            (eps.clone(), delta)
        })
        .collect()
}

/// `d(v, M)` for every vertex, by multi-source shortest paths.
fn vertex_distances_to(d: &Dendrite, m: &FiniteClosedSet) -> Result<Vec<Q>> {
    let n = d.vertices().len();
    let mut best: Vec<Option<Q>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    let push = |best: &mut Vec<Option<Q>>, heap: &mut BinaryHeap<_>, v: usize, dist: Q| {
        if best[v].as_ref().is_none_or(|b| dist < *b) {
            best[v] = Some(dist.clone());
            heap.push(Reverse((dist, v)));
        }
    };
    for p in m {
        match d.locate(p)? {
            Loc::Vertex(v) => push(&mut best, &mut heap, v, Q::zero()),
            Loc::Interior {
                e, parent, child, s, ..
            } => {
                let w = d.weight_at(e);
                push(&mut best, &mut heap, parent, &s * w);
                push(&mut best, &mut heap, child, (qi(1) - &s) * w);
            }
        }
    }
    while let Some(Reverse((dist, v))) = heap.pop() {
        if best[v].as_ref() != Some(&dist) {
            continue;
        }
        for &e in d.incident_at(v) {
            let edge = d.edge_at(e);
            let u = d.vidx(edge.u)?;
            let other = if u == v { d.vidx(edge.v)? } else { u };
            let nd = &dist + d.weight_at(e);
            push(&mut best, &mut heap, other, nd);
        }
    }
    Ok(best.into_iter().map(|b| b.expect("tree is connected")).collect())
}

/// `sup_{x ∈ X} d(x, M)`, computed exactly edge by edge.
pub fn covering_radius(d: &Dendrite, m: &FiniteClosedSet) -> Result<Q> {
    if m.is_empty() {
        return Err(Error::EmptySet);
    }
    let to_m = vertex_distances_to(d, m)?;
    let mut sup = to_m.iter().max().cloned().unwrap_or_else(Q::zero);
    for (i, edge) in d.edges().iter().enumerate() {
        let w = d.weight_at(i);
        let du = &to_m[d.vidx(edge.u)?];
        let dv = &to_m[d.vidx(edge.v)?];
        let mut inner: Vec<Q> = m
            .iter()
            .filter_map(|p| match p {
                DPoint::Edge { edge: e, t } if *e == edge.id => Some(t.clone()),
                _ => None,
            })
            .collect();
        inner.sort();
        // Breakpoints split [0,1]; on each piece the distance is the minimum
        // of an increasing and a decreasing line of slope ±w.
        let mut cuts = vec![Q::zero()];
        cuts.extend(inner.iter().cloned());
        cuts.push(qi(1));
        for win in cuts.windows(2) {
            let (a, b) = (&win[0], &win[1]);
            // increasing: t*w + inc, decreasing: dec - t*w
            let mut inc = du.clone();
            if inner.binary_search(a).is_ok() {
                let c = -(a * w);
                if c < inc {
                    inc = c;
                }
            }
            let mut dec = dv + w;
            if inner.binary_search(b).is_ok() {
                let c = b * w;
                if c < dec {
                    dec = c;
                }
            }
            let mut t = (&dec - &inc) / (w * qi(2));
            if t < *a {
                t = a.clone();
            }
            if t > *b {
                t = b.clone();
            }
            let up = &t * w + &inc;
            let down = &dec - &t * w;
            let val = if up <= down { up } else { down };
            if val > sup {
                sup = val;
            }
        }
    }
    Ok(sup.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrite::{Edge, VertexId, WeightRule};
    use crate::rational::q;

    fn unit_edge() -> Dendrite {
        Dendrite::unit_interval()
    }

    #[test]
    fn hausdorff_on_unit_edge() {
        let d = unit_edge();
        let a = FiniteClosedSet::singleton(DPoint::vertex(0));
        let b = FiniteClosedSet::singleton(DPoint::vertex(1));
        assert_eq!(hausdorff_distance(&d, &a, &b).unwrap(), qi(1));
        assert_eq!(hausdorff_distance(&d, &a, &a).unwrap(), qi(0));
        let mut c = a.clone();
        c.insert(d.midpoint(EdgeId(0)).unwrap());
        assert_eq!(hausdorff_distance(&d, &a, &c).unwrap(), q(1, 2));
        assert_eq!(
            hausdorff_distance(&d, &a, &FiniteClosedSet::new()),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn mesh_basics() {
        let d = unit_edge();
        let single = Subdendrite::point(&d, &DPoint::vertex(0)).unwrap();
        assert_eq!(mesh(&d, &[single]).unwrap(), qi(0));
        assert_eq!(mesh(&d, &[Subdendrite::whole(&d)]).unwrap(), qi(1));
        assert_eq!(mesh(&d, &[]), Err(Error::EmptyCover));
    }

    #[test]
    fn chaining_violation_is_located() {
        // 0-1, 2-3, 1-2: the second arc does not touch the first
        let d = Dendrite::new(
            (0..4).map(VertexId).collect(),
            vec![Edge::new(0, 0, 1, 1), Edge::new(1, 2, 3, 2), Edge::new(2, 1, 2, 3)],
            WeightRule::Dyadic,
        )
        .unwrap();
        assert_eq!(
            arc_decomposition(&d),
            Err(Error::ChainingViolation { index: 2 })
        );
    }

    #[test]
    fn path_decomposition_weights() {
        let d = Dendrite::new(
            (0..3).map(VertexId).collect(),
            vec![Edge::new(1, 0, 1, 1), Edge::new(2, 1, 2, 2)],
            WeightRule::Dyadic,
        )
        .unwrap();
        assert_eq!(
            arc_decomposition(&d).unwrap(),
            vec![(EdgeId(1), q(1, 2)), (EdgeId(2), q(1, 4))]
        );
        let single = Dendrite::new(
            vec![VertexId(0), VertexId(1)],
            vec![Edge::new(1, 0, 1, 1)],
            WeightRule::Dyadic,
        )
        .unwrap();
        assert_eq!(arc_decomposition(&single).unwrap(), vec![(EdgeId(1), q(1, 2))]);
    }

    #[test]
    fn unit_edge_modulus_is_identity() {
        let d = unit_edge();
        let grid = [q(1, 2), q(1, 4), q(1, 8)];
        for (eps, delta) in arc_diameter_modulus(&d, &grid) {
            assert_eq!(eps, delta);
        }
    }

    #[test]
    fn covering_radius_of_endpoints() {
        let d = unit_edge();
        let ends: FiniteClosedSet = [DPoint::vertex(0), DPoint::vertex(1)].into_iter().collect();
        assert_eq!(covering_radius(&d, &ends).unwrap(), q(1, 2));
        let mid = FiniteClosedSet::singleton(d.midpoint(EdgeId(0)).unwrap());
        assert_eq!(covering_radius(&d, &mid).unwrap(), q(1, 2));
        let left = FiniteClosedSet::singleton(d.edge_point(EdgeId(0), q(1, 4)).unwrap());
        assert_eq!(covering_radius(&d, &left).unwrap(), q(3, 4));
    }
}
