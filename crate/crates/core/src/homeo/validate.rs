use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Homeo, HomeoMap, IntervalPL, TreeAuto};
use crate::dendrite::{DPoint, Dendrite, EdgeId, VertexId};
use crate::rational::{fmt_q, q, Q};

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_SAMPLES: usize = 100;

/// The first defect found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    /// Piece `index` of a PL table is flat or runs against the orientation.
    MonotonicityViolation { edge: Option<EdgeId>, index: usize },
    EndpointViolation { detail: String },
    WrongDendrite { detail: String },
    MissingVertex { vertex: VertexId },
    UnknownVertex { vertex: VertexId },
    NotInjective { a: VertexId, b: VertexId, image: VertexId },
    NotAdjacencyPreserving { edge: EdgeId },
    LevelNotPreserved { edge: EdgeId },
    RoundTripFailure { point: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MonotonicityViolation { edge: Some(e), index } => {
                write!(f, "MonotonicityViolation on {e}, piece {index}")
            }
            Violation::MonotonicityViolation { edge: None, index } => {
                write!(f, "MonotonicityViolation at piece {index}")
            }
            Violation::EndpointViolation { detail } => write!(f, "EndpointViolation: {detail}"),
            Violation::WrongDendrite { detail } => write!(f, "WrongDendrite: {detail}"),
            Violation::MissingVertex { vertex } => write!(f, "MissingVertex: {vertex} has no image"),
            Violation::UnknownVertex { vertex } => write!(f, "UnknownVertex: {vertex}"),
            Violation::NotInjective { a, b, image } => {
                write!(f, "NotInjective: {a} and {b} both map to {image}")
            }
            Violation::NotAdjacencyPreserving { edge } => {
                write!(f, "NotAdjacencyPreserving: {edge} is not carried onto an edge")
            }
            Violation::LevelNotPreserved { edge } => write!(f, "LevelNotPreserved on {edge}"),
            Violation::RoundTripFailure { point } => write!(f, "RoundTripFailure at {point}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: &'static str,
    /// Every edge lands on an edge of equal weight with identity
    /// reparametrization, so the map preserves the weighted metric.
    pub isometric: bool,
    pub samples_checked: usize,
}

pub fn validate(h: &Homeo) -> Result<Certificate, Violation> {
    validate_with_seed(h, DEFAULT_SEED, DEFAULT_SAMPLES)
}

/// Checks the map's tables, then round-trips the skeleton and `samples`
/// random rational interior points through the map and its inverse.
pub fn validate_with_seed(h: &Homeo, seed: u64, samples: usize) -> Result<Certificate, Violation> {
    let d = h.dendrite();
    let (kind, isometric) = match h.map() {
        HomeoMap::IntervalPl(pl) => {
            check_pl(pl, None, true)?;
            ("interval_pl", pl.is_identity() || *pl == flip())
        }
        HomeoMap::TreeAuto(a) => ("tree_auto", check_tree_auto(d, a)?),
    };
    let inv = h.invert().map_err(|e| Violation::EndpointViolation {
        detail: e.to_string(),
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = d.skeleton_points();
    for _ in 0..samples {
        let e = d.edges()[rng.gen_range(0..d.edges().len())].id;
        let den: i64 = 1 << rng.gen_range(1..12);
        let num = rng.gen_range(1..den);
        points.push(d.edge_point(e, q(num, den)).expect("interior parameter"));
    }
    let mut images = BTreeSet::new();
    for p in &points {
        let fail = || Violation::RoundTripFailure { point: p.to_string() };
        let y = h.apply(p).map_err(|_| fail())?;
        if inv.apply(&y).map_err(|_| fail())? != *p {
            return Err(fail());
        }
        images.insert(y);
    }
    let distinct: BTreeSet<&DPoint> = points.iter().collect();
    if images.len() != distinct.len() {
        return Err(Violation::RoundTripFailure {
            point: "sample images collide".into(),
        });
    }
    Ok(Certificate {
        kind,
        isometric,
        samples_checked: points.len(),
    })
}

fn flip() -> IntervalPL {
    IntervalPL::new(vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]).expect("valid table")
}

/// An interval table must be strictly monotone and map `{0, 1}` onto itself.
/// Edge reparametrizations must additionally fix both ends.
fn check_pl(pl: &IntervalPL, edge: Option<EdgeId>, allow_reversal: bool) -> Result<(), Violation> {
    let ys = pl.ys();
    let increasing = ys[0] <= ys[ys.len() - 1];
    if !increasing && !allow_reversal {
        return Err(Violation::MonotonicityViolation { edge, index: 0 });
    }
    for (i, w) in ys.windows(2).enumerate() {
        if (increasing && w[0] >= w[1]) || (!increasing && w[0] <= w[1]) {
            return Err(Violation::MonotonicityViolation { edge, index: i });
        }
    }
    let ends: (Q, Q) = if increasing { (q(0, 1), q(1, 1)) } else { (q(1, 1), q(0, 1)) };
    if ys[0] != ends.0 || ys[ys.len() - 1] != ends.1 {
        let at = edge.map(|e| format!(" on {e}")).unwrap_or_default();
        return Err(Violation::EndpointViolation {
            detail: format!("values{at} run from {} to {}", fmt_q(&ys[0]), fmt_q(&ys[ys.len() - 1])),
        });
    }
    Ok(())
}

fn check_tree_auto(d: &Dendrite, a: &TreeAuto) -> Result<bool, Violation> {
    for v in a.vertex_map().keys() {
        if !d.has_vertex(*v) {
            return Err(Violation::UnknownVertex { vertex: *v });
        }
    }
    let mut seen = std::collections::BTreeMap::new();
    for v in d.vertices() {
        let w = *a
            .vertex_map()
            .get(v)
            .ok_or(Violation::MissingVertex { vertex: *v })?;
        if !d.has_vertex(w) {
            return Err(Violation::UnknownVertex { vertex: w });
        }
        if let Some(prev) = seen.insert(w, *v) {
            return Err(Violation::NotInjective {
                a: prev,
                b: *v,
                image: w,
            });
        }
    }
    for e in a.reparams().keys() {
        if d.edge(*e).is_err() {
            return Err(Violation::WrongDendrite {
                detail: format!("reparametrization for unknown edge {e}"),
            });
        }
    }
    let mut isometric = a.reparams().is_empty();
    for edge in d.edges() {
        let (target, _) = a
            .target_edge(d, edge.id)
            .map_err(|_| Violation::NotAdjacencyPreserving { edge: edge.id })?;
        let target = d.edge(target).expect("edge exists");
        if target.level != edge.level {
            return Err(Violation::LevelNotPreserved { edge: edge.id });
        }
        if let Some(phi) = a.reparams().get(&edge.id) {
            check_pl(phi, Some(edge.id), false)?;
        }
        isometric &= d.weight(target.id).ok() == d.weight(edge.id).ok();
    }
    Ok(isometric)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::dendrite::{Edge, WeightRule};
    use crate::rational::qi;

    fn star() -> Arc<Dendrite> {
        Arc::new(
            Dendrite::new(
                (0..4).map(VertexId).collect(),
                vec![Edge::new(0, 0, 1, 1), Edge::new(1, 0, 2, 1), Edge::new(2, 0, 3, 1)],
                WeightRule::Dyadic,
            )
            .unwrap(),
        )
    }

    fn perm(pairs: &[(u32, u32)]) -> BTreeMap<VertexId, VertexId> {
        pairs.iter().map(|(a, b)| (VertexId(*a), VertexId(*b))).collect()
    }

    #[test]
    fn rotation_is_valid_and_isometric() {
        let h = Homeo::tree_auto(star(), TreeAuto::from_permutation(perm(&[(0, 0), (1, 2), (2, 3), (3, 1)])));
        let cert = validate(&h).unwrap();
        assert!(cert.isometric);
        assert!(cert.samples_checked >= DEFAULT_SAMPLES);
    }

    #[test]
    fn collapsing_vertex_map_is_not_injective() {
        let h = Homeo::tree_auto(star(), TreeAuto::from_permutation(perm(&[(0, 0), (1, 2), (2, 2), (3, 3)])));
        assert_eq!(
            validate(&h),
            Err(Violation::NotInjective {
                a: VertexId(1),
                b: VertexId(2),
                image: VertexId(2)
            })
        );
    }

    #[test]
    fn moving_the_center_breaks_adjacency() {
        let h = Homeo::tree_auto(star(), TreeAuto::from_permutation(perm(&[(0, 1), (1, 0), (2, 2), (3, 3)])));
        assert_eq!(
            validate(&h),
            Err(Violation::NotAdjacencyPreserving { edge: EdgeId(1) })
        );
    }

    #[test]
    fn flat_piece_is_a_monotonicity_violation() {
        let pl = IntervalPL::new(
            vec![qi(0), q(1, 3), q(2, 3), qi(1)],
            vec![qi(0), q(1, 2), q(1, 2), qi(1)],
        )
        .unwrap();
        let h = Homeo::interval(Arc::new(Dendrite::unit_interval()), pl).unwrap();
        assert_eq!(
            validate(&h),
            Err(Violation::MonotonicityViolation { edge: None, index: 1 })
        );
    }

    #[test]
    fn map_missing_an_end_is_rejected() {
        let pl = IntervalPL::new(vec![qi(0), qi(1)], vec![qi(0), q(1, 2)]).unwrap();
        let h = Homeo::interval(Arc::new(Dendrite::unit_interval()), pl).unwrap();
        assert!(matches!(validate(&h), Err(Violation::EndpointViolation { .. })));
    }

    #[test]
    fn reversal_is_valid() {
        let h = Homeo::interval(Arc::new(Dendrite::unit_interval()), flip()).unwrap();
        assert!(validate(&h).unwrap().isometric);
    }
}
