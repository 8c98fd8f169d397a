//! Dendrites modeled as finite weighted trees.
//!
//! Every edge is identified with the unit interval (`t = 0` at `u`, `t = 1` at
//! `v`) and carries a positive rational weight; the length of a sub-interval
//! `[s, t]` of edge `e` is `|t - s| * w(e)`. The resulting path metric is the
//! canonical metric of the crate.

mod collapse;
mod json;
mod metric;
mod point;
mod subtree;

use std::collections::{HashMap, VecDeque};

use num::{Signed, Zero};

pub use collapse::{collapse_points, CollapseProjection, EdgeGraph};
pub use metric::{
    arc_decomposition, arc_diameter_modulus, boundary_classification, covering_radius,
    hausdorff_distance, mesh, nearest_distance, weighted_metric, BoundaryClasses,
};
pub use point::{DPoint, EdgeId, FiniteClosedSet, VertexId};
pub use subtree::{arc_between, convex_hull, retract, ArcPath, ArcPiece, Subdendrite};

use crate::error::{Error, Result};
use crate::rational::{dyadic, half, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    /// Position `i >= 1` in the arc decomposition; drives the dyadic rule.
    pub level: u32,
}

impl Edge {
    pub fn new(id: u32, u: u32, v: u32, level: u32) -> Self {
        Edge {
            id: EdgeId(id),
            u: VertexId(u),
            v: VertexId(v),
            level,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightRule {
    /// Edge of level `i` weighs `2^{-i}`.
    Dyadic,
    /// One weight per edge, in enumeration order.
    Custom(Vec<Q>),
}

/// Location of a point relative to the rooted tree.
#[derive(Clone, Debug)]
pub(crate) enum Loc {
    Vertex(usize),
    Interior {
        e: usize,
        parent: usize,
        child: usize,
        /// Fraction of the edge between the parent end and the point.
        s: Q,
    },
}

#[derive(Clone, Debug)]
pub struct Dendrite {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    rule: WeightRule,
    weights: Vec<Q>,
    vindex: HashMap<VertexId, usize>,
    eindex: HashMap<EdgeId, usize>,
    incident: Vec<Vec<usize>>,
    between: HashMap<(usize, usize), usize>,
    root: usize,
    parent_edge: Vec<Option<usize>>,
    depth: Vec<u32>,
    root_dist: Vec<Q>,
    lift: Vec<Vec<usize>>,
}

impl PartialEq for Dendrite {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges && self.weights == other.weights
    }
}

impl Eq for Dendrite {}

impl Dendrite {
    /// Builds a dendrite, checking that the graph is a tree with positive
    /// weights. The chaining property of the edge order is *not* required
    /// here; [`arc_decomposition`] validates it.
    pub fn new(vertices: Vec<VertexId>, edges: Vec<Edge>, rule: WeightRule) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidDendrite(m));
        if vertices.is_empty() {
            return invalid("no vertices".into());
        }
        let mut vindex = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(*v, i).is_some() {
                return invalid(format!("duplicate vertex {v}"));
            }
        }
        let weights: Vec<Q> = match &rule {
            WeightRule::Dyadic => edges.iter().map(|e| dyadic(e.level)).collect(),
            WeightRule::Custom(ws) => {
                if ws.len() != edges.len() {
                    return invalid(format!(
                        "{} custom weights for {} edges",
                        ws.len(),
                        edges.len()
                    ));
                }
                ws.clone()
            }
        };
        let mut eindex = HashMap::with_capacity(edges.len());
        let mut incident = vec![Vec::new(); vertices.len()];
        let mut between = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if eindex.insert(e.id, i).is_some() {
                return invalid(format!("duplicate edge {}", e.id));
            }
            if e.level == 0 {
                return invalid(format!("edge {} has level 0", e.id));
            }
            if !weights[i].is_positive() {
                return invalid(format!("edge {} has non-positive weight", e.id));
            }
            let (Some(&a), Some(&b)) = (vindex.get(&e.u), vindex.get(&e.v)) else {
                return invalid(format!("edge {} references an unknown vertex", e.id));
            };
            if a == b {
                return invalid(format!("edge {} is a loop", e.id));
            }
            if between.insert((a.min(b), a.max(b)), i).is_some() {
                return invalid(format!("parallel edges at {}", e.id));
            }
            incident[a].push(i);
            incident[b].push(i);
        }
        if edges.len() + 1 != vertices.len() {
            return invalid(format!(
                "{} vertices and {} edges cannot form a tree",
                vertices.len(),
                edges.len()
            ));
        }

        let root = edges.first().map(|e| vindex[&e.u]).unwrap_or(0);
        let n = vertices.len();
        let mut parent = vec![usize::MAX; n];
        let mut parent_edge = vec![None; n];
        let mut depth = vec![0u32; n];
        let mut root_dist = vec![Q::zero(); n];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        let mut seen = 1;
        while let Some(x) = queue.pop_front() {
            for &ei in &incident[x] {
                let e = &edges[ei];
                let y = if vindex[&e.u] == x { vindex[&e.v] } else { vindex[&e.u] };
                if parent[y] != usize::MAX {
                    continue;
                }
                parent[y] = x;
                parent_edge[y] = Some(ei);
                depth[y] = depth[x] + 1;
                root_dist[y] = &root_dist[x] + &weights[ei];
                seen += 1;
                queue.push_back(y);
            }
        }
        if seen != n {
            return invalid("graph is not connected".into());
        }

        let levels = (usize::BITS - n.leading_zeros()).max(1) as usize;
        let mut lift = vec![parent.clone()];
        for k in 1..levels {
            let prev = &lift[k - 1];
            let next: Vec<usize> = (0..n).map(|v| prev[prev[v]]).collect();
            lift.push(next);
        }

        Ok(Dendrite {
            vertices,
            edges,
            rule,
            weights,
            vindex,
            eindex,
            incident,
            between,
            root,
            parent_edge,
            depth,
            root_dist,
            lift,
        })
    }

    /// A single edge `0 -- 1` of weight 1, i.e. the unit interval with its
    /// Euclidean metric.
    pub fn unit_interval() -> Self {
        Dendrite::new(
            vec![VertexId(0), VertexId(1)],
            vec![Edge::new(0, 0, 1, 1)],
            WeightRule::Custom(vec![Q::from_integer(1.into())]),
        )
        .expect("unit interval is a tree")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight_rule(&self) -> &WeightRule {
        &self.rule
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vindex.contains_key(&v)
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.eindex
            .get(&id)
            .map(|&i| &self.edges[i])
            .ok_or_else(|| Error::PointOffDendrite(format!("unknown edge {id}")))
    }

    pub fn weight(&self, id: EdgeId) -> Result<&Q> {
        self.eindex
            .get(&id)
            .map(|&i| &self.weights[i])
            .ok_or_else(|| Error::PointOffDendrite(format!("unknown edge {id}")))
    }

    pub fn total_weight(&self) -> Q {
        self.weights.iter().fold(Q::zero(), |acc, w| acc + w)
    }

    pub fn root(&self) -> VertexId {
        self.vertices[self.root]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vindex.get(&v).map_or(0, |&i| self.incident[i].len())
    }

    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.vindex
            .get(&v)
            .map(|&i| self.incident[i].iter().map(|&e| self.edges[e].id).collect())
            .unwrap_or_default()
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let (&x, &y) = (self.vindex.get(&a)?, self.vindex.get(&b)?);
        self.between
            .get(&(x.min(y), x.max(y)))
            .map(|&i| self.edges[i].id)
    }

    /// Depth of a vertex below the root (in edges).
    pub fn depth(&self, v: VertexId) -> Option<u32> {
        self.vindex.get(&v).map(|&i| self.depth[i])
    }

    /// Canonical point at parameter `t` of edge `e`.
    pub fn edge_point(&self, e: EdgeId, t: Q) -> Result<DPoint> {
        let edge = self.edge(e)?;
        if t.is_zero() {
            Ok(DPoint::Vertex(edge.u))
        } else if t == Q::from_integer(1.into()) {
            Ok(DPoint::Vertex(edge.v))
        } else if t.is_positive() && t < Q::from_integer(1.into()) {
            Ok(DPoint::Edge { edge: e, t })
        } else {
            Err(Error::PointOffDendrite(format!("parameter {t} outside [0,1]")))
        }
    }

    pub fn midpoint(&self, e: EdgeId) -> Result<DPoint> {
        self.edge_point(e, half())
    }

    pub fn check_point(&self, p: &DPoint) -> Result<()> {
        self.locate(p).map(|_| ())
    }

    /// Parameter of `p` along edge `e` when `p` lies on the closed edge.
    pub fn param_on_edge(&self, p: &DPoint, e: EdgeId) -> Option<Q> {
        let edge = self.edge(e).ok()?;
        match p {
            DPoint::Vertex(v) if *v == edge.u => Some(Q::zero()),
            DPoint::Vertex(v) if *v == edge.v => Some(Q::from_integer(1.into())),
            DPoint::Edge { edge: pe, t } if *pe == e => Some(t.clone()),
            _ => None,
        }
    }

    /// Vertices and edge midpoints.
    pub fn skeleton_points(&self) -> Vec<DPoint> {
        let mut pts: Vec<DPoint> = self.vertices.iter().map(|v| DPoint::Vertex(*v)).collect();
        pts.extend(self.edges.iter().map(|e| DPoint::Edge {
            edge: e.id,
            t: half(),
        }));
        pts
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dendrite serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    // --- rooted-tree internals -------------------------------------------

    pub(crate) fn vidx(&self, v: VertexId) -> Result<usize> {
        self.vindex
            .get(&v)
            .copied()
            .ok_or_else(|| Error::PointOffDendrite(format!("unknown vertex {v}")))
    }

    pub(crate) fn eidx(&self, e: EdgeId) -> Result<usize> {
        self.eindex
            .get(&e)
            .copied()
            .ok_or_else(|| Error::PointOffDendrite(format!("unknown edge {e}")))
    }

    pub(crate) fn edge_at(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub(crate) fn weight_at(&self, i: usize) -> &Q {
        &self.weights[i]
    }

    pub(crate) fn incident_at(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub(crate) fn parent_edge_of(&self, v: usize) -> Option<usize> {
        self.parent_edge[v]
    }

    pub(crate) fn parent_of(&self, v: usize) -> usize {
        self.lift[0][v]
    }

    /// Parameter of vertex `v` on edge `e` (0 for `u`, 1 for `v`).
    pub(crate) fn end_param(&self, e: usize, v: usize) -> Q {
        if self.vindex[&self.edges[e].u] == v {
            Q::zero()
        } else {
            Q::from_integer(1.into())
        }
    }

    pub(crate) fn locate(&self, p: &DPoint) -> Result<Loc> {
        match p {
            DPoint::Vertex(v) => Ok(Loc::Vertex(self.vidx(*v)?)),
            DPoint::Edge { edge, t } => {
                let e = self.eidx(*edge)?;
                if !t.is_positive() || *t >= Q::from_integer(1.into()) {
                    return Err(Error::PointOffDendrite(format!(
                        "non-canonical edge parameter {t}"
                    )));
                }
                let ed = &self.edges[e];
                let (a, b) = (self.vindex[&ed.u], self.vindex[&ed.v]);
                let (parent, child, s) = if self.parent_edge[b] == Some(e) {
                    (a, b, t.clone())
                } else {
                    (b, a, Q::from_integer(1.into()) - t)
                };
                Ok(Loc::Interior {
                    e,
                    parent,
                    child,
                    s,
                })
            }
        }
    }

    pub(crate) fn root_distance(&self, loc: &Loc) -> Q {
        match loc {
            Loc::Vertex(v) => self.root_dist[*v].clone(),
            Loc::Interior { e, parent, s, .. } => &self.root_dist[*parent] + s * &self.weights[*e],
        }
    }

    pub(crate) fn lca(&self, mut a: usize, mut b: usize) -> usize {
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let mut diff = self.depth[a] - self.depth[b];
        let mut k = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                a = self.lift[k][a];
            }
            diff >>= 1;
            k += 1;
        }
        if a == b {
            return a;
        }
        for k in (0..self.lift.len()).rev() {
            if self.lift[k][a] != self.lift[k][b] {
                a = self.lift[k][a];
                b = self.lift[k][b];
            }
        }
        self.lift[0][a]
    }

    /// Exact distance under the weighted path metric.
    pub fn distance(&self, x: &DPoint, y: &DPoint) -> Result<Q> {
        let lx = self.locate(x)?;
        let ly = self.locate(y)?;
        Ok(self.distance_loc(&lx, &ly))
    }

    pub(crate) fn distance_loc(&self, lx: &Loc, ly: &Loc) -> Q {
        if let (Loc::Interior { e: ex, s: sx, .. }, Loc::Interior { e: ey, s: sy, .. }) = (lx, ly) {
            if ex == ey {
                return (sx - sy).abs() * &self.weights[*ex];
            }
        }
        let anchor = |l: &Loc| match l {
            Loc::Vertex(v) => *v,
            Loc::Interior { child, .. } => *child,
        };
        let l = self.lca(anchor(lx), anchor(ly));
        let rx = self.root_distance(lx);
        let ry = self.root_distance(ly);
        let meet = match (lx, ly) {
            (Loc::Interior { child, .. }, _) if *child == l => rx.clone(),
            (_, Loc::Interior { child, .. }) if *child == l => ry.clone(),
            _ => self.root_dist[l].clone(),
        };
        rx + ry - meet.clone() - meet
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn path3() -> Dendrite {
        Dendrite::new(
            vec![VertexId(0), VertexId(1), VertexId(2)],
            vec![Edge::new(0, 0, 1, 1), Edge::new(1, 2, 1, 2)],
            WeightRule::Dyadic,
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_trees() {
        let cyc = Dendrite::new(
            vec![VertexId(0), VertexId(1), VertexId(2)],
            vec![
                Edge::new(0, 0, 1, 1),
                Edge::new(1, 1, 2, 2),
                Edge::new(2, 2, 0, 3),
            ],
            WeightRule::Dyadic,
        );
        assert!(matches!(cyc, Err(Error::InvalidDendrite(_))));
        let disconnected = Dendrite::new(
            vec![VertexId(0), VertexId(1), VertexId(2), VertexId(3)],
            vec![Edge::new(0, 0, 1, 1), Edge::new(1, 2, 3, 2)],
            WeightRule::Dyadic,
        );
        assert!(disconnected.is_err());
        let zero_weight = Dendrite::new(
            vec![VertexId(0), VertexId(1)],
            vec![Edge::new(0, 0, 1, 1)],
            WeightRule::Custom(vec![qi(0)]),
        );
        assert!(zero_weight.is_err());
    }

    #[test]
    fn canonical_edge_points() {
        let d = path3();
        assert_eq!(d.edge_point(EdgeId(1), qi(0)).unwrap(), DPoint::vertex(2));
        assert_eq!(d.edge_point(EdgeId(1), qi(1)).unwrap(), DPoint::vertex(1));
        assert!(d.edge_point(EdgeId(1), q(3, 2)).is_err());
        assert!(d.edge_point(EdgeId(7), q(1, 2)).is_err());
        let bad = DPoint::Edge {
            edge: EdgeId(0),
            t: qi(0),
        };
        assert!(d.check_point(&bad).is_err());
    }

    #[test]
    fn distances_on_a_path() {
        let d = path3();
        // edge 0 weight 1/2, edge 1 weight 1/4, oriented 2 -> 1
        assert_eq!(d.distance(&DPoint::vertex(0), &DPoint::vertex(2)).unwrap(), q(3, 4));
        let a = d.edge_point(EdgeId(0), q(1, 2)).unwrap();
        let b = d.edge_point(EdgeId(1), q(1, 4)).unwrap();
        // a is 1/4 from v1, b is 3/4 * 1/4 from v1
        assert_eq!(d.distance(&a, &b).unwrap(), q(1, 4) + q(3, 16));
        let c = d.edge_point(EdgeId(0), q(1, 8)).unwrap();
        assert_eq!(d.distance(&a, &c).unwrap(), q(3, 16));
        assert_eq!(d.distance(&c, &DPoint::vertex(1)).unwrap(), q(7, 16));
    }
}
