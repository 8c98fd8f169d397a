use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use serde::{Deserialize, Serialize};

use super::{DPoint, Dendrite, EdgeId, FiniteClosedSet, Loc, VertexId};
use crate::error::{Error, Result};
use crate::rational::{RatStr, Q};

/// A piece of an arc: the edge parameter runs from `from` to `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcPiece {
    pub edge: EdgeId,
    pub from: Q,
    pub to: Q,
}

/// The unique arc between two points, as an ordered list of edge pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcPath {
    pub start: DPoint,
    pub end: DPoint,
    pub pieces: Vec<ArcPiece>,
}

impl ArcPath {
    pub fn new(d: &Dendrite, x: &DPoint, y: &DPoint) -> Result<Self> {
        let lx = d.locate(x)?;
        let ly = d.locate(y)?;
        let mut pieces = Vec::new();
        if x != y {
            match (&lx, &ly) {
                (Loc::Interior { e: ex, .. }, Loc::Interior { e: ey, .. }) if ex == ey => {
                    pieces.push(ArcPiece {
                        edge: d.edge_at(*ex).id,
                        from: param(d, &lx),
                        to: param(d, &ly),
                    });
                }
                _ => {
                    let anchor = |l: &Loc| match l {
                        Loc::Vertex(v) => *v,
                        Loc::Interior { child, .. } => *child,
                    };
                    let l = d.lca(anchor(&lx), anchor(&ly));
                    climb(d, &lx, l, &mut pieces);
                    let mut back = Vec::new();
                    climb(d, &ly, l, &mut back);
                    pieces.extend(back.into_iter().rev().map(|p| ArcPiece {
                        edge: p.edge,
                        from: p.to,
                        to: p.from,
                    }));
                }
            }
        }
        Ok(ArcPath {
            start: x.clone(),
            end: y.clone(),
            pieces,
        })
    }

    /// Sum of weighted piece lengths.
    pub fn length(&self, d: &Dendrite) -> Q {
        self.pieces.iter().fold(Q::zero(), |acc, p| {
            let w = d.weight(p.edge).expect("arc pieces lie on the dendrite");
            acc + num::abs(&p.to - &p.from) * w
        })
    }
}

fn param(d: &Dendrite, l: &Loc) -> Q {
    match l {
        Loc::Vertex(_) => unreachable!("vertex has no single edge parameter"),
        Loc::Interior { e, parent, s, .. } => {
            if d.end_param(*e, *parent).is_zero() {
                s.clone()
            } else {
                Q::from_integer(1.into()) - s
            }
        }
    }
}

/// Pieces from the point up to the ancestor vertex `l`.
fn climb(d: &Dendrite, loc: &Loc, l: usize, out: &mut Vec<ArcPiece>) {
    let mut v = match loc {
        Loc::Vertex(v) => *v,
        Loc::Interior { e, parent, child, .. } => {
            let t = param(d, loc);
            let edge = d.edge_at(*e).id;
            if *child == l {
                out.push(ArcPiece {
                    edge,
                    from: t,
                    to: d.end_param(*e, *child),
                });
                return;
            }
            out.push(ArcPiece {
                edge,
                from: t,
                to: d.end_param(*e, *parent),
            });
            *parent
        }
    };
    while v != l {
        let e = d.parent_edge_of(v).expect("non-root vertex has a parent edge");
        let p = d.parent_of(v);
        out.push(ArcPiece {
            edge: d.edge_at(e).id,
            from: d.end_param(e, v),
            to: d.end_param(e, p),
        });
        v = p;
    }
}

/// A connected closed subset of a dendrite: whole vertices plus closed
/// parameter intervals on edges.
///
/// Canonical form: an interval touching an edge end implies the end vertex is
/// present; a degenerate interval `(t, t)` only occurs when the whole
/// subdendrite is that single interior point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Subdendrite {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (Q, Q)>,
}

impl Subdendrite {
    pub fn point(d: &Dendrite, p: &DPoint) -> Result<Self> {
        d.check_point(p)?;
        let mut s = Subdendrite::default();
        s.add_point(p);
        Ok(s)
    }

    pub fn whole(d: &Dendrite) -> Self {
        let mut s = Subdendrite::default();
        for e in d.edges() {
            s.add_piece(d, e.id, Q::zero(), Q::from_integer(1.into()));
        }
        for v in d.vertices() {
            s.vertices.insert(*v);
        }
        s
    }

    pub fn from_arc(d: &Dendrite, arc: &ArcPath) -> Self {
        let mut s = Subdendrite::default();
        s.add_arc(d, arc);
        s
    }

    pub(crate) fn add_point(&mut self, p: &DPoint) {
        match p {
            DPoint::Vertex(v) => {
                self.vertices.insert(*v);
            }
            DPoint::Edge { edge, t } => {
                self.edges
                    .entry(*edge)
                    .and_modify(|(lo, hi)| {
                        if t < lo {
                            *lo = t.clone();
                        }
                        if t > hi {
                            *hi = t.clone();
                        }
                    })
                    .or_insert_with(|| (t.clone(), t.clone()));
            }
        }
    }

    pub(crate) fn add_piece(&mut self, d: &Dendrite, e: EdgeId, a: Q, b: Q) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let edge = d.edge(e).expect("piece lies on the dendrite");
        if lo.is_zero() {
            self.vertices.insert(edge.u);
        }
        if hi == Q::from_integer(1.into()) {
            self.vertices.insert(edge.v);
        }
        self.edges
            .entry(e)
            .and_modify(|(l, h)| {
                if lo < *l {
                    *l = lo.clone();
                }
                if hi > *h {
                    *h = hi.clone();
                }
            })
            .or_insert((lo, hi));
    }

    pub(crate) fn add_arc(&mut self, d: &Dendrite, arc: &ArcPath) {
        self.add_point(&arc.start);
        self.add_point(&arc.end);
        for p in &arc.pieces {
            self.add_piece(d, p.edge, p.from.clone(), p.to.clone());
        }
    }

    /// Union with another subdendrite; the caller guarantees connectedness.
    pub fn merge(&mut self, d: &Dendrite, other: &Subdendrite) {
        self.vertices.extend(other.vertices.iter().copied());
        for (e, (lo, hi)) in &other.edges {
            if lo == hi {
                self.add_point(&DPoint::Edge {
                    edge: *e,
                    t: lo.clone(),
                });
            } else {
                self.add_piece(d, *e, lo.clone(), hi.clone());
            }
        }
        self.normalize();
    }

    fn normalize(&mut self) {
        let has_bulk = !self.vertices.is_empty() || self.edges.values().any(|(l, h)| l != h);
        if has_bulk {
            self.edges.retain(|_, (l, h)| l != h);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edge_intervals(&self) -> &BTreeMap<EdgeId, (Q, Q)> {
        &self.edges
    }

    pub fn contains(&self, p: &DPoint) -> bool {
        match p {
            DPoint::Vertex(v) => self.vertices.contains(v),
            DPoint::Edge { edge, t } => self
                .edges
                .get(edge)
                .is_some_and(|(lo, hi)| lo <= t && t <= hi),
        }
    }

    /// The single point this subdendrite consists of, if degenerate.
    pub fn as_point(&self) -> Option<DPoint> {
        match (self.vertices.len(), self.edges.len()) {
            (1, 0) => self.vertices.iter().next().map(|v| DPoint::Vertex(*v)),
            (0, 1) => {
                let (e, (lo, hi)) = self.edges.iter().next()?;
                (lo == hi).then(|| DPoint::Edge {
                    edge: *e,
                    t: lo.clone(),
                })
            }
            _ => None,
        }
    }

    pub fn is_subset(&self, other: &Subdendrite) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self.edges.iter().all(|(e, (lo, hi))| {
                other
                    .edges
                    .get(e)
                    .is_some_and(|(olo, ohi)| olo <= lo && hi <= ohi)
            })
    }

    pub fn intersection(&self, other: &Subdendrite) -> Subdendrite {
        let vertices: BTreeSet<VertexId> =
            self.vertices.intersection(&other.vertices).copied().collect();
        let mut edges = BTreeMap::new();
        for (e, (lo, hi)) in &self.edges {
            if let Some((olo, ohi)) = other.edges.get(e) {
                let l = if lo > olo { lo } else { olo };
                let h = if hi < ohi { hi } else { ohi };
                let one = Q::from_integer(1.into());
                if l < h || (l == h && !l.is_zero() && *l != one) {
                    edges.insert(*e, (l.clone(), h.clone()));
                }
            }
        }
        let mut s = Subdendrite { vertices, edges };
        s.normalize();
        s
    }

    /// Extreme points: points of degree at most one inside the subtree.
    pub fn endpoints(&self, d: &Dendrite) -> FiniteClosedSet {
        if let Some(p) = self.as_point() {
            return FiniteClosedSet::singleton(p);
        }
        let one = Q::from_integer(1.into());
        let mut out = FiniteClosedSet::new();
        for (e, (lo, hi)) in &self.edges {
            if !lo.is_zero() {
                out.insert(DPoint::Edge {
                    edge: *e,
                    t: lo.clone(),
                });
            }
            if *hi != one {
                out.insert(DPoint::Edge {
                    edge: *e,
                    t: hi.clone(),
                });
            }
        }
        for v in &self.vertices {
            let inside = self.degree_at(d, *v);
            if inside <= 1 {
                out.insert(DPoint::Vertex(*v));
            }
        }
        out
    }

    /// Number of edges at `v` along which the subtree leaves `v`.
    pub fn degree_at(&self, d: &Dendrite, v: VertexId) -> usize {
        if !self.vertices.contains(&v) {
            return 0;
        }
        let one = Q::from_integer(1.into());
        d.incident_edges(v)
            .into_iter()
            .filter(|e| {
                self.edges.get(e).is_some_and(|(lo, hi)| {
                    let edge = d.edge(*e).expect("incident edge exists");
                    if edge.u == v {
                        lo.is_zero()
                    } else {
                        *hi == one
                    }
                })
            })
            .count()
    }

    /// Diameter, attained at a pair of extreme points.
    pub fn diameter(&self, d: &Dendrite) -> Q {
        let ends: Vec<DPoint> = self.endpoints(d).into_iter().collect();
        let mut best = Q::zero();
        for (i, a) in ends.iter().enumerate() {
            for b in &ends[i + 1..] {
                let dist = d.distance(a, b).expect("endpoints lie on the dendrite");
                if dist > best {
                    best = dist;
                }
            }
        }
        best
    }

    /// Weighted length (one-dimensional measure) of the subtree.
    pub fn length(&self, d: &Dendrite) -> Q {
        self.edges.iter().fold(Q::zero(), |acc, (e, (lo, hi))| {
            acc + (hi - lo) * d.weight(*e).expect("edge exists")
        })
    }
}

#[derive(Serialize, Deserialize)]
struct SubdendriteJson {
    vertices: Vec<VertexId>,
    edges: Vec<IntervalJson>,
}

#[derive(Serialize, Deserialize)]
struct IntervalJson {
    id: EdgeId,
    a: RatStr,
    b: RatStr,
}

impl Serialize for Subdendrite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubdendriteJson {
            vertices: self.vertices.iter().copied().collect(),
            edges: self
                .edges
                .iter()
                .map(|(e, (a, b))| IntervalJson {
                    id: *e,
                    a: a.into(),
                    b: b.into(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subdendrite {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SubdendriteJson::deserialize(d)?;
        Ok(Subdendrite {
            vertices: raw.vertices.into_iter().collect(),
            edges: raw.edges.into_iter().map(|i| (i.id, (i.a.0, i.b.0))).collect(),
        })
    }
}

/// The unique arc `[x, y]`.
pub fn arc_between(d: &Dendrite, x: &DPoint, y: &DPoint) -> Result<Subdendrite> {
    let arc = ArcPath::new(d, x, y)?;
    Ok(Subdendrite::from_arc(d, &arc))
}

/// Convex hull `[A]`: the union of arcs from one point of `A` to all others,
/// which equals the union over all pairs in a tree.
pub fn convex_hull<'a, I>(d: &Dendrite, points: I) -> Result<Subdendrite>
where
    I: IntoIterator<Item = &'a DPoint>,
{
    let mut it = points.into_iter();
    let first = it.next().ok_or(Error::EmptySet)?;
    let mut hull = Subdendrite::point(d, first)?;
    for x in it {
        let arc = ArcPath::new(d, first, x)?;
        hull.add_arc(d, &arc);
    }
    hull.normalize();
    Ok(hull)
}

/// Nearest point of `y` to `x` (the first point of `y` met along any arc
/// from `x` into `y`).
pub fn retract(d: &Dendrite, y: &Subdendrite, x: &DPoint) -> Result<DPoint> {
    d.check_point(x)?;
    if y.is_empty() {
        return Err(Error::EmptySubdendrite);
    }
    if y.contains(x) {
        return Ok(x.clone());
    }
    let target = match y.vertices.iter().next() {
        Some(v) => DPoint::Vertex(*v),
        None => {
            let (e, (lo, _)) = y.edges.iter().next().expect("nonempty");
            d.edge_point(*e, lo.clone())?
        }
    };
    let arc = ArcPath::new(d, x, &target)?;
    for piece in &arc.pieces {
        let start = d.edge_point(piece.edge, piece.from.clone())?;
        if y.contains(&start) {
            return Ok(start);
        }
        if let Some((lo, hi)) = y.edges.get(&piece.edge) {
            let entry = if piece.from < piece.to {
                let l = if lo > &piece.from { lo } else { &piece.from };
                let h = if hi < &piece.to { hi } else { &piece.to };
                (l <= h).then(|| l.clone())
            } else {
                let l = if lo > &piece.to { lo } else { &piece.to };
                let h = if hi < &piece.from { hi } else { &piece.from };
                (l <= h).then(|| h.clone())
            };
            if let Some(t) = entry {
                return d.edge_point(piece.edge, t);
            }
        }
    }
    Ok(target)
}
