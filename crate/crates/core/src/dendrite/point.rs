use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{Q, RatStr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// An exact location on a dendrite.
///
/// Edge positions are always strictly interior (`0 < t < 1`); the ends of an
/// edge are represented by the corresponding `Vertex`. Use
/// [`Dendrite::edge_point`](crate::dendrite::Dendrite::edge_point) to build
/// points in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DPoint {
    Vertex(VertexId),
    Edge { edge: EdgeId, t: Q },
}

impl DPoint {
    pub fn vertex(id: u32) -> Self {
        DPoint::Vertex(VertexId(id))
    }

    pub fn as_vertex(&self) -> Option<VertexId> {
        match self {
            DPoint::Vertex(v) => Some(*v),
            DPoint::Edge { .. } => None,
        }
    }
}

impl fmt::Display for DPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DPoint::Vertex(v) => write!(f, "{v}"),
            DPoint::Edge { edge, t } => write!(f, "{edge}@{t}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DPointJson {
    Vertex { vertex: VertexId },
    Edge { edge: EdgeId, t: RatStr },
}

impl Serialize for DPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DPoint::Vertex(v) => DPointJson::Vertex { vertex: *v }.serialize(s),
            DPoint::Edge { edge, t } => DPointJson::Edge {
                edge: *edge,
                t: RatStr(t.clone()),
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for DPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match DPointJson::deserialize(d)? {
            DPointJson::Vertex { vertex } => DPoint::Vertex(vertex),
            DPointJson::Edge { edge, t } => DPoint::Edge { edge, t: t.0 },
        })
    }
}

/// A finite set of points, duplicate-free under exact equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteClosedSet(BTreeSet<DPoint>);

impl FiniteClosedSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(p: DPoint) -> Self {
        Self(BTreeSet::from([p]))
    }

    pub fn insert(&mut self, p: DPoint) -> bool {
        self.0.insert(p)
    }

    pub fn contains(&self, p: &DPoint) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &DPoint> + '_ {
        self.0.iter()
    }

    pub fn first(&self) -> Option<&DPoint> {
        self.0.iter().next()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self(self.0.union(&other.0).cloned().collect())
    }

    pub fn as_set(&self) -> &BTreeSet<DPoint> {
        &self.0
    }
}

impl FromIterator<DPoint> for FiniteClosedSet {
    fn from_iter<I: IntoIterator<Item = DPoint>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl IntoIterator for FiniteClosedSet {
    type Item = DPoint;
    type IntoIter = std::collections::btree_set::IntoIter<DPoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a FiniteClosedSet {
    type Item = &'a DPoint;
    type IntoIter = std::collections::btree_set::Iter<'a, DPoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn point_json_shapes() {
        let v = DPoint::vertex(3);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"vertex":3}"#);
        let e = DPoint::Edge {
            edge: EdgeId(2),
            t: q(1, 3),
        };
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"edge":2,"t":"1/3"}"#);
        assert_eq!(serde_json::from_str::<DPoint>(&s).unwrap(), e);
    }

    #[test]
    fn set_dedups() {
        let s: FiniteClosedSet = [DPoint::vertex(1), DPoint::vertex(1), DPoint::vertex(0)]
            .into_iter()
            .collect();
        assert_eq!(s.len(), 2);
    }
}
