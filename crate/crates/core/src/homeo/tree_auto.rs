use std::collections::BTreeMap;

use super::IntervalPL;
use crate::dendrite::{DPoint, Dendrite, EdgeId, VertexId};
use crate::error::{Error, Result};
use crate::rational::qi;

/// A vertex-to-vertex homeomorphism of a finite tree.
///
/// Edge `e = (u, v)` is carried onto the edge joining `π(u)` and `π(v)`; the
/// position `t` along `e` (measured from `u`) lands at `φ_e(t)` measured from
/// `π(u)`. Only non-identity reparametrizations `φ_e` are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAuto {
    vertex_map: BTreeMap<VertexId, VertexId>,
    reparams: BTreeMap<EdgeId, IntervalPL>,
}

impl TreeAuto {
    pub fn new(
        vertex_map: BTreeMap<VertexId, VertexId>,
        reparams: BTreeMap<EdgeId, IntervalPL>,
    ) -> Self {
        let reparams = reparams.into_iter().filter(|(_, p)| !p.is_identity()).collect();
        TreeAuto {
            vertex_map,
            reparams,
        }
    }

    pub fn from_permutation(vertex_map: BTreeMap<VertexId, VertexId>) -> Self {
        TreeAuto {
            vertex_map,
            reparams: BTreeMap::new(),
        }
    }

    pub fn identity(d: &Dendrite) -> Self {
        Self::from_permutation(d.vertices().iter().map(|v| (*v, *v)).collect())
    }

    pub fn vertex_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.vertex_map
    }

    pub fn reparams(&self) -> &BTreeMap<EdgeId, IntervalPL> {
        &self.reparams
    }

    pub fn reparam(&self, e: EdgeId) -> IntervalPL {
        self.reparams.get(&e).cloned().unwrap_or_else(IntervalPL::identity)
    }

    pub fn image_vertex(&self, v: VertexId) -> Result<VertexId> {
        self.vertex_map
            .get(&v)
            .copied()
            .ok_or_else(|| Error::InvalidMap(format!("vertex {v} has no image")))
    }

    /// Target edge of `e` and whether its orientation is reversed.
    pub fn target_edge(&self, d: &Dendrite, e: EdgeId) -> Result<(EdgeId, bool)> {
        let edge = d.edge(e)?;
        let (pu, pv) = (self.image_vertex(edge.u)?, self.image_vertex(edge.v)?);
        let target = d
            .edge_between(pu, pv)
            .ok_or_else(|| Error::InvalidMap(format!("edge {e} is not carried onto an edge")))?;
        Ok((target, d.edge(target)?.u != pu))
    }

    pub(crate) fn apply(&self, d: &Dendrite, p: &DPoint) -> Result<DPoint> {
        d.check_point(p)?;
        match p {
            DPoint::Vertex(v) => Ok(DPoint::Vertex(self.image_vertex(*v)?)),
            DPoint::Edge { edge, t } => {
                let (target, flip) = self.target_edge(d, *edge)?;
                let c = self.reparam(*edge).eval(t);
                let s = if flip { qi(1) - c } else { c };
                d.edge_point(target, s)
            }
        }
    }

    /// `self ∘ inner`.
    pub(crate) fn compose(&self, inner: &TreeAuto, d: &Dendrite) -> Result<TreeAuto> {
        let vertex_map = inner
            .vertex_map
            .iter()
            .map(|(v, w)| Ok((*v, self.image_vertex(*w)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mut reparams = BTreeMap::new();
        if self.reparams.is_empty() {
            reparams = inner.reparams.clone();
        } else {
            for edge in d.edges() {
                let (mid, flip) = inner.target_edge(d, edge.id)?;
                let Some(outer) = self.reparams.get(&mid) else {
                    if let Some(p) = inner.reparams.get(&edge.id) {
                        reparams.insert(edge.id, p.clone());
                    }
                    continue;
                };
                let outer = if flip { outer.flip_conjugate() } else { outer.clone() };
                let phi = outer.compose(&inner.reparam(edge.id));
                if !phi.is_identity() {
                    reparams.insert(edge.id, phi);
                }
            }
        }
        Ok(TreeAuto {
            vertex_map,
            reparams,
        })
    }

    pub(crate) fn inverse(&self, d: &Dendrite) -> Result<TreeAuto> {
        let mut vertex_map = BTreeMap::new();
        for (v, w) in &self.vertex_map {
            if vertex_map.insert(*w, *v).is_some() {
                return Err(Error::InvalidMap(format!("vertex map is not injective at {w}")));
            }
        }
        let mut reparams = BTreeMap::new();
        for (e, phi) in &self.reparams {
            let (target, flip) = self.target_edge(d, *e)?;
            let inv = phi.inverse()?;
            reparams.insert(target, if flip { inv.flip_conjugate() } else { inv });
        }
        Ok(TreeAuto {
            vertex_map,
            reparams,
        })
    }
}
