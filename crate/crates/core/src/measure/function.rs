use std::collections::BTreeMap;
use std::sync::Arc;

use num::{Signed, Zero};

use crate::dendrite::{DPoint, Dendrite, EdgeId, VertexId};
use crate::error::{Error, Result};
use crate::homeo::IntervalPL;
use crate::rational::{qi, Q};

/// A continuous function that is piecewise linear along every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFunction {
    dendrite: Arc<Dendrite>,
    edges: BTreeMap<EdgeId, IntervalPL>,
    vertices: BTreeMap<VertexId, Q>,
}

impl TestFunction {
    /// Builds a function from one PL table per edge (in the edge's own
    /// parameter). Tables must agree at shared vertices.
    pub fn new(dendrite: Arc<Dendrite>, edges: BTreeMap<EdgeId, IntervalPL>) -> Result<Self> {
        let mut vertices: BTreeMap<VertexId, Q> = BTreeMap::new();
        for e in dendrite.edges() {
            let table = edges
                .get(&e.id)
                .ok_or_else(|| Error::InvalidMap(format!("no table for {}", e.id)))?;
            for (v, t) in [(e.u, qi(0)), (e.v, qi(1))] {
                let val = table.eval(&t);
                match vertices.get(&v) {
                    Some(prev) if *prev != val => {
                        return Err(Error::InvalidMap(format!("discontinuous at {v}")));
                    }
                    _ => {
                        vertices.insert(v, val);
                    }
                }
            }
        }
        for v in dendrite.vertices() {
            vertices.entry(*v).or_insert_with(Q::zero);
        }
        Ok(TestFunction {
            dendrite,
            edges,
            vertices,
        })
    }

    pub fn constant(dendrite: Arc<Dendrite>, c: Q) -> Self {
        let table = IntervalPL::new(vec![qi(0), qi(1)], vec![c.clone(), c.clone()]).expect("valid table");
        let edges = dendrite.edges().iter().map(|e| (e.id, table.clone())).collect();
        let vertices = dendrite.vertices().iter().map(|v| (*v, c.clone())).collect();
        TestFunction {
            dendrite,
            edges,
            vertices,
        }
    }

    /// Linear interpolation of vertex values along each edge; missing
    /// vertices get 0.
    pub fn from_vertex_values(dendrite: Arc<Dendrite>, values: &BTreeMap<VertexId, Q>) -> Result<Self> {
        let val = |v: &VertexId| values.get(v).cloned().unwrap_or_else(Q::zero);
        let edges = dendrite
            .edges()
            .iter()
            .map(|e| Ok((e.id, IntervalPL::new(vec![qi(0), qi(1)], vec![val(&e.u), val(&e.v)])?)))
            .collect::<Result<_>>()?;
        Self::new(dendrite, edges)
    }

    /// `x ↦ d(x, p)`.
    pub fn distance_from(dendrite: Arc<Dendrite>, p: &DPoint) -> Result<Self> {
        dendrite.check_point(p)?;
        let mut edges = BTreeMap::new();
        for e in dendrite.edges() {
            let mut ts = vec![qi(0)];
            if let DPoint::Edge { edge, t } = p {
                if *edge == e.id {
                    ts.push(t.clone());
                }
            }
            ts.push(qi(1));
            let ys = ts
                .iter()
                .map(|t| dendrite.distance(&dendrite.edge_point(e.id, t.clone())?, p))
                .collect::<Result<Vec<_>>>()?;
            edges.insert(e.id, IntervalPL::new(ts, ys)?);
        }
        Self::new(dendrite, edges)
    }

    pub fn dendrite(&self) -> &Arc<Dendrite> {
        &self.dendrite
    }

    pub(crate) fn on_edge(&self, e: EdgeId) -> Result<&IntervalPL> {
        self.edges
            .get(&e)
            .ok_or_else(|| Error::InvalidMap(format!("no table for {e}")))
    }

    pub fn eval(&self, p: &DPoint) -> Result<Q> {
        self.dendrite.check_point(p)?;
        match p {
            DPoint::Vertex(v) => Ok(self.vertices[v].clone()),
            DPoint::Edge { edge, t } => Ok(self.on_edge(*edge)?.eval(t)),
        }
    }

    /// `max |f|`, attained at a breakpoint.
    pub fn sup_norm(&self) -> Q {
        self.edges
            .values()
            .flat_map(|t| t.ys().iter())
            .chain(self.vertices.values())
            .map(|y| y.abs())
            .max()
            .unwrap_or_else(Q::zero)
    }
}
