use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{arc_decomposition, DPoint, Dendrite, Edge, FiniteClosedSet, VertexId, WeightRule};
use crate::error::{Error, Result};
use crate::rational::{dyadic, Q};

/// A weighted graph that need not be connected; the input to a collapse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub weights: Vec<Q>,
}

impl From<&Dendrite> for EdgeGraph {
    fn from(d: &Dendrite) -> Self {
        EdgeGraph {
            vertices: d.vertices().to_vec(),
            edges: d.edges().to_vec(),
            weights: d.weights().to_vec(),
        }
    }
}

/// Quotient projection: vertices of the collapsed set go to the new vertex,
/// everything else keeps its identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseProjection {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
}

impl CollapseProjection {
    pub fn project(&self, p: &DPoint) -> DPoint {
        match p {
            DPoint::Vertex(v) => DPoint::Vertex(*self.vertex_map.get(v).unwrap_or(v)),
            other => other.clone(),
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Identifies the vertices of `p` to a single vertex `z`.
pub fn collapse_points(
    graph: &EdgeGraph,
    p: &FiniteClosedSet,
    z: VertexId,
) -> Result<(Dendrite, CollapseProjection)> {
    let mut collapsed = Vec::new();
    for x in p {
        match x {
            DPoint::Vertex(v) if graph.vertices.contains(v) => collapsed.push(*v),
            other => {
                return Err(Error::PointOffDendrite(format!(
                    "collapse set must consist of vertices, got {other}"
                )))
            }
        }
    }
    if collapsed.is_empty() {
        return Err(Error::EmptySet);
    }
    if graph.vertices.contains(&z) && !collapsed.contains(&z) {
        return Err(Error::InvalidDendrite(format!("{z} already names another vertex")));
    }
    let vertex_map: BTreeMap<VertexId, VertexId> = graph
        .vertices
        .iter()
        .map(|v| (*v, if collapsed.contains(v) { z } else { *v }))
        .collect();

    let mut vertices: Vec<VertexId> = vertex_map.values().copied().collect();
    vertices.sort();
    vertices.dedup();
    let index: HashMap<VertexId, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut uf: Vec<usize> = (0..vertices.len()).collect();
    let mut edges = Vec::with_capacity(graph.edges.len());
    for e in &graph.edges {
        let (u, v) = (vertex_map[&e.u], vertex_map[&e.v]);
        let (a, b) = (find(&mut uf, index[&u]), find(&mut uf, index[&v]));
        if a == b {
            return Err(Error::CycleCreated);
        }
        uf[a] = b;
        edges.push(Edge { u, v, ..e.clone() });
    }

    let weights = graph.weights.clone();
    let (edges, weights) = chained_order(&vertices, edges, weights);
    let rule = if edges.iter().zip(&weights).all(|(e, w)| *w == dyadic(e.level)) {
        WeightRule::Dyadic
    } else {
        WeightRule::Custom(weights)
    };
    let d = Dendrite::new(vertices, edges, rule)?;
    Ok((d, CollapseProjection { vertex_map }))
}

/// Keeps the given order when it already chains, otherwise re-enumerates the
/// edges breadth-first from the first edge.
fn chained_order(vertices: &[VertexId], edges: Vec<Edge>, weights: Vec<Q>) -> (Vec<Edge>, Vec<Q>) {
    let candidate = Dendrite::new(
        vertices.to_vec(),
        edges.clone(),
        WeightRule::Custom(weights.clone()),
    );
    if candidate.as_ref().is_ok_and(|d| arc_decomposition(d).is_ok()) || edges.is_empty() {
        return (edges, weights);
    }
    let mut used = vec![false; edges.len()];
    let mut out_e = Vec::with_capacity(edges.len());
    let mut out_w = Vec::with_capacity(edges.len());
    let mut queue = VecDeque::from([edges[0].u]);
    let mut seen = vec![edges[0].u];
    while let Some(x) = queue.pop_front() {
        for (i, e) in edges.iter().enumerate() {
            if used[i] || (e.u != x && e.v != x) {
                continue;
            }
            used[i] = true;
            let y = if e.u == x { e.v } else { e.u };
            out_e.push(e.clone());
            out_w.push(weights[i].clone());
            if !seen.contains(&y) {
                seen.push(y);
                queue.push_back(y);
            }
        }
    }
    (out_e, out_w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn disjoint_edges(k: u32) -> EdgeGraph {
        EdgeGraph {
            vertices: (0..2 * k).map(VertexId).collect(),
            edges: (0..k).map(|i| Edge::new(i, 2 * i, 2 * i + 1, 1)).collect(),
            weights: vec![qi(1); k as usize],
        }
    }

    #[test]
    fn single_vertex_collapse_relabels() {
        let d = Dendrite::unit_interval();
        let p = FiniteClosedSet::singleton(DPoint::vertex(0));
        let (q, proj) = collapse_points(&(&d).into(), &p, VertexId(9)).unwrap();
        assert_eq!(q.vertices().len(), 2);
        assert_eq!(proj.project(&DPoint::vertex(0)), DPoint::vertex(9));
        assert_eq!(
            q.distance(&DPoint::vertex(9), &DPoint::vertex(1)).unwrap(),
            qi(1)
        );
    }

    #[test]
    fn two_edges_glue_to_a_path() {
        let g = disjoint_edges(2);
        let p: FiniteClosedSet = [DPoint::vertex(1), DPoint::vertex(3)].into_iter().collect();
        let (q, _) = collapse_points(&g, &p, VertexId(10)).unwrap();
        assert_eq!(q.degree(VertexId(10)), 2);
        assert_eq!(q.vertices().len(), 3);
    }

    #[test]
    fn collapsing_inside_a_tree_creates_a_cycle() {
        let g = disjoint_edges(2);
        let d = Dendrite::unit_interval();
        let both: FiniteClosedSet = [DPoint::vertex(0), DPoint::vertex(1)].into_iter().collect();
        assert_eq!(
            collapse_points(&(&d).into(), &both, VertexId(5)).unwrap_err(),
            Error::CycleCreated
        );
        let p: FiniteClosedSet = [DPoint::vertex(1)].into_iter().collect();
        assert!(matches!(
            collapse_points(&g, &p, VertexId(10)),
            Err(Error::InvalidDendrite(_))
        ));
    }
}
