//! Exact homeomorphisms: piecewise-linear maps of the interval and
//! vertex-preserving automorphisms of finite trees.

mod interval;
mod json;
mod tree_auto;
mod validate;

use std::sync::Arc;

pub use interval::IntervalPL;
pub use tree_auto::TreeAuto;
pub use validate::{validate, validate_with_seed, Certificate, Violation, DEFAULT_SAMPLES, DEFAULT_SEED};

use crate::dendrite::{convex_hull, DPoint, Dendrite, EdgeId, Subdendrite};
use crate::error::{Error, Result};
use crate::rational::qi;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomeoMap {
    IntervalPl(IntervalPL),
    TreeAuto(TreeAuto),
}

/// A homeomorphism together with the dendrite it acts on.
#[derive(Clone, Debug)]
pub struct Homeo {
    dendrite: Arc<Dendrite>,
    map: HomeoMap,
}

impl PartialEq for Homeo {
    fn eq(&self, other: &Self) -> bool {
        same_dendrite(&self.dendrite, &other.dendrite) && self.map == other.map
    }
}

impl Eq for Homeo {}

pub(crate) fn same_dendrite(a: &Arc<Dendrite>, b: &Arc<Dendrite>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Homeo {
    /// An interval map acting on a single-edge dendrite (parameter 0 at the
    /// edge's `u` end).
    pub fn interval(dendrite: Arc<Dendrite>, pl: IntervalPL) -> Result<Self> {
        if dendrite.edges().len() != 1 {
            return Err(Error::InvalidMap(
                "interval maps act on single-edge dendrites".into(),
            ));
        }
        Ok(Homeo {
            dendrite,
            map: HomeoMap::IntervalPl(pl),
        })
    }

    /// Wraps a tree automorphism without validating it.
    pub fn tree_auto(dendrite: Arc<Dendrite>, auto: TreeAuto) -> Self {
        let mut h = Homeo {
            dendrite,
            map: HomeoMap::TreeAuto(auto),
        };
        h.normalize();
        h
    }

    pub fn identity(dendrite: Arc<Dendrite>) -> Self {
        let map = if dendrite.edges().len() == 1 {
            HomeoMap::IntervalPl(IntervalPL::identity())
        } else {
            HomeoMap::TreeAuto(TreeAuto::identity(&dendrite))
        };
        Homeo { dendrite, map }
    }

    pub fn dendrite(&self) -> &Arc<Dendrite> {
        &self.dendrite
    }

    pub fn map(&self) -> &HomeoMap {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        *self == Homeo::identity(self.dendrite.clone())
    }

    /// Single-edge tree automorphisms are stored as interval maps so that
    /// equality stays decidable across representations.
    fn normalize(&mut self) {
        if self.dendrite.edges().len() != 1 {
            return;
        }
        if let HomeoMap::TreeAuto(auto) = &self.map {
            let e = self.dendrite.edges()[0].id;
            if let Ok((_, flip)) = auto.target_edge(&self.dendrite, e) {
                let phi = auto.reparam(e);
                let pl = if flip {
                    let ys = phi.ys().iter().map(|y| qi(1) - y).collect();
                    IntervalPL::new(phi.xs().to_vec(), ys).expect("same breakpoints")
                } else {
                    phi
                };
                self.map = HomeoMap::IntervalPl(pl);
            }
        }
    }

    fn as_tree_auto(&self) -> TreeAuto {
        match &self.map {
            HomeoMap::TreeAuto(a) => a.clone(),
            HomeoMap::IntervalPl(pl) => {
                let e = &self.dendrite.edges()[0];
                let increasing = pl.ys().first() <= pl.ys().last();
                let (pu, pv) = if increasing { (e.u, e.v) } else { (e.v, e.u) };
                let phi = if increasing {
                    pl.clone()
                } else {
                    let ys = pl.ys().iter().map(|y| qi(1) - y).collect();
                    IntervalPL::new(pl.xs().to_vec(), ys).expect("same breakpoints")
                };
                TreeAuto::new(
                    [(e.u, pu), (e.v, pv)].into_iter().collect(),
                    [(e.id, phi)].into_iter().collect(),
                )
            }
        }
    }

    pub fn apply(&self, x: &DPoint) -> Result<DPoint> {
        match &self.map {
            HomeoMap::IntervalPl(pl) => {
                let d = &self.dendrite;
                let e = &d.edges()[0];
                let t = d
                    .param_on_edge(x, e.id)
                    .ok_or_else(|| Error::PointOffDendrite(x.to_string()))?;
                d.check_point(x)?;
                d.edge_point(e.id, pl.eval(&t))
            }
            HomeoMap::TreeAuto(a) => a.apply(&self.dendrite, x),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Homeo) -> Result<Homeo> {
        if !same_dendrite(&self.dendrite, &inner.dendrite) {
            return Err(Error::DendriteMismatch);
        }
        let map = match (&self.map, &inner.map) {
            (HomeoMap::IntervalPl(a), HomeoMap::IntervalPl(b)) => HomeoMap::IntervalPl(a.compose(b)),
            _ => HomeoMap::TreeAuto(
                self.as_tree_auto()
                    .compose(&inner.as_tree_auto(), &self.dendrite)?,
            ),
        };
        let mut h = Homeo {
            dendrite: self.dendrite.clone(),
            map,
        };
        h.normalize();
        Ok(h)
    }

    /// Exact inverse; fails only for maps that are not bijective on vertices.
    pub fn invert(&self) -> Result<Homeo> {
        let map = match &self.map {
            HomeoMap::IntervalPl(pl) => HomeoMap::IntervalPl(pl.inverse()?),
            HomeoMap::TreeAuto(a) => HomeoMap::TreeAuto(a.inverse(&self.dendrite)?),
        };
        Ok(Homeo {
            dendrite: self.dendrite.clone(),
            map,
        })
    }

    /// Where edge `e` goes: the target edge and the map from `e`'s parameter
    /// to the target's parameter (decreasing when orientation flips).
    pub fn edge_map(&self, e: EdgeId) -> Result<(EdgeId, IntervalPL)> {
        match &self.map {
            HomeoMap::IntervalPl(pl) => {
                self.dendrite.edge(e)?;
                Ok((e, pl.clone()))
            }
            HomeoMap::TreeAuto(a) => {
                let (target, flip) = a.target_edge(&self.dendrite, e)?;
                let phi = a.reparam(e);
                if !flip {
                    return Ok((target, phi));
                }
                let ys = phi.ys().iter().map(|y| qi(1) - y).collect();
                Ok((target, IntervalPL::new(phi.xs().to_vec(), ys)?))
            }
        }
    }

    /// Image of a subdendrite: the hull of the images of its extreme points.
    pub fn image(&self, s: &Subdendrite) -> Result<Subdendrite> {
        if s.is_empty() {
            return Ok(Subdendrite::default());
        }
        let images = s
            .endpoints(&self.dendrite)
            .iter()
            .map(|p| self.apply(p))
            .collect::<Result<Vec<_>>>()?;
        convex_hull(&self.dendrite, &images)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.map).expect("homeomorphisms serialize")
    }

    pub fn from_json(dendrite: Arc<Dendrite>, s: &str) -> Result<Homeo> {
        let map: HomeoMap = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        match map {
            HomeoMap::IntervalPl(pl) => Homeo::interval(dendrite, pl),
            HomeoMap::TreeAuto(a) => Ok(Homeo::tree_auto(dendrite, a)),
        }
    }
}

pub fn apply(h: &Homeo, x: &DPoint) -> Result<DPoint> {
    h.apply(x)
}

pub fn compose(h1: &Homeo, h2: &Homeo) -> Result<Homeo> {
    h1.compose(h2)
}

pub fn invert(h: &Homeo) -> Result<Homeo> {
    h.invert()
}
