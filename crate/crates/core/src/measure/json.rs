//! `{"atoms":[{"point":..,"w":"p/q"}],
//!   "edges":[{"id":0,"pieces":[{"a":"p/q","b":"p/q","density":"p/q"}]}],
//!   "norm":"p/q"}`

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{PLMeasure, Piece};
use crate::dendrite::{DPoint, Dendrite, EdgeId};
use crate::error::{Error, Result};
use crate::rational::{qi, RatStr};

#[derive(Serialize, Deserialize)]
struct AtomJson {
    point: DPoint,
    w: RatStr,
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    a: RatStr,
    b: RatStr,
    density: RatStr,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: EdgeId,
    pieces: Vec<PieceJson>,
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    #[serde(default)]
    atoms: Vec<AtomJson>,
    #[serde(default)]
    edges: Vec<EdgeJson>,
    #[serde(default)]
    norm: Option<RatStr>,
}

impl Serialize for PLMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureJson {
            atoms: self
                .atoms
                .iter()
                .map(|(p, w)| AtomJson {
                    point: p.clone(),
                    w: w.into(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(e, ps)| EdgeJson {
                    id: *e,
                    pieces: ps
                        .iter()
                        .map(|p| PieceJson {
                            a: (&p.a).into(),
                            b: (&p.b).into(),
                            density: (&p.density).into(),
                        })
                        .collect(),
                })
                .collect(),
            norm: Some((&self.norm).into()),
        }
        .serialize(s)
    }
}

impl PLMeasure {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measures serialize")
    }

    pub fn from_json(dendrite: Arc<Dendrite>, s: &str) -> Result<PLMeasure> {
        let raw: MeasureJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        PLMeasure::new(
            dendrite,
            raw.atoms.into_iter().map(|a| (a.point, a.w.0)).collect(),
            raw.edges
                .into_iter()
                .map(|e| {
                    let ps = e.pieces.into_iter().map(|p| Piece::new(p.a.0, p.b.0, p.density.0)).collect();
                    (e.id, ps)
                })
                .collect(),
            raw.norm.map(|n| n.0).unwrap_or_else(|| qi(1)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::canonical_measure;

    #[test]
    fn round_trip() {
        let d = Arc::new(Dendrite::unit_interval());
        let mu = canonical_measure(d.clone())
            .add(&PLMeasure::dirac(d.clone(), &DPoint::vertex(1)).unwrap())
            .unwrap();
        let json = mu.to_json();
        assert_eq!(
            json,
            r#"{"atoms":[{"point":{"vertex":1},"w":"1"}],"edges":[{"id":0,"pieces":[{"a":"0","b":"1","density":"1"}]}],"norm":"1"}"#
        );
        assert_eq!(PLMeasure::from_json(d, &json).unwrap(), mu);
    }
}
