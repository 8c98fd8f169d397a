//! `{"interval_pl":{"x":[..],"y":[..]}}` or
//! `{"tree_auto":{"vertex_map":{"0":0,..},"edge_maps":[{"edge":0,"x":[..],"y":[..]}]}}`

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{HomeoMap, IntervalPL, TreeAuto};
use crate::dendrite::{EdgeId, VertexId};
use crate::rational::RatStr;

#[derive(Serialize, Deserialize)]
struct PlJson {
    x: Vec<RatStr>,
    y: Vec<RatStr>,
}

#[derive(Serialize, Deserialize)]
struct EdgeMapJson {
    edge: EdgeId,
    x: Vec<RatStr>,
    y: Vec<RatStr>,
}

#[derive(Serialize, Deserialize)]
struct TreeAutoJson {
    vertex_map: BTreeMap<VertexId, VertexId>,
    #[serde(default)]
    edge_maps: Vec<EdgeMapJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum MapJson {
    IntervalPl(PlJson),
    TreeAuto(TreeAutoJson),
}

fn rats(xs: &[crate::Q]) -> Vec<RatStr> {
    xs.iter().map(RatStr::from).collect()
}

fn table(x: Vec<RatStr>, y: Vec<RatStr>) -> crate::Result<IntervalPL> {
    IntervalPL::new(x.into_iter().map(|r| r.0).collect(), y.into_iter().map(|r| r.0).collect())
}

impl Serialize for IntervalPL {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PlJson {
            x: rats(self.xs()),
            y: rats(self.ys()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalPL {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PlJson::deserialize(d)?;
        table(raw.x, raw.y).map_err(D::Error::custom)
    }
}

impl Serialize for HomeoMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            HomeoMap::IntervalPl(pl) => MapJson::IntervalPl(PlJson {
                x: rats(pl.xs()),
                y: rats(pl.ys()),
            }),
            HomeoMap::TreeAuto(a) => MapJson::TreeAuto(TreeAutoJson {
                vertex_map: a.vertex_map().clone(),
                edge_maps: a
                    .reparams()
                    .iter()
                    .map(|(e, pl)| EdgeMapJson {
                        edge: *e,
                        x: rats(pl.xs()),
                        y: rats(pl.ys()),
                    })
                    .collect(),
            }),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomeoMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match MapJson::deserialize(d)? {
            MapJson::IntervalPl(pl) => HomeoMap::IntervalPl(table(pl.x, pl.y).map_err(D::Error::custom)?),
            MapJson::TreeAuto(raw) => {
                let reparams = raw
                    .edge_maps
                    .into_iter()
                    .map(|m| Ok((m.edge, table(m.x, m.y)?)))
                    .collect::<crate::Result<BTreeMap<_, _>>>()
                    .map_err(D::Error::custom)?;
                HomeoMap::TreeAuto(TreeAuto::new(raw.vertex_map, reparams))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::Homeo;
    use crate::dendrite::Dendrite;

    #[test]
    fn interval_round_trip() {
        let d = Arc::new(Dendrite::unit_interval());
        let s = r#"{"interval_pl":{"x":["0","1/2","3/4","1"],"y":["0","1/4","1/2","1"]}}"#;
        let h = Homeo::from_json(d.clone(), s).unwrap();
        assert_eq!(h.to_json(), s);
        assert_eq!(Homeo::from_json(d, &h.to_json()).unwrap(), h);
    }

    #[test]
    fn tree_auto_round_trip() {
        let d = Arc::new(Dendrite::unit_interval());
        let s = r#"{"tree_auto":{"vertex_map":{"0":1,"1":0},"edge_maps":[]}}"#;
        let h = Homeo::from_json(d.clone(), s).unwrap();
        // single-edge automorphisms normalize to interval maps
        assert_eq!(h.to_json(), r#"{"interval_pl":{"x":["0","1"],"y":["1","0"]}}"#);
    }

    #[test]
    fn rejects_garbage() {
        let d = Arc::new(Dendrite::unit_interval());
        assert!(Homeo::from_json(d.clone(), r#"{"interval_pl":{"x":["0"],"y":["0"]}}"#).is_err());
        assert!(Homeo::from_json(d, r#"{"rotation":{}}"#).is_err());
    }
}
