//! `{"vertices":[..], "edges":[{"id","u","v","level"}], "weight_rule": "dyadic" | {"custom": [["p/q"], ..]}}`

use serde::{Deserialize, Serialize};

use super::{Dendrite, Edge, EdgeId, VertexId, WeightRule};
use crate::rational::RatStr;

#[derive(Serialize, Deserialize)]
struct DendriteJson {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeJson>,
    weight_rule: RuleJson,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: EdgeId,
    u: VertexId,
    v: VertexId,
    level: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RuleJson {
    Named(String),
    Custom { custom: Vec<CustomWeight> },
}

/// Custom weights are written as one-element arrays; bare strings are
/// accepted on input.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CustomWeight {
    Wrapped([RatStr; 1]),
    Bare(RatStr),
}

impl Serialize for Dendrite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DendriteJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id,
                    u: e.u,
                    v: e.v,
                    level: e.level,
                })
                .collect(),
            weight_rule: match &self.rule {
                WeightRule::Dyadic => RuleJson::Named("dyadic".into()),
                WeightRule::Custom(ws) => RuleJson::Custom {
                    custom: ws.iter().map(|w| CustomWeight::Wrapped([w.into()])).collect(),
                },
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dendrite {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = DendriteJson::deserialize(d)?;
        let rule = match raw.weight_rule {
            RuleJson::Named(name) if name == "dyadic" => WeightRule::Dyadic,
            RuleJson::Named(other) => {
                return Err(D::Error::custom(format!("unknown weight rule {other:?}")))
            }
            RuleJson::Custom { custom } => WeightRule::Custom(
                custom
                    .into_iter()
                    .map(|c| match c {
                        CustomWeight::Wrapped([w]) | CustomWeight::Bare(w) => w.0,
                    })
                    .collect(),
            ),
        };
        let edges = raw
            .edges
            .into_iter()
            .map(|e| Edge {
                id: e.id,
                u: e.u,
                v: e.v,
                level: e.level,
            })
            .collect();
        Dendrite::new(raw.vertices, edges, rule).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn round_trip_custom_weights() {
        let d = Dendrite::new(
            vec![VertexId(0), VertexId(1), VertexId(2)],
            vec![Edge::new(0, 0, 1, 1), Edge::new(1, 1, 2, 2)],
            WeightRule::Custom(vec![q(1, 3), q(2, 3)]),
        )
        .unwrap();
        let s = d.to_json();
        assert!(s.contains(r#""custom":[["1/3"],["2/3"]]"#), "{s}");
        assert_eq!(Dendrite::from_json(&s).unwrap(), d);
    }

    #[test]
    fn accepts_dyadic_and_bare_weights() {
        let s = r#"{"vertices":[0,1],"edges":[{"id":0,"u":0,"v":1,"level":3}],"weight_rule":"dyadic"}"#;
        let d = Dendrite::from_json(s).unwrap();
        assert_eq!(d.weights()[0], q(1, 8));
        let s = r#"{"vertices":[0,1],"edges":[{"id":0,"u":0,"v":1,"level":1}],"weight_rule":{"custom":["5/7"]}}"#;
        assert_eq!(Dendrite::from_json(s).unwrap().weights()[0], q(5, 7));
        let bad = r#"{"vertices":[0,1],"edges":[{"id":0,"u":0,"v":1,"level":1}],"weight_rule":"metric"}"#;
        assert!(Dendrite::from_json(bad).is_err());
    }
}
