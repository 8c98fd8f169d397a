//! Canonical example systems: Thompson's group F on the interval, the binary
//! odometer on Gehman-style trees, a nested-orbit star, and free-group word
//! machinery.

mod paradox;
mod systems;

use std::sync::Arc;

use serde::Serialize;

pub use paradox::{free_group_cylinder, verify_paradox_partition, Bt1Report, LiteralBt2Report, ParadoxReport, TwoPieceReport};
pub use systems::{
    gehman_dendrite, gehman_tail_closed, leaves, level_vertices, odometer, odometer_on, star4, thompson_generators,
};

use crate::action::GeneratorSet;
use crate::dendrite::{DPoint, FiniteClosedSet};
use crate::error::{Error, Result};
use crate::measure::FolnerScheme;

pub const DEFAULT_ODOMETER_DEPTH: u32 = 8;
pub const MAX_DEPTH: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedMinimalSet {
    FiniteOrbit,
    CantorLike,
}

#[derive(Clone, Debug)]
pub struct ZooSystem {
    pub name: String,
    pub description: &'static str,
    pub gens: GeneratorSet,
    /// Default seed point for orbit experiments.
    pub base_point: DPoint,
    pub known_finite_orbits: Vec<FiniteClosedSet>,
    /// The minimal set studied for this system, when it is known exactly.
    pub minimal_set: Option<FiniteClosedSet>,
    pub expected: ExpectedMinimalSet,
    pub folner: Option<FolnerScheme>,
}

/// `F_n = { g^k : |k| ≤ n }` in one designated generator.
pub fn folner_scheme_z(generator: &str, n_max: usize) -> FolnerScheme {
    FolnerScheme::cyclic(generator, n_max)
}

pub const SYSTEMS: &[(&str, &str)] = &[
    ("thompson", "Thompson's group F acting on [0, 1] by f and g"),
    (
        "odometer:D=<depth>",
        "binary odometer on the depth-D Gehman tree with tail-closed weights (default D=8)",
    ),
    (
        "gehman:D=<depth>",
        "binary odometer on the depth-D Gehman tree with pure dyadic weights",
    ),
    ("star4", "rotation of a 4-star with two leaves per arm; orbits of size 1, 4 and 8"),
];

fn parse_depth(name: &str, spec: Option<&str>) -> Result<u32> {
    let Some(spec) = spec else {
        return Ok(DEFAULT_ODOMETER_DEPTH);
    };
    let depth: u32 = spec
        .strip_prefix("D=")
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad parameter {spec:?} for {name}")))?;
    if !(1..=MAX_DEPTH).contains(&depth) {
        return Err(Error::Parse(format!("depth must be in 1..={MAX_DEPTH}, got {depth}")));
    }
    Ok(depth)
}

fn odometer_system(name: String, description: &'static str, d: crate::dendrite::Dendrite, depth: u32) -> ZooSystem {
    let h = odometer_on(Arc::new(d));
    let gens = GeneratorSet::new(vec![("g".into(), h)]).expect("odometer is an automorphism");
    let known = (0..=depth)
        .map(|k| level_vertices(k).map(DPoint::Vertex).collect())
        .collect();
    ZooSystem {
        name,
        description,
        gens,
        base_point: DPoint::Vertex(level_vertices(depth).next().expect("nonempty level")),
        known_finite_orbits: known,
        minimal_set: Some(leaves(depth)),
        expected: ExpectedMinimalSet::CantorLike,
        folner: Some(folner_scheme_z("g", 64)),
    }
}

/// Looks a system up by name, e.g. `thompson`, `odometer:D=8`, `gehman:D=4`,
/// `star4`.
pub fn lookup(name: &str) -> Result<ZooSystem> {
    let (base, param) = match name.split_once(':') {
        Some((b, p)) => (b, Some(p)),
        None => (name, None),
    };
    match (base, param) {
        ("thompson", None) => {
            let (f, g) = thompson_generators();
            let gens = GeneratorSet::new(vec![("f".into(), f), ("g".into(), g)]).expect("valid generators");
            let fixed = [DPoint::vertex(0), DPoint::vertex(1)];
            Ok(ZooSystem {
                name: name.into(),
                description: SYSTEMS[0].1,
                base_point: DPoint::vertex(0),
                known_finite_orbits: fixed.iter().cloned().map(FiniteClosedSet::singleton).collect(),
                minimal_set: Some(FiniteClosedSet::singleton(DPoint::vertex(0))),
                expected: ExpectedMinimalSet::FiniteOrbit,
                folner: None,
                gens,
            })
        }
        ("odometer", p) => {
            let depth = parse_depth(base, p)?;
            Ok(odometer_system(
                format!("odometer:D={depth}"),
                SYSTEMS[1].1,
                gehman_tail_closed(depth),
                depth,
            ))
        }
        ("gehman", p) => {
            let depth = parse_depth(base, p)?;
            Ok(odometer_system(
                format!("gehman:D={depth}"),
                SYSTEMS[2].1,
                gehman_dendrite(depth),
                depth,
            ))
        }
        ("star4", None) => {
            let gens = star4();
            let leaves: FiniteClosedSet = (5..13).map(DPoint::vertex).collect();
            Ok(ZooSystem {
                name: name.into(),
                description: SYSTEMS[3].1,
                base_point: DPoint::vertex(5),
                known_finite_orbits: vec![
                    FiniteClosedSet::singleton(DPoint::vertex(0)),
                    (1..5).map(DPoint::vertex).collect(),
                    leaves.clone(),
                ],
                minimal_set: Some(leaves),
                expected: ExpectedMinimalSet::FiniteOrbit,
                folner: Some(folner_scheme_z("r", 64)),
                gens,
            })
        }
        _ => Err(Error::Parse(format!("unknown zoo system {name:?}"))),
    }
}

pub fn list() -> &'static [(&'static str, &'static str)] {
    SYSTEMS
}
