use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::action::{evaluate_word, word_ball, GeneratorSet, Word};
use crate::dendrite::{convex_hull, mesh, retract, DPoint, Dendrite, FiniteClosedSet, Subdendrite};
use crate::error::{Error, Result};
use crate::rational::{serde_q, Q};

/// The cells `F^n(a)`, `a ∈ E(T_n)`: the union of the arcs `[a, x]`, `x ∈ M`,
/// that meet `T_n` only in `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrontierCover {
    pub level: usize,
    pub subtree: Subdendrite,
    #[serde(serialize_with = "cells_as_list")]
    pub cells: BTreeMap<DPoint, Subdendrite>,
    #[serde(with = "serde_q")]
    pub mesh: Q,
    /// `T_n ⊆ [M]`.
    pub within_hull: bool,
    /// Points of `M` outside every cell.
    pub uncovered: Vec<DPoint>,
    /// Frontier points whose cell meets `T_n` in more than `{a}`.
    pub bad_intersections: Vec<DPoint>,
}

/// JSON object keys must be strings, so cells go out as `[{a, cell}, ...]`.
fn cells_as_list<S: serde::Serializer>(cells: &BTreeMap<DPoint, Subdendrite>, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Cell<'a> {
        a: &'a DPoint,
        cell: &'a Subdendrite,
    }
    s.collect_seq(cells.iter().map(|(a, cell)| Cell { a, cell }))
}

impl FrontierCover {
    pub fn covers(&self) -> bool {
        self.uncovered.is_empty()
    }

    pub fn cells_meet_once(&self) -> bool {
        self.bad_intersections.is_empty()
    }

    /// The cell containing `x`, if any (the first by frontier order).
    pub fn cell_of(&self, x: &DPoint) -> Option<&DPoint> {
        self.cells.iter().find(|(_, c)| c.contains(x)).map(|(a, _)| a)
    }
}

pub fn frontier_cover(d: &Dendrite, m: &FiniteClosedSet, t: &Subdendrite) -> Result<FrontierCover> {
    let frontier = t.endpoints(d);
    if frontier.is_empty() {
        return Err(Error::FrontierEmpty);
    }
    let hull = convex_hull(d, m)?;
    let pts: Vec<&DPoint> = m.iter().collect();
    let feet: Vec<DPoint> = pts.par_iter().map(|x| retract(d, t, x)).collect::<Result<_>>()?;

    let frontier_pts: Vec<&DPoint> = frontier.iter().collect();
    let cells: Vec<(DPoint, Subdendrite)> = frontier_pts
        .par_iter()
        .map(|a| {
            let hanging = pts.iter().zip(&feet).filter(|(_, f)| f == a).map(|(x, _)| *x);
            let cell = convex_hull(d, std::iter::once(*a).chain(hanging))?;
            Ok(((*a).clone(), cell))
        })
        .collect::<Result<_>>()?;

    let bad_intersections = cells
        .iter()
        .filter(|(a, c)| c.intersection(t).as_point().as_ref() != Some(a))
        .map(|(a, _)| a.clone())
        .collect();
    let uncovered = pts
        .iter()
        .filter(|x| !cells.iter().any(|(_, c)| c.contains(x)))
        .map(|x| (*x).clone())
        .collect();
    let members: Vec<Subdendrite> = cells.iter().map(|(_, c)| c.clone()).collect();
    Ok(FrontierCover {
        level: 0,
        subtree: t.clone(),
        mesh: mesh(d, &members)?,
        within_hull: t.is_subset(&hull),
        cells: cells.into_iter().collect(),
        uncovered,
        bad_intersections,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquivarianceFailure {
    /// `g(a)` is not a frontier point.
    FrontierNotClosed { image: DPoint },
    /// `g(F^n(a)) ≠ F^n(g(a))`.
    CellMismatch {
        image_of_cell: Subdendrite,
        cell_of_image: Subdendrite,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivarianceWitness {
    pub generator: String,
    pub a: DPoint,
    pub failure: EquivarianceFailure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivarianceReport {
    pub level: usize,
    /// Per generator, whether every cell is carried onto the cell of the image.
    pub per_generator: BTreeMap<String, bool>,
    pub equivariant: bool,
    pub checks: usize,
    pub counterexample: Option<EquivarianceWitness>,
    pub note: &'static str,
}

const WORDS_NOTE: &str = "a generator permuting the cells also permutes them under its inverse, so equivariance extends to every word";

fn check_cell(gens: &GeneratorSet, name: &str, cover: &FrontierCover, a: &DPoint) -> Result<Option<EquivarianceWitness>> {
    let h = gens.homeo(&crate::action::Letter::new(name, false))?;
    let image = h.apply(a)?;
    let failure = match cover.cells.get(&image) {
        None => Some(EquivarianceFailure::FrontierNotClosed { image }),
        Some(target) => {
            let mapped = h.image(&cover.cells[a])?;
            (mapped != *target).then(|| EquivarianceFailure::CellMismatch {
                image_of_cell: mapped,
                cell_of_image: target.clone(),
            })
        }
    };
    Ok(failure.map(|failure| EquivarianceWitness {
        generator: name.to_string(),
        a: a.clone(),
        failure,
    }))
}

/// Checks `g(F^n(a)) = F^n(g(a))` for every generator `g` and frontier point
/// `a`, as exact subdendrite equality.
pub fn verify_cover_equivariance(gens: &GeneratorSet, cover: &FrontierCover) -> Result<EquivarianceReport> {
    let mut per_generator = BTreeMap::new();
    let mut counterexample = None;
    let mut checks = 0;
    for name in gens.names() {
        let results: Vec<Option<EquivarianceWitness>> = cover
            .cells
            .par_iter()
            .map(|(a, _)| check_cell(gens, name, cover, a))
            .collect::<Result<_>>()?;
        checks += results.len();
        let first = results.into_iter().flatten().next();
        per_generator.insert(name.clone(), first.is_none());
        if counterexample.is_none() {
            counterexample = first;
        }
    }
    Ok(EquivarianceReport {
        level: cover.level,
        per_generator,
        equivariant: counterexample.is_none(),
        checks,
        counterexample,
        note: WORDS_NOTE,
    })
}

/// Spot-checks `w(F^n(a)) = F^n(w(a))` for every reduced word of length at
/// most `max_len`; returns the first failing word and frontier point.
pub fn verify_word_equivariance(
    gens: &GeneratorSet,
    cover: &FrontierCover,
    max_len: usize,
) -> Result<Option<(Word, DPoint)>> {
    for w in word_ball(gens, max_len) {
        let h = evaluate_word(&w, gens)?;
        for (a, cell) in &cover.cells {
            let ok = match cover.cells.get(&h.apply(a)?) {
                Some(target) => h.image(cell)? == *target,
                None => false,
            };
            if !ok {
                return Ok(Some((w, a.clone())));
            }
        }
    }
    Ok(None)
}
