use std::collections::BTreeSet;

use num::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::generators::GeneratorSet;
use super::word::Word;
use crate::dendrite::{convex_hull, covering_radius, DPoint, Dendrite, FiniteClosedSet, Subdendrite};
use crate::error::{Error, Result};
use crate::rational::{serde_q, serde_q_vec, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub base: DPoint,
    pub radius: usize,
    pub points: FiniteClosedSet,
    /// Every generator maps `points` into (hence onto) itself.
    pub closed: bool,
    /// `|orbit(r)|` for `r = 0..=radius`.
    pub growth: Vec<usize>,
}

/// Breadth-first exploration of the Schreier graph of `x`.
///
/// Layer `r` holds the points first reached by a word of length `r`, so the
/// union of layers `0..=r` is exactly the image of the radius-`r` word ball.
pub(crate) struct OrbitBfs<'a> {
    gens: &'a GeneratorSet,
    seen: BTreeSet<DPoint>,
    pub(crate) layers: Vec<Vec<DPoint>>,
}

impl<'a> OrbitBfs<'a> {
    pub(crate) fn new(gens: &'a GeneratorSet, x: &DPoint) -> Result<Self> {
        gens.dendrite().check_point(x)?;
        Ok(OrbitBfs {
            gens,
            seen: BTreeSet::from([x.clone()]),
            layers: vec![vec![x.clone()]],
        })
    }

    fn radius(&self) -> usize {
        self.layers.len() - 1
    }

    /// Computes the next layer without committing it.
    fn peek(&self) -> Result<Vec<DPoint>> {
        let last = self.layers.last().expect("at least the base layer");
        let images: Vec<Vec<DPoint>> = last
            .par_iter()
            .map(|p| self.gens.neighbours(p))
            .collect::<Result<_>>()?;
        let fresh: BTreeSet<DPoint> = images
            .into_iter()
            .flatten()
            .filter(|p| !self.seen.contains(p))
            .collect();
        Ok(fresh.into_iter().collect())
    }

    fn advance(&mut self) -> Result<()> {
        let next = self.peek()?;
        self.seen.extend(next.iter().cloned());
        self.layers.push(next);
        Ok(())
    }

    pub(crate) fn grow_to(&mut self, r: usize) -> Result<()> {
        while self.radius() < r {
            if self.layers.last().is_some_and(Vec::is_empty) {
                self.layers.push(Vec::new());
            } else {
                self.advance()?;
            }
        }
        Ok(())
    }

    /// True when one more step would find nothing new.
    pub(crate) fn is_closed(&self) -> Result<bool> {
        Ok(self.layers.last().is_some_and(Vec::is_empty) || self.peek()?.is_empty())
    }

    pub(crate) fn points(&self) -> FiniteClosedSet {
        self.seen.iter().cloned().collect()
    }

    pub(crate) fn growth(&self) -> Vec<usize> {
        self.layers
            .iter()
            .scan(0, |acc, l| {
                *acc += l.len();
                Some(*acc)
            })
            .collect()
    }
}

/// `{ apply(w, x) : w ∈ word_ball(r) }`.
pub fn orbit(gens: &GeneratorSet, x: &DPoint, r: usize) -> Result<OrbitReport> {
    let mut bfs = OrbitBfs::new(gens, x)?;
    bfs.grow_to(r)?;
    Ok(OrbitReport {
        base: x.clone(),
        radius: r,
        points: bfs.points(),
        closed: bfs.is_closed()?,
        growth: bfs.growth(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FiniteOrbitOutcome {
    Found { orbit: FiniteClosedSet, radius: usize },
    NotDetected { growth: Vec<usize> },
}

impl FiniteOrbitOutcome {
    pub fn orbit(&self) -> Option<&FiniteClosedSet> {
        match self {
            FiniteOrbitOutcome::Found { orbit, .. } => Some(orbit),
            FiniteOrbitOutcome::NotDetected { .. } => None,
        }
    }
}

/// The orbit ball at the first radius `1 ≤ r ≤ r_max` at which it is closed.
pub fn detect_finite_orbit(gens: &GeneratorSet, x: &DPoint, r_max: usize) -> Result<FiniteOrbitOutcome> {
    let mut bfs = OrbitBfs::new(gens, x)?;
    for r in 1..=r_max.max(1) {
        bfs.grow_to(r)?;
        if bfs.is_closed()? {
            return Ok(FiniteOrbitOutcome::Found {
                orbit: bfs.points(),
                radius: r,
            });
        }
    }
    Ok(FiniteOrbitOutcome::NotDetected { growth: bfs.growth() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalSetReport {
    pub base: DPoint,
    pub radius: usize,
    pub points: FiniteClosedSet,
    pub closed: bool,
    pub growth: Vec<usize>,
    /// `D(orbit(r-1), orbit(r))` for `r = 1..=radius`.
    #[serde(with = "serde_q_vec")]
    pub increments: Vec<Q>,
    #[serde(with = "serde_q")]
    pub eps: Q,
    /// The last increment is below `eps`.
    pub converged: bool,
}

/// Orbit ball at radius `r` with the Hausdorff increments between
/// consecutive radii.
pub fn minimal_set_approx(gens: &GeneratorSet, x: &DPoint, r: usize, eps: &Q) -> Result<MinimalSetReport> {
    let d = gens.dendrite();
    let mut bfs = OrbitBfs::new(gens, x)?;
    bfs.grow_to(r)?;
    let mut increments = Vec::with_capacity(r);
    let mut before: Vec<DPoint> = bfs.layers[0].clone();
    for layer in &bfs.layers[1..] {
        // orbit(r-1) ⊆ orbit(r), so only the new points contribute
        let locs = before.iter().map(|p| d.locate(p)).collect::<Result<Vec<_>>>()?;
        let inc = layer
            .par_iter()
            .map(|p| {
                let lp = d.locate(p)?;
                Ok(locs.iter().map(|l| d.distance_loc(&lp, l)).min().expect("nonempty"))
            })
            .collect::<Result<Vec<Q>>>()?
            .into_iter()
            .max()
            .unwrap_or_else(Q::zero);
        increments.push(inc);
        before.extend(layer.iter().cloned());
    }
    let converged = increments.last().is_some_and(|inc| inc < eps);
    Ok(MinimalSetReport {
        base: x.clone(),
        radius: r,
        points: bfs.points(),
        closed: bfs.is_closed()?,
        growth: bfs.growth(),
        increments,
        eps: eps.clone(),
        converged,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimalSetKind {
    FiniteOrbit,
    WholeSpace,
    CantorLike,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: MinimalSetKind,
    #[serde(with = "serde_q")]
    pub eps: Q,
    #[serde(with = "serde_q")]
    pub covering_radius: Q,
    /// Every point has another point of the set within `eps`.
    pub perfect_at_eps: bool,
}

/// Resolution-bounded classification of a finite approximation `m` of a
/// minimal set. Clauses are tried in order: a certified closed orbit, then
/// `eps`-density, then perfectness at `eps` without density.
pub fn classify_minimal_set(d: &Dendrite, m: &FiniteClosedSet, eps: &Q, certified: bool) -> Result<Classification> {
    if m.is_empty() {
        return Err(Error::EmptySet);
    }
    let radius = covering_radius(d, m)?;
    let locs = m.iter().map(|p| d.locate(p)).collect::<Result<Vec<_>>>()?;
    let perfect = locs.len() > 1
        && (0..locs.len()).into_par_iter().all(|i| {
            locs.iter()
                .enumerate()
                .any(|(j, l)| j != i && d.distance_loc(&locs[i], l) <= *eps)
        });
    let verdict = if certified {
        MinimalSetKind::FiniteOrbit
    } else if radius <= *eps {
        MinimalSetKind::WholeSpace
    } else if perfect {
        MinimalSetKind::CantorLike
    } else {
        return Err(Error::Inconclusive {
            eps: eps.to_string(),
        });
    };
    Ok(Classification {
        verdict,
        eps: eps.clone(),
        covering_radius: radius,
        perfect_at_eps: perfect,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceWitness {
    pub word: Word,
    pub image: DPoint,
    #[serde(with = "serde_q")]
    pub distance: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceReport {
    pub base: DPoint,
    #[serde(with = "serde_q")]
    pub eps: Q,
    pub max_len: usize,
    pub witnesses: Vec<RecurrenceWitness>,
    pub recurrent: bool,
    /// Recurrence is tested at a finite resolution and word length only.
    pub diagnostic: &'static str,
}

/// All reduced words `w` with `1 ≤ |w| ≤ max_len`, `w(x) ≠ x` and
/// `d(w(x), x) < eps`.
pub fn detect_recurrence(gens: &GeneratorSet, x: &DPoint, eps: &Q, max_len: usize) -> Result<RecurrenceReport> {
    let d = gens.dendrite();
    let lx = d.locate(x)?;
    let mut witnesses = Vec::new();
    // (letters, image) with letters[0] the leftmost letter
    let mut layer: Vec<(Vec<usize>, DPoint)> = vec![(Vec::new(), x.clone())];
    for _ in 0..max_len {
        let next: Vec<(Vec<usize>, DPoint)> = layer
            .par_iter()
            .map(|(w, p)| {
                let mut out = Vec::new();
                for i in 0..gens.letter_count() {
                    if w.first().is_some_and(|&j| j ^ 1 == i) {
                        continue;
                    }
                    let mut nw = Vec::with_capacity(w.len() + 1);
                    nw.push(i);
                    nw.extend_from_slice(w);
                    out.push((nw, gens.letter_homeo(i).apply(p)?));
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for (w, p) in &next {
            if p == x {
                continue;
            }
            let dist = d.distance_loc(&lx, &d.locate(p)?);
            if dist < *eps {
                witnesses.push(RecurrenceWitness {
                    word: Word(w.iter().map(|&i| gens.letter(i)).collect()),
                    image: p.clone(),
                    distance: dist,
                });
            }
        }
        layer = next;
    }
    witnesses.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
    Ok(RecurrenceReport {
        base: x.clone(),
        eps: eps.clone(),
        max_len,
        recurrent: !witnesses.is_empty(),
        witnesses,
        diagnostic: "finite (eps, word length) surrogate",
    })
}

/// Convex hull of the orbit ball of radius `r`.
pub fn invariant_subdendrite(gens: &GeneratorSet, x: &DPoint, r: usize) -> Result<Subdendrite> {
    let o = orbit(gens, x, r)?;
    convex_hull(gens.dendrite(), o.points.iter())
}
