use num::{One, Zero};
use serde::Serialize;

use crate::action::{GeneratorSet, Word};
use crate::dendrite::{DPoint, Dendrite};
use crate::error::{Error, Result};
use crate::measure::{push_forward, PLMeasure};
use crate::rational::{fmt_q, q, serde_q, serde_q_vec, Q};

/// Fraction of the mass a spread ball must carry.
pub fn spread_mass() -> Q {
    Q::one() - q(1, 16)
}

/// Mass `m` spread uniformly over distances `[lo, hi]` from a center, or an
/// atom when `lo == hi`.
struct Ramp {
    lo: Q,
    hi: Q,
    mass: Q,
}

fn ramps_from(d: &Dendrite, mu: &PLMeasure, c: &DPoint) -> Result<Vec<Ramp>> {
    let mut out = Vec::new();
    for (p, w) in mu.atoms() {
        let r = d.distance(c, p)?;
        out.push(Ramp {
            lo: r.clone(),
            hi: r,
            mass: w.clone(),
        });
    }
    for (e, pieces) in mu.edge_pieces() {
        let edge = d.edge(*e)?;
        let w = d.weight(*e)?;
        let inside = match c {
            DPoint::Edge { edge: ce, t } if ce == e => Some(t.clone()),
            _ => None,
        };
        let dist: Box<dyn Fn(&Q) -> Q> = match &inside {
            Some(tc) => {
                let tc = tc.clone();
                Box::new(move |t: &Q| num::Signed::abs(&(t - &tc)) * w)
            }
            None => {
                let du = d.distance(c, &DPoint::Vertex(edge.u))?;
                let dv = d.distance(c, &DPoint::Vertex(edge.v))?;
                if du <= dv {
                    Box::new(move |t: &Q| &du + t * w)
                } else {
                    Box::new(move |t: &Q| &dv + (Q::one() - t) * w)
                }
            }
        };
        for piece in pieces {
            let mut cuts = vec![piece.a.clone()];
            if let Some(tc) = &inside {
                if piece.a < *tc && *tc < piece.b {
                    cuts.push(tc.clone());
                }
            }
            cuts.push(piece.b.clone());
            for win in cuts.windows(2) {
                let (r0, r1) = (dist(&win[0]), dist(&win[1]));
                let (lo, hi) = if r0 <= r1 { (r0, r1) } else { (r1, r0) };
                out.push(Ramp {
                    lo,
                    hi,
                    mass: &piece.density * (&win[1] - &win[0]) * w,
                });
            }
        }
    }
    Ok(out)
}

/// Mass of the closed ball of radius `r`, and the part of it sitting exactly
/// on the sphere as atoms.
fn ball_mass(ramps: &[Ramp], r: &Q) -> (Q, Q) {
    let mut total = Q::zero();
    let mut on_sphere = Q::zero();
    for ramp in ramps {
        if ramp.lo == ramp.hi {
            if ramp.lo <= *r {
                total += &ramp.mass;
                if ramp.lo == *r {
                    on_sphere += &ramp.mass;
                }
            }
        } else if ramp.hi <= *r {
            total += &ramp.mass;
        } else if ramp.lo < *r {
            total += &ramp.mass * (r - &ramp.lo) / (&ramp.hi - &ramp.lo);
        }
    }
    (total, on_sphere)
}

/// Smallest `r` with `μ(B(c, r)) ≥ target`; the ball mass is piecewise linear
/// in `r` with upward jumps at atoms.
fn smallest_radius(ramps: &[Ramp], target: &Q) -> Option<Q> {
    let mut cuts: Vec<Q> = ramps.iter().flat_map(|r| [r.lo.clone(), r.hi.clone()]).collect();
    cuts.sort();
    cuts.dedup();
    let mut prev: Option<(Q, Q)> = None;
    for r in cuts {
        let (mass, jump) = ball_mass(ramps, &r);
        if mass >= *target {
            let left = &mass - &jump;
            return Some(match prev {
                Some((r0, m0)) if left >= *target && left > m0 => &r0 + (target - &m0) / (&left - &m0) * (&r - &r0),
                _ => r,
            });
        }
        prev = Some((r, mass));
    }
    None
}

/// The smallest radius of a ball carrying at least 15/16 of the mass, over
/// centres at vertices, edge midpoints, atoms and density breakpoints.
pub fn spread(mu: &PLMeasure) -> Result<Q> {
    if !mu.is_probability() {
        return Err(Error::NotProbability(fmt_q(&mu.total_mass())));
    }
    let d = mu.dendrite();
    let mut centers: Vec<DPoint> = d.vertices().iter().map(|v| DPoint::Vertex(*v)).collect();
    for e in d.edges() {
        centers.push(d.midpoint(e.id)?);
    }
    centers.extend(mu.atoms().keys().cloned());
    for (e, pieces) in mu.edge_pieces() {
        for p in pieces {
            centers.push(d.edge_point(*e, p.a.clone())?);
            centers.push(d.edge_point(*e, p.b.clone())?);
        }
    }
    centers.sort();
    centers.dedup();
    let target = spread_mass();
    let mut best: Option<Q> = None;
    for c in &centers {
        let ramps = ramps_from(d, mu, c)?;
        if let Some(r) = smallest_radius(&ramps, &target) {
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.ok_or(Error::EmptySet)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProximalStep {
    pub radius: usize,
    pub word: Word,
    #[serde(with = "serde_q")]
    pub spread: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProximalityTrace {
    pub steps: Vec<ProximalStep>,
    /// Running minimum of the spread, starting with `μ0` itself.
    #[serde(with = "serde_q_vec")]
    pub trace: Vec<Q>,
    /// The best spread found is strictly below the initial one.
    pub contracting: bool,
}

/// Greedy search for contraction: at each radius, prepend the letter whose
/// push-forward has the smallest spread.
pub fn strong_proximality_scan(gens: &GeneratorSet, mu0: &PLMeasure, radius: usize) -> Result<ProximalityTrace> {
    let initial = spread(mu0)?;
    let mut steps = Vec::with_capacity(radius);
    let mut trace = vec![initial.clone()];
    let mut word: Vec<usize> = Vec::new();
    let mut mu = mu0.clone();
    for r in 1..=radius {
        let mut best: Option<(usize, PLMeasure, Q)> = None;
        for i in 0..gens.letter_count() {
            if word.first().is_some_and(|&j| j ^ 1 == i) {
                continue;
            }
            let image = push_forward(gens.letter_homeo(i), &mu)?;
            let s = spread(&image)?;
            if best.as_ref().is_none_or(|(_, _, b)| s < *b) {
                best = Some((i, image, s));
            }
        }
        let Some((i, image, s)) = best else { break };
        word.insert(0, i);
        mu = image;
        let running = if s < *trace.last().expect("nonempty") { s.clone() } else { trace.last().expect("nonempty").clone() };
        trace.push(running);
        steps.push(ProximalStep {
            radius: r,
            word: Word(word.iter().map(|&j| gens.letter(j)).collect()),
            spread: s,
        });
    }
    let contracting = trace.last().is_some_and(|b| *b < initial);
    Ok(ProximalityTrace {
        steps,
        trace,
        contracting,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::dendrite::EdgeId;
    use crate::measure::canonical_measure;
    use crate::rational::qi;
    use crate::zoo::{lookup, thompson_generators};

    #[test]
    fn dirac_has_zero_spread() {
        let sys = lookup("odometer:D=3").unwrap();
        let mu = PLMeasure::dirac(sys.gens.dendrite().clone(), &DPoint::vertex(9)).unwrap();
        let t = strong_proximality_scan(&sys.gens, &mu, 2).unwrap();
        assert_eq!(t.trace, vec![qi(0); 3]);
    }

    #[test]
    fn uniform_on_interval() {
        let d = Arc::new(crate::dendrite::Dendrite::unit_interval());
        assert_eq!(spread(&canonical_measure(d)).unwrap(), q(15, 32));
    }

    #[test]
    fn isometries_do_not_contract() {
        let sys = lookup("odometer:D=3").unwrap();
        let mu = canonical_measure(sys.gens.dendrite().clone());
        let t = strong_proximality_scan(&sys.gens, &mu, 3).unwrap();
        assert!(t.steps.iter().all(|s| s.spread == t.trace[0]));
        assert!(!t.contracting);
    }

    #[test]
    fn attracting_fixed_point_contracts() {
        let (f, _) = thompson_generators();
        let gens = GeneratorSet::new(vec![("f".into(), f)]).unwrap();
        let mu = canonical_measure(gens.dendrite().clone());
        let t = strong_proximality_scan(&gens, &mu, 5).unwrap();
        assert!(t.steps.iter().all(|s| s.word.letters().iter().all(|l| !l.inverse)));
        assert!(t.trace.windows(2).all(|w| w[1] <= w[0]));
        let raw: Vec<Q> = t.steps.iter().map(|s| s.spread.clone()).collect();
        assert_eq!(raw[2..], [q(1, 4), q(1, 8), q(1, 16)]);
        assert!(t.contracting);
    }

    #[test]
    fn atoms_and_ramps() {
        let d = Arc::new(crate::dendrite::Dendrite::unit_interval());
        let half = PLMeasure::dirac(d.clone(), &d.edge_point(EdgeId(0), q(1, 2)).unwrap()).unwrap().scale(&q(1, 2));
        let mu = half.add(&canonical_measure(d).scale(&q(1, 2))).unwrap();
        // center 1/2: 1/2 + r = 15/16
        assert_eq!(spread(&mu).unwrap(), q(7, 16));
        assert!(matches!(spread(&half), Err(Error::NotProbability(_))));
    }
}
