use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};
use rayon::prelude::*;

use super::{integrate, push_forward, PLMeasure, TestFunction};
use crate::action::{reduce_word, GeneratorSet, Letter, Word};
use crate::dendrite::{DPoint, FiniteClosedSet, VertexId};
use crate::error::{Error, Result};
use crate::rational::{q, qi, Q};

/// The windows `F_n = { g^k : |k| ≤ n }` of the cyclic subgroup generated by
/// one generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerScheme {
    generator: String,
    n_max: usize,
}

impl FolnerScheme {
    pub fn cyclic(generator: impl Into<String>, n_max: usize) -> Self {
        FolnerScheme {
            generator: generator.into(),
            n_max,
        }
    }

    pub fn generator(&self) -> &str {
        &self.generator
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `g^{-n}, …, g^{-1}, e, g, …, g^n` as reduced words.
    pub fn words(&self, n: usize) -> Result<Vec<Word>> {
        if n > self.n_max {
            return Err(Error::SchemeIndex { n, n_max: self.n_max });
        }
        let power = |k: usize, inverse: bool| Word(vec![Letter::new(self.generator.clone(), inverse); k]);
        let mut out: Vec<Word> = (1..=n).rev().map(|k| power(k, true)).collect();
        out.extend((0..=n).map(|k| power(k, false)));
        Ok(out)
    }
}

fn push_word(gens: &GeneratorSet, w: &Word, mu: &PLMeasure) -> Result<PLMeasure> {
    let mut out = mu.clone();
    for l in w.letters().iter().rev() {
        out = push_forward(gens.homeo(l)?, &out)?;
    }
    Ok(out)
}

/// `ν_n = |F_n|^{-1} Σ_{w ∈ F_n} w_* μ0`.
pub fn folner_average(gens: &GeneratorSet, scheme: &FolnerScheme, mu0: &PLMeasure, n: usize) -> Result<PLMeasure> {
    let mass = mu0.total_mass();
    if mass != qi(1) {
        return Err(Error::NotProbability(mass.to_string()));
    }
    let words = scheme.words(n)?;
    let pushed = words
        .par_iter()
        .map(|w| push_word(gens, w, mu0))
        .collect::<Result<Vec<_>>>()?;
    let mut sum = PLMeasure::zero(mu0.dendrite().clone());
    for m in &pushed {
        sum = sum.add(m)?;
    }
    let mut avg = sum.scale(&q(1, words.len() as i64));
    avg.norm = mu0.norm().clone();
    Ok(avg)
}

/// `max_{g, f} |∫ f d(g_* μ) − ∫ f dμ|` over the generators and `fns`.
pub fn invariance_defect(gens: &GeneratorSet, mu: &PLMeasure, fns: &[TestFunction]) -> Result<Q> {
    let base = fns.iter().map(|f| integrate(mu, f)).collect::<Result<Vec<_>>>()?;
    let mut worst = Q::zero();
    for (_, g) in gens.generators() {
        let moved = push_forward(g, mu)?;
        for (f, b) in fns.iter().zip(&base) {
            let gap = (integrate(&moved, f)? - b).abs();
            if gap > worst {
                worst = gap;
            }
        }
    }
    Ok(worst)
}

/// `|g F_n Δ F_n| / |F_n|`, with translates compared as reduced words.
pub fn folner_ratio(scheme: &FolnerScheme, g: &Word, n: usize) -> Result<Q> {
    let window: BTreeSet<Word> = scheme.words(n)?.into_iter().collect();
    let shifted: BTreeSet<Word> = window.iter().map(|w| reduce_word(&g.concat(w))).collect();
    let diff = window.symmetric_difference(&shifted).count();
    Ok(q(diff as i64, window.len() as i64))
}

/// Equal atoms on a finite set that every generator maps onto itself.
pub fn uniform_orbit_measure(gens: &GeneratorSet, orbit: &FiniteClosedSet) -> Result<PLMeasure> {
    if orbit.is_empty() {
        return Err(Error::NotCertifiedOrbit);
    }
    for (_, g) in gens.generators() {
        for p in orbit {
            if !orbit.contains(&g.apply(p)?) {
                return Err(Error::NotCertifiedOrbit);
            }
        }
    }
    let w = q(1, orbit.len() as i64);
    let atoms: Vec<(DPoint, Q)> = orbit.iter().map(|p| (p.clone(), w.clone())).collect();
    PLMeasure::new(gens.dendrite().clone(), atoms, Vec::new(), qi(1))
}

/// Five continuous probes: the constant 1, the distances to the root, to `x0`
/// and to `g(x0)` for the first generator `g`, and a ramp that is 0 off the
/// root's last branch, 1/2 at the root and 1 on that branch.
pub fn probe_dictionary(gens: &GeneratorSet, x0: &DPoint) -> Result<Vec<TestFunction>> {
    let d = gens.dendrite();
    let root = d.root();
    let (_, g) = gens.generators().next().expect("generator sets are nonempty");
    let gx = g.apply(x0)?;
    let last = d
        .incident_edges(root)
        .into_iter()
        .map(|e| d.edge(e).map(|e| if e.u == root { e.v } else { e.u }))
        .collect::<Result<Vec<VertexId>>>()?
        .into_iter()
        .max()
        .expect("a dendrite has an edge");
    let (r, c) = (DPoint::Vertex(root), DPoint::Vertex(last));
    let to_last = d.distance(&r, &c)?;
    let mut side = BTreeMap::from([(root, q(1, 2))]);
    for v in d.vertices() {
        let p = DPoint::Vertex(*v);
        if *v != root && d.distance(&r, &p)? == &to_last + d.distance(&c, &p)? {
            side.insert(*v, qi(1));
        }
    }
    Ok(vec![
        TestFunction::constant(d.clone(), qi(1)),
        TestFunction::distance_from(d.clone(), &r)?,
        TestFunction::distance_from(d.clone(), x0)?,
        TestFunction::distance_from(d.clone(), &gx)?,
        TestFunction::from_vertex_values(d.clone(), &side)?,
    ])
}
