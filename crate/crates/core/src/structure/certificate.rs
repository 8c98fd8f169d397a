use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::cover::{frontier_cover, verify_cover_equivariance, EquivarianceWitness, FrontierCover};
use super::tower::{build_tree_tower_with, TowerOptions, TreeTower};
use crate::action::{evaluate_word, word_ball, GeneratorSet};
use crate::dendrite::{DPoint, Dendrite, FiniteClosedSet};
use crate::error::Result;
use crate::rational::{fmt_q, q, serde_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateOptions {
    /// The final mesh must fall strictly below this for a Certified verdict.
    pub threshold: Q,
    pub tower: TowerOptions,
    /// Word-ball radius for the empirical modulus check.
    pub sample_radius: usize,
    /// ε values for the δ(ε) table; defaults to the mesh of every level.
    pub eps_grid: Option<Vec<Q>>,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions {
            threshold: q(1, 16),
            tower: TowerOptions::default(),
            sample_radius: 3,
            eps_grid: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Certified,
    Empirical,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelStatus {
    pub n: usize,
    #[serde(with = "serde_q")]
    pub mesh: Q,
    pub equivariant: bool,
    pub per_generator: BTreeMap<String, bool>,
    pub strict: bool,
    pub covers: bool,
    pub cells_meet_once: bool,
    pub cells: usize,
    /// Smallest distance between points of `M` lying in different cells.
    #[serde(with = "crate::rational::serde_q_opt")]
    pub separation: Option<Q>,
    #[serde(with = "serde_q")]
    pub hausdorff_to_m: Q,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<EquivarianceWitness>,
}

/// `δ(ε)`: points of `M` closer than `delta` share a cell of `level`, and
/// every group element keeps them within `ε`. `delta = None` means any
/// distance works (a single cell).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaEntry {
    pub eps: Q,
    pub level: Option<usize>,
    pub delta: Option<Q>,
}

impl Serialize for DeltaEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (fmt_q(&self.eps), self.delta.as_ref().map(fmt_q)).serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalModulus {
    pub radius: usize,
    pub words: usize,
    /// Per level: every sampled word carries the `M`-points of each cell into
    /// a single cell.
    pub holds: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquicontinuityCertificate {
    #[serde(skip)]
    pub tower: TreeTower,
    #[serde(skip)]
    pub covers: Vec<FrontierCover>,
    pub levels: Vec<LevelStatus>,
    pub delta_table: Vec<DeltaEntry>,
    #[serde(with = "serde_q")]
    pub threshold: Q,
    pub verdict: Verdict,
    pub explanation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<EmpiricalModulus>,
}

impl EquicontinuityCertificate {
    pub fn meshes(&self) -> Vec<Q> {
        self.levels.iter().map(|l| l.mesh.clone()).collect()
    }
}

/// Groups of `M` by the first cell containing them; uncovered points form
/// their own singleton groups.
fn groups(cover: &FrontierCover, m: &FiniteClosedSet) -> Vec<Option<DPoint>> {
    m.iter().map(|x| cover.cell_of(x).cloned()).collect()
}

fn separation(d: &Dendrite, cover: &FrontierCover, m: &FiniteClosedSet) -> Result<Option<Q>> {
    let pts: Vec<&DPoint> = m.iter().collect();
    let tags = groups(cover, m);
    let per_point: Vec<Option<Q>> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut best: Option<Q> = None;
            for j in i + 1..pts.len() {
                if tags[i].is_some() && tags[i] == tags[j] {
                    continue;
                }
                let dist = d.distance(pts[i], pts[j])?;
                if best.as_ref().is_none_or(|b| dist < *b) {
                    best = Some(dist);
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().flatten().min())
}

fn empirical_modulus(
    gens: &GeneratorSet,
    covers: &[FrontierCover],
    m: &FiniteClosedSet,
    radius: usize,
) -> Result<EmpiricalModulus> {
    let words = word_ball(gens, radius);
    let homeos: Vec<_> = words.iter().map(|w| evaluate_word(w, gens)).collect::<Result<_>>()?;
    let holds = covers
        .iter()
        .map(|cover| {
            let pts: Vec<&DPoint> = m.iter().collect();
            let tags = groups(cover, m);
            for h in &homeos {
                let mut target: BTreeMap<&DPoint, Option<DPoint>> = BTreeMap::new();
                for (x, tag) in pts.iter().zip(&tags) {
                    let Some(a) = tag else { continue };
                    let image_cell = cover.cell_of(&h.apply(x)?).cloned();
                    match target.get(a) {
                        Some(prev) if *prev != image_cell => return Ok(false),
                        Some(_) => {}
                        None => {
                            target.insert(a, image_cell);
                        }
                    }
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(EmpiricalModulus {
        radius,
        words: words.len(),
        holds,
    })
}

pub fn equicontinuity_certificate(
    gens: &GeneratorSet,
    m: &FiniteClosedSet,
    n_max: usize,
) -> Result<EquicontinuityCertificate> {
    equicontinuity_certificate_with(gens, m, n_max, &CertificateOptions::default())
}

/// Builds the tower and frontier covers up to `n_max` and checks generator
/// equivariance of every cover exactly.
pub fn equicontinuity_certificate_with(
    gens: &GeneratorSet,
    m: &FiniteClosedSet,
    n_max: usize,
    opts: &CertificateOptions,
) -> Result<EquicontinuityCertificate> {
    let d = gens.dendrite();
    let tower = build_tree_tower_with(gens, m, n_max, &opts.tower)?;
    let mut covers = Vec::with_capacity(tower.levels.len());
    let mut levels = Vec::with_capacity(tower.levels.len());
    for level in &tower.levels {
        let mut cover = frontier_cover(d, m, &level.subtree)?;
        cover.level = level.n;
        let report = verify_cover_equivariance(gens, &cover)?;
        levels.push(LevelStatus {
            n: level.n,
            mesh: cover.mesh.clone(),
            equivariant: report.equivariant,
            per_generator: report.per_generator,
            strict: level.strict,
            covers: cover.covers(),
            cells_meet_once: cover.cells_meet_once(),
            cells: cover.cells.len(),
            separation: separation(d, &cover, m)?,
            hausdorff_to_m: level.hausdorff_to_m.clone(),
            witness: report.counterexample,
        });
        covers.push(cover);
    }

    let eps_grid = opts
        .eps_grid
        .clone()
        .unwrap_or_else(|| levels.iter().map(|l| l.mesh.clone()).collect());
    let mut delta_table: Vec<DeltaEntry> = Vec::new();
    for eps in eps_grid {
        if delta_table.iter().any(|e| e.eps == eps) {
            continue;
        }
        let hit = levels.iter().find(|l| l.mesh <= eps);
        delta_table.push(DeltaEntry {
            level: hit.map(|l| l.n),
            delta: hit.and_then(|l| l.separation.clone()),
            eps,
        });
    }

    let mut reasons = Vec::new();
    let failed = levels.iter().find(|l| !l.equivariant);
    if levels.is_empty() {
        reasons.push("no tower levels were built".to_string());
    }
    for l in &levels {
        if !l.covers {
            reasons.push(format!("level {} does not cover M", l.n));
        }
        if !l.cells_meet_once {
            reasons.push(format!("a cell at level {} meets T_n in more than its frontier point", l.n));
        }
    }
    if levels.windows(2).any(|w| w[1].mesh > w[0].mesh) {
        reasons.push("mesh increases along the tower".to_string());
    }
    if let Some(last) = levels.last() {
        if last.mesh >= opts.threshold {
            reasons.push(format!(
                "final mesh {} is not below threshold {}",
                fmt_q(&last.mesh),
                fmt_q(&opts.threshold)
            ));
        }
    }
    let relaxed: Vec<usize> = levels.iter().filter(|l| !l.strict).map(|l| l.n).collect();

    let (verdict, mut explanation, empirical) = if let Some(l) = failed {
        let w = l.witness.as_ref().expect("non-equivariant levels carry a witness");
        (
            Verdict::Failed,
            format!("generator {} breaks cell equivariance at level {} (frontier point {})", w.generator, l.n, w.a),
            None,
        )
    } else if reasons.is_empty() {
        (
            Verdict::Certified,
            "every generator permutes the cells at every level and the mesh decreases below the threshold".to_string(),
            None,
        )
    } else {
        let emp = empirical_modulus(gens, &covers, m, opts.sample_radius)?;
        (Verdict::Empirical, reasons.join("; "), Some(emp))
    };
    if !relaxed.is_empty() {
        explanation.push_str(&format!(
            "; levels {relaxed:?} have a frontier larger than a single orbit (relaxed)"
        ));
    }
    log::info!("certificate verdict {verdict:?}: {explanation}");

    Ok(EquicontinuityCertificate {
        tower,
        covers,
        levels,
        delta_table,
        threshold: opts.threshold.clone(),
        verdict,
        explanation,
        empirical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dyadic, qi};
    use crate::zoo::{leaves, lookup, star4};

    #[test]
    fn odometer_is_certified() {
        let sys = lookup("odometer:D=7").unwrap();
        let cert = equicontinuity_certificate(&sys.gens, &leaves(7), 6).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified, "{}", cert.explanation);
        for l in &cert.levels {
            assert_eq!(l.mesh, qi(2) * dyadic(l.n as u32));
            assert_eq!(l.separation, Some(qi(2) * dyadic(l.n as u32 - 1)));
        }
        let e = &cert.delta_table[2];
        assert_eq!((e.eps.clone(), e.level), (dyadic(2), Some(3)));
    }

    #[test]
    fn finite_minimal_set_is_certified() {
        let gens = star4();
        let m: FiniteClosedSet = (5..13).map(DPoint::vertex).collect();
        let cert = equicontinuity_certificate(&gens, &m, 4).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert_eq!(cert.levels.last().unwrap().mesh, qi(0));
    }

    #[test]
    fn non_invariant_set_fails_with_witness() {
        let sys = lookup("odometer:D=4").unwrap();
        let left: FiniteClosedSet = (15..23).map(DPoint::vertex).collect();
        let cert = equicontinuity_certificate(&sys.gens, &left, 2).unwrap();
        assert_eq!(cert.verdict, Verdict::Failed);
        assert!(cert.levels[0].witness.is_some());
    }

    #[test]
    fn coarse_tower_is_empirical() {
        let sys = lookup("odometer:D=5").unwrap();
        let cert = equicontinuity_certificate(&sys.gens, &leaves(5), 2).unwrap();
        assert_eq!(cert.verdict, Verdict::Empirical);
        assert_eq!(cert.empirical.unwrap().holds, vec![true, true]);
        let json = serde_json::to_value(&cert.delta_table).unwrap();
        assert_eq!(json[0], serde_json::json!(["1", "2"]));
        assert_eq!(json[1], serde_json::json!(["1/2", "1"]));
    }
}
