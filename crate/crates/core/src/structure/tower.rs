use serde::Serialize;

use crate::action::{detect_finite_orbit, FiniteOrbitOutcome, GeneratorSet};
use crate::dendrite::{convex_hull, hausdorff_distance, DPoint, FiniteClosedSet, Subdendrite};
use crate::error::{Error, Result};
use crate::rational::{serde_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerOptions {
    /// Word-ball radius handed to `detect_finite_orbit` per branch point.
    pub orbit_radius: usize,
    /// Maximum number of branch points examined.
    pub budget: usize,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            orbit_radius: 512,
            budget: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerLevel {
    pub n: usize,
    pub subtree: Subdendrite,
    /// `E(T_n)`, the endpoints of `T_n`.
    pub frontier: FiniteClosedSet,
    /// The finite orbit added at this level.
    pub orbit: FiniteClosedSet,
    /// `E(T_n)` is exactly the newest orbit; otherwise the level is relaxed.
    pub strict: bool,
    /// Every generator maps `E(T_n)` onto itself.
    pub frontier_invariant: bool,
    /// `T_{n-1} ⊆ T_n` (vacuous at the first level).
    pub nested: bool,
    #[serde(with = "serde_q")]
    pub hausdorff_to_m: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeTower {
    pub minimal_set: FiniteClosedSet,
    /// `[M]`.
    pub hull: Subdendrite,
    pub levels: Vec<TowerLevel>,
    /// Branch points examined while searching for orbits.
    pub scanned: usize,
}

impl TreeTower {
    pub fn level(&self, n: usize) -> Option<&TowerLevel> {
        n.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    pub fn is_nested(&self) -> bool {
        self.levels.iter().all(|l| l.nested)
    }
}

/// Vertices of degree at least three inside `s`, ordered by distance from the
/// root of the dendrite and then by id.
pub(crate) fn branch_points(gens: &GeneratorSet, s: &Subdendrite) -> Result<Vec<DPoint>> {
    let d = gens.dendrite();
    let root = DPoint::Vertex(d.root());
    let mut out: Vec<(Q, DPoint)> = s
        .vertices()
        .iter()
        .filter(|v| s.degree_at(d, **v) >= 3)
        .map(|v| {
            let p = DPoint::Vertex(*v);
            Ok((d.distance(&root, &p)?, p))
        })
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out.into_iter().map(|(_, p)| p).collect())
}

fn is_invariant(gens: &GeneratorSet, set: &FiniteClosedSet) -> Result<bool> {
    for (_, h) in gens.generators() {
        for p in set {
            if !set.contains(&h.apply(p)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn build_tree_tower(gens: &GeneratorSet, m: &FiniteClosedSet, n_max: usize) -> Result<TreeTower> {
    build_tree_tower_with(gens, m, n_max, &TowerOptions::default())
}

/// `T_n` is the hull of the first `n` finite orbits found among the branch
/// points of `[M]`. When `M` is itself a finite orbit and levels remain, `[M]`
/// closes the tower.
pub fn build_tree_tower_with(
    gens: &GeneratorSet,
    m: &FiniteClosedSet,
    n_max: usize,
    opts: &TowerOptions,
) -> Result<TreeTower> {
    let d = gens.dendrite();
    let hull = convex_hull(d, m)?;
    let candidates = branch_points(gens, &hull)?;

    let mut orbits: Vec<FiniteClosedSet> = Vec::new();
    let mut covered = FiniteClosedSet::new();
    let mut scanned = 0;
    let mut exhausted = true;
    for p in &candidates {
        if orbits.len() == n_max {
            break;
        }
        if covered.contains(p) {
            continue;
        }
        if scanned == opts.budget {
            exhausted = false;
            break;
        }
        scanned += 1;
        if let FiniteOrbitOutcome::Found { orbit, .. } = detect_finite_orbit(gens, p, opts.orbit_radius)? {
            log::debug!("tower level {}: orbit of {p} with {} points", orbits.len() + 1, orbit.len());
            covered = covered.union(&orbit);
            orbits.push(orbit);
        }
    }
    if orbits.len() < n_max && !exhausted {
        return Err(Error::BudgetExceeded { scanned });
    }
    if orbits.len() < n_max && !covered.contains(m.first().expect("hull of a nonempty set")) && is_invariant(gens, m)? {
        orbits.push(m.clone());
    }
    if orbits.is_empty() && n_max > 0 {
        return Err(Error::NoFiniteOrbitFound);
    }

    let mut levels: Vec<TowerLevel> = Vec::with_capacity(orbits.len());
    let mut union = FiniteClosedSet::new();
    for (i, orbit) in orbits.into_iter().enumerate() {
        union = union.union(&orbit);
        let subtree = convex_hull(d, &union)?;
        let frontier = subtree.endpoints(d);
        let nested = levels.last().is_none_or(|prev| prev.subtree.is_subset(&subtree));
        levels.push(TowerLevel {
            n: i + 1,
            strict: frontier == orbit,
            frontier_invariant: is_invariant(gens, &frontier)?,
            hausdorff_to_m: hausdorff_distance(d, &frontier, m)?,
            nested,
            frontier,
            subtree,
            orbit,
        });
    }
    Ok(TreeTower {
        minimal_set: m.clone(),
        hull,
        levels,
        scanned,
    })
}
