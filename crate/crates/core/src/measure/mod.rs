//! Exact finite measures on dendrites: atoms plus piecewise-constant
//! densities along edges.

mod folner;
mod function;
mod json;

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{Signed, Zero};

pub use folner::{folner_average, folner_ratio, invariance_defect, probe_dictionary, uniform_orbit_measure, FolnerScheme};
pub use function::TestFunction;

use crate::dendrite::{DPoint, Dendrite, EdgeId, Subdendrite};
use crate::error::{Error, Result};
use crate::homeo::{same_dendrite, Homeo};
use crate::rational::{qi, Q};

/// Constant density on `[a, b]` of an edge's unit parametrization. The mass
/// of the piece is `density * (b - a) * weight(edge)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub a: Q,
    pub b: Q,
    pub density: Q,
}

impl Piece {
    pub fn new(a: Q, b: Q, density: Q) -> Self {
        Piece { a, b, density }
    }
}

#[derive(Clone, Debug)]
pub struct PLMeasure {
    dendrite: Arc<Dendrite>,
    atoms: BTreeMap<DPoint, Q>,
    edges: BTreeMap<EdgeId, Vec<Piece>>,
    /// Normalization constant the measure was divided by (1 unless built by
    /// [`canonical_measure`]).
    norm: Q,
}

impl PartialEq for PLMeasure {
    fn eq(&self, other: &Self) -> bool {
        same_dendrite(&self.dendrite, &other.dendrite) && self.atoms == other.atoms && self.edges == other.edges
    }
}

impl Eq for PLMeasure {}

/// Sums overlapping pieces, drops zero densities and merges equal
/// neighbours, giving a unique representation.
fn canonical_pieces(pieces: Vec<Piece>) -> Vec<Piece> {
    let mut cuts: Vec<&Q> = pieces.iter().flat_map(|p| [&p.a, &p.b]).collect();
    cuts.sort();
    cuts.dedup();
    let mut out: Vec<Piece> = Vec::new();
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let density: Q = pieces
            .iter()
            .filter(|p| p.a <= *x0 && *x1 <= p.b)
            .map(|p| &p.density)
            .sum();
        if density.is_zero() {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.b == *x0 && last.density == density => last.b = x1.clone(),
            _ => out.push(Piece::new(x0.clone(), x1.clone(), density)),
        }
    }
    out
}

impl PLMeasure {
    pub fn zero(dendrite: Arc<Dendrite>) -> Self {
        PLMeasure {
            dendrite,
            atoms: BTreeMap::new(),
            edges: BTreeMap::new(),
            norm: qi(1),
        }
    }

    pub fn new(
        dendrite: Arc<Dendrite>,
        atoms: Vec<(DPoint, Q)>,
        edges: Vec<(EdgeId, Vec<Piece>)>,
        norm: Q,
    ) -> Result<Self> {
        let mut mu = PLMeasure::zero(dendrite);
        for (p, w) in atoms {
            mu.dendrite.check_point(&p)?;
            if w.is_negative() {
                return Err(Error::InvalidMeasure(format!("negative atom at {p}")));
            }
            mu.add_atom(p, w);
        }
        for (e, pieces) in edges {
            mu.dendrite.edge(e)?;
            for p in &pieces {
                if p.density.is_negative() || p.a < Q::zero() || p.b > qi(1) || p.a >= p.b {
                    return Err(Error::InvalidMeasure(format!(
                        "bad piece [{}, {}] with density {} on {e}",
                        p.a, p.b, p.density
                    )));
                }
            }
            mu.add_pieces(e, pieces);
        }
        if !norm.is_positive() {
            return Err(Error::InvalidMeasure("normalization must be positive".into()));
        }
        mu.norm = norm;
        Ok(mu)
    }

    pub fn dirac(dendrite: Arc<Dendrite>, x: &DPoint) -> Result<Self> {
        Self::new(dendrite, vec![(x.clone(), qi(1))], Vec::new(), qi(1))
    }

    fn add_atom(&mut self, p: DPoint, w: Q) {
        if w.is_zero() {
            return;
        }
        let slot = self.atoms.entry(p).or_insert_with(Q::zero);
        *slot += w;
    }

    fn add_pieces(&mut self, e: EdgeId, pieces: Vec<Piece>) {
        let mut all = self.edges.remove(&e).unwrap_or_default();
        all.extend(pieces);
        let merged = canonical_pieces(all);
        if !merged.is_empty() {
            self.edges.insert(e, merged);
        }
    }

    pub fn dendrite(&self) -> &Arc<Dendrite> {
        &self.dendrite
    }

    pub fn atoms(&self) -> &BTreeMap<DPoint, Q> {
        &self.atoms
    }

    pub fn edge_pieces(&self) -> &BTreeMap<EdgeId, Vec<Piece>> {
        &self.edges
    }

    pub fn norm(&self) -> &Q {
        &self.norm
    }

    pub fn total_mass(&self) -> Q {
        let atoms: Q = self.atoms.values().sum();
        let diffuse: Q = self
            .edges
            .iter()
            .map(|(e, ps)| self.edge_mass(*e, ps, &Q::zero(), &qi(1)))
            .sum();
        atoms + diffuse
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass() == qi(1)
    }

    /// Mass of the pieces of edge `e` inside `[lo, hi]`.
    fn edge_mass(&self, e: EdgeId, pieces: &[Piece], lo: &Q, hi: &Q) -> Q {
        let w = self.dendrite.weight(e).expect("edge of this dendrite");
        pieces
            .iter()
            .map(|p| {
                let a = if p.a > *lo { &p.a } else { lo };
                let b = if p.b < *hi { &p.b } else { hi };
                if a < b {
                    &p.density * (b - a) * w
                } else {
                    Q::zero()
                }
            })
            .sum()
    }

    /// `μ(S)` for a closed subdendrite `S`.
    pub fn mass_of(&self, s: &Subdendrite) -> Q {
        let atoms: Q = self.atoms.iter().filter(|(p, _)| s.contains(p)).map(|(_, w)| w).sum();
        let diffuse: Q = s
            .edge_intervals()
            .iter()
            .filter_map(|(e, (a, b))| self.edges.get(e).map(|ps| self.edge_mass(*e, ps, a, b)))
            .sum();
        atoms + diffuse
    }

    pub fn scale(&self, c: &Q) -> PLMeasure {
        let mut out = PLMeasure::zero(self.dendrite.clone());
        out.norm = self.norm.clone();
        if c.is_zero() {
            return out;
        }
        out.atoms = self.atoms.iter().map(|(p, w)| (p.clone(), w * c)).collect();
        out.edges = self
            .edges
            .iter()
            .map(|(e, ps)| {
                let ps = ps.iter().map(|p| Piece::new(p.a.clone(), p.b.clone(), &p.density * c)).collect();
                (*e, ps)
            })
            .collect();
        out
    }

    pub fn add(&self, other: &PLMeasure) -> Result<PLMeasure> {
        if !same_dendrite(&self.dendrite, &other.dendrite) {
            return Err(Error::DendriteMismatch);
        }
        let mut out = self.clone();
        for (p, w) in &other.atoms {
            out.add_atom(p.clone(), w.clone());
        }
        for (e, ps) in &other.edges {
            out.add_pieces(*e, ps.clone());
        }
        Ok(out)
    }
}

/// Density `1/total_weight` on every edge: a probability with
/// `μ([a, b]) = d(a, b) / total_weight`.
pub fn canonical_measure(d: Arc<Dendrite>) -> PLMeasure {
    let total = d.total_weight();
    let density = qi(1) / &total;
    let mut mu = PLMeasure::zero(d.clone());
    for e in d.edges() {
        mu.edges.insert(e.id, vec![Piece::new(Q::zero(), qi(1), density.clone())]);
    }
    mu.norm = total;
    mu
}

/// `h_* μ`, i.e. `(h_* μ)(A) = μ(h^{-1} A)`.
pub fn push_forward(h: &Homeo, mu: &PLMeasure) -> Result<PLMeasure> {
    if !same_dendrite(h.dendrite(), &mu.dendrite) {
        return Err(Error::DendriteMismatch);
    }
    let d = &mu.dendrite;
    let mut out = PLMeasure::zero(d.clone());
    out.norm = mu.norm.clone();
    for (p, w) in &mu.atoms {
        out.add_atom(h.apply(p)?, w.clone());
    }
    for (e, pieces) in &mu.edges {
        let (target, psi) = h.edge_map(*e)?;
        let ratio = d.weight(*e)? / d.weight(target)?;
        let mut moved = Vec::new();
        for p in pieces {
            // split at the breakpoints of psi so each part moves linearly
            let mut cuts = vec![p.a.clone()];
            cuts.extend(psi.breakpoints_within(&p.a, &p.b).cloned());
            cuts.push(p.b.clone());
            for w in cuts.windows(2) {
                let (y0, y1) = (psi.eval(&w[0]), psi.eval(&w[1]));
                let slope = ((&y1 - &y0) / (&w[1] - &w[0])).abs();
                let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
                moved.push(Piece::new(lo, hi, &p.density * &ratio / slope));
            }
        }
        out.add_pieces(target, moved);
    }
    Ok(out)
}

/// `∫ f dμ`, exact: atoms contribute `w f(x)`, and each constant-density
/// piece integrates the linear parts of `f` by the trapezoid rule.
pub fn integrate(mu: &PLMeasure, f: &TestFunction) -> Result<Q> {
    if !same_dendrite(&mu.dendrite, f.dendrite()) {
        return Err(Error::DomainMismatch);
    }
    let mut total = Q::zero();
    for (p, w) in &mu.atoms {
        total += w * f.eval(p)?;
    }
    for (e, pieces) in &mu.edges {
        let table = f.on_edge(*e)?;
        let weight = mu.dendrite.weight(*e)?;
        for p in pieces {
            let mut cuts = vec![p.a.clone()];
            cuts.extend(table.breakpoints_within(&p.a, &p.b).cloned());
            cuts.push(p.b.clone());
            let integral: Q = cuts
                .windows(2)
                .map(|w| (table.eval(&w[0]) + table.eval(&w[1])) * (&w[1] - &w[0]) / qi(2))
                .sum();
            total += integral * &p.density * weight;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrite::{arc_between, Edge, VertexId, WeightRule};
    use crate::homeo::IntervalPL;
    use crate::rational::q;

    fn unit() -> Arc<Dendrite> {
        Arc::new(Dendrite::unit_interval())
    }

    fn thompson_f(d: &Arc<Dendrite>) -> Homeo {
        let pl = IntervalPL::new(
            vec![qi(0), q(1, 2), q(3, 4), qi(1)],
            vec![qi(0), q(1, 4), q(1, 2), qi(1)],
        )
        .unwrap();
        Homeo::interval(d.clone(), pl).unwrap()
    }

    #[test]
    fn canonical_measure_on_unit_edge_is_uniform() {
        let d = unit();
        let mu = canonical_measure(d.clone());
        assert!(mu.is_probability());
        assert_eq!(integrate(&mu, &TestFunction::constant(d.clone(), qi(1))).unwrap(), qi(1));
        let t = TestFunction::from_vertex_values(d, &[(VertexId(0), qi(0)), (VertexId(1), qi(1))].into()).unwrap();
        assert_eq!(integrate(&mu, &t).unwrap(), q(1, 2));
    }

    #[test]
    fn thompson_push_forward_density() {
        let d = unit();
        let nu = push_forward(&thompson_f(&d), &canonical_measure(d.clone())).unwrap();
        let expected = vec![
            Piece::new(qi(0), q(1, 4), qi(2)),
            Piece::new(q(1, 4), q(1, 2), qi(1)),
            Piece::new(q(1, 2), qi(1), q(1, 2)),
        ];
        assert_eq!(nu.edge_pieces()[&EdgeId(0)], expected);
        assert_eq!(nu.total_mass(), qi(1));
    }

    #[test]
    fn atoms_move_with_the_map() {
        let d = unit();
        let x = d.edge_point(EdgeId(0), q(3, 4)).unwrap();
        let nu = push_forward(&thompson_f(&d), &PLMeasure::dirac(d.clone(), &x).unwrap()).unwrap();
        let y = d.edge_point(EdgeId(0), q(1, 2)).unwrap();
        assert_eq!(nu.atoms().get(&y), Some(&qi(1)));
    }

    #[test]
    fn identity_push_forward_is_identity() {
        let d = unit();
        let mu = canonical_measure(d.clone());
        assert_eq!(push_forward(&Homeo::identity(d), &mu).unwrap(), mu);
    }

    #[test]
    fn arc_mass_is_normalized_length() {
        let d = Arc::new(
            Dendrite::new(
                (0..4).map(VertexId).collect(),
                vec![Edge::new(0, 0, 1, 1), Edge::new(1, 1, 2, 2), Edge::new(2, 1, 3, 2)],
                WeightRule::Dyadic,
            )
            .unwrap(),
        );
        let mu = canonical_measure(d.clone());
        assert_eq!(mu.norm(), &qi(1));
        let a = d.edge_point(EdgeId(0), q(1, 3)).unwrap();
        let b = d.edge_point(EdgeId(2), q(1, 2)).unwrap();
        let arc = arc_between(&d, &a, &b).unwrap();
        assert_eq!(mu.mass_of(&arc), d.distance(&a, &b).unwrap() / mu.norm());
    }

    #[test]
    fn overlapping_pieces_sum() {
        let d = unit();
        let mu = PLMeasure::new(
            d,
            vec![],
            vec![(EdgeId(0), vec![Piece::new(qi(0), q(1, 2), qi(1)), Piece::new(q(1, 4), qi(1), qi(1))])],
            qi(1),
        )
        .unwrap();
        assert_eq!(mu.edge_pieces()[&EdgeId(0)].len(), 3);
        assert_eq!(mu.total_mass(), q(5, 4));
        assert_eq!(mu.scale(&q(4, 5)).total_mass(), qi(1));
    }

    #[test]
    fn rejects_negative_mass() {
        let d = unit();
        assert!(PLMeasure::new(d.clone(), vec![(DPoint::vertex(0), qi(-1))], vec![], qi(1)).is_err());
        assert!(PLMeasure::new(d, vec![], vec![(EdgeId(0), vec![Piece::new(q(1, 2), q(1, 4), qi(1))])], qi(1)).is_err());
    }
}
