use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{qi, Q};

/// A continuous piecewise-linear self-map of `[0, 1]` with rational
/// breakpoints `0 = x_0 < … < x_k = 1` and values `y_0, …, y_k`.
///
/// Adjacent collinear pieces are always merged, so two maps are equal as
/// functions iff they are equal as values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalPL {
    xs: Vec<Q>,
    ys: Vec<Q>,
}

impl IntervalPL {
    /// Builds a map from its breakpoint table. Monotonicity is not checked
    /// here; see [`crate::homeo::validate`].
    pub fn new(xs: Vec<Q>, ys: Vec<Q>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidMap(format!(
                "need matching breakpoint lists of length >= 2, got {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        if !xs[0].is_zero() || !xs[xs.len() - 1].is_one() {
            return Err(Error::InvalidMap("breakpoints must run from 0 to 1".into()));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMap("breakpoints must be strictly increasing".into()));
        }
        let mut pl = IntervalPL { xs, ys };
        pl.merge_collinear();
        Ok(pl)
    }

    pub fn identity() -> Self {
        IntervalPL {
            xs: vec![Q::zero(), Q::one()],
            ys: vec![Q::zero(), Q::one()],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn xs(&self) -> &[Q] {
        &self.xs
    }

    pub fn ys(&self) -> &[Q] {
        &self.ys
    }

    fn merge_collinear(&mut self) {
        let mut i = 1;
        while i + 1 < self.xs.len() {
            let left = (&self.ys[i] - &self.ys[i - 1]) / (&self.xs[i] - &self.xs[i - 1]);
            let right = (&self.ys[i + 1] - &self.ys[i]) / (&self.xs[i + 1] - &self.xs[i]);
            if left == right {
                self.xs.remove(i);
                self.ys.remove(i);
            } else {
                i += 1;
            }
        }
    }

    /// Slopes of the linear pieces, in order.
    pub fn slopes(&self) -> Vec<Q> {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (&y[1] - &y[0]) / (&x[1] - &x[0]))
            .collect()
    }

    pub fn is_increasing(&self) -> bool {
        self.ys.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_decreasing(&self) -> bool {
        self.ys.windows(2).all(|w| w[0] > w[1])
    }

    /// Index `i` of the piece `[x_i, x_{i+1}]` containing `x` (clamped).
    fn piece(&self, x: &Q) -> usize {
        match self.xs.binary_search(x) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        let i = self.piece(x);
        let (x0, x1) = (&self.xs[i], &self.xs[i + 1]);
        let (y0, y1) = (&self.ys[i], &self.ys[i + 1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &IntervalPL) -> IntervalPL {
        let mut xs: Vec<Q> = inner.xs.clone();
        for (x, y) in inner.xs.windows(2).zip(inner.ys.windows(2)) {
            let (lo, hi) = if y[0] <= y[1] { (&y[0], &y[1]) } else { (&y[1], &y[0]) };
            if lo == hi {
                continue;
            }
            for b in &self.xs {
                if lo < b && b < hi {
                    // preimage of b on this piece
                    xs.push(&x[0] + (&x[1] - &x[0]) * (b - &y[0]) / (&y[1] - &y[0]));
                }
            }
        }
        xs.sort();
        xs.dedup();
        let ys = xs.iter().map(|x| self.eval(&inner.eval(x))).collect();
        let mut out = IntervalPL { xs, ys };
        out.merge_collinear();
        out
    }

    /// Inverse of a strictly monotone map of `[0, 1]` onto itself.
    pub fn inverse(&self) -> Result<IntervalPL> {
        let (xs, ys) = if self.is_increasing() {
            (self.ys.clone(), self.xs.clone())
        } else if self.is_decreasing() {
            (self.ys.iter().rev().cloned().collect(), self.xs.iter().rev().cloned().collect())
        } else {
            return Err(Error::InvalidMap("map is not strictly monotone".into()));
        };
        IntervalPL::new(xs, ys)
    }

    /// Conjugate by the flip `t ↦ 1 - t`: `t ↦ 1 - φ(1 - t)`.
    pub fn flip_conjugate(&self) -> IntervalPL {
        let one = qi(1);
        IntervalPL {
            xs: self.xs.iter().rev().map(|x| &one - x).collect(),
            ys: self.ys.iter().rev().map(|y| &one - y).collect(),
        }
    }

    /// Breakpoints strictly inside `(a, b)`.
    pub fn breakpoints_within<'a>(&'a self, a: &'a Q, b: &'a Q) -> impl Iterator<Item = &'a Q> + 'a {
        self.xs.iter().filter(move |x| a < *x && *x < b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn f() -> IntervalPL {
        IntervalPL::new(
            vec![qi(0), q(1, 2), q(3, 4), qi(1)],
            vec![qi(0), q(1, 4), q(1, 2), qi(1)],
        )
        .unwrap()
    }

    #[test]
    fn collinear_points_merge() {
        let pl = IntervalPL::new(vec![qi(0), q(1, 3), qi(1)], vec![qi(0), q(1, 3), qi(1)]).unwrap();
        assert!(pl.is_identity());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(IntervalPL::new(vec![qi(0)], vec![qi(0)]).is_err());
        assert!(IntervalPL::new(vec![qi(0), q(1, 2)], vec![qi(0), qi(1)]).is_err());
        assert!(IntervalPL::new(vec![qi(0), q(1, 2), q(1, 2), qi(1)], vec![qi(0); 4]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let f = f();
        assert_eq!(f.inverse().unwrap().eval(&q(1, 4)), q(1, 2));
        assert!(f.compose(&f.inverse().unwrap()).is_identity());
        assert!(f.inverse().unwrap().compose(&f).is_identity());
        assert_eq!(f.inverse().unwrap().inverse().unwrap(), f);
    }

    #[test]
    fn decreasing_maps() {
        let flip = IntervalPL::new(vec![qi(0), qi(1)], vec![qi(1), qi(0)]).unwrap();
        assert!(flip.is_decreasing());
        assert_eq!(flip.inverse().unwrap(), flip);
        let g = f().compose(&flip);
        assert_eq!(g.eval(&qi(0)), qi(1));
        assert!(g.compose(&g.inverse().unwrap()).is_identity());
    }

    #[test]
    fn flip_conjugate_is_an_involution() {
        let f = f();
        assert_eq!(f.flip_conjugate().flip_conjugate(), f);
        let t = q(1, 3);
        assert_eq!(f.flip_conjugate().eval(&t), qi(1) - f.eval(&(qi(1) - &t)));
    }
}
