use std::sync::Arc;

use super::word::{Letter, Word};
use crate::dendrite::{DPoint, Dendrite};
use crate::error::{Error, Result};
use crate::homeo::{same_dendrite, validate, Homeo};

/// Named generators of a group acting on one dendrite, with their inverses
/// precomputed.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    dendrite: Arc<Dendrite>,
    names: Vec<String>,
    gens: Vec<Homeo>,
    invs: Vec<Homeo>,
}

impl GeneratorSet {
    /// Validates every generator on the common dendrite.
    pub fn new(gens: Vec<(String, Homeo)>) -> Result<Self> {
        for (name, h) in &gens {
            if let Err(v) = validate(h) {
                return Err(Error::InvalidMap(format!("generator {name}: {v}")));
            }
        }
        Self::new_unchecked(gens)
    }

    /// Skips validation; used to exercise negative controls.
    pub fn new_unchecked(gens: Vec<(String, Homeo)>) -> Result<Self> {
        let dendrite = gens
            .first()
            .map(|(_, h)| h.dendrite().clone())
            .ok_or_else(|| Error::InvalidMap("empty generator set".into()))?;
        let mut names = Vec::with_capacity(gens.len());
        let mut homeos = Vec::with_capacity(gens.len());
        let mut invs = Vec::with_capacity(gens.len());
        for (name, h) in gens {
            name.parse::<Letter>()
                .ok()
                .filter(|l| !l.inverse)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            if names.contains(&name) {
                return Err(Error::InvalidMap(format!("duplicate generator {name}")));
            }
            if !same_dendrite(&dendrite, h.dendrite()) {
                return Err(Error::DendriteMismatch);
            }
            invs.push(h.invert()?);
            names.push(name);
            homeos.push(h);
        }
        Ok(GeneratorSet {
            dendrite,
            names,
            gens: homeos,
            invs,
        })
    }

    pub fn dendrite(&self) -> &Arc<Dendrite> {
        &self.dendrite
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> impl Iterator<Item = (&str, &Homeo)> + '_ {
        self.names.iter().map(String::as_str).zip(&self.gens)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Letters in index order `g_0, g_0^-1, g_1, g_1^-1, …`.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.letter_count()).map(|i| self.letter(i)).collect()
    }

    pub(crate) fn letter_count(&self) -> usize {
        2 * self.gens.len()
    }

    pub(crate) fn letter(&self, i: usize) -> Letter {
        Letter::new(self.names[i / 2].clone(), i % 2 == 1)
    }

    pub(crate) fn letter_homeo(&self, i: usize) -> &Homeo {
        if i.is_multiple_of(2) {
            &self.gens[i / 2]
        } else {
            &self.invs[i / 2]
        }
    }

    pub(crate) fn letter_index(&self, l: &Letter) -> Result<usize> {
        let g = self
            .names
            .iter()
            .position(|n| *n == l.symbol)
            .ok_or_else(|| Error::UnknownSymbol(l.symbol.clone()))?;
        Ok(2 * g + usize::from(l.inverse))
    }

    pub fn homeo(&self, l: &Letter) -> Result<&Homeo> {
        Ok(self.letter_homeo(self.letter_index(l)?))
    }

    /// Parses a word and checks that every symbol is a known generator.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let w: Word = s.parse()?;
        for l in w.letters() {
            self.letter_index(l)?;
        }
        Ok(w)
    }

    /// Applies every letter to `x`, in letter order.
    pub(crate) fn neighbours(&self, x: &DPoint) -> Result<Vec<DPoint>> {
        (0..self.letter_count())
            .map(|i| self.letter_homeo(i).apply(x))
            .collect()
    }
}

/// All reduced words of length at most `r`, shortest first.
pub fn word_ball(gens: &GeneratorSet, r: usize) -> Vec<Word> {
    reduced_words(gens.names(), r)
}

/// All reduced words of length at most `r` over `symbols` and their
/// inverses, shortest first; within a length, letters are ordered
/// `s_0, s_0^-1, s_1, …` from the left.
pub fn reduced_words<S: AsRef<str>>(symbols: &[S], r: usize) -> Vec<Word> {
    let letters: Vec<Letter> = symbols
        .iter()
        .flat_map(|s| [Letter::new(s.as_ref(), false), Letter::new(s.as_ref(), true)])
        .collect();
    let mut out = vec![Word::empty()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for w in &layer {
            for i in 0..letters.len() {
                if w.last().is_some_and(|&j| j ^ 1 == i) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(i);
                next.push(nw);
            }
        }
        out.extend(next.iter().map(|w| Word(w.iter().map(|&i| letters[i].clone()).collect())));
        layer = next;
    }
    out
}

/// The homeomorphism `l_1 ∘ … ∘ l_k`.
pub fn evaluate_word(w: &Word, gens: &GeneratorSet) -> Result<Homeo> {
    let mut h = Homeo::identity(gens.dendrite().clone());
    for l in w.letters() {
        h = h.compose(gens.homeo(l)?)?;
    }
    Ok(h)
}

/// `evaluate_word(w)(x)`, computed letter by letter from the right.
pub fn apply_word(w: &Word, gens: &GeneratorSet, x: &DPoint) -> Result<DPoint> {
    gens.dendrite().check_point(x)?;
    let mut p = x.clone();
    for l in w.letters().iter().rev() {
        p = gens.homeo(l)?.apply(&p)?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::reduce_word;
    use crate::homeo::IntervalPL;
    use crate::rational::{q, qi};
    use crate::dendrite::EdgeId;

    fn thompson() -> GeneratorSet {
        let d = Arc::new(Dendrite::unit_interval());
        let f = IntervalPL::new(
            vec![qi(0), q(1, 2), q(3, 4), qi(1)],
            vec![qi(0), q(1, 4), q(1, 2), qi(1)],
        )
        .unwrap();
        let g = IntervalPL::new(
            vec![qi(0), q(1, 2), q(3, 4), q(7, 8), qi(1)],
            vec![qi(0), q(1, 2), q(5, 8), q(3, 4), qi(1)],
        )
        .unwrap();
        GeneratorSet::new(vec![
            ("f".into(), Homeo::interval(d.clone(), f).unwrap()),
            ("g".into(), Homeo::interval(d, g).unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn ball_sizes() {
        let gens = thompson();
        assert_eq!(word_ball(&gens, 0), vec![Word::empty()]);
        assert_eq!(word_ball(&gens, 1).len(), 5);
        let ball = word_ball(&gens, 3);
        assert_eq!(ball.len(), 1 + 4 + 12 + 36);
        assert!(ball.iter().all(|w| reduce_word(w) == *w));
        let distinct: std::collections::BTreeSet<_> = ball.iter().collect();
        assert_eq!(distinct.len(), ball.len());
    }

    #[test]
    fn evaluate_matches_pointwise_application() {
        let gens = thompson();
        let d = gens.dendrite().clone();
        let x = d.edge_point(EdgeId(0), q(7, 8)).unwrap();
        let w = gens.parse_word("f g").unwrap();
        let expected = d.edge_point(EdgeId(0), q(1, 2)).unwrap();
        assert_eq!(evaluate_word(&w, &gens).unwrap().apply(&x).unwrap(), expected);
        assert_eq!(apply_word(&w, &gens, &x).unwrap(), expected);
        assert!(evaluate_word(&Word::empty(), &gens).unwrap().is_identity());
    }

    #[test]
    fn unknown_symbols_are_rejected() {
        let gens = thompson();
        assert_eq!(gens.parse_word("f h"), Err(Error::UnknownSymbol("h".into())));
        let w: Word = "h".parse().unwrap();
        assert!(matches!(evaluate_word(&w, &gens), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn invalid_generators_are_refused() {
        let d = Arc::new(Dendrite::unit_interval());
        let flat = IntervalPL::new(
            vec![qi(0), q(1, 3), q(2, 3), qi(1)],
            vec![qi(0), q(1, 2), q(1, 2), qi(1)],
        )
        .unwrap();
        let h = Homeo::interval(d, flat).unwrap();
        assert!(matches!(
            GeneratorSet::new(vec![("s".into(), h)]),
            Err(Error::InvalidMap(_))
        ));
    }
}
