use serde::Serialize;

use crate::action::{reduce_word, reduced_words, Letter, Word};
use crate::error::{Error, Result};

/// Whether the reduced word `w` lies in `W(s)`, the words beginning with `s`.
pub fn free_group_cylinder(w: &Word, s: &Letter) -> Result<bool> {
    if !w.is_reduced() {
        return Err(Error::NotReduced(w.to_string()));
    }
    Ok(w.letters().first() == Some(s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bt1Report {
    /// Sizes of `{e}`, `W(s)`, `W(s^-1)`, `W(t)`, `W(t^-1)` within the ball.
    pub piece_sizes: [usize; 5],
    pub exact: bool,
    pub violations: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoPieceReport {
    /// Words of length at most `L - 1`, whose preimages under `s` stay in
    /// the ball.
    pub interior_words: usize,
    pub in_w_s: usize,
    pub in_s_w_s_inv: usize,
    pub overlaps: Vec<Word>,
    pub uncovered: Vec<Word>,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiteralBt2Report {
    pub interior_words: usize,
    /// Interior words in neither `W(s)` nor `s^-1 W(s)`.
    pub counterexamples: Vec<Word>,
    /// Interior words in both pieces.
    pub overlap_count: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParadoxReport {
    pub max_len: usize,
    /// Number of reduced words of length at most `r`, for `r = 0..=L`.
    pub cumulative_counts: Vec<usize>,
    pub bt1: Bt1Report,
    /// `F_2 = W(s) ⊔ s W(s^-1)`.
    pub two_piece: TwoPieceReport,
    /// `F_2 = W(s) ∪ s^-1 W(s)` read literally.
    pub literal_bt2: LiteralBt2Report,
}

/// Enumerates the reduced words of length at most `max_len` in the free
/// group on `s, t` and checks both decompositions.
pub fn verify_paradox_partition(max_len: usize) -> ParadoxReport {
    let words = reduced_words(&["s", "t"], max_len);
    let s = Letter::new("s", false);
    let letters = [s.clone(), s.inv(), Letter::new("t", false), Letter::new("t", true)];
    let in_cyl = |w: &Word, l: &Letter| w.letters().first() == Some(l);

    let mut cumulative_counts = vec![0; max_len + 1];
    for w in &words {
        for c in &mut cumulative_counts[w.len()..] {
            *c += 1;
        }
    }

    let mut piece_sizes = [0usize; 5];
    let mut violations = Vec::new();
    for w in &words {
        let hits: Vec<usize> = std::iter::once(w.is_empty())
            .chain(letters.iter().map(|l| in_cyl(w, l)))
            .enumerate()
            .filter_map(|(i, hit)| hit.then_some(i))
            .collect();
        if let [i] = hits[..] {
            piece_sizes[i] += 1;
        } else {
            violations.push(w.clone());
        }
    }

    let s_word = Word(vec![s.clone()]);
    let s_inv_word = Word(vec![s.inv()]);
    let interior: Vec<&Word> = words.iter().filter(|w| w.len() < max_len).collect();
    let (mut in_w_s, mut in_translate) = (0, 0);
    let (mut overlaps, mut uncovered) = (Vec::new(), Vec::new());
    let mut counterexamples = Vec::new();
    let mut overlap_count = 0;
    for w in &interior {
        let a = in_cyl(w, &s);
        // w ∈ s W(s^-1)  ⇔  s^-1 w ∈ W(s^-1)
        let b = in_cyl(&reduce_word(&s_inv_word.concat(w)), &s.inv());
        in_w_s += usize::from(a);
        in_translate += usize::from(b);
        match (a, b) {
            (true, true) => overlaps.push((*w).clone()),
            (false, false) => uncovered.push((*w).clone()),
            _ => {}
        }
        // w ∈ s^-1 W(s)  ⇔  s w ∈ W(s)
        let c = in_cyl(&reduce_word(&s_word.concat(w)), &s);
        match (a, c) {
            (false, false) => counterexamples.push((*w).clone()),
            (true, true) => overlap_count += 1,
            _ => {}
        }
    }

    ParadoxReport {
        max_len,
        cumulative_counts,
        bt1: Bt1Report {
            piece_sizes,
            exact: violations.is_empty(),
            violations,
        },
        two_piece: TwoPieceReport {
            interior_words: interior.len(),
            in_w_s,
            in_s_w_s_inv: in_translate,
            exact: overlaps.is_empty() && uncovered.is_empty(),
            overlaps,
            uncovered,
        },
        literal_bt2: LiteralBt2Report {
            interior_words: interior.len(),
            holds: counterexamples.is_empty() && overlap_count == 0,
            counterexamples,
            overlap_count,
        },
    }
}
