//! Brute-force ground truth for the test suite: exhaustive word
//! enumeration, growth profiling of evaluated sums, and naive rank
//! computation by direct elimination.
//!
//! Everything here recomputes from first principles what the decision path
//! derives structurally, so the two sides can be compared. Exhaustive runs
//! are capped at a fixed word count and error with `TooLarge` beyond it.

use crate::error::{Error, Result};
use crate::formal::{evaluate, FormalSum};
use crate::scalar::Scalar;
use crate::words::{Letter, Mode, Word};
use std::collections::BTreeMap;

/// Hard cap on the number of words a single enumeration may produce.
const ENUMERATION_CAP: u128 = 8_000_000;

/// Number of words of exactly `len` letters, or `None` past the cap.
fn word_count(mode: Mode, len: usize) -> Option<u128> {
    if len == 0 {
        return Some(1);
    }
    let first = mode.alphabet_size() as u128;
    let rest = if mode.is_group() { first - 1 } else { first };
    let mut total = first;
    for _ in 1..len {
        total = total.checked_mul(rest)?;
        if total > ENUMERATION_CAP {
            return None;
        }
    }
    Some(total)
}

/// All words of exactly length `len` (reduced, in group mode), in Hebrew
/// order.
pub fn enumerate_words(mode: Mode, len: usize) -> Result<Vec<Word>> {
    let total = word_count(mode, len)
        .filter(|&c| c <= ENUMERATION_CAP)
        .ok_or_else(|| {
            Error::TooLarge(format!(
                "length-{len} enumeration exceeds the cap of {ENUMERATION_CAP} words"
            ))
        })?;
    let mut out = Vec::with_capacity(total as usize);
    let mut rev: Vec<Letter> = Vec::with_capacity(len);
    fill(mode, len, &mut rev, &mut out);
    Ok(out)
}

/// Extends the reversed letter stack depth-first, letters ascending; the
/// pre-order visit of the full stacks is Hebrew order on the words.
fn fill(mode: Mode, len: usize, rev: &mut Vec<Letter>, out: &mut Vec<Word>) {
    if rev.len() == len {
        let letters: Vec<Letter> = rev.iter().rev().copied().collect();
        out.push(Word::new(mode, letters).expect("cancellations were skipped"));
        return;
    }
    for s in mode.letters() {
        if mode.is_group() && rev.last() == Some(&s.inverse()) {
            continue;
        }
        rev.push(s);
        fill(mode, len, rev, out);
        rev.pop();
    }
}

/// Exact per-length maxima of `|evaluate(f, w)|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthProfile<R> {
    maxima: Vec<R>,
}

impl<R: Scalar> GrowthProfile<R> {
    /// `maxima()[l]` is the maximum over all length-`l` words, for every
    /// length from 0 to the requested horizon.
    pub fn maxima(&self) -> &[R] {
        &self.maxima
    }

    pub fn horizon(&self) -> usize {
        self.maxima.len() - 1
    }

    /// Whether every maximum is at most `bound`.
    pub fn bounded_by(&self, bound: &R) -> bool {
        self.maxima.iter().all(|m| m <= bound)
    }
}

/// Profiles `|evaluate(f, w)|` over every word of each length up to
/// `horizon`. Requires `horizon >= depth(f)` so the answer is meaningful
/// evidence about boundedness.
pub fn growth_profile<R: Scalar>(f: &FormalSum<R>, horizon: usize) -> Result<GrowthProfile<R>> {
    if let Some(depth) = f.depth().finite() {
        if horizon < depth {
            return Err(Error::LevelTooSmall {
                level: horizon,
                depth: depth.to_string(),
            });
        }
    }
    let mode = f.mode();
    let mut maxima = Vec::with_capacity(horizon + 1);
    for len in 0..=horizon {
        let mut best = R::zero();
        for w in enumerate_words(mode, len)? {
            let value = evaluate(f, &w).expect("word shares the sum's mode").abs();
            if value > best {
                best = value;
            }
        }
        maxima.push(best);
    }
    Ok(GrowthProfile { maxima })
}

/// Rank of the span of `rows` by direct elimination on raw level-`level`
/// coefficient vectors. Every nonzero row must be pure of that level.
pub fn naive_rank<R: Scalar>(rows: &[FormalSum<R>], level: usize) -> Result<usize> {
    let Some(first) = rows.first() else {
        return Ok(0);
    };
    let mode = first.mode();
    let columns = enumerate_words(mode, level)?;
    let index: BTreeMap<&Word, usize> = columns.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut pivots: Vec<(usize, Vec<R>)> = Vec::new();
    for row in rows {
        if row.mode() != mode {
            return Err(Error::mode_mismatch(row.mode(), mode));
        }
        if !row.is_zero() && row.pure_level() != Some(level) {
            let bad = row
                .terms()
                .map(|(w, _)| w.len())
                .find(|&l| l != level)
                .expect("an impure row has an off-level word");
            return Err(Error::NotPure { level, found: bad });
        }
        let mut vec = vec![R::zero(); columns.len()];
        for (w, c) in row.terms() {
            vec[index[w]] = c.clone();
        }
        for (lead, prow) in &pivots {
            if vec[*lead].is_zero() {
                continue;
            }
            let factor = vec[*lead].clone() / prow[*lead].clone();
            for (x, p) in vec.iter_mut().zip(prow) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
        if let Some(lead) = vec.iter().position(|x| !x.is_zero()) {
            pivots.push((lead, vec));
        }
    }
    Ok(pivots.len())
}
