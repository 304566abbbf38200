//! Homogenization and certificate functionals on cyclic words.
//!
//! The homogenization of a counting sum (the limit of `evaluate(f, w^k)/k`)
//! is computed exactly: each pattern's homogenized count is its cyclic count
//! on the cyclic core, and the empty pattern homogenizes to cyclic length.
//! Restricted to one level this gives the certificate vector of a cyclic
//! word, the dual functional that vanishes on every extension relation and
//! therefore certifies nontriviality whenever it pairs nonzero with a sum.

use crate::error::{Error, Result};
use crate::formal::FormalSum;
use crate::scalar::{from_count, Scalar};
use crate::words::{cyclic_count, least_rotation, CyclicWord, Letter, Mode, Word};
use std::collections::BTreeMap;

/// Level-L restriction of a cyclic word's homogenized counting: how often
/// each length-L word occurs cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateVector {
    mode: Mode,
    level: usize,
    entries: BTreeMap<Word, u64>,
}

impl CertificateVector {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Nonzero entries in Hebrew order.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, &u64)> {
        self.entries.iter()
    }

    pub fn entry(&self, w: &Word) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }

    /// Total multiplicity; equals the cyclic word's length.
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Dot product with the level-L coefficients of `f`. Agrees with
    /// [`homogenized_evaluate`] on sums that are pure of this level.
    pub fn pair<R: Scalar>(&self, f: &FormalSum<R>) -> Result<R> {
        if f.mode() != self.mode {
            return Err(Error::mode_mismatch(f.mode(), self.mode));
        }
        let mut total = R::zero();
        for (w, n) in &self.entries {
            let c = f.coefficient(w);
            if !c.is_zero() {
                total = total + c * from_count::<R>(*n);
            }
        }
        Ok(total)
    }
}

/// Certificate vector of `c` at level `L >= 1`: walks the cycle once and
/// tallies each wrapped length-L subword.
pub fn certificate(c: &CyclicWord, level: usize) -> Result<CertificateVector> {
    if level < 1 {
        return Err(Error::LevelOutOfRange { level, min: 1 });
    }
    let mut entries = BTreeMap::new();
    let rep = c.rep().letters();
    let m = rep.len();
    for j in 0..m {
        let letters: Vec<Letter> = (0..level).map(|i| rep[(j + i) % m]).collect();
        let w = Word::new(c.mode(), letters)
            .expect("wrapped subwords of a cyclically reduced word are reduced");
        *entries.entry(w).or_insert(0) += 1;
    }
    Ok(CertificateVector { mode: c.mode(), level, entries })
}

/// Exact homogenization of `f` evaluated at the cyclic word `c`:
/// `sum_v lambda_v * cyclic_count(v, c)`, with the empty pattern
/// contributing `lambda_e * |c|`.
pub fn homogenized_evaluate<R: Scalar>(f: &FormalSum<R>, c: &CyclicWord) -> Result<R> {
    if f.mode() != c.mode() {
        return Err(Error::mode_mismatch(f.mode(), c.mode()));
    }
    let mut total = R::zero();
    for (v, coeff) in f.terms() {
        let n = if v.is_empty() { c.len() as u64 } else { cyclic_count(v, c)? };
        if n > 0 {
            total = total + coeff.clone() * from_count::<R>(n);
        }
    }
    Ok(total)
}

/// Default search bound for [`witness_search`]: the vertex count of the
/// level graph at `L = max(depth(f), 2)`, or `2L` if larger. Within this
/// bound the graph's non-coboundary cycles always fit, since they are
/// simple.
pub fn default_witness_bound<R: Scalar>(f: &FormalSum<R>) -> usize {
    let level = f.depth().finite().unwrap_or(0).max(2);
    let n = f.mode().rank() as usize;
    let vertices = if f.mode().is_group() {
        if level == 1 {
            1
        } else {
            2 * n * (2 * n - 1).pow(level as u32 - 2)
        }
    } else {
        n.pow(level as u32 - 1)
    };
    vertices.max(2 * level)
}

/// Finds the shortest cyclic word `c` with `1 <= |c| <= bound` and
/// `homogenized_evaluate(f, c) != 0`, breaking ties between equal lengths by
/// Hebrew order of the canonical representatives; `None` means every cyclic
/// word within the bound pairs to zero (that answer costs a full scan).
pub fn witness_search<R: Scalar>(f: &FormalSum<R>, bound: usize) -> Option<CyclicWord> {
    let mode = f.mode();
    // Letters of the candidate in reverse (the front of the cyclic word is
    // the top of the stack); a DFS over this stack visits the words of each
    // target length in Hebrew order.
    let mut rev: Vec<Letter> = Vec::new();
    (1..=bound).find_map(|len| search_length(f, mode, len, &mut rev))
}

fn search_length<R: Scalar>(
    f: &FormalSum<R>,
    mode: Mode,
    target: usize,
    rev: &mut Vec<Letter>,
) -> Option<CyclicWord> {
    for s in mode.letters() {
        // Prepending s to the candidate must keep it linearly reduced.
        if mode.is_group() && rev.last() == Some(&s.inverse()) {
            continue;
        }
        rev.push(s);
        if rev.len() == target {
            if let Some(c) = cyclic_candidate(mode, rev) {
                let v = homogenized_evaluate(f, &c)
                    .expect("candidate shares f's mode and patterns are handled");
                if !v.is_zero() {
                    rev.pop();
                    return Some(c);
                }
            }
        } else if let Some(found) = search_length(f, mode, target, rev) {
            rev.pop();
            return Some(found);
        }
        rev.pop();
    }
    None
}

// The candidate word (reversed stack read back to front), if it is
// cyclically reduced and the canonical representative of its rotation class.
fn cyclic_candidate(mode: Mode, rev: &[Letter]) -> Option<CyclicWord> {
    if mode.is_group() {
        let first = *rev.last().expect("candidate is nonempty");
        let last = rev[0];
        if first == last.inverse() {
            return None;
        }
    }
    let letters: Vec<Letter> = rev.iter().rev().copied().collect();
    let word = Word::new(mode, letters).expect("DFS maintains reducedness");
    if least_rotation(&word) != word {
        return None;
    }
    Some(CyclicWord::new(&word))
}
