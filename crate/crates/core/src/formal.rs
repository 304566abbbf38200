//! Finite formal sums of counting functions and the relations among them.
//!
//! A [`FormalSum`] holds coefficients on words; the function it denotes sends
//! a word `u` to the coefficient-weighted sum of subword counts. The empty
//! word's count is word length, so the `e` coefficient weights `|u|`.
//!
//! The kernel of that interpretation (sums denoting the zero function up to a
//! bounded error) is spanned by the extension relations [`left_extension`]
//! and [`right_extension`], plus [`symmetry`] in group mode. Their pure parts
//! [`b_relation`] generate everything needed level by level; all decision
//! procedures in the crate reduce to membership in that span.

use crate::error::{Error, Result};
use crate::scalar::{from_count, Scalar};
use crate::words::{count, Letter, Mode, Word};
use std::collections::BTreeMap;
use std::fmt;

/// Depth of a sum: the largest supported word length, or `NegInfinity` for
/// the zero sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Depth {
    NegInfinity,
    Finite(usize),
}

impl Depth {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Depth::NegInfinity => None,
            Depth::Finite(d) => Some(*d),
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::NegInfinity => write!(f, "-inf"),
            Depth::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A finite formal sum `sum_w lambda_w * delta_w` with exact coefficients.
/// Zero coefficients are never stored; iteration order is Hebrew.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSum<R> {
    mode: Mode,
    terms: BTreeMap<Word, R>,
}

impl<R: Scalar> FormalSum<R> {
    pub fn zero(mode: Mode) -> FormalSum<R> {
        FormalSum { mode, terms: BTreeMap::new() }
    }

    /// The single term `delta_w` with coefficient one.
    pub fn delta(w: Word) -> FormalSum<R> {
        let mode = w.mode();
        let mut terms = BTreeMap::new();
        terms.insert(w, R::one());
        FormalSum { mode, terms }
    }

    /// Collects terms, merging duplicates and dropping zeros. All words must
    /// share `mode`.
    pub fn from_terms<I>(mode: Mode, terms: I) -> Result<FormalSum<R>>
    where
        I: IntoIterator<Item = (Word, R)>,
    {
        let mut sum = FormalSum::zero(mode);
        for (w, c) in terms {
            if w.mode() != mode {
                return Err(Error::mode_mismatch(w.mode(), mode));
            }
            sum.add_term(w, c);
        }
        Ok(sum)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    /// Terms in Hebrew order of the words.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &R)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> R {
        self.terms.get(w).cloned().unwrap_or_else(R::zero)
    }

    pub(crate) fn add_term(&mut self, w: Word, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = e.get().clone() + c;
                if merged.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = merged;
                }
            }
        }
    }

    pub fn add(&self, other: &FormalSum<R>) -> Result<FormalSum<R>> {
        if self.mode != other.mode {
            return Err(Error::mode_mismatch(self.mode, other.mode));
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FormalSum<R>) -> Result<FormalSum<R>> {
        self.add(&other.scale(&(-R::one())))
    }

    pub fn scale(&self, c: &R) -> FormalSum<R> {
        if c.is_zero() {
            return FormalSum::zero(self.mode);
        }
        let terms = self
            .terms
            .iter()
            .map(|(w, x)| (w.clone(), x.clone() * c.clone()))
            .collect();
        FormalSum { mode: self.mode, terms }
    }

    pub fn depth(&self) -> Depth {
        match self.terms.keys().map(Word::len).max() {
            None => Depth::NegInfinity,
            Some(d) => Depth::Finite(d),
        }
    }

    /// `Some(L)` when every supported word has length exactly `L`. The zero
    /// sum is pure of every length; it reports `None` like a mixed sum, so
    /// callers that allow it must test [`FormalSum::is_zero`] first.
    pub fn pure_level(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Word::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }
}

impl<R: Scalar> fmt::Display for FormalSum<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "[{w}]")?;
            } else {
                write!(f, "{a}*[{w}]")?;
            }
        }
        Ok(())
    }
}

/// Valid right extensions of `w`: all letters in monoid mode; in group mode
/// all letters except the inverse of the last letter (the empty word extends
/// by every letter).
pub(crate) fn right_letters(w: &Word) -> Vec<Letter> {
    let mode = w.mode();
    let excluded = if mode.is_group() { w.last().map(|l| l.inverse()) } else { None };
    mode.letters().into_iter().filter(|l| Some(*l) != excluded).collect()
}

pub(crate) fn left_letters(w: &Word) -> Vec<Letter> {
    let mode = w.mode();
    let excluded = if mode.is_group() { w.first().map(|l| l.inverse()) } else { None };
    mode.letters().into_iter().filter(|l| Some(*l) != excluded).collect()
}

/// Left extension relation `l_w = delta_w - sum_s delta_{sw}` over the valid
/// prepended letters. Denotes a function bounded by 1 in absolute value.
pub fn left_extension<R: Scalar>(w: &Word) -> FormalSum<R> {
    let mut sum = FormalSum::delta(w.clone());
    for s in left_letters(w) {
        let sw = w.push_front(s).expect("letter chosen to avoid cancellation");
        sum.add_term(sw, -R::one());
    }
    sum
}

/// Right extension relation `r_w = delta_w - sum_s delta_{ws}`.
pub fn right_extension<R: Scalar>(w: &Word) -> FormalSum<R> {
    let mut sum = FormalSum::delta(w.clone());
    for s in right_letters(w) {
        let ws = w.push(s).expect("letter chosen to avoid cancellation");
        sum.add_term(ws, -R::one());
    }
    sum
}

/// Symmetry relation `s_w = delta_w + delta_{w^-1}` (group mode only); its
/// homogenization vanishes because cyclic words pair inverses.
pub fn symmetry<R: Scalar>(w: &Word) -> Result<FormalSum<R>> {
    let inv = w.inverse()?;
    let mut sum = FormalSum::delta(w.clone());
    sum.add_term(inv, R::one());
    Ok(sum)
}

/// Pure part of the combined extension relation:
/// `b_w = r_w - l_w = sum_s delta_{sw} - sum_s delta_{ws}`. Supported on
/// words one letter longer than `w`; the two loop terms (if any) cancel.
pub fn b_relation<R: Scalar>(w: &Word) -> FormalSum<R> {
    let mut sum = FormalSum::zero(w.mode());
    for s in left_letters(w) {
        sum.add_term(w.push_front(s).expect("valid letter"), R::one());
    }
    for s in right_letters(w) {
        sum.add_term(w.push(s).expect("valid letter"), -R::one());
    }
    sum
}

/// Star involution `(delta_w)* = -delta_{w^-1}`, extended linearly. Group
/// mode only. Encodes precomposition with inversion and a global sign.
pub fn star<R: Scalar>(f: &FormalSum<R>) -> Result<FormalSum<R>> {
    if !f.mode().is_group() {
        return Err(Error::mode_mismatch(f.mode(), "star requires group mode"));
    }
    let mut out = FormalSum::zero(f.mode());
    for (w, c) in f.terms() {
        out.add_term(w.inverse()?, -c.clone());
    }
    Ok(out)
}

/// Converts a sum read in Brooks coordinates (each `delta_w` standing for the
/// antisymmetrized count `count_w - count_{w^-1}`) into a plain counting sum:
/// `f + f*`. The result is star-fixed.
pub fn brooks_to_counting<R: Scalar>(f: &FormalSum<R>) -> Result<FormalSum<R>> {
    f.add(&star(f)?)
}

/// Evaluates the function denoted by `f` at the word `u`.
pub fn evaluate<R: Scalar>(f: &FormalSum<R>, u: &Word) -> Result<R> {
    if f.mode() != u.mode() {
        return Err(Error::mode_mismatch(f.mode(), u.mode()));
    }
    let mut total = R::zero();
    for (v, c) in f.terms() {
        let n = count(v, u)?;
        if n > 0 {
            total = total + c.clone() * from_count::<R>(n);
        }
    }
    Ok(total)
}

/// Rewrites `f` modulo right extension relations so that every supported
/// word has length exactly `L`, preserving the denoted function up to a
/// bounded error (each substituted `r_w` is bounded by 1). Words are consumed
/// shortest first, in Hebrew order within a length. Requires `L >= 1` and
/// `L >= depth(f)`.
pub fn raise_to_level<R: Scalar>(f: &FormalSum<R>, level: usize) -> Result<FormalSum<R>> {
    Ok(raise_with_cost(f, level)?.0)
}

/// [`raise_to_level`] variant that also reports the total absolute
/// coefficient mass consumed by substitutions; together with a coboundary
/// potential this yields an explicit bound on the denoted function.
pub fn raise_with_cost<R: Scalar>(f: &FormalSum<R>, level: usize) -> Result<(FormalSum<R>, R)> {
    if level < 1 {
        return Err(Error::LevelOutOfRange { level, min: 1 });
    }
    if let Some(d) = f.depth().finite() {
        if level < d {
            return Err(Error::LevelTooSmall { level, depth: d.to_string() });
        }
    }
    let mut cur = f.clone();
    let mut cost = R::zero();
    for len in 0..level {
        let short: Vec<(Word, R)> = cur
            .terms()
            .filter(|(w, _)| w.len() == len)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        for (w, c) in short {
            cost = cost + c.abs();
            cur.add_term(w.clone(), -c.clone());
            for s in right_letters(&w) {
                cur.add_term(w.push(s).expect("valid letter"), c.clone());
            }
        }
    }
    Ok((cur, cost))
}
