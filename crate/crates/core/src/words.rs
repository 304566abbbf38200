//! Words over a free monoid or free group and the two counting functions.
//!
//! A [`Mode`] fixes the ambient structure: the free monoid on `a1..an` or the
//! free group on the same letters together with their inverses (printed
//! `A1..An`). Group-mode [`Word`]s are always freely reduced; the invariant is
//! enforced at construction and every operation preserves it.
//!
//! Words are ordered right to left: the last letters are compared first and
//! ties recurse on the prefixes, with the empty word least. This "Hebrew"
//! order is the canonical order everywhere in the crate, which is what makes
//! iteration over `BTreeMap<Word, _>` deterministic.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// Ambient structure kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Monoid,
    Group,
}

/// A free monoid or free group of a fixed rank (at least 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mode {
    kind: Kind,
    rank: u32,
}

impl Mode {
    pub fn new(kind: Kind, rank: u32) -> Result<Mode> {
        if rank < 2 {
            return Err(Error::RankOutOfRange(rank));
        }
        Ok(Mode { kind, rank })
    }

    pub fn monoid(rank: u32) -> Result<Mode> {
        Mode::new(Kind::Monoid, rank)
    }

    pub fn group(rank: u32) -> Result<Mode> {
        Mode::new(Kind::Group, rank)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn is_group(&self) -> bool {
        self.kind == Kind::Group
    }

    /// Alphabet size: `n` in monoid mode, `2n` in group mode.
    pub fn alphabet_size(&self) -> usize {
        match self.kind {
            Kind::Monoid => self.rank as usize,
            Kind::Group => 2 * self.rank as usize,
        }
    }

    /// The alphabet in ascending letter order: `a1..an` then, in group mode,
    /// `A1..An`.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = (1..=self.rank as i32).map(Letter).collect();
        if self.is_group() {
            out.extend((1..=self.rank as i32).map(|i| Letter(-i)));
        }
        out
    }

    /// Checks that a letter belongs to this mode's alphabet.
    pub fn check_letter(&self, l: Letter) -> Result<()> {
        let v = l.0;
        let ok = v != 0
            && v.unsigned_abs() <= self.rank
            && (self.is_group() || v > 0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLetter { value: v, context: self.to_string() })
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Monoid => write!(f, "free monoid of rank {}", self.rank),
            Kind::Group => write!(f, "free group of rank {}", self.rank),
        }
    }
}

/// A single letter. Positive values are the generators `a1, a2, ...`;
/// negative values are their inverses (group mode only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(value: i32) -> Result<Letter> {
        if value == 0 {
            return Err(Error::InvalidLetter { value, context: "letter".into() });
        }
        Ok(Letter(value))
    }

    pub fn value(&self) -> i32 {
        self.0
    }

    /// Generator index, 1-based, ignoring inversion.
    pub fn index(&self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(&self) -> bool {
        self.0 < 0
    }

    pub fn inverse(&self) -> Letter {
        Letter(-self.0)
    }

    fn order_key(&self) -> (bool, u32) {
        (self.is_inverse(), self.index())
    }
}

// Plain generators first (by index), then inverses: a1 < a2 < A1 < A2.
impl Ord for Letter {
    fn cmp(&self, other: &Letter) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Letter) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 > 0 {
            write!(f, "a{}", self.0)
        } else {
            write!(f, "A{}", -self.0)
        }
    }
}

/// A word in the ambient mode. Group-mode words are freely reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    mode: Mode,
    letters: Vec<Letter>,
}

impl Word {
    /// Builds a word, validating every letter and (in group mode) free
    /// reducedness. Use [`Word::free_reduce`] to reduce instead of reject.
    pub fn new(mode: Mode, letters: Vec<Letter>) -> Result<Word> {
        for &l in &letters {
            mode.check_letter(l)?;
        }
        if mode.is_group() {
            for (i, pair) in letters.windows(2).enumerate() {
                if pair[0] == pair[1].inverse() {
                    return Err(Error::NotReduced { position: i });
                }
            }
        }
        Ok(Word { mode, letters })
    }

    pub fn empty(mode: Mode) -> Word {
        Word { mode, letters: Vec::new() }
    }

    pub fn letter(mode: Mode, l: Letter) -> Result<Word> {
        mode.check_letter(l)?;
        Ok(Word { mode, letters: vec![l] })
    }

    /// Freely reduces a letter sequence (cancels adjacent inverse pairs until
    /// none remain). In monoid mode this only validates the letters.
    pub fn free_reduce(mode: Mode, letters: &[Letter]) -> Result<Word> {
        for &l in letters {
            mode.check_letter(l)?;
        }
        if !mode.is_group() {
            return Ok(Word { mode, letters: letters.to_vec() });
        }
        let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
        for &l in letters {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Ok(Word { mode, letters: stack })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Appends a letter. Errors if the letter is invalid or (group mode)
    /// would cancel; extension steps never cancel by construction, so a
    /// cancellation here is a caller bug surfaced loudly.
    pub fn push(&self, s: Letter) -> Result<Word> {
        self.mode.check_letter(s)?;
        if self.mode.is_group() && self.last() == Some(s.inverse()) {
            return Err(Error::NotReduced { position: self.len().saturating_sub(1) });
        }
        let mut letters = self.letters.clone();
        letters.push(s);
        Ok(Word { mode: self.mode, letters })
    }

    /// Prepends a letter; same contract as [`Word::push`].
    pub fn push_front(&self, s: Letter) -> Result<Word> {
        self.mode.check_letter(s)?;
        if self.mode.is_group() && self.first() == Some(s.inverse()) {
            return Err(Error::NotReduced { position: 0 });
        }
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(s);
        letters.extend_from_slice(&self.letters);
        Ok(Word { mode: self.mode, letters })
    }

    /// The word with its last letter removed, if any.
    pub fn delete_last(&self) -> Option<Word> {
        if self.is_empty() {
            return None;
        }
        Some(Word { mode: self.mode, letters: self.letters[..self.len() - 1].to_vec() })
    }

    /// The word with its first letter removed, if any.
    pub fn delete_first(&self) -> Option<Word> {
        if self.is_empty() {
            return None;
        }
        Some(Word { mode: self.mode, letters: self.letters[1..].to_vec() })
    }

    /// Concatenation with free reduction at the junction.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.mode != other.mode {
            return Err(Error::mode_mismatch(self.mode, other.mode));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::free_reduce(self.mode, &letters)
    }

    /// k-th power (freely reduced in group mode).
    pub fn pow(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        Word::free_reduce(self.mode, &letters).expect("letters already validated")
    }

    /// Formal inverse (group mode only).
    pub fn inverse(&self) -> Result<Word> {
        if !self.mode.is_group() {
            return Err(Error::mode_mismatch(self.mode, "inverse requires group mode"));
        }
        let letters = self.letters.iter().rev().map(Letter::inverse).collect();
        Ok(Word { mode: self.mode, letters })
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.letters.len() >= prefix.letters.len()
            && self.letters[..prefix.letters.len()] == prefix.letters[..]
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.letters.len() >= suffix.letters.len()
            && self.letters[self.letters.len() - suffix.letters.len()..] == suffix.letters[..]
    }

    /// Right-to-left comparison: last letters first, ties recurse on the
    /// prefixes, empty word least.
    pub fn hebrew_cmp(&self, other: &Word) -> Ordering {
        let mut a = self.letters.iter().rev();
        let mut b = other.letters.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    c => return c,
                },
            }
        }
    }

    /// Parses word text: letters `a1..a9`, `a<k>` for larger indices,
    /// inverses as `A1` or `a1^-1`, juxtaposed with optional whitespace,
    /// `e` for the empty word. Group-mode reducedness is enforced; use
    /// [`Word::parse_reducing`] to reduce instead.
    pub fn parse(mode: Mode, text: &str) -> Result<Word> {
        let letters = parse_letters(text)?;
        Word::new(mode, letters)
    }

    /// Like [`Word::parse`] but freely reduces group-mode input. Returns the
    /// word and whether any reduction happened.
    pub fn parse_reducing(mode: Mode, text: &str) -> Result<(Word, bool)> {
        let letters = parse_letters(text)?;
        let word = Word::free_reduce(mode, &letters)?;
        let reduced = word.len() != letters.len();
        Ok((word, reduced))
    }
}

// Hebrew order, with the mode as a formal tiebreak so that Ord is total even
// across modes (mixed-mode comparison never happens in practice).
impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.hebrew_cmp(other).then_with(|| {
            (self.mode.kind == Kind::Group, self.mode.rank)
                .cmp(&(other.mode.kind == Kind::Group, other.mode.rank))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Tokenizes word text into letters without mode checks.
pub fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    let bytes = text.as_bytes();
    let mut letters = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == 'e' {
            i += 1;
            continue;
        }
        if c != 'a' && c != 'A' {
            return Err(Error::WordSyntax {
                position: i,
                message: format!("expected letter, found {c:?}"),
            });
        }
        let start = i;
        i += 1;
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == digits_start {
            return Err(Error::WordSyntax {
                position: start,
                message: "letter needs a numeric index".into(),
            });
        }
        let index: i32 = text[digits_start..i].parse().map_err(|_| Error::WordSyntax {
            position: digits_start,
            message: "letter index out of range".into(),
        })?;
        if index == 0 {
            return Err(Error::WordSyntax {
                position: digits_start,
                message: "letter index must be positive".into(),
            });
        }
        let mut value = if c == 'a' { index } else { -index };
        if bytes[i..].starts_with(b"^-1") {
            value = -value;
            i += 3;
        }
        letters.push(Letter(value));
    }
    Ok(letters)
}

/// Splits a group word as `x * core * x^-1` with `core` cyclically reduced
/// (first and last letters not inverse to each other). Returns
/// `(core, conjugator)` where the conjugator is `x`. Monoid words are their
/// own core with an empty conjugator.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    if !w.mode.is_group() {
        return (w.clone(), Word::empty(w.mode));
    }
    let l = &w.letters;
    let mut i = 0usize;
    let mut j = l.len();
    while j - i >= 2 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    let core = Word { mode: w.mode, letters: l[i..j].to_vec() };
    let conj = Word { mode: w.mode, letters: l[..i].to_vec() };
    (core, conj)
}

/// Number of occurrences of `v` as a factor of `w`, over all shifts.
/// The empty pattern counts word length: `count(e, w) = |w|`.
pub fn count(v: &Word, w: &Word) -> Result<u64> {
    if v.mode != w.mode {
        return Err(Error::mode_mismatch(v.mode, w.mode));
    }
    if v.is_empty() {
        return Ok(w.len() as u64);
    }
    let (l, m) = (v.len(), w.len());
    if l > m {
        return Ok(0);
    }
    let mut total = 0u64;
    for j in 0..=(m - l) {
        if w.letters[j..j + l] == v.letters[..] {
            total += 1;
        }
    }
    Ok(total)
}

/// A cyclic word: the conjugacy/rotation class of a cyclically reduced word,
/// stored as its Hebrew-least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    rep: Word,
}

impl CyclicWord {
    /// Canonical cyclic word of `w`: cyclically reduces (group mode), then
    /// picks the Hebrew-least rotation as representative.
    pub fn new(w: &Word) -> CyclicWord {
        let (core, _) = cyclic_reduce(w);
        CyclicWord { rep: least_rotation(&core) }
    }

    /// Representative word (Hebrew-least rotation of the core).
    pub fn rep(&self) -> &Word {
        &self.rep
    }

    pub fn mode(&self) -> Mode {
        self.rep.mode
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

pub(crate) fn least_rotation(core: &Word) -> Word {
    let m = core.len();
    if m == 0 {
        return core.clone();
    }
    let mut best = core.clone();
    for k in 1..m {
        let mut letters = Vec::with_capacity(m);
        letters.extend_from_slice(&core.letters[k..]);
        letters.extend_from_slice(&core.letters[..k]);
        let cand = Word { mode: core.mode, letters };
        if cand.hebrew_cmp(&best) == Ordering::Less {
            best = cand;
        }
    }
    best
}

/// Number of cyclic occurrences of `v` in the cyclic word `c`: starting
/// positions on the cycle where `v` matches with wraparound. The pattern must
/// be nonempty (every position matches the empty pattern vacuously, which is
/// never what a caller wants).
pub fn cyclic_count(v: &Word, c: &CyclicWord) -> Result<u64> {
    if v.mode != c.mode() {
        return Err(Error::mode_mismatch(v.mode, c.mode()));
    }
    if v.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let m = c.len();
    if m == 0 {
        return Ok(0);
    }
    let r = &c.rep.letters;
    let l = v.len();
    let mut total = 0u64;
    for j in 0..m {
        if (0..l).all(|i| r[(j + i) % m] == v.letters[i]) {
            total += 1;
        }
    }
    Ok(total)
}
