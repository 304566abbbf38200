//! Weighted trees over the right-Cayley tree and their class-preserving
//! operations.
//!
//! A weighted tree is just a formal sum viewed through the rooted tree whose
//! vertices are words, with `w` joined to its children `w.s`. The three
//! operations (partial reduction, complete reduction, transfer) each add a
//! scalar multiple of an extension relation to the weights, so they preserve
//! the bounded-difference class of the denoted function while moving weight
//! toward the root. [`find_unbalanced`] detects the configuration at maximal
//! depth (an all-zero brotherhood related to a non-constant one) that forces
//! the class to be nonzero in monoid mode.

use crate::error::{Error, Result};
use crate::formal::{left_extension, right_extension, FormalSum};
use crate::scalar::Scalar;
use crate::words::{Letter, Mode, Word};
use crate::Depth;
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// A finitely supported weight function on the word tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedTree<R> {
    weights: FormalSum<R>,
}

impl<R: Scalar> WeightedTree<R> {
    pub fn new(weights: FormalSum<R>) -> WeightedTree<R> {
        WeightedTree { weights }
    }

    pub fn weights(&self) -> &FormalSum<R> {
        &self.weights
    }

    pub fn into_weights(self) -> FormalSum<R> {
        self.weights
    }

    pub fn mode(&self) -> Mode {
        self.weights.mode()
    }

    pub fn weight(&self, w: &Word) -> R {
        self.weights.coefficient(w)
    }

    pub fn depth(&self) -> Depth {
        self.weights.depth()
    }
}

/// The set of children of a common father.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Brotherhood {
    father: Word,
    members: Vec<Word>,
}

impl Brotherhood {
    /// All children of `father`: one per valid appended letter. In group
    /// mode the letter cancelling the father's last letter is excluded, so
    /// depth >= 2 brotherhoods have 2n-1 members and the depth-1 brotherhood
    /// has all 2n.
    pub fn with_father(father: &Word) -> Brotherhood {
        let members = crate::formal::right_letters(father)
            .into_iter()
            .map(|s| father.push(s).expect("letter chosen to avoid cancellation"))
            .collect();
        Brotherhood { father: father.clone(), members }
    }

    /// The brotherhood containing `w` (its siblings and itself).
    pub fn of_member(w: &Word) -> Result<Brotherhood> {
        match w.delete_last() {
            Some(father) => Ok(Brotherhood::with_father(&father)),
            None => Err(Error::DepthTooSmall { min: 1, got: 0 }),
        }
    }

    pub fn father(&self) -> &Word {
        &self.father
    }

    /// Members in ascending last-letter order (their Hebrew order).
    pub fn members(&self) -> &[Word] {
        &self.members
    }

    /// Common length of the members.
    pub fn depth(&self) -> usize {
        self.father.len() + 1
    }

    pub fn member_ending(&self, s: Letter) -> Option<&Word> {
        self.members.iter().find(|m| m.last() == Some(s))
    }

    /// Whether the father (hence every member) starts with `p`.
    pub fn starts_with(&self, p: &Word) -> bool {
        p.len() <= self.father.len() && self.father.starts_with(p)
    }

    pub fn is_constant<R: Scalar>(&self, t: &WeightedTree<R>) -> bool {
        let first = t.weight(&self.members[0]);
        self.members.iter().all(|m| t.weight(m) == first)
    }

    pub fn is_zero<R: Scalar>(&self, t: &WeightedTree<R>) -> bool {
        self.members.iter().all(|m| t.weight(m).is_zero())
    }
}

/// Brotherhoods whose fathers differ from `b`'s at most in the first letter,
/// in Hebrew order of their fathers. Requires depth >= 2. Monoid mode yields
/// n of them counting `b` itself; group mode yields 2n-1 at depth >= 3 and
/// all 2n at depth 2, where the fathers are single letters.
pub fn related_brotherhoods(b: &Brotherhood, include_self: bool) -> Result<Vec<Brotherhood>> {
    if b.depth() < 2 {
        return Err(Error::DepthTooSmall { min: 2, got: b.depth() });
    }
    let tail = b.father().delete_first().expect("father is nonempty at depth >= 2");
    let mut out = Vec::new();
    for s in crate::formal::left_letters(&tail) {
        let father = tail.push_front(s).expect("letter chosen to avoid cancellation");
        if !include_self && father == *b.father() {
            continue;
        }
        out.push(Brotherhood::with_father(&father));
    }
    Ok(out)
}

/// Two related brotherhoods together with the first-letter matching between
/// their members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatedPair {
    b1: Brotherhood,
    b2: Brotherhood,
}

impl RelatedPair {
    /// Requires equal depth >= 2 and fathers differing at most in the first
    /// letter.
    pub fn new(b1: Brotherhood, b2: Brotherhood) -> Result<RelatedPair> {
        let d = b1.depth().min(b2.depth());
        if d < 2 {
            return Err(Error::DepthTooSmall { min: 2, got: d });
        }
        let t1 = b1.father().delete_first();
        let t2 = b2.father().delete_first();
        if b1.depth() != b2.depth() || t1 != t2 {
            return Err(Error::mode_mismatch(
                format!("brotherhood of {}", b1.father()),
                format!("unrelated brotherhood of {}", b2.father()),
            ));
        }
        Ok(RelatedPair { b1, b2 })
    }

    pub fn b1(&self) -> &Brotherhood {
        &self.b1
    }

    pub fn b2(&self) -> &Brotherhood {
        &self.b2
    }

    /// Matches a member of `b1` to the member of `b2` with the same tail.
    /// Partial only at depth 2 in group mode, where the replaced first
    /// letter can collide with the member's second letter inverse.
    pub fn iota(&self, member: &Word) -> Option<Word> {
        if !self.b1.members().contains(member) {
            return None;
        }
        let tail = member.delete_first()?;
        let head = self.b2.father().first()?;
        let image = tail.push_front(head).ok()?;
        self.b2.members().contains(&image).then_some(image)
    }
}

/// Adds `weight(father.s) * r_father` to the tree: the father gains the
/// weight of the member ending in `s`, every member loses it. Group mode
/// rejects the letter cancelling the father's last letter.
pub fn partial_reduce<R: Scalar>(
    t: &WeightedTree<R>,
    b: &Brotherhood,
    s: Letter,
) -> Result<WeightedTree<R>> {
    t.mode().check_letter(s)?;
    let v0 = match b.father().push(s) {
        Ok(w) => w,
        Err(_) => {
            return Err(Error::IllegalLetter {
                letter: s.to_string(),
                father: b.father().to_string(),
            })
        }
    };
    let c = t.weight(&v0);
    let update = right_extension::<R>(b.father()).scale(&c);
    Ok(WeightedTree::new(t.weights().add(&update)?))
}

/// Reduction of a constant brotherhood: zeroes the members and credits their
/// common value to the father. Coincides with [`partial_reduce`] along any
/// letter, which is why constancy is required.
pub fn complete_reduce<R: Scalar>(t: &WeightedTree<R>, b: &Brotherhood) -> Result<WeightedTree<R>> {
    if !b.is_constant(t) {
        return Err(Error::NotConstant { father: b.father().to_string() });
    }
    let c = t.weight(&b.members[0]);
    let update = right_extension::<R>(b.father()).scale(&c);
    Ok(WeightedTree::new(t.weights().add(&update)?))
}

/// Adds `sum_v weight(v) * l_{v'}` over the members `v` of `b`, where `v'`
/// drops the first letter: zeroes the brotherhood, credits each member's
/// weight to its tail one level up, and debits the matching members of every
/// related brotherhood. Requires depth >= 2.
pub fn transfer<R: Scalar>(t: &WeightedTree<R>, b: &Brotherhood) -> Result<WeightedTree<R>> {
    if b.depth() < 2 {
        return Err(Error::DepthTooSmall { min: 2, got: b.depth() });
    }
    let mut weights = t.weights().clone();
    for v in b.members() {
        let c = t.weight(v);
        if c.is_zero() {
            continue;
        }
        let tail = v.delete_first().expect("members are nonempty");
        weights = weights.add(&left_extension::<R>(&tail).scale(&c))?;
    }
    Ok(WeightedTree::new(weights))
}

/// Searches the tree's maximal depth (if >= 2) for an all-zero brotherhood
/// related to a non-constant one, scanning supported fathers and then their
/// relatives in Hebrew order. Such a pair forces a nonzero class in monoid
/// mode; in group mode it is only a heuristic signal.
pub fn find_unbalanced<R: Scalar>(t: &WeightedTree<R>) -> Option<RelatedPair> {
    let depth = t.depth().finite()?;
    if depth < 2 {
        return None;
    }
    let fathers: BTreeSet<Word> = t
        .weights()
        .terms()
        .filter(|(w, _)| w.len() == depth)
        .map(|(w, _)| w.delete_last().expect("depth >= 2"))
        .collect();
    for father in fathers {
        let b2 = Brotherhood::with_father(&father);
        if b2.is_constant(t) {
            continue;
        }
        for b1 in related_brotherhoods(&b2, false).expect("depth >= 2") {
            if b1.is_zero(t) {
                return Some(RelatedPair { b1, b2 });
            }
        }
    }
    None
}

fn drawn_nodes<R: Scalar>(t: &WeightedTree<R>) -> BTreeSet<Word> {
    let mut nodes = BTreeSet::new();
    nodes.insert(Word::empty(t.mode()));
    for (w, _) in t.weights().terms() {
        let mut cur = w.clone();
        loop {
            nodes.insert(cur.clone());
            match cur.delete_last() {
                Some(p) => cur = p,
                None => break,
            }
        }
    }
    nodes
}

fn children_of(nodes: &BTreeSet<Word>, parent: &Word) -> Vec<Word> {
    nodes
        .iter()
        .filter(|w| w.len() == parent.len() + 1 && w.starts_with(parent))
        .cloned()
        .collect()
}

/// ASCII rendering of the support, its ancestors, and the root, with one
/// `word: weight` line per node.
pub fn render_ascii<R: Scalar>(t: &WeightedTree<R>) -> String {
    let nodes = drawn_nodes(t);
    let root = Word::empty(t.mode());
    let mut out = String::new();
    let _ = writeln!(out, "{}: {}", root, t.weight(&root));
    fn walk<R: Scalar>(
        out: &mut String,
        t: &WeightedTree<R>,
        nodes: &BTreeSet<Word>,
        node: &Word,
        prefix: &str,
    ) {
        let kids = children_of(nodes, node);
        for (i, kid) in kids.iter().enumerate() {
            let last = i + 1 == kids.len();
            let branch = if last { "\\- " } else { "+- " };
            let _ = writeln!(out, "{prefix}{branch}{}: {}", kid, t.weight(kid));
            let extended = format!("{prefix}{}", if last { "   " } else { "|  " });
            walk(out, t, nodes, kid, &extended);
        }
    }
    walk(&mut out, t, &nodes, &root, "");
    out
}

/// GraphViz rendering with the same node set as [`render_ascii`].
pub fn render_dot<R: Scalar>(t: &WeightedTree<R>) -> String {
    let nodes = drawn_nodes(t);
    let mut out = String::from("digraph tree {\n");
    for w in &nodes {
        let _ = writeln!(out, "  \"{w}\" [label=\"{}: {}\"];", w, t.weight(w));
    }
    for w in &nodes {
        if let Some(father) = w.delete_last() {
            let _ = writeln!(out, "  \"{father}\" -> \"{w}\";");
        }
    }
    out.push_str("}\n");
    out
}
