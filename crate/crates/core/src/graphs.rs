//! Level transition graphs and the coboundary test.
//!
//! The level-L graph has the length-(L-1) words as vertices and the length-L
//! words as directed edges: the word `v` runs from its prefix (last letter
//! deleted) to its suffix (first letter deleted). A pure sum of length-L
//! terms assigns a value to every edge; it lies in the span of the relations
//! `b_w` exactly when those values are the coboundary of a vertex potential.
//! When they are not, some closed directed walk has nonzero total value, and
//! reading off the first letters of its edges turns that walk into a cyclic
//! word witnessing unboundedness.

use crate::error::{Error, Result};
use crate::formal::FormalSum;
use crate::scalar::Scalar;
use crate::words::{CyclicWord, Mode, Word};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Directed multigraph of words: length-(L-1) vertices, length-L edges.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    mode: Mode,
    level: usize,
    vertices: Vec<Word>,
    edges: Vec<Word>,
    vertex_index: BTreeMap<Word, usize>,
    // Edge endpoints by vertex index, precomputed: (prefix, suffix).
    ends: Vec<(usize, usize)>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl TransitionGraph {
    pub fn build(mode: Mode, level: usize) -> Result<TransitionGraph> {
        if level < 1 {
            return Err(Error::LevelOutOfRange { level, min: 1 });
        }
        let vertices = crate::oracle::enumerate_words(mode, level - 1)?;
        let edges = crate::oracle::enumerate_words(mode, level)?;
        let vertex_index: BTreeMap<Word, usize> =
            vertices.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut ends = Vec::with_capacity(edges.len());
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            let p = vertex_index[&e.delete_last().expect("edges are nonempty")];
            let s = vertex_index[&e.delete_first().expect("edges are nonempty")];
            ends.push((p, s));
            out_edges[p].push(i);
            in_edges[s].push(i);
        }
        Ok(TransitionGraph { mode, level, vertices, edges, vertex_index, ends, out_edges, in_edges })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Vertices in Hebrew order.
    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    /// Edge words in Hebrew order.
    pub fn edges(&self) -> &[Word] {
        &self.edges
    }

    pub fn vertex_id(&self, w: &Word) -> Option<usize> {
        self.vertex_index.get(w).copied()
    }

    /// Endpoint indices `(prefix, suffix)` of edge `i`.
    pub fn endpoints(&self, i: usize) -> (usize, usize) {
        self.ends[i]
    }

    pub fn is_loop(&self, i: usize) -> bool {
        self.ends[i].0 == self.ends[i].1
    }

    /// Coefficient of each edge word in `f`, indexed like [`Self::edges`].
    pub(crate) fn edge_values<R: Scalar>(&self, f: &FormalSum<R>) -> Vec<R> {
        self.edges.iter().map(|e| f.coefficient(e)).collect()
    }

    /// Deterministic BFS forest: undirected traversal from the Hebrew-least
    /// unvisited vertex, neighbors scanned in Hebrew edge order, loops never
    /// tree edges.
    pub(crate) fn bfs_forest(&self) -> BfsForest {
        let n = self.vertices.len();
        let mut parent = vec![None; n];
        let mut visited = vec![false; n];
        let mut is_tree_edge = vec![false; self.edges.len()];
        let mut visit_order = Vec::with_capacity(n);
        let mut roots = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            roots.push(start);
            visited[start] = true;
            visit_order.push(start);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                // Merge out- and in-edge lists in ascending edge order.
                let mut candidates: Vec<usize> = self.out_edges[u]
                    .iter()
                    .chain(self.in_edges[u].iter())
                    .copied()
                    .collect();
                candidates.sort_unstable();
                candidates.dedup();
                for e in candidates {
                    let (p, s) = self.ends[e];
                    let v = if p == u { s } else { p };
                    if v == u || visited[v] {
                        continue;
                    }
                    visited[v] = true;
                    is_tree_edge[e] = true;
                    parent[v] = Some((e, v == s));
                    visit_order.push(v);
                    queue.push_back(v);
                }
            }
        }
        BfsForest { visit_order, parent, roots, is_tree_edge }
    }

    /// Vertex potential that satisfies `vals[e] = c(suffix) - c(prefix)` on
    /// every tree edge, zero at each component root.
    pub(crate) fn tree_potential<R: Scalar>(&self, forest: &BfsForest, vals: &[R]) -> Vec<R> {
        let mut pot = vec![R::zero(); self.vertices.len()];
        for &v in &forest.visit_order {
            if let Some((e, v_is_suffix)) = forest.parent[v] {
                let (p, s) = self.ends[e];
                let u = if v_is_suffix { p } else { s };
                pot[v] = if v_is_suffix {
                    pot[u].clone() + vals[e].clone()
                } else {
                    pot[u].clone() - vals[e].clone()
                };
            }
        }
        pot
    }

    pub fn component_count(&self) -> usize {
        self.bfs_forest().roots.len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Rank of the coboundary space spanned by the `b_w` at this level:
    /// vertices minus undirected components.
    pub fn coboundary_rank(&self) -> usize {
        self.vertices.len() - self.component_count()
    }

    /// Forgets directions, loops, and multiplicities.
    pub fn loop_erase(&self) -> SimpleGraph {
        let mut pairs: Vec<(usize, usize)> = self
            .ends
            .iter()
            .filter(|(p, s)| p != s)
            .map(|&(p, s)| (p.min(s), p.max(s)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        SimpleGraph { vertices: self.vertices.clone(), edges: pairs }
    }

    /// Parallel-edge multiplicities of the loop-erased multigraph, keyed by
    /// ordered vertex-index pairs.
    pub fn multi_edge_counts(&self) -> BTreeMap<(usize, usize), u64> {
        let mut out = BTreeMap::new();
        for &(p, s) in &self.ends {
            if p != s {
                *out.entry((p.min(s), p.max(s))).or_insert(0) += 1;
            }
        }
        out
    }

    /// Spanning trees of the underlying multigraph (loops ignored, parallel
    /// edge words counted separately).
    pub fn spanning_tree_count_multi(&self) -> Result<BigInt> {
        tree_count(self.vertices.len(), self.multi_edge_counts())
    }

    /// GraphViz rendering of the directed multigraph, deterministic order.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph transitions {{");
        let _ = writeln!(s, "  label=\"level {}, {}\";", self.level, self.mode);
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for (i, e) in self.edges.iter().enumerate() {
            let (p, q) = self.ends[i];
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.vertices[p], self.vertices[q], e
            );
        }
        s.push_str("}\n");
        s
    }
}

/// Undirected simple graph on word vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    vertices: Vec<Word>,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as word pairs, Hebrew-ordered endpoints within each pair.
    pub fn edge_words(&self) -> Vec<(Word, Word)> {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.vertices[a].clone(), self.vertices[b].clone());
                if x <= y { (x, y) } else { (y, x) }
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph transitions_simple {{");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  \"{}\" -- \"{}\";", self.vertices[a], self.vertices[b]);
        }
        s.push_str("}\n");
        s
    }
}

/// Number of spanning trees of a simple graph, by the matrix-tree theorem.
/// Errors on disconnected input (where the count would be zero).
pub fn spanning_tree_count(g: &SimpleGraph) -> Result<BigInt> {
    let mult = g.edges.iter().map(|&e| (e, 1u64)).collect();
    tree_count(g.vertices.len(), mult)
}

fn tree_count(n: usize, mult: BTreeMap<(usize, usize), u64>) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Disconnected);
    }
    if n == 1 {
        return Ok(BigInt::from(1));
    }
    // Laplacian with the last row and column struck out.
    let m = n - 1;
    let mut lap = vec![vec![BigInt::from(0); m]; m];
    for (&(a, b), &k) in &mult {
        let k = BigInt::from(k);
        if a < m && b < m {
            lap[a][b] -= &k;
            lap[b][a] -= &k;
        }
        if a < m {
            lap[a][a] += &k;
        }
        if b < m {
            lap[b][b] += &k;
        }
    }
    let det = bareiss_determinant(lap);
    if det == BigInt::from(0) {
        return Err(Error::Disconnected);
    }
    Ok(det)
}

// Fraction-free Gaussian elimination; exact for integer matrices.
fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k] == BigInt::from(0) {
            let swap = (k + 1..n).find(|&i| a[i][k] != BigInt::from(0));
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::from(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::from(0);
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Matrix of the relations `b_w` at level `L`: one row per length-(L-1)
/// word, one column per length-L word, both in Hebrew order. Every column
/// has one `+1` and one `-1` except the power columns `x^L`, which vanish.
#[derive(Debug, Clone)]
pub struct ExtensionMatrix {
    rows: Vec<Word>,
    cols: Vec<Word>,
    entries: Vec<Vec<i32>>,
}

impl ExtensionMatrix {
    pub fn rows(&self) -> &[Word] {
        &self.rows
    }

    pub fn cols(&self) -> &[Word] {
        &self.cols
    }

    pub fn entries(&self) -> &[Vec<i32>] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> i32 {
        self.entries[row][col]
    }
}

pub fn extension_matrix(mode: Mode, level: usize) -> Result<ExtensionMatrix> {
    if level < 2 {
        return Err(Error::LevelOutOfRange { level, min: 2 });
    }
    let rows = crate::oracle::enumerate_words(mode, level - 1)?;
    let cols = crate::oracle::enumerate_words(mode, level)?;
    let col_index: BTreeMap<&Word, usize> = cols.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut entries = vec![vec![0i32; cols.len()]; rows.len()];
    for (i, w) in rows.iter().enumerate() {
        let b = crate::formal::b_relation::<crate::Rat64>(w);
        for (col, c) in b.terms() {
            entries[i][col_index[col]] = *c.numer() as i32;
        }
    }
    Ok(ExtensionMatrix { rows, cols, entries })
}

/// Vertex potential on a level graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential<R> {
    values: BTreeMap<Word, R>,
}

impl<R: Scalar> Potential<R> {
    pub fn get(&self, v: &Word) -> R {
        self.values.get(v).cloned().unwrap_or_else(R::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &R)> {
        self.values.iter()
    }

    /// Sum of absolute values; a bound on the potential's coboundary.
    pub fn mass(&self) -> R {
        self.values.values().fold(R::zero(), |acc, v| acc + v.abs())
    }
}

/// Outcome of the coboundary test on a pure sum.
#[derive(Debug, Clone)]
pub enum CoboundaryResult<R> {
    /// The sum is the coboundary of this potential, so it lies in the span
    /// of the `b_w` and denotes a bounded function.
    IsCoboundary(Potential<R>),
    /// No potential exists; this closed directed walk, read as a cyclic
    /// word, has nonzero total value.
    NotCoboundary(CyclicWord),
}

impl<R> CoboundaryResult<R> {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CoboundaryResult::IsCoboundary(_))
    }
}

/// Decides whether a pure level-L sum (`L >= 2`) is a coboundary of the
/// level graph, i.e. lies in the span of the relations `b_w`.
///
/// A BFS potential is forced by the tree edges; the sum is a coboundary
/// exactly when every remaining edge agrees. On failure the witness walk is
/// found by scanning loops, then root round trips through each vertex, then
/// round trips through each edge; if all of those summed to zero the BFS
/// path sums would themselves form a potential, so the scan cannot miss.
/// The nonzero walk is peeled into simple cycles, one of which must carry a
/// nonzero sum, keeping the witness within the vertex count in length.
pub fn coboundary_test<R: Scalar>(f: &FormalSum<R>, level: usize) -> Result<CoboundaryResult<R>> {
    if level < 2 {
        return Err(Error::LevelOutOfRange { level, min: 2 });
    }
    if !f.is_zero() {
        match f.pure_level() {
            Some(l) if l == level => {}
            _ => {
                let found = f
                    .terms()
                    .map(|(w, _)| w.len())
                    .find(|&l| l != level)
                    .unwrap_or(level);
                return Err(Error::NotPure { level, found });
            }
        }
    }
    let g = TransitionGraph::build(f.mode(), level)?;
    let forest = g.bfs_forest();
    let vals = g.edge_values(f);
    let pot = g.tree_potential(&forest, &vals);
    let bad = (0..g.edges().len()).find(|&e| {
        let (p, s) = g.endpoints(e);
        vals[e] != pot[s].clone() - pot[p].clone()
    });
    match bad {
        None => {
            let values = g
                .vertices()
                .iter()
                .cloned()
                .zip(pot.iter().cloned())
                .filter(|(_, c)| !c.is_zero())
                .collect();
            Ok(CoboundaryResult::IsCoboundary(Potential { values }))
        }
        Some(edge) => {
            let walk = nonzero_closed_walk(&g, &forest, &vals, edge);
            let cycle = peel_nonzero_cycle(&g, &vals, &walk);
            Ok(CoboundaryResult::NotCoboundary(walk_to_cyclic_word(&g, &cycle)))
        }
    }
}

/// Reads a closed directed walk of edges as the cyclic word of their first
/// letters. Consecutive letters sit adjacently inside single edge words, so
/// in group mode the result is reduced, including around the wrap.
pub(crate) fn walk_to_cyclic_word(g: &TransitionGraph, walk: &[usize]) -> CyclicWord {
    let letters: Vec<_> = walk
        .iter()
        .map(|&e| g.edges()[e].first().expect("edge words are nonempty"))
        .collect();
    let word = Word::new(g.mode(), letters).expect("walk letters stay reduced");
    CyclicWord::new(&word)
}

// Finds a closed directed walk with nonzero value sum, given that some edge
// violates the BFS potential. Scans loops, vertex round trips, and edge round
// trips from the root of the violating edge's component.
fn nonzero_closed_walk<R: Scalar>(
    g: &TransitionGraph,
    forest: &BfsForest,
    vals: &[R],
    bad_edge: usize,
) -> Vec<usize> {
    for (e, v) in vals.iter().enumerate() {
        if g.is_loop(e) && !v.is_zero() {
            return vec![e];
        }
    }
    // Component root of the violating edge.
    let mut root = g.endpoints(bad_edge).0;
    while let Some((e, is_suffix)) = forest.parent[root] {
        let (p, s) = g.endpoints(e);
        root = if is_suffix { p } else { s };
    }
    let fwd = directed_bfs(g, root, true);
    let bwd = directed_bfs(g, root, false);
    let path_sum = |parents: &[Option<usize>], mut v: usize, forward: bool| -> R {
        let mut total = R::zero();
        while let Some(e) = parents[v] {
            total = total + vals[e].clone();
            let (p, s) = g.endpoints(e);
            v = if forward { p } else { s };
        }
        total
    };
    let reconstruct = |parents: &[Option<usize>], mut v: usize, forward: bool| -> Vec<usize> {
        let mut path = Vec::new();
        while let Some(e) = parents[v] {
            path.push(e);
            let (p, s) = g.endpoints(e);
            v = if forward { p } else { s };
        }
        if forward {
            path.reverse();
        }
        path
    };
    for v in 0..g.vertices().len() {
        if fwd[v].is_none() && v != root || bwd[v].is_none() && v != root {
            continue;
        }
        let total = path_sum(&fwd, v, true) + path_sum(&bwd, v, false);
        if !total.is_zero() {
            let mut walk = reconstruct(&fwd, v, true);
            walk.extend(reconstruct(&bwd, v, false));
            return walk;
        }
    }
    for (e, val) in vals.iter().enumerate() {
        let (p, s) = g.endpoints(e);
        if (fwd[p].is_none() && p != root) || (bwd[s].is_none() && s != root) {
            continue;
        }
        let total = path_sum(&fwd, p, true) + val.clone() + path_sum(&bwd, s, false);
        if !total.is_zero() {
            let mut walk = reconstruct(&fwd, p, true);
            walk.push(e);
            walk.extend(reconstruct(&bwd, s, false));
            return walk;
        }
    }
    unreachable!("some scanned walk must be nonzero when the potential check fails");
}

// Directed BFS parent edges from `root`; `forward` follows out-edges.
fn directed_bfs(g: &TransitionGraph, root: usize, forward: bool) -> Vec<Option<usize>> {
    let mut parent = vec![None; g.vertices().len()];
    let mut visited = vec![false; g.vertices().len()];
    visited[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let list = if forward { &g.out_edges[u] } else { &g.in_edges[u] };
        for &e in list {
            let (p, s) = g.endpoints(e);
            let v = if forward { s } else { p };
            if !visited[v] {
                visited[v] = true;
                parent[v] = Some(e);
                queue.push_back(v);
            }
        }
    }
    parent
}

// Splits a closed walk with nonzero sum into simple directed cycles and
// returns the first cycle whose sum is nonzero. The peeled pieces partition
// the walk's edges, so their sums add up to the walk's.
fn peel_nonzero_cycle<R: Scalar>(g: &TransitionGraph, vals: &[R], walk: &[usize]) -> Vec<usize> {
    let start = g.endpoints(walk[0]).0;
    let mut stack_v = vec![start];
    let mut stack_e: Vec<usize> = Vec::new();
    for &e in walk {
        let (_, target) = g.endpoints(e);
        if let Some(p) = stack_v.iter().position(|&v| v == target) {
            let mut cycle: Vec<usize> = stack_e[p..].to_vec();
            cycle.push(e);
            let total = cycle.iter().fold(R::zero(), |acc, &i| acc + vals[i].clone());
            if !total.is_zero() {
                return cycle;
            }
            stack_v.truncate(p + 1);
            stack_e.truncate(p);
        } else {
            stack_v.push(target);
            stack_e.push(e);
        }
    }
    unreachable!("a closed walk with nonzero sum contains a nonzero simple cycle");
}

/// BFS forest bookkeeping for a transition graph.
#[derive(Debug, Clone)]
pub(crate) struct BfsForest {
    pub visit_order: Vec<usize>,
    /// For non-roots: (tree edge, whether the vertex is the edge's suffix).
    pub parent: Vec<Option<(usize, bool)>>,
    pub roots: Vec<usize>,
    pub is_tree_edge: Vec<bool>,
}
