//! Bit-packed undirected simple graphs and vertex sets.
//!
//! Rows of the adjacency matrix are stored as `u64` words so that neighbour
//! counts against a [`VertexSet`] reduce to AND + popcount.

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A subset of `0..universe`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; words_for(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    /// Builds a set from vertex ids. Ids outside the universe are rejected.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(universe: usize, it: I) -> Result<Self> {
        let mut s = Self::empty(universe);
        for v in it {
            if v >= universe {
                return Err(Error::VertexOutOfRange { vertex: v, n: universe });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.universe);
        self.words[v / WORD] |= 1 << (v % WORD);
    }

    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.universe);
        self.words[v / WORD] &= !(1 << (v % WORD));
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD + bit)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.universe, other.universe, "vertex sets over different universes");
        Self {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Undirected simple graph on vertices `0..n` with bit-packed adjacency rows.
///
/// Symmetric with an empty diagonal by construction; immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        let stride = words_for(n);
        Self {
            n,
            stride,
            bits: vec![0; stride * n],
        }
    }

    /// Builds a graph from an edge list. Self-loops and out-of-range endpoints are rejected;
    /// duplicate edges collapse.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.check(u)?;
            g.check(v)?;
            if u == v {
                return Err(Error::InvalidSpec(format!("self-loop at vertex {u}")));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        self.bits[u * self.stride + v / WORD] |= 1 << (v % WORD);
        self.bits[v * self.stride + u / WORD] |= 1 << (u % WORD);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.stride..(v + 1) * self.stride]
    }

    /// Panics if either endpoint is out of range.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.row(u)[v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(v);
        row.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD + bit)
                }
            })
        })
    }

    /// Number of neighbours of `v` inside `set`. `v` itself is never counted.
    pub fn neighbor_count(&self, v: usize, set: &VertexSet) -> Result<usize> {
        self.check(v)?;
        if set.universe() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: set.universe(),
            });
        }
        Ok(self.neighbor_count_unchecked(v, set))
    }

    pub(crate) fn neighbor_count_unchecked(&self, v: usize, set: &VertexSet) -> usize {
        self.row(v)
            .iter()
            .zip(set.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Induced subgraph on the complement of `removed`, with vertices renumbered in
    /// ascending order. The returned map sends new ids to original ids.
    pub fn remove_vertices(&self, removed: &VertexSet) -> (Graph, Vec<usize>) {
        let keep: Vec<usize> = (0..self.n).filter(|&v| !removed.contains(v)).collect();
        (self.induced(&keep), keep)
    }

    /// Induced subgraph on `keep` (in the given order).
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut g = Graph::empty(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.edge_count())
            .finish()
    }
}
