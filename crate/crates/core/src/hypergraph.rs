use std::collections::HashSet;

use itertools::Itertools;

use crate::error::{Error, Result};

pub type Edge = Vec<usize>;

/// An r-uniform hypergraph on the dense vertex set `0..vertex_count`.
///
/// Edges are kept sorted (each edge ascending, the list lexicographically).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    r: usize,
    vertex_count: usize,
    edges: Vec<Edge>,
    edge_set: HashSet<Edge>,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new<I>(r: usize, vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut list = Vec::new();
        for mut e in edges {
            e.sort_unstable();
            let distinct = e.windows(2).all(|w| w[0] < w[1]);
            if e.len() != r || !distinct || e.iter().any(|&v| v >= vertex_count) {
                return Err(Error::EdgeArity {
                    edge: e,
                    r,
                    vertex_count,
                });
            }
            list.push(e);
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted(r, vertex_count, list))
    }

    pub fn empty(r: usize, vertex_count: usize) -> Self {
        Self::from_sorted(r, vertex_count, Vec::new())
    }

    fn from_sorted(r: usize, vertex_count: usize, edges: Vec<Edge>) -> Self {
        let mut incidence = vec![Vec::new(); vertex_count];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[v].push(i);
            }
        }
        let edge_set = edges.iter().cloned().collect();
        Hypergraph {
            r,
            vertex_count,
            edges,
            edge_set,
            incidence,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `edge` must be sorted.
    pub fn has_edge(&self, edge: &[usize]) -> bool {
        self.edge_set.contains(edge)
    }

    /// Indices into [`Hypergraph::edges`] of the edges through `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Vertices sharing at least one edge with `v`, ascending.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.incidence[v]
            .iter()
            .flat_map(|&i| self.edges[i].iter().copied())
            .filter(|&u| u != v)
            .sorted_unstable()
            .dedup()
            .collect()
    }

    /// Edges lying entirely inside `vertices` (given as a membership mask).
    pub fn edges_within(&self, mask: &[bool]) -> Vec<&Edge> {
        self.edges
            .iter()
            .filter(|e| e.iter().all(|&v| mask[v]))
            .collect()
    }

    /// Sub-hypergraph induced on `vertices`, relabelled to `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Hypergraph {
        let mut pos = vec![usize::MAX; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| pos[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| pos[v]).sorted_unstable().collect())
            .collect();
        edges.sort_unstable();
        Self::from_sorted(self.r, vertices.len(), edges)
    }

    /// Image under an injective `map` into `0..vertex_count`.
    pub fn relabel(&self, map: &[usize], vertex_count: usize) -> Result<Hypergraph> {
        check_injective(map, vertex_count)?;
        Hypergraph::new(
            self.r,
            vertex_count,
            self.edges
                .iter()
                .map(|e| e.iter().map(|&v| map[v]).collect()),
        )
    }

    /// Disjoint union, `other` shifted past this graph's vertices.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.r != other.r {
            return Err(Error::ParameterMismatch {
                pattern: (self.r, 0),
                host: (other.r, 0),
            });
        }
        let n = self.vertex_count;
        let edges = self.edges.iter().cloned().chain(
            other
                .edges
                .iter()
                .map(|e| e.iter().map(|&v| v + n).collect()),
        );
        Hypergraph::new(self.r, n + other.vertex_count, edges)
    }

    pub fn with_isolated(&self, extra: usize) -> Hypergraph {
        Self::from_sorted(self.r, self.vertex_count + extra, self.edges.clone())
    }
}

/// Rejects maps that repeat a target or leave `0..host`.
pub fn check_injective(map: &[usize], host: usize) -> Result<()> {
    let mut seen = vec![false; host];
    for &v in map {
        if v >= host {
            return Err(Error::MapShape {
                len: map.len(),
                expected: map.len(),
                host,
            });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::NonInjectiveMap { vertex: v });
        }
    }
    Ok(())
}

/// Number of k-subsets of an n-set, saturating.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}
