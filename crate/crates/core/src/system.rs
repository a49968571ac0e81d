use std::collections::{HashMap, HashSet};
use std::ops::Deref;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hypergraph::{binomial, check_injective, Edge, Hypergraph};

/// An r-uniform hypergraph in which every t-set lies in at most one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerSystem {
    t: usize,
    graph: Hypergraph,
}

impl SteinerSystem {
    pub fn new(graph: Hypergraph, t: usize) -> Result<Self> {
        check_range(graph.r(), t)?;
        if let Some((a, b)) = steiner_violation(&graph, t) {
            let first = graph.edges()[a].clone();
            let second = graph.edges()[b].clone();
            let shared = first.iter().filter(|v| second.contains(v)).count();
            return Err(Error::SteinerViolation {
                first,
                second,
                shared,
                t,
            });
        }
        Ok(SteinerSystem { t, graph })
    }

    pub fn discrete(r: usize, t: usize, vertex_count: usize) -> Result<Self> {
        Self::new(Hypergraph::empty(r, vertex_count), t)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn params(&self) -> (usize, usize) {
        (self.r(), self.t)
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn into_graph(self) -> Hypergraph {
        self.graph
    }

    pub fn induced(&self, vertices: &[usize]) -> SteinerSystem {
        SteinerSystem {
            t: self.t,
            graph: self.graph.induced(vertices),
        }
    }

    pub fn relabel(&self, map: &[usize], vertex_count: usize) -> Result<SteinerSystem> {
        SteinerSystem::new(self.graph.relabel(map, vertex_count)?, self.t)
    }

    pub fn disjoint_union(&self, other: &SteinerSystem) -> Result<SteinerSystem> {
        if self.params() != other.params() {
            return Err(Error::ParameterMismatch {
                pattern: self.params(),
                host: other.params(),
            });
        }
        SteinerSystem::new(self.graph.disjoint_union(&other.graph)?, self.t)
    }
}

impl Deref for SteinerSystem {
    type Target = Hypergraph;

    fn deref(&self) -> &Hypergraph {
        &self.graph
    }
}

/// A Steiner system whose vertex order is the numeric order of its ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedSteinerSystem(SteinerSystem);

impl OrderedSteinerSystem {
    pub fn new(base: SteinerSystem) -> Self {
        OrderedSteinerSystem(base)
    }

    pub fn base(&self) -> &SteinerSystem {
        &self.0
    }

    pub fn into_base(self) -> SteinerSystem {
        self.0
    }
}

impl Deref for OrderedSteinerSystem {
    type Target = SteinerSystem;

    fn deref(&self) -> &SteinerSystem {
        &self.0
    }
}

pub fn check_range(r: usize, t: usize) -> Result<()> {
    if t < 2 || t > r {
        return Err(Error::Range { r, t });
    }
    Ok(())
}

/// Validates a raw edge list as a Steiner (r,t)-system on `0..vertex_count`.
pub fn validate_steiner(
    vertex_count: usize,
    edges: Vec<Edge>,
    r: usize,
    t: usize,
) -> Result<SteinerSystem> {
    check_range(r, t)?;
    SteinerSystem::new(Hypergraph::new(r, vertex_count, edges)?, t)
}

/// First pair of edge indices sharing at least `t` vertices, if any.
pub fn steiner_violation(graph: &Hypergraph, t: usize) -> Option<(usize, usize)> {
    let mut owner: HashMap<Vec<usize>, usize> = HashMap::new();
    for (i, e) in graph.edges().iter().enumerate() {
        for sub in e.iter().copied().combinations(t) {
            if let Some(&j) = owner.get(&sub) {
                return Some((j, i));
            }
            owner.insert(sub, i);
        }
    }
    None
}

fn check_map(pattern: &Hypergraph, host: &Hypergraph, map: &[usize]) -> Result<()> {
    if pattern.r() != host.r() {
        return Err(Error::ParameterMismatch {
            pattern: (pattern.r(), 0),
            host: (host.r(), 0),
        });
    }
    if map.len() != pattern.vertex_count() {
        return Err(Error::MapShape {
            len: map.len(),
            expected: pattern.vertex_count(),
            host: host.vertex_count(),
        });
    }
    check_injective(map, host.vertex_count())
}

/// Host edges meeting the image of `map` in at least `min` vertices, with the meet size.
fn host_edges_meeting(host: &Hypergraph, map: &[usize], min: usize) -> Vec<(usize, usize)> {
    let mut count: HashMap<usize, usize> = HashMap::new();
    for &v in map {
        for &i in host.incident(v) {
            *count.entry(i).or_default() += 1;
        }
    }
    count
        .into_iter()
        .filter(|&(_, c)| c >= min)
        .sorted_unstable()
        .collect()
}

/// The image of `pattern` under `map` is an induced sub-hypergraph of `host`.
pub fn induced_under(pattern: &Hypergraph, host: &Hypergraph, map: &[usize]) -> Result<bool> {
    check_map(pattern, host, map)?;
    for e in pattern.edges() {
        let img: Vec<usize> = e.iter().map(|&v| map[v]).sorted_unstable().collect();
        if !host.has_edge(&img) {
            return Ok(false);
        }
    }
    let inside = host_edges_meeting(host, map, host.r()).len();
    Ok(inside == pattern.edge_count())
}

/// Induced, and every other host edge meets the image in fewer than `t` vertices.
pub fn strong_under(
    pattern: &Hypergraph,
    host: &Hypergraph,
    t: usize,
    map: &[usize],
) -> Result<bool> {
    if !induced_under(pattern, host, map)? {
        return Ok(false);
    }
    let r = host.r();
    Ok(host_edges_meeting(host, map, t)
        .iter()
        .all(|&(_, meet)| meet == r))
}

pub fn is_induced(g: &SteinerSystem, h: &SteinerSystem, map: &[usize]) -> Result<bool> {
    induced_under(g, h, map)
}

pub fn is_strongly_induced(g: &SteinerSystem, h: &SteinerSystem, map: &[usize]) -> Result<bool> {
    strong_under(g, h, h.t(), map)
}

/// Every permutation of the vertices is an automorphism.
///
/// Adjacent transpositions generate the symmetric group, so invariance under
/// each of them is equivalent to the full check.
pub fn is_homogeneous(f: &SteinerSystem) -> bool {
    let n = f.vertex_count();
    (0..n.saturating_sub(1)).all(|i| {
        f.edges().iter().all(|e| {
            let img: Vec<usize> = e
                .iter()
                .map(|&v| match v {
                    v if v == i => i + 1,
                    v if v == i + 1 => i,
                    v => v,
                })
                .sorted_unstable()
                .collect();
            f.has_edge(&img)
        })
    })
}

/// Every t-set of vertices lies in some edge.
pub fn is_complete(f: &SteinerSystem) -> bool {
    let covered: HashSet<Vec<usize>> = f
        .edges()
        .iter()
        .flat_map(|e| e.iter().copied().combinations(f.t()))
        .collect();
    covered.len() == binomial(f.vertex_count(), f.t())
}

/// Lexicographically first t-set not covered by any edge.
pub fn uncovered_t_set(f: &SteinerSystem) -> Option<Vec<usize>> {
    (0..f.vertex_count())
        .combinations(f.t())
        .find(|x| !f.edges().iter().any(|e| x.iter().all(|v| e.contains(v))))
}
