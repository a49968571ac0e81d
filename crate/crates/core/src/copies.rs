use std::collections::BTreeMap;
use std::ops::Range;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::system::SteinerSystem;

pub const DEFAULT_ISO_BOUND: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CopyKind {
    Induced,
    Strong,
    /// Without a distinguished copy family this coincides with `Induced`.
    Semi,
}

impl std::str::FromStr for CopyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "induced" => Ok(CopyKind::Induced),
            "strong" | "strongly-induced" => Ok(CopyKind::Strong),
            "semi" | "semi-induced" => Ok(CopyKind::Semi),
            other => Err(Error::Format(format!("unknown copy kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CopyEmbedding {
    pub map: Vec<usize>,
    pub kind: CopyKind,
    pub ordered: bool,
}

impl CopyEmbedding {
    pub fn image(&self) -> Vec<usize> {
        self.map.iter().copied().sorted_unstable().collect()
    }
}

/// Backtracking search for embeddings of `pattern` into `host`.
///
/// Pattern vertices are assigned in order `0, 1, ...`; candidates are tried in
/// ascending order so maps are produced lexicographically.
pub struct CopySearch<'a> {
    pattern: &'a Hypergraph,
    host: &'a Hypergraph,
    t: usize,
    strong: bool,
    ordered: bool,
    exact_degree: bool,
    first: Range<usize>,
    allowed: Option<&'a [Vec<usize>]>,
    limit: Option<usize>,
}

impl<'a> CopySearch<'a> {
    pub fn new(pattern: &'a Hypergraph, host: &'a Hypergraph) -> Self {
        CopySearch {
            pattern,
            host,
            t: pattern.r(),
            strong: false,
            ordered: false,
            exact_degree: false,
            first: 0..host.vertex_count(),
            allowed: None,
            limit: None,
        }
    }

    /// Require strongly induced copies with respect to `t`.
    pub fn strong(mut self, t: usize) -> Self {
        self.strong = true;
        self.t = t;
        self
    }

    pub fn kind(self, kind: CopyKind, t: usize) -> Self {
        match kind {
            CopyKind::Strong => self.strong(t),
            CopyKind::Induced | CopyKind::Semi => self,
        }
    }

    pub fn ordered(mut self, ordered: bool) -> Self {
        self.ordered = ordered;
        self
    }

    pub fn exact_degree(mut self) -> Self {
        self.exact_degree = true;
        self
    }

    /// Restrict the image of pattern vertex 0.
    pub fn first_range(mut self, range: Range<usize>) -> Self {
        self.first = range;
        self
    }

    /// Per pattern vertex, the sorted host vertices it may map to.
    pub fn allowed(mut self, allowed: &'a [Vec<usize>]) -> Self {
        self.allowed = Some(allowed);
        self
    }

    /// Fail with `SizeLimitExceeded` once more than `limit` maps are found.
    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    /// Calls `visit` on every embedding; stops early when it returns false.
    pub fn for_each(&self, mut visit: impl FnMut(&[usize]) -> bool) {
        let k = self.pattern.vertex_count();
        if k > self.host.vertex_count() || self.pattern.r() != self.host.r() {
            return;
        }
        if k == 0 {
            visit(&[]);
            return;
        }
        let mut state = State {
            map: Vec::with_capacity(k),
            owner: vec![usize::MAX; self.host.vertex_count()],
            anchor: anchors(self.pattern),
            ending: edges_ending_at(self.pattern),
        };
        self.extend(&mut state, &mut visit);
    }

    pub fn maps(&self) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut overflow = false;
        self.for_each(|m| {
            out.push(m.to_vec());
            if self.limit.is_some_and(|l| out.len() > l) {
                overflow = true;
                return false;
            }
            true
        });
        if overflow {
            return Err(Error::size("copy enumeration", out.len(), self.limit.unwrap()));
        }
        Ok(out)
    }

    pub fn first(&self) -> Option<Vec<usize>> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(m.to_vec());
            false
        });
        found
    }

    /// One lexicographically least map per image set, sorted by image.
    pub fn distinct_images(&self) -> Result<Vec<Vec<usize>>> {
        let mut by_image: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        let mut overflow = false;
        self.for_each(|m| {
            let img: Vec<usize> = m.iter().copied().sorted_unstable().collect();
            by_image.entry(img).or_insert_with(|| m.to_vec());
            if self.limit.is_some_and(|l| by_image.len() > l) {
                overflow = true;
                return false;
            }
            true
        });
        if overflow {
            return Err(Error::size(
                "copy enumeration",
                by_image.len(),
                self.limit.unwrap(),
            ));
        }
        Ok(by_image.into_values().collect())
    }

    fn candidates(&self, state: &State, i: usize) -> Vec<usize> {
        let base: Vec<usize> = match (self.allowed, state.anchor[i]) {
            (Some(a), _) => a[i].clone(),
            (None, Some(j)) => self.host.neighbours(state.map[j]),
            (None, None) => (0..self.host.vertex_count()).collect(),
        };
        let lo = if self.ordered && i > 0 {
            state.map[i - 1] + 1
        } else {
            0
        };
        base.into_iter()
            .filter(|&h| h >= lo && (i > 0 || self.first.contains(&h)))
            .collect()
    }

    fn extend(&self, state: &mut State, visit: &mut impl FnMut(&[usize]) -> bool) -> bool {
        let i = state.map.len();
        if i == self.pattern.vertex_count() {
            if self.strong && !self.strong_at_leaf(state) {
                return true;
            }
            return visit(&state.map);
        }
        let remaining = self.pattern.vertex_count() - i;
        for h in self.candidates(state, i) {
            if state.owner[h] != usize::MAX {
                continue;
            }
            if self.ordered && h + remaining > self.host.vertex_count() {
                break;
            }
            let (dp, dh) = (self.pattern.degree(i), self.host.degree(h));
            if dh < dp || (self.exact_degree && dh != dp) {
                continue;
            }
            state.map.push(h);
            state.owner[h] = i;
            let keep_going = if self.consistent(state, i, h) {
                self.extend(state, visit)
            } else {
                true
            };
            state.owner[h] = usize::MAX;
            state.map.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    /// Edge agreement on the vertices assigned so far, given `i -> h` is the newest.
    fn consistent(&self, state: &State, i: usize, h: usize) -> bool {
        for &e in &state.ending[i] {
            let img: Vec<usize> = self.pattern.edges()[e]
                .iter()
                .map(|&v| state.map[v])
                .sorted_unstable()
                .collect();
            if !self.host.has_edge(&img) {
                return false;
            }
        }
        for &e in self.host.incident(h) {
            let edge = &self.host.edges()[e];
            if edge.iter().all(|&v| state.owner[v] != usize::MAX) {
                let pre: Vec<usize> = edge
                    .iter()
                    .map(|&v| state.owner[v])
                    .sorted_unstable()
                    .collect();
                if !self.pattern.has_edge(&pre) {
                    return false;
                }
            }
        }
        true
    }

    fn strong_at_leaf(&self, state: &State) -> bool {
        for &h in &state.map {
            for &e in self.host.incident(h) {
                let meet = self.host.edges()[e]
                    .iter()
                    .filter(|&&v| state.owner[v] != usize::MAX)
                    .count();
                if meet >= self.t && meet < self.host.r() {
                    return false;
                }
            }
        }
        true
    }
}

struct State {
    map: Vec<usize>,
    owner: Vec<usize>,
    anchor: Vec<Option<usize>>,
    ending: Vec<Vec<usize>>,
}

/// For each pattern vertex, the least earlier vertex sharing an edge with it.
fn anchors(pattern: &Hypergraph) -> Vec<Option<usize>> {
    (0..pattern.vertex_count())
        .map(|i| pattern.neighbours(i).into_iter().find(|&j| j < i))
        .collect()
}

fn edges_ending_at(pattern: &Hypergraph) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); pattern.vertex_count()];
    for (idx, e) in pattern.edges().iter().enumerate() {
        if let Some(&last) = e.last() {
            out[last].push(idx);
        }
    }
    out
}

fn check_params(pattern: &SteinerSystem, host: &SteinerSystem) -> Result<()> {
    if pattern.params() != host.params() {
        return Err(Error::ParameterMismatch {
            pattern: pattern.params(),
            host: host.params(),
        });
    }
    Ok(())
}

/// All copies of `pattern` in `host`, one per image set, ordered by image.
pub fn enumerate_copies(
    pattern: &SteinerSystem,
    host: &SteinerSystem,
    kind: CopyKind,
    ordered: bool,
) -> Result<Vec<CopyEmbedding>> {
    enumerate_copies_range(pattern, host, kind, ordered, 0..host.vertex_count())
}

/// The copies whose pattern vertex 0 lands in `first`. Ranges that partition
/// the host vertices partition the embeddings; see [`par_enumerate_copies`].
pub fn enumerate_copies_range(
    pattern: &SteinerSystem,
    host: &SteinerSystem,
    kind: CopyKind,
    ordered: bool,
    first: Range<usize>,
) -> Result<Vec<CopyEmbedding>> {
    check_params(pattern, host)?;
    let maps = CopySearch::new(pattern, host)
        .kind(kind, host.t())
        .ordered(ordered)
        .first_range(first)
        .distinct_images()?;
    Ok(wrap(maps, kind, ordered))
}

/// Parallel enumeration over `chunks` first-vertex ranges; same output as
/// [`enumerate_copies`].
pub fn par_enumerate_copies(
    pattern: &SteinerSystem,
    host: &SteinerSystem,
    kind: CopyKind,
    ordered: bool,
    chunks: usize,
) -> Result<Vec<CopyEmbedding>> {
    check_params(pattern, host)?;
    let n = host.vertex_count();
    let step = n.div_ceil(chunks.max(1)).max(1);
    let parts: Vec<Vec<Vec<usize>>> = (0..n)
        .step_by(step)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|lo| {
            CopySearch::new(pattern, host)
                .kind(kind, host.t())
                .ordered(ordered)
                .first_range(lo..(lo + step).min(n))
                .distinct_images()
        })
        .collect::<Result<_>>()?;
    // Earlier ranges hold lexicographically smaller maps.
    let mut by_image = BTreeMap::new();
    for map in parts.into_iter().flatten() {
        let img: Vec<usize> = map.iter().copied().sorted_unstable().collect();
        by_image.entry(img).or_insert(map);
    }
    Ok(wrap(by_image.into_values().collect(), kind, ordered))
}

fn wrap(maps: Vec<Vec<usize>>, kind: CopyKind, ordered: bool) -> Vec<CopyEmbedding> {
    maps.into_iter()
        .map(|map| CopyEmbedding { map, kind, ordered })
        .collect()
}

/// An isomorphism `a -> b` (as a vertex map) if one exists.
pub fn are_isomorphic(a: &Hypergraph, b: &Hypergraph, ordered: bool) -> Result<Option<Vec<usize>>> {
    are_isomorphic_bounded(a, b, ordered, DEFAULT_ISO_BOUND)
}

pub fn are_isomorphic_bounded(
    a: &Hypergraph,
    b: &Hypergraph,
    ordered: bool,
    bound: usize,
) -> Result<Option<Vec<usize>>> {
    let n = a.vertex_count();
    if a.r() != b.r() || n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    if ordered {
        return Ok((a.edges() == b.edges()).then(|| (0..n).collect()));
    }
    let degrees = |g: &Hypergraph| (0..n).map(|v| g.degree(v)).sorted_unstable().collect_vec();
    if degrees(a) != degrees(b) {
        return Ok(None);
    }
    if n > bound {
        return Err(Error::size("unordered isomorphism search", n, bound));
    }
    Ok(CopySearch::new(a, b).exact_degree().first())
}

/// Does `map` send the edges of `a` exactly onto the edges of `b`?
pub fn is_isomorphism(a: &Hypergraph, b: &Hypergraph, map: &[usize]) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && crate::system::induced_under(a, b, map).unwrap_or(false)
}
