//! k-partite Steiner systems and F-hypergraphs.
//!
//! Classes are 0-based in memory. A crossing copy of the pattern `F` on
//! `V(F) = {0, .., k-1}` is stored as its map: entry `i` is the copy's vertex
//! in class `i`.

use serde::{Deserialize, Serialize};

use crate::copies::CopySearch;
use crate::error::{Error, Result};
use crate::format::{check_version, SystemRecord, FORMAT_VERSION};
use crate::hypergraph::Hypergraph;
use crate::system::{induced_under, strong_under, SteinerSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteSystem {
    system: SteinerSystem,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl PartiteSystem {
    /// `classes` must partition the vertices; empty classes are allowed.
    pub fn new(system: SteinerSystem, classes: Vec<Vec<usize>>) -> Result<Self> {
        let n = system.vertex_count();
        let mut class_of = vec![usize::MAX; n];
        for (i, class) in classes.iter().enumerate() {
            for &v in class {
                if v >= n {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} is outside 0..{n}"
                    )));
                }
                if class_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} is in more than one class"
                    )));
                }
                class_of[v] = i;
            }
        }
        if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} is in no class")));
        }
        Self::from_class_of(system, class_of, classes.len())
    }

    pub fn from_class_of(system: SteinerSystem, class_of: Vec<usize>, k: usize) -> Result<Self> {
        if class_of.len() != system.vertex_count() {
            return Err(Error::InvalidPartition(format!(
                "{} class labels for {} vertices",
                class_of.len(),
                system.vertex_count()
            )));
        }
        let mut classes = vec![Vec::new(); k];
        for (v, &c) in class_of.iter().enumerate() {
            if c >= k {
                return Err(Error::InvalidPartition(format!(
                    "vertex {v} has class {c} but k = {k}"
                )));
            }
            classes[c].push(v);
        }
        for e in system.edges() {
            if !is_crossing(&class_of, e) {
                return Err(Error::NonCrossingEdge { edge: e.clone() });
            }
        }
        Ok(PartiteSystem {
            system,
            class_of,
            classes,
        })
    }

    pub fn system(&self) -> &SteinerSystem {
        &self.system
    }

    pub fn graph(&self) -> &Hypergraph {
        self.system.graph()
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// The projection: class index of every vertex.
    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn project(&self, vertices: &[usize]) -> Vec<usize> {
        let mut p: Vec<usize> = vertices.iter().map(|&v| self.class_of[v]).collect();
        p.sort_unstable();
        p
    }
}

pub fn is_crossing(class_of: &[usize], vertices: &[usize]) -> bool {
    let mut seen: Vec<usize> = vertices.iter().map(|&v| class_of[v]).collect();
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// Strongly induced copies of `f` in `x` meeting every class once, each as
/// its class-indexed map.
pub fn crossing_copies(x: &PartiteSystem, f: &SteinerSystem) -> Result<Vec<Vec<usize>>> {
    check_pattern(f, x)?;
    let mut maps = CopySearch::new(f, x.graph())
        .strong(x.system().t())
        .allowed(x.classes())
        .maps()?;
    maps.sort_by_key(|m| sorted(m));
    Ok(maps)
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

fn check_pattern(f: &SteinerSystem, x: &PartiteSystem) -> Result<()> {
    if f.params() != x.system().params() {
        return Err(Error::ParameterMismatch {
            pattern: f.params(),
            host: x.system().params(),
        });
    }
    if f.vertex_count() != x.k() {
        return Err(Error::InvalidPartition(format!(
            "pattern has {} vertices but the system has {} classes",
            f.vertex_count(),
            x.k()
        )));
    }
    Ok(())
}

/// A k-partite system `X` with distinguished crossing strongly induced copies
/// of `F`, where every edge of `X` projects onto an edge of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FHypergraph {
    f: SteinerSystem,
    x: PartiteSystem,
    q: Vec<Vec<usize>>,
}

impl FHypergraph {
    pub fn f(&self) -> &SteinerSystem {
        &self.f
    }

    pub fn x(&self) -> &PartiteSystem {
        &self.x
    }

    /// The copies, class-indexed, sorted by image.
    pub fn q(&self) -> &[Vec<usize>] {
        &self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.x.system().vertex_count()
    }

    /// Same system with a different copy family (validated).
    pub fn with_copies(&self, q: Vec<Vec<usize>>) -> Result<FHypergraph> {
        validate_fhypergraph(self.f.clone(), self.x.clone(), q)
    }

    /// Position of the copy with image `image` (sorted) in [`FHypergraph::q`].
    pub fn copy_index(&self, image: &[usize]) -> Option<usize> {
        self.q.iter().position(|c| sorted(c) == image)
    }
}

/// Validates an F-hypergraph. Copies may be given in any vertex order; they
/// are stored class-indexed.
pub fn validate_fhypergraph(
    f: SteinerSystem,
    x: PartiteSystem,
    q: Vec<Vec<usize>>,
) -> Result<FHypergraph> {
    check_pattern(&f, &x)?;
    for e in x.graph().edges() {
        let projection = x.project(e);
        if !f.has_edge(&projection) {
            return Err(Error::ProjectionNotEdge {
                edge: e.clone(),
                projection,
            });
        }
    }
    let k = x.k();
    let n = x.system().vertex_count();
    let mut maps = Vec::with_capacity(q.len());
    for copy in q {
        if copy.iter().any(|&v| v >= n) {
            return Err(Error::CopyNotCrossing { copy });
        }
        let mut map = vec![usize::MAX; k];
        for &v in &copy {
            let c = x.class_of()[v];
            if map[c] != usize::MAX {
                return Err(Error::CopyNotCrossing { copy });
            }
            map[c] = v;
        }
        if copy.len() != k {
            return Err(Error::CopyNotCrossing { copy });
        }
        if !induced_under(&f, x.graph(), &map)? {
            return Err(Error::CopyNotIsomorphic { copy });
        }
        if !strong_under(&f, x.graph(), x.system().t(), &map)? {
            return Err(Error::CopyNotStrong { copy });
        }
        maps.push(map);
    }
    maps.sort_by_key(|m| sorted(m));
    maps.dedup();
    Ok(FHypergraph { f, x, q: maps })
}

/// `a` sits in `b` under `map` as a strongly induced F-subhypergraph: the
/// systems are strongly induced, classes are respected, and the copies of `b`
/// inside the image are exactly the images of the copies of `a`.
pub fn fh_strongly_induced(a: &FHypergraph, b: &FHypergraph, map: &[usize]) -> Result<bool> {
    if a.f != b.f {
        return Err(Error::ParameterMismatch {
            pattern: a.f.params(),
            host: b.f.params(),
        });
    }
    if !strong_under(a.x.graph(), b.x.graph(), b.x.system().t(), map)? {
        return Ok(false);
    }
    if (0..map.len()).any(|v| a.x.class_of()[v] != b.x.class_of()[map[v]]) {
        return Ok(false);
    }
    let mut inside = vec![false; b.vertex_count()];
    for &v in map {
        inside[v] = true;
    }
    let mut traced: Vec<Vec<usize>> = b
        .q
        .iter()
        .filter(|c| c.iter().all(|&v| inside[v]))
        .cloned()
        .collect();
    let mut mapped: Vec<Vec<usize>> = a
        .q
        .iter()
        .map(|c| c.iter().map(|&v| map[v]).collect())
        .collect();
    traced.sort();
    mapped.sort();
    Ok(traced == mapped)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FHypergraphRecord {
    #[serde(flatten)]
    pub system: SystemRecord,
    /// Class of each vertex, 1-based.
    pub projection: Vec<usize>,
    /// Each copy lists its vertices in class order.
    pub copies: Vec<Vec<usize>>,
    pub pattern: SystemRecord,
}

impl FHypergraphRecord {
    pub fn from_fh(fh: &FHypergraph) -> Self {
        let mut system = SystemRecord::from_system(fh.x.system());
        system.classes = Some(fh.x.classes().to_vec());
        FHypergraphRecord {
            system,
            projection: fh.x.class_of().iter().map(|c| c + 1).collect(),
            copies: fh.q.clone(),
            pattern: SystemRecord::from_system(&fh.f),
        }
    }

    pub fn to_fh(&self) -> Result<FHypergraph> {
        check_version(self.system.format_version)?;
        let x = self.system.to_system()?;
        let f = self.pattern.to_system()?;
        let classes = self
            .system
            .classes
            .clone()
            .ok_or_else(|| Error::Format("F-hypergraph record needs classes".into()))?;
        let part = PartiteSystem::new(x, classes)?;
        let declared: Vec<usize> = part.class_of().iter().map(|c| c + 1).collect();
        if declared != self.projection {
            return Err(Error::Format("projection disagrees with classes".into()));
        }
        validate_fhypergraph(f, part, self.copies.clone())
    }
}

impl FHypergraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&FHypergraphRecord::from_fh(self)).expect("records serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: FHypergraphRecord =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if rec.system.format_version != FORMAT_VERSION {
            return Err(Error::Format("unsupported format_version".into()));
        }
        rec.to_fh()
    }
}

/// Small F-hypergraphs used across tests and demos.
pub mod fixtures {
    use super::*;
    use crate::fixtures as base;

    /// `F` itself, one vertex per class, with itself as the only copy.
    pub fn single(f: &SteinerSystem) -> FHypergraph {
        let k = f.vertex_count();
        let x = PartiteSystem::new(f.clone(), (0..k).map(|i| vec![i]).collect())
            .expect("singleton classes");
        validate_fhypergraph(f.clone(), x, vec![(0..k).collect()]).expect("valid")
    }

    /// `F` with no distinguished copies.
    pub fn bare(f: &SteinerSystem) -> FHypergraph {
        let k = f.vertex_count();
        let x = PartiteSystem::new(f.clone(), (0..k).map(|i| vec![i]).collect())
            .expect("singleton classes");
        validate_fhypergraph(f.clone(), x, vec![]).expect("valid")
    }

    /// Two disjoint crossing r-edges over `F = edge(r)`, both distinguished.
    pub fn two_edges(r: usize, t: usize) -> FHypergraph {
        let f = base::edge_t(r, t);
        let edges = vec![(0..r).collect(), (r..2 * r).collect()];
        let x = SteinerSystem::new(Hypergraph::new(r, 2 * r, edges).unwrap(), t).unwrap();
        let classes = (0..r).map(|i| vec![i, r + i]).collect();
        let x = PartiteSystem::new(x, classes).unwrap();
        validate_fhypergraph(f, x, vec![(0..r).collect(), (r..2 * r).collect()]).unwrap()
    }

    /// Two crossing r-edges sharing the class-0 vertex, both distinguished.
    pub fn fan(r: usize, t: usize) -> FHypergraph {
        let f = base::edge_t(r, t);
        let n = 2 * r - 1;
        let second: Vec<usize> = std::iter::once(0).chain(r..n).collect();
        let x = SteinerSystem::new(
            Hypergraph::new(r, n, vec![(0..r).collect(), second.clone()]).unwrap(),
            t,
        )
        .unwrap();
        let mut classes: Vec<Vec<usize>> = (0..r).map(|i| vec![i]).collect();
        for (i, v) in (r..n).enumerate() {
            classes[i + 1].push(v);
        }
        let x = PartiteSystem::new(x, classes).unwrap();
        validate_fhypergraph(f, x, vec![(0..r).collect(), second]).unwrap()
    }
}
