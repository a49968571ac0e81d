//! The n-th power of an F-hypergraph and its combinatorial-line copies.
//!
//! For `(X, Q)` the power `Y` has classes `V^i(Y) = (V^i(X))^n`; a crossing
//! r-set is an edge when each coordinate projection is an edge of `X`. The
//! distinguished copies are `lambda(F_1, .., F_n)` for sequences over `Q`, and
//! every combinatorial line of `Q^n` yields a strongly induced copy of `(X, Q)`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hales_jewett::{hj_search, HjBound, HjCube, Line};
use crate::hypergraph::Hypergraph;
use crate::oracle::{OracleConfig, Verdict};
use crate::partite::{fh_strongly_induced, validate_fhypergraph, FHypergraph, PartiteSystem};
use crate::system::SteinerSystem;
use crate::witness::{
    ArrowMode, PartiteFSystem, Provenance, Witness, WitnessCopy, WitnessProvider,
};

pub const DEFAULT_MAX_VERTICES: usize = 10_000;
pub const DEFAULT_MAX_EDGES: usize = 1_000_000;

/// Where the dimension `n` comes from.
#[derive(Clone, Copy, Debug)]
pub enum NSource {
    /// Least `n` with a decided Hales-Jewett number.
    Search(HjBound),
    /// Caller's `n`; the arrow is then checked by exhaustion when feasible.
    Given(usize),
    /// Caller's `n`, arrow taken on trust (structural tests only).
    AssumeHj(usize),
}

impl Default for NSource {
    fn default() -> Self {
        NSource::Search(HjBound::new(3))
    }
}

#[derive(Clone, Debug)]
pub struct PrelimConfig {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub oracle: OracleConfig,
}

impl Default for PrelimConfig {
    fn default() -> Self {
        PrelimConfig {
            max_vertices: DEFAULT_MAX_VERTICES,
            max_edges: DEFAULT_MAX_EDGES,
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCopy {
    pub line: Line,
    /// Image in `Y` of each vertex of `X`.
    pub map: Vec<usize>,
    /// Indices into the output copies of `lambda(eta(a))`, one per letter `a`.
    pub copies: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PowerWitness {
    pub input: FHypergraph,
    pub n: usize,
    pub output: FHypergraph,
    /// Coordinates in `X` of each vertex of `Y`.
    pub coords: Vec<Vec<usize>>,
    /// Output copy index of `lambda(p)` for each point rank `p` of `Q^n`.
    pub lambda: Vec<usize>,
    pub lines: Vec<LineCopy>,
    pub c: usize,
    pub mode: ArrowMode,
    pub provenance: Provenance,
}

/// Dense numbering of power vertices: class-major, then mixed radix over the
/// class-local indices with coordinate 0 most significant.
struct PowerIndex {
    n: usize,
    offset: Vec<usize>,
    size: Vec<usize>,
    local: Vec<usize>,
    class_of: Vec<usize>,
}

impl PowerIndex {
    fn new(x: &PartiteSystem, n: usize, max_vertices: usize) -> Result<Self> {
        let mut local = vec![0; x.graph().vertex_count()];
        let mut offset = Vec::with_capacity(x.k());
        let mut size = Vec::with_capacity(x.k());
        let mut total: usize = 0;
        for class in x.classes() {
            for (i, &v) in class.iter().enumerate() {
                local[v] = i;
            }
            let s = u32::try_from(n)
                .ok()
                .and_then(|n| class.len().checked_pow(n))
                .filter(|&s| s <= max_vertices)
                .ok_or_else(|| Error::size("power class", usize::MAX, max_vertices))?;
            offset.push(total);
            size.push(class.len());
            total += s;
            if total > max_vertices {
                return Err(Error::size("power system vertices", total, max_vertices));
            }
        }
        offset.push(total);
        Ok(PowerIndex {
            n,
            offset,
            size,
            local,
            class_of: x.class_of().to_vec(),
        })
    }

    fn total(&self) -> usize {
        *self.offset.last().unwrap()
    }

    /// Id of the class-`i` vertex with the given X-coordinates.
    fn id(&self, i: usize, coords: impl IntoIterator<Item = usize>) -> usize {
        let rank = coords
            .into_iter()
            .fold(0, |acc, v| acc * self.size[i] + self.local[v]);
        self.offset[i] + rank
    }

    fn class_labels(&self) -> Vec<usize> {
        (0..self.size.len())
            .flat_map(|i| std::iter::repeat_n(i, self.offset[i + 1] - self.offset[i]))
            .collect()
    }

    fn coords(&self, x: &PartiteSystem) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.total());
        for (i, class) in x.classes().iter().enumerate() {
            let count = self.offset[i + 1] - self.offset[i];
            for mut rank in 0..count {
                let mut c = vec![0; self.n];
                for slot in c.iter_mut().rev() {
                    *slot = class[rank % self.size[i]];
                    rank /= self.size[i];
                }
                out.push(c);
            }
        }
        debug_assert!(out.iter().flatten().all(|&v| v < self.class_of.len()));
        out
    }
}

/// Output system, coordinates, `lambda` and the vertex numbering.
type Power = (FHypergraph, Vec<Vec<usize>>, Vec<usize>, PowerIndex);

/// Builds `(Y, R)`, the coordinate map and `lambda`, without lines.
fn power(input: &FHypergraph, n: usize, config: &PrelimConfig) -> Result<Power> {
    if n == 0 {
        return Err(Error::Format("power dimension must be positive".into()));
    }
    let x = input.x();
    let idx = PowerIndex::new(x, n, config.max_vertices)?;
    let r = x.graph().r();

    // X edges grouped by their class set, each as a class-indexed lookup.
    let groups = x
        .graph()
        .edges()
        .iter()
        .into_group_map_by(|e| x.project(e));
    let mut edge_total: usize = 0;
    for es in groups.values() {
        let count = u32::try_from(n)
            .ok()
            .and_then(|n| es.len().checked_pow(n))
            .unwrap_or(usize::MAX);
        edge_total = edge_total.saturating_add(count);
    }
    if edge_total > config.max_edges {
        return Err(Error::size("power system edges", edge_total, config.max_edges));
    }
    let mut edges = Vec::with_capacity(edge_total);
    for (classes, es) in groups.iter().sorted_by_key(|(k, _)| (*k).clone()) {
        let by_class: Vec<Vec<usize>> = es
            .iter()
            .map(|e| {
                let mut m = vec![0; x.k()];
                for &v in e.iter() {
                    m[x.class_of()[v]] = v;
                }
                m
            })
            .collect();
        for choice in (0..n).map(|_| 0..by_class.len()).multi_cartesian_product() {
            let f: Vec<usize> = classes
                .iter()
                .map(|&i| idx.id(i, choice.iter().map(|&e| by_class[e][i])))
                .collect();
            debug_assert_eq!(f.len(), r);
            edges.push(f);
        }
    }
    let graph = Hypergraph::new(r, idx.total(), edges)?;
    let y = SteinerSystem::new(graph, x.system().t()).map_err(|e| {
        Error::ConstructionBug(format!("power system is not Steiner: {e}"))
    })?;
    let y = PartiteSystem::from_class_of(y, idx.class_labels(), x.k())?;

    let q = input.q();
    let k = x.k();
    let mut seqs: Vec<Vec<usize>> = Vec::new();
    if !q.is_empty() {
        let cube = HjCube::with_limit(q.len(), n, usize::MAX)?;
        for p in 0..cube.point_count() {
            let word = cube.unrank(p);
            seqs.push(
                (0..k)
                    .map(|i| idx.id(i, word.iter().map(|&a| q[a][i])))
                    .collect(),
            );
        }
    }
    let output = validate_fhypergraph(input.f().clone(), y, seqs.clone())
        .map_err(|e| Error::ConstructionBug(format!("power copies invalid: {e}")))?;
    let lambda: Vec<usize> = seqs
        .iter()
        .map(|m| {
            let img: Vec<usize> = m.iter().copied().sorted_unstable().collect();
            output.copy_index(&img).expect("copy present")
        })
        .collect();
    if lambda.iter().unique().count() != lambda.len() {
        return Err(Error::ConstructionBug("lambda is not injective".into()));
    }
    let coords = idx.coords(x);
    Ok((output, coords, lambda, idx))
}

/// The power system alone: line catalogue empty, arrow assumed.
pub fn build_power_system(
    input: &FHypergraph,
    n: usize,
    config: &PrelimConfig,
) -> Result<PowerWitness> {
    let (output, coords, lambda, _) = power(input, n, config)?;
    Ok(PowerWitness {
        input: input.clone(),
        n,
        output,
        coords,
        lambda,
        lines: Vec::new(),
        c: 0,
        mode: ArrowMode::AssumedArrow,
        provenance: Provenance::Assumed {
            reason: "power system only".into(),
        },
    })
}

impl PowerWitness {
    fn id_of(&self, coords: &[usize]) -> usize {
        // Coordinates determine the vertex; look it up by class and rank.
        let x = self.input.x();
        let i = x.class_of()[coords[0]];
        let size = x.classes()[i].len();
        let mut offset = 0;
        for class in &x.classes()[..i] {
            offset += class.len().pow(self.n as u32);
        }
        let rank = coords.iter().fold(0, |acc, &v| {
            acc * size + x.classes()[i].binary_search(&v).expect("vertex in class")
        });
        offset + rank
    }

    /// The line copy `phi_{C,g}` and its copy family.
    pub fn build_line_copy(&self, line: &Line) -> Result<LineCopy> {
        if line.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: line.n(),
            });
        }
        let q = self.input.q();
        if let Some(&a) = line.coords.iter().flatten().find(|&&a| a >= q.len()) {
            return Err(Error::LetterNotInAlphabet {
                letter: a,
                size: q.len(),
            });
        }
        let x = self.input.x();
        let map: Vec<usize> = (0..x.graph().vertex_count())
            .map(|v| {
                let i = x.class_of()[v];
                let coords: Vec<usize> = line
                    .coords
                    .iter()
                    .map(|g| g.map_or(v, |a| q[a][i]))
                    .collect();
                self.id_of(&coords)
            })
            .collect();
        let copies = if q.is_empty() {
            Vec::new()
        } else {
            let cube = HjCube::with_limit(q.len(), self.n, usize::MAX)?;
            (0..q.len())
                .map(|a| self.lambda[cube.rank(&line.embed(a, q.len()).expect("checked"))])
                .collect()
        };
        Ok(LineCopy {
            line: line.clone(),
            map,
            copies,
        })
    }

    /// The line copy as an F-hypergraph embedding check against `(Y, R)`.
    pub fn line_copy_is_strong(&self, lc: &LineCopy) -> Result<bool> {
        if !fh_strongly_induced(&self.input, &self.output, &lc.map)? {
            return Ok(false);
        }
        let expected: Vec<Vec<usize>> = self
            .input
            .q()
            .iter()
            .map(|c| c.iter().map(|&v| lc.map[v]).collect())
            .collect();
        Ok(lc
            .copies
            .iter()
            .zip(&expected)
            .all(|(&m, e)| &self.output.q()[m] == e))
    }

    /// Property (ii): every t-set shared by a line copy and an output copy
    /// lies in one of the line copy's own copies.
    pub fn verify_property_ii(&self) -> PropertyII {
        let t = self.output.x().system().t();
        let out = self.output.q();
        for (li, lc) in self.lines.iter().enumerate() {
            let mut inside = vec![false; self.output.vertex_count()];
            for &v in &lc.map {
                inside[v] = true;
            }
            for (ri, rc) in out.iter().enumerate() {
                let meet: Vec<usize> = rc
                    .iter()
                    .copied()
                    .filter(|&v| inside[v])
                    .sorted_unstable()
                    .collect();
                for x in meet.iter().copied().combinations(t) {
                    let covered = lc
                        .copies
                        .iter()
                        .any(|&m| x.iter().all(|v| out[m].contains(v)));
                    if !covered {
                        return PropertyII {
                            holds: false,
                            violation: Some((li, ri, x)),
                        };
                    }
                }
            }
        }
        PropertyII {
            holds: true,
            violation: None,
        }
    }

    /// The witness system `{(Z_{C,g}, L_{C,g})}`.
    pub fn to_witness(&self) -> Witness {
        Witness {
            host: PartiteFSystem::from_fh(&self.output),
            copies: self
                .lines
                .iter()
                .map(|l| WitnessCopy {
                    map: l.map.clone(),
                    members: l.copies.clone(),
                })
                .collect(),
            c: self.c,
            mode: self.mode,
            provenance: self.provenance.clone(),
        }
    }

    pub fn verify_arrow(&self, config: &OracleConfig) -> Result<Verdict> {
        self.to_witness().verify_arrow(config)
    }
}

/// Outcome of the property (ii) check; `violation` is
/// `(line index, output copy index, uncovered t-set)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyII {
    pub holds: bool,
    pub violation: Option<(usize, usize, Vec<usize>)>,
}

/// Builds the power system, its line copies, and settles the arrow claim.
pub fn build_prelim_witness(
    input: &FHypergraph,
    c: usize,
    source: NSource,
    config: &PrelimConfig,
) -> Result<PowerWitness> {
    if c == 0 {
        return Err(Error::Format("colour count must be positive".into()));
    }
    let qn = input.q().len();
    let (n, mut mode, mut provenance) = if qn == 0 {
        (
            1,
            ArrowMode::VerifiedArrow,
            Provenance::Trivial {
                reason: "no copies to colour".into(),
            },
        )
    } else {
        match source {
            NSource::Search(bound) => match hj_search(qn, c, &bound) {
                Ok(Some(n)) => (
                    n,
                    ArrowMode::VerifiedArrow,
                    Provenance::HjNumber { q: qn, c, n },
                ),
                Ok(None) | Err(_) => return Err(Error::HjUndecided { q: qn, c }),
            },
            NSource::Given(n) => (
                n,
                ArrowMode::AssumedArrow,
                Provenance::Assumed {
                    reason: "caller-supplied dimension, not yet checked".into(),
                },
            ),
            NSource::AssumeHj(n) => (
                n,
                ArrowMode::AssumedArrow,
                Provenance::Assumed {
                    reason: "assume-HJ mode".into(),
                },
            ),
        }
    };
    let mut w = build_power_system(input, n, config)?;
    let lines = if qn == 0 {
        vec![Line::diagonal(n)]
    } else {
        HjCube::new(qn, n)?.lines()
    };
    w.lines = lines
        .iter()
        .map(|l| w.build_line_copy(l))
        .collect::<Result<_>>()?;
    w.c = c;

    let check = w.verify_property_ii();
    if !check.holds {
        return Err(Error::ConstructionBug(format!(
            "property (ii) violated: {:?}",
            check.violation
        )));
    }

    let checkable = w.output.q().len() <= config.oracle.max_copies.unwrap_or_else(|| {
        crate::oracle::default_max_copies(c)
    });
    if checkable && !matches!(source, NSource::AssumeHj(_)) {
        match w.verify_arrow(&config.oracle)? {
            Verdict::Holds => {
                if matches!(source, NSource::Given(_)) && qn > 0 {
                    provenance = Provenance::Oracle {
                        items: w.output.q().len(),
                        c,
                    };
                }
                mode = ArrowMode::VerifiedArrow;
            }
            Verdict::Fails { coloring } => {
                if matches!(provenance, Provenance::HjNumber { .. } | Provenance::Trivial { .. }) {
                    return Err(Error::ConstructionBug(
                        "decided dimension but the arrow fails".into(),
                    ));
                }
                return Err(Error::ArrowRefuted {
                    context: format!("power witness with n = {n}, c = {c}"),
                    coloring,
                });
            }
        }
    }
    w.mode = mode;
    w.provenance = provenance;
    Ok(w)
}

/// Uses the power construction for every step of a partite construction.
#[derive(Clone, Debug, Default)]
pub struct PrelimProvider {
    pub source: NSource,
    pub config: PrelimConfig,
}

impl WitnessProvider for PrelimProvider {
    fn name(&self) -> String {
        "prelim".into()
    }

    fn provide(&self, target: &PartiteFSystem, f: &SteinerSystem, c: usize) -> Result<Witness> {
        let fh = target.to_fh(f)?;
        let w = build_prelim_witness(&fh, c, self.source, &self.config)?;
        Ok(w.to_witness())
    }
}
