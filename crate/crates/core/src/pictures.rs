//! Pictures over a host F-system `(Y, R)`, amalgamation along one host copy,
//! and the partite construction with constructive extraction.
//!
//! A copy of the pattern is identified by its image set. Copies of `F` in a
//! picture are stored as maps normalised so that `psi(map[a]) = R[rho][a]`,
//! which makes them class-indexed once restricted to the classes of `F_rho`.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{check_injective, Hypergraph};
use crate::oracle::{arrows_system, OracleConfig, Verdict};
use crate::partite::is_crossing;
use crate::system::{induced_under, SteinerSystem};
use crate::witness::{
    identity_witness, ArrowMode, PartiteFSystem, Provenance, Witness, WitnessCopy,
    WitnessProvider,
};

/// Default cap on picture vertex counts.
pub const DEFAULT_MAX_VERTICES: usize = 10_000;

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&v| outer[v]).collect()
}

/// An r-uniform hypergraph (not necessarily Steiner) with distinguished
/// induced copies of the pattern, deduplicated by image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSystem {
    pub graph: Hypergraph,
    pub copies: Vec<Vec<usize>>,
}

impl FSystem {
    pub fn new(f: &Hypergraph, graph: Hypergraph, copies: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(copies.len());
        for copy in copies {
            if !induced_under(f, &graph, &copy)? {
                return Err(Error::CopyNotIsomorphic { copy });
            }
            if seen.insert(sorted(&copy)) {
                kept.push(copy);
            }
        }
        Ok(FSystem {
            graph,
            copies: kept,
        })
    }

    fn image_index(&self) -> HashMap<Vec<usize>, usize> {
        self.copies
            .iter()
            .enumerate()
            .map(|(i, c)| (sorted(c), i))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsystemKind {
    /// `X <= Y` and the copies map into the host copies.
    Semi,
    /// Additionally no other host copy lies inside the image.
    Induced,
}

/// How `a` sits in `b` under `map`, if at all.
pub fn subsystem_kind(a: &FSystem, b: &FSystem, map: &[usize]) -> Result<Option<SubsystemKind>> {
    if !induced_under(&a.graph, &b.graph, map)? {
        return Ok(None);
    }
    let host = b.image_index();
    for q in &a.copies {
        if !host.contains_key(&sorted(&compose(map, q))) {
            return Ok(None);
        }
    }
    let mut inside = vec![false; b.graph.vertex_count()];
    for &v in map {
        inside[v] = true;
    }
    let traced = b
        .copies
        .iter()
        .filter(|c| c.iter().all(|&v| inside[v]))
        .count();
    Ok(Some(if traced == a.copies.len() {
        SubsystemKind::Induced
    } else {
        SubsystemKind::Semi
    }))
}

/// The data a partite construction starts from: the pattern, the target
/// `(X, Q)`, a host `(Y, R)` on `0..m`, and semi-induced copies of `(X, Q)`
/// in `(Y, R)` claimed to satisfy the arrow.
#[derive(Clone, Debug)]
pub struct ArrowInput {
    pub f: SteinerSystem,
    pub x: FSystem,
    pub y: FSystem,
    /// Sorted by image; `members[j]` is the host copy carrying `x.copies[j]`.
    pub witness: Vec<WitnessCopy>,
    pub c: usize,
    pub mode: ArrowMode,
    pub provenance: Provenance,
}

impl ArrowInput {
    /// Validates the pieces and fixes the enumerations of `R` and of the
    /// witness copies (both by image).
    pub fn new(
        f: SteinerSystem,
        x: FSystem,
        mut y: FSystem,
        maps: Vec<Vec<usize>>,
        c: usize,
        mode: ArrowMode,
        provenance: Provenance,
    ) -> Result<Self> {
        if c == 0 {
            return Err(Error::Format("colour count must be positive".into()));
        }
        if x.graph.r() != f.r() || y.graph.r() != f.r() {
            return Err(Error::ParameterMismatch {
                pattern: f.params(),
                host: (y.graph.r(), f.t()),
            });
        }
        if let Some(bad) = y.copies.iter().find(|m| !m.windows(2).all(|w| w[0] < w[1])) {
            return Err(Error::InvalidPicture(format!(
                "host copy {bad:?} is not order-preserving"
            )));
        }
        y.copies.sort_by_key(|m| sorted(m));
        let host = y.image_index();
        let mut witness = Vec::with_capacity(maps.len());
        let mut seen = HashSet::new();
        for map in maps {
            check_injective(&map, y.graph.vertex_count())?;
            if map.len() != x.graph.vertex_count() {
                return Err(Error::MapShape {
                    len: map.len(),
                    expected: x.graph.vertex_count(),
                    host: y.graph.vertex_count(),
                });
            }
            if !induced_under(&x.graph, &y.graph, &map)? {
                return Err(Error::InvalidPicture(format!(
                    "witness copy {map:?} is not induced"
                )));
            }
            let members = x
                .copies
                .iter()
                .map(|q| {
                    host.get(&sorted(&compose(&map, q))).copied().ok_or_else(|| {
                        Error::InvalidPicture(format!(
                            "witness copy {map:?} carries a pattern copy outside the host family"
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if seen.insert((sorted(&map), sorted(&members))) {
                witness.push(WitnessCopy { map, members });
            }
        }
        witness.sort_by_key(|w| sorted(&w.map));
        Ok(ArrowInput {
            f,
            x,
            y,
            witness,
            c,
            mode,
            provenance,
        })
    }

    pub fn m(&self) -> usize {
        self.y.graph.vertex_count()
    }

    /// Exhausts colourings of the host copies.
    pub fn verify_base_arrow(&self, config: &OracleConfig) -> Result<Verdict> {
        arrows_system(
            self.y.copies.len(),
            self.witness.iter().map(|w| w.members.clone()).collect(),
            self.c,
            config,
        )
    }

    /// First witness copy whose members are monochromatic under a colouring
    /// of the host copies.
    pub fn select(&self, coloring: &[usize]) -> Option<usize> {
        self.witness.iter().position(|w| {
            w.members
                .first()
                .is_none_or(|&a| w.members.iter().all(|&m| coloring[m] == coloring[a]))
        })
    }
}

/// A copy of `(X, Q)` in a picture, projecting onto witness copy `source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodCopy {
    pub map: Vec<usize>,
    pub source: usize,
    /// `members[j]` indexes the picture copy carrying `x.copies[j]`.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Picture {
    pub graph: Hypergraph,
    /// The projection onto host vertices.
    pub class_of: Vec<usize>,
    /// Copies of `F`, sorted by image, normalised against `R`.
    pub copies: Vec<Vec<usize>>,
    /// `copy_rho[i]` is the host copy that copy `i` projects onto.
    pub copy_rho: Vec<usize>,
    pub good: Vec<GoodCopy>,
}

impl Picture {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Vertices of each host class.
    pub fn classes(&self, m: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); m];
        for (v, &c) in self.class_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn copy_index(&self) -> HashMap<Vec<usize>, usize> {
        self.copies
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect()
    }

    /// Sorts copies by image and rewrites good-copy members accordingly.
    fn from_parts(
        graph: Hypergraph,
        class_of: Vec<usize>,
        copies: Vec<(Vec<usize>, usize)>,
        good: Vec<(Vec<usize>, usize, Vec<Vec<usize>>)>,
    ) -> Picture {
        let mut copies = copies;
        copies.sort_by_key(|(m, _)| sorted(m));
        copies.dedup();
        let index: HashMap<&Vec<usize>, usize> =
            copies.iter().enumerate().map(|(i, (m, _))| (m, i)).collect();
        let good = good
            .into_iter()
            .map(|(map, source, members)| GoodCopy {
                members: members.iter().map(|m| index[m]).collect(),
                map,
                source,
            })
            .collect();
        let (copies, copy_rho) = copies.into_iter().unzip();
        Picture {
            graph,
            class_of,
            copies,
            copy_rho,
            good,
        }
    }
}

/// The map `a -> vertex of image in class rho_map[a]`.
fn normalise(image: &[usize], class_of: &[usize], rho_map: &[usize]) -> Option<Vec<usize>> {
    rho_map
        .iter()
        .map(|&j| image.iter().copied().find(|&v| class_of[v] == j))
        .collect()
}

/// One vertex-disjoint good copy per witness copy.
pub fn build_picture_zero(input: &ArrowInput) -> Result<Picture> {
    let nx = input.x.graph.vertex_count();
    let total = nx * input.witness.len();
    let mut class_of = Vec::with_capacity(total);
    let mut edges = Vec::new();
    let mut copies = Vec::new();
    let mut good = Vec::new();
    for (y, w) in input.witness.iter().enumerate() {
        let off = y * nx;
        class_of.extend(w.map.iter().copied());
        for e in input.x.graph.edges() {
            edges.push(e.iter().map(|&v| off + v).collect::<Vec<_>>());
        }
        let shifted: Vec<usize> = (0..nx).map(|v| off + v).collect();
        let mut members = Vec::new();
        for (q, &rho) in input.x.copies.iter().zip(&w.members) {
            let image = compose(&shifted, q);
            let map = normalise(&image, &class_of, &input.y.copies[rho]).ok_or_else(|| {
                Error::ConstructionBug("pattern copy does not project onto its member".into())
            })?;
            copies.push((map.clone(), rho));
            members.push(map);
        }
        good.push((shifted, y, members));
    }
    let graph = Hypergraph::new(input.f.r(), total, edges)?;
    Ok(Picture::from_parts(graph, class_of, copies, good))
}

/// `(Z_rho, S_rho)` with the bookkeeping back into the picture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub rho: usize,
    pub target: PartiteFSystem,
    /// Target vertex to picture vertex (increasing).
    pub vertices: Vec<usize>,
    /// Target copy to picture copy.
    pub copies: Vec<usize>,
}

/// Classes of `F_rho`, edges projecting onto edges of `F_rho`, and the
/// copies projecting onto `F_rho`.
pub fn restrict_to_rho(pi: &Picture, input: &ArrowInput, rho: usize) -> Result<Restriction> {
    let rho_map = input.y.copies.get(rho).ok_or(Error::IndexOutOfRange {
        index: rho,
        len: input.y.copies.len(),
    })?;
    let k = rho_map.len();
    let mut slot = vec![None; input.m()];
    for (i, &j) in rho_map.iter().enumerate() {
        slot[j] = Some(i);
    }
    let vertices: Vec<usize> = (0..pi.vertex_count())
        .filter(|&v| slot[pi.class_of[v]].is_some())
        .collect();
    let mut local = vec![usize::MAX; pi.vertex_count()];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    let class_of: Vec<usize> = vertices
        .iter()
        .map(|&v| slot[pi.class_of[v]].expect("spine vertex"))
        .collect();
    let edges: Vec<Vec<usize>> = pi
        .graph
        .edges()
        .iter()
        .filter(|e| {
            let Some(proj) = e
                .iter()
                .map(|&v| slot[pi.class_of[v]])
                .collect::<Option<Vec<usize>>>()
            else {
                return false;
            };
            input.f.has_edge(&sorted(&proj))
        })
        .map(|e| e.iter().map(|&v| local[v]).collect())
        .collect();
    let graph = Hypergraph::new(input.f.r(), vertices.len(), edges)?;
    let (copies, maps): (Vec<usize>, Vec<Vec<usize>>) = (0..pi.copies.len())
        .filter(|&i| pi.copy_rho[i] == rho)
        .map(|i| (i, pi.copies[i].iter().map(|&v| local[v]).collect()))
        .unzip();
    Ok(Restriction {
        rho,
        target: PartiteFSystem {
            graph,
            class_of,
            k,
            copies: maps,
        },
        vertices,
        copies,
    })
}

/// `pi` amalgamated along `witness`; also returns the canonical copy maps
/// `V(pi) -> V(result)`, one per witness copy.
///
/// Host vertices of `W` keep their ids; an off-spine vertex `v` of `pi` in
/// canonical copy `w` gets id `|W| + rank(v) * |copies| + w`.
pub fn amalgamate(
    pi: &Picture,
    input: &ArrowInput,
    restriction: &Restriction,
    witness: &Witness,
    max_vertices: usize,
) -> Result<(Picture, Vec<Vec<usize>>)> {
    if witness.host.k != restriction.target.k {
        return Err(Error::WitnessShapeMismatch(format!(
            "host has {} classes, target {}",
            witness.host.k, restriction.target.k
        )));
    }
    witness.check_shape(&restriction.target)?;
    let rho_map = &input.y.copies[restriction.rho];
    let nw_host = witness.host.vertex_count();
    let copies_w = witness.copies.len();
    let mut local = vec![None; pi.vertex_count()];
    for (i, &v) in restriction.vertices.iter().enumerate() {
        local[v] = Some(i);
    }
    let off: Vec<usize> = (0..pi.vertex_count()).filter(|&v| local[v].is_none()).collect();
    let n = nw_host + off.len() * copies_w;
    if n > max_vertices {
        return Err(Error::size("picture vertices", n, max_vertices));
    }
    let mut class_of = vec![0; n];
    for u in 0..nw_host {
        class_of[u] = rho_map[witness.host.class_of[u]];
    }
    let mut off_rank = vec![usize::MAX; pi.vertex_count()];
    for (i, &v) in off.iter().enumerate() {
        off_rank[v] = i;
        for w in 0..copies_w {
            class_of[nw_host + i * copies_w + w] = pi.class_of[v];
        }
    }
    let canonical: Vec<Vec<usize>> = witness
        .copies
        .iter()
        .enumerate()
        .map(|(w, wc)| {
            (0..pi.vertex_count())
                .map(|v| match local[v] {
                    Some(i) => wc.map[i],
                    None => nw_host + off_rank[v] * copies_w + w,
                })
                .collect()
        })
        .collect();

    let mut edges = Vec::new();
    let mut copies = Vec::new();
    let mut good = Vec::new();
    let mut seen_good = HashSet::new();
    for phi in &canonical {
        edges.extend(pi.graph.edges().iter().map(|e| compose(phi, e)));
        copies.extend(
            pi.copies
                .iter()
                .zip(&pi.copy_rho)
                .map(|(c, &rho)| (compose(phi, c), rho)),
        );
        for g in &pi.good {
            let map = compose(phi, &g.map);
            if seen_good.insert((sorted(&map), g.source)) {
                let members = g.members.iter().map(|&m| compose(phi, &pi.copies[m])).collect();
                good.push((map, g.source, members));
            }
        }
    }
    let graph = Hypergraph::new(input.f.r(), n, edges)?;
    Ok((Picture::from_parts(graph, class_of, copies, good), canonical))
}

/// Checks the picture axioms: crossing edges projecting onto host edges,
/// crossing induced copies projecting onto their host copy, and good copies
/// that are crossing induced subsystems isomorphic to their witness copy via
/// the projection.
pub fn validate_picture(pi: &Picture, input: &ArrowInput) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidPicture(msg));
    let m = input.m();
    if pi.class_of.len() != pi.vertex_count() || pi.class_of.iter().any(|&c| c >= m) {
        return bad("projection is not a map into the host".into());
    }
    for e in pi.graph.edges() {
        if !is_crossing(&pi.class_of, e) {
            return bad(format!("edge {e:?} is not crossing"));
        }
        if !input.y.graph.has_edge(&sorted(&compose(&pi.class_of, e))) {
            return bad(format!("edge {e:?} does not project onto a host edge"));
        }
    }
    if pi.copies.len() != pi.copy_rho.len() {
        return bad("copy bookkeeping has the wrong length".into());
    }
    for (c, &rho) in pi.copies.iter().zip(&pi.copy_rho) {
        if !is_crossing(&pi.class_of, c) || !induced_under(&input.f, &pi.graph, c)? {
            return bad(format!("copy {c:?} is not a crossing induced copy"));
        }
        if compose(&pi.class_of, c) != input.y.copies[rho] {
            return bad(format!("copy {c:?} does not project onto host copy {rho}"));
        }
    }
    let images: HashMap<Vec<usize>, usize> = pi
        .copies
        .iter()
        .enumerate()
        .map(|(i, c)| (sorted(c), i))
        .collect();
    if images.len() != pi.copies.len() {
        return bad("two copies share an image".into());
    }
    for g in &pi.good {
        let Some(w) = input.witness.get(g.source) else {
            return bad(format!("good copy has unknown source {}", g.source));
        };
        check_injective(&g.map, pi.vertex_count())?;
        if compose(&pi.class_of, &g.map) != w.map {
            return bad(format!("good copy {:?} does not project onto its source", g.map));
        }
        if !induced_under(&input.x.graph, &pi.graph, &g.map)? {
            return bad(format!("good copy {:?} is not induced", g.map));
        }
        if g.members.len() != input.x.copies.len() {
            return bad(format!("good copy {:?} has the wrong member count", g.map));
        }
        for (j, q) in input.x.copies.iter().enumerate() {
            let img = sorted(&compose(&g.map, q));
            if images.get(&img) != Some(&g.members[j]) {
                return bad(format!("good copy {:?} misses member {j}", g.map));
            }
        }
        let inside: HashSet<usize> = g.map.iter().copied().collect();
        let traced = pi
            .copies
            .iter()
            .filter(|c| c.iter().all(|v| inside.contains(v)))
            .count();
        if traced != g.members.len() {
            return bad(format!("good copy {:?} is not an induced subsystem", g.map));
        }
    }
    Ok(())
}

/// `phi[old] <= new` as pictures: classes kept, `(Z, S)` an induced
/// subsystem, and good copies inside the image exactly the images of the
/// old good copies.
pub fn check_subpicture(old: &Picture, new: &Picture, phi: &[usize]) -> Result<()> {
    let bad = |msg: &str| Err(Error::InvalidPicture(format!("sub-picture: {msg}")));
    check_injective(phi, new.vertex_count())?;
    if (0..old.vertex_count()).any(|v| new.class_of[phi[v]] != old.class_of[v]) {
        return bad("classes not preserved");
    }
    if !induced_under(&old.graph, &new.graph, phi)? {
        return bad("hypergraph not induced");
    }
    let mut inside = vec![false; new.vertex_count()];
    for &v in phi {
        inside[v] = true;
    }
    let within = |m: &Vec<usize>| m.iter().all(|&v| inside[v]);
    let expect: BTreeSet<Vec<usize>> = old.copies.iter().map(|c| sorted(&compose(phi, c))).collect();
    let found: BTreeSet<Vec<usize>> = new
        .copies
        .iter()
        .filter(|c| within(c))
        .map(|c| sorted(c))
        .collect();
    if expect != found {
        return bad("copy family is not traced");
    }
    let expect: BTreeSet<(Vec<usize>, usize)> = old
        .good
        .iter()
        .map(|g| (sorted(&compose(phi, &g.map)), g.source))
        .collect();
    let found: BTreeSet<(Vec<usize>, usize)> = new
        .good
        .iter()
        .filter(|g| within(&g.map))
        .map(|g| (sorted(&g.map), g.source))
        .collect();
    if expect != found {
        return bad("good copies are not traced");
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Step {
    pub restriction: Restriction,
    pub witness: Witness,
    pub canonical: Vec<Vec<usize>>,
    pub provider: String,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub input: ArrowInput,
    /// `pictures[0]` is picture zero; `pictures[s + 1]` results from `steps[s]`.
    pub pictures: Vec<Picture>,
    pub steps: Vec<Step>,
}

impl Construction {
    pub fn last(&self) -> &Picture {
        self.pictures.last().expect("picture zero is always present")
    }

    /// Every arrow in the chain was verified.
    pub fn verified(&self) -> bool {
        self.input.mode == ArrowMode::VerifiedArrow
            && self
                .steps
                .iter()
                .all(|s| s.witness.mode == ArrowMode::VerifiedArrow)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub max_vertices: usize,
    /// Use the identity witness when it suffices instead of the provider.
    pub trivial_shortcut: bool,
    /// Re-check picture axioms and the sub-picture property after each step.
    pub validate: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_vertices: DEFAULT_MAX_VERTICES,
            trivial_shortcut: true,
            validate: true,
        }
    }
}

fn dedup_witness(mut w: Witness) -> Witness {
    let mut seen = HashSet::new();
    w.copies.retain(|c| seen.insert(c.map.clone()));
    w
}

/// Runs one amalgamation per host copy, in order.
pub fn run_partite_construction(
    input: &ArrowInput,
    provider: &dyn WitnessProvider,
    config: &RunConfig,
) -> Result<Construction> {
    let zero = build_picture_zero(input)?;
    if config.validate {
        validate_picture(&zero, input)?;
    }
    let mut pictures = vec![zero];
    let mut steps = Vec::with_capacity(input.y.copies.len());
    for rho in 0..input.y.copies.len() {
        let pi = pictures.last().expect("nonempty");
        let restriction = restrict_to_rho(pi, input, rho)?;
        let shortcut = config
            .trivial_shortcut
            .then(|| identity_witness(&restriction.target, input.c))
            .flatten();
        let (witness, name) = match shortcut {
            Some(w) => (w, "identity".to_string()),
            None => {
                let w = provider
                    .provide(&restriction.target, &input.f, input.c)
                    .map_err(|e| match e {
                        e if e.is_infeasible() => e,
                        e @ (Error::ArrowRefuted { .. } | Error::ConstructionBug(_)) => e,
                        e => Error::ProviderFailure(format!(
                            "{} at step {rho}: {e}",
                            provider.name()
                        )),
                    })?;
                (w, provider.name())
            }
        };
        let witness = dedup_witness(witness);
        let (next, canonical) =
            amalgamate(pi, input, &restriction, &witness, config.max_vertices)?;
        if config.validate {
            validate_picture(&next, input)?;
            for phi in &canonical {
                check_subpicture(pi, &next, phi)?;
            }
        }
        pictures.push(next);
        steps.push(Step {
            restriction,
            witness,
            canonical,
            provider: name,
        });
    }
    Ok(Construction {
        input: input.clone(),
        pictures,
        steps,
    })
}

/// A good copy of the final picture found for a colouring, with the choices
/// made along the way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub good: GoodCopy,
    /// Colour assigned to each host copy.
    pub phi: Vec<usize>,
    /// Selected witness copy per step.
    pub path: Vec<usize>,
    pub color: usize,
}

/// Walks the construction backwards choosing, at every step, a canonical
/// copy on which the copies over the current host copy are monochromatic,
/// then applies the base arrow to the induced colouring of the host copies.
pub fn extract_monochromatic(construction: &Construction, coloring: &[usize]) -> Result<Extraction> {
    let input = &construction.input;
    let last = construction.last();
    if coloring.len() != last.copies.len() {
        return Err(Error::DimensionMismatch {
            expected: last.copies.len(),
            found: coloring.len(),
        });
    }
    if let Some(&bad) = coloring.iter().find(|&&x| x >= input.c) {
        return Err(Error::LetterNotInAlphabet {
            letter: bad,
            size: input.c,
        });
    }
    let index = last.copy_index();
    let mut view: Vec<usize> = (0..last.vertex_count()).collect();
    let mut phi = vec![0; input.y.copies.len()];
    let mut path = vec![0; construction.steps.len()];
    let refuted = |context: String| Error::ArrowRefuted {
        context,
        coloring: coloring.to_vec(),
    };
    for (s, step) in construction.steps.iter().enumerate().rev() {
        let host_coloring: Vec<usize> = step
            .witness
            .host
            .copies
            .iter()
            .map(|p| index.get(&compose(&view, p)).map_or(0, |&i| coloring[i]))
            .collect();
        let w = step
            .witness
            .select(&host_coloring)
            .ok_or_else(|| refuted(format!("step {s} witness has no monochromatic copy")))?;
        path[s] = w;
        phi[step.restriction.rho] = step.witness.copies[w]
            .members
            .first()
            .map_or(0, |&m| host_coloring[m]);
        view = compose(&view, &step.canonical[w]);
    }
    let y = input
        .select(&phi)
        .ok_or_else(|| refuted("base arrow has no monochromatic copy".into()))?;
    let zero = &construction.pictures[0];
    let g0 = &zero.good[y];
    let members: Vec<usize> = g0
        .members
        .iter()
        .map(|&m| {
            index
                .get(&compose(&view, &zero.copies[m]))
                .copied()
                .ok_or_else(|| Error::ConstructionBug("traced copy is missing".into()))
        })
        .collect::<Result<_>>()?;
    let color = members.first().map_or(0, |&m| coloring[m]);
    if members.iter().any(|&m| coloring[m] != color) {
        if construction.verified() {
            return Err(Error::ConstructionBug(
                "verified chain produced a non-monochromatic copy".into(),
            ));
        }
        return Err(refuted("extracted copy is not monochromatic".into()));
    }
    Ok(Extraction {
        good: GoodCopy {
            map: compose(&view, &g0.map),
            source: y,
            members,
        },
        phi,
        path,
        color,
    })
}

/// Small construction inputs shared by tests and the command line.
pub mod fixtures {
    use super::*;
    use crate::fixtures as base;

    fn verified(
        f: SteinerSystem,
        x: FSystem,
        y: FSystem,
        maps: Vec<Vec<usize>>,
        c: usize,
    ) -> ArrowInput {
        let mut input = ArrowInput::new(
            f,
            x,
            y,
            maps,
            c,
            ArrowMode::AssumedArrow,
            Provenance::Assumed {
                reason: "pending".into(),
            },
        )
        .expect("valid fixture");
        let verdict = input
            .verify_base_arrow(&OracleConfig::default())
            .expect("small");
        if verdict.holds() {
            input.mode = ArrowMode::VerifiedArrow;
            input.provenance = Provenance::Oracle {
                items: input.y.copies.len(),
                c,
            };
        }
        input
    }

    /// `F` an r-edge, `X` an edge plus an isolated vertex, host with two
    /// disjoint edges; the second edge carries two witness copies.
    pub fn edge_plus_point(r: usize, c: usize) -> ArrowInput {
        let f = base::edge(r);
        let x = FSystem::new(
            f.graph(),
            Hypergraph::new(r, r + 1, vec![(0..r).collect::<Vec<_>>()]).unwrap(),
            vec![(0..r).collect()],
        )
        .unwrap();
        let m = 2 * r + 3;
        let y = FSystem::new(
            f.graph(),
            Hypergraph::new(r, m, vec![(0..r).collect::<Vec<_>>(), (r..2 * r).collect()])
                .unwrap(),
            vec![(0..r).collect(), (r..2 * r).collect()],
        )
        .unwrap();
        let with = |base: usize, extra: usize| -> Vec<usize> {
            (base..base + r).chain(std::iter::once(extra)).collect()
        };
        let maps = vec![with(0, 2 * r), with(r, 2 * r + 1), with(r, 2 * r + 2)];
        verified(f, x, y, maps, c)
    }

    /// Graph edge pattern, `X` a path on three vertices with both edges
    /// distinguished, host a star with three leaves.
    pub fn path_in_star(c: usize) -> ArrowInput {
        let f = base::edge(2);
        let x = FSystem::new(
            f.graph(),
            base::p3().into_graph(),
            vec![vec![0, 1], vec![1, 2]],
        )
        .unwrap();
        let star = Hypergraph::new(2, 4, vec![vec![0, 1], vec![0, 2], vec![0, 3]]).unwrap();
        let y = FSystem::new(f.graph(), star, vec![vec![0, 1], vec![0, 2], vec![0, 3]]).unwrap();
        let maps = vec![vec![1, 0, 2], vec![1, 0, 3], vec![2, 0, 3]];
        verified(f, x, y, maps, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prelim::PrelimProvider;
    use itertools::Itertools;

    struct Refusing;

    impl WitnessProvider for Refusing {
        fn name(&self) -> String {
            "refusing".into()
        }

        fn provide(&self, _: &PartiteFSystem, _: &SteinerSystem, _: usize) -> Result<Witness> {
            Err(Error::Format("no".into()))
        }
    }

    fn all_colorings(n: usize, c: usize) -> impl Iterator<Item = Vec<usize>> {
        (0..n).map(move |_| 0..c).multi_cartesian_product()
    }

    #[test]
    fn picture_zero_is_disjoint() {
        let input = fixtures::edge_plus_point(2, 2);
        let pz = build_picture_zero(&input).unwrap();
        validate_picture(&pz, &input).unwrap();
        assert_eq!(pz.vertex_count(), 9);
        assert_eq!(pz.copies.len(), 3);
        let sets: Vec<HashSet<usize>> = pz
            .good
            .iter()
            .map(|g| g.map.iter().copied().collect())
            .collect();
        for (a, b) in sets.iter().tuple_combinations() {
            assert!(a.is_disjoint(b));
        }
        // Members 1 and 2 overlap in the host but not in picture zero.
        assert_eq!(input.witness[1].map[..2], input.witness[2].map[..2]);
    }

    #[test]
    fn restriction_of_picture_zero() {
        let input = fixtures::edge_plus_point(2, 2);
        let pz = build_picture_zero(&input).unwrap();
        let r0 = restrict_to_rho(&pz, &input, 0).unwrap();
        assert_eq!(r0.vertices, vec![0, 1]);
        assert_eq!(r0.target.graph.edges(), &[vec![0, 1]]);
        assert_eq!(r0.target.copies, vec![vec![0, 1]]);
        let r1 = restrict_to_rho(&pz, &input, 1).unwrap();
        assert_eq!(r1.vertices, vec![3, 4, 6, 7]);
        assert_eq!(r1.target.copies.len(), 2);
        assert_eq!(r1.target.class_of, vec![0, 1, 0, 1]);
        assert!(matches!(
            restrict_to_rho(&pz, &input, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn identity_amalgamation_is_isomorphic() {
        let input = fixtures::edge_plus_point(2, 2);
        let pz = build_picture_zero(&input).unwrap();
        let r0 = restrict_to_rho(&pz, &input, 0).unwrap();
        let w = identity_witness(&r0.target, 2).unwrap();
        let (next, canon) = amalgamate(&pz, &input, &r0, &w, 100).unwrap();
        assert_eq!(next.vertex_count(), pz.vertex_count());
        assert_eq!(next.graph.edge_count(), pz.graph.edge_count());
        assert_eq!(next.copies.len(), pz.copies.len());
        assert_eq!(next.good.len(), pz.good.len());
        check_subpicture(&pz, &next, &canon[0]).unwrap();
    }

    #[test]
    fn off_spine_classes_multiply() {
        let input = fixtures::edge_plus_point(2, 2);
        let run =
            run_partite_construction(&input, &PrelimProvider::default(), &RunConfig::default())
                .unwrap();
        let step = &run.steps[1];
        assert_eq!(step.witness.copies.len(), 5);
        let before = run.pictures[1].classes(input.m());
        let after = run.pictures[2].classes(input.m());
        for j in [0, 1, 4, 5, 6] {
            assert_eq!(after[j].len(), before[j].len() * 5);
        }
        assert_eq!(run.last().vertex_count(), 33);
        assert_eq!(run.last().copies.len(), 9);
        assert_eq!(run.last().good.len(), 15);
        // Canonical copies share exactly what their witness copies share.
        for (a, b) in (0..5).tuple_combinations() {
            let sa: HashSet<usize> = step.canonical[a].iter().copied().collect();
            let sb: HashSet<usize> = step.canonical[b].iter().copied().collect();
            let wa: HashSet<usize> = step.witness.copies[a].map.iter().copied().collect();
            let wb: HashSet<usize> = step.witness.copies[b].map.iter().copied().collect();
            assert_eq!(&sa & &sb, &wa & &wb);
        }
    }

    #[test]
    fn extraction_exhaustive() {
        for r in [2, 3] {
            let input = fixtures::edge_plus_point(r, 2);
            let run = run_partite_construction(
                &input,
                &PrelimProvider::default(),
                &RunConfig::default(),
            )
            .unwrap();
            assert!(run.verified());
            let last = run.last();
            assert_eq!(last.copies.len(), 9);
            for col in all_colorings(last.copies.len(), 2) {
                let ex = extract_monochromatic(&run, &col).unwrap();
                assert!(last.good.iter().any(|g| g.map == ex.good.map));
                assert!(ex.good.members.iter().all(|&m| col[m] == ex.color));
            }
        }
    }

    #[test]
    fn single_colour_runs_with_identities() {
        let input = fixtures::path_in_star(1);
        assert_eq!(input.mode, ArrowMode::VerifiedArrow);
        let run = run_partite_construction(&input, &Refusing, &RunConfig::default()).unwrap();
        assert_eq!(run.pictures.len(), 4);
        assert!(run.steps.iter().all(|s| s.provider == "identity"));
        let n = run.last().copies.len();
        let ex = extract_monochromatic(&run, &vec![0; n]).unwrap();
        assert_eq!(ex.color, 0);
    }

    #[test]
    fn provider_errors_are_wrapped() {
        let input = fixtures::path_in_star(2);
        assert_eq!(input.mode, ArrowMode::VerifiedArrow);
        let err = run_partite_construction(&input, &Refusing, &RunConfig::default()).unwrap_err();
        assert!(matches!(err, Error::ProviderFailure(_)));
    }

    #[test]
    fn no_host_copies_gives_picture_zero() {
        let f = crate::fixtures::edge(2);
        let x = FSystem::new(f.graph(), Hypergraph::empty(2, 1), vec![]).unwrap();
        let y = FSystem::new(f.graph(), Hypergraph::empty(2, 2), vec![]).unwrap();
        let input = ArrowInput::new(
            f,
            x,
            y,
            vec![vec![0], vec![1]],
            2,
            ArrowMode::VerifiedArrow,
            Provenance::Trivial {
                reason: "nothing to colour".into(),
            },
        )
        .unwrap();
        let run = run_partite_construction(&input, &Refusing, &RunConfig::default()).unwrap();
        assert_eq!(run.pictures.len(), 1);
        let ex = extract_monochromatic(&run, &[]).unwrap();
        assert_eq!(ex.good.source, 0);
    }

    #[test]
    fn unverified_base_arrow_is_refuted() {
        // Two host edges, one witness copy per edge, target needs both.
        let f = crate::fixtures::edge(2);
        let two = Hypergraph::new(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let x = FSystem::new(f.graph(), two.clone(), vec![vec![0, 1], vec![1, 2]]).unwrap();
        let y = FSystem::new(f.graph(), two, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let input = ArrowInput::new(
            f,
            x,
            y,
            vec![vec![0, 1, 2]],
            2,
            ArrowMode::AssumedArrow,
            Provenance::Assumed {
                reason: "test".into(),
            },
        )
        .unwrap();
        assert!(!input.verify_base_arrow(&OracleConfig::default()).unwrap().holds());
        let run = run_partite_construction(&input, &Refusing, &RunConfig::default()).unwrap();
        assert!(!run.verified());
        let err = extract_monochromatic(&run, &[0, 1]).unwrap_err();
        assert!(matches!(err, Error::ArrowRefuted { .. }));
        assert!(extract_monochromatic(&run, &[1, 1]).is_ok());
    }

    #[test]
    fn witness_shape_is_checked() {
        let input = fixtures::edge_plus_point(2, 2);
        let pz = build_picture_zero(&input).unwrap();
        let r1 = restrict_to_rho(&pz, &input, 1).unwrap();
        let mut w = identity_witness(&r1.target, 1).unwrap();
        w.copies[0].map.swap(0, 1);
        assert!(matches!(
            amalgamate(&pz, &input, &r1, &w, 100),
            Err(Error::WitnessShapeMismatch(_))
        ));
    }

    #[test]
    fn size_cap() {
        let input = fixtures::edge_plus_point(2, 2);
        let cfg = RunConfig {
            max_vertices: 20,
            ..RunConfig::default()
        };
        let err =
            run_partite_construction(&input, &PrelimProvider::default(), &cfg).unwrap_err();
        assert!(matches!(err, Error::SizeLimitExceeded { .. }));
    }

    #[test]
    fn semi_versus_induced() {
        let f = crate::fixtures::edge(2);
        let p = crate::fixtures::p3().into_graph();
        let a = FSystem::new(f.graph(), p.clone(), vec![vec![0, 1]]).unwrap();
        let b = FSystem::new(f.graph(), p.clone(), vec![vec![0, 1], vec![1, 2]]).unwrap();
        let id = [0, 1, 2];
        assert_eq!(subsystem_kind(&a, &b, &id).unwrap(), Some(SubsystemKind::Semi));
        assert_eq!(subsystem_kind(&b, &b, &id).unwrap(), Some(SubsystemKind::Induced));
        assert_eq!(subsystem_kind(&b, &a, &id).unwrap(), None);
    }

    #[test]
    fn non_monotone_host_copy_rejected() {
        let f = crate::fixtures::edge(2);
        let g = Hypergraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        let y = FSystem::new(f.graph(), g.clone(), vec![vec![1, 0]]).unwrap();
        let x = FSystem::new(f.graph(), g, vec![]).unwrap();
        let err = ArrowInput::new(
            f,
            x,
            y,
            vec![],
            2,
            ArrowMode::AssumedArrow,
            Provenance::Assumed { reason: "t".into() },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidPicture(_)));
    }
}
