//! Colourings that block monochromatic targets, and the ordering property.
//!
//! Colour 0 is red, colour 1 is blue.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::copies::{CopyKind, CopySearch};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::system::{is_complete, is_homogeneous, uncovered_t_set, OrderedSteinerSystem, SteinerSystem};

pub const RED: usize = 0;
pub const BLUE: usize = 1;

/// Largest vertex count for which all orderings are walked.
pub const MAX_ORDERING_VERTICES: usize = 8;

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

/// The distinct ordered versions of `f`, by edge list.
pub fn ordered_versions(f: &SteinerSystem) -> Result<Vec<SteinerSystem>> {
    let n = f.vertex_count();
    if n > MAX_ORDERING_VERTICES {
        return Err(Error::size("vertices to order", n, MAX_ORDERING_VERTICES));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for perm in (0..n).permutations(n) {
        let g = f.relabel(&perm, n)?;
        if seen.insert(g.edges().to_vec()) {
            out.push(g);
        }
    }
    out.sort_by(|a, b| a.edges().cmp(b.edges()));
    Ok(out)
}

/// Images of the induced copies of `f` in `h`, sorted. These are the items a
/// colouring refers to.
pub fn colored_copies(h: &SteinerSystem, f: &SteinerSystem, ordered: bool) -> Result<Vec<Vec<usize>>> {
    let mut images: Vec<Vec<usize>> = CopySearch::new(f.graph(), h.graph())
        .ordered(ordered)
        .distinct_images()?
        .iter()
        .map(|m| sorted(m))
        .collect();
    images.sort();
    Ok(images)
}

/// `F_<` plus one edge through an uncovered t-set and `r - t` new vertices;
/// `marked[v]` is the position of vertex `v` of `F_<`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub system: OrderedSteinerSystem,
    pub marked: Vec<usize>,
}

/// Places the new vertices at the given positions of the extended order.
fn extend(f: &SteinerSystem, x: &[usize], new_at: &[usize]) -> Result<Extension> {
    let n = f.vertex_count() + new_at.len();
    let marked: Vec<usize> = (0..n).filter(|p| !new_at.contains(p)).collect();
    let mut edges: Vec<Vec<usize>> = f
        .edges()
        .iter()
        .map(|e| e.iter().map(|&v| marked[v]).collect())
        .collect();
    edges.push(x.iter().map(|&v| marked[v]).chain(new_at.iter().copied()).collect());
    let system = SteinerSystem::new(Hypergraph::new(f.r(), n, edges)?, f.t())?;
    Ok(Extension {
        system: OrderedSteinerSystem::new(system),
        marked,
    })
}

#[derive(Clone, Debug)]
pub struct IncompleteColoring {
    pub x: Vec<usize>,
    /// New vertices after all of `F_<`.
    pub f_prime: Extension,
    /// New vertices before all of `F_<`.
    pub f_second: Extension,
    /// `F'_<` followed by `F''_<`.
    pub g: OrderedSteinerSystem,
    pub copies: Vec<Vec<usize>>,
    pub coloring: Vec<usize>,
}

/// Red exactly for the copies of `F_<` that are the marked part of a copy of
/// `F'_<` in `h`.
pub fn incomplete_coloring_ordered(
    f: &OrderedSteinerSystem,
    h: &OrderedSteinerSystem,
) -> Result<IncompleteColoring> {
    let (fb, hb) = (f.base(), h.base());
    if fb.params() != hb.params() {
        return Err(Error::ParameterMismatch {
            pattern: fb.params(),
            host: hb.params(),
        });
    }
    if is_complete(fb) {
        return Err(Error::PatternComplete);
    }
    let (r, t) = fb.params();
    if t == r {
        return Err(Error::NoTwoExtensions);
    }
    let x = uncovered_t_set(fb).ok_or(Error::PatternComplete)?;
    let k = fb.vertex_count();
    let extra = r - t;
    let f_prime = extend(fb, &x, &(k..k + extra).collect::<Vec<_>>())?;
    let f_second = extend(fb, &x, &(0..extra).collect::<Vec<_>>())?;
    if f_prime == f_second {
        return Err(Error::NoTwoExtensions);
    }
    let g = OrderedSteinerSystem::new(f_prime.system.base().disjoint_union(f_second.system.base())?);

    let copies = colored_copies(hb, fb, true)?;
    let index: HashMap<&Vec<usize>, usize> = copies.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut coloring = vec![BLUE; copies.len()];
    CopySearch::new(f_prime.system.base().graph(), hb.graph())
        .ordered(true)
        .for_each(|m| {
            let part = sorted(&f_prime.marked.iter().map(|&p| m[p]).collect::<Vec<_>>());
            if let Some(&i) = index.get(&part) {
                coloring[i] = RED;
            }
            true
        });
    Ok(IncompleteColoring {
        x,
        f_prime,
        f_second,
        g,
        copies,
        coloring,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoMonoReport {
    pub holds: bool,
    pub targets: usize,
    /// First target copy whose pattern copies are monochromatic.
    pub monochromatic: Option<Vec<usize>>,
}

/// No induced copy of `g` in `h` has its `kind` copies of `f` (taken inside
/// the copy) monochromatic. `coloring` follows [`colored_copies`].
pub fn verify_no_mono(
    h: &SteinerSystem,
    g: &SteinerSystem,
    f: &SteinerSystem,
    coloring: &[usize],
    kind: CopyKind,
    ordered: bool,
) -> Result<NoMonoReport> {
    let items = colored_copies(h, f, ordered)?;
    if items.len() != coloring.len() {
        return Err(Error::DimensionMismatch {
            expected: items.len(),
            found: coloring.len(),
        });
    }
    let index: HashMap<&Vec<usize>, usize> = items.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let targets = CopySearch::new(g.graph(), h.graph())
        .ordered(ordered)
        .distinct_images()?;
    for target in &targets {
        let image = sorted(target);
        let sub = SteinerSystem::new(h.graph().induced(&image), h.t())?;
        let inner = CopySearch::new(f.graph(), sub.graph())
            .kind(kind, h.t())
            .ordered(ordered)
            .distinct_images()?;
        let colors: HashSet<usize> = inner
            .iter()
            .map(|m| {
                let img = sorted(&m.iter().map(|&v| image[v]).collect::<Vec<_>>());
                index
                    .get(&img)
                    .map(|&i| coloring[i])
                    .ok_or_else(|| Error::ConstructionBug("inner copy not coloured".into()))
            })
            .collect::<Result<_>>()?;
        if colors.len() <= 1 {
            return Ok(NoMonoReport {
                holds: false,
                targets: targets.len(),
                monochromatic: Some(target.clone()),
            });
        }
    }
    Ok(NoMonoReport {
        holds: true,
        targets: targets.len(),
        monochromatic: None,
    })
}

#[derive(Clone, Debug)]
pub struct NonHomogeneousColoring {
    pub f_prime: SteinerSystem,
    pub f_second: SteinerSystem,
    /// `F'_<` followed by `F''_<`, an ordering of two disjoint copies of `f`.
    pub k: OrderedSteinerSystem,
    pub copies: Vec<Vec<usize>>,
    pub coloring: Vec<usize>,
}

/// Orders `h` by vertex id and colours a copy of `f` red iff it is ordered
/// like the first ordered version of `f`.
pub fn nonhomogeneous_coloring(f: &SteinerSystem, h: &SteinerSystem) -> Result<NonHomogeneousColoring> {
    if is_homogeneous(f) {
        return Err(Error::PatternHomogeneous);
    }
    let versions = ordered_versions(f)?;
    let (f_prime, f_second) = (versions[0].clone(), versions[1].clone());
    let k = OrderedSteinerSystem::new(f_prime.disjoint_union(&f_second)?);
    let copies = colored_copies(h, f, false)?;
    let red: HashSet<Vec<usize>> = CopySearch::new(f_prime.graph(), h.graph())
        .ordered(true)
        .distinct_images()?
        .into_iter()
        .map(|m| sorted(&m))
        .collect();
    let coloring = copies
        .iter()
        .map(|c| if red.contains(c) { RED } else { BLUE })
        .collect();
    Ok(NonHomogeneousColoring {
        f_prime,
        f_second,
        k,
        copies,
        coloring,
    })
}

/// Every strongly induced ordered copy of `k` in `h` sees both colours among
/// the strongly induced copies of `f` inside it. Returns the number of such
/// copies, or the first offending one.
pub fn check_k_copies(
    h: &SteinerSystem,
    k: &OrderedSteinerSystem,
    f: &SteinerSystem,
    copies: &[Vec<usize>],
    coloring: &[usize],
) -> Result<std::result::Result<usize, Vec<usize>>> {
    let index: HashMap<&Vec<usize>, usize> = copies.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let ks = CopySearch::new(k.base().graph(), h.graph())
        .strong(h.t())
        .ordered(true)
        .maps()?;
    for m in &ks {
        let image = sorted(m);
        let sub = SteinerSystem::new(h.graph().induced(&image), h.t())?;
        let colors: HashSet<usize> = CopySearch::new(f.graph(), sub.graph())
            .strong(h.t())
            .distinct_images()?
            .iter()
            .filter_map(|c| {
                let img = sorted(&c.iter().map(|&v| image[v]).collect::<Vec<_>>());
                index.get(&img).map(|&i| coloring[i])
            })
            .collect();
        if colors.len() < 2 {
            return Ok(Err(m.clone()));
        }
    }
    Ok(Ok(ks.len()))
}

/// [`incomplete_coloring_ordered`] transported to unordered copies: order `h` and `f`
/// by vertex id, colour a copy red iff its ordered version is red.
pub fn incomplete_coloring_unordered(f: &SteinerSystem, h: &SteinerSystem) -> Result<IncompleteColoring> {
    let ordered = incomplete_coloring_ordered(
        &OrderedSteinerSystem::new(f.clone()),
        &OrderedSteinerSystem::new(h.clone()),
    )?;
    let red: HashSet<&Vec<usize>> = ordered
        .copies
        .iter()
        .zip(&ordered.coloring)
        .filter(|(_, &c)| c == RED)
        .map(|(m, _)| m)
        .collect();
    let copies = colored_copies(h, f, false)?;
    let coloring = copies
        .iter()
        .map(|c| if red.contains(c) { RED } else { BLUE })
        .collect();
    Ok(IncompleteColoring {
        copies,
        coloring,
        ..ordered
    })
}

/// `m * n! * ((m - 1) / m)^e`: below one, a random insertion of ordered
/// versions into a host with `e` edges on `n` vertices works.
pub fn ordering_bound(m: u64, n: u64, e: u64) -> f64 {
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    m as f64 * factorial * ((m - 1) as f64 / m as f64).powi(e as i32)
}

/// Checks that every ordering of `g` contains a strongly induced copy of
/// every ordered version of `k`, by walking all orderings.
pub fn verify_ordering_property(g: &SteinerSystem, k: &SteinerSystem) -> Result<bool> {
    let n = g.vertex_count();
    if n > MAX_ORDERING_VERTICES {
        return Err(Error::size("vertices to order", n, MAX_ORDERING_VERTICES));
    }
    let versions = ordered_versions(k)?;
    for perm in (0..n).permutations(n) {
        let ordered = g.relabel(&perm, n)?;
        for v in &versions {
            let found = CopySearch::new(v.graph(), ordered.graph())
                .strong(g.t())
                .ordered(true)
                .first();
            if found.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingBudget {
    pub seed: u64,
    /// Random insertions tried per host size.
    pub tries: usize,
    pub max_vertices: usize,
}

impl Default for OrderingBudget {
    fn default() -> Self {
        OrderingBudget {
            seed: 0,
            tries: 64,
            max_vertices: MAX_ORDERING_VERTICES,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrderingCertificate {
    pub g: SteinerSystem,
    pub seed: u64,
    /// All orderings were walked.
    pub exhaustive: bool,
}

/// Greedy packing of `block`-sets on `n` points pairwise sharing at most one
/// point, in lexicographic order.
pub fn greedy_pair_packing(n: usize, block: usize) -> Vec<Vec<usize>> {
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut out = Vec::new();
    for b in (0..n).combinations(block) {
        let pairs: Vec<(usize, usize)> = b.iter().copied().tuple_combinations().collect();
        if pairs.iter().all(|p| !used.contains(p)) {
            used.extend(pairs);
            out.push(b);
        }
    }
    out
}

/// A system `g` whose every ordering contains every ordered version of `k`
/// strongly induced: `k` itself when homogeneous, otherwise random ordered
/// versions of `k` inserted into the blocks of a greedy pair packing.
pub fn ordering_property_search(k: &SteinerSystem, budget: &OrderingBudget) -> Result<OrderingCertificate> {
    if is_homogeneous(k) {
        return Ok(OrderingCertificate {
            g: k.clone(),
            seed: budget.seed,
            exhaustive: k.vertex_count() <= MAX_ORDERING_VERTICES,
        });
    }
    let versions = ordered_versions(k)?;
    let vk = k.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for n in vk + 1..=budget.max_vertices.min(MAX_ORDERING_VERTICES) {
        let blocks = greedy_pair_packing(n, vk);
        if blocks.len() < 2 {
            continue;
        }
        for _ in 0..budget.tries {
            let mut edges = Vec::new();
            for b in &blocks {
                let v = versions.choose(&mut rng).expect("at least one version");
                edges.extend(v.edges().iter().map(|e| e.iter().map(|&i| b[i]).collect::<Vec<_>>()));
            }
            let g = SteinerSystem::new(Hypergraph::new(k.r(), n, edges)?, k.t())?;
            if verify_ordering_property(&g, k)? {
                return Ok(OrderingCertificate {
                    g,
                    seed: budget.seed,
                    exhaustive: true,
                });
            }
        }
    }
    Err(Error::SearchInfeasible(format!(
        "no system with the ordering property on at most {} vertices",
        budget.max_vertices
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ord(s: SteinerSystem) -> OrderedSteinerSystem {
        OrderedSteinerSystem::new(s)
    }

    fn host_with_both() -> SteinerSystem {
        let edges = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8], vec![0, 3, 6]];
        SteinerSystem::new(Hypergraph::new(3, 9, edges).unwrap(), 2).unwrap()
    }

    #[test]
    fn two_points_extend_two_ways() {
        let f = ord(fixtures::discrete(3, 2, 2));
        let h = ord(host_with_both());
        let col = incomplete_coloring_ordered(&f, &h).unwrap();
        assert_eq!(col.x, vec![0, 1]);
        assert_eq!(col.f_prime.marked, vec![0, 1]);
        assert_eq!(col.f_second.marked, vec![1, 2]);
        // As plain ordered systems both are a single edge.
        assert_eq!(col.f_prime.system, col.f_second.system);
        assert_ne!(col.f_prime, col.f_second);
        assert_eq!(col.copies.len(), 36);
        let red = col.coloring.iter().filter(|&&c| c == RED).count();
        assert_eq!(red, 4);
        let report = verify_no_mono(
            h.base(),
            col.g.base(),
            f.base(),
            &col.coloring,
            CopyKind::Induced,
            true,
        )
        .unwrap();
        assert!(report.holds);
        assert!(report.targets > 0);
    }

    #[test]
    fn incomplete_needs_room() {
        let h = ord(fixtures::fano());
        assert!(matches!(
            incomplete_coloring_ordered(&ord(fixtures::fano()), &h),
            Err(Error::PatternComplete)
        ));
        let g = ord(fixtures::cycle(4));
        assert!(matches!(
            incomplete_coloring_ordered(&ord(fixtures::p3()), &g),
            Err(Error::NoTwoExtensions)
        ));
    }

    #[test]
    fn no_mono_basics() {
        let h = fixtures::complete_graph(4);
        let f = fixtures::edge(2);
        let items = colored_copies(&h, &f, false).unwrap();
        let constant = vec![RED; items.len()];
        let k3 = fixtures::complete_graph(3);
        let r = verify_no_mono(&h, &k3, &f, &constant, CopyKind::Induced, false).unwrap();
        assert!(!r.holds);
        let k5 = fixtures::complete_graph(5);
        let r = verify_no_mono(&h, &k5, &f, &constant, CopyKind::Induced, false).unwrap();
        assert!(r.holds);
        assert_eq!(r.targets, 0);
    }

    #[test]
    fn path_versions() {
        let v = ordered_versions(&fixtures::p3()).unwrap();
        assert_eq!(v.len(), 3);
        let col = nonhomogeneous_coloring(&fixtures::p3(), &fixtures::cycle(6)).unwrap();
        assert_ne!(col.f_prime, col.f_second);
        assert_eq!(col.copies.len(), 6);
        assert!(col.coloring.contains(&RED));
        assert!(matches!(
            nonhomogeneous_coloring(&fixtures::edge(3), &fixtures::fano()),
            Err(Error::PatternHomogeneous)
        ));
    }

    #[test]
    fn k_copies_see_both_colours() {
        // Two disjoint paths ordered as K itself.
        let p = fixtures::p3();
        let col0 = nonhomogeneous_coloring(&p, &p).unwrap();
        let h = col0.k.base().clone();
        let col = nonhomogeneous_coloring(&p, &h).unwrap();
        let outcome = check_k_copies(&h, &col.k, &p, &col.copies, &col.coloring).unwrap();
        assert_eq!(outcome, Ok(1));
    }

    #[test]
    fn bound_arithmetic() {
        assert!((ordering_bound(2, 4, 6) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_ordering_property() {
        for k in [fixtures::edge(2), fixtures::complete_graph(3), fixtures::discrete(3, 2, 3)] {
            let cert = ordering_property_search(&k, &OrderingBudget::default()).unwrap();
            assert_eq!(cert.g, k);
            assert!(verify_ordering_property(&cert.g, &k).unwrap());
        }
        // Any system with an edge works for a single edge.
        assert!(verify_ordering_property(&fixtures::p3(), &fixtures::edge(2)).unwrap());
        assert!(!verify_ordering_property(&fixtures::discrete(2, 2, 3), &fixtures::edge(2)).unwrap());
    }

    #[test]
    fn packing_is_linear() {
        let blocks = greedy_pair_packing(7, 3);
        assert_eq!(blocks.len(), 7);
        for (a, b) in blocks.iter().tuple_combinations() {
            assert!(a.iter().filter(|v| b.contains(v)).count() <= 1);
        }
    }

    #[test]
    fn unordered_incomplete_colouring() {
        let f = fixtures::discrete(3, 2, 2);
        let h = host_with_both();
        let col = incomplete_coloring_unordered(&f, &h).unwrap();
        assert_eq!(col.copies.len(), 36);
        assert_eq!(col.coloring.iter().filter(|&&c| c == RED).count(), 4);
    }

    #[test]
    fn path_has_small_ordering_system() {
        let k = fixtures::p3();
        let budget = OrderingBudget {
            seed: 1,
            tries: 16,
            max_vertices: 7,
        };
        let cert = ordering_property_search(&k, &budget).unwrap();
        assert!(cert.exhaustive);
        assert_eq!(cert.g.vertex_count(), 6);
        assert!(verify_ordering_property(&cert.g, &k).unwrap());
        let two = k.disjoint_union(&k).unwrap();
        assert!(matches!(
            ordering_property_search(&two, &budget),
            Err(Error::SearchInfeasible(_))
        ));
    }
}
