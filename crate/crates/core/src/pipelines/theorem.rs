//! Ordered Steiner hosts with the strong partition arrow, built by a partite
//! construction over a base host with clean witnesses at every step.

use std::collections::HashSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::copies::CopySearch;
use crate::error::{Error, Result};
use crate::pictures::{
    extract_monochromatic, restrict_to_rho, run_partite_construction, ArrowInput, Construction,
    Picture, RunConfig, Step,
};
use crate::system::{steiner_violation, strong_under, OrderedSteinerSystem, SteinerSystem};

use super::base::{base_ramsey_witness, BaseConfig, BaseStrategy};
use super::clean::{CleanConfig, CleanProvider};

/// Colourings exhausted up to this many strong copies (two colours).
pub const EXHAUSTIVE_COPIES: usize = 20;
/// Sampled colourings beyond that.
pub const SAMPLED_COLORINGS: usize = 10_000;

#[derive(Clone, Debug, Default)]
pub struct TheoremConfig {
    pub base: BaseConfig,
    pub clean: CleanConfig,
    pub run: RunConfig,
}

/// Outcome of the per-step re-checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    /// The picture is a Steiner system.
    pub steiner: bool,
    /// Its pattern copies are strongly induced.
    pub copies_strong: bool,
    /// Its good copies are strongly induced.
    pub good_strong: bool,
    /// Canonical copies of the previous picture are strongly induced.
    pub canonical_strong: bool,
    /// Spine edges meeting a canonical copy in a t-set belong to it.
    pub spine_edges: bool,
    /// Canonical copies overlap only along strongly induced spine copies.
    pub overlaps_covered: bool,
}

impl StepReport {
    pub fn all(&self) -> bool {
        self.steiner
            && self.copies_strong
            && self.good_strong
            && self.canonical_strong
            && self.spine_edges
            && self.overlaps_covered
    }
}

fn picture_report(pi: &Picture, input: &ArrowInput) -> Result<StepReport> {
    let t = input.f.t();
    let mut copies_strong = true;
    for c in &pi.copies {
        copies_strong &= strong_under(input.f.graph(), &pi.graph, t, c)?;
    }
    let mut good_strong = true;
    for g in &pi.good {
        good_strong &= strong_under(&input.x.graph, &pi.graph, t, &g.map)?;
    }
    Ok(StepReport {
        steiner: steiner_violation(&pi.graph, t).is_none(),
        copies_strong,
        good_strong,
        canonical_strong: true,
        spine_edges: true,
        overlaps_covered: true,
    })
}

/// Re-checks one amalgamation step independently of how it was built.
pub fn check_step(
    old: &Picture,
    new: &Picture,
    step: &Step,
    input: &ArrowInput,
) -> Result<StepReport> {
    let t = input.f.t();
    let mut report = picture_report(new, input)?;
    for phi in &step.canonical {
        report.canonical_strong &= strong_under(&old.graph, &new.graph, t, phi)?;
    }
    let spine = restrict_to_rho(new, input, step.restriction.rho)?;
    let images: Vec<HashSet<usize>> = step
        .canonical
        .iter()
        .map(|phi| phi.iter().copied().collect())
        .collect();
    let old_edges: Vec<HashSet<Vec<usize>>> = step
        .canonical
        .iter()
        .map(|phi| {
            old.graph
                .edges()
                .iter()
                .map(|e| e.iter().map(|&v| phi[v]).sorted_unstable().collect())
                .collect()
        })
        .collect();
    for e in spine.target.graph.edges() {
        let e: Vec<usize> = e.iter().map(|&v| spine.vertices[v]).collect();
        for (img, edges) in images.iter().zip(&old_edges) {
            let meet = e.iter().filter(|v| img.contains(v)).count();
            if meet >= t && !edges.contains(&e) {
                report.spine_edges = false;
            }
        }
    }
    let mut local = vec![usize::MAX; new.vertex_count()];
    for (i, &v) in spine.vertices.iter().enumerate() {
        local[v] = i;
    }
    let strong_in_spine = |img: &[usize]| -> Result<bool> {
        if img.iter().any(|&v| local[v] == usize::MAX) {
            return Ok(false);
        }
        let m: Vec<usize> = img.iter().map(|&v| local[v]).collect();
        strong_under(input.f.graph(), &spine.target.graph, t, &m)
    };
    let copy_images: Vec<Vec<Vec<usize>>> = step
        .canonical
        .iter()
        .map(|phi| {
            old.copies
                .iter()
                .map(|c| c.iter().map(|&v| phi[v]).collect())
                .collect()
        })
        .collect();
    let covered = |a: usize, x: &[usize]| -> Result<bool> {
        for c in &copy_images[a] {
            if x.iter().all(|v| c.contains(v)) && strong_in_spine(c)? {
                return Ok(true);
            }
        }
        Ok(false)
    };
    'pairs: for (a, b) in (0..step.canonical.len()).tuple_combinations() {
        let shared: Vec<usize> = images[a].intersection(&images[b]).copied().sorted().collect();
        for x in shared.into_iter().combinations(t) {
            if !covered(a, &x)? || !covered(b, &x)? {
                report.overlaps_covered = false;
                break 'pairs;
            }
        }
    }
    Ok(report)
}

/// Renumbers picture vertices class by class, keeping construction order
/// inside a class. Returns the new id of every picture vertex.
pub fn final_order(pi: &Picture) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pi.vertex_count()).collect();
    order.sort_by_key(|&v| (pi.class_of[v], v));
    let mut rank = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    rank
}

#[derive(Clone, Debug)]
pub struct TheoremWitness {
    pub f: OrderedSteinerSystem,
    pub x: OrderedSteinerSystem,
    pub c: usize,
    pub construction: Construction,
    pub reports: Vec<StepReport>,
    pub z: OrderedSteinerSystem,
    /// Picture vertex to vertex of `z`.
    pub rank: Vec<usize>,
}

/// A strongly induced, order-preserving copy of `X_<` in `Z_<` whose strong
/// pattern copies all received `color`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonochromaticCopy {
    pub map: Vec<usize>,
    pub color: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongArrowCheck {
    pub copies: usize,
    pub exhaustive: bool,
    pub colorings: u64,
    pub failure: Option<Vec<usize>>,
}

impl TheoremWitness {
    pub fn verified(&self) -> bool {
        self.construction.verified()
    }

    /// Strongly induced order-preserving copies of `F_<` in `Z_<`, by image.
    pub fn strong_copies(&self) -> Result<Vec<Vec<usize>>> {
        let z = self.z.base();
        CopySearch::new(self.f.base().graph(), z.graph())
            .strong(z.t())
            .ordered(true)
            .distinct_images()
    }

    /// Extraction for a colouring of `items` (strong copies of `F_<` in
    /// `Z_<`, as from [`TheoremWitness::strong_copies`]).
    pub fn extract(&self, items: &[Vec<usize>], coloring: &[usize]) -> Result<MonochromaticCopy> {
        let index: std::collections::HashMap<Vec<usize>, usize> = items
            .iter()
            .enumerate()
            .map(|(i, m)| (m.iter().copied().sorted_unstable().collect(), i))
            .collect();
        let last = self.construction.last();
        let inner: Vec<usize> = last
            .copies
            .iter()
            .map(|c| {
                let img: Vec<usize> = c.iter().map(|&v| self.rank[v]).sorted_unstable().collect();
                index.get(&img).map(|&i| coloring[i]).ok_or_else(|| {
                    Error::ConstructionBug(format!("picture copy {c:?} is not strongly induced"))
                })
            })
            .collect::<Result<_>>()?;
        let ex = extract_monochromatic(&self.construction, &inner)?;
        Ok(MonochromaticCopy {
            map: ex.good.map.iter().map(|&v| self.rank[v]).collect(),
            color: ex.color,
        })
    }

    /// The returned copy is order-preserving, strongly induced, and every
    /// strong pattern copy inside it has its colour.
    pub fn check_copy(
        &self,
        items: &[Vec<usize>],
        coloring: &[usize],
        found: &MonochromaticCopy,
    ) -> Result<bool> {
        let z = self.z.base();
        if !found.map.windows(2).all(|w| w[0] < w[1]) {
            return Ok(false);
        }
        if !strong_under(self.x.base().graph(), z.graph(), z.t(), &found.map)? {
            return Ok(false);
        }
        let inside: HashSet<usize> = found.map.iter().copied().collect();
        Ok(items
            .iter()
            .zip(coloring)
            .filter(|(m, _)| m.iter().all(|v| inside.contains(v)))
            .all(|(_, &col)| col == found.color))
    }

    /// Exhausts two-colourings of the strong copies when there are at most
    /// [`EXHAUSTIVE_COPIES`], otherwise samples [`SAMPLED_COLORINGS`].
    pub fn verify_strong_arrow(&self, seed: u64) -> Result<StrongArrowCheck> {
        let items = self.strong_copies()?;
        let n = items.len();
        let exhaustive = self.c.checked_pow(n as u32).is_some_and(|total| {
            n <= EXHAUSTIVE_COPIES && total <= 1 << EXHAUSTIVE_COPIES
        });
        let mut colorings = 0u64;
        let mut check = |col: Vec<usize>| -> Result<Option<Vec<usize>>> {
            colorings += 1;
            match self.extract(&items, &col) {
                Ok(found) if self.check_copy(&items, &col, &found)? => Ok(None),
                Ok(_) | Err(Error::ArrowRefuted { .. }) => Ok(Some(col)),
                Err(e) => Err(e),
            }
        };
        let mut failure = None;
        if exhaustive {
            for col in (0..n).map(|_| 0..self.c).multi_cartesian_product() {
                if let Some(bad) = check(col)? {
                    failure = Some(bad);
                    break;
                }
            }
            if n == 0 {
                failure = check(vec![])?;
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..SAMPLED_COLORINGS {
                let col = (0..n).map(|_| rng.gen_range(0..self.c)).collect();
                if let Some(bad) = check(col)? {
                    failure = Some(bad);
                    break;
                }
            }
        }
        Ok(StrongArrowCheck {
            copies: n,
            exhaustive,
            colorings,
            failure,
        })
    }
}

/// The ordered system obtained from the last picture.
pub fn order_final(w: &TheoremWitness) -> OrderedSteinerSystem {
    w.z.clone()
}

/// Base host, partite construction with clean witnesses, per-step re-checks,
/// and the class-by-class ordering of the result.
pub fn build_theorem_witness(
    f: &OrderedSteinerSystem,
    x: &OrderedSteinerSystem,
    c: usize,
    strategy: &BaseStrategy,
    config: &TheoremConfig,
) -> Result<TheoremWitness> {
    let input = base_ramsey_witness(f, x, c, strategy, &config.base)?;
    let provider = CleanProvider {
        config: config.clean.clone(),
    };
    let run = run_partite_construction(&input, &provider, &config.run)?;
    let mut reports = vec![picture_report(&run.pictures[0], &input)?];
    for (s, step) in run.steps.iter().enumerate() {
        reports.push(check_step(&run.pictures[s], &run.pictures[s + 1], step, &input)?);
    }
    if let Some(bad) = reports.iter().position(|r| !r.all()) {
        return Err(Error::ConstructionBug(format!(
            "re-check failed after step {bad}: {:?}",
            reports[bad]
        )));
    }
    let last = run.last();
    let rank = final_order(last);
    let graph = last.graph.relabel(&rank, last.vertex_count())?;
    let z = OrderedSteinerSystem::new(SteinerSystem::new(graph, f.base().t())?);
    Ok(TheoremWitness {
        f: f.clone(),
        x: x.clone(),
        c,
        construction: run,
        reports,
        z,
        rank,
    })
}
