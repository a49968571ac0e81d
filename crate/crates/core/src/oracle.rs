//! Exhaustive verification of partition arrows.
//!
//! Every arrow reduces to a hypergraph 2-colouring style question: items (the
//! coloured copies) and targets (sets of items). The arrow holds iff every
//! c-colouring of the items makes some target monochromatic; a failing
//! colouring is a counterexample.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copies::{CopyKind, CopySearch};
use crate::error::{Error, Result};
use crate::system::SteinerSystem;

/// Default cap on the number of coloured items for two colours.
pub const DEFAULT_MAX_COPIES: usize = 24;

/// Item cap giving roughly the same search space as [`DEFAULT_MAX_COPIES`] at `c = 2`.
pub fn default_max_copies(c: usize) -> usize {
    if c <= 2 {
        DEFAULT_MAX_COPIES
    } else {
        (DEFAULT_MAX_COPIES as f64 / (c as f64).log2()).floor() as usize
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub max_copies: Option<usize>,
    pub max_nodes: Option<u64>,
    pub jobs: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_copies: None,
            max_nodes: None,
            jobs: 1,
        }
    }
}

impl OracleConfig {
    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    fn copy_cap(&self, c: usize) -> usize {
        self.max_copies.unwrap_or_else(|| default_max_copies(c))
    }
}

/// Items `0..items` and the targets that must not all be monochromatic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringProblem {
    pub items: usize,
    pub targets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails { coloring: Vec<usize> },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

impl ColoringProblem {
    pub fn new(items: usize, targets: Vec<Vec<usize>>) -> Self {
        ColoringProblem { items, targets }
    }

    /// Index of the first target monochromatic under `coloring`.
    pub fn monochromatic_target(&self, coloring: &[usize]) -> Option<usize> {
        self.targets.iter().position(|t| {
            t.first()
                .is_none_or(|&a| t.iter().all(|&i| coloring[i] == coloring[a]))
        })
    }

    /// Searches for a colouring with no monochromatic target.
    pub fn solve(&self, c: usize, config: &OracleConfig) -> Result<Verdict> {
        if c == 0 {
            return Err(Error::Format("colour count must be positive".into()));
        }
        let cap = config.copy_cap(c);
        if self.items > cap {
            return Err(Error::size("coloured copies", self.items, cap));
        }
        if self.targets.iter().any(Vec::is_empty) {
            return Ok(Verdict::Holds);
        }
        let search = Dfs::new(self, c, config.max_nodes);
        let prefixes = search.prefixes(config.jobs);
        let found = if config.jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(config.jobs)
                .build()
                .map_err(|e| Error::SearchInfeasible(e.to_string()))?;
            pool.install(|| {
                prefixes
                    .par_iter()
                    .map(|p| search.run_from(p))
                    .find_first(|r| !matches!(r, Ok(None)))
            })
        } else {
            prefixes
                .iter()
                .map(|p| search.run_from(p))
                .find(|r| !matches!(r, Ok(None)))
        };
        match found {
            None => Ok(Verdict::Holds),
            Some(Ok(Some(coloring))) => Ok(Verdict::Fails { coloring }),
            Some(Ok(None)) => unreachable!(),
            Some(Err(e)) => Err(e),
        }
    }

    /// Random colourings; returns the first one with no monochromatic target.
    pub fn sample(&self, c: usize, samples: usize, seed: u64) -> Option<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).find_map(|_| {
            let col: Vec<usize> = (0..self.items).map(|_| rng.gen_range(0..c)).collect();
            self.monochromatic_target(&col).is_none().then_some(col)
        })
    }
}

struct Dfs<'a> {
    problem: &'a ColoringProblem,
    c: usize,
    by_last: Vec<Vec<usize>>,
    nodes: AtomicU64,
    max_nodes: Option<u64>,
    aborted: AtomicBool,
}

impl<'a> Dfs<'a> {
    fn new(problem: &'a ColoringProblem, c: usize, max_nodes: Option<u64>) -> Self {
        let mut by_last = vec![Vec::new(); problem.items];
        for (ti, t) in problem.targets.iter().enumerate() {
            let last = *t.iter().max().expect("targets are nonempty");
            by_last[last].push(ti);
        }
        Dfs {
            problem,
            c,
            by_last,
            nodes: AtomicU64::new(0),
            max_nodes,
            aborted: AtomicBool::new(false),
        }
    }

    /// Canonical partial colourings (first use of each colour in order)
    /// deep enough to give every worker some subtrees.
    fn prefixes(&self, jobs: usize) -> Vec<Vec<usize>> {
        let mut level: Vec<Vec<usize>> = vec![Vec::new()];
        if jobs <= 1 {
            return level;
        }
        let want = jobs * 8;
        while level.len() < want && level[0].len() < self.problem.items {
            let mut next = Vec::new();
            for p in &level {
                let top = p.iter().max().map_or(0, |m| m + 1).min(self.c - 1);
                for col in 0..=top {
                    let mut q = p.clone();
                    q.push(col);
                    if self.ok_at(&q, q.len() - 1) {
                        next.push(q);
                    }
                }
            }
            if next.is_empty() {
                return next;
            }
            level = next;
        }
        level
    }

    fn ok_at(&self, col: &[usize], i: usize) -> bool {
        self.by_last[i].iter().all(|&ti| {
            let t = &self.problem.targets[ti];
            t.iter().any(|&j| col[j] != col[t[0]])
        })
    }

    fn run_from(&self, prefix: &[usize]) -> Result<Option<Vec<usize>>> {
        let mut col = prefix.to_vec();
        let used = prefix.iter().max().map_or(0, |m| m + 1);
        if self.step(&mut col, used) {
            return Ok(Some(col));
        }
        if self.aborted.load(Ordering::Relaxed) {
            return Err(Error::SearchInfeasible(format!(
                "node budget {} exhausted",
                self.max_nodes.unwrap_or(0)
            )));
        }
        Ok(None)
    }

    fn step(&self, col: &mut Vec<usize>, used: usize) -> bool {
        let i = col.len();
        if i == self.problem.items {
            return true;
        }
        if let Some(max) = self.max_nodes {
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= max {
                self.aborted.store(true, Ordering::Relaxed);
            }
        }
        if self.aborted.load(Ordering::Relaxed) {
            return false;
        }
        let top = used.min(self.c - 1);
        for x in 0..=top {
            col.push(x);
            if self.ok_at(col, i) && self.step(col, used.max(x + 1)) {
                return true;
            }
            col.pop();
        }
        false
    }
}

/// Copies of `pattern` in `host` as lists of image sets.
fn copy_images(
    pattern: &SteinerSystem,
    host: &SteinerSystem,
    kind: CopyKind,
    ordered: bool,
    limit: Option<usize>,
) -> Result<Vec<Vec<usize>>> {
    let mut search = CopySearch::new(pattern, host).kind(kind, host.t()).ordered(ordered);
    if let Some(l) = limit {
        search = search.limit(l);
    }
    Ok(search
        .distinct_images()?
        .into_iter()
        .map(|m| {
            let mut m = m;
            m.sort_unstable();
            m
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowReport {
    pub colored: Vec<Vec<usize>>,
    pub targets: usize,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// Builds the colouring problem for `h -> (g)^f`: items are the `kind_f`
/// copies of `f` in `h`; each `kind_g` copy of `g` contributes the items
/// whose image lies inside it.
pub fn arrow_problem(
    h: &SteinerSystem,
    g: &SteinerSystem,
    f: &SteinerSystem,
    kind_g: CopyKind,
    kind_f: CopyKind,
    ordered: bool,
    max_items: usize,
) -> Result<(Vec<Vec<usize>>, ColoringProblem)> {
    for p in [g, f] {
        if p.params() != h.params() {
            return Err(Error::ParameterMismatch {
                pattern: p.params(),
                host: h.params(),
            });
        }
    }
    let items = copy_images(f, h, kind_f, ordered, Some(max_items))?;
    let hosts = copy_images(g, h, kind_g, ordered, None)?;
    let targets = hosts
        .iter()
        .map(|gi| {
            items
                .iter()
                .enumerate()
                .filter(|(_, fi)| fi.iter().all(|v| gi.binary_search(v).is_ok()))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let problem = ColoringProblem::new(items.len(), targets);
    Ok((items, problem))
}

/// Decides `h -> (g)^f_c` by exhausting colourings of the `f`-copies.
#[allow(clippy::too_many_arguments)]
pub fn arrows(
    h: &SteinerSystem,
    g: &SteinerSystem,
    f: &SteinerSystem,
    c: usize,
    kind_g: CopyKind,
    kind_f: CopyKind,
    ordered: bool,
    config: &OracleConfig,
) -> Result<ArrowReport> {
    let cap = config.copy_cap(c);
    let (colored, problem) = arrow_problem(h, g, f, kind_g, kind_f, ordered, cap)?;
    let verdict = problem.solve(c, config)?;
    Ok(ArrowReport {
        colored,
        targets: problem.targets.len(),
        verdict,
    })
}

/// Decides an arrow for a witness system given directly as a coloured family
/// of `items` members and, per witness copy, the members it contains.
pub fn arrows_system(
    items: usize,
    copies: Vec<Vec<usize>>,
    c: usize,
    config: &OracleConfig,
) -> Result<Verdict> {
    ColoringProblem::new(items, copies).solve(c, config)
}
