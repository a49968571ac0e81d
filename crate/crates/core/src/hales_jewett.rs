//! Hales-Jewett cubes `Q^n` over the alphabet `Q = {0, .., q-1}` and their
//! combinatorial lines.
//!
//! Points are ranked in mixed radix with coordinate 0 most significant, so rank
//! order is lexicographic order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{ColoringProblem, OracleConfig, Verdict};

pub const DEFAULT_MAX_POINTS: usize = 1 << 20;
pub const DEFAULT_MAX_NODES: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HjCube {
    q: usize,
    n: usize,
}

impl HjCube {
    pub fn new(q: usize, n: usize) -> Result<Self> {
        Self::with_limit(q, n, DEFAULT_MAX_POINTS)
    }

    /// Rejects cubes whose line count exceeds `limit` (lines outnumber points
    /// once q >= 1).
    pub fn with_limit(q: usize, n: usize, limit: usize) -> Result<Self> {
        if q == 0 || n == 0 {
            return Err(Error::Format(format!(
                "cube needs q >= 1 and n >= 1, got q = {q}, n = {n}"
            )));
        }
        let lines = line_count(q, n);
        if lines.is_none_or(|l| l > limit) {
            return Err(Error::size("Hales-Jewett lines", lines.unwrap_or(usize::MAX), limit));
        }
        Ok(HjCube { q, n })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn point_count(&self) -> usize {
        self.q.pow(self.n as u32)
    }

    pub fn rank(&self, point: &[usize]) -> usize {
        point.iter().fold(0, |acc, &x| acc * self.q + x)
    }

    pub fn unrank(&self, mut rank: usize) -> Vec<usize> {
        let mut p = vec![0; self.n];
        for slot in p.iter_mut().rev() {
            *slot = rank % self.q;
            rank /= self.q;
        }
        p
    }

    /// All lines, ordered as words over `{moving, 0, .., q-1}` with moving first.
    pub fn lines(&self) -> Vec<Line> {
        let base = self.q + 1;
        let total = base.pow(self.n as u32);
        (0..total)
            .filter_map(|mut w| {
                let mut coords = vec![None; self.n];
                for slot in coords.iter_mut().rev() {
                    let d = w % base;
                    w /= base;
                    *slot = d.checked_sub(1);
                }
                coords.contains(&None).then_some(Line { coords })
            })
            .collect()
    }

    /// Point ranks of `line` in letter order.
    pub fn line_points(&self, line: &Line) -> Vec<usize> {
        (0..self.q)
            .map(|a| self.rank(&line.embed_unchecked(a)))
            .collect()
    }

    pub fn find_monochromatic_line(&self, coloring: &[usize]) -> Result<Option<(Line, usize)>> {
        if coloring.len() != self.point_count() {
            return Err(Error::DimensionMismatch {
                expected: self.point_count(),
                found: coloring.len(),
            });
        }
        Ok(self.lines().into_iter().find_map(|l| {
            let pts = self.line_points(&l);
            let col = coloring[pts[0]];
            pts.iter().all(|&p| coloring[p] == col).then_some((l, col))
        }))
    }

    pub fn coloring_problem(&self) -> ColoringProblem {
        let lines = self.lines();
        ColoringProblem::new(
            self.point_count(),
            lines.iter().map(|l| {
                let mut pts = self.line_points(l);
                pts.sort_unstable();
                pts
            }).collect(),
        )
    }
}

/// `(q+1)^n - q^n`, or `None` on overflow.
pub fn line_count(q: usize, n: usize) -> Option<usize> {
    let n = u32::try_from(n).ok()?;
    Some((q + 1).checked_pow(n)? - q.checked_pow(n)?)
}

/// A combinatorial line: `coords[h]` is `Some(g(h))` on constant coordinates
/// and `None` on moving ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Line {
    pub coords: Vec<Option<usize>>,
}

impl Line {
    pub fn new(coords: Vec<Option<usize>>) -> Result<Self> {
        if !coords.contains(&None) {
            return Err(Error::Format("a line needs a moving coordinate".into()));
        }
        Ok(Line { coords })
    }

    pub fn diagonal(n: usize) -> Self {
        Line {
            coords: vec![None; n],
        }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn constant_coords(&self) -> Vec<usize> {
        (0..self.n()).filter(|&h| self.coords[h].is_some()).collect()
    }

    pub fn moving_coords(&self) -> Vec<usize> {
        (0..self.n()).filter(|&h| self.coords[h].is_none()).collect()
    }

    /// The point with `letter` on every moving coordinate.
    pub fn embed(&self, letter: usize, q: usize) -> Result<Vec<usize>> {
        if letter >= q {
            return Err(Error::LetterNotInAlphabet { letter, size: q });
        }
        if let Some(&bad) = self.coords.iter().flatten().find(|&&g| g >= q) {
            return Err(Error::LetterNotInAlphabet { letter: bad, size: q });
        }
        Ok(self.embed_unchecked(letter))
    }

    fn embed_unchecked(&self, letter: usize) -> Vec<usize> {
        self.coords.iter().map(|g| g.unwrap_or(letter)).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HjBound {
    pub max_n: usize,
    pub max_nodes: u64,
    pub max_points: usize,
}

impl HjBound {
    pub fn new(max_n: usize) -> Self {
        HjBound {
            max_n,
            max_nodes: DEFAULT_MAX_NODES,
            max_points: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HjCertificate {
    pub q: usize,
    pub c: usize,
    pub n: usize,
    /// `true` when every c-colouring of `Q^n` has a monochromatic line.
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<usize>>,
}

/// Decides whether every `c`-colouring of `Q^n` has a monochromatic line.
pub fn hj_verify(q: usize, c: usize, n: usize, bound: &HjBound) -> Result<HjCertificate> {
    let cube = HjCube::new(q, n)?;
    if cube.point_count() > bound.max_points {
        return Err(Error::size("cube points", cube.point_count(), bound.max_points));
    }
    let config = OracleConfig {
        max_copies: Some(cube.point_count()),
        max_nodes: Some(bound.max_nodes),
        jobs: 1,
    };
    let verdict = cube.coloring_problem().solve(c, &config)?;
    Ok(match verdict {
        Verdict::Holds => HjCertificate {
            q,
            c,
            n,
            verdict: true,
            counterexample: None,
        },
        Verdict::Fails { coloring } => HjCertificate {
            q,
            c,
            n,
            verdict: false,
            counterexample: Some(coloring),
        },
    })
}

/// Least `n <= max_n` with `Q^n -> line` for `c` colours, if decided.
pub fn hj_number(q: usize, c: usize, max_n: usize) -> Option<usize> {
    hj_search(q, c, &HjBound::new(max_n)).ok().flatten()
}

/// Like [`hj_number`] but reports why the search stopped: `Ok(None)` when
/// every `n <= max_n` was refuted, `Err` when a cube was too large to decide.
pub fn hj_search(q: usize, c: usize, bound: &HjBound) -> Result<Option<usize>> {
    if q == 0 || c == 0 {
        return Err(Error::Format("q and c must be positive".into()));
    }
    for n in 1..=bound.max_n {
        if hj_verify(q, c, n, bound)?.verdict {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
