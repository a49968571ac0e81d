//! Ordered hosts `Y_<` with `Y_< -> (X_<)^{F_<}_c`, packaged as construction
//! inputs.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::copies::CopySearch;
use crate::error::{Error, Result};
use crate::hypergraph::{binomial, Hypergraph};
use crate::oracle::{default_max_copies, OracleConfig, Verdict};
use crate::pictures::{ArrowInput, FSystem};
use crate::system::{OrderedSteinerSystem, SteinerSystem};
use crate::witness::{ArrowMode, Provenance};

/// Cap on hosts produced by the classical strategy.
pub const MAX_CLASSICAL_VERTICES: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum BaseStrategy {
    /// Classical if it applies, otherwise exhaustive search.
    Auto,
    ExhaustiveSearch,
    Classical,
    /// A host given by the caller; accepted only once the arrow is verified.
    UserSupplied { host: Vec<Vec<usize>>, vertex_count: usize },
}

#[derive(Clone, Debug)]
pub struct BaseConfig {
    /// Largest host tried by exhaustive search.
    pub max_host_vertices: usize,
    /// Hosts with at most this many possible edges are enumerated edge set by
    /// edge set; larger ones only as complete hypergraphs.
    pub max_subset_edges: usize,
    pub oracle: OracleConfig,
}

impl Default for BaseConfig {
    fn default() -> Self {
        BaseConfig {
            max_host_vertices: 6,
            max_subset_edges: 10,
            oracle: OracleConfig::default(),
        }
    }
}

/// Strongly induced ordered copies of `f` in `x`.
pub fn strong_ordered_copies(f: &SteinerSystem, x: &SteinerSystem) -> Result<Vec<Vec<usize>>> {
    CopySearch::new(f.graph(), x.graph())
        .strong(x.t())
        .ordered(true)
        .maps()
}

/// The construction input over the ordered host `y`: all ordered induced
/// copies of `F` and of `X` in `y`.
pub fn input_over_host(
    f: &OrderedSteinerSystem,
    x: &OrderedSteinerSystem,
    y: Hypergraph,
    c: usize,
    mode: ArrowMode,
    provenance: Provenance,
) -> Result<ArrowInput> {
    let (f, x) = (f.base(), x.base());
    if f.params() != x.params() {
        return Err(Error::ParameterMismatch {
            pattern: f.params(),
            host: x.params(),
        });
    }
    if y.r() != f.r() {
        return Err(Error::ParameterMismatch {
            pattern: f.params(),
            host: (y.r(), f.t()),
        });
    }
    let q = strong_ordered_copies(f, x)?;
    let r = CopySearch::new(f.graph(), &y).ordered(true).maps()?;
    let maps = CopySearch::new(x.graph(), &y).ordered(true).maps()?;
    let xs = FSystem::new(f.graph(), x.graph().clone(), q)?;
    let ys = FSystem::new(f.graph(), y, r)?;
    ArrowInput::new(f.clone(), xs, ys, maps, c, mode, provenance)
}

/// Settles the arrow of `input` with the oracle.
fn verified(mut input: ArrowInput, config: &OracleConfig) -> Result<ArrowInput> {
    match input.verify_base_arrow(config)? {
        Verdict::Holds => {
            input.mode = ArrowMode::VerifiedArrow;
            input.provenance = Provenance::Oracle {
                items: input.y.copies.len(),
                c: input.c,
            };
            Ok(input)
        }
        Verdict::Fails { coloring } => Err(Error::ArrowRefuted {
            context: format!(
                "host on {} vertices for c = {}",
                input.y.graph.vertex_count(),
                input.c
            ),
            coloring,
        }),
    }
}

/// `X[X[..[X]]]` with `depth` factors: every vertex of the outer copy is
/// replaced by the inner system, inner blocks keep their edges, and each
/// edge of the outer copy becomes all of its transversals. Vertices are
/// numbered lexicographically.
pub fn substitution_power(x: &Hypergraph, depth: usize) -> Result<Hypergraph> {
    let mut y = x.clone();
    for _ in 1..depth {
        let inner = y.vertex_count();
        let n = x.vertex_count() * inner;
        let mut edges: Vec<Vec<usize>> = Vec::new();
        for a in 0..x.vertex_count() {
            edges.extend(
                y.edges()
                    .iter()
                    .map(|e| e.iter().map(|&b| a * inner + b).collect()),
            );
        }
        for e in x.edges() {
            for pick in e.iter().map(|_| 0..inner).multi_cartesian_product() {
                edges.push(e.iter().zip(&pick).map(|(&a, &b)| a * inner + b).collect());
            }
        }
        y = Hypergraph::new(x.r(), n, edges)?;
    }
    Ok(y)
}

fn classical(
    f: &OrderedSteinerSystem,
    x: &OrderedSteinerSystem,
    c: usize,
    config: &BaseConfig,
) -> Result<ArrowInput> {
    let trivial = |reason: &str| Provenance::Trivial {
        reason: reason.into(),
    };
    let xg = x.base().graph();
    if c == 1 {
        return input_over_host(f, x, xg.clone(), c, ArrowMode::VerifiedArrow, trivial("one colour"));
    }
    if f.base().graph() == xg {
        return input_over_host(
            f,
            x,
            xg.clone(),
            c,
            ArrowMode::VerifiedArrow,
            trivial("target equals pattern"),
        );
    }
    if f.base().vertex_count() != 1 {
        return Err(Error::StrategyInfeasible(
            "classical hosts need one colour, target equal to pattern, or a single-vertex pattern"
                .into(),
        ));
    }
    let n = xg.vertex_count();
    let (y, reason) = if xg.edge_count() == 0 {
        (
            Hypergraph::empty(xg.r(), c * n.saturating_sub(1) + 1),
            "pigeonhole on vertices",
        )
    } else {
        (substitution_power(xg, c)?, "iterated substitution")
    };
    if y.vertex_count() > MAX_CLASSICAL_VERTICES {
        return Err(Error::size(
            "classical host vertices",
            y.vertex_count(),
            MAX_CLASSICAL_VERTICES,
        ));
    }
    let input = input_over_host(
        f,
        x,
        y,
        c,
        ArrowMode::VerifiedArrow,
        Provenance::Classical {
            reason: reason.into(),
        },
    )?;
    let cap = config.oracle.max_copies.unwrap_or_else(|| default_max_copies(c));
    if input.y.copies.len() <= cap {
        let mut checked = verified(input, &config.oracle)?;
        checked.provenance = Provenance::Classical {
            reason: format!("{reason}, re-checked by exhaustion"),
        };
        return Ok(checked);
    }
    Ok(input)
}

/// Candidate hosts on `m` vertices: the complete hypergraph, then every edge
/// set in order of size when there are few possible edges.
fn candidates(r: usize, m: usize, max_subset_edges: usize) -> Vec<Hypergraph> {
    let all: Vec<Vec<usize>> = (0..m).combinations(r).collect();
    let mut out = vec![Hypergraph::new(r, m, all.clone()).expect("complete")];
    if all.len() <= max_subset_edges {
        for size in 0..all.len() {
            for pick in (0..all.len()).combinations(size) {
                let edges = pick.iter().map(|&i| all[i].clone());
                out.push(Hypergraph::new(r, m, edges).expect("subset"));
            }
        }
    }
    out
}

fn exhaustive(
    f: &OrderedSteinerSystem,
    x: &OrderedSteinerSystem,
    c: usize,
    config: &BaseConfig,
) -> Result<ArrowInput> {
    let r = f.base().r();
    let cap = config.oracle.max_copies.unwrap_or_else(|| default_max_copies(c));
    for m in x.base().vertex_count()..=config.max_host_vertices {
        if binomial(m, r) > cap && m > x.base().vertex_count() + 2 {
            break;
        }
        for y in candidates(r, m, config.max_subset_edges) {
            let input = input_over_host(
                f,
                x,
                y,
                c,
                ArrowMode::AssumedArrow,
                Provenance::Assumed {
                    reason: "candidate".into(),
                },
            )?;
            if input.witness.is_empty() || input.y.copies.len() > cap {
                continue;
            }
            match verified(input, &config.oracle) {
                Ok(found) => return Ok(found),
                Err(Error::ArrowRefuted { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::StrategyInfeasible(format!(
        "no host on at most {} vertices found",
        config.max_host_vertices
    )))
}

/// A host `(Y, R)` with witness copies for `X_< -> F_<` colourings,
/// settled according to `strategy`.
pub fn base_ramsey_witness(
    f: &OrderedSteinerSystem,
    x: &OrderedSteinerSystem,
    c: usize,
    strategy: &BaseStrategy,
    config: &BaseConfig,
) -> Result<ArrowInput> {
    if c == 0 {
        return Err(Error::Format("colour count must be positive".into()));
    }
    match strategy {
        BaseStrategy::Classical => classical(f, x, c, config),
        BaseStrategy::ExhaustiveSearch => exhaustive(f, x, c, config),
        BaseStrategy::Auto => match classical(f, x, c, config) {
            Err(Error::StrategyInfeasible(_)) => exhaustive(f, x, c, config),
            other => other,
        },
        BaseStrategy::UserSupplied { host, vertex_count } => {
            let y = Hypergraph::new(f.base().r(), *vertex_count, host.clone())?;
            let input = input_over_host(
                f,
                x,
                y,
                c,
                ArrowMode::AssumedArrow,
                Provenance::Assumed {
                    reason: "user-supplied host".into(),
                },
            )?;
            verified(input, &config.oracle)
        }
    }
}
