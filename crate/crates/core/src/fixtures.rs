//! Named small systems shared by tests, examples and the CLI.

use itertools::Itertools;

use crate::hypergraph::Hypergraph;
use crate::system::SteinerSystem;

fn build(r: usize, t: usize, n: usize, edges: Vec<Vec<usize>>) -> SteinerSystem {
    SteinerSystem::new(Hypergraph::new(r, n, edges).expect("fixture edges"), t)
        .expect("fixture is Steiner")
}

/// Two 3-edges meeting in vertex 2, t = 2.
pub fn h5() -> SteinerSystem {
    build(3, 2, 5, vec![vec![0, 1, 2], vec![2, 3, 4]])
}

/// `h5` restricted to `{0,1,2}`.
pub fn g3() -> SteinerSystem {
    h5().induced(&[0, 1, 2])
}

/// `h5` restricted to `{0,1,2,3}`.
pub fn g4() -> SteinerSystem {
    h5().induced(&[0, 1, 2, 3])
}

/// The Fano plane as a Steiner (3,2)-system.
pub fn fano() -> SteinerSystem {
    build(
        3,
        2,
        7,
        vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ],
    )
}

/// A single r-edge, t = 2.
pub fn edge(r: usize) -> SteinerSystem {
    edge_t(r, 2)
}

pub fn edge_t(r: usize, t: usize) -> SteinerSystem {
    build(r, t, r, vec![(0..r).collect()])
}

/// Path 0-1-2 as a graph (r = t = 2).
pub fn p3() -> SteinerSystem {
    build(2, 2, 3, vec![vec![0, 1], vec![1, 2]])
}

pub fn complete_graph(n: usize) -> SteinerSystem {
    build(2, 2, n, (0..n).combinations(2).collect())
}

/// Cycle 0-1-...-(n-1)-0 as a graph.
pub fn cycle(n: usize) -> SteinerSystem {
    build(2, 2, n, (0..n).map(|i| vec![i, (i + 1) % n]).collect())
}

pub fn discrete(r: usize, t: usize, n: usize) -> SteinerSystem {
    SteinerSystem::discrete(r, t, n).expect("valid parameters")
}
