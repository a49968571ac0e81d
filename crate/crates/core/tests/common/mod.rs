//! Brute-force reference predicates and random systems for integration tests.
//! Nothing here calls into the library's predicate code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Edges = Vec<Vec<usize>>;

#[derive(Clone, Debug)]
pub struct Raw {
    pub r: usize,
    pub t: usize,
    pub n: usize,
    pub edges: Edges,
}

fn edge_set(edges: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    edges
        .iter()
        .map(|e| e.iter().copied().sorted().collect())
        .collect()
}

pub fn ref_steiner(raw: &Raw) -> bool {
    if raw.t < 2 || raw.t > raw.r {
        return false;
    }
    let set = edge_set(&raw.edges);
    if set.len() != raw.edges.len() {
        return false;
    }
    for e in &set {
        if e.len() != raw.r || e.iter().any(|&v| v >= raw.n) || e.iter().unique().count() != raw.r {
            return false;
        }
    }
    set.iter()
        .tuple_combinations()
        .all(|(a, b)| a.iter().filter(|v| b.contains(v)).count() < raw.t)
}

pub fn ref_induced(g: &Raw, h: &Raw, map: &[usize]) -> bool {
    if map.len() != g.n || map.iter().unique().count() != map.len() || map.iter().any(|&v| v >= h.n) {
        return false;
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    let mapped = edge_set(
        &g.edges
            .iter()
            .map(|e| e.iter().map(|&v| map[v]).collect())
            .collect::<Vec<_>>(),
    );
    let inside = edge_set(
        &h.edges
            .iter()
            .filter(|e| e.iter().all(|v| image.contains(v)))
            .cloned()
            .collect::<Vec<_>>(),
    );
    mapped == inside
}

pub fn ref_strong(g: &Raw, h: &Raw, map: &[usize]) -> bool {
    if !ref_induced(g, h, map) {
        return false;
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    h.edges.iter().all(|e| {
        let meet = e.iter().filter(|v| image.contains(v)).count();
        meet == e.len() || meet < h.t
    })
}

pub fn ref_homogeneous(raw: &Raw) -> bool {
    let set = edge_set(&raw.edges);
    (0..raw.n).permutations(raw.n).all(|p| {
        let moved = edge_set(
            &raw.edges
                .iter()
                .map(|e| e.iter().map(|&v| p[v]).collect())
                .collect::<Vec<_>>(),
        );
        moved == set
    })
}

pub fn ref_complete(raw: &Raw) -> bool {
    (0..raw.n)
        .combinations(raw.t)
        .all(|x| raw.edges.iter().any(|e| x.iter().all(|v| e.contains(v))))
}

/// A random system on at most `max_n` vertices. With `steiner` false the
/// edges may violate the Steiner condition.
pub fn random_raw(rng: &mut ChaCha8Rng, max_n: usize, steiner: bool) -> Raw {
    let r = rng.gen_range(2..=4);
    let t = rng.gen_range(2..=r);
    let n = rng.gen_range(0..=max_n);
    match rng.gen_range(0..10) {
        0 => return Raw { r, t, n, edges: vec![] },
        1 if n >= r => {
            return Raw {
                r,
                t,
                n: r,
                edges: vec![(0..r).collect()],
            }
        }
        2 if r == t => {
            return Raw {
                r,
                t,
                n,
                edges: (0..n).combinations(r).collect(),
            }
        }
        _ => {}
    }
    let mut edges: Edges = Vec::new();
    if n >= r {
        for _ in 0..rng.gen_range(0..=3 * n) {
            let mut e: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(rng, r).copied().collect();
            e.sort_unstable();
            if edges.contains(&e) {
                continue;
            }
            let ok = edges
                .iter()
                .all(|f| f.iter().filter(|v| e.contains(v)).count() < t);
            if ok || !steiner {
                edges.push(e);
            }
        }
    }
    Raw { r, t, n, edges }
}

/// Induced sub-system on `vertices`, relabelled to `0..vertices.len()`.
pub fn ref_restrict(raw: &Raw, vertices: &[usize]) -> Raw {
    let edges = raw
        .edges
        .iter()
        .filter(|e| e.iter().all(|v| vertices.contains(v)))
        .map(|e| {
            e.iter()
                .map(|v| vertices.iter().position(|u| u == v).unwrap())
                .sorted()
                .collect()
        })
        .collect();
    Raw {
        r: raw.r,
        t: raw.t,
        n: vertices.len(),
        edges,
    }
}

pub fn all_colorings(items: usize, c: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..items).map(move |_| 0..c).multi_cartesian_product()
}
