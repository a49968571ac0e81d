//! Witness systems: a host partite F-system together with copies of a target,
//! claimed to satisfy a partition arrow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::oracle::{arrows_system, OracleConfig, Verdict};
use crate::partite::{validate_fhypergraph, FHypergraph, PartiteSystem};
use crate::system::SteinerSystem;

/// A k-partite r-uniform hypergraph (not necessarily Steiner) with
/// distinguished crossing copies of the pattern, each stored class-indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteFSystem {
    pub graph: Hypergraph,
    pub class_of: Vec<usize>,
    pub k: usize,
    pub copies: Vec<Vec<usize>>,
}

impl PartiteFSystem {
    pub fn from_fh(fh: &FHypergraph) -> Self {
        PartiteFSystem {
            graph: fh.x().graph().clone(),
            class_of: fh.x().class_of().to_vec(),
            k: fh.x().k(),
            copies: fh.q().to_vec(),
        }
    }

    /// Validates this as an F-hypergraph (Steiner, crossing, strong copies).
    pub fn to_fh(&self, f: &SteinerSystem) -> Result<FHypergraph> {
        let sys = SteinerSystem::new(self.graph.clone(), f.t())?;
        let part = PartiteSystem::from_class_of(sys, self.class_of.clone(), self.k)?;
        let fh = validate_fhypergraph(f.clone(), part, self.copies.clone())?;
        if fh.q() != self.copies.as_slice() {
            return Err(Error::ConstructionBug(
                "copy family is not sorted by image".into(),
            ));
        }
        Ok(fh)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.class_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrowMode {
    VerifiedArrow,
    AssumedArrow,
}

/// Where an arrow claim comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum Provenance {
    /// Holds for structural reasons (no colours to speak of, or a single copy).
    Trivial { reason: String },
    /// Dimension taken from a decided Hales-Jewett number.
    HjNumber { q: usize, c: usize, n: usize },
    /// Every colouring was exhausted.
    Oracle { items: usize, c: usize },
    /// Pigeonhole or substitution argument, re-checked where feasible.
    Classical { reason: String },
    /// Built by a partite construction whose steps each carry provenance.
    Construction { steps: usize, verified: bool },
    /// Declared by the caller, not checked.
    Assumed { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCopy {
    /// Target vertex `v` sits at host vertex `map[v]`.
    pub map: Vec<usize>,
    /// `members[j]` is the host copy carrying target copy `j`.
    pub members: Vec<usize>,
}

/// Copies of a target partite F-system inside `host`, claimed to satisfy:
/// every c-colouring of the host copies leaves some witness copy with
/// monochromatic members.
#[derive(Clone, Debug)]
pub struct Witness {
    pub host: PartiteFSystem,
    pub copies: Vec<WitnessCopy>,
    pub c: usize,
    pub mode: ArrowMode,
    pub provenance: Provenance,
}

impl Witness {
    /// First witness copy whose members are monochromatic under `coloring`.
    pub fn select(&self, coloring: &[usize]) -> Option<usize> {
        self.copies.iter().position(|w| {
            w.members
                .first()
                .is_none_or(|&a| w.members.iter().all(|&m| coloring[m] == coloring[a]))
        })
    }

    /// Exhausts colourings of the host copies.
    pub fn verify_arrow(&self, config: &OracleConfig) -> Result<Verdict> {
        arrows_system(
            self.host.copies.len(),
            self.copies.iter().map(|w| w.members.clone()).collect(),
            self.c,
            config,
        )
    }

    /// Checks the copies are class-preserving embeddings of `target` carrying
    /// its copies onto the listed members.
    pub fn check_shape(&self, target: &PartiteFSystem) -> Result<()> {
        for (wi, w) in self.copies.iter().enumerate() {
            let bad = |msg: &str| {
                Err(Error::WitnessShapeMismatch(format!("copy {wi}: {msg}")))
            };
            if w.map.len() != target.vertex_count() || w.members.len() != target.copies.len() {
                return bad("wrong size");
            }
            if w.map.iter().any(|&v| v >= self.host.vertex_count()) {
                return bad("vertex out of range");
            }
            if (0..w.map.len()).any(|v| self.host.class_of[w.map[v]] != target.class_of[v]) {
                return bad("classes not preserved");
            }
            if !crate::system::induced_under(&target.graph, &self.host.graph, &w.map)? {
                return bad("not induced");
            }
            for (j, &m) in w.members.iter().enumerate() {
                let expect: Vec<usize> = target.copies[j].iter().map(|&v| w.map[v]).collect();
                if self.host.copies.get(m) != Some(&expect) {
                    return bad("member does not match");
                }
            }
            let mut inside = vec![false; self.host.vertex_count()];
            for &v in &w.map {
                inside[v] = true;
            }
            let traced = self
                .host
                .copies
                .iter()
                .filter(|p| p.iter().all(|&v| inside[v]))
                .count();
            if traced != w.members.len() {
                return bad("host copies inside the image are not all members");
            }
        }
        Ok(())
    }
}

/// Produces witness systems for targets arising in a partite construction.
pub trait WitnessProvider {
    fn name(&self) -> String;

    fn provide(&self, target: &PartiteFSystem, f: &SteinerSystem, c: usize) -> Result<Witness>;
}

/// The target itself with the identity copy: valid when `c = 1` or when the
/// target has at most one distinguished copy.
pub fn identity_witness(target: &PartiteFSystem, c: usize) -> Option<Witness> {
    if c > 1 && target.copies.len() > 1 {
        return None;
    }
    Some(Witness {
        host: target.clone(),
        copies: vec![WitnessCopy {
            map: (0..target.vertex_count()).collect(),
            members: (0..target.copies.len()).collect(),
        }],
        c,
        mode: ArrowMode::VerifiedArrow,
        provenance: Provenance::Trivial {
            reason: if c == 1 {
                "one colour".into()
            } else {
                "at most one copy to colour".into()
            },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partite::fixtures;

    #[test]
    fn identity_is_valid_for_single_copy() {
        let t = PartiteFSystem::from_fh(&fixtures::single(&crate::fixtures::edge(3)));
        let w = identity_witness(&t, 5).unwrap();
        w.check_shape(&t).unwrap();
        assert!(w.verify_arrow(&OracleConfig::default()).unwrap().holds());
        assert_eq!(w.select(&[3]), Some(0));
    }

    #[test]
    fn identity_refused_for_two_copies() {
        let t = PartiteFSystem::from_fh(&fixtures::fan(2, 2));
        assert!(identity_witness(&t, 2).is_none());
        assert!(identity_witness(&t, 1).is_some());
    }

    #[test]
    fn fh_round_trip() {
        let fh = fixtures::fan(3, 2);
        let back = PartiteFSystem::from_fh(&fh).to_fh(fh.f()).unwrap();
        assert_eq!(back, fh);
    }
}
