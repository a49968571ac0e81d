//! Partite witnesses whose copies meet only along shared pattern copies.

use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::oracle::{arrows_system, default_max_copies, Verdict};
use crate::partite::{validate_fhypergraph, FHypergraph, PartiteSystem};
use crate::pictures::{
    run_partite_construction, ArrowInput, Construction, FSystem, Picture, RunConfig,
};
use crate::prelim::{build_prelim_witness, NSource, PrelimConfig, PrelimProvider};
use crate::system::{steiner_violation, strong_under, SteinerSystem};
use crate::witness::{
    ArrowMode, PartiteFSystem, Provenance, Witness, WitnessCopy, WitnessProvider,
};

#[derive(Clone, Debug, Default)]
pub struct CleanConfig {
    pub source: NSource,
    pub prelim: PrelimConfig,
    pub run: RunConfig,
}

/// The output F-hypergraph with copies of the input, plus the run that
/// produced it.
#[derive(Clone, Debug)]
pub struct CleanWitness {
    pub input: FHypergraph,
    pub output: FHypergraph,
    pub copies: Vec<WitnessCopy>,
    pub c: usize,
    pub mode: ArrowMode,
    pub provenance: Provenance,
    /// Host vertices added to balance the classes of the power system.
    pub padding: Vec<usize>,
    pub construction: Construction,
}

impl CleanWitness {
    pub fn to_witness(&self) -> Witness {
        Witness {
            host: PartiteFSystem::from_fh(&self.output),
            copies: self.copies.clone(),
            c: self.c,
            mode: self.mode,
            provenance: self.provenance.clone(),
        }
    }
}

/// Two copies sharing a t-set that one of them does not cover by a member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionViolation {
    pub first: usize,
    pub second: usize,
    pub t_set: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub holds: bool,
    /// Shared t-sets examined.
    pub checked: usize,
    pub violation: Option<IntersectionViolation>,
}

/// For distinct copies and every t-set in both images, each copy has a
/// member covering the t-set. `host_copies` are the members' maps.
pub fn verify_intersection_property(
    host_copies: &[Vec<usize>],
    copies: &[WitnessCopy],
    t: usize,
) -> IntersectionReport {
    let images: Vec<HashSet<usize>> = copies
        .iter()
        .map(|w| w.map.iter().copied().collect())
        .collect();
    let covered = |w: &WitnessCopy, x: &[usize]| {
        w.members
            .iter()
            .any(|&m| x.iter().all(|v| host_copies[m].contains(v)))
    };
    let mut checked = 0;
    for (a, b) in (0..copies.len()).tuple_combinations() {
        let shared: Vec<usize> = images[a].intersection(&images[b]).copied().sorted().collect();
        for x in shared.into_iter().combinations(t) {
            checked += 1;
            if !covered(&copies[a], &x) || !covered(&copies[b], &x) {
                return IntersectionReport {
                    holds: false,
                    checked,
                    violation: Some(IntersectionViolation {
                        first: a,
                        second: b,
                        t_set: x,
                    }),
                };
            }
        }
    }
    IntersectionReport {
        holds: true,
        checked,
        violation: None,
    }
}

/// The picture is a Steiner system and its copies are strongly induced.
pub fn check_steiner_and_strong(pi: &Picture, f: &SteinerSystem) -> Result<()> {
    let t = f.t();
    if let Some((i, j)) = steiner_violation(&pi.graph, t) {
        return Err(Error::ConstructionBug(format!(
            "picture edges {:?} and {:?} share {t} vertices",
            pi.graph.edges()[i],
            pi.graph.edges()[j]
        )));
    }
    for c in &pi.copies {
        if !strong_under(f.graph(), &pi.graph, t, c)? {
            return Err(Error::ConstructionBug(format!(
                "picture copy {c:?} is not strongly induced"
            )));
        }
    }
    Ok(())
}

/// Pads every class of `fh` with isolated vertices to a common size `s` and
/// renumbers so that class `i` is `i*s .. (i+1)*s`. Returns the graph, the
/// relabelling and the padding vertices.
fn balance(fh: &FHypergraph) -> Result<(Hypergraph, Vec<usize>, usize, Vec<usize>)> {
    let classes = fh.x().classes();
    let s = classes.iter().map(Vec::len).max().unwrap_or(0).max(1);
    let mut relabel = vec![0; fh.vertex_count()];
    let mut padding = Vec::new();
    for (i, class) in classes.iter().enumerate() {
        for (p, &v) in class.iter().enumerate() {
            relabel[v] = i * s + p;
        }
        padding.extend(i * s + class.len()..(i + 1) * s);
    }
    let graph = fh.x().graph().relabel(&relabel, classes.len() * s)?;
    Ok((graph, relabel, s, padding))
}

/// Runs the partite construction over the power witness of `x`, then merges
/// the host classes back into the `k` classes of the pattern.
pub fn build_clean_witness(x: &FHypergraph, c: usize, config: &CleanConfig) -> Result<CleanWitness> {
    let f = x.f().clone();
    let power = build_prelim_witness(x, c, config.source, &config.prelim)?;
    let (ygraph, relabel, s, padding) = balance(&power.output)?;
    let r_copies: Vec<Vec<usize>> = power
        .output
        .q()
        .iter()
        .map(|m| m.iter().map(|&v| relabel[v]).collect())
        .collect();
    let maps = power
        .lines
        .iter()
        .map(|l| l.map.iter().map(|&v| relabel[v]).collect())
        .collect();
    let input = ArrowInput::new(
        f.clone(),
        FSystem::new(f.graph(), x.x().graph().clone(), x.q().to_vec())?,
        FSystem::new(f.graph(), ygraph, r_copies)?,
        maps,
        c,
        power.mode,
        power.provenance.clone(),
    )?;
    let provider = PrelimProvider {
        source: config.source,
        config: config.prelim.clone(),
    };
    let run = run_partite_construction(&input, &provider, &config.run)?;
    for pi in &run.pictures {
        check_steiner_and_strong(pi, &f)?;
    }
    let last = run.last();
    let class_of: Vec<usize> = last.class_of.iter().map(|&j| j / s).collect();
    let system = SteinerSystem::new(last.graph.clone(), f.t())?;
    let part = PartiteSystem::from_class_of(system, class_of, f.vertex_count())?;
    let output = validate_fhypergraph(f.clone(), part, last.copies.clone())?;
    let mut copies = Vec::with_capacity(last.good.len());
    for g in &last.good {
        if !strong_under(x.x().graph(), &last.graph, f.t(), &g.map)? {
            return Err(Error::ConstructionBug(format!(
                "good copy {:?} is not strongly induced",
                g.map
            )));
        }
        let members = g
            .members
            .iter()
            .map(|&m| {
                let mut img = last.copies[m].clone();
                img.sort_unstable();
                output
                    .copy_index(&img)
                    .ok_or_else(|| Error::ConstructionBug("member lost in re-partition".into()))
            })
            .collect::<Result<_>>()?;
        copies.push(WitnessCopy {
            map: g.map.clone(),
            members,
        });
    }
    let report = verify_intersection_property(output.q(), &copies, f.t());
    if !report.holds {
        return Err(Error::ConstructionBug(format!(
            "intersection property fails: {:?}",
            report.violation
        )));
    }
    let verified = run.verified();
    let mut mode = if verified {
        ArrowMode::VerifiedArrow
    } else {
        ArrowMode::AssumedArrow
    };
    let mut provenance = Provenance::Construction {
        steps: run.steps.len(),
        verified,
    };
    let cap = config
        .prelim
        .oracle
        .max_copies
        .unwrap_or_else(|| default_max_copies(c));
    if output.q().len() <= cap {
        let targets = copies.iter().map(|w| w.members.clone()).collect();
        match arrows_system(output.q().len(), targets, c, &config.prelim.oracle)? {
            Verdict::Holds => {
                if !verified {
                    provenance = Provenance::Oracle {
                        items: output.q().len(),
                        c,
                    };
                }
                mode = ArrowMode::VerifiedArrow;
            }
            Verdict::Fails { coloring } => {
                if verified {
                    return Err(Error::ConstructionBug(
                        "verified construction but the arrow fails".into(),
                    ));
                }
                return Err(Error::ArrowRefuted {
                    context: "clean witness".into(),
                    coloring,
                });
            }
        }
    }
    Ok(CleanWitness {
        input: x.clone(),
        output,
        copies,
        c,
        mode,
        provenance,
        padding,
        construction: run,
    })
}

/// Uses clean witnesses for every step of a partite construction.
#[derive(Clone, Debug, Default)]
pub struct CleanProvider {
    pub config: CleanConfig,
}

impl WitnessProvider for CleanProvider {
    fn name(&self) -> String {
        "clean".into()
    }

    fn provide(&self, target: &PartiteFSystem, f: &SteinerSystem, c: usize) -> Result<Witness> {
        let fh = target.to_fh(f)?;
        Ok(build_clean_witness(&fh, c, &self.config)?.to_witness())
    }
}
