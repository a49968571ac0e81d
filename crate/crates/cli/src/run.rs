use serde_json::json;
use steiner_ramsey::copies::par_enumerate_copies;
use steiner_ramsey::format::{digest_json, pattern_hash, CopyRecord, SystemRecord};
use steiner_ramsey::hales_jewett::{hj_search, hj_verify, HjBound};
use steiner_ramsey::hypergraph::Hypergraph;
use steiner_ramsey::negative::{
    check_k_copies, incomplete_coloring_ordered, nonhomogeneous_coloring, ordering_property_search,
    verify_no_mono, OrderingBudget,
};
use steiner_ramsey::oracle::{arrows, OracleConfig};
use steiner_ramsey::partite::FHypergraphRecord;
use steiner_ramsey::pipelines::{
    build_clean_witness, build_theorem_witness, BaseStrategy, CleanConfig, TheoremConfig,
};
use steiner_ramsey::prelim::{build_prelim_witness, NSource, PrelimConfig};
use steiner_ramsey::system::steiner_violation;
use steiner_ramsey::{
    f_ramsey_status, is_complete, is_homogeneous, is_induced, is_strongly_induced, ClassTag,
    CopyKind, Error, OrderedSteinerSystem,
};

use crate::io::{mem_vertex_cap, read_fh, read_record, read_system, CliError, CliResult, Report};
use crate::{
    Cli, Command, Construct, Global, HjAction, NegativeAction, NegativeMode, Predicate, Strategy,
    Verify,
};

/// Limits shared by the commands, after folding in the memory variable.
struct Limits {
    max_vertices: Option<usize>,
    oracle: OracleConfig,
}

impl Limits {
    fn new(g: &Global) -> CliResult<Self> {
        let max_vertices = match (g.max_vertices, mem_vertex_cap()?) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let oracle = OracleConfig {
            max_copies: g.max_copies,
            ..OracleConfig::default()
        }
        .jobs(g.jobs);
        Ok(Limits {
            max_vertices,
            oracle,
        })
    }

    fn prelim(&self) -> PrelimConfig {
        let mut p = PrelimConfig {
            oracle: self.oracle.clone(),
            ..PrelimConfig::default()
        };
        if let Some(v) = self.max_vertices {
            p.max_vertices = v;
        }
        p
    }

    fn clean(&self) -> CleanConfig {
        let mut c = CleanConfig {
            prelim: self.prelim(),
            ..CleanConfig::default()
        };
        if let Some(v) = self.max_vertices {
            c.run.max_vertices = v;
        }
        c
    }
}

fn kind(s: &str) -> CliResult<CopyKind> {
    s.parse().map_err(|e: Error| CliError::Input(e.to_string()))
}

pub fn dispatch(cli: &Cli) -> CliResult<Report> {
    let limits = Limits::new(&cli.global)?;
    match &cli.command {
        Command::Check {
            predicate,
            input,
            r,
            t,
            host,
            map,
        } => {
            let mut rec = read_record(input)?;
            rec.r = r.unwrap_or(rec.r);
            rec.t = t.unwrap_or(rec.t);
            if let Predicate::Steiner = predicate {
                let graph = Hypergraph::new(rec.r, rec.vertex_count, rec.edges.clone())?;
                let violation = steiner_violation(&graph, rec.t)
                    .map(|(a, b)| vec![graph.edges()[a].clone(), graph.edges()[b].clone()]);
                let holds = violation.is_none();
                let record = json!({ "predicate": "steiner", "holds": holds, "violation": violation });
                return Report::new(&record, !holds);
            }
            let s = rec.to_system()?;
            let (name, holds) = match predicate {
                Predicate::Homogeneous => ("homogeneous", is_homogeneous(&s)),
                Predicate::Complete => ("complete", is_complete(&s)),
                Predicate::Induced | Predicate::Strong => {
                    let h = read_system(
                        host.as_deref()
                            .ok_or_else(|| CliError::Input("--host is required".into()))?,
                    )?;
                    if matches!(predicate, Predicate::Induced) {
                        ("induced", is_induced(&s, &h, map)?)
                    } else {
                        ("strong", is_strongly_induced(&s, &h, map)?)
                    }
                }
                Predicate::Steiner => unreachable!(),
            };
            Report::new(&json!({ "predicate": name, "holds": holds }), !holds)
        }
        Command::Status { class, pattern } => {
            let class: ClassTag = class.parse().map_err(|e: Error| CliError::Input(e.to_string()))?;
            let f = read_system(pattern)?;
            let status = f_ramsey_status(class, &f);
            let record = json!({
                "class": class.to_string(),
                "has_property": status.has_property,
                "applied": status.applied,
                "failing": status.failing,
                "reason": status.reason(),
            });
            Report::new(&record, false)
        }
        Command::Copies {
            pattern,
            host,
            kind: k,
            ordered,
        } => {
            let f = read_system(pattern)?;
            let h = read_system(host)?;
            let copies = par_enumerate_copies(&f, &h, kind(k)?, *ordered, cli.global.jobs)?;
            let records: Vec<CopyRecord> = copies.iter().map(|c| CopyRecord::new(&f, c)).collect();
            let maps: Vec<&Vec<usize>> = copies.iter().map(|c| &c.map).collect();
            Report::new(
                &json!({ "count": copies.len(), "copies": records, "maps": maps }),
                false,
            )
        }
        Command::Hj { action } => match action {
            HjAction::Search { q, c, bound } => {
                let n = hj_search(*q, *c, &HjBound::new(*bound))?;
                let record = json!({ "q": q, "c": c, "bound": bound, "n": n });
                Report::new(&record, n.is_none())
            }
            HjAction::Verify { q, c, n } => {
                let cert = hj_verify(*q, *c, *n, &HjBound::new(*n))?;
                let refuted = !cert.verdict;
                Report::new(&cert, refuted)
            }
        },
        Command::Construct { what } => construct(what, &limits, cli.global.seed),
        Command::Verify {
            what:
                Verify::Arrows {
                    host,
                    target,
                    pattern,
                    c,
                    target_kind,
                    pattern_kind,
                    ordered,
                },
        } => {
            let h = read_system(host)?;
            let g = read_system(target)?;
            let f = read_system(pattern)?;
            let report = arrows(
                &h,
                &g,
                &f,
                *c,
                kind(target_kind)?,
                kind(pattern_kind)?,
                *ordered,
                &limits.oracle,
            )?;
            let refuted = !report.verdict.holds();
            Report::new(&report, refuted)
        }
        Command::Negative {
            action:
                NegativeAction::Demo {
                    mode,
                    pattern,
                    host,
                    tries,
                },
        } => negative(*mode, pattern, host.as_deref(), *tries, &limits, cli.global.seed),
    }
}

fn construct(what: &Construct, limits: &Limits, seed: u64) -> CliResult<Report> {
    match what {
        Construct::Prelim { input, c, n } => {
            let fh = read_fh(input)?;
            let source = n.map_or_else(NSource::default, NSource::Given);
            let w = build_prelim_witness(&fh, *c, source, &limits.prelim())?;
            let output = FHypergraphRecord::from_fh(&w.output);
            let copies = w.to_witness().copies;
            let record = json!({
                "construction": "prelim",
                "c": c,
                "n": w.n,
                "mode": w.mode,
                "provenance": w.provenance,
                "input_hash": digest_json(&FHypergraphRecord::from_fh(&fh)),
                "output_hash": digest_json(&output),
                "property_ii": w.verify_property_ii(),
                "output": output,
                "copies": copies,
            });
            Report::new(&record, false)
        }
        Construct::Clean { input, c } => {
            let fh = read_fh(input)?;
            let w = build_clean_witness(&fh, *c, &limits.clean())?;
            let output = FHypergraphRecord::from_fh(&w.output);
            let record = json!({
                "construction": "clean",
                "c": c,
                "mode": w.mode,
                "provenance": w.provenance,
                "steps": w.construction.steps.len(),
                "padding": w.padding,
                "input_hash": digest_json(&FHypergraphRecord::from_fh(&fh)),
                "output_hash": digest_json(&output),
                "output": output,
                "copies": w.copies,
            });
            Report::new(&record, false)
        }
        Construct::Theorem {
            pattern,
            target,
            c,
            strategy,
            check,
        } => {
            let f = OrderedSteinerSystem::new(read_system(pattern)?);
            let x = OrderedSteinerSystem::new(read_system(target)?);
            let strategy = match strategy {
                Strategy::Auto => BaseStrategy::Auto,
                Strategy::Classical => BaseStrategy::Classical,
                Strategy::Exhaustive => BaseStrategy::ExhaustiveSearch,
            };
            let mut config = TheoremConfig {
                clean: limits.clean(),
                ..TheoremConfig::default()
            };
            config.base.oracle = limits.oracle.clone();
            if let Some(v) = limits.max_vertices {
                config.run.max_vertices = v;
            }
            let w = build_theorem_witness(&f, &x, *c, &strategy, &config)?;
            let base = &w.construction.input;
            let steps: Vec<_> = w
                .construction
                .steps
                .iter()
                .zip(&w.reports[1..])
                .map(|(s, report)| {
                    json!({
                        "provider": s.provider,
                        "mode": s.witness.mode,
                        "provenance": s.witness.provenance,
                        "witness_copies": s.witness.copies.len(),
                        "witness_hash": digest_json(&s.witness.copies),
                        "report": report,
                    })
                })
                .collect();
            let z = SystemRecord::from_system(w.z.base());
            let arrow = if *check {
                Some(w.verify_strong_arrow(seed)?)
            } else {
                None
            };
            let refuted = arrow.as_ref().is_some_and(|a| a.failure.is_some());
            let record = json!({
                "construction": "theorem",
                "c": c,
                "verified": w.verified(),
                "pattern_hash": pattern_hash(f.base()),
                "target_hash": pattern_hash(x.base()),
                "base": {
                    "mode": base.mode,
                    "provenance": base.provenance,
                    "host_vertices": base.y.graph.vertex_count(),
                    "report": w.reports[0],
                },
                "steps": steps,
                "z_hash": pattern_hash(w.z.base()),
                "z": z,
                "rank": w.rank,
                "arrow_check": arrow,
            });
            Report::new(&record, refuted)
        }
    }
}

fn negative(
    mode: NegativeMode,
    pattern: &std::path::Path,
    host: Option<&std::path::Path>,
    tries: usize,
    limits: &Limits,
    seed: u64,
) -> CliResult<Report> {
    let f = read_system(pattern)?;
    match mode {
        NegativeMode::Incomplete => {
            let f = OrderedSteinerSystem::new(f);
            let probe = incomplete_coloring_ordered(&f, &f)?;
            let h = match host {
                Some(p) => OrderedSteinerSystem::new(read_system(p)?),
                None => probe.g.clone(),
            };
            let col = incomplete_coloring_ordered(&f, &h)?;
            let report =
                verify_no_mono(h.base(), col.g.base(), f.base(), &col.coloring, CopyKind::Induced, true)?;
            let refuted = !report.holds;
            let record = json!({
                "mode": "incomplete",
                "x": col.x,
                "f_prime": SystemRecord::from_system(col.f_prime.system.base()),
                "f_prime_marked": col.f_prime.marked,
                "f_second": SystemRecord::from_system(col.f_second.system.base()),
                "f_second_marked": col.f_second.marked,
                "target": SystemRecord::from_system(col.g.base()),
                "copies": col.copies,
                "coloring": col.coloring,
                "check": report,
            });
            Report::new(&record, refuted)
        }
        NegativeMode::Nonhomogeneous => {
            let probe = nonhomogeneous_coloring(&f, &f)?;
            let h = match host {
                Some(p) => read_system(p)?,
                None => probe.k.base().clone(),
            };
            let col = nonhomogeneous_coloring(&f, &h)?;
            let outcome = check_k_copies(&h, &col.k, &f, &col.copies, &col.coloring)?;
            let (checked, offending) = match outcome {
                Ok(n) => (Some(n), None),
                Err(m) => (None, Some(m)),
            };
            let record = json!({
                "mode": "nonhomogeneous",
                "f_prime": SystemRecord::from_system(&col.f_prime),
                "f_second": SystemRecord::from_system(&col.f_second),
                "k": SystemRecord::from_system(col.k.base()),
                "copies": col.copies,
                "coloring": col.coloring,
                "k_copies_checked": checked,
                "monochromatic_k_copy": offending,
            });
            Report::new(&record, offending.is_some())
        }
        NegativeMode::Ordering => {
            let mut budget = OrderingBudget {
                seed,
                tries,
                ..OrderingBudget::default()
            };
            if let Some(v) = limits.max_vertices {
                budget.max_vertices = budget.max_vertices.min(v);
            }
            let cert = ordering_property_search(&f, &budget)?;
            let record = json!({
                "mode": "ordering",
                "seed": cert.seed,
                "exhaustive": cert.exhaustive,
                "g": SystemRecord::from_system(&cert.g),
            });
            Report::new(&record, false)
        }
    }
}

