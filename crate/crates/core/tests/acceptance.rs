//! Acceptance suite: one PASS/FAIL line per criterion, each with a time limit.
//! Run with `cargo test -p steiner-ramsey --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use steiner_ramsey::classify::{f_ramsey_status, ClassTag};
use steiner_ramsey::hales_jewett::{hj_number, HjCube};
use steiner_ramsey::hypergraph::Hypergraph;
use steiner_ramsey::negative::{
    incomplete_coloring_ordered, ordering_property_search, verify_no_mono, verify_ordering_property,
    OrderingBudget,
};
use steiner_ramsey::oracle::{arrows, OracleConfig, Verdict};
use steiner_ramsey::partite::{fixtures as fh, FHypergraph};
use steiner_ramsey::pictures::{
    check_subpicture, extract_monochromatic, fixtures as pf, run_partite_construction,
    validate_picture, RunConfig,
};
use steiner_ramsey::pipelines::{
    build_clean_witness, build_theorem_witness, verify_intersection_property, BaseStrategy,
    CleanConfig, TheoremConfig,
};
use steiner_ramsey::prelim::{build_prelim_witness, NSource, PrelimConfig, PrelimProvider};
use steiner_ramsey::witness::ArrowMode;
use steiner_ramsey::{
    fixtures, is_complete, is_homogeneous, is_induced, is_strongly_induced, validate_steiner,
    CopyKind, OrderedSteinerSystem, SteinerSystem,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn raw(s: &SteinerSystem) -> Raw {
    Raw {
        r: s.r(),
        t: s.t(),
        n: s.vertex_count(),
        edges: s.edges().to_vec(),
    }
}

fn raw_graph(g: &Hypergraph, t: usize) -> Raw {
    Raw {
        r: g.r(),
        t,
        n: g.vertex_count(),
        edges: g.edges().to_vec(),
    }
}

fn predicates() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut systems = 0;
    let mut maps = 0;
    for i in 0..600 {
        let candidate = random_raw(&mut rng, 8, i % 4 != 0);
        let lib = validate_steiner(candidate.n, candidate.edges.clone(), candidate.r, candidate.t);
        ensure(lib.is_ok() == ref_steiner(&candidate), || {
            format!("validate_steiner disagrees on {candidate:?}")
        })?;
        let Ok(h) = lib else { continue };
        systems += 1;
        ensure(is_homogeneous(&h) == ref_homogeneous(&candidate), || {
            format!("is_homogeneous disagrees on {candidate:?}")
        })?;
        ensure(is_complete(&h) == ref_complete(&candidate), || {
            format!("is_complete disagrees on {candidate:?}")
        })?;
        for _ in 0..4 {
            let k = rng.gen_range(0..=candidate.n);
            let mut sub: Vec<usize> = (0..candidate.n).collect::<Vec<_>>().choose_multiple(&mut rng, k).copied().collect();
            sub.sort_unstable();
            let gr = ref_restrict(&candidate, &sub);
            let g = validate_steiner(gr.n, gr.edges.clone(), gr.r, gr.t).map_err(|e| e.to_string())?;
            let mut map = sub.clone();
            if rng.gen_bool(0.5) {
                let other = (0..candidate.n).collect::<Vec<_>>().choose_multiple(&mut rng, k).copied().collect();
                map = other;
            }
            maps += 1;
            let ind = is_induced(&g, &h, &map).map_err(|e| e.to_string())?;
            let strong = is_strongly_induced(&g, &h, &map).map_err(|e| e.to_string())?;
            ensure(ind == ref_induced(&gr, &candidate, &map), || {
                format!("is_induced disagrees on {candidate:?} / {map:?}")
            })?;
            ensure(strong == ref_strong(&gr, &candidate, &map), || {
                format!("is_strongly_induced disagrees on {candidate:?} / {map:?}")
            })?;
        }
    }
    ensure(systems >= 500, || format!("only {systems} valid systems generated"))?;
    Ok(format!("{systems} systems, {maps} maps"))
}

fn classifier() -> Check {
    use ClassTag as C;
    let edge3 = fixtures::edge(3);
    let rows: Vec<(ClassTag, &str, SteinerSystem, bool)> = vec![
        (C::WEAK, "edge r>t", edge3.clone(), true),
        (C::WEAK, "v_F<t", fixtures::discrete(3, 2, 1), true),
        (C::WEAK, "two points r>t", fixtures::discrete(3, 2, 2), false),
        (C::WEAK, "Fano", fixtures::fano(), false),
        (C::WEAK, "K3 r=t", fixtures::complete_graph(3), true),
        (C::WEAK, "P3 r=t", fixtures::p3(), false),
        (C::WEAK_ORDERED, "Fano", fixtures::fano(), true),
        (C::WEAK_ORDERED, "two points r>t", fixtures::discrete(3, 2, 2), false),
        (C::WEAK_ORDERED, "P3 r=t", fixtures::p3(), true),
        (C::WEAK_ORDERED, "h5", fixtures::h5(), false),
        (C::WEAK_ORDERED, "v_F<t", fixtures::discrete(3, 2, 1), true),
        (C::STRONG, "edge", edge3, true),
        (C::STRONG, "discrete", fixtures::discrete(3, 2, 4), true),
        (C::STRONG, "K4 r=t", fixtures::complete_graph(4), true),
        (C::STRONG, "Fano", fixtures::fano(), false),
        (C::STRONG, "P3", fixtures::p3(), false),
        (C::STRONG_ORDERED, "Fano", fixtures::fano(), true),
        (C::STRONG_ORDERED, "h5", fixtures::h5(), true),
    ];
    for (class, name, f, expected) in &rows {
        let got = f_ramsey_status(*class, f).has_property;
        ensure(got == *expected, || format!("{class} {name}: expected {expected}, got {got}"))?;
    }
    Ok(format!("{} rows", rows.len()))
}

fn hales_jewett() -> Check {
    ensure(hj_number(2, 2, 3) == Some(2), || "hj_number(2,2) is not 2".into())?;
    let cube = HjCube::new(2, 2).map_err(|e| e.to_string())?;
    let mut count = 0;
    for col in all_colorings(4, 2) {
        let (line, color) = cube
            .find_monochromatic_line(&col)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no line for {col:?}"))?;
        let pts = cube.line_points(&line);
        ensure(pts.len() == 2 && pts.iter().all(|&p| col[p] == color), || {
            format!("line {line:?} is not monochromatic under {col:?}")
        })?;
        count += 1;
    }
    ensure(count == 16, || format!("{count} colourings"))?;
    Ok("16 colourings".into())
}

fn prelim() -> Check {
    let inputs: Vec<(&str, FHypergraph)> = vec![
        ("bare P3", fh::bare(&fixtures::p3())),
        ("single Fano", fh::single(&fixtures::fano())),
        ("single edge", fh::single(&fixtures::edge(3))),
        ("two edges r=2", fh::two_edges(2, 2)),
        ("two edges r=3", fh::two_edges(3, 2)),
        ("fan r=2", fh::fan(2, 2)),
        ("fan r=3", fh::fan(3, 2)),
    ];
    let mut built = 0;
    for (name, x) in &inputs {
        ensure(x.q().len() <= 2, || format!("{name} has too many copies"))?;
        for c in [1, 2] {
            let w = build_prelim_witness(x, c, NSource::default(), &PrelimConfig::default())
                .map_err(|e| format!("{name} c={c}: {e}"))?;
            ensure(w.mode == ArrowMode::VerifiedArrow, || format!("{name} c={c}: not verified"))?;
            let verdict = w.verify_arrow(&OracleConfig::default()).map_err(|e| e.to_string())?;
            ensure(verdict.holds(), || format!("{name} c={c}: oracle refutes the arrow"))?;
            ensure(w.verify_property_ii().holds, || format!("{name} c={c}: property (ii) fails"))?;
            let y = raw_graph(w.output.x().graph(), x.f().t());
            ensure(ref_steiner(&y), || format!("{name} c={c}: power is not Steiner"))?;
            for lc in &w.lines {
                ensure(w.line_copy_is_strong(lc).map_err(|e| e.to_string())?, || {
                    format!("{name} c={c}: line copy {:?} fails the strong trace", lc.line)
                })?;
            }
            built += 1;
        }
    }
    Ok(format!("{built} witnesses"))
}

fn pictures() -> Check {
    let inputs = vec![
        ("edge+point r=2", pf::edge_plus_point(2, 2)),
        ("edge+point r=3", pf::edge_plus_point(3, 2)),
        ("path in star c=1", pf::path_in_star(1)),
    ];
    let mut colorings = 0;
    for (name, input) in &inputs {
        ensure(input.y.copies.len() <= 4 && input.witness.len() <= 3, || format!("{name} too large"))?;
        let run = run_partite_construction(input, &PrelimProvider::default(), &RunConfig::default())
            .map_err(|e| format!("{name}: {e}"))?;
        for (s, step) in run.steps.iter().enumerate() {
            let (old, new) = (&run.pictures[s], &run.pictures[s + 1]);
            validate_picture(new, input).map_err(|e| format!("{name} step {s}: {e}"))?;
            for phi in &step.canonical {
                check_subpicture(old, new, phi).map_err(|e| format!("{name} step {s}: {e}"))?;
            }
        }
        let last = run.last();
        let n = last.copies.len();
        ensure(n <= 12, || format!("{name}: {n} copies"))?;
        for col in all_colorings(n, input.c) {
            let ex = extract_monochromatic(&run, &col).map_err(|e| format!("{name}: {e}"))?;
            ensure(last.good.iter().any(|g| g.map == ex.good.map), || format!("{name}: not a good copy"))?;
            ensure(ex.good.members.iter().all(|&m| col[m] == ex.color), || {
                format!("{name}: extraction under {col:?} is not monochromatic")
            })?;
            colorings += 1;
        }
    }
    Ok(format!("{colorings} colourings"))
}

fn clean() -> Check {
    let inputs: Vec<(&str, FHypergraph)> = vec![
        ("bare P3", fh::bare(&fixtures::p3())),
        ("single Fano", fh::single(&fixtures::fano())),
        ("single edge", fh::single(&fixtures::edge(3))),
        ("single P3", fh::single(&fixtures::p3())),
        (
            "fan, one copy",
            fh::fan(2, 2).with_copies(vec![vec![0, 1]]).map_err(|e| e.to_string())?,
        ),
    ];
    let mut pictures = 0;
    for (name, x) in &inputs {
        let f = raw(x.f());
        for c in [1, 2] {
            let w = build_clean_witness(x, c, &CleanConfig::default()).map_err(|e| format!("{name} c={c}: {e}"))?;
            for pi in &w.construction.pictures {
                let g = raw_graph(&pi.graph, f.t);
                ensure(ref_steiner(&g), || format!("{name} c={c}: picture is not Steiner"))?;
                for copy in &pi.copies {
                    ensure(ref_strong(&f, &g, copy), || {
                        format!("{name} c={c}: copy {copy:?} not strongly induced")
                    })?;
                }
                pictures += 1;
            }
            let report = verify_intersection_property(w.output.q(), &w.copies, f.t);
            ensure(report.holds, || format!("{name} c={c}: {:?}", report.violation))?;
            let verdict = w.to_witness().verify_arrow(&OracleConfig::default()).map_err(|e| e.to_string())?;
            ensure(verdict.holds(), || format!("{name} c={c}: arrow refuted"))?;
        }
    }
    Ok(format!("{pictures} pictures"))
}

fn theorem() -> Check {
    let v = fixtures::discrete(2, 2, 1);
    let inputs = vec![
        ("F=X=Fano", fixtures::fano(), fixtures::fano(), 2),
        ("F=X=edge", fixtures::edge(3), fixtures::edge(3), 2),
        ("F=X=vertex", v.clone(), v.clone(), 2),
        ("F=vertex X=P3 c=1", v, fixtures::p3(), 1),
    ];
    let mut summary = Vec::new();
    for (name, f, x, c) in inputs {
        let (f, x) = (OrderedSteinerSystem::new(f), OrderedSteinerSystem::new(x));
        let w = build_theorem_witness(&f, &x, c, &BaseStrategy::Auto, &TheoremConfig::default())
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(ref_steiner(&raw(w.z.base())), || format!("{name}: Z is not Steiner"))?;
        ensure(w.reports.iter().all(|r| r.all()), || format!("{name}: step re-check failed"))?;
        let check = w.verify_strong_arrow(7).map_err(|e| format!("{name}: {e}"))?;
        ensure(check.failure.is_none(), || format!("{name}: colouring {:?} defeats Z", check.failure))?;
        ensure(check.exhaustive || check.colorings >= 10_000, || format!("{name}: too few colourings"))?;
        summary.push(format!("{name}: |Z|={} copies={}", w.z.vertex_count(), check.copies));
    }
    Ok(summary.join("; "))
}

fn negative() -> Check {
    let f = OrderedSteinerSystem::new(fixtures::discrete(3, 2, 2));
    let edges = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8], vec![0, 3, 6]];
    let h = validate_steiner(9, edges.clone(), 3, 2).map_err(|e| e.to_string())?;
    let col = incomplete_coloring_ordered(&f, &OrderedSteinerSystem::new(h.clone())).map_err(|e| e.to_string())?;
    // Marked copies of both extensions occur in the host.
    let marked_in_host = |ext: &steiner_ramsey::negative::Extension| {
        (0..9).combinations(3).any(|img: Vec<usize>| {
            ref_induced(&raw(ext.system.base()), &raw(&h), &img)
        })
    };
    ensure(marked_in_host(&col.f_prime) && marked_in_host(&col.f_second), || "host lacks an extension".into())?;
    let report = verify_no_mono(&h, col.g.base(), f.base(), &col.coloring, CopyKind::Induced, true)
        .map_err(|e| e.to_string())?;
    ensure(report.holds && report.targets > 0, || format!("{report:?}"))?;
    // Independent re-check over increasing maps.
    let g = raw(col.g.base());
    let hr = raw(&h);
    let mut targets = 0;
    for img in (0..9).combinations(g.n) {
        if !ref_induced(&g, &hr, &img) {
            continue;
        }
        targets += 1;
        let colors: Vec<usize> = img
            .iter()
            .copied()
            .combinations(2)
            .map(|pair| col.coloring[col.copies.iter().position(|c| *c == pair).unwrap()])
            .unique()
            .collect();
        ensure(colors.len() == 2, || format!("target {img:?} is monochromatic"))?;
    }
    ensure(targets == report.targets, || format!("{targets} vs {} targets", report.targets))?;
    for k in [fixtures::edge(2), fixtures::complete_graph(3)] {
        let cert = ordering_property_search(&k, &OrderingBudget::default()).map_err(|e| e.to_string())?;
        ensure(cert.exhaustive, || "certificate not exhaustive".into())?;
        ensure(verify_ordering_property(&cert.g, &k).map_err(|e| e.to_string())?, || {
            "ordering property fails".into()
        })?;
    }
    Ok(format!("{targets} targets"))
}

fn classic() -> Check {
    let k2 = fixtures::complete_graph(2);
    let k3 = fixtures::complete_graph(3);
    let config = OracleConfig::default();
    let arrow = |n: usize| {
        arrows(&fixtures::complete_graph(n), &k3, &k2, 2, CopyKind::Induced, CopyKind::Induced, false, &config)
    };
    let six = arrow(6).map_err(|e| e.to_string())?;
    ensure(six.verdict == Verdict::Holds, || "K6 does not arrow".into())?;
    let five = arrow(5).map_err(|e| e.to_string())?;
    let Verdict::Fails { coloring } = &five.verdict else {
        return Err("K5 arrows".into());
    };
    let color_of = |a: usize, b: usize| {
        let i = five.colored.iter().position(|e| *e == vec![a, b]).unwrap();
        coloring[i]
    };
    for tri in (0..5).combinations(3) {
        let cs = [color_of(tri[0], tri[1]), color_of(tri[0], tri[2]), color_of(tri[1], tri[2])];
        ensure(cs.iter().unique().count() > 1, || format!("triangle {tri:?} is monochromatic"))?;
    }
    Ok(format!("counterexample {coloring:?}"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, u64, fn() -> Check);
    let criteria: [Criterion; 9] = [
        ("predicate suite", 5, predicates),
        ("classifier table", 1, classifier),
        ("Hales-Jewett", 1, hales_jewett),
        ("power witness", 30, prelim),
        ("pictures and extraction", 60, pictures),
        ("clean witness", 60, clean),
        ("theorem pipeline", 300, theorem),
        ("negative suite", 10, negative),
        ("classic cross-check", 60, classic),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(*limit) => Err("time limit exceeded".to_string()),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!(
            "criterion {}: {tag} {name} ({:.2}s, limit {limit}s) {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
        if outcome.is_err() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
