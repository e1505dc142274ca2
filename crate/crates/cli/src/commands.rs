use std::fs;
use std::io::Write;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use parabola_core::graph::Point;
use parabola_core::indep::{best_lower_bound, exact_mis, greedy_mis, oracle_mis, Budget, MisReport};
use parabola_core::scan::{fit_rows, run_scan, write_scan_csv, FitColumn, ScanOptions};
use parabola_core::spectral::{spectral_scaling, write_spectral_csv};
use parabola_core::structure::{
    certify_c4_free, grid_size_bound, tait_grid, verify_independent, Certification, Independence,
};
use parabola_core::{ParabolaGraph, ParabolaRelation, Prime, Vertex};
use serde::Serialize;

use crate::output::{write_atomically, write_json};
use crate::{
    CheckArgs, ExportArgs, Fit, Format, GridArgs, InfoArgs, MisArgs, Method, Outcome, ScanArgs,
    SpectrumArgs,
};

/// Largest p for which `check` runs the pair scan without `--full`.
const CHECK_FULL_CAP: u64 = 31;

fn build(p: Prime) -> Result<ParabolaGraph> {
    ParabolaGraph::build(p).with_context(|| format!("cannot construct the graph for p = {p}"))
}

#[derive(Serialize)]
struct InfoReport {
    p: u64,
    n: usize,
    m: usize,
    loop_count: usize,
    loops: Vec<Point>,
    degree_profile: Vec<(usize, usize)>,
}

pub fn info(a: InfoArgs) -> Result<Outcome> {
    let p = a.prime.p;
    let g = build(p)?;
    let report = InfoReport {
        p: p.get(),
        n: g.vertex_count(),
        m: g.edge_count(),
        loop_count: g.loop_vertices().len(),
        loops: g
            .loop_vertices()
            .iter()
            .map(|&id| Point::from(g.vertex(id)))
            .collect(),
        degree_profile: g.degree_profile(),
    };
    println!("p={} n={} m={} loops={}", report.p, report.n, report.m, report.loop_count);
    let shown: Vec<String> = g
        .loop_vertices()
        .iter()
        .take(16)
        .map(|&id| g.vertex(id).to_string())
        .collect();
    let more = if report.loop_count > 16 { " ..." } else { "" };
    println!("loop vertices: {}{more}", shown.join(" "));
    for (d, count) in &report.degree_profile {
        println!("degree {d}: {count} vertices");
    }
    if let Some(path) = &a.out {
        write_json(path, &report)?;
    }
    Ok(Outcome::Pass)
}

fn expected_profile(p: Prime) -> Vec<(usize, usize)> {
    let q = p.get() as usize;
    vec![(q - 1, q), (q, q * q - q)]
}

pub fn check(a: CheckArgs) -> Result<Outcome> {
    let start = Instant::now();
    let p = a.prime.p;
    let grid = tait_grid(p);
    let grid_check = verify_independent(&ParabolaRelation { p }, &grid.ids())?;
    let mut cert = Certification {
        p: p.get(),
        max_codegree: None,
        c4_count: None,
        grid_size: grid.size(),
        grid_independent: grid_check.holds(),
        elapsed_ms: 0,
        degree_profile_ok: None,
        violation: None,
    };
    if let Independence::Edge(u, v) = grid_check {
        cert.violation = Some(format!(
            "grid vertices {} and {} are adjacent",
            Vertex::from_id(p, u),
            Vertex::from_id(p, v)
        ));
    }

    let scan_pairs = !a.grid_only && (a.full || p.get() <= CHECK_FULL_CAP);
    if scan_pairs {
        if p.get() > CHECK_FULL_CAP {
            eprintln!("warning: full pair scan at p = {p} costs O(p^5) word operations");
        }
        let g = build(p)?;
        let q = p.get() as usize;
        let profile_ok = g.degree_profile() == expected_profile(p)
            && g.edge_count() == q * (q * q - 1) / 2
            && g.loop_vertices().len() == q;
        cert.degree_profile_ok = Some(profile_ok);
        if !profile_ok && cert.violation.is_none() {
            cert.violation = Some(format!("degree profile {:?}", g.degree_profile()));
        }
        let report = certify_c4_free(g.bits());
        cert.max_codegree = Some(report.max_codegree);
        cert.c4_count = Some(report.c4_count);
        if let Some((u, v)) = report.violating_pair {
            if cert.violation.is_none() {
                cert.violation = Some(format!(
                    "vertices {} and {} share {} neighbours",
                    g.vertex(u),
                    g.vertex(v),
                    report.max_codegree
                ));
            }
        }
    } else {
        println!("pair scan skipped (p > {CHECK_FULL_CAP} without --full, or --grid-only)");
    }
    cert.elapsed_ms = start.elapsed().as_millis() as u64;

    if let Some(path) = &a.out {
        write_json(path, &cert)?;
    }
    if let Some(violation) = &cert.violation {
        println!("{}", serde_json::to_string(&cert)?);
        eprintln!("certificate failed: {violation}");
        return Ok(Outcome::CertificateFailed);
    }
    if let (Some(mc), Some(c4)) = (cert.max_codegree, cert.c4_count) {
        println!("p={p}: C4-free (max codegree {mc}, c4_count {c4}), degree profile ok");
    }
    println!("p={p}: grid of {} vertices is independent", cert.grid_size);
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct GridReport {
    p: u64,
    xs: Vec<u64>,
    ys: Vec<u64>,
    size: usize,
    nominal: f64,
    ratio: f64,
    independent: bool,
    vertices: Vec<Point>,
}

pub fn grid(a: GridArgs) -> Result<Outcome> {
    let p = a.prime.p;
    let spec = tait_grid(p);
    let bound = grid_size_bound(p);
    let independent = verify_independent(&ParabolaRelation { p }, &spec.ids())?.holds();
    let range = |v: &[u64]| match (v.first(), v.last()) {
        (Some(lo), Some(hi)) => format!("{lo}..={hi}"),
        _ => "empty".to_string(),
    };
    println!("p={p}: x in {}, y in {}", range(&spec.xs), range(&spec.ys));
    println!(
        "size={} nominal p^1.5/16={:.3} ratio={:.4} independent={independent}",
        bound.size, bound.nominal, bound.ratio
    );
    if let Some(path) = &a.out {
        let vertices: Vec<Point> = spec.vertices().into_iter().map(Point::from).collect();
        match a.format {
            Format::Json => write_json(
                path,
                &GridReport {
                    p: p.get(),
                    xs: spec.xs.clone(),
                    ys: spec.ys.clone(),
                    size: bound.size,
                    nominal: bound.nominal,
                    ratio: bound.ratio,
                    independent,
                    vertices,
                },
            )?,
            Format::Csv => write_atomically(path, |w| {
                writeln!(w, "x,y")?;
                for Point([x, y]) in &vertices {
                    writeln!(w, "{x},{y}")?;
                }
                Ok(())
            })?,
            Format::Dimacs => bail!("grid output supports csv or json"),
        }
    }
    Ok(if independent {
        Outcome::Pass
    } else {
        Outcome::CertificateFailed
    })
}

fn budget(secs: u64, nodes: Option<u64>) -> Budget {
    Budget {
        time: Some(Duration::from_secs(secs)),
        nodes,
    }
}

pub fn mis(a: MisArgs) -> Result<Outcome> {
    if let Some(path) = &a.verify {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let report: MisReport = serde_json::from_str(&text)
            .with_context(|| format!("{} is not a witness report", path.display()))?;
        return match report.verify() {
            Ok(()) => {
                println!(
                    "witness of size {} for p={} re-verified independent",
                    report.size, report.p
                );
                Ok(Outcome::Pass)
            }
            Err(e) => {
                eprintln!("witness rejected: {e}");
                Ok(Outcome::CertificateFailed)
            }
        };
    }
    let p = a.p.expect("clap requires --p without --verify");
    let limit = budget(a.budget.budget_secs, a.budget.budget_nodes);
    let result = match a.method {
        Method::Best => best_lower_bound(p, limit),
        Method::Greedy => {
            if p.square() > parabola_core::indep::IMPLICIT_GREEDY_CAP {
                bail!("greedy is limited to p^2 <= {}", parabola_core::indep::IMPLICIT_GREEDY_CAP);
            }
            match ParabolaGraph::build(p) {
                Ok(g) => greedy_mis(g.bits()),
                Err(_) => greedy_mis(&ParabolaRelation { p }),
            }
        }
        Method::Exact => exact_mis(build(p)?.bits(), limit),
        Method::Oracle => oracle_mis(build(p)?.bits())?,
    };
    let report = result.report(p);
    println!(
        "p={p} method={} size={} optimal={} budget_exhausted={}",
        result.provenance.as_str(),
        report.size,
        report.optimal,
        report.budget_exhausted
    );
    if let Some(path) = &a.out {
        write_json(path, &report)?;
    }
    Ok(Outcome::Pass)
}

pub fn spectrum(a: SpectrumArgs) -> Result<Outcome> {
    let primes = match (a.p, a.pmin, a.pmax) {
        (Some(p), _, _) => vec![p],
        (None, Some(lo), Some(hi)) if lo <= hi => Prime::range(lo, hi),
        (None, Some(lo), Some(hi)) => bail!("empty range {lo}..{hi}"),
        _ => bail!("give --p or both --pmin and --pmax"),
    };
    if primes.is_empty() {
        bail!("no odd primes in range");
    }
    let rows = spectral_scaling(&primes, a.tol)?;
    println!("p    lambda_min   lambda_max  gap/sqrt(p)  hoffman_reg  hoffman_dmin  hoffman_reg/p^1.5");
    for r in &rows {
        println!(
            "{:<4} {:>11.6} {:>12.6} {:>12.6} {:>12.4} {:>13.4} {:>18.6}",
            r.p, r.lambda_min, r.lambda_max, r.normalized_gap, r.hoffman_regular, r.hoffman_dmin, r.hoffman_per_p32
        );
    }
    if let Some(path) = &a.out {
        write_atomically(path, |w| Ok(write_spectral_csv(&rows, w)?))?;
    }
    Ok(Outcome::Pass)
}

pub fn scan(a: ScanArgs) -> Result<Outcome> {
    if a.pmin > a.pmax {
        bail!("--pmin {} exceeds --pmax {}", a.pmin, a.pmax);
    }
    let primes = Prime::range(a.pmin, a.pmax);
    if primes.is_empty() {
        bail!("no odd primes in {}..={}", a.pmin, a.pmax);
    }
    let opts = ScanOptions {
        exact: a.exact.then(|| budget(a.budget_secs, Some(a.budget_nodes))),
        spectral: a.spectral,
        tol: a.tol,
        graph_max_p: a.graph_max,
        timing: a.timing,
    };
    let rows = run_scan(&primes, &opts, a.jobs);
    let fit = a.fit.and_then(|f| {
        fit_rows(
            &rows,
            match f {
                Fit::Best => FitColumn::BestLowerBound,
                Fit::Grid => FitColumn::GridSize,
            },
        )
    });

    let mut failed = false;
    for r in &rows {
        let best = r.best_lower_bound();
        let c4 = r.c4_count.map_or("-".to_string(), |c| c.to_string());
        let exact = r.exact_alpha.map_or("-".to_string(), |e| {
            format!("{e}{}", if r.alpha_optimal { "" } else { "+" })
        });
        println!(
            "p={:<5} grid={:<6} greedy={:<6} exact={:<6} c4={c4}",
            r.p,
            r.grid_size,
            r.greedy_size.map_or("-".to_string(), |g| g.to_string()),
            exact,
        );
        if r.c4_count.is_some_and(|c| c > 0) || r.grid_size > best {
            failed = true;
        }
    }
    if let Some(slope) = fit {
        println!("fit_exponent={slope:.6}");
    }
    if let Some(path) = &a.out {
        write_atomically(path, |w| Ok(write_scan_csv(&rows, fit, w)?))?;
    }
    Ok(if failed {
        Outcome::CertificateFailed
    } else {
        Outcome::Pass
    })
}

pub fn export(a: ExportArgs) -> Result<Outcome> {
    let g = build(a.prime.p)?;
    match a.format {
        Format::Dimacs => write_atomically(&a.out, |w| Ok(g.export_dimacs(w)?))?,
        Format::Csv => write_atomically(&a.out, |w| Ok(g.export_csv(w)?))?,
        Format::Json => bail!("export supports dimacs or csv"),
    }
    println!("wrote {} edges to {}", g.edge_count(), a.out.display());
    Ok(Outcome::Pass)
}
