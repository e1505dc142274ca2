//! Multi-prime scan: one row of construction, certification, independence
//! and spectral figures per prime, plus a log-log growth fit.

use std::io::{self, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use crate::arith::Prime;
use crate::graph::ParabolaGraph;
use crate::indep::{exact_mis, greedy_mis, Budget};
use crate::spectral::{default_tol, ratio_bounds, spectrum, DEFAULT_VERTEX_CAP};
use crate::structure::{certify_c4_free, tait_grid};

pub const CSV_HEADER: &str = "p,n,m,loop_count,max_codegree,c4_count,grid_size,greedy_size,\
exact_alpha,alpha_optimal,lambda_min,hoffman_regular,elapsed_ms";

/// Largest `p` for which the scan builds the graph by default.
pub const DEFAULT_GRAPH_MAX_P: u64 = 31;

/// Default node limit per exact solve; keeps scan output independent of
/// machine speed.
pub const DEFAULT_EXACT_NODES: u64 = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Run the exact solver with this budget.
    pub exact: Option<Budget>,
    pub spectral: bool,
    /// Spectral tolerance; `None` means `1e-8 p`.
    pub tol: Option<f64>,
    /// Graph-derived columns are computed only for `p <= graph_max_p`.
    pub graph_max_p: u64,
    /// Record wall-clock time in `elapsed_ms`. Off keeps files reproducible.
    pub timing: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            exact: None,
            spectral: false,
            tol: None,
            graph_max_p: DEFAULT_GRAPH_MAX_P,
            timing: false,
        }
    }
}

/// Columns needing the constructed graph are `None` above `graph_max_p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub p: u64,
    pub n: u64,
    pub m: Option<u64>,
    pub loop_count: Option<u64>,
    pub max_codegree: Option<usize>,
    pub c4_count: Option<u64>,
    pub grid_size: usize,
    pub greedy_size: Option<usize>,
    pub exact_alpha: Option<usize>,
    pub alpha_optimal: bool,
    pub lambda_min: Option<f64>,
    pub hoffman_regular: Option<f64>,
    pub elapsed_ms: Option<u64>,
}

impl ScanRow {
    /// Largest independent set found by any method.
    pub fn best_lower_bound(&self) -> usize {
        self.grid_size
            .max(self.greedy_size.unwrap_or(0))
            .max(self.exact_alpha.unwrap_or(0))
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.p,
            self.n,
            opt(&self.m),
            opt(&self.loop_count),
            opt(&self.max_codegree),
            opt(&self.c4_count),
            self.grid_size,
            opt(&self.greedy_size),
            opt(&self.exact_alpha),
            self.alpha_optimal,
            opt(&self.lambda_min),
            opt(&self.hoffman_regular),
            opt(&self.elapsed_ms),
        )
    }
}

pub fn scan_row(p: Prime, opts: &ScanOptions) -> ScanRow {
    let start = Instant::now();
    let q = p.get();
    let mut row = ScanRow {
        p: q,
        n: q * q,
        m: None,
        loop_count: None,
        max_codegree: None,
        c4_count: None,
        grid_size: tait_grid(p).size(),
        greedy_size: None,
        exact_alpha: None,
        alpha_optimal: false,
        lambda_min: None,
        hoffman_regular: None,
        elapsed_ms: None,
    };
    if q <= opts.graph_max_p {
        if let Ok(g) = ParabolaGraph::build(p) {
            row.m = Some(g.edge_count() as u64);
            row.loop_count = Some(g.loop_vertices().len() as u64);
            let report = certify_c4_free(g.bits());
            row.max_codegree = Some(report.max_codegree);
            row.c4_count = Some(report.c4_count);
            row.greedy_size = Some(greedy_mis(g.bits()).size());
            if let Some(budget) = opts.exact {
                let r = exact_mis(g.bits(), budget);
                row.exact_alpha = Some(r.size());
                row.alpha_optimal = r.optimal;
            }
            if opts.spectral && g.vertex_count() <= DEFAULT_VERTEX_CAP {
                let tol = opts.tol.unwrap_or_else(|| default_tol(p));
                if let Ok(s) = spectrum(&g, tol) {
                    let r = ratio_bounds(&s, p);
                    row.lambda_min = Some(r.lambda_min);
                    row.hoffman_regular = Some(r.hoffman_regular);
                }
            }
        }
    }
    if opts.timing {
        row.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    row
}

/// Rows for `primes` in input order, computed on up to `jobs` threads.
pub fn run_scan(primes: &[Prime], opts: &ScanOptions, jobs: usize) -> Vec<ScanRow> {
    let jobs = jobs.clamp(1, primes.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<ScanRow>>> = Mutex::new(vec![None; primes.len()]);
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&p) = primes.get(i) else { break };
                let row = scan_row(p, opts);
                slots.lock().expect("scan worker panicked")[i] = Some(row);
            });
        }
    });
    slots
        .into_inner()
        .expect("scan worker panicked")
        .into_iter()
        .map(|r| r.expect("every prime scanned"))
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`; points with `x` or `y` not
/// positive are skipped. `None` with fewer than two distinct `x`.
pub fn fit_log_log(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|l| l.0).sum::<f64>() / k;
    let my = logs.iter().map(|l| l.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|l| (l.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|l| (l.0 - mx) * (l.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Which column the growth fit uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitColumn {
    #[default]
    BestLowerBound,
    GridSize,
}

pub fn fit_rows(rows: &[ScanRow], column: FitColumn) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| {
            let y = match column {
                FitColumn::BestLowerBound => r.best_lower_bound(),
                FitColumn::GridSize => r.grid_size,
            };
            (r.p as f64, y as f64)
        })
        .collect();
    fit_log_log(&pts)
}

/// Writes the header, one line per row and, if given, `fit_exponent=<slope>`.
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], fit: Option<f64>, mut w: W) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        row.write_csv(&mut w)?;
    }
    if let Some(slope) = fit {
        writeln!(w, "fit_exponent={slope:.6}")?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..20).map(|x| (x as f64, 3.0 * (x as f64).powf(1.5))).collect();
        assert!((fit_log_log(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(fit_log_log(&[(2.0, 1.0)]), None);
        assert_eq!(fit_log_log(&[(2.0, 1.0), (2.0, 5.0)]), None);
    }

    #[test]
    fn row_p3_exact() {
        let p = Prime::new(3).unwrap();
        let opts = ScanOptions {
            exact: Some(Budget::UNLIMITED),
            spectral: true,
            ..Default::default()
        };
        let row = scan_row(p, &opts);
        assert_eq!(row.n, 9);
        assert_eq!(row.m, Some(12));
        assert_eq!(row.loop_count, Some(3));
        assert_eq!(row.max_codegree, Some(1));
        assert_eq!(row.c4_count, Some(0));
        assert_eq!(row.grid_size, 0);
        assert_eq!(row.exact_alpha, Some(4));
        assert!(row.alpha_optimal);
        assert!(row.lambda_min.unwrap() < 0.0);
        assert_eq!(row.elapsed_ms, None);
        assert!(row.grid_size <= row.best_lower_bound());
    }

    #[test]
    fn large_prime_row_skips_graph_columns() {
        let row = scan_row(Prime::new(101).unwrap(), &ScanOptions::default());
        assert_eq!(row.grid_size, 50);
        assert_eq!(row.m, None);
        let mut buf = Vec::new();
        row.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "101,10201,,,,,50,,,false,,,\n");
    }

    #[test]
    fn parallel_scan_preserves_order() {
        let primes = Prime::range(3, 60);
        let a = run_scan(&primes, &ScanOptions::default(), 1);
        let b = run_scan(&primes, &ScanOptions::default(), 4);
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].p < w[1].p));
    }
}
