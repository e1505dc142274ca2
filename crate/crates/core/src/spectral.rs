//! Adjacency spectra, trace-moment identities and ratio-bound diagnostics.
//!
//! The ratio quantities here are reported, never asserted as bounds on α:
//! `Π_p` has `p` vertices of degree `p - 1`, so the regular-graph ratio
//! bound does not apply verbatim.

use std::io::{self, Write};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

use crate::arith::Prime;
use crate::bits::BitGraph;
use crate::graph::ParabolaGraph;

/// Default cap on the dense eigensolver, `61^2` vertices.
pub const DEFAULT_VERTEX_CAP: usize = 61 * 61;

pub const CSV_HEADER: &str =
    "p,lambda_min,lambda_max,normalized_gap,hoffman_regular,hoffman_dmin,sum_check,sum_sq_check";

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("{n} vertices exceeds the dense eigensolver cap of {cap}")]
    OverCap { n: usize, cap: usize },
    #[error("eigensolver did not converge")]
    NoConvergence,
    #[error("eigenpair residual {residual:e} exceeds tolerance {tol:e}")]
    Residual { residual: f64, tol: f64 },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Default tolerance `1e-8 * p`.
pub fn default_tol(p: Prime) -> f64 {
    1e-8 * p.get() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Largest `||A v - λ v||` over the computed eigenpairs.
    pub residual_tol: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn sum_sq(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * l).sum()
    }
}

pub fn adjacency_matrix(g: &BitGraph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    a
}

/// Full spectrum of a symmetric 0/1 adjacency matrix.
pub fn spectrum_with_cap(g: &BitGraph, tol: f64, cap: usize) -> Result<Spectrum, SpectralError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(SpectralError::OverCap { n, cap });
    }
    let a = adjacency_matrix(g);
    let eig = SymmetricEigen::try_new(a.clone(), f64::EPSILON, 0)
        .ok_or(SpectralError::NoConvergence)?;
    let mut residual: f64 = 0.0;
    let av = &a * &eig.eigenvectors;
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let r = (av.column(j) - eig.eigenvectors.column(j) * lambda).norm();
        residual = residual.max(r);
    }
    if !residual.is_finite() || residual > tol {
        return Err(SpectralError::Residual { residual, tol });
    }
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Ok(Spectrum {
        eigenvalues,
        residual_tol: residual,
    })
}

pub fn spectrum(g: &ParabolaGraph, tol: f64) -> Result<Spectrum, SpectralError> {
    spectrum_with_cap(g.bits(), tol, DEFAULT_VERTEX_CAP)
}

/// Deviation of the first two trace moments from `0` and `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentCheck {
    /// `|Σλ|`.
    pub sum_error: f64,
    /// `|Σλ² - 2m|`.
    pub sum_sq_error: f64,
}

impl MomentCheck {
    pub fn new(s: &Spectrum, edge_count: usize) -> Self {
        Self {
            sum_error: s.sum().abs(),
            sum_sq_error: (s.sum_sq() - 2.0 * edge_count as f64).abs(),
        }
    }

    /// `|Σλ| <= n tol` and `|Σλ² - 2m| <= n p tol`.
    pub fn holds(&self, n: usize, p: Prime, tol: f64) -> bool {
        self.sum_error <= n as f64 * tol && self.sum_sq_error <= n as f64 * p.get() as f64 * tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioBoundReport {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `n (-λ_min) / (p - λ_min)`.
    pub hoffman_regular: f64,
    /// `n (-λ_min) / (p - 1 - λ_min)`.
    pub hoffman_dmin: f64,
    /// `-λ_min / sqrt(p)`.
    pub normalized_gap: f64,
}

pub fn ratio_bounds(s: &Spectrum, p: Prime) -> RatioBoundReport {
    let n = s.len() as f64;
    let d = p.get() as f64;
    let lmin = s.lambda_min();
    RatioBoundReport {
        lambda_min: lmin,
        lambda_max: s.lambda_max(),
        hoffman_regular: n * -lmin / (d - lmin),
        hoffman_dmin: n * -lmin / (d - 1.0 - lmin),
        normalized_gap: -lmin / d.sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralRow {
    pub p: u64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub normalized_gap: f64,
    pub hoffman_regular: f64,
    pub hoffman_dmin: f64,
    pub sum_check: f64,
    pub sum_sq_check: f64,
    /// `hoffman_regular / p^{3/2}`.
    pub hoffman_per_p32: f64,
    pub residual: f64,
}

impl SpectralRow {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            self.p,
            self.lambda_min,
            self.lambda_max,
            self.normalized_gap,
            self.hoffman_regular,
            self.hoffman_dmin,
            self.sum_check,
            self.sum_sq_check
        )
    }
}

pub fn spectral_row(p: Prime, tol: f64) -> Result<SpectralRow, SpectralError> {
    let g = ParabolaGraph::build(p).map_err(|_| SpectralError::OverCap {
        n: p.square(),
        cap: DEFAULT_VERTEX_CAP,
    })?;
    let s = spectrum(&g, tol)?;
    let r = ratio_bounds(&s, p);
    let m = MomentCheck::new(&s, g.edge_count());
    Ok(SpectralRow {
        p: p.get(),
        lambda_min: r.lambda_min,
        lambda_max: r.lambda_max,
        normalized_gap: r.normalized_gap,
        hoffman_regular: r.hoffman_regular,
        hoffman_dmin: r.hoffman_dmin,
        sum_check: m.sum_error,
        sum_sq_check: m.sum_sq_error,
        hoffman_per_p32: r.hoffman_regular / (p.get() as f64).powf(1.5),
        residual: s.residual_tol,
    })
}

/// One diagnostic row per prime, in input order. `tol` of `None` uses
/// [`default_tol`] per prime.
pub fn spectral_scaling(primes: &[Prime], tol: Option<f64>) -> Result<Vec<SpectralRow>, SpectralError> {
    primes
        .iter()
        .map(|&p| spectral_row(p, tol.unwrap_or_else(|| default_tol(p))))
        .collect()
}

pub fn write_spectral_csv<W: Write>(rows: &[SpectralRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        row.write_csv(&mut w)?;
    }
    w.flush()
}
