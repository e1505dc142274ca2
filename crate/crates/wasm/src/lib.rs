//! Browser bindings for the static demo page in `www/`.
//!
//! Three views: the `F_p^2` plane (neighbourhoods, loops, the independent
//! grid and a greedy independent set), the adjacency spectrum, and grid
//! growth against `p^{3/2}/16`.

use parabola_core::graph::{Adjacency, ParabolaRelation};
use parabola_core::indep::greedy_mis;
use parabola_core::scan::fit_log_log;
use parabola_core::spectral::{default_tol, ratio_bounds, spectrum_with_cap};
use parabola_core::structure::{grid_size_bound, tait_grid};
use parabola_core::{ParabolaGraph, Prime};
use wasm_bindgen::prelude::*;

/// Largest p drawn on the plane view.
pub const PLANE_MAX_P: u64 = 101;
/// Largest p for the in-browser eigensolver.
pub const SPECTRUM_MAX_P: u64 = 23;
/// Largest p for the growth chart.
pub const GROWTH_MAX_P: u64 = 20_000;

fn prime_up_to(p: u32, cap: u64) -> Result<Prime, String> {
    let p = Prime::new(p as u64).map_err(|e| e.to_string())?;
    if p.get() > cap {
        return Err(format!("p = {p} is above the demo limit of {cap}"));
    }
    Ok(p)
}

/// Vertex ids `x * p + y` for one plane view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneView {
    pub p: u32,
    pub neighbors: Vec<u32>,
    pub loops: Vec<u32>,
    pub grid: Vec<u32>,
    pub greedy: Vec<u32>,
}

pub fn plane_view(p: u32, x: u32, y: u32) -> Result<PlaneView, String> {
    let prime = prime_up_to(p, PLANE_MAX_P)?;
    if x >= p || y >= p {
        return Err(format!("({x}, {y}) is not a point of F_{p}^2"));
    }
    let rel = ParabolaRelation { p: prime };
    let mut neighbors = Vec::new();
    rel.for_each_neighbor((x * p + y) as usize, &mut |v| neighbors.push(v as u32));
    neighbors.sort_unstable();
    let q = p as u64;
    let loops = (0..q)
        .map(|lx| (lx * q + (2 * lx * lx) % q) as u32)
        .collect();
    let grid = tait_grid(prime).ids().into_iter().map(|v| v as u32).collect();
    let greedy = greedy_mis(&rel).set.into_iter().map(|v| v as u32).collect();
    Ok(PlaneView {
        p,
        neighbors,
        loops,
        grid,
        greedy,
    })
}

/// Adjacency eigenvalues, descending.
pub fn spectrum_values(p: u32) -> Result<Vec<f64>, String> {
    let prime = prime_up_to(p, SPECTRUM_MAX_P)?;
    let g = ParabolaGraph::build(prime).map_err(|e| e.to_string())?;
    let s = spectrum_with_cap(g.bits(), default_tol(prime), usize::MAX).map_err(|e| e.to_string())?;
    Ok(s.eigenvalues)
}

/// `[lambda_min, lambda_max, hoffman_regular, hoffman_dmin, normalized_gap]`.
pub fn spectrum_summary(p: u32) -> Result<Vec<f64>, String> {
    let prime = prime_up_to(p, SPECTRUM_MAX_P)?;
    let g = ParabolaGraph::build(prime).map_err(|e| e.to_string())?;
    let s = spectrum_with_cap(g.bits(), default_tol(prime), usize::MAX).map_err(|e| e.to_string())?;
    let r = ratio_bounds(&s, prime);
    Ok(vec![
        r.lambda_min,
        r.lambda_max,
        r.hoffman_regular,
        r.hoffman_dmin,
        r.normalized_gap,
    ])
}

/// Flattened `(p, grid_size, nominal)` triples for odd primes in range.
pub fn growth_table(pmin: u32, pmax: u32) -> Result<Vec<f64>, String> {
    if pmin > pmax || pmax as u64 > GROWTH_MAX_P {
        return Err(format!("range {pmin}..={pmax} is outside 3..={GROWTH_MAX_P}"));
    }
    Ok(Prime::range(pmin as u64, pmax as u64)
        .into_iter()
        .flat_map(|p| {
            let b = grid_size_bound(p);
            [p.get() as f64, b.size as f64, b.nominal]
        })
        .collect())
}

/// Log-log slope of grid size against p over the range.
pub fn growth_exponent(pmin: u32, pmax: u32) -> Result<f64, String> {
    let table = growth_table(pmin, pmax)?;
    let pts: Vec<(f64, f64)> = table.chunks(3).map(|c| (c[0], c[1])).collect();
    fit_log_log(&pts).ok_or_else(|| "need at least two primes with a non-empty grid".to_string())
}

// JS-facing wrappers.

#[wasm_bindgen(js_name = plane)]
pub fn js_plane(p: u32, x: u32, y: u32) -> Result<Plane, JsValue> {
    plane_view(p, x, y).map(Plane).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub struct Plane(PlaneView);

#[wasm_bindgen]
impl Plane {
    #[wasm_bindgen(getter)]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn neighbors(&self) -> Vec<u32> {
        self.0.neighbors.clone()
    }

    pub fn loops(&self) -> Vec<u32> {
        self.0.loops.clone()
    }

    pub fn grid(&self) -> Vec<u32> {
        self.0.grid.clone()
    }

    pub fn greedy(&self) -> Vec<u32> {
        self.0.greedy.clone()
    }
}

#[wasm_bindgen(js_name = spectrum)]
pub fn js_spectrum(p: u32) -> Result<Vec<f64>, JsValue> {
    spectrum_values(p).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = spectrumSummary)]
pub fn js_spectrum_summary(p: u32) -> Result<Vec<f64>, JsValue> {
    spectrum_summary(p).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = growth)]
pub fn js_growth(pmin: u32, pmax: u32) -> Result<Vec<f64>, JsValue> {
    growth_table(pmin, pmax).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = growthExponent)]
pub fn js_growth_exponent(pmin: u32, pmax: u32) -> Result<f64, JsValue> {
    growth_exponent(pmin, pmax).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_p3_origin() {
        let v = plane_view(3, 0, 0).unwrap();
        assert_eq!(v.neighbors, vec![4, 7]); // (1,1) and (2,1)
        assert_eq!(v.loops, vec![0, 5, 8]);
        assert!(v.grid.is_empty());
        assert!(v.greedy.len() >= 3);
    }

    #[test]
    fn plane_rejects_bad_input() {
        assert!(plane_view(4, 0, 0).is_err());
        assert!(plane_view(5, 5, 0).is_err());
        assert!(plane_view(103, 0, 0).is_err());
    }

    #[test]
    fn plane_grid_p17() {
        let v = plane_view(17, 1, 5).unwrap();
        assert_eq!(v.grid, vec![22, 23, 24, 25]);
        assert_eq!(v.neighbors.len(), 17);
    }

    #[test]
    fn spectrum_views() {
        let ev = spectrum_values(5).unwrap();
        assert_eq!(ev.len(), 25);
        let sum: f64 = ev.iter().sum();
        assert!(sum.abs() < 1e-6);
        let s = spectrum_summary(5).unwrap();
        assert!(s[0] < 0.0 && s[2] <= s[3]);
        assert!(spectrum_values(29).is_err());
    }

    #[test]
    fn growth_views() {
        let t = growth_table(17, 17).unwrap();
        assert_eq!(t[..2], [17.0, 4.0]);
        let e = growth_exponent(100, 2000).unwrap();
        assert!((e - 1.552).abs() < 1e-3);
        assert!(growth_table(10, 5).is_err());
        assert!(growth_exponent(3, 13).is_err());
    }
}
