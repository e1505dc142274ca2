//! Structural certificates: codegree bounds (C4-freeness) and the
//! independent grid `(0, sqrt(p)/4) x (p/4, p/2)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{add_raw, inv_raw, mul_raw, sub_raw, Prime};
use crate::bits::{intersection_count, BitGraph};
use crate::graph::{partner_w, Adjacency, ParabolaGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("codegree needs two distinct vertices, got {0} twice")]
    SameVertex(usize),
    #[error("vertex id {id} out of range for {n} vertices")]
    OutOfRange { id: usize, n: usize },
    #[error("codegree methods disagree on ({u}, {v}): bit rows give {bits}, closed form gives {closed}")]
    MethodDisagreement {
        u: usize,
        v: usize,
        bits: usize,
        closed: usize,
    },
}

/// Result of a full pair scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodegreeReport {
    pub max_codegree: usize,
    /// First pair (row-major id order) whose codegree exceeds 1.
    pub violating_pair: Option<(usize, usize)>,
    /// Sum over pairs of `C(codegree, 2)`.
    pub c4_count: u64,
    pub pairs_checked: u64,
}

impl CodegreeReport {
    pub fn is_c4_free(&self) -> bool {
        self.c4_count == 0
    }
}

/// `|N(u) ∩ N(v)|` from the stored rows.
pub fn codegree_bits(g: &BitGraph, u: usize, v: usize) -> usize {
    intersection_count(g.row(u), g.row(v))
}

/// Codegree from the subtraction identity
/// `(x_u - x_v)(x_u + x_v + 2z) = y_u - y_v`, which pins down at most one
/// common neighbour `(z, w)`.
pub fn codegree_closed_form(p: Prime, u: Vertex, v: Vertex) -> usize {
    let q = p.get();
    let (xu, yu, xv, yv) = (u.x(), u.y(), v.x(), v.y());
    if xu == xv {
        return 0;
    }
    let dx_inv = inv_raw(sub_raw(xu, xv, q), q).expect("distinct x");
    let two_inv = inv_raw(2, q).expect("p is odd");
    let ratio = mul_raw(sub_raw(yu, yv, q), dx_inv, q);
    let z = mul_raw(sub_raw(ratio, add_raw(xu, xv, q), q), two_inv, q);
    let w = partner_w(q, xu, yu, z);
    let cand = (z, w);
    if cand == (xu, yu) || cand == (xv, yv) {
        0
    } else {
        1
    }
}

/// Codegree of two distinct vertices, computed both ways.
pub fn codegree(g: &ParabolaGraph, u: Vertex, v: Vertex) -> Result<usize, StructureError> {
    if u == v {
        return Err(StructureError::SameVertex(u.id()));
    }
    let bits = codegree_bits(g.bits(), u.id(), v.id());
    let closed = codegree_closed_form(g.prime(), u, v);
    if bits != closed {
        return Err(StructureError::MethodDisagreement {
            u: u.id(),
            v: v.id(),
            bits,
            closed,
        });
    }
    Ok(bits)
}

/// Scans every unordered pair of distinct vertices.
pub fn certify_c4_free(g: &BitGraph) -> CodegreeReport {
    let n = g.vertex_count();
    let mut report = CodegreeReport {
        max_codegree: 0,
        violating_pair: None,
        c4_count: 0,
        pairs_checked: 0,
    };
    for u in 0..n {
        let ru = g.row(u);
        for v in u + 1..n {
            let c = intersection_count(ru, g.row(v));
            report.pairs_checked += 1;
            if c > report.max_codegree {
                report.max_codegree = c;
            }
            if c > 1 {
                report.c4_count += (c * (c - 1) / 2) as u64;
                if report.violating_pair.is_none() {
                    report.violating_pair = Some((u, v));
                }
            }
        }
    }
    report
}

/// Integer points of the grid `(0, sqrt(p)/4) x (p/4, p/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub p: Prime,
    /// `x >= 1` with `16 x^2 < p`.
    pub xs: Vec<u64>,
    /// `y` with `4y > p` and `2y < p`.
    pub ys: Vec<u64>,
}

impl GridSpec {
    pub fn size(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Row-major product `xs x ys`.
    pub fn vertices(&self) -> Vec<Vertex> {
        self.xs
            .iter()
            .flat_map(|&x| self.ys.iter().map(move |&y| Vertex::new(self.p, x, y)))
            .collect()
    }

    pub fn ids(&self) -> Vec<usize> {
        self.vertices().into_iter().map(Vertex::id).collect()
    }
}

pub fn tait_grid(p: Prime) -> GridSpec {
    let q = p.get();
    let xs = (1..).take_while(|&x: &u64| 16 * x * x < q).collect();
    let ys = (q / 4 + 1..).take_while(|&y| 2 * y < q).collect();
    GridSpec { p, xs, ys }
}

/// Outcome of an independence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Independence {
    Independent,
    /// An edge inside the set, as `(u, v)` ids with `u` earlier in the input.
    Edge(usize, usize),
}

impl Independence {
    pub fn holds(self) -> bool {
        self == Independence::Independent
    }
}

/// Checks that no two members of `set` (vertex ids) are adjacent.
pub fn verify_independent<A: Adjacency + ?Sized>(
    g: &A,
    set: &[usize],
) -> Result<Independence, StructureError> {
    let n = g.vertex_count();
    if let Some(&id) = set.iter().find(|&&id| id >= n) {
        return Err(StructureError::OutOfRange { id, n });
    }
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if u != v && g.is_edge(u, v) {
                return Ok(Independence::Edge(u, v));
            }
        }
    }
    Ok(Independence::Independent)
}

/// Actual grid size against the nominal `p^{3/2} / 16`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridBound {
    pub p: u64,
    pub size: usize,
    pub nominal: f64,
    pub ratio: f64,
}

pub fn grid_size_bound(p: Prime) -> GridBound {
    let size = tait_grid(p).size();
    let nominal = (p.get() as f64).powf(1.5) / 16.0;
    GridBound {
        p: p.get(),
        size,
        nominal,
        ratio: size as f64 / nominal,
    }
}

/// Structural certification summary, serialized as the `check` JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub p: u64,
    pub max_codegree: Option<usize>,
    pub c4_count: Option<u64>,
    pub grid_size: usize,
    pub grid_independent: bool,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_profile_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ParabolaRelation;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn p3_codegree_examples() {
        let p = prime(3);
        let g = ParabolaGraph::build(p).unwrap();
        assert_eq!(codegree(&g, Vertex::new(p, 0, 1), Vertex::new(p, 0, 2)), Ok(0));
        let c = codegree(&g, Vertex::new(p, 0, 0), Vertex::new(p, 1, 0)).unwrap();
        assert!(c <= 1);
        assert_eq!(
            codegree(&g, Vertex::new(p, 0, 0), Vertex::new(p, 0, 0)),
            Err(StructureError::SameVertex(0))
        );
        let r = certify_c4_free(g.bits());
        assert_eq!(r.max_codegree, 1);
        assert_eq!(r.c4_count, 0);
        assert_eq!(r.pairs_checked, 36);
        assert_eq!(r.violating_pair, None);
    }

    #[test]
    fn methods_agree_exhaustively_small_p() {
        for p in Prime::range(3, 17) {
            let g = ParabolaGraph::build(p).unwrap();
            let n = g.vertex_count();
            for u in 0..n {
                for v in u + 1..n {
                    let (a, b) = (g.vertex(u), g.vertex(v));
                    let c = codegree(&g, a, b).unwrap();
                    assert!(c <= 1);
                    if a.x() == b.x() {
                        assert_eq!(c, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn p17_is_c4_free() {
        let g = ParabolaGraph::build(prime(17)).unwrap();
        let r = certify_c4_free(g.bits());
        assert_eq!(r.c4_count, 0);
        assert_eq!(r.pairs_checked, 289 * 288 / 2);
    }

    #[test]
    fn planted_violation_is_caught() {
        let g = ParabolaGraph::build(prime(7)).unwrap();
        let mut bits = g.bits().clone();
        let n = bits.vertex_count();
        // u, v share neighbour w; add an edge t–v with t ∈ N(u) \ N[v].
        let (u, v) = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .find(|&(u, v)| codegree_bits(&bits, u, v) == 1)
            .unwrap();
        let t = bits
            .neighbors(u)
            .find(|&t| t != v && !bits.has_edge(t, v))
            .unwrap();
        bits.add_edge(t, v);
        let r = certify_c4_free(&bits);
        assert!(r.c4_count >= 1);
        assert!(r.max_codegree >= 2);
        assert!(r.violating_pair.is_some());
    }

    #[test]
    fn grid_examples() {
        let g = tait_grid(prime(17));
        assert_eq!(g.xs, vec![1]);
        assert_eq!(g.ys, vec![5, 6, 7, 8]);
        assert_eq!(g.size(), 4);
        assert!(tait_grid(prime(3)).is_empty());
        let g = tait_grid(prime(257));
        assert_eq!(g.xs, vec![1, 2, 3, 4]);
        assert_eq!(g.ys, (65..=128).collect::<Vec<_>>());
        assert_eq!(g.size(), 256);
        assert_eq!(tait_grid(prime(101)).size(), 50);
    }

    #[test]
    fn grid_bound_examples() {
        let b = grid_size_bound(prime(257));
        assert_eq!(b.size, 256);
        assert!((b.nominal - 257.501_463_891_5).abs() < 1e-6);
        assert!((b.ratio - 0.994).abs() < 1e-3);
        let b = grid_size_bound(prime(101));
        assert_eq!(b.size, 50);
        assert!((b.nominal - 63.439_839_858).abs() < 1e-6);
        let b = grid_size_bound(prime(3));
        assert_eq!(b.size, 0);
        assert!((b.nominal - 0.324_759_526).abs() < 1e-6);
    }

    #[test]
    fn verify_examples() {
        let p = prime(3);
        let g = ParabolaGraph::build(p).unwrap();
        let s = [Vertex::new(p, 0, 0).id(), Vertex::new(p, 1, 1).id()];
        assert_eq!(verify_independent(&g, &s), Ok(Independence::Edge(0, 4)));
        assert_eq!(
            verify_independent(&g, &[9]),
            Err(StructureError::OutOfRange { id: 9, n: 9 })
        );
        for q in [17, 101] {
            let p = prime(q);
            let ids = tait_grid(p).ids();
            let rel = ParabolaRelation { p };
            assert!(verify_independent(&rel, &ids).unwrap().holds());
        }
        let p = prime(17);
        let g = ParabolaGraph::build(p).unwrap();
        assert!(verify_independent(&g, &tait_grid(p).ids()).unwrap().holds());
    }

    #[test]
    fn grid_size_lower_bound() {
        for p in Prime::range(17, 1009) {
            let q = p.get() as f64;
            let lower = ((q - 1.0).sqrt().floor() / 4.0 - 1.0) * ((q - 2.0) / 4.0 - 1.0);
            assert!(tait_grid(p).size() as f64 >= lower, "p = {p}");
        }
    }
}
