//! The parabola graph `Π_p` on `F_p^2`, where `(x, y) ~ (z, w)` iff
//! `(x + z)^2 = y + w`, together with machinery to certify that it is
//! C4-free, exhibit large independent sets, and inspect its spectrum.

pub mod arith;
pub mod bits;
pub mod graph;
pub mod indep;
pub mod scan;
pub mod spectral;
pub mod structure;

pub use arith::{validate_prime, ArithError, FieldElement, Prime};
pub use bits::BitGraph;
pub use graph::{Adjacency, GraphError, ParabolaGraph, ParabolaRelation, Point, Vertex};
pub use indep::{
    best_lower_bound, exact_mis, greedy_mis, oracle_mis, Budget, IndependenceResult, MisReport,
    Provenance,
};
pub use spectral::{ratio_bounds, spectrum, RatioBoundReport, Spectrum};
pub use structure::{
    certify_c4_free, codegree, grid_size_bound, tait_grid, verify_independent, CodegreeReport,
    GridSpec, Independence,
};
