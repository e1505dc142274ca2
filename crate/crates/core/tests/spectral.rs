use parabola_core::spectral::{
    default_tol, ratio_bounds, spectrum, spectrum_with_cap, MomentCheck, DEFAULT_VERTEX_CAP,
};
use parabola_core::{ParabolaGraph, Prime};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn relabelled_matrix_has_same_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in Prime::range(3, 13) {
        let g = ParabolaGraph::build(p).unwrap();
        let tol = default_tol(p);
        let s = spectrum(&g, tol).unwrap();
        let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
        perm.shuffle(&mut rng);
        let permuted = g.bits().permuted(&perm);
        assert_ne!(&permuted, g.bits());
        let t = spectrum_with_cap(&permuted, tol, DEFAULT_VERTEX_CAP).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(&t.eigenvalues) {
            assert!((a - b).abs() <= 10.0 * tol, "p={p}: {a} vs {b}");
        }
    }
}

#[test]
fn extreme_eigenvalue_windows_and_moments() {
    for p in Prime::range(3, 19) {
        let g = ParabolaGraph::build(p).unwrap();
        let tol = default_tol(p);
        let s = spectrum(&g, tol).unwrap();
        let q = p.get() as f64;
        assert!(s.lambda_max() >= q - 1.0 / q - tol && s.lambda_max() <= q + tol);
        assert!(s.lambda_min() >= -q - tol && s.lambda_min() < 0.0);
        assert!(MomentCheck::new(&s, g.edge_count()).holds(g.vertex_count(), p, tol));
        let r = ratio_bounds(&s, p);
        assert!(r.hoffman_regular <= r.hoffman_dmin);
        assert!(s.residual_tol <= tol);
    }
}
