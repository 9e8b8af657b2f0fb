//! Eigenvalues of `-L` in closed form.
//!
//! For `j != 0`, `E_j = n cos θ - α_j sin θ` with
//! `α_j = cot(πj/n) + csc(πj/n)` for odd `j` and `cot(πj/n) - csc(πj/n)` for
//! even `j`. `E_0 = 0` belongs to the uniform eigenvector.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::ChiralCompleteGraph;
use crate::linalg;

/// Closed-form spectrum of `-L`, indexed by Fourier label `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpectrum {
    pub n: usize,
    pub theta: f64,
    pub eigenvalues: Vec<f64>,
    /// `alphas[0]` is an unused placeholder.
    pub alphas: Vec<f64>,
}

impl WalkSpectrum {
    pub fn new(g: &ChiralCompleteGraph) -> Self {
        walk_spectrum(g)
    }

    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Number of `j != 0` with `E_j < 0`.
    pub fn negative_count(&self) -> usize {
        self.eigenvalues[1..].iter().filter(|&&e| e < 0.0).count()
    }

    /// Smallest `|E_j|` over `j != 0`.
    pub fn min_abs_nonzero_label(&self) -> (usize, f64) {
        self.eigenvalues
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, e)| (j, e.abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("n >= 3")
    }
}

pub fn alpha(j: usize, n: usize) -> Result<f64> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Domain(format!("alpha needs odd n >= 3, got n = {n}")));
    }
    if j == 0 || j >= n {
        return Err(Error::Domain(format!("alpha_j is defined for 1 <= j <= n-1, got j = {j}")));
    }
    Ok(alpha_unchecked(j, n))
}

fn alpha_unchecked(j: usize, n: usize) -> f64 {
    let x = PI * j as f64 / n as f64;
    let (sin, cos) = x.sin_cos();
    if j % 2 == 1 {
        (cos + 1.0) / sin
    } else {
        (cos - 1.0) / sin
    }
}

pub fn walk_eigenvalue(j: usize, g: &ChiralCompleteGraph) -> f64 {
    assert!(j < g.n(), "label {j} out of range for n = {}", g.n());
    if j == 0 {
        return 0.0;
    }
    let (sin, cos) = g.theta().sin_cos();
    g.n() as f64 * cos - alpha_unchecked(j, g.n()) * sin
}

pub fn walk_spectrum(g: &ChiralCompleteGraph) -> WalkSpectrum {
    let n = g.n();
    let alphas = std::iter::once(0.0)
        .chain((1..n).map(|j| alpha_unchecked(j, n)))
        .collect();
    let eigenvalues = (0..n).map(|j| walk_eigenvalue(j, g)).collect();
    WalkSpectrum {
        n,
        theta: g.theta(),
        eigenvalues,
        alphas,
    }
}

/// Eigenvalues of `-L` from a dense Hermitian eigensolver, ascending.
pub fn dense_walk_spectrum(g: &ChiralCompleteGraph) -> Result<Vec<f64>> {
    let mut neg_l = g.laplacian();
    debug_assert_eq!(neg_l.hermiticity_defect(), 0.0);
    neg_l.scale(-1.0);
    linalg::hermitian_eigenvalues(&neg_l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn alpha_small_cases() {
        assert_abs_diff_eq!(alpha(1, 5).unwrap(), 3.077_683_537_175_253_6, epsilon = 1e-12);
        assert_abs_diff_eq!(alpha(2, 5).unwrap(), -0.726_542_528_005_360_8, epsilon = 1e-12);
        assert_abs_diff_eq!(alpha(4, 5).unwrap(), -alpha(1, 5).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn alpha_domain_errors() {
        assert!(matches!(alpha(0, 5), Err(Error::Domain(_))));
        assert!(matches!(alpha(5, 5), Err(Error::Domain(_))));
        assert!(matches!(alpha(1, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn alpha_one_grows_like_two_n_over_pi() {
        for n in [101usize, 1023, 4097] {
            let a = alpha(1, n).unwrap();
            let approx = 2.0 * n as f64 / PI;
            assert!((a / approx - 1.0).abs() < 0.01, "n = {n}: {a} vs {approx}");
        }
    }

    #[test]
    fn zero_phase_spectrum_is_complete_graph() {
        let s = walk_spectrum(&ChiralCompleteGraph::new(5, 0.0).unwrap());
        assert_eq!(s.eigenvalues, vec![0.0, 5.0, 5.0, 5.0, 5.0]);
    }

    #[test]
    fn n5_theta06_values() {
        let s = walk_spectrum(&ChiralCompleteGraph::new(5, 0.6).unwrap());
        let expected = [0.0, 2.388_887_229_790_575, 4.536_914_844_588_02, 3.716_441_304_508_763, 5.864_468_919_306_208];
        for (got, want) in s.eigenvalues.iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn spectrum_invariants() {
        let s = walk_spectrum(&ChiralCompleteGraph::new(21, 1.1).unwrap());
        assert_eq!(s.eigenvalues[0], 0.0);
        for j in 1..21 {
            assert_abs_diff_eq!(s.alphas[21 - j], -s.alphas[j], epsilon = 1e-12);
            if j % 2 == 1 {
                assert!(s.alphas[j] > 0.0);
            } else {
                assert!(s.alphas[j] < 0.0);
            }
        }
    }

    #[test]
    fn dense_matches_closed_form_n5() {
        let g = ChiralCompleteGraph::new(5, 0.6).unwrap();
        let dense = dense_walk_spectrum(&g).unwrap();
        let closed = walk_spectrum(&g).sorted_eigenvalues();
        for (a, b) in dense.iter().zip(&closed) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        let zero = dense_walk_spectrum(&ChiralCompleteGraph::new(5, 0.0).unwrap()).unwrap();
        for (a, b) in zero.iter().zip([0.0, 5.0, 5.0, 5.0, 5.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }
}
