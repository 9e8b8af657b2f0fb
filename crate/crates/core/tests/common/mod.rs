//! Independent oracles shared by the integration and acceptance tests.
//!
//! Nothing here goes through the closed-form spectrum or the spectral
//! propagator it is used to check.

#![allow(dead_code)]

use chiralwalk::{Complex64, HermitianMatrix};

/// Classical fourth-order Runge-Kutta for `dψ/dt = -i H ψ`.
pub fn rk4_evolve(h: &HermitianMatrix, psi0: &[Complex64], t: f64, step: f64) -> Vec<Complex64> {
    let steps = (t.abs() / step).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let minus_i = Complex64::new(0.0, -1.0);
    let deriv = |psi: &[Complex64]| -> Vec<Complex64> {
        h.mul_vec(psi).into_iter().map(|z| minus_i * z).collect()
    };
    let axpy = |psi: &[Complex64], k: &[Complex64], a: f64| -> Vec<Complex64> {
        psi.iter().zip(k).map(|(p, k)| p + k * a).collect()
    };
    let mut psi = psi0.to_vec();
    for _ in 0..steps {
        let k1 = deriv(&psi);
        let k2 = deriv(&axpy(&psi, &k1, dt / 2.0));
        let k3 = deriv(&axpy(&psi, &k2, dt / 2.0));
        let k4 = deriv(&axpy(&psi, &k3, dt));
        for i in 0..psi.len() {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
    psi
}

/// `Σ_{k=1}^{(n-1)/2} e^{2πijk/n}` summed term by term.
pub fn roots_of_unity_half_sum(j: usize, n: usize) -> Complex64 {
    (1..=(n - 1) / 2)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64))
        .sum()
}

/// Largest element-wise difference after sorting both multisets.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multiset sizes differ");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    (0..count)
        .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
        .collect()
}

pub fn odd_sizes(max: usize) -> impl Iterator<Item = usize> {
    (5..=max).step_by(2)
}
