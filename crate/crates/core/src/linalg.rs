//! Dense Hermitian eigensolver (backed by faer) and small vector helpers.

use faer::Side;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::HermitianMatrix;

/// Full eigendecomposition with eigenvalues ascending.
///
/// `vectors[a]` is the normalized eigenvector for `values[a]`, with its
/// largest-magnitude entry rotated to be real and positive.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

fn solver_error(m: &HermitianMatrix, reason: impl std::fmt::Debug) -> Error {
    Error::Eigensolver {
        dimension: m.dimension(),
        max_abs_entry: m.max_abs_entry(),
        reason: format!("{reason:?}"),
    }
}

fn check_input(m: &HermitianMatrix) -> Result<()> {
    if (0..m.dimension()).all(|i| m.row(i).iter().all(|z| z.re.is_finite() && z.im.is_finite())) {
        Ok(())
    } else {
        Err(solver_error(m, "non-finite entries"))
    }
}

pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    check_input(m)?;
    let mut values = m
        .to_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| solver_error(m, e))?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn hermitian_eigen(m: &HermitianMatrix) -> Result<Eigendecomposition> {
    check_input(m)?;
    let n = m.dimension();
    let evd = m
        .to_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| solver_error(m, e))?;
    let s = evd.S();
    let u = evd.U();
    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|a| {
            let mut v: Vec<Complex64> = (0..n).map(|i| u[(i, a)]).collect();
            fix_phase(&mut v);
            (s[a].re, v)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(Eigendecomposition { values, vectors })
}

/// Rotates `v` so that its largest-magnitude entry (first one on ties) is
/// real and positive.
pub fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .find(|z| z.norm() >= max * (1.0 - 1e-12))
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
}

/// `<a|b>` with the first argument conjugated.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// The equal superposition `|s> = n^{-1/2} Σ|i>`.
pub fn uniform_state(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n]
}

pub fn basis_state(n: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[k] = Complex64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let m = HermitianMatrix::from_lower_fn(3, |i, j| {
            if i == j {
                Complex64::new([3.0, -1.0, 2.0][i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let e = hermitian_eigen(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
        assert_eq!(e.vectors[0][1], Complex64::new(1.0, 0.0));
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), e.values);
    }

    #[test]
    fn pauli_y_eigenpairs() {
        let m = HermitianMatrix::from_lower_fn(2, |i, j| {
            if i == 1 && j == 0 {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        for (val, vec) in e.values.iter().zip(&e.vectors) {
            let mv = m.mul_vec(vec);
            for (x, y) in mv.iter().zip(vec) {
                assert!((x - y * val).norm() < 1e-13);
            }
            assert!((norm_sqr(vec) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn phase_fix_makes_pivot_real_positive() {
        let mut v = vec![Complex64::new(0.1, 0.2), Complex64::new(0.0, -0.9)];
        fix_phase(&mut v);
        assert!(v[1].im.abs() < 1e-15 && v[1].re > 0.0);
        assert!((v[1].re - 0.9).abs() < 1e-15);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let m = HermitianMatrix::from_lower_fn(2, |_, _| Complex64::new(f64::NAN, 0.0));
        assert!(matches!(hermitian_eigen(&m), Err(Error::Eigensolver { .. })));
    }
}
