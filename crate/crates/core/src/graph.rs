//! The chiral modified complete graph and its circulant Hermitian Laplacian.
//!
//! Vertices are indexed `0..n` around the circle; "ahead" means increasing
//! index mod `n`. Column `k` of the Laplacian is the first column shifted
//! down cyclically by `k`, so `L[i][k] = c[(i - k) mod n]`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Chiral complete graph on an odd number of vertices with phase in `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralCompleteGraph {
    n: usize,
    theta: f64,
}

impl ChiralCompleteGraph {
    pub fn new(n: usize, theta: f64) -> Result<Self> {
        validate_n(n)?;
        if !theta.is_finite() || !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in [0, pi/2], got {theta}; canonicalize it first"
            )));
        }
        Ok(Self { n, theta })
    }

    /// Builds the graph from an arbitrary phase, returning the reduction that
    /// was applied alongside it.
    pub fn from_raw_theta(n: usize, theta_raw: f64) -> Result<(Self, CanonicalWalkParams)> {
        let params = canonicalize_theta(theta_raw)?;
        Ok((Self::new(n, params.theta_canonical)?, params))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Number of hops that carry `e^{iθ}` (and, equally, `e^{-iθ}`) per vertex.
    pub fn half_degree(&self) -> usize {
        (self.n - 1) / 2
    }

    pub fn laplacian_first_column(&self) -> Vec<Complex64> {
        circulant_column(self.n, self.theta)
    }

    pub fn laplacian(&self) -> HermitianMatrix {
        HermitianMatrix::circulant(&self.laplacian_first_column())
    }
}

fn validate_n(n: usize) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "n must be odd and at least 3, got {n}"
        )));
    }
    Ok(())
}

fn circulant_column(n: usize, theta: f64) -> Vec<Complex64> {
    let half = (n - 1) / 2;
    let forward = Complex64::from_polar(1.0, theta);
    let mut col = Vec::with_capacity(n);
    col.push(Complex64::new(-((n - 1) as f64) * theta.cos(), 0.0));
    col.extend(std::iter::repeat_n(forward, half));
    col.extend(std::iter::repeat_n(forward.conj(), half));
    col
}

/// First column of `L` for the given graph.
pub fn laplacian_first_column(g: &ChiralCompleteGraph) -> Vec<Complex64> {
    g.laplacian_first_column()
}

pub fn build_laplacian(g: &ChiralCompleteGraph) -> HermitianMatrix {
    g.laplacian()
}

/// Laplacian for any finite phase, without reducing it to `[0, π/2]`.
///
/// Used to check that a canonicalized walk is equivalent to the raw one.
pub fn raw_laplacian(n: usize, theta: f64) -> Result<HermitianMatrix> {
    validate_n(n)?;
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("theta must be finite, got {theta}")));
    }
    Ok(HermitianMatrix::circulant(&circulant_column(n, theta)))
}

/// An equivalent parameterization of the walk with phase in `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalWalkParams {
    pub theta_canonical: f64,
    /// All hop directions flipped, i.e. `L` replaced by its transpose.
    pub arrows_reversed: bool,
    /// `+1.0` or `-1.0`; the jumping rate is multiplied by this.
    pub gamma_sign: f64,
}

impl CanonicalWalkParams {
    /// Maps the canonical-phase Laplacian to the Laplacian of the raw phase:
    /// transpose if the arrows were reversed, negate if the sign flipped.
    pub fn raw_laplacian_from(&self, canonical: &HermitianMatrix) -> HermitianMatrix {
        let mut m = if self.arrows_reversed {
            canonical.transpose()
        } else {
            canonical.clone()
        };
        if self.gamma_sign < 0.0 {
            m.scale(-1.0);
        }
        m
    }
}

/// Reduces an arbitrary phase to `[0, π/2]`.
///
/// First mod `2π`; above `π` use `2π - θ` with arrows reversed, since
/// `e^{±iθ} = e^{∓i(2π-θ)}`; above `π/2` use `π - θ` with arrows reversed
/// again and the jumping rate negated, since `e^{±iθ} = -e^{∓i(π-θ)}`.
///
/// A phase in `(π, 3π/2)` therefore ends up as `θ - π` with the rate negated
/// and the arrows unchanged: `L(θ) = -L(θ - π)`.
pub fn canonicalize_theta(theta_raw: f64) -> Result<CanonicalWalkParams> {
    if !theta_raw.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "theta must be finite, got {theta_raw}"
        )));
    }
    let mut theta = theta_raw.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if theta >= TAU {
        theta = 0.0;
    }
    let mut arrows_reversed = false;
    let mut gamma_sign = 1.0;
    if theta > PI {
        theta = TAU - theta;
        arrows_reversed = !arrows_reversed;
    }
    if theta > FRAC_PI_2 {
        theta = PI - theta;
        arrows_reversed = !arrows_reversed;
        gamma_sign = -1.0;
    }
    Ok(CanonicalWalkParams {
        theta_canonical: theta.clamp(0.0, FRAC_PI_2),
        arrows_reversed,
        gamma_sign,
    })
}

/// Dense square complex matrix that is Hermitian by construction.
///
/// Stored row-major. Every constructor writes one triangle and mirrors its
/// conjugate into the other, so `m[i][j] == conj(m[j][i])` holds bit-exactly.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    dimension: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds from the lower triangle (`i >= j`); diagonal imaginary parts
    /// are dropped.
    pub fn from_lower_fn(dimension: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dimension * dimension];
        for i in 0..dimension {
            for j in 0..i {
                let v = f(i, j);
                entries[i * dimension + j] = v;
                entries[j * dimension + i] = v.conj();
            }
            entries[i * dimension + i] = Complex64::new(f(i, i).re, 0.0);
        }
        Self { dimension, entries }
    }

    /// Circulant matrix whose column `k` is `column` shifted down by `k`.
    pub fn circulant(column: &[Complex64]) -> Self {
        let n = column.len();
        Self::from_lower_fn(n, |i, j| column[(i + n - j) % n])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dimension + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn transpose(&self) -> Self {
        Self::from_lower_fn(self.dimension, |i, j| self.get(j, i))
    }

    pub fn scale(&mut self, factor: f64) {
        for e in &mut self.entries {
            *e *= factor;
        }
    }

    /// Adds `shift` to diagonal entry `k`.
    pub fn add_to_diagonal(&mut self, k: usize, shift: f64) {
        self.entries[k * self.dimension + k].re += shift;
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dimension, "dimension mismatch");
        (0..self.dimension)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Largest `|m[i][j] - conj(m[j][i])|`; zero for anything built here.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dimension;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub(crate) fn to_faer(&self) -> faer::Mat<Complex64> {
        faer::Mat::from_fn(self.dimension, self.dimension, |i, j| self.get(i, j))
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermitianMatrix")
            .field("dimension", &self.dimension)
            .finish_non_exhaustive()
    }
}
