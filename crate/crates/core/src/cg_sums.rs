//! Eigenvalue sums `S_i = (1/n) Σ_{E_j != 0} E_j^{-i}` of the walk and the
//! quantities derived from them: the critical jumping rate `γ_c ≈ S_1`, the
//! predicted peak success probability `S_1/√S_2` and its time
//! `(π/2)(√S_2/S_1)√n`.
//!
//! The sums diverge at the critical phases where an odd-`j` eigenvalue
//! crosses zero, `θ_c = atan(n/α_j)`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::spectrum::{alpha, walk_eigenvalue, WalkSpectrum};
use crate::graph::ChiralCompleteGraph;

pub const DEFAULT_GUARD_MARGIN: f64 = 0.02;
pub const DEFAULT_J_MAX: usize = 99;

/// Eigenvalues with `|E_j|` at or below this are treated as zero.
pub fn zero_tolerance(n: usize) -> f64 {
    1e-12 * n as f64
}

/// `S_i` together with its split into pairs `(j, n-j)` with `j` odd and
/// `j` even, `1 <= j <= (n-1)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSum {
    pub total: f64,
    pub odd: f64,
    pub even: f64,
}

fn check_nonzero(spectrum: &WalkSpectrum) -> Result<()> {
    let tol = zero_tolerance(spectrum.n);
    match spectrum.eigenvalues[1..].iter().position(|e| e.abs() <= tol) {
        Some(k) => Err(Error::CriticalTheta {
            theta: spectrum.theta,
            j: k + 1,
            eigenvalue: spectrum.eigenvalues[k + 1],
        }),
        None => Ok(()),
    }
}

pub fn sum_s(i: i32, spectrum: &WalkSpectrum) -> Result<f64> {
    check_nonzero(spectrum)?;
    let n = spectrum.n as f64;
    Ok(spectrum.eigenvalues[1..].iter().map(|e| e.powi(-i)).sum::<f64>() / n)
}

pub fn sum_s_split(i: i32, spectrum: &WalkSpectrum) -> Result<SplitSum> {
    check_nonzero(spectrum)?;
    let n = spectrum.n;
    let (mut odd, mut even) = (0.0, 0.0);
    for j in 1..=(n - 1) / 2 {
        let pair = spectrum.eigenvalues[j].powi(-i) + spectrum.eigenvalues[n - j].powi(-i);
        if j % 2 == 1 {
            odd += pair;
        } else {
            even += pair;
        }
    }
    let (odd, even) = (odd / n as f64, even / n as f64);
    Ok(SplitSum {
        total: odd + even,
        odd,
        even,
    })
}

pub fn gamma_c(spectrum: &WalkSpectrum) -> Result<f64> {
    sum_s(1, spectrum)
}

fn check_asymptotic_domain(theta: f64) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&theta) {
        return Err(Error::Domain(format!(
            "asymptotic sums need theta in [0, pi/2), got {theta}"
        )));
    }
    Ok(theta.cos())
}

/// `1/(n cos θ)`.
pub fn s1_asymptotic(n: usize, theta: f64) -> Result<f64> {
    Ok(1.0 / (n as f64 * check_asymptotic_domain(theta)?))
}

/// `1/(n cos θ)^2`.
pub fn s2_asymptotic(n: usize, theta: f64) -> Result<f64> {
    Ok(s1_asymptotic(n, theta)?.powi(2))
}

/// `(p*, t*)` from the exact sums.
pub fn predicted_success_and_runtime(spectrum: &WalkSpectrum) -> Result<(f64, f64)> {
    let s1 = sum_s(1, spectrum)?;
    let s2 = sum_s(2, spectrum)?;
    Ok(predict(s1, s2, spectrum.n))
}

fn predict(s1: f64, s2: f64, n: usize) -> (f64, f64) {
    let root = s2.sqrt();
    (s1 / root, FRAC_PI_2 * root / s1 * (n as f64).sqrt())
}

/// Everything the search needs from the walk spectrum at one phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgSums {
    pub s1: f64,
    pub s2: f64,
    pub gamma_c: f64,
    /// `None` inside a critical guard band.
    pub p_star: Option<f64>,
    pub t_star: Option<f64>,
    pub near_critical: bool,
    pub min_abs_eigenvalue: f64,
}

impl CgSums {
    pub fn compute(spectrum: &WalkSpectrum, margin: f64) -> Result<Self> {
        let s1 = sum_s(1, spectrum)?;
        let s2 = sum_s(2, spectrum)?;
        let near_critical = is_near_critical(spectrum.theta, spectrum.n, margin);
        let (p, t) = predict(s1, s2, spectrum.n);
        Ok(Self {
            s1,
            s2,
            gamma_c: s1,
            p_star: (!near_critical).then_some(p),
            t_star: (!near_critical).then_some(t),
            near_critical,
            min_abs_eigenvalue: spectrum.min_abs_nonzero_label().1,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalTheta {
    pub j: usize,
    pub theta_c_exact: f64,
    /// Large-`n` limit `atan(πj/2)`.
    pub theta_c_approx: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalThetaTable {
    pub n: usize,
    pub entries: Vec<CriticalTheta>,
}

impl CriticalThetaTable {
    /// Walk eigenvalue `E_j` evaluated at each exact critical phase.
    pub fn residuals(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|c| {
                let g = ChiralCompleteGraph::new(self.n, c.theta_c_exact)
                    .expect("critical phases lie in (0, pi/2)");
                walk_eigenvalue(c.j, &g)
            })
            .collect()
    }

    pub fn is_near(&self, theta: f64, margin: f64) -> bool {
        let last = self.entries.last().map_or(FRAC_PI_2, |c| c.theta_c_exact);
        theta > last - margin
            || self
                .entries
                .iter()
                .any(|c| (theta - c.theta_c_exact).abs() < margin)
    }
}

/// Largest odd `j_max` usable for `n` when the caller asks for the default.
pub fn default_j_max(n: usize) -> usize {
    DEFAULT_J_MAX.min(n.saturating_sub(2))
}

pub fn critical_thetas(n: usize, j_max: usize) -> Result<CriticalThetaTable> {
    if j_max.is_multiple_of(2) || j_max < 1 || j_max + 2 > n {
        return Err(Error::InvalidParameter(format!(
            "j_max must be odd with 1 <= j_max <= n-2, got j_max = {j_max}, n = {n}"
        )));
    }
    let entries = (1..=j_max)
        .step_by(2)
        .map(|j| {
            let a = alpha(j, n)?;
            Ok(CriticalTheta {
                j,
                theta_c_exact: (n as f64 / a).atan(),
                theta_c_approx: (PI * j as f64 / 2.0).atan(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CriticalThetaTable { n, entries })
}

/// Whether `theta` is within `margin` of a critical phase (`j <= 99`) or
/// past the last tabulated one, where criticals crowd towards `π/2`.
pub fn is_near_critical(theta: f64, n: usize, margin: f64) -> bool {
    critical_thetas(n, default_j_max(n))
        .map(|t| t.is_near(theta, margin))
        .unwrap_or(true)
}
