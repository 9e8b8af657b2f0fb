//! Exact unitary evolution `ψ(t) = Σ_a e^{-iE_a t} ψ_a <ψ_a|ψ(0)>`.
//!
//! The eigendecomposition is computed once per Hamiltonian and shared
//! read-only across all time samples.

use faer::Mat;

use crate::error::{Error, Result};
use crate::graph::{ChiralCompleteGraph, HermitianMatrix};
use crate::linalg::{self, basis_state, norm_sqr, uniform_state};
use crate::parallel::Execution;
use crate::search::SearchProblem;
use crate::Complex64;

const NORM_TOL: f64 = 1e-10;
const TIME_CHUNK: usize = 128;

pub struct Propagator {
    energies: Vec<f64>,
    /// Column `a` is eigenvector `a`.
    vectors: Mat<Complex64>,
}

impl Propagator {
    pub fn new(h: &HermitianMatrix) -> Result<Self> {
        let eig = linalg::hermitian_eigen(h)?;
        let n = h.dimension();
        let vectors = Mat::from_fn(n, n, |i, a| eig.vectors[a][i]);
        Ok(Self {
            energies: eig.values,
            vectors,
        })
    }

    pub fn dimension(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `<ψ_a|ψ0>` for every eigenstate.
    fn coefficients(&self, psi0: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.dimension();
        if psi0.len() != n {
            return Err(Error::InvalidParameter(format!(
                "state has length {}, Hamiltonian has dimension {n}",
                psi0.len()
            )));
        }
        let norm_sq = norm_sqr(psi0);
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState { norm_sq });
        }
        Ok((0..n)
            .map(|a| (0..n).map(|i| self.vectors[(i, a)].conj() * psi0[i]).sum())
            .collect())
    }

    pub fn evolve(&self, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let c = self.coefficients(psi0)?;
        Ok(self.evolve_coefficients(&c, &[t]).pop().expect("one time"))
    }

    /// States at each of `times`, in order.
    pub fn evolve_many(&self, psi0: &[Complex64], times: &[f64]) -> Result<Vec<Vec<Complex64>>> {
        let c = self.coefficients(psi0)?;
        Ok(times
            .chunks(TIME_CHUNK)
            .flat_map(|chunk| self.evolve_coefficients(&c, chunk))
            .collect())
    }

    fn evolve_coefficients(&self, c: &[Complex64], times: &[f64]) -> Vec<Vec<Complex64>> {
        let n = self.dimension();
        let phased = Mat::from_fn(n, times.len(), |a, k| {
            c[a] * Complex64::from_polar(1.0, -self.energies[a] * times[k])
        });
        let states = &self.vectors * &phased;
        (0..times.len())
            .map(|k| (0..n).map(|i| states[(i, k)]).collect())
            .collect()
    }
}

pub fn evolve(h: &HermitianMatrix, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    Propagator::new(h)?.evolve(psi0, t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    /// `|<w|ψ(t)>|^2` at each time.
    pub success: Vec<f64>,
    pub norm_drift: f64,
    /// All vertex probabilities per sample, when requested.
    pub probabilities: Option<Vec<Vec<f64>>>,
}

/// `0, dt, 2dt, ...` up to and including `t_max` (to rounding).
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) || !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need t_max > 0 and dt > 0, got t_max = {t_max}, dt = {dt}"
        )));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

pub fn success_trace(p: &SearchProblem, t_max: f64, dt: f64) -> Result<EvolutionTrace> {
    success_trace_with(Execution::default(), p, t_max, dt, false)
}

pub fn success_trace_with(
    exec: Execution,
    p: &SearchProblem,
    t_max: f64,
    dt: f64,
    keep_probabilities: bool,
) -> Result<EvolutionTrace> {
    let times = time_grid(t_max, dt)?;
    let propagator = Propagator::new(&p.hamiltonian())?;
    let c = propagator.coefficients(&uniform_state(p.n()))?;
    let chunks: Vec<&[f64]> = times.chunks(TIME_CHUNK).collect();
    let per_chunk = exec.map(&chunks, |chunk| {
        propagator
            .evolve_coefficients(&c, chunk)
            .into_iter()
            .map(|psi| {
                let probs: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
                let drift = (probs.iter().sum::<f64>() - 1.0).abs();
                (probs[p.marked], drift, keep_probabilities.then_some(probs))
            })
            .collect::<Vec<_>>()
    });
    let mut success = Vec::with_capacity(times.len());
    let mut norm_drift: f64 = 0.0;
    let mut probabilities = keep_probabilities.then(Vec::new);
    for (s, drift, probs) in per_chunk.into_iter().flatten() {
        success.push(s);
        norm_drift = norm_drift.max(drift);
        if let (Some(all), Some(probs)) = (probabilities.as_mut(), probs) {
            all.push(probs);
        }
    }
    Ok(EvolutionTrace {
        times,
        success,
        norm_drift,
        probabilities,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    pub t_peak: f64,
    pub p_peak: f64,
    /// False when the trace had no interior local maximum and the larger
    /// endpoint was returned instead.
    pub local_max_found: bool,
}

/// First local maximum above half the global maximum, refined by a
/// parabola through it and its two neighbours.
pub fn first_peak(trace: &EvolutionTrace) -> Result<PeakReport> {
    let (t, p) = (&trace.times, &trace.success);
    if t.is_empty() || t.len() != p.len() {
        return Err(Error::InvalidParameter(
            "peak search needs a nonempty trace with matching lengths".into(),
        ));
    }
    let max = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let found = (1..p.len().saturating_sub(1))
        .find(|&k| p[k - 1] < p[k] && p[k] >= p[k + 1] && p[k] > 0.5 * max);
    let Some(k) = found else {
        let last = p.len() - 1;
        let k = if p[0] > p[last] { 0 } else { last };
        return Ok(PeakReport {
            t_peak: t[k],
            p_peak: p[k],
            local_max_found: false,
        });
    };
    let (h1, h2) = (t[k] - t[k - 1], t[k + 1] - t[k]);
    let (d0, d2) = (p[k - 1] - p[k], p[k + 1] - p[k]);
    let denom = h1 * h2 * (h1 + h2);
    let a = (d0 * h2 + d2 * h1) / denom;
    let b = (d2 * h1 * h1 - d0 * h2 * h2) / denom;
    let (dx, peak) = if a < 0.0 {
        let dx = (-b / (2.0 * a)).clamp(-h1, h2);
        (dx, p[k] + b * dx + a * dx * dx)
    } else {
        (0.0, p[k])
    };
    Ok(PeakReport {
        t_peak: t[k] + dx,
        p_peak: peak,
        local_max_found: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    Vertex(usize),
    Uniform,
}

impl InitialState {
    pub fn vector(&self, n: usize) -> Result<Vec<Complex64>> {
        match *self {
            InitialState::Vertex(k) if k < n => Ok(basis_state(n, k)),
            InitialState::Vertex(k) => Err(Error::InvalidParameter(format!(
                "start vertex {k} out of range for n = {n}"
            ))),
            InitialState::Uniform => Ok(uniform_state(n)),
        }
    }
}

/// `max_j |p_j(t) - p_j(-t)|` under the bare walk `-γL`.
pub fn time_reversal_asymmetry(
    g: &ChiralCompleteGraph,
    start: InitialState,
    gamma: f64,
    t: f64,
) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    let mut h = g.laplacian();
    h.scale(-gamma);
    let propagator = Propagator::new(&h)?;
    let psi0 = start.vector(g.n())?;
    let forward = propagator.evolve(&psi0, t)?;
    let backward = propagator.evolve(&psi0, -t)?;
    Ok(forward
        .iter()
        .zip(&backward)
        .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
        .fold(0.0, f64::max))
}
