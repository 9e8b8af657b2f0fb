//! The search Hamiltonian `H = -γL - |w><w|`.
//!
//! Its spectrum is available two ways: dense diagonalization, and the
//! roots of the secular equation
//!
//! ```text
//! F(E) = (1/n) Σ_j 1 / (γ E_j - E) = 1
//! ```
//!
//! whose poles are the scaled walk eigenvalues. `F` increases between poles
//! and vanishes at ±∞, so there is one root between each pair of adjacent
//! distinct poles and one below the smallest. Poles of multiplicity `m`
//! additionally stay eigenvalues of `H` with multiplicity `m - 1`.

use crate::cg_sums::{self, DEFAULT_GUARD_MARGIN};
use crate::error::{Error, Result};
use crate::graph::{ChiralCompleteGraph, HermitianMatrix};
use crate::linalg::{self, inner, uniform_state};
use crate::parallel::Execution;
use crate::spectrum::{walk_spectrum, WalkSpectrum};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchProblem {
    pub graph: ChiralCompleteGraph,
    pub gamma: f64,
    pub marked: usize,
}

impl SearchProblem {
    pub fn new(graph: ChiralCompleteGraph, gamma: f64, marked: usize) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must be finite, got {gamma}")));
        }
        if marked >= graph.n() {
            return Err(Error::InvalidParameter(format!(
                "marked vertex {marked} out of range for n = {}",
                graph.n()
            )));
        }
        Ok(Self { graph, gamma, marked })
    }

    /// Search at the critical jumping rate `γ = S_1`.
    pub fn at_gamma_c(graph: ChiralCompleteGraph, marked: usize) -> Result<Self> {
        let gamma = cg_sums::gamma_c(&walk_spectrum(&graph))?;
        Self::new(graph, gamma, marked)
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn hamiltonian(&self) -> HermitianMatrix {
        build_search_hamiltonian(self)
    }
}

pub fn build_search_hamiltonian(p: &SearchProblem) -> HermitianMatrix {
    let mut h = p.graph.laplacian();
    h.scale(-p.gamma);
    h.add_to_diagonal(p.marked, -1.0);
    h
}

/// Eigenpairs of `H`, energies ascending, with overlap tables.
#[derive(Debug, Clone)]
pub struct SearchSpectrum {
    pub energies: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    /// `|<s|ψ_a>|^2`
    pub overlaps_s: Vec<f64>,
    /// `|<w|ψ_a>|^2`
    pub overlaps_w: Vec<f64>,
}

pub fn diagonalize_search(p: &SearchProblem) -> Result<SearchSpectrum> {
    let eig = linalg::hermitian_eigen(&build_search_hamiltonian(p))?;
    let s = uniform_state(p.n());
    let overlaps_s = eig.vectors.iter().map(|v| inner(&s, v).norm_sqr()).collect();
    let overlaps_w = eig.vectors.iter().map(|v| v[p.marked].norm_sqr()).collect();
    Ok(SearchSpectrum {
        energies: eig.values,
        states: eig.vectors,
        overlaps_s,
        overlaps_w,
    })
}

/// Energies only, from the dense solver.
pub fn dense_search_energies(p: &SearchProblem) -> Result<Vec<f64>> {
    linalg::hermitian_eigenvalues(&build_search_hamiltonian(p))
}

fn secular_unchecked(energy: f64, spectrum: &WalkSpectrum, gamma: f64) -> f64 {
    spectrum
        .eigenvalues
        .iter()
        .map(|e| 1.0 / (gamma * e - energy))
        .sum::<f64>()
        / spectrum.n as f64
}

fn pole_scale(spectrum: &WalkSpectrum, gamma: f64) -> f64 {
    spectrum
        .eigenvalues
        .iter()
        .map(|e| (gamma * e).abs())
        .fold(1.0, f64::max)
}

/// `F(E)`; fails if `E` sits on a pole `γE_j`.
pub fn secular_function(energy: f64, spectrum: &WalkSpectrum, gamma: f64) -> Result<f64> {
    let pole_tol = 1e-14 * pole_scale(spectrum, gamma);
    if let Some(&e) = spectrum
        .eigenvalues
        .iter()
        .find(|&&e| (gamma * e - energy).abs() <= pole_tol)
    {
        return Err(Error::PoleEvaluation {
            energy,
            pole: gamma * e,
        });
    }
    Ok(secular_unchecked(energy, spectrum, gamma))
}

/// A group of poles treated as one degenerate pole.
#[derive(Debug, Clone, Copy)]
struct PoleCluster {
    min: f64,
    max: f64,
    sum: f64,
    count: usize,
}

impl PoleCluster {
    fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }
}

fn cluster_poles(mut poles: Vec<f64>, tol: f64) -> Vec<PoleCluster> {
    poles.sort_by(f64::total_cmp);
    let mut clusters: Vec<PoleCluster> = Vec::new();
    for p in poles {
        match clusters.last_mut() {
            Some(c) if p - c.max <= tol => {
                c.max = p;
                c.sum += p;
                c.count += 1;
            }
            _ => clusters.push(PoleCluster {
                min: p,
                max: p,
                sum: p,
                count: 1,
            }),
        }
    }
    clusters
}

const ROOT_TOL: f64 = 1e-12;

fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    // g(lo) < 0 < g(hi)
    for _ in 0..300 {
        if hi - lo <= ROOT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Finds the root of `g` in the open interval `(left, right)` where `g`
/// runs from -∞ at `left` to +∞ at `right`.
fn root_between_poles(left: f64, right: f64, g: &impl Fn(f64) -> f64) -> Result<f64> {
    let width = right - left;
    let mut delta = 1e-7 * width;
    loop {
        let (lo, hi) = (left + delta, right - delta);
        let (g_lo, g_hi) = (g(lo), g(hi));
        if g_lo < 0.0 && g_hi > 0.0 {
            return Ok(bisect(lo, hi, g));
        }
        if g_lo == 0.0 {
            return Ok(lo);
        }
        if g_hi == 0.0 {
            return Ok(hi);
        }
        // The root hugs a pole more tightly than delta; move the endpoints in.
        let next = delta * 1e-3;
        if left + next <= left || right - next >= right {
            return Err(Error::Bracketing {
                lower: lo,
                upper: hi,
                f_lower: g_lo,
                f_upper: g_hi,
            });
        }
        delta = next;
    }
}

fn root_below(pole: f64, scale: f64, g: &impl Fn(f64) -> f64) -> Result<f64> {
    let mut offset = 1.0;
    while g(pole - offset) >= 0.0 {
        offset *= 2.0;
        if !offset.is_finite() || offset > 1e300 {
            return Err(Error::Bracketing {
                lower: pole - offset,
                upper: pole,
                f_lower: g(pole - offset),
                f_upper: f64::INFINITY,
            });
        }
    }
    let lower = pole - offset;
    let mut delta = 1e-7 * scale.min(offset);
    loop {
        let hi = pole - delta;
        let g_hi = g(hi);
        if g_hi > 0.0 {
            return Ok(bisect(lower, hi, g));
        }
        if g_hi == 0.0 {
            return Ok(hi);
        }
        let next = delta * 1e-3;
        if pole - next >= pole {
            return Err(Error::Bracketing {
                lower,
                upper: hi,
                f_lower: g(lower),
                f_upper: g_hi,
            });
        }
        delta = next;
    }
}

/// All `n` eigenvalues of `H` from the secular equation, ascending.
pub fn search_energies_secular(spectrum: &WalkSpectrum, gamma: f64) -> Result<Vec<f64>> {
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "secular solve needs a finite nonzero gamma, got {gamma}"
        )));
    }
    let scale = pole_scale(spectrum, gamma);
    let poles: Vec<f64> = spectrum.eigenvalues.iter().map(|e| gamma * e).collect();
    let clusters = cluster_poles(poles, 1e-9 * scale);
    let g = |e: f64| secular_unchecked(e, spectrum, gamma) - 1.0;

    let mut energies = Vec::with_capacity(spectrum.n);
    energies.push(root_below(clusters[0].min, scale, &g)?);
    for w in clusters.windows(2) {
        energies.push(root_between_poles(w[0].max, w[1].min, &g)?);
    }
    for c in &clusters {
        energies.extend(std::iter::repeat_n(c.mean(), c.count - 1));
    }
    energies.sort_by(f64::total_cmp);
    debug_assert_eq!(energies.len(), spectrum.n);
    Ok(energies)
}

/// The adjacent pair of eigenstates carrying the `|s> -> |w>` rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportPair {
    pub lower_index: usize,
    pub upper_index: usize,
    pub gap: f64,
    pub combined_support: f64,
}

pub fn support_pair(spec: &SearchSpectrum) -> SupportPair {
    let mass = |a: usize| spec.overlaps_s[a] + spec.overlaps_w[a];
    let (a, combined_support) = (0..spec.energies.len() - 1)
        .map(|a| (a, mass(a) + mass(a + 1)))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    SupportPair {
        lower_index: a,
        upper_index: a + 1,
        gap: spec.energies[a + 1] - spec.energies[a],
        combined_support,
    }
}

/// How the jumping rate is chosen at each phase of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaRule {
    /// `γ = S_1` from the exact sum.
    ExactS1,
    /// `γ = 1/(n cos θ)`.
    AsymptoticS1,
    Fixed(f64),
}

impl GammaRule {
    pub fn gamma_for(&self, spectrum: &WalkSpectrum) -> Result<f64> {
        match *self {
            GammaRule::ExactS1 => cg_sums::gamma_c(spectrum),
            GammaRule::AsymptoticS1 => cg_sums::s1_asymptotic(spectrum.n, spectrum.theta),
            GammaRule::Fixed(g) => Ok(g),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelRow {
    pub theta: f64,
    pub gamma: f64,
    pub near_critical: bool,
    /// The `k` lowest eigenvalues of `H`.
    pub energies: Vec<f64>,
}

pub fn level_row(n: usize, theta: f64, k: usize, rule: GammaRule) -> Result<LevelRow> {
    let graph = ChiralCompleteGraph::new(n, theta)?;
    let spectrum = walk_spectrum(&graph);
    let gamma = rule.gamma_for(&spectrum)?;
    let mut energies = dense_search_energies(&SearchProblem::new(graph, gamma, 0)?)?;
    energies.truncate(k);
    Ok(LevelRow {
        theta,
        gamma,
        near_critical: cg_sums::is_near_critical(theta, n, DEFAULT_GUARD_MARGIN),
        energies,
    })
}

pub fn energy_level_sweep(
    n: usize,
    theta_grid: &[f64],
    k: usize,
    rule: GammaRule,
) -> Result<Vec<LevelRow>> {
    energy_level_sweep_with(Execution::default(), n, theta_grid, k, rule)
}

pub fn energy_level_sweep_with(
    exec: Execution,
    n: usize,
    theta_grid: &[f64],
    k: usize,
    rule: GammaRule,
) -> Result<Vec<LevelRow>> {
    exec.try_map(theta_grid, |&theta| level_row(n, theta, k, rule))
}
