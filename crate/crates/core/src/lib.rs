//! Search by chiral continuous-time quantum walk on the modified complete graph.
//!
//! The walk lives on an odd number of vertices arranged in a circle. Each
//! vertex hops to the `(n-1)/2` vertices ahead of it with phase `e^{iθ}` and
//! to the ones behind it with the conjugate phase, which keeps the Laplacian
//! Hermitian and circulant while breaking time-reversal symmetry.
//!
//! Modules, bottom up:
//!
//! * [`graph`]: the chiral Laplacian and phase canonicalization.
//! * [`spectrum`]: closed-form eigenvalues of `-L` plus a dense oracle.
//! * [`cg_sums`]: the `S_1`/`S_2` eigenvalue sums, critical jumping rate,
//!   critical phases and predicted success probability / runtime.
//! * [`search`]: the search Hamiltonian `-γL - |w><w|`, its dense and
//!   secular-equation spectra, overlap tables and level sweeps.
//! * [`dynamics`]: exact unitary evolution and success-probability traces.

pub mod cg_sums;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod parallel;
pub mod search;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use cg_sums::{CgSums, CriticalTheta, CriticalThetaTable, SplitSum};
pub use dynamics::{EvolutionTrace, InitialState, PeakReport, Propagator};
pub use graph::{CanonicalWalkParams, ChiralCompleteGraph, HermitianMatrix};
pub use parallel::Execution;
pub use search::{GammaRule, LevelRow, SearchProblem, SearchSpectrum, SupportPair};
pub use spectrum::WalkSpectrum;
