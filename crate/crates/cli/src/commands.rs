//! One function per subcommand. Each takes its effective configuration and
//! returns the finished CSV document, so `reproduce` can reuse them verbatim.

use std::f64::consts::FRAC_PI_2;

use chiralwalk::cg_sums::{
    self, critical_thetas, default_j_max, is_near_critical, s1_asymptotic, s2_asymptotic, sum_s,
};
use chiralwalk::dynamics::{first_peak, success_trace_with};
use chiralwalk::graph::canonicalize_theta;
use chiralwalk::search::{diagonalize_search, level_row, support_pair};
use chiralwalk::spectrum::{alpha, dense_walk_spectrum, walk_spectrum};
use chiralwalk::{
    CanonicalWalkParams, CgSums, ChiralCompleteGraph, Error, Execution, GammaRule, SearchProblem,
};

use crate::args::{GammaArg, ThetaGrid};
use crate::csv::{fmt_bool, fmt_g, Document};
use crate::error::CliError;

pub const OVERLAP_GRID_POINTS: usize = 200;
pub const OVERLAP_GRID_SPAN: f64 = 4.0;

type Output = Result<Document, CliError>;

fn graph(n: usize, theta: f64) -> Result<ChiralCompleteGraph, CliError> {
    Ok(ChiralCompleteGraph::new(n, theta)?)
}

fn validate_margin(margin: f64) -> Result<(), CliError> {
    if margin > 0.0 && margin.is_finite() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("guard margin must be positive, got {margin}")))
    }
}

fn validate_k(k: usize, n: usize) -> Result<(), CliError> {
    if (1..=n).contains(&k) {
        Ok(())
    } else {
        Err(CliError::Validation(format!("k-levels must be in 1..={n}, got {k}")))
    }
}

/// Validates `n` first so an even size is reported as such rather than as a
/// bad phase.
fn validated_n(n: usize) -> Result<usize, CliError> {
    graph(n, 0.0)?;
    Ok(n)
}

fn validated_grid(grid: &ThetaGrid) -> Result<Vec<f64>, CliError> {
    let points = grid.points();
    if let Some(bad) = points.iter().find(|t| !(0.0..=FRAC_PI_2).contains(*t)) {
        return Err(CliError::Validation(format!(
            "theta grid point {bad} lies outside [0, pi/2]"
        )));
    }
    Ok(points)
}

/// A phase given on the command line, reduced to the canonical range.
///
/// The reduction may reverse every arrow (a relabelling of the vertices that
/// fixes vertex 0 and `|s>`, so no reported quantity changes) and may flip
/// the sign of the Laplacian, which is absorbed into an explicit `γ`.
struct Phase {
    raw: f64,
    params: CanonicalWalkParams,
}

impl Phase {
    fn new(raw: f64) -> Result<Self, CliError> {
        Ok(Self {
            raw,
            params: canonicalize_theta(raw)?,
        })
    }

    fn theta(&self) -> f64 {
        self.params.theta_canonical
    }

    fn echo(&self) -> Vec<(&'static str, String)> {
        vec![
            ("theta", fmt_g(self.raw)),
            ("theta_canonical", fmt_g(self.theta())),
            ("arrows_reversed", fmt_bool(self.params.arrows_reversed).into()),
            ("gamma_sign", fmt_g(self.params.gamma_sign)),
        ]
    }

    fn gamma_rule(&self, gamma: GammaArg) -> GammaRule {
        gamma_rule(gamma, self.params.gamma_sign)
    }
}

fn gamma_rule(gamma: GammaArg, sign: f64) -> GammaRule {
    match gamma {
        GammaArg::S1 => GammaRule::ExactS1,
        GammaArg::Asymptotic => GammaRule::AsymptoticS1,
        GammaArg::Value(g) => GammaRule::Fixed(g * sign),
    }
}

pub struct SpectrumConfig {
    pub n: usize,
    pub theta: f64,
}

pub fn spectrum(cfg: &SpectrumConfig) -> Output {
    let g = graph(cfg.n, cfg.theta)?;
    let spec = walk_spectrum(&g);
    let dense = dense_walk_spectrum(&g)?;
    // the dense value of equal rank, pairing the two multisets by sorted order
    let mut order: Vec<usize> = (0..cfg.n).collect();
    order.sort_by(|&a, &b| spec.eigenvalues[a].total_cmp(&spec.eigenvalues[b]).then(a.cmp(&b)));
    let mut matched = vec![0.0; cfg.n];
    for (rank, &j) in order.iter().enumerate() {
        matched[j] = dense[rank];
    }
    let mut doc = Document::new(
        "spectrum",
        &[("n", cfg.n.to_string()), ("theta", fmt_g(cfg.theta))],
    );
    doc.row(&["j", "alpha_j", "E_closed", "E_dense_sorted_match"]);
    for j in 0..cfg.n {
        let a = if j == 0 { f64::NAN } else { alpha(j, cfg.n)? };
        doc.row(&[j.to_string(), fmt_g(a), fmt_g(spec.eigenvalues[j]), fmt_g(matched[j])]);
    }
    Ok(doc)
}

pub struct SumsConfig {
    pub n: usize,
    pub grid: ThetaGrid,
    pub guard_margin: f64,
}

pub fn sums(cfg: &SumsConfig) -> Output {
    let n = validated_n(cfg.n)?;
    validate_margin(cfg.guard_margin)?;
    let thetas = validated_grid(&cfg.grid)?;
    // A divergent sum (a walk eigenvalue exactly zero) is reported as nan.
    let rows = Execution::Parallel.map(&thetas, |&theta| {
        let spec = walk_spectrum(&ChiralCompleteGraph::new(n, theta).expect("validated"));
        [
            theta,
            sum_s(1, &spec).unwrap_or(f64::NAN),
            s1_asymptotic(n, theta).unwrap_or(f64::NAN),
            sum_s(2, &spec).unwrap_or(f64::NAN),
            s2_asymptotic(n, theta).unwrap_or(f64::NAN),
        ]
    });
    let mut doc = Document::new(
        "sums",
        &[
            ("n", n.to_string()),
            ("theta_grid", cfg.grid.to_string()),
            ("guard_margin", fmt_g(cfg.guard_margin)),
        ],
    );
    doc.row(&["theta", "S1_exact", "S1_asymptotic", "S2_exact", "S2_asymptotic", "near_critical"]);
    for r in rows {
        let mut fields: Vec<String> = r.iter().map(|&x| fmt_g(x)).collect();
        fields.push(fmt_bool(is_near_critical(r[0], n, cfg.guard_margin)).into());
        doc.row(&fields);
    }
    Ok(doc)
}

pub struct CriticalConfig {
    pub n: usize,
    pub j_max: Option<usize>,
}

pub fn critical(cfg: &CriticalConfig) -> Output {
    let n = validated_n(cfg.n)?;
    let j_max = cfg.j_max.unwrap_or_else(|| default_j_max(n));
    let table = critical_thetas(n, j_max)?;
    let mut doc = Document::new(
        "critical-thetas",
        &[("n", n.to_string()), ("j_max", j_max.to_string())],
    );
    doc.row(&["j", "theta_c_exact", "theta_c_approx", "residual"]);
    for (c, r) in table.entries.iter().zip(table.residuals()) {
        doc.row(&[c.j.to_string(), fmt_g(c.theta_c_exact), fmt_g(c.theta_c_approx), fmt_g(r)]);
    }
    Ok(doc)
}

pub struct OverlapsConfig {
    pub n: usize,
    pub theta: f64,
    pub k: usize,
    pub marked: usize,
}

pub fn overlaps(cfg: &OverlapsConfig) -> Output {
    let n = validated_n(cfg.n)?;
    validate_k(cfg.k, n)?;
    let phase = Phase::new(cfg.theta)?;
    let g = graph(n, phase.theta())?;
    let s1 = cg_sums::gamma_c(&walk_spectrum(&g))?;
    // γ enters with the sign picked up by the phase reduction
    let sign = phase.params.gamma_sign;
    let top = OVERLAP_GRID_SPAN * s1 * n as f64;
    let grid: Vec<f64> = (0..OVERLAP_GRID_POINTS)
        .map(|i| top * i as f64 / (OVERLAP_GRID_POINTS - 1) as f64)
        .collect();
    let tables = Execution::Parallel.try_map(&grid, |&gn| {
        let p = SearchProblem::new(g, sign * gn / n as f64, cfg.marked)?;
        diagonalize_search(&p)
    })?;
    let at_s1 = support_pair(&diagonalize_search(&SearchProblem::new(g, s1, cfg.marked)?)?);

    let mut config = vec![("n", n.to_string())];
    config.extend(phase.echo());
    config.extend([
        ("marked", cfg.marked.to_string()),
        ("k_levels", cfg.k.to_string()),
        ("s1_times_n", fmt_g(s1 * n as f64)),
        ("gamma_times_n_grid", format!("0:{}:{OVERLAP_GRID_POINTS}", fmt_g(top))),
    ]);
    let mut doc = Document::new("overlaps", &config);
    doc.row(&["gamma_times_n", "a", "overlap_s", "overlap_w", "energy"]);
    for (gn, t) in grid.iter().zip(&tables) {
        for a in 0..cfg.k {
            doc.row(&[
                fmt_g(*gn),
                a.to_string(),
                fmt_g(t.overlaps_s[a]),
                fmt_g(t.overlaps_w[a]),
                fmt_g(t.energies[a]),
            ]);
        }
    }
    doc.comment("support_pair_at_gamma_s1: lower,upper,gap,combined_support");
    doc.comment(&format!(
        "{},{},{},{}",
        at_s1.lower_index,
        at_s1.upper_index,
        fmt_g(at_s1.gap),
        fmt_g(at_s1.combined_support)
    ));
    Ok(doc)
}

pub struct LevelsConfig {
    pub n: usize,
    pub grid: ThetaGrid,
    pub k: usize,
    pub gamma: GammaArg,
    pub guard_margin: f64,
}

pub fn levels(cfg: &LevelsConfig) -> Output {
    let n = validated_n(cfg.n)?;
    validate_k(cfg.k, n)?;
    validate_margin(cfg.guard_margin)?;
    let thetas = validated_grid(&cfg.grid)?;
    let rule = gamma_rule(cfg.gamma, 1.0);
    let rows = Execution::Parallel.try_map(&thetas, |&theta| {
        match level_row(n, theta, cfg.k, rule) {
            Ok(row) => Ok(row.energies),
            // exactly critical: S1 diverges, no finite γ to use
            Err(Error::CriticalTheta { .. }) => Ok(vec![f64::NAN; cfg.k]),
            Err(e) => Err(e),
        }
    })?;
    let mut doc = Document::new(
        "levels",
        &[
            ("n", n.to_string()),
            ("theta_grid", cfg.grid.to_string()),
            ("k_levels", cfg.k.to_string()),
            ("gamma", cfg.gamma.to_string()),
            ("guard_margin", fmt_g(cfg.guard_margin)),
        ],
    );
    let mut header = vec!["theta".to_string()];
    header.extend((0..cfg.k).map(|a| format!("E{a}")));
    header.push("near_critical".into());
    doc.row(&header);
    for (theta, energies) in thetas.iter().zip(rows) {
        let mut fields = vec![fmt_g(*theta)];
        fields.extend(energies.iter().map(|&e| fmt_g(e)));
        fields.push(fmt_bool(is_near_critical(*theta, n, cfg.guard_margin)).into());
        doc.row(&fields);
    }
    Ok(doc)
}

pub struct EvolveConfig {
    pub n: usize,
    pub theta: f64,
    pub gamma: GammaArg,
    pub marked: usize,
    pub t_max: f64,
    pub dt: Option<f64>,
    pub guard_margin: f64,
}

pub fn evolve(cfg: &EvolveConfig) -> Output {
    let n = validated_n(cfg.n)?;
    validate_margin(cfg.guard_margin)?;
    let phase = Phase::new(cfg.theta)?;
    let g = graph(n, phase.theta())?;
    let spectrum = walk_spectrum(&g);
    let gamma = phase.gamma_rule(cfg.gamma).gamma_for(&spectrum)?;
    let dt = cfg.dt.unwrap_or(cfg.t_max / 2000.0);
    let problem = SearchProblem::new(g, gamma, cfg.marked)?;
    let trace = success_trace_with(Execution::Parallel, &problem, cfg.t_max, dt, false)?;
    let peak = first_peak(&trace)?;
    let predicted = CgSums::compute(&spectrum, cfg.guard_margin).ok();

    let mut config = vec![("n", n.to_string())];
    config.extend(phase.echo());
    config.extend([
        ("gamma", cfg.gamma.to_string()),
        ("gamma_value", fmt_g(gamma)),
        ("marked", cfg.marked.to_string()),
        ("tmax", fmt_g(cfg.t_max)),
        ("dt", fmt_g(dt)),
        ("guard_margin", fmt_g(cfg.guard_margin)),
    ]);
    let mut doc = Document::new("evolve", &config);
    doc.row(&["t", "p"]);
    for (t, p) in trace.times.iter().zip(&trace.success) {
        doc.row(&[fmt_g(*t), fmt_g(*p)]);
    }
    doc.comment("t_peak,p_peak,predicted_t_star,predicted_p_star");
    doc.comment(&format!(
        "{},{},{},{}",
        fmt_g(peak.t_peak),
        fmt_g(peak.p_peak),
        fmt_g(predicted.and_then(|s| s.t_star).unwrap_or(f64::NAN)),
        fmt_g(predicted.and_then(|s| s.p_star).unwrap_or(f64::NAN)),
    ));
    doc.comment(&format!("norm_drift: {}", fmt_g(trace.norm_drift)));
    Ok(doc)
}
