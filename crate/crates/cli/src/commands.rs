//! One function per subcommand; each builds a [`Report`] from the resolved
//! configuration.

use num_traits::ToPrimitive;

use quasispec_core::arithmetic::{approximation_quality, beta_estimate};
use quasispec_core::cohomology::{
    amo_equivalence_check, residual_slope, residual_sup, solve_conjugation,
    DEFAULT_DIVISOR_FLOOR, DEFAULT_RESIDUAL_GRID,
};
use quasispec_core::gordon::{approximant_potential_error, gordon_diagnostics};
use quasispec_core::lyapunov::{
    doubling_schedule, energy_grid, herman_lower_bound, le_sweep,
};
use quasispec_core::model::ModelParams;
use quasispec_core::numerics::{hausdorff_distance, IntervalUnion, SplitMix64};
use quasispec_core::spectrum::{rational_bands, truncated_spectrum_oracle, RationalModel};

use crate::config::{ConfigError, ExperimentConfig};
use crate::output::{Cell, Report, Table};

#[derive(Debug)]
pub enum CommandError {
    /// Bad configuration; exit status 2.
    Config(String),
    /// Numeric or contract failure naming module, operation and inputs;
    /// exit status 1.
    Numeric(String),
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Config(msg) => write!(f, "config error: {msg}"),
            CommandError::Numeric(msg) => write!(f, "numeric failure: {msg}"),
        }
    }
}

impl std::error::Error for CommandError {}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        CommandError::Config(e.to_string())
    }
}

impl From<quasispec_core::Error> for CommandError {
    fn from(e: quasispec_core::Error) -> Self {
        CommandError::Numeric(e.to_string())
    }
}

fn model_from(config: &ExperimentConfig) -> Result<(ModelParams, f64), CommandError> {
    let resolved = config.frequency.resolve()?;
    let params = ModelParams::from_alpha(config.lambda, config.coupling.clone(), resolved.alpha)?;
    Ok((params, resolved.alpha))
}

fn sweep_energies(config: &ExperimentConfig, params: &ModelParams) -> Vec<f64> {
    let bound = params.energy_bound();
    let lo = config.energy_min.unwrap_or(-bound);
    let hi = config.energy_max.unwrap_or(bound);
    energy_grid(lo, hi, config.energy_count.max(1))
}

fn schedule_of(config: &ExperimentConfig) -> Vec<u64> {
    doubling_schedule(
        config.schedule_min_exp.min(config.schedule_max_exp),
        config.schedule_max_exp,
    )
}

/// `lyapunov`: exponent estimates over an energy grid.
pub fn run_lyapunov(config: &ExperimentConfig) -> Result<Report, CommandError> {
    let (params, _) = model_from(config)?;
    let energies = sweep_energies(config, &params);
    let schedule = schedule_of(config);
    let sweep = le_sweep(&params, &energies, &schedule, config.grid);
    let mut report = Report::new("lyapunov", config.echo());
    let mut table = Table::new("sweep", &["E", "L", "m", "spread"]);
    for (energy, est) in &sweep {
        table.push(vec![
            Cell::Float(*energy),
            Cell::Float(est.value),
            Cell::Int(est.m as i64),
            Cell::Float(est.spread),
        ]);
    }
    report.add_table(table);
    Ok(report)
}

/// `herman`: the coupling lower bound against swept estimates.
pub fn run_herman(config: &ExperimentConfig) -> Result<Report, CommandError> {
    let (params, _) = model_from(config)?;
    let bound = herman_lower_bound(&params);
    let energies = sweep_energies(config, &params);
    let schedule = schedule_of(config);
    let sweep = le_sweep(&params, &energies, &schedule, config.grid);
    let mut report = Report::new("herman", config.echo());
    report.add_summary("herman_lower_bound", Cell::Float(bound));
    let mut min_margin = f64::INFINITY;
    let mut table = Table::new("sweep", &["E", "L", "bound", "margin"]);
    for (energy, est) in &sweep {
        let margin = est.value - bound;
        min_margin = min_margin.min(margin);
        table.push(vec![
            Cell::Float(*energy),
            Cell::Float(est.value),
            Cell::Float(bound),
            Cell::Float(margin),
        ]);
    }
    report.add_summary("min_margin", Cell::Float(min_margin));
    report.add_table(table);
    Ok(report)
}

/// `spectrum`: approximant bands, their measure, and the truncated-matrix
/// cross-check.
pub fn run_spectrum(config: &ExperimentConfig) -> Result<Report, CommandError> {
    let resolved = config.frequency.resolve()?;
    let (p, q) = resolved.rational.ok_or_else(|| {
        CommandError::Config(
            "spectrum requires an exactly rational frequency; pass --alpha p/q".into(),
        )
    })?;
    let model = RationalModel::new(config.lambda, config.coupling.clone(), p, q)?;
    let bands = rational_bands(&model, config.theta_grid, config.e_resolution)?;
    let mut report = Report::new("spectrum", config.echo());
    report.add_summary("p", Cell::Int(bands.p));
    report.add_summary("q", Cell::Int(bands.q));
    report.add_summary("period", Cell::Int(bands.period as i64));
    report.add_summary("band_count", Cell::Int(bands.bands.len() as i64));
    report.add_summary("measure", Cell::Float(bands.measure()));
    if config.coupling.len() == 1 && config.coupling[0] != 0.0 {
        let lam = (config.lambda * config.coupling[0]).abs();
        report.add_summary(
            "reference_subcritical_measure",
            Cell::Float(4.0 * (1.0 - lam / 2.0).abs()),
        );
        if lam > 0.0 {
            report.add_summary(
                "reference_inverted_measure",
                Cell::Float(4.0 * (1.0 - 2.0 / lam).abs()),
            );
        }
        if lam > 2.0 {
            report.add_summary("reference_duality_measure", Cell::Float(2.0 * lam - 4.0));
        }
    }
    // Cross-check against the truncated eigenvalue oracle.
    let evals = truncated_spectrum_oracle(model.params(), config.theta, config.sites);
    let eigen_set = IntervalUnion::from_points(evals.iter().copied());
    let worst = evals
        .iter()
        .map(|&ev| bands.bands.distance_to(ev))
        .fold(0.0f64, f64::max);
    report.add_summary(
        "oracle_hausdorff",
        Cell::Float(hausdorff_distance(&eigen_set, &bands.bands)),
    );
    report.add_summary("oracle_worst_eigenvalue_distance", Cell::Float(worst));
    let mut table = Table::new("bands", &["lo", "hi", "width"]);
    for &(lo, hi) in bands.bands.intervals() {
        table.push(vec![
            Cell::Float(lo),
            Cell::Float(hi),
            Cell::Float(hi - lo),
        ]);
    }
    report.add_table(table);
    Ok(report)
}

/// `cf`: continued-fraction expansion or construction, convergents and the
/// beta exponent.
pub fn run_cf(config: &ExperimentConfig) -> Result<Report, CommandError> {
    let resolved = config.frequency.resolve()?;
    let cf = resolved.continued_fraction(config.cf_terms)?;
    let mut report = Report::new("cf", config.echo());
    report.add_summary("alpha", Cell::Float(cf.alpha()));
    report.add_summary("convergents", Cell::Int(cf.len() as i64));
    report.add_summary("finite_expansion", Cell::Flag(cf.is_finite_expansion()));
    if cf.len() >= 3 {
        let beta = beta_estimate(&cf)?;
        report.add_summary("beta", Cell::Float(beta.value));
        report.add_summary("beta_attained_at", Cell::Int(beta.attained_at as i64));
    }
    let mut table = Table::new("convergents", &["n", "a_n", "p_n", "q_n", "error", "bound"]);
    for n in 0..cf.len() {
        let (p, q) = cf.convergent(n);
        let quality = approximation_quality(&cf, n)?;
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Text(cf.quotients()[n].to_string()),
            Cell::Text(p.to_string()),
            Cell::Text(q.to_string()),
            Cell::Float(quality.error),
            match quality.bound {
                Some(b) => Cell::Float(b),
                None => Cell::Text(String::new()),
            },
        ]);
    }
    report.add_table(table);
    Ok(report)
}

/// `gordon`: per-scale diagnostics at the first `levels` convergents.
pub fn run_gordon(config: &ExperimentConfig) -> Result<Report, CommandError> {
    let (params, _) = model_from(config)?;
    let resolved = config.frequency.resolve()?;
    let cf = resolved.continued_fraction(config.cf_terms)?;
    let mut report = Report::new("gordon", config.echo());
    let mut table = Table::new(
        "diagnostics",
        &[
            "level",
            "p",
            "q",
            "t_k",
            "sup_potential_error",
            "potential_error_bound",
            "matrix_discrepancy",
            "discrepancy_bound",
            "four_norm",
            "margin",
            "witness",
            "witness_floor",
            "worst_direction_four_norm",
            "hypothesis_met",
        ],
    );
    let last = config.levels.min(cf.len().saturating_sub(1));
    if last == 0 {
        return Err(CommandError::Config(
            "gordon needs at least one convergent level".into(),
        ));
    }
    for level in 1..=last {
        let diag = gordon_diagnostics(
            &params,
            config.energy,
            config.theta,
            &cf,
            level,
            (1.0, 0.0),
        )?;
        table.push(vec![
            Cell::Int(diag.level as i64),
            Cell::Int(diag.p),
            Cell::Int(diag.q),
            Cell::Int(diag.t_k as i64),
            Cell::Float(diag.sup_potential_error),
            Cell::Float(diag.potential_error_bound),
            Cell::Float(diag.matrix_discrepancy),
            Cell::Float(diag.discrepancy_bound),
            Cell::Float(diag.four_norm),
            Cell::Float(diag.margin),
            Cell::Float(diag.witness),
            Cell::Float(diag.witness_floor),
            Cell::Float(diag.worst_direction_four_norm),
            Cell::Flag(diag.hypothesis_met),
        ]);
    }
    // Potential-error report for the deepest level used.
    let (p_big, q_big) = cf.convergent(last);
    if let (Some(p), Some(q)) = (p_big.to_i64(), q_big.to_i64()) {
        let err = approximant_potential_error(&params, p, q, 4, config.theta_grid)?;
        report.add_summary("deepest_sup_potential_error", Cell::Float(err.measured));
        report.add_summary("deepest_potential_error_bound", Cell::Float(err.bound));
        report.add_summary("deepest_is_convergent", Cell::Flag(err.is_convergent));
    }
    report.add_table(table);
    Ok(report)
}

/// `cohomology`: solve the conjugation equation, measure the residual at
/// the requested energy, and fit the residual slope near zero.
pub fn run_cohomology(config: &ExperimentConfig) -> Result<Report, CommandError> {
    let (params, _) = model_from(config)?;
    let solution = solve_conjugation(&params, DEFAULT_DIVISOR_FLOOR)?;
    let mut report = Report::new("cohomology", config.echo());
    report.add_summary("smallest_divisor", Cell::Float(solution.smallest_divisor));
    report.add_summary("solver_residual_sup", Cell::Float(solution.residual_sup));
    let at_zero = residual_sup(&params, 0.0, &solution.h, DEFAULT_RESIDUAL_GRID)?;
    report.add_summary("conjugated_residual_at_zero", Cell::Float(at_zero));
    if config.energy != 0.0 {
        let at_e = residual_sup(&params, config.energy, &solution.h, DEFAULT_RESIDUAL_GRID)?;
        report.add_summary("conjugated_residual_at_energy", Cell::Float(at_e));
    }
    let energies: Vec<f64> = (0..5).map(|i| 10f64.powf(-3.0 + 0.5 * i as f64)).collect();
    let (slope, points) = residual_slope(&params, &solution.h, &energies, DEFAULT_RESIDUAL_GRID)?;
    report.add_summary("residual_slope", Cell::Float(slope));
    let mut residuals = Table::new("residuals", &["E", "residual_sup"]);
    for (energy, value) in points {
        residuals.push(vec![Cell::Float(energy), Cell::Float(value)]);
    }
    report.add_table(residuals);
    let mut coeffs = Table::new("h_coefficients", &["n", "re", "im"]);
    let degree = solution.h.degree() as i64;
    for n in -degree..=degree {
        let c = solution.h.coeff(n);
        coeffs.push(vec![Cell::Int(n), Cell::Float(c.re), Cell::Float(c.im)]);
    }
    report.add_table(coeffs);
    Ok(report)
}

/// `equivalence`: the alternating-coupling model against the constant-
/// coupling model at the shifted frequency, over random sample points and
/// a sweep.
pub fn run_equivalence(config: &ExperimentConfig) -> Result<Report, CommandError> {
    let resolved = config.frequency.resolve()?;
    let omega = std::f64::consts::TAU * resolved.alpha;
    let mut report = Report::new("equivalence", config.echo());
    let mut rng = SplitMix64::new(config.seed);
    let bound = 2.0 + config.lambda.abs();
    let mut table = Table::new("samples", &["E", "theta", "cocycle_diff"]);
    let mut max_diff: f64 = 0.0;
    for _ in 0..config.samples {
        let energy = rng.next_range(-bound, bound);
        let theta = rng.next_range(0.0, std::f64::consts::TAU);
        let diff = amo_equivalence_check(config.lambda, omega, energy, theta, config.steps)?;
        max_diff = max_diff.max(diff);
        table.push(vec![
            Cell::Float(energy),
            Cell::Float(theta),
            Cell::Float(diff),
        ]);
    }
    report.add_summary("max_cocycle_diff", Cell::Float(max_diff));
    report.add_table(table);

    // Sweep comparison: identical grids through the two code paths.
    let alternating =
        ModelParams::new(config.lambda, vec![1.0, -1.0], omega)?;
    let shifted = (omega + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU);
    let classic = ModelParams::new(config.lambda, vec![1.0], shifted)?;
    let energies = energy_grid(-bound, bound, config.energy_count.min(41));
    let schedule = schedule_of(config);
    let grid = config.grid.min(128);
    let sweep_a = le_sweep(&alternating, &energies, &schedule, grid);
    let sweep_b = le_sweep(&classic, &energies, &schedule, grid);
    let mut sweep_table = Table::new("sweep", &["E", "L_alternating", "L_shifted", "diff"]);
    let mut max_sweep: f64 = 0.0;
    for ((energy, ea), (_, eb)) in sweep_a.iter().zip(sweep_b.iter()) {
        let d = (ea.value - eb.value).abs();
        max_sweep = max_sweep.max(d);
        sweep_table.push(vec![
            Cell::Float(*energy),
            Cell::Float(ea.value),
            Cell::Float(eb.value),
            Cell::Float(d),
        ]);
    }
    report.add_summary("max_sweep_diff", Cell::Float(max_sweep));
    report.add_table(sweep_table);
    Ok(report)
}

