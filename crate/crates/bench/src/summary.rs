//! Instance-level aggregation, the exponential scaling fit and critical-clause
//! generation rates.

use std::collections::BTreeMap;

use docsat_core::stats::RateTally;
use thiserror::Error;

use crate::results::SummaryRow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SummaryError {
    #[error("no instances to aggregate")]
    EmptyInput,
    #[error("need at least two distinct sizes to fit")]
    InsufficientPoints,
    #[error("success probability must be positive, got {0}")]
    NonpositiveProbability(String),
    #[error("solver {0} recorded no non-random flips")]
    NoNonrandomFlips(String),
}

/// Success probability of one (instance, solver) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceOutcome {
    pub instance_id: String,
    pub n_vars: usize,
    pub solver: String,
    pub p: f64,
}

impl InstanceOutcome {
    pub fn solved(&self) -> bool {
        self.p > 0.0
    }
}

/// Mean and standard deviation of the mean (sample deviation over `sqrt(n)`;
/// zero for a single value).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Number of instances in the hardest quintile: `ceil(n / 5)`.
pub fn quintile_size(n: usize) -> usize {
    n.div_ceil(5)
}

/// One summary row per `(n_vars, solver)`, ordered by size and then by the
/// order in which solvers first appear.
///
/// `r_sol` is the fraction of instances solved at least once; `p_avg` the mean
/// success probability; the quintile columns average the `ceil(n/5)`
/// instances with the lowest success probability for that solver.
pub fn aggregate_summary(outcomes: &[InstanceOutcome]) -> Result<Vec<SummaryRow>, SummaryError> {
    if outcomes.is_empty() {
        return Err(SummaryError::EmptyInput);
    }
    let mut solver_order: Vec<&str> = Vec::new();
    for o in outcomes {
        if !solver_order.contains(&o.solver.as_str()) {
            solver_order.push(&o.solver);
        }
    }
    let mut groups: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for o in outcomes {
        let s = solver_order.iter().position(|&x| x == o.solver).unwrap();
        groups.entry((o.n_vars, s)).or_default().push(o.p);
    }
    Ok(groups
        .into_iter()
        .map(|((n_vars, s), mut ps)| {
            let n = ps.len();
            let solved = ps.iter().filter(|&&p| p > 0.0).count();
            let (p_avg, p_avg_stderr) = mean_stderr(&ps);
            ps.sort_by(f64::total_cmp);
            let (p_avg_quintile, p_avg_quintile_stderr) = mean_stderr(&ps[..quintile_size(n)]);
            SummaryRow {
                n_vars,
                solver: solver_order[s].to_string(),
                n_instances: n,
                r_sol: solved as f64 / n as f64,
                p_avg,
                p_avg_stderr,
                p_avg_quintile,
                p_avg_quintile_stderr,
            }
        })
        .collect())
}

/// Exponential fit `<p> ~ prefactor * (1 + b)^(-N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub fit_b: f64,
    pub prefactor: f64,
    /// Root mean square residual of `ln <p>`.
    pub residual: f64,
    pub n_points: usize,
}

/// Least squares on `ln p = c - N ln(1 + b)`.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<FitResult, SummaryError> {
    if let Some(&(_, p)) = points.iter().find(|(_, p)| p.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)) {
        return Err(SummaryError::NonpositiveProbability(p.to_string()));
    }
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(SummaryError::InsufficientPoints);
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(SummaryError::InsufficientPoints);
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1.ln() - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss: f64 = points.iter().map(|p| (p.1.ln() - intercept - slope * p.0).powi(2)).sum();
    Ok(FitResult {
        fit_b: (-slope).exp_m1(),
        prefactor: intercept.exp(),
        residual: (ss / n).sqrt(),
        n_points: points.len(),
    })
}

/// Fits only the points with positive `<p>`.
pub fn fit_scaling_positive(points: &[(f64, f64)]) -> Result<FitResult, SummaryError> {
    let kept: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.1 > 0.0).collect();
    fit_scaling(&kept)
}

/// Critical clause generation rates of one solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverRate {
    pub solver: String,
    /// Oversatisfied-to-critical transitions per non-random flip.
    pub gamma_c: f64,
    /// All critical clause creations (from oversatisfied or unsatisfied
    /// clauses) per non-random flip.
    pub gamma_combined: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateComparison {
    pub numerator: String,
    pub denominator: String,
    pub gamma_c_ratio: f64,
    pub combined_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub rates: Vec<SolverRate>,
    /// Every ordered pair of distinct solvers.
    pub ratios: Vec<RateComparison>,
}

pub fn solver_rate(solver: &str, tally: &RateTally) -> Result<SolverRate, SummaryError> {
    if tally.nonrandom_flips == 0 {
        return Err(SummaryError::NoNonrandomFlips(solver.to_string()));
    }
    let n = tally.nonrandom_flips as f64;
    Ok(SolverRate {
        solver: solver.to_string(),
        gamma_c: tally.oversat_to_crit as f64 / n,
        gamma_combined: (tally.oversat_to_crit + tally.unsat_to_crit) as f64 / n,
    })
}

/// Rates per solver and their pairwise ratios.
pub fn rate_report(tallies: &[(String, RateTally)]) -> Result<RateReport, SummaryError> {
    let rates = tallies
        .iter()
        .map(|(s, t)| solver_rate(s, t))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ratios = Vec::new();
    for a in &rates {
        for b in &rates {
            if a.solver != b.solver {
                ratios.push(RateComparison {
                    numerator: a.solver.clone(),
                    denominator: b.solver.clone(),
                    gamma_c_ratio: a.gamma_c / b.gamma_c,
                    combined_ratio: a.gamma_combined / b.gamma_combined,
                });
            }
        }
    }
    Ok(RateReport { rates, ratios })
}
