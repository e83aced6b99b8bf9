//! Plot-ready CSV outputs.
//!
//! | file            | columns |
//! |-----------------|---------|
//! | `trials.csv`    | instance_id, solver, p_walk, r_doc, seed, trial, solved, flips_used, final_energy, final_tlc |
//! | `histogram.csv` | instance_id, solver, energy, tlc, count |
//! | `crit.csv`      | instance_id, solver, energy, mean_crit, count |
//! | `rates.csv`     | instance_id, solver, oversat_to_crit, unsat_to_crit, crit_destroyed, nonrandom_flips, random_flips |
//! | `summary.csv`   | n_vars, solver, n_instances, r_sol, p_avg, p_avg_stderr, p_avg_quintile, p_avg_quintile_stderr |
//! | `manifest.csv`  | instance_id, n_vars, alpha, seed |
//! | `failures.csv`  | instance_id, solver, error |
//!
//! Every file starts with its header line, also when there are no rows.
//! Transition counts in `rates.csv` cover non-random flips only. The `seed`
//! column of `trials.csv` seeds the generator of that single trial.

use std::io::Write;
use std::path::Path;

use docsat_core::StatsAccumulator;
use serde::{Deserialize, Serialize};

use crate::BenchError;

pub const TRIALS_HEADER: [&str; 10] = [
    "instance_id", "solver", "p_walk", "r_doc", "seed", "trial", "solved", "flips_used", "final_energy", "final_tlc",
];
pub const HISTOGRAM_HEADER: [&str; 5] = ["instance_id", "solver", "energy", "tlc", "count"];
pub const CRIT_HEADER: [&str; 5] = ["instance_id", "solver", "energy", "mean_crit", "count"];
pub const RATES_HEADER: [&str; 7] = [
    "instance_id", "solver", "oversat_to_crit", "unsat_to_crit", "crit_destroyed", "nonrandom_flips", "random_flips",
];
pub const SUMMARY_HEADER: [&str; 8] = [
    "n_vars", "solver", "n_instances", "r_sol", "p_avg", "p_avg_stderr", "p_avg_quintile", "p_avg_quintile_stderr",
];
pub const MANIFEST_HEADER: [&str; 4] = ["instance_id", "n_vars", "alpha", "seed"];
pub const FAILURES_HEADER: [&str; 3] = ["instance_id", "solver", "error"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub instance_id: String,
    pub solver: String,
    pub p_walk: f64,
    pub r_doc: f64,
    pub seed: u64,
    pub trial: usize,
    pub solved: u8,
    pub flips_used: u64,
    pub final_energy: usize,
    pub final_tlc: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub instance_id: String,
    pub solver: String,
    pub energy: usize,
    pub tlc: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CritRow {
    pub instance_id: String,
    pub solver: String,
    pub energy: usize,
    pub mean_crit: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub instance_id: String,
    pub solver: String,
    pub oversat_to_crit: u64,
    pub unsat_to_crit: u64,
    pub crit_destroyed: u64,
    pub nonrandom_flips: u64,
    pub random_flips: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n_vars: usize,
    pub solver: String,
    pub n_instances: usize,
    pub r_sol: f64,
    pub p_avg: f64,
    pub p_avg_stderr: f64,
    pub p_avg_quintile: f64,
    pub p_avg_quintile_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub instance_id: String,
    pub n_vars: usize,
    pub alpha: f64,
    pub seed: u64,
}

/// An instance or (instance, solver) pair that could not be run. `solver` is
/// empty when the instance itself failed to load or generate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRow {
    pub instance_id: String,
    pub solver: String,
    pub error: String,
}

/// Histogram rows of one accumulator in `(energy, tlc)` order.
pub fn histogram_rows(instance_id: &str, solver: &str, acc: &StatsAccumulator) -> Vec<HistogramRow> {
    acc.histogram
        .iter()
        .map(|(energy, tlc, count)| HistogramRow {
            instance_id: instance_id.to_string(),
            solver: solver.to_string(),
            energy,
            tlc,
            count,
        })
        .collect()
}

pub fn crit_rows(instance_id: &str, solver: &str, acc: &StatsAccumulator) -> Vec<CritRow> {
    acc.crit
        .iter()
        .map(|(energy, sum, count)| CritRow {
            instance_id: instance_id.to_string(),
            solver: solver.to_string(),
            energy,
            mean_crit: sum as f64 / count as f64,
            count,
        })
        .collect()
}

pub fn rate_row(instance_id: &str, solver: &str, acc: &StatsAccumulator) -> RateRow {
    let r = &acc.rates;
    RateRow {
        instance_id: instance_id.to_string(),
        solver: solver.to_string(),
        oversat_to_crit: r.oversat_to_crit,
        unsat_to_crit: r.unsat_to_crit,
        crit_destroyed: r.crit_destroyed,
        nonrandom_flips: r.nonrandom_flips,
        random_flips: r.random_flips,
    }
}

/// Writes `header` and `rows` as CSV to any writer.
pub fn write_csv<W: Write, T: Serialize>(out: W, header: &[&str], rows: &[T]) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| BenchError::Io { path: "<csv>".into(), source: e })?;
    Ok(())
}

/// Writes `header` and `rows` to `path`, replacing any existing file.
pub fn write_results<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<(), BenchError> {
    let file = std::fs::File::create(path).map_err(|e| BenchError::io(path, e))?;
    write_csv(std::io::BufWriter::new(file), header, rows)
}

/// Reads rows written by [`write_results`].
pub fn read_results<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, BenchError> {
    let file = std::fs::File::open(path).map_err(|e| BenchError::io(path, e))?;
    let mut r = csv::Reader::from_reader(std::io::BufReader::new(file));
    r.deserialize().map(|row| row.map_err(BenchError::from)).collect()
}
