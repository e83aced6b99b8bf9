//! Solver campaigns over instance suites.
//!
//! A campaign is split into work units `(instance, solver, trial shard)` that
//! run on a pool of `jobs` threads. Trial `i` of an instance uses the seed
//! `mix(campaign_seed, i)` whatever shard it lands in, and shard results are
//! merged in shard order, so outputs do not depend on `jobs` or `shard_size`.
//! The campaign seed of an instance is `mix(master_seed, fnv1a(instance_id))`
//! and is shared by all solvers, which therefore start from the same initial
//! assignments.

use std::ops::Range;
use std::path::{Path, PathBuf};

use docsat_core::engine::run_trial_range;
use docsat_core::generator::{instance_id, instance_seed};
use docsat_core::{generate, mix, Formula, GenConfig, HeuristicConfig, StatsAccumulator, TrialResult};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::dimacs::parse_dimacs;
use crate::results::{self, FailureRow, ManifestRow, SummaryRow, TrialRow};
use crate::summary::{aggregate_summary, InstanceOutcome};
use crate::BenchError;

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub id: String,
    pub formula: Formula,
}

/// All trials of one solver on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverRun {
    pub instance_id: String,
    pub n_vars: usize,
    pub solver: String,
    pub heuristic: HeuristicConfig,
    pub campaign_seed: u64,
    /// Per-trial results in trial order, without the solution vectors.
    pub trials: Vec<TrialResult>,
    pub stats: StatsAccumulator,
}

impl SolverRun {
    /// Fraction of solved trials.
    pub fn p(&self) -> f64 {
        self.trials.iter().filter(|t| t.solved).count() as f64 / self.trials.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CampaignResult {
    /// In instance order, then solver order.
    pub runs: Vec<SolverRun>,
    pub failures: Vec<FailureRow>,
}

impl CampaignResult {
    pub fn run(&self, instance_id: &str, solver: &str) -> Option<&SolverRun> {
        self.runs.iter().find(|r| r.instance_id == instance_id && r.solver == solver)
    }

    pub fn outcomes(&self) -> Vec<InstanceOutcome> {
        self.runs
            .iter()
            .map(|r| InstanceOutcome {
                instance_id: r.instance_id.clone(),
                n_vars: r.n_vars,
                solver: r.solver.clone(),
                p: r.p(),
            })
            .collect()
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub fn campaign_seed(master_seed: u64, instance_id: &str) -> u64 {
    mix(master_seed, fnv1a(instance_id.as_bytes()))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, BenchError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| BenchError::Runtime(format!("thread pool: {e}")))
}

fn shards(n_trials: usize, shard_size: usize) -> Vec<Range<usize>> {
    (0..n_trials).step_by(shard_size).map(|s| s..(s + shard_size).min(n_trials)).collect()
}

/// Runs every configured solver on every instance.
///
/// A failing (instance, solver) pair is recorded in
/// [`CampaignResult::failures`] and does not stop the others.
pub fn run_campaign(instances: &[Instance], cfg: &ExperimentConfig) -> Result<CampaignResult, BenchError> {
    cfg.validate()?;
    let labels = cfg.labels();
    let ranges = shards(cfg.trials.n_trials, cfg.shard_size);
    let units: Vec<(usize, usize, Range<usize>)> = (0..instances.len())
        .flat_map(|i| (0..cfg.solvers.len()).map(move |s| (i, s)))
        .flat_map(|(i, s)| ranges.iter().map(move |r| (i, s, r.clone())))
        .collect();

    let outputs: Vec<Result<(Vec<TrialResult>, StatsAccumulator), docsat_core::Error>> = pool(cfg.jobs)?.install(|| {
        units
            .par_iter()
            .map(|(i, s, range)| {
                let inst = &instances[*i];
                let trial = cfg.trials.for_size(inst.formula.n_vars());
                let seed = campaign_seed(cfg.suite.master_seed, &inst.id);
                let mut acc = StatsAccumulator::new(cfg.instrumentation);
                let mut trials =
                    run_trial_range(&inst.formula, &cfg.solvers[*s].heuristic, &trial, seed, range.clone(), &mut acc)?;
                for t in &mut trials {
                    acc.record_trial(t);
                    t.solution = None;
                }
                Ok((trials, acc))
            })
            .collect()
    });

    let mut result = CampaignResult::default();
    let mut outputs = outputs.into_iter();
    for inst in instances {
        for (spec, label) in cfg.solvers.iter().zip(&labels) {
            let mut run = SolverRun {
                instance_id: inst.id.clone(),
                n_vars: inst.formula.n_vars(),
                solver: label.clone(),
                heuristic: spec.heuristic,
                campaign_seed: campaign_seed(cfg.suite.master_seed, &inst.id),
                trials: Vec::with_capacity(cfg.trials.n_trials),
                stats: StatsAccumulator::new(cfg.instrumentation),
            };
            let mut error = None;
            for out in outputs.by_ref().take(ranges.len()) {
                match out {
                    Ok((trials, acc)) => {
                        run.trials.extend(trials);
                        run.stats.merge(&acc);
                    }
                    Err(e) => error = Some(e),
                }
            }
            match error {
                None => result.runs.push(run),
                Some(e) => result.failures.push(FailureRow {
                    instance_id: inst.id.clone(),
                    solver: label.clone(),
                    error: e.to_string(),
                }),
            }
        }
    }
    Ok(result)
}

/// Generated instances with their manifest rows, and the failures.
pub type Generated = (Vec<(Instance, ManifestRow)>, Vec<FailureRow>);

/// Generates the configured suite. Instances that cannot be generated are
/// returned as failures.
pub fn generate_instances(cfg: &ExperimentConfig) -> Result<Generated, BenchError> {
    let template = cfg.suite.template();
    let keys: Vec<(usize, usize)> =
        cfg.suite.n_list.iter().flat_map(|&n| (0..cfg.suite.n_instances).map(move |i| (n, i))).collect();
    let generated: Vec<_> = pool(cfg.jobs)?.install(|| {
        keys.par_iter()
            .map(|&(n, i)| {
                let seed = instance_seed(cfg.suite.master_seed, n, i);
                let id = instance_id(n, i);
                let formula = generate(&GenConfig { n_vars: n, seed, ..template });
                let row = ManifestRow { instance_id: id.clone(), n_vars: n, alpha: cfg.suite.alpha, seed };
                (id, formula, row)
            })
            .collect()
    });
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for (id, formula, row) in generated {
        match formula {
            Ok(formula) => ok.push((Instance { id, formula }, row)),
            Err(e) => failed.push(FailureRow { instance_id: id, solver: String::new(), error: e.to_string() }),
        }
    }
    Ok((ok, failed))
}

/// Reads the instances listed in a manifest from `{instance_id}.cnf` files in
/// the manifest's directory. Unreadable or invalid files become failures.
pub fn load_manifest(path: &Path) -> Result<(Vec<Instance>, Vec<FailureRow>), BenchError> {
    let rows: Vec<ManifestRow> = results::read_results(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for row in rows {
        let file = dir.join(format!("{}.cnf", row.instance_id));
        let loaded = std::fs::read(&file)
            .map_err(|e| BenchError::io(&file, e))
            .and_then(|bytes| parse_dimacs(&bytes).map_err(|source| BenchError::Dimacs { path: file.clone(), source }))
            .and_then(|formula| {
                if formula.n_vars() == row.n_vars {
                    Ok(formula)
                } else {
                    Err(BenchError::Runtime(format!(
                        "{} declares {} variables, manifest says {}",
                        file.display(),
                        formula.n_vars(),
                        row.n_vars
                    )))
                }
            });
        match loaded {
            Ok(formula) => ok.push(Instance { id: row.instance_id, formula }),
            Err(e) => failed.push(FailureRow { instance_id: row.instance_id, solver: String::new(), error: e.to_string() }),
        }
    }
    Ok((ok, failed))
}

/// Instances of an experiment: from the manifest if one is set, otherwise
/// generated.
pub fn load_instances(cfg: &ExperimentConfig) -> Result<(Vec<Instance>, Vec<FailureRow>), BenchError> {
    match &cfg.manifest {
        Some(path) => load_manifest(path),
        None => {
            let (ok, failed) = generate_instances(cfg)?;
            Ok((ok.into_iter().map(|(inst, _)| inst).collect(), failed))
        }
    }
}

pub fn trial_rows(run: &SolverRun) -> impl Iterator<Item = TrialRow> + '_ {
    run.trials.iter().enumerate().map(move |(i, t)| TrialRow {
        instance_id: run.instance_id.clone(),
        solver: run.solver.clone(),
        p_walk: run.heuristic.p_walk,
        r_doc: run.heuristic.r_doc,
        seed: mix(run.campaign_seed, i as u64),
        trial: i,
        solved: u8::from(t.solved),
        flips_used: t.flips_used,
        final_energy: t.final_energy,
        final_tlc: t.final_tlc,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub campaign: CampaignResult,
    pub summary: Vec<SummaryRow>,
    /// Files written, in writing order.
    pub files: Vec<PathBuf>,
}

pub const RESOLVED_CONFIG_FILE: &str = "config.json";

/// Runs an experiment and writes its outputs to `cfg.out_dir`:
/// `config.json` (the resolved configuration), `trials.csv`, `summary.csv`,
/// `histogram.csv`, `crit.csv` and `rates.csv` as enabled by the
/// instrumentation toggles, and `failures.csv` if anything failed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, BenchError> {
    cfg.validate()?;
    let dir = &cfg.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let mut files = Vec::new();
    let path = dir.join(RESOLVED_CONFIG_FILE);
    std::fs::write(&path, cfg.to_json()).map_err(|e| BenchError::io(&path, e))?;
    files.push(path);

    let (instances, mut failures) = load_instances(cfg)?;
    let mut campaign = run_campaign(&instances, cfg)?;
    failures.append(&mut campaign.failures);
    campaign.failures = failures;

    let mut write = |name: &str, f: &dyn Fn(&Path) -> Result<(), BenchError>| -> Result<(), BenchError> {
        let path = dir.join(name);
        f(&path)?;
        files.push(path);
        Ok(())
    };
    let runs = &campaign.runs;
    write("trials.csv", &|p| {
        let rows: Vec<TrialRow> = runs.iter().flat_map(trial_rows).collect();
        results::write_results(p, &results::TRIALS_HEADER, &rows)
    })?;
    let toggles = cfg.instrumentation;
    if toggles.histogram {
        write("histogram.csv", &|p| {
            let rows: Vec<_> =
                runs.iter().flat_map(|r| results::histogram_rows(&r.instance_id, &r.solver, &r.stats)).collect();
            results::write_results(p, &results::HISTOGRAM_HEADER, &rows)
        })?;
    }
    if toggles.crit_stats {
        write("crit.csv", &|p| {
            let rows: Vec<_> =
                runs.iter().flat_map(|r| results::crit_rows(&r.instance_id, &r.solver, &r.stats)).collect();
            results::write_results(p, &results::CRIT_HEADER, &rows)
        })?;
    }
    if toggles.rates {
        write("rates.csv", &|p| {
            let rows: Vec<_> = runs.iter().map(|r| results::rate_row(&r.instance_id, &r.solver, &r.stats)).collect();
            results::write_results(p, &results::RATES_HEADER, &rows)
        })?;
    }
    let summary = aggregate_summary(&campaign.outcomes()).map_err(|_| {
        BenchError::Runtime(format!("no instance could be run ({} failures)", campaign.failures.len()))
    })?;
    write("summary.csv", &|p| results::write_results(p, &results::SUMMARY_HEADER, &summary))?;
    if !campaign.failures.is_empty() {
        let failures = &campaign.failures;
        write("failures.csv", &|p| results::write_results(p, &results::FAILURES_HEADER, failures))?;
    }
    Ok(ExperimentReport { campaign, summary, files })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SolverSpec;
    use docsat_core::generate_suite;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn shard_ranges_cover() {
        assert_eq!(shards(10, 4), vec![0..4, 4..8, 8..10]);
        assert_eq!(shards(3, 64), vec![0..3]);
    }

    fn small() -> (Vec<Instance>, ExperimentConfig) {
        let instances = generate_suite(&[30], 4.27, 3, 5)
            .unwrap()
            .into_iter()
            .map(|(id, formula)| Instance { id, formula })
            .collect();
        let cfg = ExperimentConfig {
            solvers: vec![
                SolverSpec::new(HeuristicConfig::walksat(0.5)),
                SolverSpec::new(HeuristicConfig::docsat(0.4, 0.15)),
            ],
            trials: crate::TrialSpec { n_trials: 7, flips_per_var: 20, stop_on_solution: true },
            shard_size: 3,
            ..Default::default()
        };
        (instances, cfg)
    }

    #[test]
    fn campaign_matches_direct_restarts() {
        let (instances, cfg) = small();
        let res = run_campaign(&instances, &cfg).unwrap();
        assert_eq!(res.runs.len(), 6);
        for run in &res.runs {
            let inst = instances.iter().find(|i| i.id == run.instance_id).unwrap();
            let direct = docsat_core::run_restarts(
                &inst.formula,
                &run.heuristic,
                &cfg.trials.for_size(30),
                campaign_seed(cfg.suite.master_seed, &inst.id),
                &mut (),
            )
            .unwrap();
            let stripped: Vec<_> = direct.trials.into_iter().map(|t| TrialResult { solution: None, ..t }).collect();
            assert_eq!(run.trials, stripped);
            assert_eq!(run.stats.trials, 7);
        }
    }

    #[test]
    fn invalid_solver_is_rejected_before_running() {
        let (instances, mut cfg) = small();
        cfg.solvers[1].heuristic.r_doc = -1.0;
        assert!(matches!(run_campaign(&instances, &cfg), Err(BenchError::Config(_))));
    }
}
