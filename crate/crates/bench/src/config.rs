//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "suite": { "n_list": [100, 200], "alpha": 4.27, "n_instances": 50, "master_seed": 2024 },
//!   "solvers": [
//!     { "kind": "walksat", "p_walk": 0.5 },
//!     { "name": "doc", "kind": "docsat", "p_walk": 0.4, "r_doc": 0.15 }
//!   ],
//!   "trials": { "n_trials": 200, "flips_per_var": 300 },
//!   "instrumentation": { "histogram": false, "crit_stats": true, "rates": true },
//!   "jobs": 4,
//!   "out_dir": "results"
//! }
//! ```
//!
//! Every field has a default. When `manifest` is set, instances are read from
//! the DIMACS files listed in that manifest instead of being generated.

use std::path::{Path, PathBuf};

use docsat_core::{GenConfig, HeuristicConfig, HeuristicKind, StatsToggles, TrialConfig};
use serde::{Deserialize, Serialize};

use crate::BenchError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteSpec {
    pub n_list: Vec<usize>,
    pub alpha: f64,
    pub n_instances: usize,
    pub master_seed: u64,
    pub forbid_duplicate_clauses: bool,
    pub planted: bool,
    pub filter_satisfiable: bool,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        SuiteSpec {
            n_list: vec![200],
            alpha: 4.27,
            n_instances: 50,
            master_seed: 0,
            forbid_duplicate_clauses: false,
            planted: false,
            filter_satisfiable: false,
        }
    }
}

impl SuiteSpec {
    /// Generator settings shared by every instance; size and seed are filled
    /// in per instance.
    pub fn template(&self) -> GenConfig {
        GenConfig {
            forbid_duplicate_clauses: self.forbid_duplicate_clauses,
            planted: self.planted,
            filter_satisfiable: self.filter_satisfiable,
            ..GenConfig::uniform(0, self.alpha, 0)
        }
    }
}

/// A heuristic with an optional display label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub heuristic: HeuristicConfig,
}

impl SolverSpec {
    pub fn new(heuristic: HeuristicConfig) -> Self {
        SolverSpec { name: None, heuristic }
    }

    /// The explicit name, or a label built from the kind and its parameters,
    /// e.g. `walksat_p0.5` or `docsat_p0.4_r0.15`.
    pub fn label(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        let h = &self.heuristic;
        let base = format!("{}_p{}", h.kind.name(), h.p_walk);
        match h.kind {
            HeuristicKind::Docsat => format!("{base}_r{}", h.r_doc),
            HeuristicKind::Tabu => format!("{base}_t{}", h.tabu_len),
            HeuristicKind::Novelty => format!("{base}_n{}", h.p_novelty),
            HeuristicKind::Walksat | HeuristicKind::Gwsat => base,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialSpec {
    pub n_trials: usize,
    /// Flip budget per trial is `flips_per_var * N`.
    pub flips_per_var: u64,
    pub stop_on_solution: bool,
}

impl Default for TrialSpec {
    fn default() -> Self {
        TrialSpec { n_trials: 100, flips_per_var: 300, stop_on_solution: true }
    }
}

impl TrialSpec {
    pub fn for_size(&self, n_vars: usize) -> TrialConfig {
        TrialConfig {
            max_flips: self.flips_per_var * n_vars as u64,
            n_trials: self.n_trials,
            stop_on_solution: self.stop_on_solution,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: SuiteSpec,
    /// Manifest CSV (`instance_id,n_vars,alpha,seed`) of existing instances;
    /// `{instance_id}.cnf` is looked up next to it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifest: Option<PathBuf>,
    pub solvers: Vec<SolverSpec>,
    pub trials: TrialSpec,
    pub instrumentation: StatsToggles,
    /// Worker threads.
    pub jobs: usize,
    /// Trials per work unit.
    pub shard_size: usize,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            suite: SuiteSpec::default(),
            manifest: None,
            solvers: vec![
                SolverSpec::new(HeuristicConfig::walksat(0.5)),
                SolverSpec::new(HeuristicConfig::docsat(0.4, 0.15)),
            ],
            trials: TrialSpec::default(),
            instrumentation: StatsToggles::default(),
            jobs: 1,
            shard_size: 64,
            out_dir: PathBuf::from("results"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    pub fn labels(&self) -> Vec<String> {
        self.solvers.iter().map(SolverSpec::label).collect()
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.solvers.is_empty() {
            return bad("at least one solver is required");
        }
        for s in &self.solvers {
            s.heuristic.validate().map_err(|e| BenchError::Config(format!("solver {}: {e}", s.label())))?;
        }
        let labels = self.labels();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(BenchError::Config(format!("duplicate solver label {l}")));
            }
        }
        if self.trials.n_trials == 0 {
            return bad("n_trials must be at least 1");
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1");
        }
        if self.shard_size == 0 {
            return bad("shard_size must be at least 1");
        }
        match &self.manifest {
            Some(path) => {
                if !path.is_file() {
                    return Err(BenchError::Config(format!("manifest {} not found", path.display())));
                }
            }
            None => {
                if self.suite.n_list.is_empty() || self.suite.n_instances == 0 {
                    return bad("the suite is empty");
                }
                for &n in &self.suite.n_list {
                    GenConfig { n_vars: n, ..self.suite.template() }
                        .validate()
                        .map_err(|e| BenchError::Config(format!("suite N={n}: {e}")))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_json_is_default() {
        assert_eq!(ExperimentConfig::from_json("{}").unwrap(), ExperimentConfig::default());
        ExperimentConfig::default().validate().unwrap();
    }

    #[test]
    fn solvers_flatten_and_label() {
        let cfg = ExperimentConfig::from_json(
            r#"{"solvers": [{"kind": "docsat", "p_walk": 0.4, "r_doc": 0.15}, {"name": "w", "kind": "walksat"}]}"#,
        )
        .unwrap();
        assert_eq!(cfg.solvers[0].heuristic, HeuristicConfig::docsat(0.4, 0.15));
        assert_eq!(cfg.labels(), vec!["docsat_p0.4_r0.15".to_string(), "w".to_string()]);
        assert_eq!(SolverSpec::new(HeuristicConfig::walksat(0.5)).label(), "walksat_p0.5");
        assert_eq!(SolverSpec::new(HeuristicConfig::tabu(0.5, 20)).label(), "tabu_p0.5_t20");
    }

    #[test]
    fn json_round_trip() {
        let cfg = ExperimentConfig { manifest: Some("m.csv".into()), ..Default::default() };
        assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_json(r#"{"sweet": {}}"#).is_err());
        let invalid = |f: fn(&mut ExperimentConfig)| {
            let mut c = ExperimentConfig::default();
            f(&mut c);
            assert!(matches!(c.validate(), Err(BenchError::Config(_))));
        };
        invalid(|c| c.solvers.clear());
        invalid(|c| c.solvers[0].heuristic.p_walk = 1.5);
        invalid(|c| c.solvers[1] = c.solvers[0].clone());
        invalid(|c| c.trials.n_trials = 0);
        invalid(|c| c.jobs = 0);
        invalid(|c| c.suite.n_list = vec![2]);
        invalid(|c| c.suite.alpha = -1.0);
        invalid(|c| c.manifest = Some("/nonexistent/manifest.csv".into()));
    }

    #[test]
    fn budget_scales_with_size() {
        let t = TrialSpec::default().for_size(200);
        assert_eq!(t.max_flips, 60_000);
    }
}
