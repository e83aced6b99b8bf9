use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use clap::{Args, Parser, Subcommand};
use docsat_bench::config::{ExperimentConfig, SolverSpec};
use docsat_bench::dimacs::{parse_dimacs, write_dimacs_with_comments};
use docsat_bench::experiment::{generate_instances, run_campaign, run_experiment, Instance};
use docsat_bench::results::{self, ManifestRow, RateRow, SummaryRow};
use docsat_bench::summary::{fit_scaling_positive, rate_report};
use docsat_bench::BenchError;
use docsat_core::oracle::ENUMERATION_LIMIT;
use docsat_core::stats::RateTally;
use docsat_core::{dpll_sat, enumerate, DpllResult, Formula, HeuristicConfig, HeuristicKind};

#[derive(Parser)]
#[command(name = "docsat", version, about = "Stochastic local search for random 3-SAT and its benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance suite as DIMACS files plus manifest.csv.
    Generate(GenerateArgs),
    /// Run the configured solvers on one DIMACS file.
    Solve {
        cnf: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Run a full experiment and write its CSV outputs.
    Bench {
        /// Read instances from this manifest instead of generating them.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Decide satisfiability exactly (enumeration for small N, else DPLL).
    Oracle {
        cnf: PathBuf,
        #[arg(long, default_value_t = 100_000_000)]
        node_budget: u64,
        /// Use DPLL even when enumeration is possible.
        #[arg(long)]
        dpll: bool,
    },
    /// Fit <p> ~ (1+b)^-N per solver from a summary.csv.
    Fit { summary: PathBuf },
    /// Critical clause generation rates and their ratios from a rates.csv.
    Rates {
        rates: PathBuf,
        /// Restrict to one instance.
        #[arg(long)]
        instance: Option<String>,
    },
    /// Run an external SAT solver binary on a DIMACS file and check its answer.
    External {
        #[arg(long)]
        binary: PathBuf,
        cnf: PathBuf,
        /// Extra arguments passed after the file name.
        #[arg(last = true)]
        args: Vec<String>,
    },
}

/// Flags that override fields of the JSON configuration.
#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Replace the configured solvers by a single one of this kind.
    #[arg(long)]
    solver: Option<HeuristicKind>,
    #[arg(long)]
    p_walk: Option<f64>,
    #[arg(long)]
    r_doc: Option<f64>,
    #[arg(long)]
    tabu_len: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    flips_per_var: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    histogram: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    crit_stats: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    rates: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    stop_on_solution: Option<bool>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    planted: bool,
    /// Keep only instances certified satisfiable by DPLL.
    #[arg(long)]
    filter_sat: bool,
    #[arg(long)]
    no_duplicates: bool,
    #[arg(long)]
    jobs: Option<usize>,
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig, BenchError> {
    match path {
        None => Ok(ExperimentConfig::default()),
        Some(p) => ExperimentConfig::load(p).map_err(|e| BenchError::Config(e.to_string())),
    }
}

impl Overrides {
    fn resolve(&self) -> Result<ExperimentConfig, BenchError> {
        let mut cfg = load_config(self.config.as_deref())?;
        if let Some(d) = &self.out_dir {
            cfg.out_dir = d.clone();
        }
        if let Some(s) = self.seed {
            cfg.suite.master_seed = s;
        }
        if let Some(kind) = self.solver {
            let heuristic = match kind {
                HeuristicKind::Walksat => HeuristicConfig::walksat(0.5),
                HeuristicKind::Docsat => HeuristicConfig::docsat(0.4, 0.15),
                HeuristicKind::Gwsat => HeuristicConfig::gwsat(0.5),
                HeuristicKind::Tabu => HeuristicConfig::tabu(0.5, 20),
                HeuristicKind::Novelty => HeuristicConfig::novelty(0.01, 0.5),
            };
            cfg.solvers = vec![SolverSpec::new(heuristic)];
        }
        for s in &mut cfg.solvers {
            if let Some(p) = self.p_walk {
                s.heuristic.p_walk = p;
            }
            if let Some(r) = self.r_doc {
                s.heuristic.r_doc = r;
            }
            if let Some(t) = self.tabu_len {
                s.heuristic.tabu_len = t;
            }
        }
        if let Some(t) = self.trials {
            cfg.trials.n_trials = t;
        }
        if let Some(f) = self.flips_per_var {
            cfg.trials.flips_per_var = f;
        }
        if let Some(s) = self.stop_on_solution {
            cfg.trials.stop_on_solution = s;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        let t = &mut cfg.instrumentation;
        t.histogram = self.histogram.unwrap_or(t.histogram);
        t.crit_stats = self.crit_stats.unwrap_or(t.crit_stats);
        t.rates = self.rates.unwrap_or(t.rates);
        Ok(cfg)
    }
}

fn read_cnf(path: &Path) -> Result<Formula, BenchError> {
    let bytes = std::fs::read(path).map_err(|e| BenchError::io(path, e))?;
    parse_dimacs(&bytes).map_err(|source| BenchError::Dimacs { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), BenchError> {
    std::fs::write(path, text).map_err(|e| BenchError::io(path, e))
}

fn report_failures(failures: &[results::FailureRow]) {
    for f in failures {
        let solver = if f.solver.is_empty() { String::new() } else { format!(" [{}]", f.solver) };
        eprintln!("warning: {}{}: {}", f.instance_id, solver, f.error);
    }
}

fn cmd_generate(a: &GenerateArgs) -> Result<(), BenchError> {
    let mut cfg = load_config(a.config.as_deref())?;
    if let Some(d) = &a.out_dir {
        cfg.out_dir = d.clone();
    }
    if let Some(s) = a.seed {
        cfg.suite.master_seed = s;
    }
    if let Some(n) = &a.n_list {
        cfg.suite.n_list = n.clone();
    }
    if let Some(x) = a.alpha {
        cfg.suite.alpha = x;
    }
    if let Some(k) = a.instances {
        cfg.suite.n_instances = k;
    }
    if let Some(j) = a.jobs {
        cfg.jobs = j;
    }
    cfg.suite.planted |= a.planted;
    cfg.suite.filter_satisfiable |= a.filter_sat;
    cfg.suite.forbid_duplicate_clauses |= a.no_duplicates;
    cfg.manifest = None;
    cfg.validate()?;

    let dir = &cfg.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    write_file(&dir.join("config.json"), &cfg.to_json())?;
    let (instances, failures) = generate_instances(&cfg)?;
    report_failures(&failures);
    let mut manifest: Vec<ManifestRow> = Vec::with_capacity(instances.len());
    for (inst, row) in instances {
        let comments = vec![format!("{} alpha={} seed={}", inst.id, row.alpha, row.seed)];
        write_file(&dir.join(format!("{}.cnf", inst.id)), &write_dimacs_with_comments(&inst.formula, &comments))?;
        manifest.push(row);
    }
    results::write_results(&dir.join("manifest.csv"), &results::MANIFEST_HEADER, &manifest)?;
    println!("wrote {} instances to {}", manifest.len(), dir.display());
    if manifest.is_empty() {
        return Err(BenchError::Runtime("no instance could be generated".into()));
    }
    Ok(())
}

fn cmd_solve(cnf: &Path, opts: &Overrides) -> Result<(), BenchError> {
    let cfg = opts.resolve()?;
    cfg.validate()?;
    let formula = read_cnf(cnf)?;
    let id = cnf.file_stem().map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().into_owned());
    let instances = [Instance { id, formula }];
    let res = run_campaign(&instances, &cfg)?;
    report_failures(&res.failures);
    println!("solver,trials,solved,p,mean_flips_solved");
    for run in &res.runs {
        let solved: Vec<u64> = run.trials.iter().filter(|t| t.solved).map(|t| t.flips_used).collect();
        let mean = if solved.is_empty() {
            "NA".to_string()
        } else {
            format!("{}", solved.iter().sum::<u64>() as f64 / solved.len() as f64)
        };
        println!("{},{},{},{},{}", run.solver, run.trials.len(), solved.len(), run.p(), mean);
    }
    if opts.out_dir.is_some() {
        let dir = &cfg.out_dir;
        std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
        write_file(&dir.join("config.json"), &cfg.to_json())?;
        let rows: Vec<_> = res.runs.iter().flat_map(docsat_bench::experiment::trial_rows).collect();
        results::write_results(&dir.join("trials.csv"), &results::TRIALS_HEADER, &rows)?;
    }
    if res.runs.is_empty() {
        return Err(BenchError::Runtime("every solver failed".into()));
    }
    Ok(())
}

fn cmd_bench(manifest: Option<&Path>, opts: &Overrides) -> Result<(), BenchError> {
    let mut cfg = opts.resolve()?;
    if let Some(m) = manifest {
        cfg.manifest = Some(m.to_path_buf());
    }
    let report = run_experiment(&cfg)?;
    report_failures(&report.campaign.failures);
    let mut out = std::io::stdout().lock();
    results::write_csv(&mut out, &results::SUMMARY_HEADER, &report.summary)?;
    Ok(())
}

fn print_solution(x: &[bool]) {
    let lits: Vec<String> = x.iter().enumerate().map(|(i, &v)| if v { format!("{}", i + 1) } else { format!("-{}", i + 1) }).collect();
    println!("v {} 0", lits.join(" "));
}

fn cmd_oracle(cnf: &Path, node_budget: u64, force_dpll: bool) -> Result<(), BenchError> {
    let f = read_cnf(cnf)?;
    if !force_dpll && f.n_vars() <= ENUMERATION_LIMIT {
        let r = enumerate(&f, ENUMERATION_LIMIT)?;
        println!("c solutions {}", r.n_solutions());
        println!("c min_energy {}", r.min_energy);
        if let Some(x) = r.solutions.first() {
            println!("s SATISFIABLE");
            print_solution(x);
        } else {
            println!("s UNSATISFIABLE");
        }
        return Ok(());
    }
    match dpll_sat(&f, node_budget) {
        Ok(DpllResult::Sat(x)) => {
            println!("s SATISFIABLE");
            print_solution(&x);
        }
        Ok(DpllResult::Unsat) => println!("s UNSATISFIABLE"),
        Err(docsat_core::Error::BudgetExceeded(n)) => println!("c node budget {n} exceeded\ns UNKNOWN"),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn cmd_fit(summary: &Path) -> Result<(), BenchError> {
    let rows: Vec<SummaryRow> = results::read_results(summary)?;
    let mut solvers: Vec<&str> = Vec::new();
    for r in &rows {
        if !solvers.contains(&r.solver.as_str()) {
            solvers.push(&r.solver);
        }
    }
    println!("solver,column,fit_b,prefactor,residual,n_points,n_dropped");
    let mut fitted = 0;
    for s in solvers {
        let mine: Vec<&SummaryRow> = rows.iter().filter(|r| r.solver == s).collect();
        for (column, get) in [("p_avg", (|r: &SummaryRow| r.p_avg) as fn(&SummaryRow) -> f64), ("p_avg_quintile", |r| r.p_avg_quintile)] {
            let pts: Vec<(f64, f64)> = mine.iter().map(|r| (r.n_vars as f64, get(r))).collect();
            let dropped = pts.iter().filter(|p| p.1.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)).count();
            match fit_scaling_positive(&pts) {
                Ok(fit) => {
                    fitted += 1;
                    println!("{s},{column},{},{},{},{},{dropped}", fit.fit_b, fit.prefactor, fit.residual, fit.n_points);
                }
                Err(e) => eprintln!("warning: {s} {column}: {e}"),
            }
        }
    }
    if dropped_note_needed(&rows) {
        eprintln!("note: points with zero mean success probability are excluded from the fit");
    }
    if fitted == 0 {
        return Err(BenchError::Runtime("nothing could be fitted".into()));
    }
    Ok(())
}

fn dropped_note_needed(rows: &[SummaryRow]) -> bool {
    rows.iter().any(|r| r.p_avg.min(r.p_avg_quintile).partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater))
}

fn cmd_rates(path: &Path, instance: Option<&str>) -> Result<(), BenchError> {
    let rows: Vec<RateRow> = results::read_results(path)?;
    let mut by_solver: BTreeMap<usize, (String, RateTally)> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for r in rows.iter().filter(|r| instance.is_none_or(|i| i == r.instance_id)) {
        let k = match order.iter().position(|s| *s == r.solver) {
            Some(k) => k,
            None => {
                order.push(r.solver.clone());
                order.len() - 1
            }
        };
        let entry = by_solver.entry(k).or_insert_with(|| (r.solver.clone(), RateTally::default()));
        entry.1.merge(&RateTally {
            oversat_to_crit: r.oversat_to_crit,
            unsat_to_crit: r.unsat_to_crit,
            crit_destroyed: r.crit_destroyed,
            nonrandom_flips: r.nonrandom_flips,
            random_flips: r.random_flips,
        });
    }
    let tallies: Vec<(String, RateTally)> = by_solver.into_values().collect();
    if tallies.len() < 2 {
        return Err(BenchError::Runtime("rates for at least two solvers are needed".into()));
    }
    let report = rate_report(&tallies)?;
    println!("solver,gamma_c,gamma_combined");
    for r in &report.rates {
        println!("{},{},{}", r.solver, r.gamma_c, r.gamma_combined);
    }
    println!();
    println!("numerator,denominator,gamma_c_ratio,combined_ratio");
    for c in &report.ratios {
        println!("{},{},{},{}", c.numerator, c.denominator, c.gamma_c_ratio, c.combined_ratio);
    }
    Ok(())
}

/// Runs a solver that follows the competition output conventions (`s` and `v`
/// lines, exit code 10 for SAT and 20 for UNSAT). A claimed model is checked.
fn cmd_external(binary: &Path, cnf: &Path, args: &[String]) -> Result<(), BenchError> {
    let f = read_cnf(cnf)?;
    let out = Command::new(binary).arg(cnf).args(args).output().map_err(|e| BenchError::io(binary, e))?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut status = match out.status.code() {
        Some(10) => Some(true),
        Some(20) => Some(false),
        _ => None,
    };
    let mut model = vec![false; f.n_vars()];
    let mut has_model = false;
    for line in stdout.lines() {
        match line.trim().split_once(' ') {
            Some(("s", "SATISFIABLE")) => status = Some(true),
            Some(("s", "UNSATISFIABLE")) => status = Some(false),
            Some(("v", lits)) => {
                for lit in lits.split_whitespace().filter_map(|t| t.parse::<i64>().ok()) {
                    let v = lit.unsigned_abs() as usize;
                    if (1..=f.n_vars()).contains(&v) {
                        model[v - 1] = lit > 0;
                        has_model = true;
                    }
                }
            }
            _ => {}
        }
    }
    match status {
        Some(true) if has_model && !f.is_satisfied_by(&model) => {
            Err(BenchError::Runtime("external solver returned an invalid model".into()))
        }
        Some(true) => {
            println!("s SATISFIABLE{}", if has_model { " (model verified)" } else { "" });
            Ok(())
        }
        Some(false) => {
            println!("s UNSATISFIABLE");
            Ok(())
        }
        None => {
            println!("s UNKNOWN");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), BenchError> {
    match &cli.command {
        Cmd::Generate(a) => cmd_generate(a),
        Cmd::Solve { cnf, opts } => cmd_solve(cnf, opts),
        Cmd::Bench { manifest, opts } => cmd_bench(manifest.as_deref(), opts),
        Cmd::Oracle { cnf, node_budget, dpll } => cmd_oracle(cnf, *node_budget, *dpll),
        Cmd::Fit { summary } => cmd_fit(summary),
        Cmd::Rates { rates, instance } => cmd_rates(rates, instance.as_deref()),
        Cmd::External { binary, cnf, args } => cmd_external(binary, cnf, args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
