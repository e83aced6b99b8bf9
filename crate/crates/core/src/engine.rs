//! The focused local-search loop and independent restarts.

use alloc::vec::Vec;
use core::ops::Range;

use rand_core::RngCore;

use crate::rng::Draw;
use crate::{mix, Error, FlipTransitions, Formula, HeuristicConfig, SearchState, Selector, SlsRng, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialConfig {
    /// Flip budget of one trial.
    pub max_flips: u64,
    pub n_trials: usize,
    /// End a trial at its first solution. When false the trial keeps walking
    /// (a random flip leaves each solution) until the budget is spent, for
    /// instrumentation; the reported result is still the first solution.
    pub stop_on_solution: bool,
}

impl TrialConfig {
    /// `flips_per_var * n_vars` flips per trial.
    pub fn scaled(n_vars: usize, flips_per_var: u64, n_trials: usize) -> Self {
        TrialConfig { max_flips: flips_per_var * n_vars as u64, n_trials, stop_on_solution: true }
    }
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig { max_flips: 0, n_trials: 1, stop_on_solution: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialResult {
    pub solved: bool,
    /// Flips performed before the first solution, or the whole budget.
    pub flips_used: u64,
    pub final_energy: usize,
    pub final_tlc: u64,
    /// A verified satisfying assignment when `solved`.
    pub solution: Option<Vec<bool>>,
}

/// Callbacks invoked by [`run_trial`]. Observers see the trajectory but cannot
/// influence it.
pub trait Observer {
    /// Called for the initial state and after every flip.
    fn on_state(&mut self, _energy: usize, _tlc: u64, _critical: usize) {}

    /// Called after every flip with the flipped variable, the clause-category
    /// transitions it caused and whether it came from a random-walk step.
    fn on_flip(&mut self, _var: Var, _transitions: &FlipTransitions, _random: bool) {}
}

impl Observer for () {}

impl<O: Observer + ?Sized> Observer for &mut O {
    fn on_state(&mut self, energy: usize, tlc: u64, critical: usize) {
        (**self).on_state(energy, tlc, critical)
    }

    fn on_flip(&mut self, var: Var, transitions: &FlipTransitions, random: bool) {
        (**self).on_flip(var, transitions, random)
    }
}

/// Uniformly random assignment: bit `i` is bit `i % 64` of the `i / 64`-th
/// generator output.
pub fn random_assignment<R: RngCore + ?Sized>(n_vars: usize, rng: &mut R) -> Vec<bool> {
    let mut x = Vec::with_capacity(n_vars);
    let mut word = 0u64;
    for i in 0..n_vars {
        if i % 64 == 0 {
            word = rng.next_u64();
        }
        x.push((word >> (i % 64)) & 1 == 1);
    }
    x
}

/// One trial from a uniformly random assignment.
///
/// Each step samples an unsatisfied clause uniformly, lets the heuristic pick
/// one of its variables and flips it, until no clause is unsatisfied or the
/// flip budget is spent. Fails only on an invalid heuristic configuration.
pub fn run_trial<R: RngCore + ?Sized, O: Observer + ?Sized>(
    formula: &Formula,
    heuristic: &HeuristicConfig,
    trial: &TrialConfig,
    rng: &mut R,
    observer: &mut O,
) -> Result<TrialResult, Error> {
    let mut selector = Selector::new(*heuristic, formula.n_vars())?;
    let x = random_assignment(formula.n_vars(), rng);
    let mut s = SearchState::new(formula, x)?;
    observer.on_state(s.energy(), s.tlc(), s.critical_count());

    let mut first: Option<(u64, u64, Vec<bool>)> = None;
    let mut flips = 0u64;
    loop {
        if s.energy() == 0 && first.is_none() {
            first = Some((flips, s.tlc(), s.assignment().to_vec()));
            if trial.stop_on_solution || formula.n_vars() == 0 {
                break;
            }
        }
        if flips >= trial.max_flips {
            break;
        }
        let (var, random) = match s.energy() {
            0 => (Var(rng.below(formula.n_vars()) as u32), true),
            e => {
                let clause = s.unsat_clauses()[rng.below(e)] as usize;
                let pick = selector.pick(&s, clause, rng)?;
                debug_assert!(formula.clause(clause).iter().any(|l| l.var() == pick.var));
                (pick.var, pick.random)
            }
        };
        let tr = s.flip_unchecked(var);
        flips += 1;
        observer.on_flip(var, &tr, random);
        observer.on_state(s.energy(), s.tlc(), s.critical_count());
    }

    Ok(match first {
        Some((flips_used, tlc, solution)) => {
            assert!(formula.is_satisfied_by(&solution), "reported solution does not verify");
            TrialResult { solved: true, flips_used, final_energy: 0, final_tlc: tlc, solution: Some(solution) }
        }
        None => TrialResult {
            solved: false,
            flips_used: flips,
            final_energy: s.energy(),
            final_tlc: s.tlc(),
            solution: None,
        },
    })
}

/// Success fraction and per-trial results of independent restarts.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub p_hat: f64,
    pub trials: Vec<TrialResult>,
}

impl RestartOutcome {
    pub fn solved(&self) -> usize {
        self.trials.iter().filter(|t| t.solved).count()
    }
}

/// Runs trials `range` of a restart campaign. Trial `i` draws from
/// `SlsRng::seed_from_u64(mix(master_seed, i))`, so any partition of the trial
/// indices reproduces the same per-trial results.
pub fn run_trial_range<O: Observer + ?Sized>(
    formula: &Formula,
    heuristic: &HeuristicConfig,
    trial: &TrialConfig,
    master_seed: u64,
    range: Range<usize>,
    observer: &mut O,
) -> Result<Vec<TrialResult>, Error> {
    range
        .map(|i| {
            let mut rng = SlsRng::seed_from_u64(mix(master_seed, i as u64));
            run_trial(formula, heuristic, trial, &mut rng, observer)
        })
        .collect()
}

/// Runs `trial.n_trials` independent trials and reports the success fraction.
pub fn run_restarts<O: Observer + ?Sized>(
    formula: &Formula,
    heuristic: &HeuristicConfig,
    trial: &TrialConfig,
    master_seed: u64,
    observer: &mut O,
) -> Result<RestartOutcome, Error> {
    if trial.n_trials == 0 {
        return Err(Error::InvalidConfig("n_trials must be at least 1"));
    }
    let trials = run_trial_range(formula, heuristic, trial, master_seed, 0..trial.n_trials, observer)?;
    let solved = trials.iter().filter(|t| t.solved).count();
    Ok(RestartOutcome { p_hat: solved as f64 / trial.n_trials as f64, trials })
}
