//! Focused stochastic local search for random 3-SAT.
//!
//! The crate is `no_std` (with `alloc`) and contains everything that is pure
//! computation: the CNF representation with its incrementally maintained
//! search state, the variable-selection heuristics (WalkSAT, DOCSAT, GWSAT,
//! Tabu-WalkSAT and Novelty), the trial loop, the random instance generator,
//! a brute-force/DPLL oracle for small instances and mergeable search
//! statistics. File formats, the experiment runner and the command line live
//! in the `docsat-bench` crate.
//!
//! DOCSAT scores each variable of the selected unsatisfied clause by
//! `breakcount + r_doc * tlc_delta`, where `tlc_delta` is the change in the
//! total number of true literals caused by the flip. A positive `r_doc` pulls
//! the search towards assignments with fewer oversatisfied clauses.

#![no_std]

extern crate alloc;

pub mod cnf;
pub mod engine;
mod error;
pub mod generator;
pub mod heuristic;
pub mod oracle;
pub mod rng;
pub mod state;
pub mod stats;

pub use cnf::{build_formula, Clause, Formula, Literal, Var};
pub use engine::{run_restarts, run_trial, Observer, RestartOutcome, TrialConfig, TrialResult};
pub use error::Error;
pub use generator::{generate, generate_suite, GenConfig};
pub use heuristic::{HeuristicConfig, HeuristicKind, Pick, Selector, TlcSign};
pub use oracle::{dpll_sat, enumerate, DpllResult, OracleReport};
pub use rng::{mix, SlsRng};
pub use state::{tlc_extremes, FlipTransitions, SearchState};
pub use stats::{classify_instances, Hardness, StatsAccumulator, StatsToggles};
