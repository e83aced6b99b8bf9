//! Seeded random 3-SAT instances at fixed clause density.
//!
//! The default ensemble is uniform random 3-SAT: `M = round(alpha * N)`
//! clauses, each over three distinct variables drawn uniformly without
//! replacement, each sign a fair coin. Satisfiability is not guaranteed.
//! Two opt-in modes produce satisfiable instances at small scale: `planted`
//! resamples the signs of a clause until a hidden assignment satisfies it, and
//! `filter_satisfiable` regenerates until the DPLL oracle certifies the
//! instance.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::engine::random_assignment;
use crate::oracle::{dpll_sat, DpllResult};
use crate::rng::Draw;
use crate::{mix, Clause, Error, Formula, Literal, SlsRng, Var};

/// Largest instance accepted by `filter_satisfiable`.
pub const ORACLE_LIMIT: usize = 400;
/// Redraws allowed per clause (duplicates, planted signs) or per instance
/// (satisfiability filter) before giving up.
pub const RESAMPLE_BUDGET: usize = 10_000;
/// DPLL node budget per candidate instance in filter mode.
pub const FILTER_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenConfig {
    pub n_vars: usize,
    /// Clauses per variable.
    pub alpha: f64,
    pub seed: u64,
    pub forbid_duplicate_clauses: bool,
    pub planted: bool,
    pub filter_satisfiable: bool,
}

impl GenConfig {
    pub fn uniform(n_vars: usize, alpha: f64, seed: u64) -> Self {
        GenConfig {
            n_vars,
            alpha,
            seed,
            forbid_duplicate_clauses: false,
            planted: false,
            filter_satisfiable: false,
        }
    }

    pub fn n_clauses(&self) -> usize {
        libm::round(self.alpha * self.n_vars as f64) as usize
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig("alpha must be positive and finite"));
        }
        if self.n_clauses() > 0 && self.n_vars < 3 {
            return Err(Error::InvalidConfig("3-SAT clauses need at least 3 variables"));
        }
        if self.filter_satisfiable && self.n_vars > ORACLE_LIMIT {
            return Err(Error::OracleLimitExceeded { n_vars: self.n_vars, limit: ORACLE_LIMIT });
        }
        Ok(())
    }
}

fn draw_vars(rng: &mut SlsRng, n: usize) -> [Var; 3] {
    let a = rng.below(n);
    let mut b = rng.below(n);
    while b == a {
        b = rng.below(n);
    }
    let mut c = rng.below(n);
    while c == a || c == b {
        c = rng.below(n);
    }
    [a, b, c].map(|i| Var(i as u32))
}

fn draw_clause(rng: &mut SlsRng, n: usize, planted: Option<&[bool]>) -> Result<Clause, Error> {
    let vars = draw_vars(rng, n);
    for _ in 0..RESAMPLE_BUDGET {
        let clause = vars.map(|v| Literal::new(v, rng.coin()));
        match planted {
            Some(x) if !clause.iter().any(|l| l.eval(x)) => continue,
            _ => return Ok(clause),
        }
    }
    Err(Error::ResampleBudgetExhausted)
}

fn generate_once(cfg: &GenConfig, seed: u64) -> Result<Formula, Error> {
    let mut rng = SlsRng::seed_from_u64(seed);
    let n = cfg.n_vars;
    let planted = cfg.planted.then(|| random_assignment(n, &mut rng));
    let m = cfg.n_clauses();
    let mut clauses = Vec::with_capacity(m);
    let mut seen = BTreeSet::new();
    for _ in 0..m {
        let mut attempts = 0;
        loop {
            let clause = draw_clause(&mut rng, n, planted.as_deref())?;
            if !cfg.forbid_duplicate_clauses {
                clauses.push(clause);
                break;
            }
            let mut key = clause;
            key.sort_unstable();
            if seen.insert(key) {
                clauses.push(clause);
                break;
            }
            attempts += 1;
            if attempts >= RESAMPLE_BUDGET {
                return Err(Error::ResampleBudgetExhausted);
            }
        }
    }
    Formula::new(n, clauses)
}

/// Generates one instance; a deterministic function of `cfg`.
///
/// In filter mode, candidate `j` is generated from `mix(seed, j)` until one is
/// certified satisfiable; candidates on which the oracle runs out of budget are
/// skipped, never accepted.
pub fn generate(cfg: &GenConfig) -> Result<Formula, Error> {
    cfg.validate()?;
    if !cfg.filter_satisfiable {
        return generate_once(cfg, cfg.seed);
    }
    for attempt in 0..RESAMPLE_BUDGET as u64 {
        let f = generate_once(cfg, mix(cfg.seed, attempt))?;
        if let Ok(DpllResult::Sat(_)) = dpll_sat(&f, FILTER_NODE_BUDGET) {
            return Ok(f);
        }
    }
    Err(Error::ResampleBudgetExhausted)
}

/// Seed of instance `index` at size `n_vars`: `mix(mix(master, n_vars), index)`.
pub fn instance_seed(master_seed: u64, n_vars: usize, index: usize) -> u64 {
    mix(mix(master_seed, n_vars as u64), index as u64)
}

/// Stable identifier `w{N}v{index}`.
pub fn instance_id(n_vars: usize, index: usize) -> String {
    format!("w{n_vars}v{index}")
}

/// `n_instances` uniform instances for every size in `n_list`.
pub fn generate_suite(
    n_list: &[usize],
    alpha: f64,
    n_instances: usize,
    master_seed: u64,
) -> Result<Vec<(String, Formula)>, Error> {
    generate_suite_with(n_list, &GenConfig::uniform(0, alpha, 0), n_instances, master_seed)
}

/// As [`generate_suite`], with the mode flags of `template`. Its `n_vars` and
/// `seed` are ignored.
pub fn generate_suite_with(
    n_list: &[usize],
    template: &GenConfig,
    n_instances: usize,
    master_seed: u64,
) -> Result<Vec<(String, Formula)>, Error> {
    let mut out = Vec::with_capacity(n_list.len() * n_instances);
    for &n in n_list {
        for i in 0..n_instances {
            let cfg = GenConfig { n_vars: n, seed: instance_seed(master_seed, n, i), ..*template };
            out.push((instance_id(n, i), generate(&cfg)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SearchState;

    #[test]
    fn clause_count_rounds() {
        let f = generate(&GenConfig::uniform(100, 4.27, 1)).unwrap();
        assert_eq!(f.n_clauses(), 427);
        assert_eq!(GenConfig::uniform(200, 4.27, 0).n_clauses(), 854);
        let f = generate(&GenConfig::uniform(3, 1.0 / 3.0, 1)).unwrap();
        assert_eq!(f.n_clauses(), 1);
    }

    #[test]
    fn deterministic() {
        let cfg = GenConfig::uniform(60, 4.27, 42);
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        assert_ne!(generate(&cfg).unwrap(), generate(&GenConfig { seed: 43, ..cfg }).unwrap());
    }

    #[test]
    fn invalid_configs() {
        assert!(generate(&GenConfig::uniform(10, 0.0, 0)).is_err());
        assert!(generate(&GenConfig::uniform(10, f64::NAN, 0)).is_err());
        assert!(generate(&GenConfig::uniform(2, 4.0, 0)).is_err());
        let big = GenConfig { filter_satisfiable: true, ..GenConfig::uniform(1000, 4.27, 0) };
        assert_eq!(generate(&big), Err(Error::OracleLimitExceeded { n_vars: 1000, limit: ORACLE_LIMIT }));
    }

    #[test]
    fn polarity_is_balanced() {
        let f = generate(&GenConfig::uniform(10_000, 3.4, 3)).unwrap();
        let lits = 3 * f.n_clauses();
        let neg = f.clauses().iter().flatten().filter(|l| l.is_negated()).count();
        let sigma = libm::sqrt(lits as f64 * 0.25);
        assert!(((neg as f64) - lits as f64 / 2.0).abs() < 5.0 * sigma);
    }

    #[test]
    fn planted_assignment_satisfies() {
        let cfg = GenConfig { planted: true, ..GenConfig::uniform(200, 4.27, 8) };
        let f = generate(&cfg).unwrap();
        let mut rng = SlsRng::seed_from_u64(8);
        let x = random_assignment(200, &mut rng);
        assert_eq!(SearchState::new(&f, x).unwrap().energy(), 0);
    }

    #[test]
    fn no_duplicates_when_forbidden() {
        let cfg = GenConfig { forbid_duplicate_clauses: true, ..GenConfig::uniform(5, 4.0, 1) };
        let f = generate(&cfg).unwrap();
        let mut keys: Vec<_> = f.clauses().iter().map(|c| {
            let mut k = *c;
            k.sort_unstable();
            k
        }).collect();
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), 20);

        // Only 80 distinct clauses exist over 4 variables.
        let cfg = GenConfig { forbid_duplicate_clauses: true, ..GenConfig::uniform(4, 25.0, 1) };
        assert_eq!(generate(&cfg), Err(Error::ResampleBudgetExhausted));
    }

    #[test]
    fn filtered_instances_are_satisfiable() {
        let cfg = GenConfig { filter_satisfiable: true, ..GenConfig::uniform(40, 5.0, 2) };
        let f = generate(&cfg).unwrap();
        assert!(matches!(dpll_sat(&f, u64::MAX), Ok(DpllResult::Sat(_))));
    }

    #[test]
    fn suite_ids_and_sizes() {
        let suite = generate_suite(&[20, 30], 4.27, 3, 7).unwrap();
        let ids: Vec<&str> = suite.iter().map(|(id, _)| id.as_str()).collect();
        assert_eq!(ids, ["w20v0", "w20v1", "w20v2", "w30v0", "w30v1", "w30v2"]);
        assert!(generate_suite(&[20], 4.27, 0, 7).unwrap().is_empty());
        let swapped = generate_suite(&[30, 20], 4.27, 3, 7).unwrap();
        assert_eq!(suite[1], swapped[4]);
    }
}
