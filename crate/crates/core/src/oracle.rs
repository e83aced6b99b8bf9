//! Ground truth for small instances.
//!
//! [`enumerate`] evaluates every assignment directly from the clause list,
//! sharing no code with [`SearchState`](crate::SearchState). [`dpll_sat`] is a
//! plain DPLL search with unit propagation and no learning, used to certify
//! satisfiability of generated instances.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::{Error, Formula, Literal, Var};

/// Default enumeration limit.
pub const ENUMERATION_LIMIT: usize = 25;
/// Solutions are listed only up to this many variables.
pub const SOLUTION_LIST_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub satisfiable: bool,
    /// All satisfying assignments in lexicographic order of the bit pattern
    /// (`x_1` least significant); empty when `N > 20`.
    pub solutions: Vec<Vec<bool>>,
    pub min_energy: usize,
    /// For each energy, the number of assignments with each true literal count.
    pub tlc_by_energy: BTreeMap<usize, BTreeMap<u64, u64>>,
}

impl OracleReport {
    pub fn n_solutions(&self) -> u64 {
        self.tlc_by_energy.get(&0).map_or(0, |h| h.values().sum())
    }
}

/// Evaluates all `2^N` assignments.
pub fn enumerate(formula: &Formula, n_limit: usize) -> Result<OracleReport, Error> {
    let n = formula.n_vars();
    let limit = n_limit.min(63);
    if n > limit {
        return Err(Error::LimitExceeded { n_vars: n, limit });
    }
    // Per clause: the three (bit, negated) pairs.
    let clauses: Vec<[(u64, bool); 3]> = formula
        .clauses()
        .iter()
        .map(|c| c.map(|l| (1u64 << l.var().index(), l.is_negated())))
        .collect();

    let mut report = OracleReport {
        satisfiable: false,
        solutions: Vec::new(),
        min_energy: usize::MAX,
        tlc_by_energy: BTreeMap::new(),
    };
    for mask in 0..(1u64 << n) {
        let mut energy = 0usize;
        let mut tlc = 0u64;
        for c in &clauses {
            let t = c.iter().filter(|&&(bit, neg)| (mask & bit != 0) != neg).count();
            tlc += t as u64;
            if t == 0 {
                energy += 1;
            }
        }
        *report.tlc_by_energy.entry(energy).or_default().entry(tlc).or_insert(0) += 1;
        report.min_energy = report.min_energy.min(energy);
        if energy == 0 && n <= SOLUTION_LIST_LIMIT {
            report.solutions.push((0..n).map(|k| mask >> k & 1 == 1).collect());
        }
    }
    report.satisfiable = report.min_energy == 0;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DpllResult {
    /// Satisfiable, with a verified witness.
    Sat(Vec<bool>),
    Unsat,
}

struct Dpll<'f> {
    formula: &'f Formula,
    /// -1 unassigned, otherwise 0 or 1.
    value: Vec<i8>,
    n_false: Vec<u8>,
    n_sat: Vec<u8>,
    trail: Vec<Literal>,
    order: Vec<Var>,
    nodes: u64,
    budget: u64,
}

impl<'f> Dpll<'f> {
    fn new(formula: &'f Formula, budget: u64) -> Self {
        let n = formula.n_vars();
        let mut order: Vec<Var> = (0..n as u32).map(Var).collect();
        order.sort_by_key(|&v| {
            core::cmp::Reverse(formula.pos_count(v) + formula.neg_count(v))
        });
        Dpll {
            formula,
            value: alloc::vec![-1; n],
            n_false: alloc::vec![0; formula.n_clauses()],
            n_sat: alloc::vec![0; formula.n_clauses()],
            trail: Vec::new(),
            order,
            nodes: 0,
            budget,
        }
    }

    #[inline]
    fn lit_value(&self, lit: Literal) -> i8 {
        match self.value[lit.var().index()] {
            -1 => -1,
            v => i8::from((v == 1) != lit.is_negated()),
        }
    }

    /// Makes `lit` true and propagates units. Returns false on conflict; the
    /// trail then holds every assignment made so far for undoing.
    fn propagate(&mut self, lit: Literal) -> bool {
        let mut queue = alloc::vec![lit];
        let mut ok = true;
        while let Some(l) = queue.pop() {
            match self.lit_value(l) {
                1 => continue,
                0 => return false,
                _ => {}
            }
            self.value[l.var().index()] = i8::from(!l.is_negated());
            self.trail.push(l);
            for &c in self.formula.occurrences(l) {
                self.n_sat[c as usize] += 1;
            }
            for &c in self.formula.occurrences(l.negate()) {
                let c = c as usize;
                self.n_false[c] += 1;
                if self.n_sat[c] > 0 {
                    continue;
                }
                match self.n_false[c] {
                    3 => ok = false,
                    2 => {
                        let unit = self.formula.clause(c).iter().copied().find(|&u| self.lit_value(u) == -1);
                        if let Some(u) = unit {
                            queue.push(u);
                        }
                    }
                    _ => {}
                }
            }
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let l = self.trail.pop().unwrap();
            for &c in self.formula.occurrences(l) {
                self.n_sat[c as usize] -= 1;
            }
            for &c in self.formula.occurrences(l.negate()) {
                self.n_false[c as usize] -= 1;
            }
            self.value[l.var().index()] = -1;
        }
    }

    fn search(&mut self) -> Result<bool, Error> {
        let Some(&var) = self.order.iter().find(|v| self.value[v.index()] == -1) else {
            return Ok(true);
        };
        let first = self.formula.pos_count(var) >= self.formula.neg_count(var);
        for value in [first, !first] {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            let mark = self.trail.len();
            if self.propagate(var.literal(value)) && self.search()? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

/// Decides satisfiability with at most `node_budget` branching decisions.
///
/// Branches on the unassigned variable with the most occurrences (lowest index
/// on ties), trying its majority polarity first. A budget overrun is reported
/// as [`Error::BudgetExceeded`], never as unsatisfiable.
pub fn dpll_sat(formula: &Formula, node_budget: u64) -> Result<DpllResult, Error> {
    let mut d = Dpll::new(formula, node_budget);
    if d.search()? {
        let witness: Vec<bool> = d.value.iter().map(|&v| v == 1).collect();
        assert!(formula.is_satisfied_by(&witness), "DPLL witness does not verify");
        Ok(DpllResult::Sat(witness))
    } else {
        Ok(DpllResult::Unsat)
    }
}
