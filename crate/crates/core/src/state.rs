//! Assignment plus incrementally maintained clause bookkeeping.

use alloc::vec::Vec;

use crate::{Error, Formula, Var};

const ABSENT: u32 = u32::MAX;

/// Clause-category changes caused by one flip.
///
/// A clause is unsatisfied with no true literal, critical with exactly one and
/// oversatisfied with more than one. Critical clauses are created from
/// oversatisfied clauses (2 -> 1) or unsatisfied clauses (0 -> 1) and
/// destroyed when they gain (1 -> 2) or lose (1 -> 0) their true literal.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlipTransitions {
    pub oversat_to_crit: u32,
    pub unsat_to_crit: u32,
    pub crit_destroyed: u32,
}

impl FlipTransitions {
    pub fn crit_created(&self) -> u32 {
        self.oversat_to_crit + self.unsat_to_crit
    }

    /// Net change of the critical clause count.
    pub fn crit_delta(&self) -> i64 {
        i64::from(self.crit_created()) - i64::from(self.crit_destroyed)
    }
}

/// A mutable assignment over a [`Formula`].
///
/// Per-clause true-literal counts yield the energy (clauses at 0), the number
/// of critical clauses (at 1) and the true literal count (the sum). The
/// unsatisfied clauses are kept in a dense array with a position index, giving
/// O(1) insertion, removal and uniform sampling. A flip costs time
/// proportional to the occurrence degree of the flipped variable.
#[derive(Debug, Clone)]
pub struct SearchState<'f> {
    formula: &'f Formula,
    assignment: Vec<bool>,
    num_true: Vec<u8>,
    unsat: Vec<u32>,
    unsat_pos: Vec<u32>,
    tlc: u64,
    critical: usize,
}

impl PartialEq for SearchState<'_> {
    fn eq(&self, other: &Self) -> bool {
        core::ptr::eq(self.formula, other.formula)
            && self.assignment == other.assignment
            && self.num_true == other.num_true
            && self.unsat_sorted() == other.unsat_sorted()
            && self.tlc == other.tlc
            && self.critical == other.critical
    }
}

impl<'f> SearchState<'f> {
    /// Full O(3M) initialisation from an assignment.
    pub fn new(formula: &'f Formula, assignment: Vec<bool>) -> Result<Self, Error> {
        formula.check_assignment(&assignment)?;
        let m = formula.n_clauses();
        let mut state = SearchState {
            formula,
            assignment,
            num_true: Vec::with_capacity(m),
            unsat: Vec::new(),
            unsat_pos: alloc::vec![ABSENT; m],
            tlc: 0,
            critical: 0,
        };
        for (ci, clause) in formula.clauses().iter().enumerate() {
            let k = clause.iter().filter(|l| l.eval(&state.assignment)).count() as u8;
            state.num_true.push(k);
            state.tlc += u64::from(k);
            match k {
                0 => state.insert_unsat(ci),
                1 => state.critical += 1,
                _ => {}
            }
        }
        Ok(state)
    }

    #[inline]
    pub fn formula(&self) -> &'f Formula {
        self.formula
    }

    #[inline]
    pub fn assignment(&self) -> &[bool] {
        &self.assignment
    }

    pub fn into_assignment(self) -> Vec<bool> {
        self.assignment
    }

    #[inline]
    pub fn value(&self, var: Var) -> bool {
        self.assignment[var.index()]
    }

    /// Number of unsatisfied clauses.
    #[inline]
    pub fn energy(&self) -> usize {
        self.unsat.len()
    }

    /// Total number of true literals over all clauses.
    #[inline]
    pub fn tlc(&self) -> u64 {
        self.tlc
    }

    /// Number of clauses with exactly one true literal.
    #[inline]
    pub fn critical_count(&self) -> usize {
        self.critical
    }

    #[inline]
    pub fn num_true(&self, clause: usize) -> u8 {
        self.num_true[clause]
    }

    pub fn num_true_all(&self) -> &[u8] {
        &self.num_true
    }

    /// Unsatisfied clause indices in internal (insertion/swap) order.
    #[inline]
    pub fn unsat_clauses(&self) -> &[u32] {
        &self.unsat
    }

    pub fn unsat_sorted(&self) -> Vec<u32> {
        let mut v = self.unsat.clone();
        v.sort_unstable();
        v
    }

    #[inline]
    pub fn is_unsat(&self, clause: usize) -> bool {
        self.num_true[clause] == 0
    }

    #[inline]
    fn insert_unsat(&mut self, clause: usize) {
        self.unsat_pos[clause] = self.unsat.len() as u32;
        self.unsat.push(clause as u32);
    }

    #[inline]
    fn remove_unsat(&mut self, clause: usize) {
        let pos = self.unsat_pos[clause] as usize;
        let last = *self.unsat.last().expect("unsat set is empty");
        self.unsat.swap_remove(pos);
        if last as usize != clause {
            self.unsat_pos[last as usize] = pos as u32;
        }
        self.unsat_pos[clause] = ABSENT;
    }

    /// Toggles `var` and returns the clause-category transitions it caused.
    pub fn flip(&mut self, var: Var) -> Result<FlipTransitions, Error> {
        self.formula.check_var(var)?;
        Ok(self.flip_unchecked(var))
    }

    pub(crate) fn flip_unchecked(&mut self, var: Var) -> FlipTransitions {
        let f = self.formula;
        let was = self.assignment[var.index()];
        let falsified = var.literal(was);
        let made_true = falsified.negate();
        let mut tr = FlipTransitions::default();

        for &c in f.occurrences(falsified) {
            let c = c as usize;
            let k = self.num_true[c];
            self.num_true[c] = k - 1;
            match k {
                1 => {
                    self.critical -= 1;
                    tr.crit_destroyed += 1;
                    self.insert_unsat(c);
                }
                2 => {
                    self.critical += 1;
                    tr.oversat_to_crit += 1;
                }
                _ => {}
            }
        }
        for &c in f.occurrences(made_true) {
            let c = c as usize;
            let k = self.num_true[c];
            self.num_true[c] = k + 1;
            match k {
                0 => {
                    self.remove_unsat(c);
                    self.critical += 1;
                    tr.unsat_to_crit += 1;
                }
                1 => {
                    self.critical -= 1;
                    tr.crit_destroyed += 1;
                }
                _ => {}
            }
        }
        self.tlc = self.tlc + f.occurrences(made_true).len() as u64 - f.occurrences(falsified).len() as u64;
        self.assignment[var.index()] = !was;
        tr
    }

    /// Clauses that become unsatisfied when `var` is flipped: critical
    /// clauses whose single true literal belongs to `var`.
    pub fn breakcount(&self, var: Var) -> Result<u32, Error> {
        self.formula.check_var(var)?;
        Ok(self.breakcount_unchecked(var))
    }

    #[inline]
    pub(crate) fn breakcount_unchecked(&self, var: Var) -> u32 {
        let true_lit = var.literal(self.assignment[var.index()]);
        self.formula
            .occurrences(true_lit)
            .iter()
            .filter(|&&c| self.num_true[c as usize] == 1)
            .count() as u32
    }

    /// Unsatisfied clauses that become satisfied when `var` is flipped.
    pub fn makecount(&self, var: Var) -> Result<u32, Error> {
        self.formula.check_var(var)?;
        Ok(self.makecount_unchecked(var))
    }

    #[inline]
    pub(crate) fn makecount_unchecked(&self, var: Var) -> u32 {
        let false_lit = var.literal(!self.assignment[var.index()]);
        self.formula
            .occurrences(false_lit)
            .iter()
            .filter(|&&c| self.num_true[c as usize] == 0)
            .count() as u32
    }

    /// Change of the true literal count caused by flipping `var`:
    /// `TLC(after) - TLC(before)`, i.e. `(p - n)_k` when `x_k = 0` and
    /// `(n - p)_k` when `x_k = 1`.
    pub fn tlc_delta(&self, var: Var) -> Result<i64, Error> {
        self.formula.check_var(var)?;
        Ok(self.tlc_delta_unchecked(var))
    }

    #[inline]
    pub(crate) fn tlc_delta_unchecked(&self, var: Var) -> i64 {
        let value = self.assignment[var.index()];
        let gained = self.formula.occurrences(var.literal(!value)).len() as i64;
        let lost = self.formula.occurrences(var.literal(value)).len() as i64;
        gained - lost
    }
}

/// Assignments minimising and maximising the true literal count.
///
/// The count is a sum of independent per-variable terms, so the maximum sets
/// `x_k = 1` exactly when `p_k > n_k` and the minimum sets `x_k = 1` exactly
/// when `p_k < n_k`. Variables with `p_k = n_k` are false in both.
pub fn tlc_extremes(formula: &Formula) -> (Vec<bool>, Vec<bool>) {
    let n = formula.n_vars();
    let mut min = Vec::with_capacity(n);
    let mut max = Vec::with_capacity(n);
    for k in 0..n as u32 {
        let p = formula.pos_count(Var(k));
        let q = formula.neg_count(Var(k));
        max.push(p > q);
        min.push(p < q);
    }
    (min, max)
}
