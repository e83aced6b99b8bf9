//! Immutable 3-CNF formulas with per-literal occurrence lists.

use alloc::vec::Vec;
use core::fmt;

use crate::Error;

/// A variable, stored 0-based. DIMACS variable `k` is `Var(k - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The 1-based DIMACS number of this variable.
    #[inline]
    pub fn dimacs(self) -> i64 {
        i64::from(self.0) + 1
    }

    #[inline]
    pub fn positive(self) -> Literal {
        Literal(self.0 << 1)
    }

    #[inline]
    pub fn negative(self) -> Literal {
        Literal((self.0 << 1) | 1)
    }

    /// The literal of this variable that is true when the variable has `value`.
    #[inline]
    pub fn literal(self, value: bool) -> Literal {
        if value {
            self.positive()
        } else {
            self.negative()
        }
    }
}

/// A literal encoded as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(u32);

impl Literal {
    pub fn new(var: Var, negated: bool) -> Self {
        Literal((var.0 << 1) | u32::from(negated))
    }

    /// Converts a nonzero DIMACS integer. No range check against a formula.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 || lit.unsigned_abs() > u64::from(u32::MAX >> 1) {
            return None;
        }
        let var = Var((lit.unsigned_abs() - 1) as u32);
        Some(Literal::new(var, lit < 0))
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn negate(self) -> Self {
        Literal(self.0 ^ 1)
    }

    pub fn dimacs(self) -> i64 {
        let v = self.var().dimacs();
        if self.is_negated() {
            -v
        } else {
            v
        }
    }

    /// Whether the literal is true under `assignment`.
    #[inline]
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var().index()] != self.is_negated()
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dimacs())
    }
}

/// Three literals over three distinct variables.
pub type Clause = [Literal; 3];

/// An immutable 3-SAT instance.
///
/// Occurrences are stored in compressed rows indexed by literal code, so the
/// clauses containing `x_k` and those containing `!x_k` are two contiguous
/// slices. `p_k` and `n_k` are the lengths of these slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    n_vars: usize,
    clauses: Vec<Clause>,
    occ_offsets: Vec<u32>,
    occ: Vec<u32>,
}

impl Formula {
    /// Validates typed clauses and builds the occurrence index.
    pub fn new(n_vars: usize, clauses: Vec<Clause>) -> Result<Self, Error> {
        if n_vars > (u32::MAX >> 1) as usize || clauses.len() > u32::MAX as usize {
            return Err(Error::InvalidConfig("formula too large"));
        }
        for (ci, clause) in clauses.iter().enumerate() {
            for lit in clause {
                if lit.var().index() >= n_vars {
                    return Err(Error::OutOfRangeVariable { var: lit.var().dimacs(), n_vars });
                }
            }
            let [a, b, c] = clause.map(Literal::var);
            if a == b || a == c || b == c {
                return Err(Error::RepeatedVariableInClause { clause: ci });
            }
        }

        let mut counts = alloc::vec![0u32; 2 * n_vars + 1];
        for clause in &clauses {
            for lit in clause {
                counts[lit.code() + 1] += 1;
            }
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let occ_offsets = counts;
        let mut fill = occ_offsets.clone();
        let mut occ = alloc::vec![0u32; 3 * clauses.len()];
        for (ci, clause) in clauses.iter().enumerate() {
            for lit in clause {
                occ[fill[lit.code()] as usize] = ci as u32;
                fill[lit.code()] += 1;
            }
        }
        Ok(Formula { n_vars, clauses, occ_offsets, occ })
    }

    #[inline]
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    #[inline]
    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    #[inline]
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    #[inline]
    pub fn clause(&self, index: usize) -> &Clause {
        &self.clauses[index]
    }

    /// Indices of the clauses containing `lit`, in increasing order.
    #[inline]
    pub fn occurrences(&self, lit: Literal) -> &[u32] {
        let code = lit.code();
        &self.occ[self.occ_offsets[code] as usize..self.occ_offsets[code + 1] as usize]
    }

    /// Positive occurrence count `p_k`.
    #[inline]
    pub fn pos_count(&self, var: Var) -> usize {
        self.occurrences(var.positive()).len()
    }

    /// Negative occurrence count `n_k`.
    #[inline]
    pub fn neg_count(&self, var: Var) -> usize {
        self.occurrences(var.negative()).len()
    }

    pub fn pos_counts(&self) -> Vec<usize> {
        (0..self.n_vars as u32).map(|k| self.pos_count(Var(k))).collect()
    }

    pub fn neg_counts(&self) -> Vec<usize> {
        (0..self.n_vars as u32).map(|k| self.neg_count(Var(k))).collect()
    }

    pub fn check_var(&self, var: Var) -> Result<(), Error> {
        if var.index() < self.n_vars {
            Ok(())
        } else {
            Err(Error::OutOfRangeVariable { var: var.dimacs(), n_vars: self.n_vars })
        }
    }

    pub fn check_assignment(&self, assignment: &[bool]) -> Result<(), Error> {
        if assignment.len() == self.n_vars {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: self.n_vars, got: assignment.len() })
        }
    }

    /// Number of unsatisfied clauses, by direct evaluation of every clause.
    pub fn energy(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|c| !c.iter().any(|l| l.eval(assignment)))
            .count()
    }

    /// Total number of true literals, by direct evaluation of every clause.
    pub fn true_literal_count(&self, assignment: &[bool]) -> u64 {
        self.clauses
            .iter()
            .flat_map(|c| c.iter())
            .filter(|l| l.eval(assignment))
            .count() as u64
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.n_vars && self.energy(assignment) == 0
    }

    /// The clauses as DIMACS integer triples.
    pub fn to_dimacs_triples(&self) -> Vec<[i64; 3]> {
        self.clauses.iter().map(|c| c.map(Literal::dimacs)).collect()
    }
}

/// Builds a formula from DIMACS-style integer clauses (`-k` negates variable `k`).
///
/// Every clause must have exactly three literals over distinct variables in
/// `1..=n_vars`.
pub fn build_formula<C: AsRef<[i64]>>(n_vars: usize, clauses: &[C]) -> Result<Formula, Error> {
    let mut typed = Vec::with_capacity(clauses.len());
    for (ci, clause) in clauses.iter().enumerate() {
        let lits = clause.as_ref();
        if lits.len() != 3 {
            return Err(Error::WrongClauseArity { clause: ci, len: lits.len() });
        }
        let mut out = [Literal(0); 3];
        for (slot, &lit) in out.iter_mut().zip(lits) {
            if lit == 0 || lit.unsigned_abs() > n_vars as u64 {
                return Err(Error::OutOfRangeVariable { var: lit, n_vars });
            }
            *slot = Literal::from_dimacs(lit).ok_or(Error::OutOfRangeVariable { var: lit, n_vars })?;
        }
        typed.push(out);
    }
    Formula::new(n_vars, typed)
}
