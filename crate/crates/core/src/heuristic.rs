//! Variable selection inside an unsatisfied clause.
//!
//! All pickers share one branch structure so that their random streams line
//! up: a single `unit()` draw decides the walk branch, a walk step spends one
//! `below(len)` draw, and a tie among minimal scores spends one `below(len)`
//! draw only when more than one candidate is tied. This makes DOCSAT with
//! `r_doc = 0` flip-for-flip identical to WalkSAT and Tabu with an empty
//! window identical to WalkSAT.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::rng::Draw;
use crate::{Error, SearchState, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum HeuristicKind {
    #[default]
    Walksat,
    Docsat,
    Gwsat,
    Tabu,
    Novelty,
}

impl HeuristicKind {
    pub fn name(self) -> &'static str {
        match self {
            HeuristicKind::Walksat => "walksat",
            HeuristicKind::Docsat => "docsat",
            HeuristicKind::Gwsat => "gwsat",
            HeuristicKind::Tabu => "tabu",
            HeuristicKind::Novelty => "novelty",
        }
    }
}

impl core::str::FromStr for HeuristicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "walksat" => HeuristicKind::Walksat,
            "docsat" => HeuristicKind::Docsat,
            "gwsat" => HeuristicKind::Gwsat,
            "tabu" => HeuristicKind::Tabu,
            "novelty" => HeuristicKind::Novelty,
            _ => return Err(Error::InvalidConfig("unknown solver kind")),
        })
    }
}

/// Sign convention of the true-literal-count term in the DOCSAT score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TlcSign {
    /// `T = TLC(after) - TLC(before)`: minimising the score prefers flips that
    /// leave fewer true literals.
    #[default]
    AfterMinusBefore,
    /// `T = (p - n)_k * (2 x_k - 1)`, the negation of the above. Debug only.
    Inverted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct HeuristicConfig {
    pub kind: HeuristicKind,
    /// Probability of a uniformly random step (Novelty: the Novelty+ walk).
    pub p_walk: f64,
    /// Weight of the true-literal-count term (docsat).
    pub r_doc: f64,
    /// Length of the FIFO window of forbidden variables (tabu).
    pub tabu_len: usize,
    /// Probability of taking the second best variable (novelty).
    pub p_novelty: f64,
    pub tlc_sign: TlcSign,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            kind: HeuristicKind::Walksat,
            p_walk: 0.5,
            r_doc: 0.0,
            tabu_len: 0,
            p_novelty: 0.0,
            tlc_sign: TlcSign::AfterMinusBefore,
        }
    }
}

impl HeuristicConfig {
    pub fn walksat(p_walk: f64) -> Self {
        HeuristicConfig { kind: HeuristicKind::Walksat, p_walk, ..Default::default() }
    }

    pub fn docsat(p_walk: f64, r_doc: f64) -> Self {
        HeuristicConfig { kind: HeuristicKind::Docsat, p_walk, r_doc, ..Default::default() }
    }

    pub fn gwsat(p_walk: f64) -> Self {
        HeuristicConfig { kind: HeuristicKind::Gwsat, p_walk, ..Default::default() }
    }

    pub fn tabu(p_walk: f64, tabu_len: usize) -> Self {
        HeuristicConfig { kind: HeuristicKind::Tabu, p_walk, tabu_len, ..Default::default() }
    }

    pub fn novelty(p_walk: f64, p_novelty: f64) -> Self {
        HeuristicConfig { kind: HeuristicKind::Novelty, p_walk, p_novelty, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(0.0..=1.0).contains(&self.p_walk) {
            return Err(Error::InvalidConfig("p_walk must lie in [0, 1]"));
        }
        if !(self.r_doc >= 0.0 && self.r_doc.is_finite()) {
            return Err(Error::InvalidConfig("r_doc must be finite and nonnegative"));
        }
        if !(0.0..=1.0).contains(&self.p_novelty) {
            return Err(Error::InvalidConfig("p_novelty must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// A selected variable and whether it came from the random-walk branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pick {
    pub var: Var,
    pub random: bool,
}

#[inline]
fn clause_vars(s: &SearchState<'_>, clause: usize) -> Result<[Var; 3], Error> {
    if clause >= s.formula().n_clauses() || !s.is_unsat(clause) {
        return Err(Error::ClauseNotUnsat { clause });
    }
    Ok(s.formula().clause(clause).map(|l| l.var()))
}

/// Uniform choice among the candidates with minimal score. Draws from `rng`
/// only if the minimum is shared.
#[inline]
fn argmin_uniform<T: PartialOrd + Copy, R: RngCore + ?Sized>(
    vars: &[Var],
    scores: &[T],
    rng: &mut R,
) -> Var {
    let mut best = scores[0];
    for &s in &scores[1..] {
        if s < best {
            best = s;
        }
    }
    let mut tied = [Var(0); 3];
    let mut n = 0;
    for (&v, &s) in vars.iter().zip(scores) {
        if s == best {
            tied[n] = v;
            n += 1;
        }
    }
    if n == 1 {
        tied[0]
    } else {
        tied[rng.below(n)]
    }
}

/// The shared gate: with probability `p_walk`, and only if no candidate has a
/// nonpositive score, a uniformly random candidate; otherwise a uniformly
/// random minimal-score candidate.
#[inline]
fn gated_pick<T: PartialOrd + Copy + Default, R: RngCore + ?Sized>(
    vars: &[Var],
    scores: &[T],
    rng: &mut R,
    p_walk: f64,
) -> Pick {
    let zero = T::default();
    let all_positive = scores.iter().all(|&s| s > zero);
    let u = rng.unit();
    if all_positive && u < p_walk {
        Pick { var: vars[rng.below(vars.len())], random: true }
    } else {
        Pick { var: argmin_uniform(vars, scores, rng), random: false }
    }
}

/// WalkSAT: a zero-breakcount variable is always taken (uniformly among
/// several), otherwise a random walk step with probability `p_walk`, otherwise
/// a uniformly random variable of minimal breakcount.
pub fn pick_var_walksat<R: RngCore + ?Sized>(
    s: &SearchState<'_>,
    clause: usize,
    rng: &mut R,
    p_walk: f64,
) -> Result<Pick, Error> {
    let vars = clause_vars(s, clause)?;
    let breaks = vars.map(|v| s.breakcount_unchecked(v) as i64);
    Ok(gated_pick(&vars, &breaks, rng, p_walk))
}

/// Score of one variable under DOCSAT: `breakcount + r_doc * T`.
#[inline]
pub fn docsat_score(s: &SearchState<'_>, var: Var, r_doc: f64, sign: TlcSign) -> f64 {
    let t = s.tlc_delta_unchecked(var);
    let t = match sign {
        TlcSign::AfterMinusBefore => t,
        TlcSign::Inverted => -t,
    };
    f64::from(s.breakcount_unchecked(var)) + r_doc * t as f64
}

/// DOCSAT variable selection: if every score is positive, a random variable
/// with probability `p_walk`; otherwise (or with probability `1 - p_walk`) a
/// uniformly random variable of minimal score.
pub fn pick_var_docsat<R: RngCore + ?Sized>(
    s: &SearchState<'_>,
    clause: usize,
    rng: &mut R,
    p_walk: f64,
    r_doc: f64,
) -> Result<Pick, Error> {
    pick_var_docsat_signed(s, clause, rng, p_walk, r_doc, TlcSign::AfterMinusBefore)
}

pub fn pick_var_docsat_signed<R: RngCore + ?Sized>(
    s: &SearchState<'_>,
    clause: usize,
    rng: &mut R,
    p_walk: f64,
    r_doc: f64,
    sign: TlcSign,
) -> Result<Pick, Error> {
    let vars = clause_vars(s, clause)?;
    let scores = vars.map(|v| docsat_score(s, v, r_doc, sign));
    Ok(gated_pick(&vars, &scores, rng, p_walk))
}

/// GWSAT: random walk with probability `p_walk`, otherwise minimise
/// `breakcount - makecount`.
pub fn pick_var_gwsat<R: RngCore + ?Sized>(
    s: &SearchState<'_>,
    clause: usize,
    rng: &mut R,
    p_walk: f64,
) -> Result<Pick, Error> {
    let vars = clause_vars(s, clause)?;
    let scores = vars.map(|v| i64::from(s.breakcount_unchecked(v)) - i64::from(s.makecount_unchecked(v)));
    let u = rng.unit();
    if u < p_walk {
        Ok(Pick { var: vars[rng.below(3)], random: true })
    } else {
        Ok(Pick { var: argmin_uniform(&vars, &scores, rng), random: false })
    }
}

/// Tabu-WalkSAT: WalkSAT restricted to variables outside `tabu`. If all three
/// are tabu a uniformly random one is taken. The caller records the flip in
/// the window (see [`Selector`]).
pub fn pick_var_tabu<R: RngCore + ?Sized>(
    s: &SearchState<'_>,
    clause: usize,
    rng: &mut R,
    p_walk: f64,
    tabu: &VecDeque<Var>,
) -> Result<Pick, Error> {
    let vars = clause_vars(s, clause)?;
    let mut allowed = [Var(0); 3];
    let mut n = 0;
    for v in vars {
        if !tabu.contains(&v) {
            allowed[n] = v;
            n += 1;
        }
    }
    if n == 0 {
        return Ok(Pick { var: vars[rng.below(3)], random: true });
    }
    let allowed = &allowed[..n];
    let mut breaks = [0i64; 3];
    for (b, &v) in breaks.iter_mut().zip(allowed) {
        *b = i64::from(s.breakcount_unchecked(v));
    }
    Ok(gated_pick(allowed, &breaks[..n], rng, p_walk))
}

/// Novelty+: with probability `p_walk` a random walk step. Otherwise rank by
/// `breakcount - makecount`, ties going to the variable flipped longest ago;
/// take the best unless it is the most recently flipped variable of the
/// clause, in which case take the second best with probability `p_novelty`.
pub fn pick_var_novelty<R: RngCore + ?Sized>(
    s: &SearchState<'_>,
    clause: usize,
    rng: &mut R,
    p_walk: f64,
    p_novelty: f64,
    last_flip: &[u64],
) -> Result<Pick, Error> {
    let vars = clause_vars(s, clause)?;
    if rng.unit() < p_walk {
        return Ok(Pick { var: vars[rng.below(3)], random: true });
    }
    let key = |v: Var| {
        (
            i64::from(s.breakcount_unchecked(v)) - i64::from(s.makecount_unchecked(v)),
            last_flip[v.index()],
        )
    };
    let mut ranked = vars;
    ranked.sort_by_key(|&v| key(v));
    let newest = vars.iter().copied().max_by_key(|v| last_flip[v.index()]).unwrap();
    let best = ranked[0];
    if best == newest && last_flip[best.index()] > 0 && rng.unit() < p_novelty {
        Ok(Pick { var: ranked[1], random: false })
    } else {
        Ok(Pick { var: best, random: false })
    }
}

/// Per-trial selection state for a [`HeuristicConfig`].
#[derive(Debug, Clone)]
pub struct Selector {
    config: HeuristicConfig,
    tabu: VecDeque<Var>,
    last_flip: Vec<u64>,
    step: u64,
}

impl Selector {
    pub fn new(config: HeuristicConfig, n_vars: usize) -> Result<Self, Error> {
        config.validate()?;
        let last_flip = if config.kind == HeuristicKind::Novelty {
            alloc::vec![0; n_vars]
        } else {
            Vec::new()
        };
        Ok(Selector { config, tabu: VecDeque::with_capacity(config.tabu_len + 1), last_flip, step: 0 })
    }

    pub fn config(&self) -> &HeuristicConfig {
        &self.config
    }

    /// Picks a variable of the unsatisfied `clause` and records it as flipped.
    pub fn pick<R: RngCore + ?Sized>(
        &mut self,
        s: &SearchState<'_>,
        clause: usize,
        rng: &mut R,
    ) -> Result<Pick, Error> {
        let c = &self.config;
        let pick = match c.kind {
            HeuristicKind::Walksat => pick_var_walksat(s, clause, rng, c.p_walk)?,
            HeuristicKind::Docsat => pick_var_docsat_signed(s, clause, rng, c.p_walk, c.r_doc, c.tlc_sign)?,
            HeuristicKind::Gwsat => pick_var_gwsat(s, clause, rng, c.p_walk)?,
            HeuristicKind::Tabu => pick_var_tabu(s, clause, rng, c.p_walk, &self.tabu)?,
            HeuristicKind::Novelty => {
                pick_var_novelty(s, clause, rng, c.p_walk, c.p_novelty, &self.last_flip)?
            }
        };
        self.record(pick.var);
        Ok(pick)
    }

    fn record(&mut self, var: Var) {
        self.step += 1;
        match self.config.kind {
            HeuristicKind::Tabu if self.config.tabu_len > 0 => {
                self.tabu.push_back(var);
                if self.tabu.len() > self.config.tabu_len {
                    self.tabu.pop_front();
                }
            }
            HeuristicKind::Novelty => self.last_flip[var.index()] = self.step,
            _ => {}
        }
    }
}
