//! Mergeable search statistics.
//!
//! Every tally is an integer count, so merging accumulators is exact and the
//! result does not depend on how trials were sharded or in which order shards
//! were merged.

use alloc::vec::Vec;

use crate::{FlipTransitions, Observer, TrialResult, Var};

/// Which statistics an accumulator records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct StatsToggles {
    /// Visits per `(energy, tlc)` pair.
    pub histogram: bool,
    /// Critical clause count summed per energy.
    pub crit_stats: bool,
    /// Clause-category transition tallies.
    pub rates: bool,
}

impl StatsToggles {
    pub fn all() -> Self {
        StatsToggles { histogram: true, crit_stats: true, rates: true }
    }

    pub fn any(&self) -> bool {
        self.histogram || self.crit_stats || self.rates
    }
}

/// Dense 2D histogram over visited `(energy, tlc)` states.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnergyTlcHistogram {
    rows: Vec<Vec<u64>>,
}

impl EnergyTlcHistogram {
    #[inline]
    pub fn add(&mut self, energy: usize, tlc: u64, count: u64) {
        if self.rows.len() <= energy {
            self.rows.resize_with(energy + 1, Vec::new);
        }
        let row = &mut self.rows[energy];
        let t = tlc as usize;
        if row.len() <= t {
            row.resize(t + 1, 0);
        }
        row[t] += count;
    }

    pub fn merge(&mut self, other: &Self) {
        for (e, row) in other.rows.iter().enumerate() {
            for (t, &c) in row.iter().enumerate() {
                if c > 0 {
                    self.add(e, t as u64, c);
                }
            }
        }
    }

    /// Nonzero cells in increasing `(energy, tlc)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64, u64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(e, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(move |(t, &c)| (e, t as u64, c))
        })
    }

    /// Number of recorded states at `energy`.
    pub fn count_at(&self, energy: usize) -> u64 {
        self.rows.get(energy).map_or(0, |r| r.iter().sum())
    }

    /// Mean true literal count of the recorded states at `energy`.
    pub fn mean_tlc_at(&self, energy: usize) -> Option<f64> {
        let row = self.rows.get(energy)?;
        let n: u64 = row.iter().sum();
        if n == 0 {
            return None;
        }
        let s: f64 = row.iter().enumerate().map(|(t, &c)| t as f64 * c as f64).sum();
        Some(s / n as f64)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|&c| c == 0))
    }
}

/// Sum and number of critical clause counts per energy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CritByEnergy {
    sum: Vec<u64>,
    count: Vec<u64>,
}

impl CritByEnergy {
    #[inline]
    pub fn add(&mut self, energy: usize, critical_sum: u64, count: u64) {
        if self.sum.len() <= energy {
            self.sum.resize(energy + 1, 0);
            self.count.resize(energy + 1, 0);
        }
        self.sum[energy] += critical_sum;
        self.count[energy] += count;
    }

    pub fn merge(&mut self, other: &Self) {
        for e in 0..other.sum.len() {
            if other.count[e] > 0 {
                self.add(e, other.sum[e], other.count[e]);
            }
        }
    }

    /// `(energy, sum, count)` for every energy with at least one record.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64, u64)> + '_ {
        (0..self.sum.len())
            .filter(|&e| self.count[e] > 0)
            .map(|e| (e, self.sum[e], self.count[e]))
    }

    pub fn mean_at(&self, energy: usize) -> Option<f64> {
        match self.count.get(energy) {
            Some(&n) if n > 0 => Some(self.sum[energy] as f64 / n as f64),
            _ => None,
        }
    }
}

/// Critical clause transitions caused by non-random steps, plus step counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateTally {
    pub oversat_to_crit: u64,
    pub unsat_to_crit: u64,
    pub crit_destroyed: u64,
    pub nonrandom_flips: u64,
    pub random_flips: u64,
}

impl RateTally {
    pub fn merge(&mut self, other: &Self) {
        self.oversat_to_crit += other.oversat_to_crit;
        self.unsat_to_crit += other.unsat_to_crit;
        self.crit_destroyed += other.crit_destroyed;
        self.nonrandom_flips += other.nonrandom_flips;
        self.random_flips += other.random_flips;
    }
}

/// Statistics over the states visited by any number of trials.
///
/// As an [`Observer`] it records the initial state of every trial and the
/// state after every flip. Trial outcomes are added with
/// [`record_trial`](Self::record_trial).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StatsAccumulator {
    pub toggles: StatsToggles,
    pub histogram: EnergyTlcHistogram,
    pub crit: CritByEnergy,
    pub rates: RateTally,
    pub trials: u64,
    pub solved: u64,
}

impl StatsAccumulator {
    pub fn new(toggles: StatsToggles) -> Self {
        StatsAccumulator { toggles, ..Default::default() }
    }

    pub fn record_trial(&mut self, result: &TrialResult) {
        self.trials += 1;
        self.solved += u64::from(result.solved);
    }

    /// Adds `other` into `self`. Associative and commutative.
    pub fn merge(&mut self, other: &Self) {
        self.toggles.histogram |= other.toggles.histogram;
        self.toggles.crit_stats |= other.toggles.crit_stats;
        self.toggles.rates |= other.toggles.rates;
        self.histogram.merge(&other.histogram);
        self.crit.merge(&other.crit);
        self.rates.merge(&other.rates);
        self.trials += other.trials;
        self.solved += other.solved;
    }

    pub fn success_fraction(&self) -> Option<f64> {
        (self.trials > 0).then(|| self.solved as f64 / self.trials as f64)
    }
}

impl Observer for StatsAccumulator {
    #[inline]
    fn on_state(&mut self, energy: usize, tlc: u64, critical: usize) {
        if self.toggles.histogram {
            self.histogram.add(energy, tlc, 1);
        }
        if self.toggles.crit_stats {
            self.crit.add(energy, critical as u64, 1);
        }
    }

    #[inline]
    fn on_flip(&mut self, _var: Var, t: &FlipTransitions, random: bool) {
        if !self.toggles.rates {
            return;
        }
        if random {
            self.rates.random_flips += 1;
        } else {
            self.rates.nonrandom_flips += 1;
            self.rates.oversat_to_crit += u64::from(t.oversat_to_crit);
            self.rates.unsat_to_crit += u64::from(t.unsat_to_crit);
            self.rates.crit_destroyed += u64::from(t.crit_destroyed);
        }
    }
}

/// Success-probability classes: hard below, easy above the thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hardness {
    Hard,
    Easy,
    Other,
}

/// Default thresholds: hard if `p < 0.01`, easy if `p > 0.9`.
pub const HARD_BELOW: f64 = 0.01;
pub const EASY_ABOVE: f64 = 0.9;

/// Classifies success probabilities with strict inequalities.
pub fn classify_instances(p: &[f64], hard_below: f64, easy_above: f64) -> Vec<Hardness> {
    p.iter()
        .map(|&p| {
            if p < hard_below {
                Hardness::Hard
            } else if p > easy_above {
                Hardness::Easy
            } else {
                Hardness::Other
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn classification_thresholds() {
        let c = classify_instances(&[0.005, 0.95, 0.5, 0.01, 0.9], HARD_BELOW, EASY_ABOVE);
        assert_eq!(c, vec![Hardness::Hard, Hardness::Easy, Hardness::Other, Hardness::Other, Hardness::Other]);
        assert!(classify_instances(&[0.0; 4], HARD_BELOW, EASY_ABOVE).iter().all(|&h| h == Hardness::Hard));
    }

    #[test]
    fn histogram_iterates_sorted_nonzero() {
        let mut h = EnergyTlcHistogram::default();
        h.add(3, 10, 2);
        h.add(0, 7, 1);
        h.add(3, 4, 5);
        let cells: Vec<_> = h.iter().collect();
        assert_eq!(cells, vec![(0, 7, 1), (3, 4, 5), (3, 10, 2)]);
        assert_eq!(h.count_at(3), 7);
        assert_eq!(h.mean_tlc_at(3), Some((4.0 * 5.0 + 20.0) / 7.0));
        assert_eq!(h.mean_tlc_at(1), None);
    }

    #[test]
    fn merge_is_commutative() {
        let mut a = StatsAccumulator::new(StatsToggles::all());
        let mut b = StatsAccumulator::new(StatsToggles::all());
        a.on_state(2, 30, 4);
        a.on_flip(Var(0), &FlipTransitions { oversat_to_crit: 1, unsat_to_crit: 1, crit_destroyed: 0 }, false);
        b.on_state(5, 12, 1);
        b.on_flip(Var(0), &FlipTransitions::default(), true);
        let mut ab = a.clone();
        ab.merge(&b);
        let mut ba = b.clone();
        ba.merge(&a);
        assert_eq!(ab, ba);
        assert_eq!(ab.rates.nonrandom_flips, 1);
        assert_eq!(ab.rates.random_flips, 1);
        assert_eq!(ab.crit.mean_at(2), Some(4.0));
    }

    #[test]
    fn toggles_off_records_nothing() {
        let mut a = StatsAccumulator::new(StatsToggles::default());
        a.on_state(2, 30, 4);
        a.on_flip(Var(0), &FlipTransitions { oversat_to_crit: 1, ..Default::default() }, false);
        assert_eq!(a, StatsAccumulator::default());
    }
}
