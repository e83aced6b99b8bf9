use docsat_core::engine::run_trial;
use docsat_core::heuristic::Selector;
use docsat_core::oracle::ENUMERATION_LIMIT;
use docsat_core::rng::Draw;
use docsat_core::{
    build_formula, enumerate, tlc_extremes, Formula, HeuristicConfig, Observer, SearchState, SlsRng, TrialConfig,
    Var,
};
use proptest::prelude::*;
use proptest::sample::subsequence;

/// Direct evaluation: (energy, tlc, per-clause true counts, critical count).
fn brute(f: &Formula, x: &[bool]) -> (usize, u64, Vec<u8>, usize) {
    let counts: Vec<u8> = f
        .to_dimacs_triples()
        .iter()
        .map(|c| {
            c.iter()
                .filter(|&&l| {
                    let v = x[(l.unsigned_abs() - 1) as usize];
                    if l > 0 {
                        v
                    } else {
                        !v
                    }
                })
                .count() as u8
        })
        .collect();
    let energy = counts.iter().filter(|&&k| k == 0).count();
    let crit = counts.iter().filter(|&&k| k == 1).count();
    let tlc = counts.iter().map(|&k| u64::from(k)).sum();
    (energy, tlc, counts, crit)
}

fn formula_strategy(max_n: usize) -> impl Strategy<Value = (Formula, Vec<bool>)> {
    (3usize..=max_n).prop_flat_map(|n| {
        let clause = (subsequence((1..=n as i64).collect::<Vec<_>>(), 3), prop::array::uniform3(any::<bool>()))
            .prop_map(|(vars, signs)| [0, 1, 2].map(|i| if signs[i] { -vars[i] } else { vars[i] }));
        (prop::collection::vec(clause, 0..=6 * n), prop::collection::vec(any::<bool>(), n))
            .prop_map(move |(clauses, x)| (build_formula(n, &clauses).unwrap(), x))
    })
}

fn assert_matches_fresh(s: &SearchState<'_>) {
    let fresh = SearchState::new(s.formula(), s.assignment().to_vec()).unwrap();
    assert_eq!(s, &fresh);
    let (e, t, counts, crit) = brute(s.formula(), s.assignment());
    assert_eq!(s.energy(), e);
    assert_eq!(s.tlc(), t);
    assert_eq!(s.num_true_all(), counts.as_slice());
    assert_eq!(s.critical_count(), crit);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn incremental_matches_recompute((f, x) in formula_strategy(12), seed in any::<u64>()) {
        let mut rng = SlsRng::seed_from_u64(seed);
        let mut s = SearchState::new(&f, x).unwrap();
        assert_matches_fresh(&s);
        for _ in 0..500 {
            let before = s.critical_count() as i64;
            let tr = s.flip(Var(rng.below(f.n_vars()) as u32)).unwrap();
            prop_assert_eq!(s.critical_count() as i64 - before, tr.crit_delta());
        }
        assert_matches_fresh(&s);
    }

    #[test]
    fn counts_match_brute_force((f, x) in formula_strategy(12)) {
        let s = SearchState::new(&f, x.clone()).unwrap();
        let (e0, t0, c0, _) = brute(&f, &x);
        for k in 0..f.n_vars() {
            let mut y = x.clone();
            y[k] = !y[k];
            let (_, t1, c1, _) = brute(&f, &y);
            let broken = c0.iter().zip(&c1).filter(|(&a, &b)| a > 0 && b == 0).count() as u32;
            let made = c0.iter().zip(&c1).filter(|(&a, &b)| a == 0 && b > 0).count() as u32;
            let v = Var(k as u32);
            prop_assert_eq!(s.breakcount(v).unwrap(), broken);
            prop_assert_eq!(s.makecount(v).unwrap(), made);
            prop_assert_eq!(s.tlc_delta(v).unwrap(), t1 as i64 - t0 as i64);
            // T = (p - n)_k (1 - 2 x_k)
            let pn = f.pos_count(v) as i64 - f.neg_count(v) as i64;
            prop_assert_eq!(s.tlc_delta(v).unwrap(), pn * (1 - 2 * i64::from(x[k])));
        }
        prop_assert_eq!(s.energy() == 0, e0 == 0);
        prop_assert_eq!(s.energy() == 0, f.is_satisfied_by(&x));
    }

    #[test]
    fn flip_is_involution((f, x) in formula_strategy(12), k in any::<prop::sample::Index>()) {
        let orig = SearchState::new(&f, x).unwrap();
        let v = Var(k.index(f.n_vars()) as u32);
        let mut s = orig.clone();
        let t = s.tlc_delta(v).unwrap();
        let a = s.flip(v).unwrap();
        let (e1, t1) = (s.energy() as i64, s.tlc() as i64);
        prop_assert_eq!(s.tlc_delta(v).unwrap(), -t);
        let b = s.flip(v).unwrap();
        let (e2, t2) = (s.energy() as i64, s.tlc() as i64);
        prop_assert_eq!(&s, &orig);
        prop_assert_eq!(a.crit_delta(), -b.crit_delta());
        prop_assert_eq!(e1 - orig.energy() as i64, -(e2 - e1));
        prop_assert_eq!(t1 - orig.tlc() as i64, -(t2 - t1));
        prop_assert_eq!(t1 - orig.tlc() as i64, t);
    }

    #[test]
    fn tlc_extremes_are_exact((f, _) in formula_strategy(12)) {
        let (min, max) = tlc_extremes(&f);
        let report = enumerate(&f, ENUMERATION_LIMIT).unwrap();
        let all_tlc: Vec<u64> = report.tlc_by_energy.values().flat_map(|h| h.keys().copied()).collect();
        prop_assert_eq!(f.true_literal_count(&min), *all_tlc.iter().min().unwrap());
        prop_assert_eq!(f.true_literal_count(&max), *all_tlc.iter().max().unwrap());
    }

    #[test]
    fn enumeration_matches_state((f, _) in formula_strategy(10)) {
        let report = enumerate(&f, ENUMERATION_LIMIT).unwrap();
        let n = f.n_vars();
        let mut from_state = std::collections::BTreeMap::<usize, std::collections::BTreeMap<u64, u64>>::new();
        for mask in 0..1u64 << n {
            let x: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
            let s = SearchState::new(&f, x).unwrap();
            *from_state.entry(s.energy()).or_default().entry(s.tlc()).or_default() += 1;
        }
        prop_assert_eq!(report.tlc_by_energy, from_state);
        prop_assert_eq!(report.satisfiable, report.min_energy == 0);
        for sol in &report.solutions {
            prop_assert!(f.is_satisfied_by(sol));
        }
    }
}

#[derive(Default, PartialEq, Debug)]
struct Trace(Vec<(usize, u64, usize)>);

impl Observer for Trace {
    fn on_state(&mut self, e: usize, t: u64, c: usize) {
        self.0.push((e, t, c));
    }
}

fn suite() -> Vec<Formula> {
    (0..5).map(|i| docsat_core::generate(&docsat_core::GenConfig::uniform(60, 4.27, i)).unwrap()).collect()
}

#[test]
fn observers_do_not_change_trajectories() {
    let t = TrialConfig { max_flips: 3000, n_trials: 1, stop_on_solution: true };
    for f in suite() {
        for h in [HeuristicConfig::walksat(0.5), HeuristicConfig::docsat(0.4, 0.15), HeuristicConfig::tabu(0.5, 20)] {
            let mut a = SlsRng::seed_from_u64(3);
            let mut b = SlsRng::seed_from_u64(3);
            let mut trace = Trace::default();
            let ra = run_trial(&f, &h, &t, &mut a, &mut ()).unwrap();
            let rb = run_trial(&f, &h, &t, &mut b, &mut trace).unwrap();
            assert_eq!(ra, rb);
            assert_eq!(a, b);
            assert_eq!(trace.0.len() as u64, rb.flips_used + 1);
        }
    }
}

/// Replays the trial loop by hand, checking that every flipped variable belongs
/// to the clause that was sampled and that clause is unsatisfied.
#[test]
fn search_is_focused() {
    for f in suite() {
        for h in [
            HeuristicConfig::walksat(0.5),
            HeuristicConfig::docsat(0.4, 0.15),
            HeuristicConfig::gwsat(0.5),
            HeuristicConfig::tabu(0.5, 20),
            HeuristicConfig::novelty(0.1, 0.5),
        ] {
            let mut rng = SlsRng::seed_from_u64(11);
            let x = docsat_core::engine::random_assignment(f.n_vars(), &mut rng);
            let mut s = SearchState::new(&f, x).unwrap();
            let mut sel = Selector::new(h, f.n_vars()).unwrap();
            for _ in 0..2000 {
                if s.energy() == 0 {
                    break;
                }
                let c = s.unsat_clauses()[rng.below(s.energy())] as usize;
                assert!(s.is_unsat(c));
                let pick = sel.pick(&s, c, &mut rng).unwrap();
                assert!(f.clause(c).iter().any(|l| l.var() == pick.var));
                s.flip(pick.var).unwrap();
            }
        }
    }
}

#[test]
fn zero_weight_docsat_and_empty_tabu_replay_walksat() {
    let t = TrialConfig { max_flips: 5000, n_trials: 1, stop_on_solution: true };
    for f in suite() {
        for seed in 0..10 {
            let run = |h: HeuristicConfig| {
                let mut rng = SlsRng::seed_from_u64(seed);
                let mut trace = Trace::default();
                let r = run_trial(&f, &h, &t, &mut rng, &mut trace).unwrap();
                (r, trace, rng)
            };
            let w = run(HeuristicConfig::walksat(0.5));
            assert_eq!(w, run(HeuristicConfig::docsat(0.5, 0.0)));
            assert_eq!(w, run(HeuristicConfig::tabu(0.5, 0)));
        }
    }
}
