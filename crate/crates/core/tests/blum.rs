use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::Ratio;

use lfs_core::blum::{
    advice, build_r, cn_measure, fast_path_input, fast_r_with_advice, psi_dnc, schnorr_psi,
    speedup_bound, BlumRun, BudgetSchedule, DncPath,
};
use lfs_core::machine::{library, run_plain, Enumeration};
use lfs_core::model::Word;
use lfs_core::BlumError;

fn lib() -> Enumeration {
    Enumeration::new(library::all())
}

/// The one-string-per-length construction with `2^n` budgets, written out
/// plainly: returns the retirement map `e -> (x, Φ_e(x))`.
fn naive_r(en: &Enumeration, max_len: usize) -> BTreeMap<u64, (Word, bool)> {
    let mut retired = BTreeMap::new();
    for n in 0..=max_len {
        'search: for e in 0..=n as u64 {
            if retired.contains_key(&e) {
                continue;
            }
            for x in Word::all_of_length(n) {
                if let Some(bit) = run_plain(&en.program(e), &x, 1 << n).output() {
                    retired.insert(e, (x, bit));
                    break 'search;
                }
            }
        }
    }
    retired
}

fn naive_value(retired: &BTreeMap<u64, (Word, bool)>, x: &Word) -> bool {
    retired.values().any(|(w, bit)| w == x && !bit)
}

#[test]
fn matches_naive_reconstruction() {
    for en in [lib(), Enumeration::godel()] {
        for max_len in 0..=8 {
            let run = build_r(&en, BudgetSchedule::Simple2Exp, max_len);
            let naive = naive_r(&en, max_len);
            let got: BTreeMap<u64, (Word, bool)> = run
                .registry
                .records()
                .iter()
                .map(|(&i, r)| (i, (r.x.clone(), r.phi_bit)))
                .collect();
            assert_eq!(got, naive, "max_len {max_len}");
            for n in 0..=max_len {
                for x in Word::all_of_length(n) {
                    assert_eq!(run.table.value(&x).unwrap(), naive_value(&naive, &x));
                }
            }
        }
    }
}

#[test]
fn at_most_one_string_per_length_and_records_hold() {
    let en = lib();
    for (schedule, max_len) in [
        (BudgetSchedule::Simple2Exp, 14),
        (BudgetSchedule::IteratedSquare, 10),
    ] {
        let run = build_r(&en, schedule, max_len);
        assert_eq!(run.check_invariants(&en), Vec::<String>::new());
        for n in 0..=max_len {
            let ones = Word::all_of_length(n)
                .filter(|x| run.table.value(x).unwrap())
                .count();
            assert!(ones <= 1, "{schedule} length {n}: {ones} ones");
        }
        for (&i, rec) in run.registry.records() {
            let limit = schedule.limit(i, rec.x.len()).unwrap();
            // Square budgets are strict, 2^n budgets inclusive.
            let within = match schedule {
                BudgetSchedule::Simple2Exp => BigUint::from(rec.steps) <= limit,
                BudgetSchedule::IteratedSquare => BigUint::from(rec.steps) < limit,
            };
            assert!(within, "θ({i}) took {} steps, limit {limit}", rec.steps);
            assert_eq!(
                run_plain(&en.program(i), &rec.x, rec.steps).halted(),
                Some((rec.phi_bit, rec.steps))
            );
        }
    }
}

#[test]
fn registry_and_table_round_trip() {
    let run = build_r(&lib(), BudgetSchedule::IteratedSquare, 9);
    let reg = lfs_core::blum::DiagRegistry::from_text(&run.registry.to_text()).unwrap();
    // The text form keeps the string and bit; step counts are not stored.
    assert_eq!(reg.horizon(), run.registry.horizon());
    let strip = |r: &lfs_core::blum::DiagRegistry| -> Vec<(u64, Word, bool)> {
        r.records()
            .iter()
            .map(|(&i, d)| (i, d.x.clone(), d.phi_bit))
            .collect()
    };
    assert_eq!(strip(&reg), strip(&run.registry));
    let table = lfs_core::blum::RTable::from_text(&run.table.to_text()).unwrap();
    assert_eq!(table, run.table);
    assert!(matches!(
        run.table.value(&Word::zeros(10)),
        Err(BlumError::BeyondHorizon {
            len: 10,
            horizon: 9
        })
    ));
}

#[test]
fn block_functional_measure_is_exact() {
    let run = build_r(&lib(), BudgetSchedule::Simple2Exp, 16);
    assert_eq!(run.undecided(), 0);
    for n in 0..=16 {
        let m = cn_measure(n, &run.table).unwrap();
        let bound = Ratio::new(1u64, 1 << n);
        assert!(m <= bound, "n={n}: {m}");
        assert_eq!(m == bound, run.table.one_at(n).is_some(), "n={n}: {m}");
    }
}

#[test]
fn block_functional_measure_by_brute_force() {
    // Count every oracle prefix long enough to hold block n, and every input.
    let run = build_r(&lib(), BudgetSchedule::Simple2Exp, 5);
    for n in 0..=5 {
        let span = n * (n + 1) / 2;
        let mut bad = 0u64;
        for z in Word::all_of_length(span) {
            let errs = Word::all_of_length(n).any(|x| {
                schnorr_psi(&z, &x, &run.table).unwrap().0 != run.table.value(&x).unwrap()
            });
            bad += errs as u64;
        }
        assert_eq!(
            cn_measure(n, &run.table).unwrap(),
            Ratio::new(bad, 1 << span),
            "n={n}"
        );
    }
}

fn square(max_len: usize) -> (Enumeration, BlumRun) {
    let en = lib();
    let run = build_r(&en, BudgetSchedule::IteratedSquare, max_len);
    (en, run)
}

#[test]
fn advice_speeds_up_r() {
    let (en, run) = square(8);
    let mut compared = 0;
    for k in 0..=8u64 {
        let adv = advice(&run.registry, k);
        for n in 0..=8 {
            for x in Word::all_of_length(n) {
                let fast = match fast_r_with_advice(&en, &adv, &x, &run) {
                    Err(BlumError::BeforeCutoff { .. }) => continue,
                    other => other.unwrap(),
                };
                compared += 1;
                assert_eq!(fast.bit, run.table.value(&x).unwrap(), "k={k} x={x}");
                assert!(
                    fast.measured <= speedup_bound(n, k),
                    "k={k} x={x}: {}",
                    fast.measured
                );
                let full = run.cost_through(n);
                if k >= 1 && full > BigUint::default() {
                    assert!(
                        fast.measured < full,
                        "k={k} x={x}: {} vs {full}",
                        fast.measured
                    );
                }
            }
        }
    }
    assert!(compared > 1000);
}

#[test]
fn optimistic_advice_is_rejected() {
    let (en, run) = square(8);
    let mut adv = advice(&run.registry, 3);
    let Some(&dropped) = adv.sigma.iter().next() else {
        return;
    };
    adv.sigma.remove(&dropped);
    let x = Word::zeros(8);
    assert!(matches!(
        fast_r_with_advice(&en, &adv, &x, &run),
        Err(BlumError::AdviceTooOptimistic { .. })
    ));
}

#[test]
fn dnc_paths_agree_with_r() {
    let (en, run) = square(10);
    let mut fast_by_k = BTreeMap::<u64, usize>::new();
    let mut paths = BTreeMap::<DncPath, usize>::new();
    for x in 0..2047u64 {
        let out = psi_dnc(&en, x, &run).unwrap();
        assert_eq!(
            out.bit,
            run.table.value(&Word::from_index(x)).unwrap(),
            "x={x} path {:?}",
            out.path
        );
        *paths.entry(out.path).or_default() += 1;
        if out.path == DncPath::FastPath {
            *fast_by_k.entry(out.k).or_default() += 1;
        }
    }
    assert_eq!(paths.len(), 3, "{paths:?}");
    for k in 0..=4 {
        assert!(
            fast_by_k.get(&k).is_some_and(|&c| c > 0),
            "k={k}: {fast_by_k:?}"
        );
        assert!(fast_path_input(&run.registry, k).is_some_and(|x| x < 2047));
    }
}
