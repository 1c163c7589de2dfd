use lfs_core::finite_ext::{fe_run, psi_cost_bound, psi_simulate, FeOutcome, PsiOutcome};
use lfs_core::machine::{library, run, run_plain, Enumeration, OracleView, Program};
use lfs_core::model::{unpair_u64, Word};
use lfs_core::sparse::SparsePrefix;

fn lib() -> Enumeration {
    Enumeration::new(library::all())
}

/// One stage searched the slow way: every bit string of each length, kept
/// when it extends σ and has ones only at 1, 3, 15.
fn brute_stage(
    phi: &Program,
    r: &Program,
    sigma: &Word,
    budget: u64,
) -> Option<(Word, u64, bool, bool)> {
    for t in sigma.len() as u64 + 1..=budget {
        for tau in Word::all_of_length(t as usize) {
            if !sigma.is_prefix_of(&tau)
                || (0..tau.len()).any(|i| tau.bit(i) && ![1, 3, 15].contains(&i))
            {
                continue;
            }
            for n in 0..=t {
                let x = Word::from_index(n);
                let Some(rv) = run_plain(r, &x, t).output() else {
                    continue;
                };
                if let Some(pv) = run(phi, &OracleView::FinitePrefix(&tau), &x, t).output() {
                    if pv != rv {
                        return Some((tau, n, pv, rv));
                    }
                }
            }
        }
    }
    None
}

#[test]
fn stages_match_brute_force_for_small_budgets() {
    let en = lib();
    for budget in 1..=12u64 {
        let stages = 24;
        let st = fe_run(&en, stages, budget);
        let mut sigma = Word::empty();
        for (s, rec) in st.log.iter().enumerate() {
            let (e, i) = unpair_u64(s as u64);
            assert_eq!((rec.e, rec.i), (e, i));
            match brute_stage(&en.program(e), &en.program(i), &sigma, budget) {
                Some((tau, n, pv, rv)) => {
                    let expected = FeOutcome::DiagonalFound {
                        tau: SparsePrefix::from_word(&tau).unwrap(),
                        n,
                        phi_value: pv,
                        r_value: rv,
                    };
                    assert_eq!(rec.outcome, expected, "budget {budget} stage {}", s + 1);
                    sigma = tau;
                }
                None => {
                    assert!(!matches!(rec.outcome, FeOutcome::DiagonalFound { .. }));
                    sigma = sigma.concat(&Word::zeros(1));
                }
            }
            assert_eq!(st.history[s + 1].to_word(), sigma);
        }
    }
}

#[test]
fn diagonals_replay_up_to_budget_64() {
    let en = lib();
    let mut found = 0;
    for budget in (1..=12).chain([16, 24, 32, 48, 64]) {
        let st = fe_run(&en, 91, budget);
        let sigma = st.sigma.clone();
        for rec in &st.log {
            if let FeOutcome::DiagonalFound {
                n,
                phi_value,
                r_value,
                ..
            } = rec.outcome
            {
                found += 1;
                let x = Word::from_index(n);
                // Fresh reruns on the final σ with a generous budget.
                let phi = run(
                    &en.program(rec.e),
                    &OracleView::FinitePrefix(&sigma),
                    &x,
                    1 << 16,
                )
                .output();
                let r = run_plain(&en.program(rec.i), &x, 1 << 16).output();
                assert_eq!(phi, Some(phi_value));
                assert_eq!(r, Some(r_value));
                assert_ne!(phi, r, "budget {budget} stage {}", rec.stage);
            }
        }
        assert!(st.check_invariants(&en).is_empty());
    }
    assert!(found > 50, "only {found} diagonals");
}

#[test]
fn simulator_cost_is_polynomial_in_running_time() {
    // Q(t) = t^3 + t^2 + t.
    let bases: Vec<SparsePrefix> = ["", "0", "01", "0101", "0100", "0101000000000001"]
        .iter()
        .map(|s| SparsePrefix::from_word(&s.parse().unwrap()).unwrap())
        .chain(fe_run(&lib(), 20, 12).history)
        .collect();
    let mut checked = 0;
    for named in library::all() {
        for base in &bases {
            for n in 0..16 {
                if let PsiOutcome::Found {
                    phi_steps,
                    psi_steps,
                    ..
                } = psi_simulate(&named.program, base, n, 40)
                {
                    assert!(
                        psi_steps as u128 <= psi_cost_bound(phi_steps),
                        "{} base {base} n {n}: {psi_steps} > Q({phi_steps})",
                        named.name
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn simulator_value_matches_some_sparse_extension() {
    for named in library::all() {
        for n in 0..8 {
            if let PsiOutcome::Found {
                value,
                winner,
                phi_steps,
                ..
            } = psi_simulate(&named.program, &SparsePrefix::empty(), n, 30)
            {
                let out = run(
                    &named.program,
                    &OracleView::FinitePrefix(&winner),
                    &Word::from_index(n),
                    phi_steps,
                );
                assert_eq!(out.halted(), Some((value, phi_steps)), "{}", named.name);
            }
        }
    }
}
