use lfs_core::dump::{ce_run, CeAction, CeRun, CeSet, LStatus, PStatus, Requirement, Strategy};
use lfs_core::machine::{library, run, Enumeration, OracleView};
use lfs_core::model::Word;

/// The library machines, by name, as indices 0, 1, ...
fn lib() -> Enumeration {
    Enumeration::new(library::all())
}

fn idx(name: &str) -> u64 {
    library::all().iter().position(|n| n.name == name).unwrap() as u64
}

fn l(e: &str, i: &str) -> Requirement {
    Requirement::L {
        e: idx(e),
        i: idx(i),
    }
}

fn p(e: &str) -> Requirement {
    Requirement::P { e: idx(e) }
}

fn checked(reqs: &[Requirement], stages: u64) -> CeRun {
    let en = lib();
    let run = ce_run(&en, reqs, stages);
    let bad = run.check_invariants(&en);
    assert!(bad.is_empty(), "{reqs:?}: {bad:#?}");
    run
}

#[test]
fn no_requirements_leave_a_empty() {
    let run = checked(&[], 30);
    assert!(run.a.is_empty());
    assert!(run.events.is_empty());
}

#[test]
fn single_p_enumerates_its_follower() {
    let run = checked(&[p("HALT_ALL")], 10);
    let Strategy::P(st) = &run.strategies[0] else {
        panic!()
    };
    assert_eq!(st.status, PStatus::Enumerated);
    let f = st.follower.unwrap();
    assert_eq!(f, 2);
    assert!(run.a.contains(f));
    assert_eq!(run.a.members().iter().copied().collect::<Vec<_>>(), vec![2]);
}

#[test]
fn single_p_on_loop_waits() {
    let run = checked(&[p("LOOP")], 40);
    let Strategy::P(st) = &run.strategies[0] else {
        panic!()
    };
    assert_eq!(st.status, PStatus::WaitingForWe);
    assert!(run.a.is_empty());
}

#[test]
fn single_l_diagonalizes_without_a_dump() {
    let run = checked(&[l("CONST_0", "CONST_1")], 10);
    let Strategy::L(st) = &run.strategies[0] else {
        panic!()
    };
    assert_eq!(
        st.status,
        LStatus::SatisfiedByDiagonal { x: 0, restraint: 1 }
    );
    assert!(run.a.is_empty());
}

#[test]
fn diagonalization_through_a_dump_holds_on_the_final_set() {
    let ce = checked(&[l("PREFER_YES", "CONST_0")], 12);
    let Strategy::L(st) = &ce.strategies[0] else {
        panic!()
    };
    let LStatus::SatisfiedByDiagonal { x, .. } = st.status else {
        panic!("{:?}", st.status)
    };
    assert!(!ce.a.is_empty());
    let members = lfs_core::dump::FiniteSet(&ce.a);
    let out = run(
        &library::prefer_yes(),
        &OracleView::Generated(&members),
        &Word::from_index(x),
        1000,
    );
    assert_eq!(out.output(), Some(true));
}

#[test]
fn equal_functions_never_diagonalize() {
    let run = checked(&[l("CONST_0", "CONST_0")], 20);
    let Strategy::L(st) = &run.strategies[0] else {
        panic!()
    };
    assert_eq!(st.status, LStatus::Active);
    assert_eq!(st.psi.len(), 21);
}

#[test]
fn looping_phi_stays_active() {
    let run = checked(&[l("LOOP", "CONST_0")], 20);
    let Strategy::L(st) = &run.strategies[0] else {
        panic!()
    };
    assert_eq!(st.status, LStatus::Active);
    assert!(st.psi.is_empty());
}

#[test]
fn p_below_confirming_l_gets_its_dump() {
    let run = checked(&[l("CONST_0", "CONST_0"), p("HALT_ALL")], 30);
    assert_eq!(run.commits.len(), 1);
    assert!(!run.commits[0].checks.is_empty());
    assert!(run.count("confirmed") >= 1);
    let Strategy::P(st) = &run.strategies[1] else {
        panic!()
    };
    assert_eq!(st.status, PStatus::Enumerated);
}

#[test]
fn p_below_partial_r_waits_forever() {
    let run = checked(&[l("CONST_0", "LOOP"), p("HALT_ALL")], 40);
    assert!(run.commits.is_empty());
    assert!(run.a.is_empty());
    let Strategy::L(st) = &run.strategies[0] else {
        panic!()
    };
    assert!(matches!(st.status, LStatus::PendingConfirmation { .. }));
}

#[test]
fn disagreement_during_confirmation_diagonalizes_instead() {
    // R = DELAYED_ONE only reveals R("1") = 1 at stage 9, while the P dump waits.
    let run = checked(&[l("CONST_0", "DELAYED_ONE"), p("HALT_ALL")], 30);
    let Strategy::L(st) = &run.strategies[0] else {
        panic!()
    };
    assert_eq!(
        st.status,
        LStatus::SatisfiedByDiagonal { x: 2, restraint: 3 }
    );
    let diag = run
        .events
        .iter()
        .find(|e| e.action.name() == "diagonalized")
        .unwrap();
    assert_eq!(diag.stage, 9);
    let requested = run
        .events
        .iter()
        .find(|e| e.action.name() == "dump-requested")
        .unwrap();
    assert!(requested.stage < 9);
    assert_eq!(run.count("request-dropped") + run.count("injured"), 1);
    let Strategy::P(pp) = &run.strategies[1] else {
        panic!()
    };
    assert_eq!(pp.status, PStatus::Enumerated);
}

#[test]
fn higher_p_injures_lower_l() {
    let run = checked(
        &[p("HALT_ALL"), l("PREFER_YES", "CONST_0"), p("HALT_ALL")],
        60,
    );
    let injured: Vec<usize> = run
        .events
        .iter()
        .filter(|e| matches!(e.action, CeAction::Injured { .. }))
        .map(|e| e.strategy)
        .collect();
    assert!(injured.contains(&1), "{:?}", run.events);
    for st in &run.strategies {
        if let Strategy::P(pp) = st {
            assert_eq!(pp.status, PStatus::Enumerated);
        }
    }
}

#[test]
fn followers_are_fresh() {
    let run = checked(
        &[l("PREFER_YES", "CONST_0"), p("HALT_ALL"), p("PARITY")],
        60,
    );
    let mut seen = Vec::new();
    for e in &run.events {
        if let CeAction::FollowerAssigned { follower } = e.action {
            assert!(follower > e.stage);
            assert!(seen.iter().all(|&f| f < follower));
            seen.push(follower);
        }
    }
    assert!(seen.len() >= 2);
}

#[test]
fn pacing_is_round_robin() {
    let reqs = [l("CONST_0", "CONST_0"), p("LOOP"), p("HALT_ALL")];
    let run = checked(&reqs, 30);
    for (n, &(s, k)) in run.actions.iter().enumerate() {
        assert_eq!(s, n as u64 + 1);
        assert_eq!(k, n % 3);
    }
}

#[test]
fn dump_closure_on_hand_built_sets() {
    let mut a = CeSet::new();
    a.dump(4, 9).unwrap();
    a.dump(2, 12).unwrap();
    assert!(a.closure_holds());
    assert_eq!(a.members().len(), 11);
}
