//! Finite-priority scheduler with round-robin pacing.
//!
//! Stage `s` first re-examines the pending dump (if any), then lets
//! strategy `(s - 1) mod N` act. There is at most one pending dump; a
//! request from a higher-priority strategy replaces it, a lower one waits.
//! A dump is gated by every active L above its requester and commits once
//! all of them confirm. Every satisfying action (a committed dump, or an L
//! diagonalization needing none) injures all strategies below it.

use std::sync::Arc;

use super::ceset::{candidate_prefixes, realize, CeSet};
use super::strategy::{
    confirm_pending, l_strategy_step, p_strategy_step, Confirmation, LState, LStatus, PAction,
    PState, PStatus, Requirement,
};
use crate::error::CeError;
use crate::machine::{run_with_detection, Enumeration, Membership, OracleView, Program};
use crate::model::{Word, WordIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    L(LState),
    P(PState),
}

impl Strategy {
    pub fn requirement(&self) -> Requirement {
        match self {
            Strategy::L(l) => Requirement::L { e: l.e, i: l.i },
            Strategy::P(p) => Requirement::P { e: p.e },
        }
    }

    pub fn injuries(&self) -> u64 {
        match self {
            Strategy::L(l) => l.injuries,
            Strategy::P(p) => p.resets,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CeAction {
    FollowerAssigned {
        follower: u64,
    },
    FollowerSpoiled {
        follower: u64,
    },
    PsiDefined {
        x: u64,
        bit: bool,
        alpha: String,
        steps: u64,
        pretend: bool,
    },
    PsiStale {
        x: u64,
    },
    DumpRequested {
        from: u64,
        to: u64,
    },
    RequestDeferred {
        from: u64,
        blocked_by: usize,
    },
    RequestDropped {
        from: u64,
        by: usize,
    },
    Confirmed {
        requester: usize,
        checked: u64,
    },
    DumpCommitted {
        from: u64,
        to: u64,
    },
    Diagonalized {
        x: u64,
        psi_bit: bool,
        r_bit: bool,
        dump_from: Option<u64>,
    },
    Injured {
        count: u64,
    },
}

impl CeAction {
    pub fn name(&self) -> &'static str {
        match self {
            CeAction::FollowerAssigned { .. } => "follower-assigned",
            CeAction::FollowerSpoiled { .. } => "follower-spoiled",
            CeAction::PsiDefined { .. } => "psi-defined",
            CeAction::PsiStale { .. } => "psi-stale",
            CeAction::DumpRequested { .. } => "dump-requested",
            CeAction::RequestDeferred { .. } => "request-deferred",
            CeAction::RequestDropped { .. } => "request-dropped",
            CeAction::Confirmed { .. } => "confirmed",
            CeAction::DumpCommitted { .. } => "dump-committed",
            CeAction::Diagonalized { .. } => "diagonalized",
            CeAction::Injured { .. } => "injured",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CeEvent {
    pub stage: u64,
    pub strategy: usize,
    pub action: CeAction,
}

/// One Ψ value an L strategy had confirmed when a dump committed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfirmCheck {
    pub strategy: usize,
    pub x: u64,
    pub psi_bit: bool,
    pub r_bit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommitRecord {
    pub stage: u64,
    pub requester: usize,
    pub from: u64,
    pub to: u64,
    /// Number of dumps in the history once this one is in.
    pub history_len: usize,
    pub checks: Vec<ConfirmCheck>,
}

#[derive(Clone, Debug)]
struct Pending {
    requester: usize,
    from: u64,
    gates: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CeRun {
    pub stages: u64,
    pub requirements: Vec<Requirement>,
    pub a: CeSet,
    pub strategies: Vec<Strategy>,
    pub events: Vec<CeEvent>,
    pub commits: Vec<CommitRecord>,
    /// `(stage, strategy)` for every satisfying action, in order.
    pub satisfactions: Vec<(u64, usize)>,
    /// `(stage, strategy)` for every scheduled action.
    pub actions: Vec<(u64, usize)>,
    /// Set if the construction broke one of its own rules and stopped.
    pub violation: Option<CeError>,
}

struct Scheduler {
    programs: Vec<(Arc<Program>, Option<Arc<Program>>)>,
    run: CeRun,
    pending: Option<Pending>,
    largest: u64,
}

pub fn ce_run(en: &Enumeration, requirements: &[Requirement], stages: u64) -> CeRun {
    let programs = requirements
        .iter()
        .map(|r| match *r {
            Requirement::L { e, i } => (en.program(e), Some(en.program(i))),
            Requirement::P { e } => (en.program(e), None),
        })
        .collect();
    let strategies = requirements
        .iter()
        .map(|r| match *r {
            Requirement::L { e, i } => Strategy::L(LState::new(e, i)),
            Requirement::P { e } => Strategy::P(PState::new(e)),
        })
        .collect();
    let mut sch = Scheduler {
        programs,
        run: CeRun {
            stages: 0,
            requirements: requirements.to_vec(),
            a: CeSet::new(),
            strategies,
            events: Vec::new(),
            commits: Vec::new(),
            satisfactions: Vec::new(),
            actions: Vec::new(),
            violation: None,
        },
        pending: None,
        largest: 0,
    };
    let n = requirements.len() as u64;
    for s in 1..=stages {
        sch.run.stages = s;
        sch.largest = sch.largest.max(s);
        let outcome = sch.reexamine(s).and_then(|()| {
            if n == 0 {
                return Ok(());
            }
            let k = ((s - 1) % n) as usize;
            sch.run.actions.push((s, k));
            sch.act(k, s)
        });
        if let Err(err) = outcome {
            sch.run.violation = Some(err);
            break;
        }
    }
    sch.run
}

impl Scheduler {
    fn emit(&mut self, stage: u64, strategy: usize, action: CeAction) {
        self.run.events.push(CeEvent {
            stage,
            strategy,
            action,
        });
    }

    fn l_mut(&mut self, k: usize) -> &mut LState {
        match &mut self.run.strategies[k] {
            Strategy::L(l) => l,
            Strategy::P(_) => unreachable!("strategy {k} is not an L strategy"),
        }
    }

    fn r_program(&self, k: usize) -> Arc<Program> {
        self.programs[k].1.clone().expect("L strategies carry R_i")
    }

    /// Largest restraint held by a satisfied L above `k`.
    fn floor(&self, k: usize) -> u64 {
        self.run.strategies[..k]
            .iter()
            .filter_map(|st| match st {
                Strategy::L(LState {
                    status: LStatus::SatisfiedByDiagonal { restraint, .. },
                    ..
                }) => Some(*restraint),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    fn act(&mut self, k: usize, s: u64) -> Result<(), CeError> {
        match &self.run.strategies[k] {
            Strategy::L(_) => self.act_l(k, s),
            Strategy::P(_) => self.act_p(k, s),
        }
    }

    fn act_l(&mut self, k: usize, s: u64) -> Result<(), CeError> {
        if self.l_mut(k).is_satisfied() {
            return Ok(());
        }
        let floor = self.floor(k);
        let pending = match self.l_mut(k).status {
            LStatus::PendingConfirmation { from, .. } => Some(from),
            _ => None,
        };
        let phi = self.programs[k].0.clone();
        let r = self.r_program(k);
        let a = self.run.a.clone();
        let l = self.l_mut(k);
        let report = l_strategy_step(l, &phi, &r, &a, s, floor, pending);
        let defined: Vec<CeAction> = report
            .defined
            .iter()
            .map(|x| {
                let p = &l.psi[x];
                CeAction::PsiDefined {
                    x: *x,
                    bit: p.bit,
                    alpha: p.alpha.to_string(),
                    steps: p.steps,
                    pretend: p.pretend,
                }
            })
            .collect();
        let waiting_on_own_dump = l.diag_target.is_some();
        for ev in defined {
            self.emit(s, k, ev);
        }
        match report.disagreement {
            Some(x) if !waiting_on_own_dump => self.diagonalize(k, x, s),
            _ => Ok(()),
        }
    }

    fn act_p(&mut self, k: usize, s: u64) -> Result<(), CeError> {
        let fresh = self.largest + 1;
        let program = self.programs[k].0.clone();
        let Strategy::P(p) = &mut self.run.strategies[k] else {
            unreachable!()
        };
        match p_strategy_step(p, &program, &self.run.a, s, fresh) {
            PAction::Idle => Ok(()),
            PAction::Assigned { follower, spoiled } => {
                self.largest = follower;
                if let Some(old) = spoiled {
                    self.emit(s, k, CeAction::FollowerSpoiled { follower: old });
                }
                self.emit(s, k, CeAction::FollowerAssigned { follower });
                Ok(())
            }
            PAction::Request { from, .. } => self.submit(k, from, s),
        }
    }

    /// L strategy `k` disagrees with `R_i` at `x`: make its Ψ computation real.
    fn diagonalize(&mut self, k: usize, x: u64, s: u64) -> Result<(), CeError> {
        let floor = self.floor(k);
        let alpha = self.l_mut(k).psi[&x].alpha.clone();
        match realize(&alpha, &self.run.a, floor) {
            None => {
                self.emit(s, k, CeAction::PsiStale { x });
                Ok(())
            }
            Some(x0) if x0 == alpha.len() as u64 => {
                self.l_mut(k).diag_target = Some(x);
                self.satisfy(k, s, None);
                Ok(())
            }
            Some(x0) => {
                self.l_mut(k).diag_target = Some(x);
                self.submit(k, x0, s)
            }
        }
    }

    fn submit(&mut self, k: usize, from: u64, s: u64) -> Result<(), CeError> {
        if let Some(p) = &self.pending {
            if p.requester < k {
                let blocked_by = p.requester;
                self.emit(s, k, CeAction::RequestDeferred { from, blocked_by });
                if let Strategy::L(l) = &mut self.run.strategies[k] {
                    l.diag_target = None;
                }
                return Ok(());
            }
            if p.requester == k {
                return Ok(());
            }
            self.drop_pending(s, k);
        }
        let floor = self.floor(k);
        if from < floor {
            return Err(CeError::RestraintViolated {
                stage: s,
                from,
                restraint: floor,
            });
        }
        let gates: Vec<usize> = (0..k)
            .filter(|&j| matches!(&self.run.strategies[j], Strategy::L(l) if !l.is_satisfied()))
            .collect();
        for &g in &gates {
            self.l_mut(g).status = LStatus::PendingConfirmation { from, requested: s };
        }
        if let Strategy::P(p) = &mut self.run.strategies[k] {
            p.status = PStatus::Requested;
        }
        self.emit(s, k, CeAction::DumpRequested { from, to: s });
        self.pending = Some(Pending {
            requester: k,
            from,
            gates,
        });
        self.reexamine(s)
    }

    fn drop_pending(&mut self, s: u64, by: usize) {
        let Some(p) = self.pending.take() else { return };
        self.emit(
            s,
            p.requester,
            CeAction::RequestDropped { from: p.from, by },
        );
        self.release_gates(&p.gates);
        match &mut self.run.strategies[p.requester] {
            Strategy::L(l) => l.diag_target = None,
            Strategy::P(pp) => {
                if pp.status == PStatus::Requested {
                    pp.status = PStatus::WaitingForWe;
                }
            }
        }
    }

    fn release_gates(&mut self, gates: &[usize]) {
        for &g in gates {
            let l = self.l_mut(g);
            if matches!(l.status, LStatus::PendingConfirmation { .. }) {
                l.status = LStatus::Active;
            }
        }
    }

    /// Ask every gate of the pending dump to confirm; commit when all do.
    fn reexamine(&mut self, s: u64) -> Result<(), CeError> {
        let Some(p) = self.pending.clone() else {
            return Ok(());
        };
        let mut waiting = false;
        for &g in &p.gates {
            let r = self.r_program(g);
            match confirm_pending(self.l_mut(g), &r, s) {
                Confirmation::Confirmed => {}
                Confirmation::StillWaiting => waiting = true,
                Confirmation::DiagonalizedInstead { x } => return self.diagonalize(g, x, s),
            }
        }
        if waiting {
            return Ok(());
        }
        let mut checks = Vec::new();
        for &g in &p.gates {
            let r = self.r_program(g);
            let l = self.l_mut(g);
            let entries: Vec<(u64, bool)> = l.psi.iter().map(|(&x, e)| (x, e.bit)).collect();
            for &(x, psi_bit) in &entries {
                let (r_bit, _) = l.r_value(&r, x, s).expect("confirmed values converged");
                checks.push(ConfirmCheck {
                    strategy: g,
                    x,
                    psi_bit,
                    r_bit,
                });
            }
            self.emit(
                s,
                g,
                CeAction::Confirmed {
                    requester: p.requester,
                    checked: entries.len() as u64,
                },
            );
        }
        self.pending = None;
        self.release_gates(&p.gates);
        self.run.a.dump_at(s, p.from, s)?;
        self.emit(
            s,
            p.requester,
            CeAction::DumpCommitted {
                from: p.from,
                to: s,
            },
        );
        self.run.commits.push(CommitRecord {
            stage: s,
            requester: p.requester,
            from: p.from,
            to: s,
            history_len: self.run.a.history().len(),
            checks,
        });
        self.satisfy(p.requester, s, Some(p.from));
        Ok(())
    }

    fn satisfy(&mut self, k: usize, s: u64, dump_from: Option<u64>) {
        match &mut self.run.strategies[k] {
            Strategy::P(p) => p.status = PStatus::Enumerated,
            Strategy::L(_) => {
                let r = self.r_program(k);
                let l = self.l_mut(k);
                let x = l.diag_target.take().expect("diagonalizing L has a target");
                let entry = l.psi[&x].clone();
                let (r_bit, _) = l.r_value(&r, x, s).expect("disagreement was observed");
                l.status = LStatus::SatisfiedByDiagonal {
                    x,
                    restraint: entry.alpha.len() as u64,
                };
                self.emit(
                    s,
                    k,
                    CeAction::Diagonalized {
                        x,
                        psi_bit: entry.bit,
                        r_bit,
                        dump_from,
                    },
                );
            }
        }
        self.run.satisfactions.push((s, k));
        if self.pending.as_ref().is_some_and(|p| p.requester > k) {
            let p = self.pending.take().unwrap();
            self.release_gates(&p.gates);
        }
        for j in k + 1..self.run.strategies.len() {
            let injured = match &mut self.run.strategies[j] {
                Strategy::L(l) => {
                    l.injure();
                    Some(l.injuries)
                }
                // An enumerated follower stays in A, so its requirement cannot be undone.
                Strategy::P(p) if p.status == PStatus::Enumerated => None,
                Strategy::P(p) => {
                    p.injure();
                    Some(p.resets)
                }
            };
            if let Some(count) = injured {
                self.emit(s, j, CeAction::Injured { count });
            }
        }
    }
}

/// Membership in a finite set of word indices.
pub struct FiniteSet<'a>(pub &'a CeSet);

impl Membership for FiniteSet<'_> {
    fn contains(&self, index: &WordIndex) -> bool {
        index.to_u64().is_some_and(|x| self.0.contains(x))
    }
}

/// Budget used when replaying Φ_e against a finished set.
pub const REPLAY_BUDGET: u64 = 1 << 16;

impl CeRun {
    /// Replays the run and lists every invariant it breaks.
    pub fn check_invariants(&self, en: &Enumeration) -> Vec<String> {
        let mut bad = Vec::new();
        if let Some(v) = &self.violation {
            bad.push(format!("construction stopped: {v}"));
        }
        for n in 0..=self.a.history().len() {
            if !self.a.after_events(n).closure_holds() {
                bad.push(format!("dump closure fails after {n} dumps"));
            }
        }
        for s in 1..=self.stages {
            let before = self.a.before_stage(s);
            let cands = candidate_prefixes(&before, s);
            if cands.len() as u64 > s + 1 {
                bad.push(format!("stage {s}: {} candidate prefixes", cands.len()));
            }
            if !cands.contains(&self.a.prefix(s)) {
                bad.push(format!("stage {s}: final prefix is not a candidate"));
            }
        }
        let n = self.requirements.len() as u64;
        let mut acted = vec![0u64; self.requirements.len()];
        for &(s, k) in &self.actions {
            acted[k] += 1;
            if s > n * acted[k] {
                bad.push(format!(
                    "strategy {k} acted for time {} at stage {s}",
                    acted[k]
                ));
            }
        }
        for (k, st) in self.strategies.iter().enumerate() {
            let above = self.satisfactions.iter().filter(|&&(_, j)| j < k).count() as u64;
            if st.injuries() > above {
                bad.push(format!(
                    "strategy {k} injured {} times, {above} satisfactions above",
                    st.injuries()
                ));
            }
        }
        for c in &self.commits {
            let after = self.a.after_events(c.history_len);
            for check in &c.checks {
                if check.psi_bit != check.r_bit {
                    bad.push(format!(
                        "stage {}: committed with R_i({}) ≠ Ψ",
                        c.stage, check.x
                    ));
                }
                let Requirement::L { e, .. } = self.requirements[check.strategy] else {
                    bad.push(format!(
                        "strategy {} gated a dump but is not an L",
                        check.strategy
                    ));
                    continue;
                };
                let members = FiniteSet(&after);
                let phi = run_with_detection(
                    &en.program(e),
                    &OracleView::Generated(&members),
                    &Word::from_index(check.x),
                    REPLAY_BUDGET,
                    true,
                )
                .result
                .output();
                if phi != Some(check.psi_bit) && phi == Some(check.r_bit) {
                    bad.push(format!(
                        "stage {}: Φ^A({}) agrees with R_i but not Ψ",
                        c.stage, check.x
                    ));
                }
            }
        }
        for (k, st) in self.strategies.iter().enumerate() {
            if let Strategy::L(LState {
                e,
                i,
                psi,
                status: LStatus::SatisfiedByDiagonal { x, .. },
                ..
            }) = st
            {
                let members = FiniteSet(&self.a);
                let input = Word::from_index(*x);
                let phi = run_with_detection(
                    &en.program(*e),
                    &OracleView::Generated(&members),
                    &input,
                    REPLAY_BUDGET,
                    true,
                )
                .result
                .output();
                let r = run_with_detection(
                    &en.program(*i),
                    &OracleView::Empty,
                    &input,
                    REPLAY_BUDGET,
                    true,
                )
                .result
                .output();
                if phi != Some(psi[x].bit) || r == phi {
                    bad.push(format!(
                        "strategy {k}: diagonalization at {x} does not hold on the final set"
                    ));
                }
            }
            if let Strategy::P(PState {
                e,
                follower: Some(f),
                status: PStatus::Enumerated,
                ..
            }) = st
            {
                let halts = run_with_detection(
                    &en.program(*e),
                    &OracleView::Empty,
                    &Word::from_index(*f),
                    self.stages,
                    true,
                )
                .result
                .halted()
                .is_some();
                if !self.a.contains(*f) || !halts {
                    bad.push(format!(
                        "strategy {k}: follower {f} does not witness a difference"
                    ));
                }
            }
        }
        bad
    }

    pub fn count(&self, name: &str) -> usize {
        self.events
            .iter()
            .filter(|e| e.action.name() == name)
            .count()
    }
}
