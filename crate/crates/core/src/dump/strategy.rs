//! The two kinds of requirement and the steps their strategies take.
//!
//! `L(e, i)` builds a fast Ψ for `R_i` from the candidate prefixes, or
//! diagonalizes `Φ_e^A` against `R_i`. `P(e)` keeps `x ∉ A` out of `W_e`
//! by a follower that is dumped into `A` once it shows up in `W_e`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::ceset::{candidates_from, CeSet};
use crate::machine::{run_plain, run_with_detection, OracleView, Program};
use crate::model::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Requirement {
    L { e: u64, i: u64 },
    P { e: u64 },
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::L { e, i } => write!(f, "L{e}/{i}"),
            Requirement::P { e } => write!(f, "P{e}"),
        }
    }
}

impl FromStr for Requirement {
    type Err = String;

    /// `L<e>/<i>` or `P<e>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("requirement {s:?} is not of the form L<e>/<i> or P<e>");
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix('L') {
            let (e, i) = rest.split_once('/').ok_or_else(bad)?;
            Ok(Requirement::L {
                e: num(e)?,
                i: num(i)?,
            })
        } else if let Some(rest) = s.strip_prefix('P') {
            Ok(Requirement::P { e: num(rest)? })
        } else {
            Err(bad())
        }
    }
}

/// Parse a comma-separated, priority-ordered requirement list.
pub fn parse_requirements(s: &str) -> Result<Vec<Requirement>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

/// How Ψ(x) got its value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiEntry {
    pub bit: bool,
    /// The candidate prefix whose computation converged fastest.
    pub alpha: Word,
    /// Start of the dump that makes `alpha` a prefix (`|alpha|` if none is needed).
    pub dump_from: u64,
    pub steps: u64,
    pub stage: u64,
    /// `alpha` is also consistent with the pending dump.
    pub pretend: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LStatus {
    Active,
    /// Gating a lower-priority dump of `[from, ..]` requested at stage `requested`.
    PendingConfirmation {
        from: u64,
        requested: u64,
    },
    /// `Φ_e^A(x) ≠ R_i(x)`, protected by keeping `A ↾ restraint` fixed.
    SatisfiedByDiagonal {
        x: u64,
        restraint: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LState {
    pub e: u64,
    pub i: u64,
    pub psi: BTreeMap<u64, PsiEntry>,
    pub status: LStatus,
    pub injuries: u64,
    /// Input this strategy has asked to diagonalize on, while its dump waits.
    pub diag_target: Option<u64>,
    r_known: BTreeMap<u64, (bool, u64)>,
}

impl LState {
    pub fn new(e: u64, i: u64) -> Self {
        LState {
            e,
            i,
            psi: BTreeMap::new(),
            status: LStatus::Active,
            injuries: 0,
            diag_target: None,
            r_known: BTreeMap::new(),
        }
    }

    pub fn is_satisfied(&self) -> bool {
        matches!(self.status, LStatus::SatisfiedByDiagonal { .. })
    }

    /// `R_i(x)[s]`; convergence is remembered since larger budgets cannot undo it.
    pub fn r_value(&mut self, r: &Program, x: u64, s: u64) -> Option<(bool, u64)> {
        if let Some(&(bit, steps)) = self.r_known.get(&x) {
            return (steps <= s).then_some((bit, steps));
        }
        let exec = run_with_detection(r, &OracleView::Empty, &Word::from_index(x), s, true);
        let out = exec.result.halted();
        if let Some(v) = out {
            self.r_known.insert(x, v);
        }
        out
    }

    pub fn injure(&mut self) {
        self.psi.clear();
        self.status = LStatus::Active;
        self.diag_target = None;
        self.injuries += 1;
    }
}

/// What an L step found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LStepReport {
    /// Inputs whose Ψ value was defined in this step.
    pub defined: Vec<u64>,
    /// Least input where Ψ and `R_i[s]` both converge and differ.
    pub disagreement: Option<u64>,
}

/// Define Ψ(x) for every `x ≤ s` still undefined, from the fastest
/// convergence of `Φ_e^α(x)[s]` over the candidate prefixes α of length
/// `s` (ties to the lexicographically least α), then look for an input on
/// which Ψ and `R_i` disagree.
///
/// Candidates only use dumps starting at or above `floor`. When a dump
/// `[pending, ..]` awaits confirmation, candidates consistent with it are
/// flagged as pretend computations.
pub fn l_strategy_step(
    l: &mut LState,
    phi: &Program,
    r: &Program,
    a: &CeSet,
    s: u64,
    floor: u64,
    pending: Option<u64>,
) -> LStepReport {
    let candidates = candidates_from(a, s, floor);
    let pretend: Vec<bool> = match pending {
        Some(y) => {
            let mut with = a.clone();
            with.dump_at(s, y.min(s), s).expect("non-empty interval");
            candidates
                .iter()
                .map(|(alpha, _)| {
                    candidates_from(&with, s, floor)
                        .iter()
                        .any(|(w, _)| w == alpha)
                })
                .collect()
        }
        None => vec![false; candidates.len()],
    };
    let mut report = LStepReport::default();
    for x in 0..=s {
        if l.psi.contains_key(&x) {
            continue;
        }
        let input = Word::from_index(x);
        let mut best: Option<(u64, bool, usize)> = None;
        for (k, (alpha, _)) in candidates.iter().enumerate() {
            let exec = run_with_detection(phi, &OracleView::FinitePrefix(alpha), &input, s, true);
            if let Some((bit, steps)) = exec.result.halted() {
                if best.is_none_or(|(b, _, _)| steps < b) {
                    best = Some((steps, bit, k));
                }
            }
        }
        if let Some((steps, bit, k)) = best {
            let (alpha, dump_from) = candidates[k].clone();
            l.psi.insert(
                x,
                PsiEntry {
                    bit,
                    alpha,
                    dump_from,
                    steps,
                    stage: s,
                    pretend: pretend[k],
                },
            );
            report.defined.push(x);
        }
    }
    let defined: Vec<(u64, bool)> = l.psi.iter().map(|(&x, p)| (x, p.bit)).collect();
    report.disagreement = defined
        .into_iter()
        .find(|&(x, bit)| l.r_value(r, x, s).is_some_and(|(v, _)| v != bit))
        .map(|(x, _)| x);
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confirmation {
    Confirmed,
    StillWaiting,
    DiagonalizedInstead { x: u64 },
}

/// `R_i` must converge, within `s` steps, to Ψ's value on every input
/// where Ψ is defined before a lower-priority dump may go ahead.
pub fn confirm_pending(l: &mut LState, r: &Program, s: u64) -> Confirmation {
    let defined: Vec<(u64, bool)> = l.psi.iter().map(|(&x, p)| (x, p.bit)).collect();
    let mut waiting = false;
    for (x, bit) in defined {
        match l.r_value(r, x, s) {
            Some((v, _)) if v != bit => return Confirmation::DiagonalizedInstead { x },
            Some(_) => {}
            None => waiting = true,
        }
    }
    if waiting {
        Confirmation::StillWaiting
    } else {
        Confirmation::Confirmed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PStatus {
    WaitingForFollower,
    WaitingForWe,
    /// A dump of the follower is pending.
    Requested,
    Enumerated,
    /// Reset by a higher-priority action; carries the reset count.
    InjuredResetCount(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PState {
    pub e: u64,
    pub follower: Option<u64>,
    pub status: PStatus,
    pub resets: u64,
}

impl PState {
    pub fn new(e: u64) -> Self {
        PState {
            e,
            follower: None,
            status: PStatus::WaitingForFollower,
            resets: 0,
        }
    }

    pub fn injure(&mut self) {
        self.follower = None;
        self.resets += 1;
        self.status = PStatus::InjuredResetCount(self.resets);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PAction {
    Idle,
    /// A fresh follower was taken; `spoiled` holds the old one if `A` had swallowed it.
    Assigned {
        follower: u64,
        spoiled: Option<u64>,
    },
    /// Request to dump `[from, to]`.
    Request {
        from: u64,
        to: u64,
    },
}

/// One P step at stage `s`. `fresh` is the least number larger than every
/// number the construction has mentioned.
pub fn p_strategy_step(
    p: &mut PState,
    program: &Program,
    a: &CeSet,
    s: u64,
    fresh: u64,
) -> PAction {
    if matches!(p.status, PStatus::Enumerated | PStatus::Requested) {
        return PAction::Idle;
    }
    let spoiled = p.follower.filter(|&f| a.contains(f));
    match p.follower {
        Some(f) if spoiled.is_none() => {
            if f <= s
                && run_plain(program, &Word::from_index(f), s)
                    .halted()
                    .is_some()
            {
                PAction::Request { from: f, to: s }
            } else {
                PAction::Idle
            }
        }
        _ => {
            p.follower = Some(fresh);
            p.status = PStatus::WaitingForWe;
            PAction::Assigned {
                follower: fresh,
                spoiled,
            }
        }
    }
}
