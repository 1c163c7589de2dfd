//! Computing R faster with advice.
//!
//! Given the indices `σ_k ⊆ [0, k)` that ever get retired, the construction
//! only needs to be followed until all of them are retired (phase one);
//! after that, R at a length `m` depends only on indices `k ≤ j ≤ m`,
//! whose budgets are at most `f^{m-k}(m)` (phase two).

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::construction::{build_r, search_length, BlumRun, Cost, DiagRegistry, Machines};
use super::schedule::BudgetSchedule;
use crate::error::BlumError;
use crate::machine::Enumeration;
use crate::model::{proj3, untriple_u64, word_to_index, TripleCode, Word};

/// `σ_k` as seen at a finite horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdviceList {
    pub k: u64,
    pub sigma: BTreeSet<u64>,
    pub horizon: usize,
}

impl AdviceList {
    /// Last length at which an advised index is retired; phase one runs up to it.
    pub fn cutoff(&self, reg: &DiagRegistry) -> Option<usize> {
        self.sigma
            .iter()
            .filter_map(|&i| reg.theta(i))
            .map(Word::len)
            .max()
    }
}

pub fn advice(reg: &DiagRegistry, k: u64) -> AdviceList {
    AdviceList {
        k,
        sigma: reg.records().keys().copied().filter(|&i| i < k).collect(),
        horizon: reg.horizon(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastR {
    pub bit: bool,
    /// Accounted steps of phase two.
    pub measured: BigUint,
    /// Accounted steps of phase one, a constant for fixed `k`.
    pub phase_one: BigUint,
    pub cutoff: Option<usize>,
    /// Indices phase two simulated at the length of `x`.
    pub simulated: Vec<u64>,
}

/// `R(x)` by the two-phase procedure. `direct` is a construction to at least
/// `|x|`, used only to check the advice and as the place phase one stops.
pub fn fast_r_with_advice(
    en: &Enumeration,
    adv: &AdviceList,
    x: &Word,
    direct: &BlumRun,
) -> Result<FastR, BlumError> {
    let schedule = direct.schedule;
    if x.len() > direct.max_len() {
        return Err(BlumError::BeyondHorizon {
            len: x.len(),
            horizon: direct.max_len(),
        });
    }
    let cutoff = adv.cutoff(&direct.registry);
    if let Some(c) = cutoff {
        if x.len() <= c {
            return Err(BlumError::BeforeCutoff {
                len: x.len(),
                cutoff: c,
            });
        }
    }
    let first = cutoff.map_or(0, |c| c + 1);
    for (&i, rec) in direct.registry.records() {
        if i < adv.k && !adv.sigma.contains(&i) && rec.x.len() <= x.len() {
            return Err(BlumError::AdviceTooOptimistic {
                k: adv.k,
                index: i,
                length: rec.x.len(),
            });
        }
    }
    // Phase one: the plain construction through the cutoff.
    let (retired, phase_one) = match cutoff {
        Some(c) => {
            let head = build_r(en, schedule, c);
            if adv.sigma.iter().any(|i| head.registry.theta(*i).is_none()) {
                return Err(BlumError::PhaseOneIncomplete { len: c });
            }
            let retired: BTreeSet<u64> = head.registry.records().keys().copied().collect();
            (retired, head.cost_through(c))
        }
        None => (BTreeSet::new(), BigUint::default()),
    };
    // Phase two: only indices j ≥ k can still act.
    let mut machines = Machines::new(en);
    let mut retired = retired;
    let mut cost = Cost::default();
    let mut bit = false;
    let mut simulated = Vec::new();
    for m in first..=x.len() {
        let indices: Vec<u64> = (adv.k..=m as u64)
            .filter(|j| !retired.contains(j))
            .collect();
        if m == x.len() {
            simulated = indices.clone();
        }
        if let Some(w) = search_length(&mut machines, schedule, m, indices, &mut cost) {
            retired.insert(w.e);
            if m == x.len() {
                bit = w.x == *x && !w.phi_bit;
            }
        }
    }
    Ok(FastR {
        bit,
        measured: cost.accounted,
        phase_one,
        cutoff,
        simulated,
    })
}

/// The polynomial in `|x| · f^{|x|-k}(|x|)` that bounds phase two:
/// `SPEEDUP_C · (|x| · f^{|x|-k}(|x|))^SPEEDUP_D`, with `k` capped at `|x|`.
pub fn speedup_bound(len: usize, k: u64) -> BigUint {
    let k = (k as usize).min(len);
    let base =
        BigUint::from(len.max(1)) * BudgetSchedule::iterate(len - k, len).max(BigUint::from(1u32));
    base.pow(SPEEDUP_D) * SPEEDUP_C
}

/// Constants of [`speedup_bound`], fitted on the default corpus at length 8.
pub const SPEEDUP_C: u32 = 4;
pub const SPEEDUP_D: u32 = 2;

/// Least natural number different from the middle projection of every
/// `θ(i)`, `i < k`.
pub fn f_avoider(reg: &DiagRegistry, k: u64) -> u64 {
    let forbidden: BTreeSet<BigUint> = (0..k)
        .filter_map(|i| reg.theta(i))
        .map(|x| proj3(2, &TripleCode(word_to_index(x).0)).expect("projection 2 exists"))
        .collect();
    (0u64..)
        .find(|v| !forbidden.contains(&BigUint::from(*v)))
        .unwrap()
}

/// Steps charged for computing `F(k)`: one registry lookup per `i < k`, plus one.
pub fn avoider_cost(k: u64) -> u64 {
    k.saturating_add(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DncPath {
    FallbackBudget,
    FallbackMismatch,
    FastPath,
}

impl DncPath {
    pub fn name(&self) -> &'static str {
        match self {
            DncPath::FallbackBudget => "fallback-budget",
            DncPath::FallbackMismatch => "fallback-mismatch",
            DncPath::FastPath => "fast-path",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DncOutcome {
    pub bit: bool,
    pub measured: BigUint,
    pub path: DncPath,
    pub k: u64,
}

/// Ψ on input `x = ⟨k, l, m⟩`: if `F(k)` can be computed within `m` steps
/// and equals `l`, then `x` is none of the `θ(i)`, `i < k`, so only the
/// indices `k ≤ j ≤ |x|` can have put `x` into R; otherwise fall back to
/// the table.
pub fn psi_dnc(en: &Enumeration, x: u64, direct: &BlumRun) -> Result<DncOutcome, BlumError> {
    let word = Word::from_index(x);
    let fallback = direct.table.value(&word)?;
    let (k, l, m) = untriple_u64(x);
    let charge = avoider_cost(k);
    if charge > m {
        return Ok(DncOutcome {
            bit: fallback,
            measured: BigUint::from(m),
            path: DncPath::FallbackBudget,
            k,
        });
    }
    let reg = &direct.registry;
    if l != f_avoider(reg, k) {
        return Ok(DncOutcome {
            bit: fallback,
            measured: BigUint::from(charge),
            path: DncPath::FallbackMismatch,
            k,
        });
    }
    let n = word.len();
    let mut measured = BigUint::from(charge);
    let low_retired_here = (0..k).find_map(|i| reg.theta(i).filter(|t| t.len() == n));
    let bit = match low_retired_here {
        Some(theta) => {
            assert_ne!(
                *theta, word,
                "the avoider separates x from every θ(i), i < k"
            );
            measured += k;
            false
        }
        None => {
            let mut machines = Machines::new(en);
            let mut cost = Cost::default();
            let indices: Vec<u64> = (k..=n as u64).filter(|&j| reg.active_at(j, n)).collect();
            let winner = search_length(&mut machines, direct.schedule, n, indices, &mut cost);
            measured += cost.accounted;
            winner.is_some_and(|w| w.x == word && !w.phi_bit)
        }
    };
    Ok(DncOutcome {
        bit,
        measured,
        path: DncPath::FastPath,
        k,
    })
}

/// Smallest `x = ⟨k, F(k), m⟩` that takes the fast path, if it fits in 64 bits.
pub fn fast_path_input(reg: &DiagRegistry, k: u64) -> Option<u64> {
    let code = crate::model::triple(k, f_avoider(reg, k), avoider_cost(k));
    code.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::library;

    fn lib_run(schedule: BudgetSchedule, max_len: usize) -> (Enumeration, BlumRun) {
        let en = Enumeration::new(library::all());
        let run = build_r(&en, schedule, max_len);
        (en, run)
    }

    #[test]
    fn advice_examples() {
        let en = Enumeration::new(vec![crate::machine::NamedProgram {
            name: "CONST_0".into(),
            program: library::const0(),
        }]);
        let run = build_r(&en, BudgetSchedule::Simple2Exp, 3);
        assert!(advice(&run.registry, 0).sigma.is_empty());
        assert_eq!(advice(&run.registry, 1).sigma, BTreeSet::from([0]));
    }

    #[test]
    fn avoider_examples() {
        let empty = DiagRegistry::default();
        assert_eq!(f_avoider(&empty, 5), 0);
        let (_, run) = lib_run(BudgetSchedule::Simple2Exp, 6);
        for k in 0..8 {
            let f = f_avoider(&run.registry, k);
            assert!(f <= k);
            for i in 0..k {
                if let Some(t) = run.registry.theta(i) {
                    let (_, l, _) = untriple_u64(word_to_index(t).to_u64().unwrap());
                    assert_ne!(l, f);
                }
            }
        }
    }

    #[test]
    fn fast_r_agrees_at_the_boundary() {
        let (en, run) = lib_run(BudgetSchedule::IteratedSquare, 6);
        for k in 0..=6u64 {
            let adv = advice(&run.registry, k);
            let x = Word::zeros(6);
            if adv.cutoff(&run.registry).is_some_and(|c| c >= 6) {
                assert!(matches!(
                    fast_r_with_advice(&en, &adv, &x, &run),
                    Err(BlumError::BeforeCutoff { .. })
                ));
                continue;
            }
            let fast = fast_r_with_advice(&en, &adv, &x, &run).unwrap();
            assert_eq!(fast.bit, run.table.value(&x).unwrap(), "k={k}");
            if k == 6 {
                assert!(fast.simulated.iter().all(|&j| j == 6));
            }
        }
    }

    #[test]
    fn stale_advice_is_reported() {
        let (en, run) = lib_run(BudgetSchedule::Simple2Exp, 8);
        let short = build_r(&en, BudgetSchedule::Simple2Exp, 3);
        let adv = advice(&short.registry, 6);
        let late = run
            .registry
            .records()
            .iter()
            .find(|(&i, r)| i < 6 && r.x.len() > 3)
            .map(|(&i, _)| i);
        let err = fast_r_with_advice(&en, &adv, &Word::zeros(8), &run).unwrap_err();
        assert_eq!(
            err,
            BlumError::AdviceTooOptimistic {
                k: 6,
                index: late.unwrap(),
                length: run.registry.theta(late.unwrap()).unwrap().len()
            }
        );
    }

    #[test]
    fn dnc_paths() {
        let (en, run) = lib_run(BudgetSchedule::Simple2Exp, 11);
        let reg = &run.registry;
        let k = 2;
        let f = f_avoider(reg, k);
        let wrong = crate::model::triple(k, f + 1, 4u32).to_u64().unwrap();
        let out = psi_dnc(&en, wrong, &run).unwrap();
        assert_eq!(out.path, DncPath::FallbackMismatch);
        let starved = crate::model::triple(k, f, 0u32).to_u64().unwrap();
        assert_eq!(
            psi_dnc(&en, starved, &run).unwrap().path,
            DncPath::FallbackBudget
        );
        let fast = fast_path_input(reg, k).unwrap();
        let out = psi_dnc(&en, fast, &run).unwrap();
        assert_eq!(out.path, DncPath::FastPath);
        assert_eq!(out.bit, run.table.value(&Word::from_index(fast)).unwrap());
    }
}
