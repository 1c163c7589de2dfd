//! Finite-extension construction of a sparse oracle, together with the
//! simulator Ψ that runs a machine on every sparse candidate at once.
//!
//! Stage `s + 1` handles the pair `(e, i) = unpair(s)`: it looks for a
//! sparse extension τ of σ_s and an input `n` on which `Φ_e^τ` and `R_i`
//! both converge with different values. Failing that within the budget it
//! appends a single zero.

use crate::machine::{
    run, run_metered, run_plain, run_with_detection, Enumeration, OracleView, Program,
};
use crate::model::{unpair_u64, Word};
use crate::sparse::{enumerate_sparse_prefixes, is_sparse_position, SparsePrefix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeOutcome {
    DiagonalFound {
        tau: SparsePrefix,
        n: u64,
        phi_value: bool,
        r_value: bool,
    },
    /// No witness within the budget.
    FallbackBudgetLimited,
    /// σ_s is already at least as long as the budget, so no strict extension
    /// was searched.
    FallbackNoWitnessPossible,
}

impl FeOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            FeOutcome::DiagonalFound { .. } => "diagonal-found",
            FeOutcome::FallbackBudgetLimited => "fallback-budget-limited",
            FeOutcome::FallbackNoWitnessPossible => "fallback-no-witness-possible",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeStageRecord {
    /// The stage number `s + 1`.
    pub stage: u64,
    pub e: u64,
    pub i: u64,
    pub outcome: FeOutcome,
    pub sigma_len: u64,
    /// Cost Ψ pays on the probe inputs over σ_{s+1} (fallback stages only).
    pub psi_steps: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeState {
    pub sigma: SparsePrefix,
    /// Number of completed stages.
    pub stage: u64,
    pub log: Vec<FeStageRecord>,
    /// σ after each stage; `history[0]` is σ_0 = ε.
    pub history: Vec<SparsePrefix>,
}

impl FeState {
    pub fn new() -> Self {
        FeState {
            history: vec![SparsePrefix::empty()],
            ..FeState::default()
        }
    }
}

/// Inputs Ψ is run on at every fallback stage to fill `psi_steps`.
pub const PSI_PROBES: u64 = 4;

/// Search for a diagonal witness `(τ, n)` with `|σ| < |τ| = t ≤ budget`,
/// shortest τ first, then lexicographic τ, then smallest `n ≤ t`.
pub fn find_diagonal(
    phi: &Program,
    r: &Program,
    sigma: &SparsePrefix,
    budget: u64,
) -> Option<(SparsePrefix, u64, bool, bool)> {
    let first = sigma.len() + 1;
    if first > budget {
        return None;
    }
    // R_i(n) converges within t steps iff the budget-`budget` run halts in ≤ t.
    let r_runs: Vec<Option<(bool, u64)>> = (0..=budget)
        .map(|n| run_plain(r, &Word::from_index(n), budget).halted())
        .collect();
    for t in first..=budget {
        for tau in enumerate_sparse_prefixes(t, sigma).expect("σ is sparse and shorter than t") {
            let view = OracleView::FinitePrefix(&tau);
            for n in 0..=t {
                let Some((r_value, r_steps)) = r_runs[n as usize] else {
                    continue;
                };
                if r_steps > t {
                    continue;
                }
                if let Some(phi_value) = run(phi, &view, &Word::from_index(n), t).output() {
                    if phi_value != r_value {
                        return Some((tau, n, phi_value, r_value));
                    }
                }
            }
        }
    }
    None
}

pub fn fe_stage(mut state: FeState, en: &Enumeration, budget: u64) -> FeState {
    assert!(budget >= 1, "finite-extension budget must be positive");
    let (e, i) = unpair_u64(state.stage);
    let phi = en.program(e);
    let r = en.program(i);
    let outcome = match find_diagonal(&phi, &r, &state.sigma, budget) {
        Some((tau, n, phi_value, r_value)) => {
            state.sigma = tau.clone();
            FeOutcome::DiagonalFound {
                tau,
                n,
                phi_value,
                r_value,
            }
        }
        None => {
            let searched = state.sigma.len() < budget;
            state.sigma = state.sigma.extend_zeros(1);
            if searched {
                FeOutcome::FallbackBudgetLimited
            } else {
                FeOutcome::FallbackNoWitnessPossible
            }
        }
    };
    let psi_steps = match outcome {
        FeOutcome::DiagonalFound { .. } => 0,
        _ => (0..PSI_PROBES)
            .map(|n| psi_simulate(&phi, &state.sigma, n, budget).psi_steps())
            .sum(),
    };
    state.stage += 1;
    state.log.push(FeStageRecord {
        stage: state.stage,
        e,
        i,
        outcome,
        sigma_len: state.sigma.len(),
        psi_steps,
    });
    state.history.push(state.sigma.clone());
    state
}

/// Budget used when re-checking a finished construction.
pub const REPLAY_BUDGET: u64 = 1 << 16;

impl FeState {
    /// Re-verifies the log against the final σ and lists what fails.
    pub fn check_invariants(&self, en: &Enumeration) -> Vec<String> {
        let mut bad = Vec::new();
        for (s, pair) in self.history.windows(2).enumerate() {
            if !pair[0].is_prefix_of(&pair[1]) || pair[0].len() >= pair[1].len() {
                bad.push(format!(
                    "stage {}: σ does not strictly extend the previous σ",
                    s + 1
                ));
            }
        }
        if self
            .history
            .iter()
            .any(|p| p.ones().iter().any(|&q| !is_sparse_position(q)))
        {
            bad.push("a σ has a one outside the sparse positions".to_string());
        }
        for rec in &self.log {
            let FeOutcome::DiagonalFound {
                n,
                phi_value,
                r_value,
                ..
            } = rec.outcome
            else {
                continue;
            };
            if phi_value == r_value {
                bad.push(format!("stage {}: recorded values agree", rec.stage));
            }
            let input = Word::from_index(n);
            let phi = run_with_detection(
                &en.program(rec.e),
                &OracleView::FinitePrefix(&self.sigma),
                &input,
                REPLAY_BUDGET,
                true,
            )
            .result
            .output();
            let r = run_with_detection(
                &en.program(rec.i),
                &OracleView::Empty,
                &input,
                REPLAY_BUDGET,
                true,
            )
            .result
            .output();
            if phi != Some(phi_value) || r != Some(r_value) {
                bad.push(format!(
                    "stage {}: diagonal at n={n} does not replay",
                    rec.stage
                ));
            }
        }
        bad
    }
}

pub fn fe_run(en: &Enumeration, stages: u64, budget: u64) -> FeState {
    (0..stages).fold(FeState::new(), |state, _| fe_stage(state, en, budget))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiOutcome {
    Found {
        value: bool,
        winner: SparsePrefix,
        /// Steps the winning oracle computation took.
        phi_steps: u64,
        /// Simulator cost: simulated steps summed over every candidate and stage.
        psi_steps: u64,
        /// Outer stage at which the simulation converged.
        stage: u64,
    },
    NotFound {
        psi_steps: u64,
    },
}

impl PsiOutcome {
    pub fn psi_steps(&self) -> u64 {
        match *self {
            PsiOutcome::Found { psi_steps, .. } | PsiOutcome::NotFound { psi_steps } => psi_steps,
        }
    }
}

/// Candidate length at outer stage `t`: a run of `t` steps can only ask
/// about words shorter than `t`, whose indices lie below `2^t - 1`.
pub fn candidate_length(t: u64, base: &SparsePrefix) -> u64 {
    let reach = if t >= 64 { u64::MAX } else { (1u64 << t) - 1 };
    reach.max(base.len())
}

/// Ψ on input `n`: at outer stage `t = 1, 2, ...` run `Φ_e(n)` for `t`
/// steps on every sparse extension of `base` long enough to answer every
/// query such a run can make, and return the first convergence (fastest,
/// then lexicographically least candidate).
pub fn psi_simulate(phi: &Program, base: &SparsePrefix, n: u64, max_stage: u64) -> PsiOutcome {
    let input = Word::from_index(n);
    let mut psi_steps = 0u64;
    for t in 1..=max_stage {
        let len = candidate_length(t, base);
        let mut best: Option<(u64, bool, SparsePrefix)> = None;
        for tau in enumerate_sparse_prefixes(len, base).expect("candidate length covers base") {
            let exec = run_metered(phi, &OracleView::FinitePrefix(&tau), &input, t);
            psi_steps += exec.executed.max(1);
            if let Some((bit, steps)) = exec.result.halted() {
                if best.as_ref().is_none_or(|&(s, _, _)| steps < s) {
                    best = Some((steps, bit, tau));
                }
            }
        }
        if let Some((phi_steps, value, winner)) = best {
            return PsiOutcome::Found {
                value,
                winner,
                phi_steps,
                psi_steps,
                stage: t,
            };
        }
    }
    PsiOutcome::NotFound { psi_steps }
}

/// The polynomial bounding Ψ's cost in terms of the oracle computation's
/// running time: `t^3 + t^2 + t`.
pub fn psi_cost_bound(phi_steps: u64) -> u128 {
    let t = phi_steps as u128;
    t * t * t + t * t + t
}
