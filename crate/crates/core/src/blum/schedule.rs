//! Step budgets for the diagonal set R.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Hard ceiling on steps actually simulated per run. Budgets above it are
/// only reachable because divergence detection settles the run earlier;
/// runs that hit the ceiling undecided are counted, never hidden.
pub const STEP_CAP: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BudgetSchedule {
    /// `Φ_e(x)` may use up to `2^|x|` steps, for every `e`.
    Simple2Exp,
    /// `Φ_i(x)` must converge in fewer than `f^{|x| - i}(|x|)` steps, `f(n) = n²`.
    IteratedSquare,
}

impl BudgetSchedule {
    pub fn name(&self) -> &'static str {
        match self {
            BudgetSchedule::Simple2Exp => "2exp",
            BudgetSchedule::IteratedSquare => "square",
        }
    }

    pub fn f(n: &BigUint) -> BigUint {
        n * n
    }

    /// `f^{times}(n)`.
    pub fn iterate(times: usize, n: usize) -> BigUint {
        (0..times).fold(BigUint::from(n), |v, _| Self::f(&v))
    }

    /// Largest step count at which a halt of `Φ_e` on a length-`n` input
    /// counts, or `None` if none does (and `e > n` is never simulated).
    pub fn limit(&self, e: u64, n: usize) -> Option<BigUint> {
        match self {
            BudgetSchedule::Simple2Exp => Some(BigUint::one() << n),
            BudgetSchedule::IteratedSquare => {
                let e = usize::try_from(e).ok().filter(|&e| e <= n)?;
                let bound = Self::iterate(n - e, n);
                (!bound.is_zero()).then(|| bound - 1u32)
            }
        }
    }

    /// The budget handed to the interpreter for a given limit.
    pub fn run_budget(limit: &BigUint) -> u64 {
        limit.to_u64().map_or(STEP_CAP, |l| l.min(STEP_CAP))
    }
}

impl fmt::Display for BudgetSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BudgetSchedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "2exp" => Ok(BudgetSchedule::Simple2Exp),
            "square" => Ok(BudgetSchedule::IteratedSquare),
            other => Err(format!(
                "unknown schedule {other:?}; expected 2exp or square"
            )),
        }
    }
}
