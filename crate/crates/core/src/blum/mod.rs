//! The diagonal set R, its speed-up with advice, and the block functional
//! whose error sets have measure at most `2^-n`.

mod construction;
mod schedule;
mod schnorr;
mod speedup;

pub use construction::{
    budgeted_run, build_r, search_length, BlumRun, Cost, DiagRecord, DiagRegistry, Machines,
    RTable, Winner,
};
pub use schedule::{BudgetSchedule, STEP_CAP};
pub use schnorr::{block, block_start, cn_measure, schnorr_psi};
pub use speedup::{
    advice, avoider_cost, f_avoider, fast_path_input, fast_r_with_advice, psi_dnc, speedup_bound,
    AdviceList, DncOutcome, DncPath, FastR, SPEEDUP_C, SPEEDUP_D,
};
