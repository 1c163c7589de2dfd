//! Dump construction of a c.e. set: candidate prefixes, L and P strategies,
//! confirmation of pending dumps, and the priority scheduler.

mod ceset;
mod scheduler;
mod strategy;

pub use ceset::{candidate_prefixes, candidates_from, realize, CeSet, DumpRecord};
pub use scheduler::{
    ce_run, CeAction, CeEvent, CeRun, CommitRecord, ConfirmCheck, FiniteSet, Strategy,
    REPLAY_BUDGET,
};
pub use strategy::{
    confirm_pending, l_strategy_step, p_strategy_step, parse_requirements, Confirmation, LState,
    LStatus, LStepReport, PAction, PState, PStatus, PsiEntry, Requirement,
};
