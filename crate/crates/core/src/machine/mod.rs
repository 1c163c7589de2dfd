//! Oracle Turing machines: program format, Gödel numbering, interpreter.

mod enumeration;
mod godel;
pub mod library;
mod program;
mod vm;

pub use enumeration::Enumeration;
pub use godel::{assemble, decode_program, pad, MachineIndex, MAX_DECODED_STATES};
pub use program::{
    format_corpus, parse_corpus, Move, NamedProgram, Program, QueryAction, Symbol, Target,
    Transition,
};
pub use vm::{
    run, run_metered, run_plain, run_with_detection, we_stage, Answer, Execution, Membership,
    OracleView, Prefix, RunResult, LOOP_CHECK_BUDGET,
};
