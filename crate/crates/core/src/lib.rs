//! Oracle Turing machine workbench for low-for-speed constructions at finite
//! horizons: the sparse-oracle simulator, finite-extension and dump
//! constructions, the diagonal set R with its advice speed-up, and the block
//! functional with exact error measures.

pub mod blum;
pub mod dump;
pub mod error;
pub mod finite_ext;
pub mod machine;
pub mod model;
pub mod sparse;
pub mod trace;

pub use error::{BlumError, CeError, ModelError, ProgramError, SparseError};
pub use machine::{
    assemble, decode_program, run, run_plain, Enumeration, MachineIndex, NamedProgram, OracleView,
    Program, RunResult,
};
pub use model::{Word, WordIndex};
pub use trace::{Trace, TraceEvent};
