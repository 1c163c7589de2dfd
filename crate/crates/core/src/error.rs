use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid character {0:?} in binary word")]
    BadWordChar(char),
    #[error("projection index {0} is outside 1..=3")]
    ProjectionOutOfRange(u8),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ProgramError {
    #[error("program must declare at least one state")]
    NoStates,
    #[error("transition table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("transition for state {state} targets undeclared state {target}")]
    BadTarget { state: u32, target: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl ProgramError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        ProgramError::Parse {
            line,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SparseError {
    #[error("base prefix {0} is not a prefix of any sparse oracle")]
    NotSparse(String),
    #[error("base prefix has length {base} which exceeds the target length {target}")]
    BaseTooLong { base: u64, target: u64 },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CeError {
    #[error("dump interval [{x}, {t}] is empty")]
    EmptyInterval { x: u64, t: u64 },
    #[error("stage {stage}: dump starting at {from} violates restraint {restraint}")]
    RestraintViolated {
        stage: u64,
        from: u64,
        restraint: u64,
    },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BlumError {
    #[error("advice for k={k} misses index {index}, diagonalized at length {length}")]
    AdviceTooOptimistic { k: u64, index: u64, length: usize },
    #[error("input of length {len} is not past the phase-one cutoff {cutoff}")]
    BeforeCutoff { len: usize, cutoff: usize },
    #[error("phase one did not retire every advised index by length {len}")]
    PhaseOneIncomplete { len: usize },
    #[error("length {len} is beyond the table horizon {horizon}")]
    BeyondHorizon { len: usize, horizon: usize },
    #[error("oracle prefix has {have} bits, block {block} needs {need}")]
    ShortOraclePrefix {
        have: usize,
        need: usize,
        block: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
