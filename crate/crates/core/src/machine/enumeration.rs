use std::sync::Arc;

use super::godel::decode_program;
use super::program::{NamedProgram, Program};

/// The effective list of machines the constructions sweep: planted programs
/// first, then the Gödel numbering, so index `planted.len() + j` is
/// `decode_program(j)`.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    planted: Vec<NamedProgram>,
}

impl Enumeration {
    pub fn new(planted: Vec<NamedProgram>) -> Self {
        Enumeration { planted }
    }

    /// Plain Gödel enumeration.
    pub fn godel() -> Self {
        Enumeration::default()
    }

    pub fn planted(&self) -> &[NamedProgram] {
        &self.planted
    }

    pub fn program(&self, e: u64) -> Arc<Program> {
        match self.planted.get(e as usize) {
            Some(p) => Arc::new(p.program.clone()),
            None => Arc::new(decode_program(&(e - self.planted.len() as u64).into())),
        }
    }

    /// Name for traces: the planted name, or `godel:<j>`.
    pub fn name(&self, e: u64) -> String {
        match self.planted.get(e as usize) {
            Some(p) => p.name.clone(),
            None => format!("godel:{}", e - self.planted.len() as u64),
        }
    }

    /// Programs `0..count`, decoded once.
    pub fn programs(&self, count: u64) -> Vec<Arc<Program>> {
        (0..count).map(|e| self.program(e)).collect()
    }
}
