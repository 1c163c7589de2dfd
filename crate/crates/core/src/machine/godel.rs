//! Total Gödel numbering of programs with padding.
//!
//! Index `e` splits as `⟨code, pad⟩`; the pad is ignored, so every program
//! has infinitely many indices. `code = 0` is the looping machine. Otherwise
//! `code - 1 = ⟨states - 1, body⟩` and `body` is read as mixed-radix digits,
//! least significant first, transition by transition in table order:
//! write (3), move (3), query action (4), next target (`states + 2`), and a
//! second target for `ask`. Targets `0..states` are states, then `h0`, `h1`.
//! A body with digits left over, or an absurd state count, decodes to the
//! looping machine, so decoding never fails.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::library;
use super::program::{Move, Program, QueryAction, Symbol, Target, Transition};
use crate::model::{pair, unpair, PairCode};

/// Programs with more states than this decode to the looping machine.
pub const MAX_DECODED_STATES: u64 = 1024;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MachineIndex(pub BigUint);

impl From<u64> for MachineIndex {
    fn from(v: u64) -> Self {
        MachineIndex(BigUint::from(v))
    }
}

impl fmt::Display for MachineIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn target_digit(target: Target, states: u32) -> u64 {
    match target {
        Target::State(q) => q as u64,
        Target::Halt(false) => states as u64,
        Target::Halt(true) => states as u64 + 1,
    }
}

fn digit_target(d: u64, states: u32) -> Target {
    match d.checked_sub(states as u64) {
        None => Target::State(d as u32),
        Some(0) => Target::Halt(false),
        Some(_) => Target::Halt(true),
    }
}

/// Digits of one program, paired with their radices, least significant first.
fn digits(p: &Program) -> Vec<(u64, u64)> {
    let n = p.states();
    let targets = n as u64 + 2;
    let mut out = Vec::new();
    for t in p.transitions() {
        out.push((t.write.code() as u64, 3));
        out.push((
            Move::ALL.iter().position(|&m| m == t.movement).unwrap() as u64,
            3,
        ));
        let (action, yes) = match t.query {
            QueryAction::None => (0, None),
            QueryAction::Append(false) => (1, None),
            QueryAction::Append(true) => (2, None),
            QueryAction::Ask { on_yes } => (3, Some(on_yes)),
        };
        out.push((action, 4));
        out.push((target_digit(t.next, n), targets));
        if let Some(y) = yes {
            out.push((target_digit(y, n), targets));
        }
    }
    out
}

fn code_of(p: &Program) -> BigUint {
    let mut body = BigUint::zero();
    for (digit, radix) in digits(p).into_iter().rev() {
        body = body * radix + digit;
    }
    pair(p.states() as u64 - 1, body).0 + 1u32
}

/// The canonical (pad 0) index of a program.
pub fn assemble(p: &Program) -> MachineIndex {
    MachineIndex(pair(code_of(p), 0u32).0)
}

/// Another index of the same program.
pub fn pad(e: &MachineIndex, padding: u64) -> MachineIndex {
    let (code, _) = unpair(&PairCode(e.0.clone()));
    MachineIndex(pair(code, padding).0)
}

pub fn decode_program(e: &MachineIndex) -> Program {
    let (code, _pad) = unpair(&PairCode(e.0.clone()));
    decode_code(&code).unwrap_or_else(library::loop_forever)
}

fn decode_code(code: &BigUint) -> Option<Program> {
    if code.is_zero() {
        return None;
    }
    let (states_minus_one, mut body) = unpair(&PairCode(code - 1u32));
    let states = states_minus_one.to_u64()? + 1;
    if states > MAX_DECODED_STATES {
        return None;
    }
    let n = states as u32;
    let mut take = |radix: u64| -> u64 {
        let (q, r) = body.div_rem(&BigUint::from(radix));
        body = q;
        r.to_u64().unwrap()
    };
    let mut table = Vec::with_capacity(3 * n as usize);
    for _ in 0..3 * n {
        let write = Symbol::from_code(take(3) as u8);
        let movement = Move::ALL[take(3) as usize];
        let action = take(4);
        let next = digit_target(take(n as u64 + 2), n);
        let query = match action {
            0 => QueryAction::None,
            1 => QueryAction::Append(false),
            2 => QueryAction::Append(true),
            _ => QueryAction::Ask {
                on_yes: digit_target(take(n as u64 + 2), n),
            },
        };
        table.push(Transition::new(write, movement, query, next));
    }
    if !body.is_zero() {
        return None;
    }
    Program::new(n, table).ok()
}
