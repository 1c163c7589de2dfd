//! Step-accounted interpreter.
//!
//! Time model: every transition costs one step, including `ask`, which
//! consults the oracle about the query register's word in that same step.
//! The work tape is one-way infinite (moving left on cell 0 stays put) and
//! initially holds the input followed by blanks.
//!
//! For budgets of at least [`LOOP_CHECK_BUDGET`] the interpreter also looks
//! for proofs of divergence (a repeated configuration, or, with the empty
//! oracle, a translated repetition on fresh blank tape) and returns
//! `BudgetExceeded` as soon as one is found. The outcome is exactly what the
//! full simulation would return; only the work done differs, which
//! [`Execution::executed`] reports.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use super::program::{Move, Program, QueryAction, Symbol, Target};
use crate::model::{Word, WordIndex};

/// Budgets at or above this enable divergence detection.
pub const LOOP_CHECK_BUDGET: u64 = 4096;

/// Random access into a finite oracle prefix.
pub trait Prefix {
    fn prefix_len(&self) -> u64;
    /// Bit at `i < prefix_len()`.
    fn prefix_bit(&self, i: u64) -> bool;
}

impl Prefix for Word {
    fn prefix_len(&self) -> u64 {
        self.len() as u64
    }

    fn prefix_bit(&self, i: u64) -> bool {
        self.bit(i as usize)
    }
}

/// Membership test of a total oracle.
pub trait Membership {
    fn contains(&self, index: &WordIndex) -> bool;
}

impl<F: Fn(&WordIndex) -> bool> Membership for F {
    fn contains(&self, index: &WordIndex) -> bool {
        self(index)
    }
}

/// Answer source for oracle queries.
#[derive(Clone, Copy)]
pub enum OracleView<'a> {
    /// Answers "no" to everything.
    Empty,
    /// Knows bits `0..len`; anything later is unresolved.
    FinitePrefix(&'a dyn Prefix),
    Generated(&'a dyn Membership),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unresolved(WordIndex),
}

impl OracleView<'_> {
    /// Answer for the word spelled by `register`.
    pub fn ask(&self, register: &[bool]) -> Answer {
        match self {
            OracleView::Empty => Answer::No,
            OracleView::FinitePrefix(p) => {
                if register.len() < 63 {
                    let value = register.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
                    let index = (1u64 << register.len()) - 1 + value;
                    if index < p.prefix_len() {
                        return if p.prefix_bit(index) {
                            Answer::Yes
                        } else {
                            Answer::No
                        };
                    }
                }
                Answer::Unresolved(register_index(register))
            }
            OracleView::Generated(m) => {
                if m.contains(&register_index(register)) {
                    Answer::Yes
                } else {
                    Answer::No
                }
            }
        }
    }
}

fn register_index(register: &[bool]) -> WordIndex {
    let mut v = BigUint::one();
    for &b in register {
        v <<= 1u32;
        if b {
            v += 1u32;
        }
    }
    WordIndex(v - 1u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunResult {
    /// Output `bit` after exactly `steps` transitions.
    Halt { bit: bool, steps: u64 },
    /// No halt within the budget; `steps` equals the budget.
    BudgetExceeded { steps: u64 },
    /// The oracle could not answer `query`; `steps` transitions completed before it.
    OracleUnresolved { query: WordIndex, steps: u64 },
}

impl RunResult {
    pub fn halted(&self) -> Option<(bool, u64)> {
        match *self {
            RunResult::Halt { bit, steps } => Some((bit, steps)),
            _ => None,
        }
    }

    pub fn output(&self) -> Option<bool> {
        self.halted().map(|(b, _)| b)
    }
}

/// A run together with the number of transitions actually simulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub result: RunResult,
    pub executed: u64,
}

pub fn run(program: &Program, oracle: &OracleView<'_>, input: &Word, budget: u64) -> RunResult {
    run_metered(program, oracle, input, budget).result
}

pub fn run_plain(program: &Program, input: &Word, budget: u64) -> RunResult {
    run(program, &OracleView::Empty, input, budget)
}

pub fn run_metered(
    program: &Program,
    oracle: &OracleView<'_>,
    input: &Word,
    budget: u64,
) -> Execution {
    Interpreter::new(program, oracle, input, budget >= LOOP_CHECK_BUDGET).run(budget)
}

/// `run_metered` with divergence detection forced on or off.
pub fn run_with_detection(
    program: &Program,
    oracle: &OracleView<'_>,
    input: &Word,
    budget: u64,
    detect: bool,
) -> Execution {
    Interpreter::new(program, oracle, input, detect).run(budget)
}

/// Inputs (as word indices) among `0..=s` on which `program` halts within
/// `s` steps without an oracle.
pub fn we_stage(program: &Program, s: u64) -> BTreeSet<u64> {
    (0..=s)
        .filter(|&x| {
            run_plain(program, &Word::from_index(x), s)
                .halted()
                .is_some()
        })
        .collect()
}

struct Snapshot {
    state: u32,
    head: usize,
    tape: Vec<u8>,
    register: Vec<bool>,
}

struct Interpreter<'p, 'o> {
    program: &'p Program,
    oracle: &'o OracleView<'o>,
    tape: Vec<u8>,
    head: usize,
    state: u32,
    register: Vec<bool>,
    detect: bool,
    // Exact repetition (Brent): compare against a snapshot taken at powers of two.
    snapshot: Option<Snapshot>,
    next_snapshot: u64,
    // Fresh-cell records (position, state), positions increasing.
    frontier: Vec<(usize, u32)>,
    frontier_count: Vec<u32>,
    visited_max: usize,
}

fn trimmed(tape: &[u8]) -> &[u8] {
    let end = tape.iter().rposition(|&c| c != 2).map_or(0, |p| p + 1);
    &tape[..end]
}

impl<'p, 'o> Interpreter<'p, 'o> {
    fn new(program: &'p Program, oracle: &'o OracleView<'o>, input: &Word, detect: bool) -> Self {
        let mut tape: Vec<u8> = input.bits().iter().map(|&b| b as u8).collect();
        if tape.is_empty() {
            tape.push(2);
        }
        let visited_max = tape.len() - 1;
        Interpreter {
            program,
            oracle,
            tape,
            head: 0,
            state: 0,
            register: Vec::new(),
            detect,
            snapshot: None,
            next_snapshot: 1,
            frontier: Vec::new(),
            frontier_count: if detect {
                vec![0; program.states() as usize]
            } else {
                Vec::new()
            },
            visited_max,
        }
    }

    fn run(mut self, budget: u64) -> Execution {
        let translated = self.detect && matches!(self.oracle, OracleView::Empty);
        let mut steps = 0u64;
        while steps < budget {
            let symbol = Symbol::from_code(self.tape[self.head]);
            let t = *self.program.transition(self.state, symbol);
            self.tape[self.head] = t.write.code();
            match t.movement {
                Move::Stay => {}
                Move::Left => self.head = self.head.saturating_sub(1),
                Move::Right => {
                    self.head += 1;
                    if self.head == self.tape.len() {
                        self.tape.push(2);
                    }
                }
            }
            let mut next = t.next;
            match t.query {
                QueryAction::None => {}
                QueryAction::Append(b) => self.register.push(b),
                QueryAction::Ask { on_yes } => {
                    match self.oracle.ask(&self.register) {
                        Answer::Yes => next = on_yes,
                        Answer::No => {}
                        Answer::Unresolved(query) => {
                            return Execution {
                                result: RunResult::OracleUnresolved { query, steps },
                                executed: steps + 1,
                            }
                        }
                    }
                    self.register.clear();
                }
            }
            steps += 1;
            match next {
                Target::Halt(bit) => {
                    return Execution {
                        result: RunResult::Halt { bit, steps },
                        executed: steps,
                    }
                }
                Target::State(q) => self.state = q,
            }
            if self.detect && (self.repeats(steps) || (translated && self.runs_away(t.movement))) {
                return Execution {
                    result: RunResult::BudgetExceeded { steps: budget },
                    executed: steps,
                };
            }
        }
        Execution {
            result: RunResult::BudgetExceeded { steps: budget },
            executed: steps,
        }
    }

    fn repeats(&mut self, steps: u64) -> bool {
        if let Some(s) = &self.snapshot {
            if s.state == self.state
                && s.head == self.head
                && s.register == self.register
                && trimmed(&s.tape) == trimmed(&self.tape)
            {
                return true;
            }
        }
        if steps == self.next_snapshot {
            self.snapshot = Some(Snapshot {
                state: self.state,
                head: self.head,
                tape: self.tape.clone(),
                register: self.register.clone(),
            });
            self.next_snapshot = self.next_snapshot.saturating_mul(2);
        }
        false
    }

    /// With answers fixed to "no", a machine that enters the same state on
    /// two fresh cells, never stepping left of the first in between, repeats
    /// that stretch forever on ever-fresh tape.
    fn runs_away(&mut self, movement: Move) -> bool {
        match movement {
            Move::Left => {
                while let Some(&(pos, q)) = self.frontier.last() {
                    if pos <= self.head {
                        break;
                    }
                    self.frontier.pop();
                    self.frontier_count[q as usize] -= 1;
                }
                false
            }
            Move::Right if self.head > self.visited_max => {
                self.visited_max = self.head;
                let q = self.state as usize;
                if self.frontier_count[q] > 0 {
                    return true;
                }
                self.frontier.push((self.head, self.state));
                self.frontier_count[q] += 1;
                false
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::library;
    use crate::machine::program::{Symbol as Sym, Transition};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn oracle_bit_reads_prefix() {
        let p = library::oracle_bit();
        let sigma = w("10");
        let view = OracleView::FinitePrefix(&sigma);
        // x = "0" has index 1 and sigma(1) = 0; one append plus one ask.
        assert_eq!(
            run(&p, &view, &w("0"), 100),
            RunResult::Halt {
                bit: false,
                steps: 2
            }
        );
        let short = w("1");
        assert_eq!(
            run(&p, &OracleView::FinitePrefix(&short), &w("0"), 100),
            RunResult::OracleUnresolved {
                query: 1.into(),
                steps: 1
            }
        );
    }

    #[test]
    fn oracle_bit_step_count_is_length_plus_one() {
        let p = library::oracle_bit();
        let all_ones = |_: &WordIndex| true;
        for len in 0..12 {
            for x in Word::all_of_length(len).take(5) {
                assert_eq!(
                    run(&p, &OracleView::Generated(&all_ones), &x, 1000),
                    RunResult::Halt {
                        bit: true,
                        steps: len as u64 + 1
                    }
                );
            }
        }
    }

    #[test]
    fn zero_budget_never_runs() {
        for named in library::all() {
            assert_eq!(
                run(&named.program, &OracleView::Empty, &w("0101"), 0),
                RunResult::BudgetExceeded { steps: 0 }
            );
        }
    }

    #[test]
    fn plain_runs() {
        assert_eq!(
            run_plain(&library::const0(), &w("110"), 10),
            RunResult::Halt {
                bit: false,
                steps: 1
            }
        );
        assert_eq!(
            run_plain(&library::loop_forever(), &w("1"), 77),
            RunResult::BudgetExceeded { steps: 77 }
        );
        assert_eq!(
            run_plain(&library::parity(), &w("11"), 100),
            RunResult::Halt {
                bit: false,
                steps: 3
            }
        );
        assert_eq!(
            run_plain(&library::parity(), &w("1101"), 100),
            RunResult::Halt {
                bit: true,
                steps: 5
            }
        );
        assert_eq!(
            run_plain(&library::last_bit(), &w("1101"), 100),
            RunResult::Halt {
                bit: true,
                steps: 6
            }
        );
        assert_eq!(
            run_plain(&library::last_bit(), &w(""), 100),
            RunResult::Halt {
                bit: false,
                steps: 2
            }
        );
    }

    #[test]
    fn ask_clears_register() {
        // Append "1", ask (yes), then ask again: the second ask sees "" if the
        // register was cleared, "1" otherwise.
        let uniform = |query, next| {
            Sym::ALL
                .iter()
                .map(move |&s| Transition::new(s, Move::Stay, query, next))
                .collect::<Vec<_>>()
        };
        let mut table = uniform(QueryAction::Append(true), Target::State(1));
        table.extend(uniform(
            QueryAction::Ask {
                on_yes: Target::State(2),
            },
            Target::Halt(false),
        ));
        table.extend(uniform(
            QueryAction::Ask {
                on_yes: Target::Halt(true),
            },
            Target::Halt(false),
        ));
        let p = Program::new(3, table).unwrap();
        let only_one = |i: &WordIndex| *i == WordIndex::from(2);
        assert_eq!(
            run(&p, &OracleView::Generated(&only_one), &w(""), 10),
            RunResult::Halt {
                bit: false,
                steps: 3
            }
        );
    }

    #[test]
    fn we_stage_examples() {
        for s in 0..10 {
            assert!(we_stage(&library::loop_forever(), s).is_empty());
        }
        assert_eq!(
            we_stage(&library::halt_all(), 3),
            BTreeSet::from([0, 1, 2, 3])
        );
        for s in 0..20 {
            assert!(we_stage(&library::parity(), s).is_subset(&we_stage(&library::parity(), s + 1)));
        }
    }

    #[test]
    fn detection_cuts_loops_short() {
        let e = run_metered(
            &library::loop_forever(),
            &OracleView::Empty,
            &w("01"),
            u64::MAX,
        );
        assert_eq!(e.result, RunResult::BudgetExceeded { steps: u64::MAX });
        assert!(e.executed < 10);
        let e = run_metered(
            &library::runaway(),
            &OracleView::Empty,
            &w("0110"),
            u64::MAX,
        );
        assert_eq!(e.result, RunResult::BudgetExceeded { steps: u64::MAX });
        assert!(e.executed < 20);
    }

    pub(crate) fn arb_program() -> impl Strategy<Value = Program> {
        (1u32..4).prop_flat_map(|n| {
            let target = prop_oneof![
                6 => (0..n).prop_map(Target::State),
                1 => any::<bool>().prop_map(Target::Halt),
            ];
            let transition = (0u8..3, 0usize..3, 0u8..4, target.clone(), target).prop_map(
                |(w, m, a, next, yes)| {
                    let query = match a {
                        0 => QueryAction::None,
                        1 => QueryAction::Append(false),
                        2 => QueryAction::Append(true),
                        _ => QueryAction::Ask { on_yes: yes },
                    };
                    Transition::new(Sym::from_code(w), Move::ALL[m], query, next)
                },
            );
            proptest::collection::vec(transition, 3 * n as usize)
                .prop_map(move |table| Program::new(n, table).unwrap())
        })
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(any::<bool>(), 0..max).prop_map(Word::from_bits)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn deterministic_and_budget_monotone(p in arb_program(), x in arb_word(6), sigma in arb_word(40), b in 0u64..200, extra in 0u64..300) {
            let view = OracleView::FinitePrefix(&sigma);
            let r1 = run(&p, &view, &x, b);
            prop_assert_eq!(&r1, &run(&p, &view, &x, b));
            if let RunResult::Halt { .. } = r1 {
                prop_assert_eq!(&r1, &run(&p, &view, &x, b + extra));
            }
            if let RunResult::BudgetExceeded { steps } = r1 {
                prop_assert_eq!(steps, b);
            }
        }

        #[test]
        fn prefix_coherence(p in arb_program(), x in arb_word(5), sigma in arb_word(30), tail in arb_word(40), b in 0u64..150) {
            let r = run(&p, &OracleView::FinitePrefix(&sigma), &x, b);
            if let RunResult::Halt { .. } = r {
                let longer = sigma.concat(&tail);
                prop_assert_eq!(&r, &run(&p, &OracleView::FinitePrefix(&longer), &x, b));
                // Any total oracle extending sigma: here sigma, then tail, then ones.
                let z = |i: &WordIndex| match i.to_u64() {
                    Some(i) if (i as usize) < longer.len() => longer.bit(i as usize),
                    _ => true,
                };
                prop_assert_eq!(&r, &run(&p, &OracleView::Generated(&z), &x, b));
            }
        }

        #[test]
        fn detection_never_changes_outcomes(p in arb_program(), x in arb_word(5), sigma in arb_word(20), b in 0u64..3000) {
            let view = OracleView::FinitePrefix(&sigma);
            let plain = run_with_detection(&p, &view, &x, b, false);
            let checked = run_with_detection(&p, &view, &x, b, true);
            prop_assert_eq!(&plain.result, &checked.result);
            prop_assert!(checked.executed <= plain.executed);
            let plain = run_with_detection(&p, &OracleView::Empty, &x, b, false);
            let checked = run_with_detection(&p, &OracleView::Empty, &x, b, true);
            prop_assert_eq!(plain.result, checked.result);
        }
    }
}
