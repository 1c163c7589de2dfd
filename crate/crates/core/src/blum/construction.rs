//! The diagonal set R: at each length at most one string is made to
//! disagree with some still-active machine.
//!
//! At length `n` the active indices `e ≤ n` are tried smallest first, and
//! for each the length-`n` strings in lexicographic order; the first pair
//! `(e, x)` where `Φ_e(x)` converges within its budget wins: `R(x) = 1 − Φ_e(x)`
//! and `e` is retired. Every other string of that length is out of R.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::schedule::BudgetSchedule;
use crate::error::BlumError;
use crate::machine::{run_with_detection, Enumeration, OracleView, Program, RunResult};
use crate::model::{index_to_word, word_to_index, Word, WordIndex};

/// Where machine `i` was diagonalized against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagRecord {
    pub x: Word,
    /// `Φ_i(x)`; R takes the other value.
    pub phi_bit: bool,
    /// Steps `Φ_i(x)` took.
    pub steps: u64,
}

/// The map θ together with the horizon it was computed to.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiagRegistry {
    records: BTreeMap<u64, DiagRecord>,
    horizon: usize,
}

impl DiagRegistry {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn records(&self) -> &BTreeMap<u64, DiagRecord> {
        &self.records
    }

    pub fn theta(&self, i: u64) -> Option<&Word> {
        self.records.get(&i).map(|r| &r.x)
    }

    /// Still active when length `n` is processed.
    pub fn active_at(&self, e: u64, n: usize) -> bool {
        self.theta(e).is_none_or(|x| x.len() >= n)
    }

    /// Index retired at length `n`, if any.
    pub fn retired_at(&self, n: usize) -> Option<u64> {
        self.records
            .iter()
            .find(|(_, r)| r.x.len() == n)
            .map(|(&i, _)| i)
    }

    /// `i x_len x_value bit` per record, `bit` being `Φ_i(x)`.
    pub fn to_text(&self) -> String {
        let mut out = format!("# horizon {}\n", self.horizon);
        for (i, r) in &self.records {
            let value = word_to_index(&r.x).0 - ((BigUint::from(1u32) << r.x.len()) - 1u32);
            writeln!(out, "{i} {} {value} {}", r.x.len(), r.phi_bit as u8).unwrap();
        }
        out
    }

    /// Inverse of [`to_text`](Self::to_text). Step counts are not stored and read back as 0.
    pub fn from_text(text: &str) -> Result<Self, BlumError> {
        let mut reg = DiagRegistry::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(h) = line.strip_prefix("# horizon ") {
                reg.horizon = h.trim().parse().map_err(|_| parse_err(n, "bad horizon"))?;
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let [i, len, value, bit] = f[..] else {
                return Err(parse_err(n, "expected `i x_len x_value bit`"));
            };
            let i: u64 = i.parse().map_err(|_| parse_err(n, "bad index"))?;
            let len: usize = len.parse().map_err(|_| parse_err(n, "bad length"))?;
            let value: BigUint = value.parse().map_err(|_| parse_err(n, "bad value"))?;
            if value.bits() > len as u64 {
                return Err(parse_err(n, "value does not fit the length"));
            }
            let phi_bit = match bit {
                "0" => false,
                "1" => true,
                _ => return Err(parse_err(n, "bit must be 0 or 1")),
            };
            let x = Word::from_bits((0..len).map(|j| value.bit((len - 1 - j) as u64)).collect());
            if reg
                .records
                .insert(
                    i,
                    DiagRecord {
                        x,
                        phi_bit,
                        steps: 0,
                    },
                )
                .is_some()
            {
                return Err(parse_err(n, "index recorded twice"));
            }
        }
        Ok(reg)
    }
}

fn parse_err(line: usize, message: &str) -> BlumError {
    BlumError::Parse {
        line: line + 1,
        message: message.to_string(),
    }
}

/// R on lengths `0..=horizon`: the one member of each length, if any.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RTable {
    ones: Vec<Option<Word>>,
}

impl RTable {
    pub fn horizon(&self) -> usize {
        self.ones.len().saturating_sub(1)
    }

    pub fn lengths(&self) -> usize {
        self.ones.len()
    }

    pub fn one_at(&self, n: usize) -> Option<&Word> {
        self.ones.get(n).and_then(Option::as_ref)
    }

    pub fn value(&self, x: &Word) -> Result<bool, BlumError> {
        match self.ones.get(x.len()) {
            Some(one) => Ok(one.as_ref() == Some(x)),
            None => Err(BlumError::BeyondHorizon {
                len: x.len(),
                horizon: self.horizon(),
            }),
        }
    }

    /// `n <word index>` or `n none`, one line per length.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, one) in self.ones.iter().enumerate() {
            match one {
                Some(x) => writeln!(out, "{n} {}", word_to_index(x)).unwrap(),
                None => writeln!(out, "{n} none").unwrap(),
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, BlumError> {
        let mut ones = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (len, pos) = line
                .split_once(' ')
                .ok_or_else(|| parse_err(n, "expected `n position`"))?;
            let len: usize = len.parse().map_err(|_| parse_err(n, "bad length"))?;
            if len != ones.len() {
                return Err(parse_err(n, "lengths must be listed in order from 0"));
            }
            ones.push(match pos.trim() {
                "none" => None,
                p => {
                    let x = index_to_word(&WordIndex(
                        p.parse().map_err(|_| parse_err(n, "bad position"))?,
                    ));
                    if x.len() != len {
                        return Err(parse_err(n, "position lies outside this length"));
                    }
                    Some(x)
                }
            });
        }
        Ok(RTable { ones })
    }
}

/// The winning pair at one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Winner {
    pub e: u64,
    pub x: Word,
    pub phi_bit: bool,
    pub steps: u64,
}

/// Accounting for a search: the steps the construction as stated pays
/// (a converging run costs its running time, any other run its full
/// limit) next to the steps the interpreter really simulated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cost {
    pub accounted: BigUint,
    pub executed: u64,
    pub runs: u64,
    /// Runs stopped at the interpreter's step ceiling without a verdict.
    pub undecided: u64,
}

impl Cost {
    pub fn add(&mut self, other: &Cost) {
        self.accounted += &other.accounted;
        self.executed += other.executed;
        self.runs += other.runs;
        self.undecided += other.undecided;
    }
}

/// Programs of an enumeration, decoded on first use.
pub struct Machines<'a> {
    en: &'a Enumeration,
    cache: Vec<Arc<Program>>,
}

impl<'a> Machines<'a> {
    pub fn new(en: &'a Enumeration) -> Self {
        Machines {
            en,
            cache: Vec::new(),
        }
    }

    pub fn get(&mut self, e: u64) -> Arc<Program> {
        while self.cache.len() as u64 <= e {
            let next = self.cache.len() as u64;
            self.cache.push(self.en.program(next));
        }
        self.cache[e as usize].clone()
    }
}

/// Run `Φ_e(x)` under the schedule's limit; `Some((bit, steps))` on a counted halt.
pub fn budgeted_run(
    program: &Program,
    schedule: BudgetSchedule,
    e: u64,
    x: &Word,
    cost: &mut Cost,
) -> Option<(bool, u64)> {
    let limit = schedule.limit(e, x.len())?;
    if limit.is_zero() {
        return None;
    }
    let budget = BudgetSchedule::run_budget(&limit);
    let exec = run_with_detection(program, &OracleView::Empty, x, budget, true);
    cost.runs += 1;
    cost.executed += exec.executed;
    match exec.result {
        RunResult::Halt { bit, steps } => {
            cost.accounted += steps;
            Some((bit, steps))
        }
        _ => {
            cost.accounted += &limit;
            if exec.executed >= budget && limit.to_u64().is_none_or(|l| l > budget) {
                cost.undecided += 1;
            }
            None
        }
    }
}

/// Search length `n` over `indices` (ascending) and strings in lexicographic order.
pub fn search_length(
    machines: &mut Machines<'_>,
    schedule: BudgetSchedule,
    n: usize,
    indices: impl IntoIterator<Item = u64>,
    cost: &mut Cost,
) -> Option<Winner> {
    for e in indices {
        if e > n as u64 {
            break;
        }
        if schedule.limit(e, n).is_none_or(|l| l.is_zero()) {
            continue;
        }
        let program = machines.get(e);
        for x in Word::all_of_length(n) {
            if let Some((phi_bit, steps)) = budgeted_run(&program, schedule, e, &x, cost) {
                return Some(Winner {
                    e,
                    x,
                    phi_bit,
                    steps,
                });
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct BlumRun {
    pub schedule: BudgetSchedule,
    pub table: RTable,
    pub registry: DiagRegistry,
    /// Cost of each length's search.
    pub costs: Vec<Cost>,
}

impl BlumRun {
    pub fn max_len(&self) -> usize {
        self.table.horizon()
    }

    /// Accounted cost of lengths `0..=n`.
    pub fn cost_through(&self, n: usize) -> BigUint {
        self.costs[..=n].iter().map(|c| &c.accounted).sum()
    }

    pub fn undecided(&self) -> u64 {
        self.costs.iter().map(|c| c.undecided).sum()
    }
}

impl BlumRun {
    /// Re-checks the finished construction and lists what fails: one member
    /// per length, every record converging within its limit with R taking
    /// the other value, and the counting bound on skipped indices.
    pub fn check_invariants(&self, en: &Enumeration) -> Vec<String> {
        let mut bad = Vec::new();
        if self.undecided() > 0 {
            bad.push(format!(
                "{} runs hit the step ceiling undecided",
                self.undecided()
            ));
        }
        let mut machines = Machines::new(en);
        let mut per_length = vec![0usize; self.table.lengths()];
        for (&i, rec) in self.registry.records() {
            let n = rec.x.len();
            per_length[n] += 1;
            if i > n as u64 {
                bad.push(format!("index {i} retired at length {n} < {i}"));
            }
            let mut cost = Cost::default();
            match budgeted_run(&machines.get(i), self.schedule, i, &rec.x, &mut cost) {
                Some((bit, _)) if bit == rec.phi_bit => {}
                other => bad.push(format!("θ({i}) = {} does not replay: {other:?}", rec.x)),
            }
            if self.table.value(&rec.x).ok() != Some(!rec.phi_bit) {
                bad.push(format!("R({}) is not 1 − Φ_{i}", rec.x));
            }
        }
        for (n, count) in per_length.iter().enumerate() {
            if *count > 1 {
                bad.push(format!("{count} indices retired at length {n}"));
            }
            if let Some(x) = self.table.one_at(n) {
                if x.len() != n || self.registry.retired_at(n).is_none() {
                    bad.push(format!(
                        "length {n}: member {x} has no diagonalization behind it"
                    ));
                }
            }
        }
        // An index that could have acted but did not was beaten by a smaller one.
        let mut skipped = BTreeMap::<u64, u64>::new();
        for n in 0..self.table.lengths() {
            let retired = self.registry.retired_at(n);
            for e in 0..=n as u64 {
                if !self.registry.active_at(e, n) || retired == Some(e) {
                    continue;
                }
                let program = machines.get(e);
                let mut cost = Cost::default();
                let converges = Word::all_of_length(n)
                    .any(|x| budgeted_run(&program, self.schedule, e, &x, &mut cost).is_some());
                if converges {
                    if retired.is_none_or(|r| r > e) {
                        bad.push(format!(
                            "index {e} converged at length {n} but nothing smaller was retired"
                        ));
                    }
                    *skipped.entry(e).or_default() += 1;
                }
            }
        }
        for (e, times) in skipped {
            if times > e {
                bad.push(format!("index {e} skipped {times} times"));
            }
        }
        bad
    }
}

pub fn build_r(en: &Enumeration, schedule: BudgetSchedule, max_len: usize) -> BlumRun {
    let mut machines = Machines::new(en);
    let mut registry = DiagRegistry {
        records: BTreeMap::new(),
        horizon: max_len,
    };
    let mut ones = Vec::with_capacity(max_len + 1);
    let mut costs = Vec::with_capacity(max_len + 1);
    for n in 0..=max_len {
        let mut cost = Cost::default();
        let active: Vec<u64> = (0..=n as u64)
            .filter(|e| !registry.records.contains_key(e))
            .collect();
        let winner = search_length(&mut machines, schedule, n, active, &mut cost);
        ones.push(winner.as_ref().filter(|w| !w.phi_bit).map(|w| w.x.clone()));
        if let Some(w) = winner {
            registry.records.insert(
                w.e,
                DiagRecord {
                    x: w.x,
                    phi_bit: w.phi_bit,
                    steps: w.steps,
                },
            );
        }
        costs.push(cost);
    }
    BlumRun {
        schedule,
        table: RTable { ones },
        registry,
        costs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{library, NamedProgram};

    fn planted(ps: Vec<(&str, Program)>) -> Enumeration {
        Enumeration::new(
            ps.into_iter()
                .map(|(n, p)| NamedProgram {
                    name: n.into(),
                    program: p,
                })
                .collect(),
        )
    }

    #[test]
    fn const0_first_is_retired_on_the_empty_string() {
        let run = build_r(
            &planted(vec![("CONST_0", library::const0())]),
            BudgetSchedule::Simple2Exp,
            4,
        );
        assert_eq!(run.table.one_at(0), Some(&Word::empty()));
        assert_eq!(run.registry.theta(0), Some(&Word::empty()));
        assert_eq!(run.registry.records().len(), 1);
        for n in 1..=4 {
            assert_eq!(run.table.one_at(n), None);
        }
    }

    #[test]
    fn loops_leave_r_empty() {
        let run = build_r(&Enumeration::godel(), BudgetSchedule::Simple2Exp, 6);
        assert!(run.registry.records().is_empty());
        assert!((0..=6).all(|n| run.table.one_at(n).is_none()));
        assert_eq!(run.undecided(), 0);
    }

    #[test]
    fn serialization_round_trips() {
        let run = build_r(
            &Enumeration::new(library::all()),
            BudgetSchedule::Simple2Exp,
            7,
        );
        let table = RTable::from_text(&run.table.to_text()).unwrap();
        assert_eq!(table, run.table);
        let reg = DiagRegistry::from_text(&run.registry.to_text()).unwrap();
        assert_eq!(reg.to_text(), run.registry.to_text());
        assert_eq!(reg.horizon(), 7);
        for (i, r) in run.registry.records() {
            assert_eq!(reg.theta(*i), Some(&r.x));
        }
        assert!(RTable::from_text("1 none\n").is_err());
        assert!(RTable::from_text("0 5\n").is_err());
        assert!(DiagRegistry::from_text("0 2 7 1\n").is_err());
    }

    #[test]
    fn phi_one_puts_nothing_in_r() {
        let run = build_r(
            &planted(vec![("CONST_1", library::const1())]),
            BudgetSchedule::Simple2Exp,
            2,
        );
        assert_eq!(run.registry.theta(0), Some(&Word::empty()));
        assert_eq!(run.table.one_at(0), None);
    }
}
