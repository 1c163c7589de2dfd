//! Stagewise approximations of a c.e. set built under the dump rule: when
//! `x` enters at stage `t`, all of `[x, t]` enters with it.

use std::collections::BTreeSet;

use crate::error::CeError;
use crate::model::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DumpRecord {
    pub stage: u64,
    pub from: u64,
    pub to: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CeSet {
    members: BTreeSet<u64>,
    history: Vec<DumpRecord>,
}

impl CeSet {
    pub fn new() -> Self {
        CeSet::default()
    }

    /// Add the inclusive interval `[x, t]`, recorded as happening at stage `t`.
    pub fn dump(&mut self, x: u64, t: u64) -> Result<(), CeError> {
        self.dump_at(t, x, t)
    }

    pub fn dump_at(&mut self, stage: u64, x: u64, t: u64) -> Result<(), CeError> {
        if x > t {
            return Err(CeError::EmptyInterval { x, t });
        }
        self.members.extend(x..=t);
        self.history.push(DumpRecord {
            stage,
            from: x,
            to: t,
        });
        Ok(())
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.contains(&x)
    }

    pub fn members(&self) -> &BTreeSet<u64> {
        &self.members
    }

    pub fn history(&self) -> &[DumpRecord] {
        &self.history
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The set as it stood after the first `events` dumps.
    pub fn after_events(&self, events: usize) -> CeSet {
        let mut out = CeSet::new();
        for r in &self.history[..events] {
            out.dump_at(r.stage, r.from, r.to)
                .expect("recorded intervals are non-empty");
        }
        out
    }

    /// The set at the start of `stage`, before any dump made during it.
    pub fn before_stage(&self, stage: u64) -> CeSet {
        self.after_events(self.history.iter().take_while(|r| r.stage < stage).count())
    }

    /// Members equal the union of the recorded intervals, and each interval
    /// reaches the stage it was dumped at.
    pub fn closure_holds(&self) -> bool {
        let mut union = BTreeSet::new();
        for r in &self.history {
            if r.from > r.to || r.to < r.stage {
                return false;
            }
            union.extend(r.from..=r.to);
        }
        union == self.members
    }

    /// `χ_A ↾ len`.
    pub fn prefix(&self, len: u64) -> Word {
        Word::from_bits((0..len).map(|j| self.contains(j)).collect())
    }

    /// `χ(A ∪ [x, len)) ↾ len`.
    pub fn prefix_with_dump(&self, len: u64, x: u64) -> Word {
        Word::from_bits((0..len).map(|j| j >= x || self.contains(j)).collect())
    }
}

/// Length-`s` strings that can still be prefixes of the final set when
/// every later dump `[x, t]` has `t ≥ s`: one per choice of `x ∈ 0..=s`
/// (with `x = s` standing for "nothing below `s`"), deduplicated and in
/// lexicographic order.
pub fn candidate_prefixes(a: &CeSet, s: u64) -> Vec<Word> {
    candidates_from(a, s, 0)
        .into_iter()
        .map(|(w, _)| w)
        .collect()
}

/// Candidates whose dump starts at or above `floor`, each paired with the
/// largest dump start producing it.
pub fn candidates_from(a: &CeSet, s: u64, floor: u64) -> Vec<(Word, u64)> {
    let mut out: Vec<(Word, u64)> = (floor.min(s)..=s)
        .map(|x| (a.prefix_with_dump(s, x), x))
        .collect();
    out.sort_by(|(p, x), (q, y)| p.cmp(q).then(y.cmp(x)));
    out.dedup_by(|later, earlier| later.0 == earlier.0);
    out
}

/// The dump start `x0` with `χ(A ∪ [x0, ∞)) ↾ |α| = α`, preferring no dump
/// (`x0 = |α|`); `None` if α is not reachable that way from `A` with
/// `x0 ≥ floor`.
pub fn realize(alpha: &Word, a: &CeSet, floor: u64) -> Option<u64> {
    let len = alpha.len() as u64;
    let x0 = (0..len)
        .find(|&j| alpha.bit(j as usize) && !a.contains(j))
        .unwrap_or(len);
    let fits = (0..len).all(|j| alpha.bit(j as usize) == (j >= x0 || a.contains(j)));
    (fits && (x0 == len || x0 >= floor)).then_some(x0)
}
