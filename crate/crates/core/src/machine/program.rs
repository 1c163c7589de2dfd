//! Oracle machine programs and their line-oriented text form.
//!
//! A program has states `0..states` (state 0 starts) and two halting
//! targets `h0`/`h1` that emit the output bit. Every non-halting state has
//! one transition per work symbol `0`, `1`, `_` (blank). A transition writes
//! a symbol, moves the head, performs one query-register action and picks
//! the next target. `ask` transitions name two targets, `no/yes`, selected
//! by the oracle's answer.
//!
//! Text form, one transition per line:
//!
//! ```text
//! machine ORACLE_BIT
//! states 1
//! 0 0 0 R app0 0
//! 0 1 1 R app1 0
//! 0 _ _ S ask h0/h1
//! end
//! ```

use std::fmt::{self, Write as _};

use crate::error::ProgramError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    One,
    Blank,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::Zero, Symbol::One, Symbol::Blank];

    pub(crate) fn code(self) -> u8 {
        match self {
            Symbol::Zero => 0,
            Symbol::One => 1,
            Symbol::Blank => 2,
        }
    }

    pub(crate) fn from_code(c: u8) -> Symbol {
        Symbol::ALL[c as usize]
    }

    fn token(self) -> &'static str {
        match self {
            Symbol::Zero => "0",
            Symbol::One => "1",
            Symbol::Blank => "_",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Stay,
    Left,
    Right,
}

impl Move {
    pub const ALL: [Move; 3] = [Move::Stay, Move::Left, Move::Right];

    fn token(self) -> &'static str {
        match self {
            Move::Stay => "S",
            Move::Left => "L",
            Move::Right => "R",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    State(u32),
    Halt(bool),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::State(q) => write!(f, "{q}"),
            Target::Halt(b) => write!(f, "h{}", *b as u8),
        }
    }
}

/// What a transition does to the query register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QueryAction {
    None,
    Append(bool),
    /// Ask the oracle about the register's word and clear the register.
    /// The transition's `next` is taken on "no", this target on "yes".
    Ask {
        on_yes: Target,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub write: Symbol,
    pub movement: Move,
    pub query: QueryAction,
    pub next: Target,
}

impl Transition {
    pub fn new(write: Symbol, movement: Move, query: QueryAction, next: Target) -> Self {
        Transition {
            write,
            movement,
            query,
            next,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    states: u32,
    table: Vec<Transition>,
}

impl Program {
    /// `table[3 * state + symbol]`, symbols ordered `0, 1, _`.
    pub fn new(states: u32, table: Vec<Transition>) -> Result<Self, ProgramError> {
        if states == 0 {
            return Err(ProgramError::NoStates);
        }
        let expected = 3 * states as usize;
        if table.len() != expected {
            return Err(ProgramError::TableSize {
                expected,
                found: table.len(),
            });
        }
        for (slot, t) in table.iter().enumerate() {
            let state = (slot / 3) as u32;
            let mut targets = vec![t.next];
            if let QueryAction::Ask { on_yes } = t.query {
                targets.push(on_yes);
            }
            for target in targets {
                if let Target::State(q) = target {
                    if q >= states {
                        return Err(ProgramError::BadTarget { state, target: q });
                    }
                }
            }
        }
        Ok(Program { states, table })
    }

    pub fn states(&self) -> u32 {
        self.states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.table
    }

    #[inline]
    pub fn transition(&self, state: u32, symbol: Symbol) -> &Transition {
        &self.table[3 * state as usize + symbol.code() as usize]
    }

    /// Canonical text form (without the `machine`/`end` wrapper).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "states {}", self.states).unwrap();
        for (slot, t) in self.table.iter().enumerate() {
            let state = slot / 3;
            let symbol = Symbol::from_code((slot % 3) as u8);
            let (action, next) = match t.query {
                QueryAction::None => ("-".to_string(), t.next.to_string()),
                QueryAction::Append(b) => (format!("app{}", b as u8), t.next.to_string()),
                QueryAction::Ask { on_yes } => {
                    ("ask".to_string(), format!("{}/{}", t.next, on_yes))
                }
            };
            writeln!(
                out,
                "{state} {} {} {} {action} {next}",
                symbol.token(),
                t.write.token(),
                t.movement.token()
            )
            .unwrap();
        }
        out
    }

    /// Parses the body produced by [`Program::to_text`]. Blank lines and
    /// `#` comments are ignored; transitions may appear in any order.
    pub fn from_text(text: &str) -> Result<Self, ProgramError> {
        parse_body(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }
}

fn parse_symbol(tok: &str, line: usize) -> Result<Symbol, ProgramError> {
    match tok {
        "0" => Ok(Symbol::Zero),
        "1" => Ok(Symbol::One),
        "_" => Ok(Symbol::Blank),
        _ => Err(ProgramError::parse(line, format!("bad symbol {tok:?}"))),
    }
}

fn parse_target(tok: &str, line: usize) -> Result<Target, ProgramError> {
    match tok {
        "h0" => Ok(Target::Halt(false)),
        "h1" => Ok(Target::Halt(true)),
        _ => tok
            .parse::<u32>()
            .map(Target::State)
            .map_err(|_| ProgramError::parse(line, format!("bad target {tok:?}"))),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_body<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Program, ProgramError> {
    let mut states: Option<u32> = None;
    let mut slots: Vec<Option<Transition>> = Vec::new();
    let mut last_line = 0;
    for (line_no, raw) in lines {
        last_line = line_no;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "states" {
            if states.is_some() || toks.len() != 2 {
                return Err(ProgramError::parse(
                    line_no,
                    "duplicate or malformed states line",
                ));
            }
            let n: u32 = toks[1]
                .parse()
                .map_err(|_| ProgramError::parse(line_no, "bad state count"))?;
            if n == 0 {
                return Err(ProgramError::NoStates);
            }
            states = Some(n);
            slots = vec![None; 3 * n as usize];
            continue;
        }
        let n =
            states.ok_or_else(|| ProgramError::parse(line_no, "transition before states line"))?;
        if toks.len() != 6 {
            return Err(ProgramError::parse(line_no, "expected 6 fields"));
        }
        let state: u32 = toks[0]
            .parse()
            .map_err(|_| ProgramError::parse(line_no, "bad state"))?;
        if state >= n {
            return Err(ProgramError::parse(
                line_no,
                format!("state {state} not declared"),
            ));
        }
        let symbol = parse_symbol(toks[1], line_no)?;
        let write = parse_symbol(toks[2], line_no)?;
        let movement = match toks[3] {
            "L" => Move::Left,
            "R" => Move::Right,
            "S" => Move::Stay,
            m => return Err(ProgramError::parse(line_no, format!("bad move {m:?}"))),
        };
        let (query, next) = match toks[4] {
            "-" => (QueryAction::None, parse_target(toks[5], line_no)?),
            "app0" => (QueryAction::Append(false), parse_target(toks[5], line_no)?),
            "app1" => (QueryAction::Append(true), parse_target(toks[5], line_no)?),
            "ask" => {
                let (no, yes) = toks[5]
                    .split_once('/')
                    .ok_or_else(|| ProgramError::parse(line_no, "ask needs no/yes targets"))?;
                let on_yes = parse_target(yes, line_no)?;
                (QueryAction::Ask { on_yes }, parse_target(no, line_no)?)
            }
            a => {
                return Err(ProgramError::parse(
                    line_no,
                    format!("bad query action {a:?}"),
                ))
            }
        };
        let slot = 3 * state as usize + symbol.code() as usize;
        if slots[slot].is_some() {
            return Err(ProgramError::parse(line_no, "duplicate transition"));
        }
        slots[slot] = Some(Transition::new(write, movement, query, next));
    }
    let n = states.ok_or_else(|| ProgramError::parse(last_line, "missing states line"))?;
    let table = slots
        .into_iter()
        .enumerate()
        .map(|(slot, t)| {
            t.ok_or_else(|| {
                ProgramError::parse(
                    last_line,
                    format!(
                        "missing transition for state {} symbol {}",
                        slot / 3,
                        Symbol::from_code((slot % 3) as u8).token()
                    ),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Program::new(n, table)
}

/// A named program inside a corpus file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedProgram {
    pub name: String,
    pub program: Program,
}

/// Parses a corpus: a sequence of `machine NAME ... end` blocks.
pub fn parse_corpus(text: &str) -> Result<Vec<NamedProgram>, ProgramError> {
    let mut out = Vec::new();
    let mut current: Option<(String, Vec<(usize, &str)>)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        match (
            &mut current,
            line.split_whitespace().collect::<Vec<_>>().as_slice(),
        ) {
            (None, []) => {}
            (None, ["machine", name]) => current = Some((name.to_string(), Vec::new())),
            (None, _) => return Err(ProgramError::parse(line_no, "expected `machine NAME`")),
            (Some(_), ["end"]) => {
                let (name, body) = current.take().unwrap();
                let program = parse_body(body.into_iter())?;
                out.push(NamedProgram { name, program });
            }
            (Some(_), ["machine", ..]) => {
                return Err(ProgramError::parse(line_no, "nested `machine` block"))
            }
            (Some((_, body)), _) => body.push((line_no, raw)),
        }
    }
    if current.is_some() {
        return Err(ProgramError::parse(
            text.lines().count(),
            "unterminated machine block",
        ));
    }
    Ok(out)
}

pub fn format_corpus(programs: &[NamedProgram]) -> String {
    let mut out = String::new();
    for (i, p) in programs.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        writeln!(out, "machine {}", p.name).unwrap();
        out.push_str(&p.program.to_text());
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::library;

    #[test]
    fn canonical_text_round_trips_bit_exact() {
        for named in library::all() {
            let text = named.program.to_text();
            let back = Program::from_text(&text).unwrap();
            assert_eq!(back, named.program);
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn corpus_round_trip() {
        let corpus = library::all();
        let text = format_corpus(&corpus);
        let parsed = parse_corpus(&text).unwrap();
        assert_eq!(parsed, corpus);
        assert_eq!(format_corpus(&parsed), text);
    }

    #[test]
    fn parser_accepts_comments_and_any_order() {
        let text =
            "# oracle bit\nstates 1\n0 _ _ S ask h0/h1  # ask\n\n0 1 1 R app1 0\n0 0 0 R app0 0\n";
        assert_eq!(Program::from_text(text).unwrap(), library::oracle_bit());
    }

    #[test]
    fn parser_rejects_malformed_programs() {
        assert!(matches!(
            Program::from_text("states 0"),
            Err(ProgramError::NoStates)
        ));
        assert!(matches!(
            Program::from_text("states 1\n0 0 0 R - 0\n0 1 1 R - 0\n"),
            Err(ProgramError::Parse { .. })
        ));
        assert!(matches!(
            Program::from_text("states 1\n0 0 0 R - 0\n0 1 1 R - 0\n0 _ _ S - 3\n"),
            Err(ProgramError::BadTarget {
                state: 0,
                target: 3
            })
        ));
        assert!(matches!(
            Program::from_text("states 1\n0 0 0 X - 0\n"),
            Err(ProgramError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Program::from_text("states 1\n0 _ _ S ask h0\n"),
            Err(ProgramError::Parse { .. })
        ));
        assert!(parse_corpus("machine A\nstates 1\n").is_err());
        assert!(parse_corpus("states 1\n").is_err());
    }

    #[test]
    fn validation_checks_table_size() {
        let t = Transition::new(
            Symbol::Zero,
            Move::Stay,
            QueryAction::None,
            Target::State(0),
        );
        assert_eq!(
            Program::new(1, vec![t; 2]),
            Err(ProgramError::TableSize {
                expected: 3,
                found: 2
            })
        );
    }
}
