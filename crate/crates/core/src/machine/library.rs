//! Hand-built machines planted into enumerations by tests, benches and the
//! default corpus.

use super::program::{Move, NamedProgram, Program, QueryAction, Symbol, Target, Transition};

fn t(write: Symbol, movement: Move, query: QueryAction, next: Target) -> Transition {
    Transition::new(write, movement, query, next)
}

fn uniform(next: Target, movement: Move) -> Program {
    let table = Symbol::ALL
        .iter()
        .map(|&s| t(s, movement, QueryAction::None, next))
        .collect();
    Program::new(1, table).unwrap()
}

/// Never halts; every configuration repeats after one step.
pub fn loop_forever() -> Program {
    uniform(Target::State(0), Move::Stay)
}

/// Walks right forever.
pub fn runaway() -> Program {
    uniform(Target::State(0), Move::Right)
}

pub fn const0() -> Program {
    uniform(Target::Halt(false), Move::Stay)
}

pub fn const1() -> Program {
    uniform(Target::Halt(true), Move::Stay)
}

/// Halts after one step on every input, outputting the first input bit
/// (0 on the empty input).
pub fn halt_all() -> Program {
    Program::new(
        1,
        vec![
            t(
                Symbol::Zero,
                Move::Right,
                QueryAction::None,
                Target::Halt(false),
            ),
            t(
                Symbol::One,
                Move::Right,
                QueryAction::None,
                Target::Halt(true),
            ),
            t(
                Symbol::Blank,
                Move::Right,
                QueryAction::None,
                Target::Halt(false),
            ),
        ],
    )
    .unwrap()
}

/// Copies the input onto the query register and asks the oracle about it:
/// outputs `X(x)` after exactly `|x| + 1` steps.
pub fn oracle_bit() -> Program {
    Program::new(
        1,
        vec![
            t(
                Symbol::Zero,
                Move::Right,
                QueryAction::Append(false),
                Target::State(0),
            ),
            t(
                Symbol::One,
                Move::Right,
                QueryAction::Append(true),
                Target::State(0),
            ),
            t(
                Symbol::Blank,
                Move::Stay,
                QueryAction::Ask {
                    on_yes: Target::Halt(true),
                },
                Target::Halt(false),
            ),
        ],
    )
    .unwrap()
}

/// Parity of the number of ones, `|x| + 1` steps.
pub fn parity() -> Program {
    Program::new(
        2,
        vec![
            t(
                Symbol::Zero,
                Move::Right,
                QueryAction::None,
                Target::State(0),
            ),
            t(
                Symbol::One,
                Move::Right,
                QueryAction::None,
                Target::State(1),
            ),
            t(
                Symbol::Blank,
                Move::Stay,
                QueryAction::None,
                Target::Halt(false),
            ),
            t(
                Symbol::Zero,
                Move::Right,
                QueryAction::None,
                Target::State(1),
            ),
            t(
                Symbol::One,
                Move::Right,
                QueryAction::None,
                Target::State(0),
            ),
            t(
                Symbol::Blank,
                Move::Stay,
                QueryAction::None,
                Target::Halt(true),
            ),
        ],
    )
    .unwrap()
}

/// Outputs the last input bit (0 on the empty input) after `|x| + 2` steps.
pub fn last_bit() -> Program {
    Program::new(
        2,
        vec![
            t(
                Symbol::Zero,
                Move::Right,
                QueryAction::None,
                Target::State(0),
            ),
            t(
                Symbol::One,
                Move::Right,
                QueryAction::None,
                Target::State(0),
            ),
            t(
                Symbol::Blank,
                Move::Left,
                QueryAction::None,
                Target::State(1),
            ),
            t(
                Symbol::Zero,
                Move::Stay,
                QueryAction::None,
                Target::Halt(false),
            ),
            t(
                Symbol::One,
                Move::Stay,
                QueryAction::None,
                Target::Halt(true),
            ),
            t(
                Symbol::Blank,
                Move::Stay,
                QueryAction::None,
                Target::Halt(false),
            ),
        ],
    )
    .unwrap()
}

/// `ORACLE_BIT`, except that a "no" answer costs one extra step: outputs
/// `X(x)` after `|x| + 1` steps on a yes and `|x| + 2` on a no.
pub fn prefer_yes() -> Program {
    Program::new(
        2,
        vec![
            t(
                Symbol::Zero,
                Move::Right,
                QueryAction::Append(false),
                Target::State(0),
            ),
            t(
                Symbol::One,
                Move::Right,
                QueryAction::Append(true),
                Target::State(0),
            ),
            t(
                Symbol::Blank,
                Move::Stay,
                QueryAction::Ask {
                    on_yes: Target::Halt(true),
                },
                Target::State(1),
            ),
            t(
                Symbol::Zero,
                Move::Stay,
                QueryAction::None,
                Target::Halt(false),
            ),
            t(
                Symbol::One,
                Move::Stay,
                QueryAction::None,
                Target::Halt(false),
            ),
            t(
                Symbol::Blank,
                Move::Stay,
                QueryAction::None,
                Target::Halt(false),
            ),
        ],
    )
    .unwrap()
}

/// Halts with 0 in one step on inputs starting with `1`; loops otherwise.
pub fn halt_on_leading_one() -> Program {
    Program::new(
        1,
        vec![
            t(
                Symbol::Zero,
                Move::Stay,
                QueryAction::None,
                Target::State(0),
            ),
            t(
                Symbol::One,
                Move::Stay,
                QueryAction::None,
                Target::Halt(false),
            ),
            t(
                Symbol::Blank,
                Move::Stay,
                QueryAction::None,
                Target::State(0),
            ),
        ],
    )
    .unwrap()
}

/// Outputs 1 after `delay + 1` steps on inputs starting with `1`, and 0 in
/// one step otherwise.
pub fn delayed_one(delay: u32) -> Program {
    let mut table = vec![
        t(
            Symbol::Zero,
            Move::Stay,
            QueryAction::None,
            Target::Halt(false),
        ),
        t(Symbol::One, Move::Stay, QueryAction::None, Target::State(1)),
        t(
            Symbol::Blank,
            Move::Stay,
            QueryAction::None,
            Target::Halt(false),
        ),
    ];
    for q in 1..=delay {
        let next = if q == delay {
            Target::Halt(true)
        } else {
            Target::State(q + 1)
        };
        for s in Symbol::ALL {
            table.push(t(s, Move::Stay, QueryAction::None, next));
        }
    }
    Program::new(delay + 1, table).unwrap()
}

/// Ignores its input and asks the oracle about `0^(2^k)` for the given `k`.
pub fn query_sparse(k: u32) -> Program {
    let len = 1u32 << k;
    let mut table = Vec::new();
    for q in 0..len {
        let next = Target::State(q + 1);
        for s in Symbol::ALL {
            table.push(t(s, Move::Stay, QueryAction::Append(false), next));
        }
    }
    for s in Symbol::ALL {
        table.push(t(
            s,
            Move::Stay,
            QueryAction::Ask {
                on_yes: Target::Halt(true),
            },
            Target::Halt(false),
        ));
    }
    Program::new(len + 1, table).unwrap()
}

/// Every library machine, named as in the default corpus.
pub fn all() -> Vec<NamedProgram> {
    [
        ("LOOP", loop_forever()),
        ("CONST_0", const0()),
        ("CONST_1", const1()),
        ("HALT_ALL", halt_all()),
        ("ORACLE_BIT", oracle_bit()),
        ("PREFER_YES", prefer_yes()),
        ("PARITY", parity()),
        ("LAST_BIT", last_bit()),
        ("LEADING_ONE", halt_on_leading_one()),
        ("DELAYED_ONE", delayed_one(8)),
        ("RUNAWAY", runaway()),
        ("QUERY_S0", query_sparse(0)),
        ("QUERY_S1", query_sparse(1)),
    ]
    .into_iter()
    .map(|(name, program)| NamedProgram {
        name: name.to_string(),
        program,
    })
    .collect()
}
