//! Corpus files: `machine NAME ... end` blocks plus an optional `sweep N`
//! line giving how many enumeration indices the sweeping subcommands cover
//! by default.

use std::path::Path;

use lfs_core::machine::{parse_corpus, NamedProgram};

pub const DEFAULT: &str = include_str!("../corpus/default.tm");

#[derive(Clone, Debug)]
pub struct Corpus {
    pub programs: Vec<NamedProgram>,
    pub sweep: u64,
}

pub fn parse(text: &str) -> Result<Corpus, String> {
    let mut sweep = None;
    // Blank out `sweep` lines so machine-block line numbers stay right.
    let mut body = String::with_capacity(text.len());
    for (i, line) in text.lines().enumerate() {
        let words: Vec<&str> = line
            .split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        if let ["sweep", n] = words[..] {
            if sweep.is_some() {
                return Err(format!("line {}: second `sweep` line", i + 1));
            }
            sweep = Some(
                n.parse::<u64>()
                    .map_err(|_| format!("line {}: bad sweep count", i + 1))?,
            );
            body.push('\n');
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let programs = parse_corpus(&body).map_err(|e| e.to_string())?;
    let sweep = sweep.unwrap_or(programs.len() as u64);
    Ok(Corpus { programs, sweep })
}

pub fn load(path: Option<&Path>) -> Result<Corpus, String> {
    match path {
        None => parse(DEFAULT),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            parse(&text).map_err(|e| format!("{}: {e}", p.display()))
        }
    }
}
