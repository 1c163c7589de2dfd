//! Shared fixtures for the benchmarks.

use lfs_core::dump::Requirement;
use lfs_core::machine::{library, Enumeration};

/// The library machines as enumeration indices 0, 1, ...
pub fn library_enumeration() -> Enumeration {
    Enumeration::new(library::all())
}

pub fn index_of(name: &str) -> u64 {
    library::all()
        .iter()
        .position(|n| n.name == name)
        .unwrap_or_else(|| panic!("no library machine {name}")) as u64
}

/// A P above an L that has to wait for confirmation, above a second P.
pub fn mixed_requirements() -> Vec<Requirement> {
    vec![
        Requirement::P {
            e: index_of("HALT_ALL"),
        },
        Requirement::L {
            e: index_of("DELAYED_ONE"),
            i: index_of("CONST_0"),
        },
        Requirement::P {
            e: index_of("LEADING_ONE"),
        },
    ]
}
