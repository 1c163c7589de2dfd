//! The functional that splits its oracle into blocks `ζ_1 ζ_2 ...` with
//! `|ζ_n| = n` and answers 0 on `x = ζ_{|x|}`, R(x) elsewhere, and the
//! exact measure of the oracles on which it gets length `n` wrong.

use num_rational::Ratio;

use super::construction::RTable;
use crate::error::BlumError;
use crate::model::Word;

/// Offset of block `ζ_n`: `1 + 2 + ... + (n - 1)`.
pub fn block_start(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn block(zprefix: &Word, n: usize) -> Result<Word, BlumError> {
    let (start, end) = (block_start(n), block_start(n) + n);
    if zprefix.len() < end {
        return Err(BlumError::ShortOraclePrefix {
            have: zprefix.len(),
            need: end,
            block: n,
        });
    }
    Ok(zprefix.slice(start, end))
}

/// `(Ψ^Z(x), whether the block shortcut answered)`.
pub fn schnorr_psi(zprefix: &Word, x: &Word, r: &RTable) -> Result<(bool, bool), BlumError> {
    if block(zprefix, x.len())? == *x {
        Ok((false, true))
    } else {
        Ok((r.value(x)?, false))
    }
}

/// λ(C_n), where `C_n` holds the oracles on which Ψ errs on some length-`n`
/// input. Only block `ζ_n` matters, and Ψ can only err on `x = ζ_n`, so
/// this counts the blocks `ζ` with `Ψ(ζ) ≠ R(ζ)`.
pub fn cn_measure(n: usize, r: &RTable) -> Result<Ratio<u64>, BlumError> {
    assert!(n <= 20, "exact enumeration is limited to n ≤ 20");
    let mut bad = 0u64;
    for zeta in Word::all_of_length(n) {
        // An oracle prefix whose block n is ζ; earlier blocks are irrelevant.
        let z = Word::zeros(block_start(n)).concat(&zeta);
        let (psi, _) = schnorr_psi(&z, &zeta, r)?;
        if psi != r.value(&zeta)? {
            bad += 1;
        }
    }
    Ok(Ratio::new(bad, 1u64 << n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn block_examples() {
        let z = w("010110");
        assert_eq!(block(&z, 1).unwrap(), w("0"));
        assert_eq!(block(&z, 2).unwrap(), w("10"));
        assert_eq!(block(&z, 3).unwrap(), w("110"));
        assert_eq!(block(&z, 0).unwrap(), w(""));
        assert_eq!(
            block(&z, 4),
            Err(BlumError::ShortOraclePrefix {
                have: 6,
                need: 10,
                block: 4
            })
        );
    }

    #[test]
    fn psi_examples() {
        let r = RTable::from_text("0 none\n1 none\n2 4\n").unwrap();
        let z = w("010110");
        assert_eq!(schnorr_psi(&z, &w("10"), &r).unwrap(), (false, true));
        assert_eq!(schnorr_psi(&z, &w("01"), &r).unwrap(), (true, false));
        assert_eq!(schnorr_psi(&z, &w("11"), &r).unwrap(), (false, false));
    }

    #[test]
    fn measures() {
        let r = RTable::from_text("0 none\n1 none\n2 4\n").unwrap();
        assert_eq!(cn_measure(1, &r).unwrap(), Ratio::new(0, 1));
        assert_eq!(cn_measure(2, &r).unwrap(), Ratio::new(1, 4));
    }
}
