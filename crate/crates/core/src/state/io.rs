//! Plain-text state files.
//!
//! ```text
//! dims: 2 2
//! 0 7.0710678118654757e-01 0.0000000000000000e+00
//! 3 7.0710678118654757e-01 0.0000000000000000e+00
//! ```
//!
//! Pure states list `index real imag` per nonzero amplitude; density
//! operators list `row col real imag` per nonzero entry. Numbers carry 17
//! significant digits so files round-trip bit-exactly.

use std::fmt::Write as _;

use num_complex::Complex64 as c64;

use super::{DensityOperator, PureState, SiteSpace};
use crate::error::{arg, Error, Result};
use crate::linalg::{zeros, ZERO};

fn header(space: &SiteSpace) -> String {
    let dims: Vec<String> = space.dims().iter().map(|d| d.to_string()).collect();
    format!("dims: {}\n", dims.join(" "))
}

pub fn write_pure(psi: &PureState) -> String {
    let mut out = header(psi.space());
    for (i, a) in psi.amplitudes().iter().enumerate() {
        if *a != ZERO {
            let _ = writeln!(out, "{i} {:.16e} {:.16e}", a.re, a.im);
        }
    }
    out
}

pub fn write_density(rho: &DensityOperator) -> String {
    let mut out = header(rho.space());
    let m = rho.matrix();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let a = m[(i, j)];
            if a != ZERO {
                let _ = writeln!(out, "{i} {j} {:.16e} {:.16e}", a.re, a.im);
            }
        }
    }
    out
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Argument(format!("line {line}: {msg}"))
}

fn body(text: &str) -> Result<(SiteSpace, Vec<(usize, Vec<&str>)>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (n, first) = lines.next().ok_or_else(|| Error::Argument("empty state file".into()))?;
    let dims = first
        .strip_prefix("dims:")
        .ok_or_else(|| parse_err(n, "expected `dims:` header"))?
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| parse_err(n, e)))
        .collect::<Result<Vec<_>>>()?;
    let space = SiteSpace::new(dims)?;
    Ok((space, lines.map(|(n, l)| (n, l.split_whitespace().collect())).collect()))
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    tok.parse::<T>().map_err(|e| parse_err(line, format!("`{tok}`: {e}")))
}

pub fn read_pure(text: &str) -> Result<PureState> {
    let (space, rows) = body(text)?;
    let mut amps = vec![ZERO; space.dim()];
    for (n, toks) in rows {
        if toks.len() != 3 {
            return Err(parse_err(n, "expected `index real imag`"));
        }
        let i: usize = num(n, toks[0])?;
        if i >= amps.len() {
            return Err(parse_err(n, format!("index {i} out of range")));
        }
        amps[i] = c64::new(num(n, toks[1])?, num(n, toks[2])?);
    }
    PureState::new(space, amps)
}

pub fn read_density(text: &str) -> Result<DensityOperator> {
    let (space, rows) = body(text)?;
    let d = space.dim();
    let mut m = zeros(d, d);
    for (n, toks) in rows {
        if toks.len() != 4 {
            return Err(parse_err(n, "expected `row col real imag`"));
        }
        let (i, j): (usize, usize) = (num(n, toks[0])?, num(n, toks[1])?);
        if i >= d || j >= d {
            return arg(format!("line {n}: entry ({i}, {j}) out of range"));
        }
        m[(i, j)] = c64::new(num(n, toks[2])?, num(n, toks[3])?);
    }
    DensityOperator::new(space, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bell_file_layout() {
        let text = write_pure(&PureState::phi_plus());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "dims: 2 2");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0 7.0710678118654"));
    }

    #[test]
    fn malformed_files_rejected() {
        assert!(read_pure("").is_err());
        assert!(read_pure("dims: 2\n0 1.0").is_err());
        assert!(read_pure("dims: 2\n5 1.0 0.0").is_err());
        assert!(read_pure("dims: 2\n0 0.5 0.0").is_err());
        assert!(read_density("dims: 2\n0 0 1.0 0.0\n").is_ok());
    }

    proptest! {
        #[test]
        fn random_states_round_trip(seed in any::<u64>(), n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let psi = PureState::random(SiteSpace::qubits(n).unwrap(), &mut rng);
            let back = read_pure(&write_pure(&psi)).unwrap();
            prop_assert_eq!(back.amplitudes(), psi.amplitudes());
            let rho = psi.to_density();
            let back = read_density(&write_density(&rho)).unwrap();
            prop_assert_eq!(back.matrix(), rho.matrix());
        }
    }
}
