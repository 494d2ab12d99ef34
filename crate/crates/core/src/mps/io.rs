//! Plain-text MPS files.
//!
//! ```text
//! 2 2 1 open left-canonical
//! 0 0 0 0 1.0000000000000000e+00 0.0000000000000000e+00
//! ...
//! ```
//!
//! The header is `N d D boundary gauge` with D the largest bond; every
//! tensor entry follows as `site n alpha beta real imag`. Bond dimensions
//! are inferred from the largest indices of each site.

use std::fmt::Write as _;

use num_complex::Complex64 as c64;

use super::tensor::{Gauge, MpsBoundary, MpsState};
use crate::error::{Error, Result};
use crate::linalg::zeros;

pub fn write_mps(mps: &MpsState) -> String {
    let mut out = format!(
        "{} {} {} {} {}\n",
        mps.n_sites(),
        mps.phys_dim(),
        mps.max_bond(),
        mps.boundary().name(),
        mps.gauge().name()
    );
    for (m, site) in mps.tensors().iter().enumerate() {
        for (n, a) in site.iter().enumerate() {
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    let v = a[(i, j)];
                    let _ = writeln!(out, "{m} {n} {i} {j} {:.16e} {:.16e}", v.re, v.im);
                }
            }
        }
    }
    out
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Argument(format!("mps file line {line}: {msg}"))
}

pub fn read_mps(text: &str) -> Result<MpsState> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 5 {
        return Err(parse_err(hl + 1, "header must be `N d D boundary gauge`"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|e| parse_err(hl + 1, e));
    let (n, d, bond) = (num(h[0])?, num(h[1])?, num(h[2])?);
    let boundary = match h[3] {
        "open" => MpsBoundary::Open,
        "periodic" => MpsBoundary::Periodic,
        other => return Err(parse_err(hl + 1, format!("unknown boundary {other}"))),
    };
    let gauge = match h[4] {
        "none" => Gauge::None,
        "left-canonical" => Gauge::LeftCanonical,
        other => return Err(parse_err(hl + 1, format!("unknown gauge {other}"))),
    };
    let mut entries = Vec::new();
    let mut shape = vec![(0usize, 0usize); n];
    for (k, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(parse_err(k + 1, "expected `site n alpha beta real imag`"));
        }
        let idx: Vec<usize> = f[..4]
            .iter()
            .map(|s| s.parse::<usize>().map_err(|e| parse_err(k + 1, e)))
            .collect::<Result<_>>()?;
        let re: f64 = f[4].parse().map_err(|e| parse_err(k + 1, e))?;
        let im: f64 = f[5].parse().map_err(|e| parse_err(k + 1, e))?;
        if idx[0] >= n || idx[1] >= d || idx[2] >= bond || idx[3] >= bond {
            return Err(parse_err(k + 1, "index out of range"));
        }
        let s = &mut shape[idx[0]];
        s.0 = s.0.max(idx[2] + 1);
        s.1 = s.1.max(idx[3] + 1);
        entries.push((idx, c64::new(re, im)));
    }
    let mut tensors: Vec<Vec<_>> = shape.iter().map(|&(r, c)| vec![zeros(r, c); d]).collect();
    for (idx, v) in entries {
        tensors[idx[0]][idx[1]][(idx[2], idx[3])] = v;
    }
    let mps = MpsState::new(tensors, boundary)?;
    match gauge {
        Gauge::None => Ok(mps),
        Gauge::LeftCanonical => mps.mark_left_canonical(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::canonical::left_canonicalize;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mps = left_canonicalize(&MpsState::random(5, 3, 4, MpsBoundary::Open, &mut rng).unwrap()).unwrap();
        let text = write_mps(&mps);
        assert!(text.starts_with("5 3 4 open left-canonical\n"));
        let back = read_mps(&text).unwrap();
        assert_eq!(back.gauge(), Gauge::LeftCanonical);
        assert_eq!(write_mps(&back), text);
        let p = MpsState::random(3, 2, 2, MpsBoundary::Periodic, &mut rng).unwrap();
        assert_eq!(write_mps(&read_mps(&write_mps(&p)).unwrap()), write_mps(&p));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(read_mps("").is_err());
        assert!(read_mps("2 2 1 open none\n0 0 0 0 1.0\n").is_err());
        assert!(read_mps("1 2 1 ring none\n").is_err());
        assert!(read_mps("2 2 1 open left-canonical\n0 0 0 0 2 0\n0 1 0 0 0 0\n1 0 0 0 1 0\n1 1 0 0 0 0\n").is_err());
    }
}
