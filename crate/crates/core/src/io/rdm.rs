//! Reduced-density-matrix dump.
//!
//! Text: a `#rdm {json}` header, `dim` basis labels (one per line, kept
//! qubits in ascending order), then `dim` rows of `re im` pairs. Binary
//! (magic `RDM1`): the same header, packed basis words, then the matrix
//! row-major as `f64` pairs.

use std::io::{BufRead, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::codec::*;
use crate::error::{Error, Result};
use crate::trace::{QubitSubset, ReducedDensityMatrix};

pub const RDM_FORMAT_VERSION: u32 = 1;
pub const RDM_MAGIC: &[u8; 4] = b"RDM1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RdmHeader {
    pub format_version: u32,
    pub num_qubits: usize,
    pub keep: Vec<usize>,
    pub dim: usize,
    pub input_normalized: bool,
}

fn header_of(rho: &ReducedDensityMatrix) -> RdmHeader {
    RdmHeader {
        format_version: RDM_FORMAT_VERSION,
        num_qubits: rho.keep.num_qubits(),
        keep: rho.keep.indices().to_vec(),
        dim: rho.dim(),
        input_normalized: rho.input_normalized,
    }
}

fn subset_of(h: &RdmHeader) -> Result<QubitSubset> {
    if h.format_version != RDM_FORMAT_VERSION {
        return Err(Error::parse(1, format!("unsupported format_version {}", h.format_version)));
    }
    QubitSubset::new(h.num_qubits, h.keep.iter().copied())
}

pub fn write_rdm(rho: &ReducedDensityMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut w = create_writer(path.as_ref())?;
    write_rdm_to(&mut w, rho)?;
    w.flush()?;
    Ok(())
}

pub fn write_rdm_to(w: &mut impl Write, rho: &ReducedDensityMatrix) -> Result<()> {
    write_header(w, "rdm", &header_of(rho))?;
    for b in &rho.basis {
        writeln!(w, "{b}")?;
    }
    for i in 0..rho.dim() {
        let row: Vec<String> = (0..rho.dim())
            .map(|j| {
                let z = rho.matrix[(i, j)];
                format!("{} {}", fmt_f64(z.re), fmt_f64(z.im))
            })
            .collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Text or binary, chosen by the leading bytes.
pub fn read_rdm(path: impl AsRef<Path>) -> Result<ReducedDensityMatrix> {
    let mut r = open_reader(path.as_ref())?;
    if starts_with(&mut r, RDM_MAGIC)? {
        read_rdm_binary_from(&mut r)
    } else {
        read_rdm_from(r)
    }
}

pub fn read_rdm_from(mut r: impl BufRead) -> Result<ReducedDensityMatrix> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let h: RdmHeader = parse_header(&first, "rdm")?;
    let keep = subset_of(&h)?;
    let mut basis = Vec::with_capacity(h.dim);
    let mut values = Vec::with_capacity(h.dim * h.dim);
    for item in data_lines(r, 2) {
        let (ln, line) = item?;
        if basis.len() < h.dim {
            basis.push(parse_bits(&line, keep.len(), ln)?);
            continue;
        }
        let nums: Vec<f64> = line.split_whitespace().map(|t| parse_f64(t, ln)).collect::<Result<_>>()?;
        if nums.len() != 2 * h.dim {
            return Err(Error::parse(ln, format!("expected {} numbers, found {}", 2 * h.dim, nums.len())));
        }
        values.extend(nums.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])));
    }
    if basis.len() != h.dim || values.len() != h.dim * h.dim {
        return Err(Error::parse(0, "truncated density-matrix dump"));
    }
    Ok(ReducedDensityMatrix {
        basis,
        matrix: DMatrix::from_row_slice(h.dim, h.dim, &values),
        keep,
        input_normalized: h.input_normalized,
    })
}

pub fn write_rdm_binary(rho: &ReducedDensityMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut w = create_writer(path.as_ref())?;
    write_binary_header(&mut w, RDM_MAGIC, &header_of(rho))?;
    for b in &rho.basis {
        write_bits(&mut w, b)?;
    }
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            write_complex(&mut w, rho.matrix[(i, j)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_rdm_binary_from(r: &mut impl Read) -> Result<ReducedDensityMatrix> {
    let h: RdmHeader = read_binary_header(r, RDM_MAGIC)?;
    let keep = subset_of(&h)?;
    let basis = (0..h.dim).map(|_| read_bits(r, keep.len())).collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(h.dim * h.dim);
    for _ in 0..h.dim * h.dim {
        values.push(read_complex(r)?);
    }
    Ok(ReducedDensityMatrix {
        basis,
        matrix: DMatrix::from_row_slice(h.dim, h.dim, &values),
        keep,
        input_normalized: h.input_normalized,
    })
}
