//! Wavefunction interchange file.
//!
//! Text form:
//!
//! ```text
//! #wf {"format_version":1,"num_modes":4,"num_electrons":2,"orbital_ordering":"interleaved",...}
//! 0011 -4.3588989435406733e-1 0.0000000000000000e0
//! 1100 9.0000000000000002e-1 0.0000000000000000e0
//! ```
//!
//! One record per determinant: occupation string (mode 0 leftmost), real and
//! imaginary part. Records are written sorted by occupation. Blank lines and
//! lines starting with `#` after the header are ignored.
//!
//! The binary companion holds the same header as length-prefixed JSON after
//! the magic `QSWF`, a record count, then per record the packed occupation
//! words followed by two `f64`, all little-endian.

use std::io::{BufRead, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::codec::*;
use crate::bitstate::BitString;
use crate::error::{Error, Result};
use crate::fermion::{FockWavefunction, OrbitalOrdering, Vacuum};

pub const WAVEFUNCTION_FORMAT_VERSION: u32 = 1;
pub const WAVEFUNCTION_MAGIC: &[u8; 4] = b"QSWF";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VacuumKind {
    #[default]
    Empty,
    /// Occupation strings are particle-hole strings relative to `reference`.
    Reference,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionHeader {
    pub format_version: u32,
    pub num_modes: usize,
    pub num_electrons: usize,
    #[serde(default = "default_ordering")]
    pub orbital_ordering: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(default)]
    pub vacuum: VacuumKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_records: Option<usize>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub source: serde_json::Value,
}

fn default_ordering() -> String {
    OrbitalOrdering::default().as_str().to_string()
}

/// Header fields that the in-memory wavefunction does not carry.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WavefunctionMeta {
    /// Hartree-Fock determinant, when known.
    pub reference: Option<BitString>,
    /// Free-form provenance recorded by the producer.
    pub source: serde_json::Value,
}

fn header_for(wf: &FockWavefunction, meta: &WavefunctionMeta) -> Result<WavefunctionHeader> {
    let (vacuum, reference) = match wf.vacuum() {
        Vacuum::Empty => (VacuumKind::Empty, meta.reference.clone()),
        Vacuum::Reference(r) => {
            if meta.reference.as_ref().is_some_and(|m| m != r) {
                return Err(Error::InvalidArgument(
                    "metadata reference differs from the particle-hole vacuum".into(),
                ));
            }
            (VacuumKind::Reference, Some(r.clone()))
        }
    };
    if let Some(r) = &reference {
        if r.len() != wf.num_modes() {
            return Err(Error::LengthMismatch {
                expected: wf.num_modes(),
                found: r.len(),
            });
        }
    }
    Ok(WavefunctionHeader {
        format_version: WAVEFUNCTION_FORMAT_VERSION,
        num_modes: wf.num_modes(),
        num_electrons: wf.num_electrons(),
        orbital_ordering: wf.ordering.as_str().to_string(),
        reference: reference.map(|r| r.to_string()),
        vacuum,
        num_records: Some(wf.len()),
        source: meta.source.clone(),
    })
}

fn build(header: &WavefunctionHeader, terms: Vec<(BitString, Complex64)>) -> Result<(FockWavefunction, WavefunctionMeta)> {
    if header.format_version != WAVEFUNCTION_FORMAT_VERSION {
        return Err(Error::parse(
            1,
            format!("unsupported format_version {}", header.format_version),
        ));
    }
    if let Some(k) = header.num_records {
        if k != terms.len() {
            return Err(Error::parse(
                1,
                format!("header announces {k} records, found {}", terms.len()),
            ));
        }
    }
    let reference = header
        .reference
        .as_deref()
        .map(|s| parse_bits(s, header.num_modes, 1))
        .transpose()?;
    let vacuum = match header.vacuum {
        VacuumKind::Empty => Vacuum::Empty,
        VacuumKind::Reference => Vacuum::Reference(reference.clone().ok_or_else(|| {
            Error::parse(1, "particle-hole file lacks a reference determinant")
        })?),
    };
    let mut wf = FockWavefunction::with_vacuum(header.num_modes, header.num_electrons, terms, vacuum, true)?;
    wf.ordering = header.orbital_ordering.parse()?;
    Ok((
        wf,
        WavefunctionMeta {
            reference,
            source: header.source.clone(),
        },
    ))
}

/// Reads either the text or the binary form, chosen by the leading bytes.
pub fn read_wavefunction(path: impl AsRef<Path>) -> Result<FockWavefunction> {
    Ok(read_wavefunction_with_meta(path)?.0)
}

pub fn read_wavefunction_with_meta(path: impl AsRef<Path>) -> Result<(FockWavefunction, WavefunctionMeta)> {
    let mut r = open_reader(path.as_ref())?;
    if starts_with(&mut r, WAVEFUNCTION_MAGIC)? {
        read_wavefunction_binary_from(&mut r)
    } else {
        read_wavefunction_from(r)
    }
}

/// Streaming text reader; memory grows with the record count only.
pub fn read_wavefunction_from(mut r: impl BufRead) -> Result<(FockWavefunction, WavefunctionMeta)> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let header: WavefunctionHeader = parse_header(&first, "wf")?;
    let mut terms = Vec::with_capacity(header.num_records.unwrap_or(0));
    for item in data_lines(r, 2) {
        let (ln, line) = item?;
        let mut tok = line.split_whitespace();
        let (Some(occ), Some(re), Some(im), None) = (tok.next(), tok.next(), tok.next(), tok.next()) else {
            return Err(Error::parse(ln, "expected 'occupation re im'"));
        };
        let bits = parse_bits(occ, header.num_modes, ln)?;
        terms.push((bits, Complex64::new(parse_f64(re, ln)?, parse_f64(im, ln)?)));
    }
    build(&header, terms)
}

pub fn write_wavefunction(wf: &FockWavefunction, path: impl AsRef<Path>) -> Result<()> {
    write_wavefunction_with_meta(wf, &WavefunctionMeta::default(), path)
}

pub fn write_wavefunction_with_meta(
    wf: &FockWavefunction,
    meta: &WavefunctionMeta,
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut w = create_writer(path.as_ref())?;
    write_wavefunction_to(&mut w, wf, meta)?;
    w.flush()?;
    Ok(())
}

pub fn write_wavefunction_to(w: &mut impl Write, wf: &FockWavefunction, meta: &WavefunctionMeta) -> Result<()> {
    write_header(w, "wf", &header_for(wf, meta)?)?;
    let mut terms: Vec<&(BitString, Complex64)> = wf.terms().iter().collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    for (occ, c) in terms {
        writeln!(w, "{occ} {} {}", fmt_f64(c.re), fmt_f64(c.im))?;
    }
    Ok(())
}

pub fn write_wavefunction_binary(
    wf: &FockWavefunction,
    meta: &WavefunctionMeta,
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut w = create_writer(path.as_ref())?;
    write_binary_header(&mut w, WAVEFUNCTION_MAGIC, &header_for(wf, meta)?)?;
    let mut terms: Vec<&(BitString, Complex64)> = wf.terms().iter().collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    write_u64(&mut w, terms.len() as u64)?;
    for (occ, c) in terms {
        write_bits(&mut w, occ)?;
        write_complex(&mut w, *c)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_wavefunction_binary_from(r: &mut impl Read) -> Result<(FockWavefunction, WavefunctionMeta)> {
    let header: WavefunctionHeader = read_binary_header(r, WAVEFUNCTION_MAGIC)?;
    let count = read_u64(r)? as usize;
    let mut terms = Vec::with_capacity(count.min(1 << 24));
    for _ in 0..count {
        let bits = read_bits(r, header.num_modes)?;
        terms.push((bits, read_complex(r)?));
    }
    build(&header, terms)
}
