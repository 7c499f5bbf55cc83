//! Qubit-state file.
//!
//! Binary-form states reuse the wavefunction layout with tag `#state`:
//! one `bits re im` record per amplitude, sorted by label. General-form
//! states write one line per product term, `re im` of `λ_j` followed by
//! `c0.re c0.im c1.re c1.im` for each qubit. The binary companion (magic
//! `QSST`) covers binary-form states only.

use std::io::{BufRead, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::codec::*;
use crate::bitstate::{BitString, GeneralState, SingleQubitKet, SparseState};
use crate::error::{Error, Result};

pub const STATE_FORMAT_VERSION: u32 = 1;
pub const STATE_MAGIC: &[u8; 4] = b"QSST";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    #[default]
    Binary,
    General,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateHeader {
    pub format_version: u32,
    #[serde(default)]
    pub kind: StateKind,
    pub num_qubits: usize,
    /// Mapping that produced the state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_electrons: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_records: Option<usize>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub source: serde_json::Value,
}

/// Header fields that the state itself does not carry.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StateMeta {
    pub mapping: Option<String>,
    pub num_electrons: Option<usize>,
    pub source: serde_json::Value,
}

impl StateMeta {
    fn header(&self, kind: StateKind, num_qubits: usize, records: usize) -> StateHeader {
        StateHeader {
            format_version: STATE_FORMAT_VERSION,
            kind,
            num_qubits,
            mapping: self.mapping.clone(),
            num_electrons: self.num_electrons,
            num_records: Some(records),
            source: self.source.clone(),
        }
    }

    fn from_header(h: &StateHeader) -> Self {
        Self {
            mapping: h.mapping.clone(),
            num_electrons: h.num_electrons,
            source: h.source.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum QubitState {
    Binary(SparseState),
    General(GeneralState),
}

impl QubitState {
    pub fn num_qubits(&self) -> usize {
        match self {
            QubitState::Binary(s) => s.num_qubits(),
            QubitState::General(s) => s.num_qubits(),
        }
    }

    /// Number of stored terms (χ).
    pub fn len(&self) -> usize {
        match self {
            QubitState::Binary(s) => s.len(),
            QubitState::General(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The binary form, expanding a general state up to `cap` terms.
    pub fn into_binary(self, cap: u64) -> Result<SparseState> {
        match self {
            QubitState::Binary(s) => Ok(s),
            QubitState::General(g) => g.expand_to_binary(cap),
        }
    }
}

fn check_header(h: &StateHeader, found: usize) -> Result<()> {
    if h.format_version != STATE_FORMAT_VERSION {
        return Err(Error::parse(1, format!("unsupported format_version {}", h.format_version)));
    }
    match h.num_records {
        Some(k) if k != found => Err(Error::parse(1, format!("header announces {k} records, found {found}"))),
        _ => Ok(()),
    }
}

/// Text or binary, chosen by the leading bytes.
pub fn read_state(path: impl AsRef<Path>) -> Result<(QubitState, StateMeta)> {
    let mut r = open_reader(path.as_ref())?;
    if starts_with(&mut r, STATE_MAGIC)? {
        let (s, m) = read_state_binary_from(&mut r)?;
        Ok((QubitState::Binary(s), m))
    } else {
        read_state_from(r)
    }
}

pub fn read_state_from(mut r: impl BufRead) -> Result<(QubitState, StateMeta)> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let h: StateHeader = parse_header(&first, "state")?;
    let n = h.num_qubits;
    let state = match h.kind {
        StateKind::Binary => {
            let mut s = SparseState::with_capacity(n, h.num_records.unwrap_or(0));
            let mut records = 0;
            for item in data_lines(r, 2) {
                let (ln, line) = item?;
                let mut tok = line.split_whitespace();
                let (Some(bits), Some(re), Some(im), None) = (tok.next(), tok.next(), tok.next(), tok.next()) else {
                    return Err(Error::parse(ln, "expected 'bits re im'"));
                };
                let b = parse_bits(bits, n, ln)?;
                if s.get(&b).is_some() {
                    return Err(Error::parse(ln, format!("duplicate label {bits}")));
                }
                s.add(b, Complex64::new(parse_f64(re, ln)?, parse_f64(im, ln)?))?;
                records += 1;
            }
            check_header(&h, records)?;
            QubitState::Binary(s)
        }
        StateKind::General => {
            let mut g = GeneralState::new(n);
            let mut factors = Vec::with_capacity(n);
            for item in data_lines(r, 2) {
                let (ln, line) = item?;
                let v: Vec<f64> = line
                    .split_whitespace()
                    .map(|t| parse_f64(t, ln))
                    .collect::<Result<_>>()?;
                if v.len() != 2 + 4 * n {
                    return Err(Error::parse(ln, format!("expected {} numbers, found {}", 2 + 4 * n, v.len())));
                }
                factors.clear();
                factors.extend(v[2..].chunks_exact(4).map(|c| {
                    SingleQubitKet::new(Complex64::new(c[0], c[1]), Complex64::new(c[2], c[3]))
                }));
                g.push(Complex64::new(v[0], v[1]), &factors)?;
            }
            check_header(&h, g.len())?;
            QubitState::General(g)
        }
    };
    Ok((state, StateMeta::from_header(&h)))
}

pub fn write_state(state: &SparseState, meta: &StateMeta, path: impl AsRef<Path>) -> Result<()> {
    let mut w = create_writer(path.as_ref())?;
    write_state_to(&mut w, state, meta)?;
    w.flush()?;
    Ok(())
}

pub fn write_state_to(w: &mut impl Write, state: &SparseState, meta: &StateMeta) -> Result<()> {
    write_header(w, "state", &meta.header(StateKind::Binary, state.num_qubits(), state.len()))?;
    for (b, k) in state.sorted_terms() {
        writeln!(w, "{b} {} {}", fmt_f64(k.re), fmt_f64(k.im))?;
    }
    Ok(())
}

pub fn write_general_state(state: &GeneralState, meta: &StateMeta, path: impl AsRef<Path>) -> Result<()> {
    let mut w = create_writer(path.as_ref())?;
    write_general_state_to(&mut w, state, meta)?;
    w.flush()?;
    Ok(())
}

pub fn write_general_state_to(w: &mut impl Write, state: &GeneralState, meta: &StateMeta) -> Result<()> {
    write_header(w, "state", &meta.header(StateKind::General, state.num_qubits(), state.len()))?;
    for (lambda, factors) in state.terms() {
        let mut line = format!("{} {}", fmt_f64(lambda.re), fmt_f64(lambda.im));
        for f in factors {
            for x in [f.c0.re, f.c0.im, f.c1.re, f.c1.im] {
                line.push(' ');
                line.push_str(&fmt_f64(x));
            }
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn write_state_binary(state: &SparseState, meta: &StateMeta, path: impl AsRef<Path>) -> Result<()> {
    let mut w = create_writer(path.as_ref())?;
    write_binary_header(&mut w, STATE_MAGIC, &meta.header(StateKind::Binary, state.num_qubits(), state.len()))?;
    write_u64(&mut w, state.len() as u64)?;
    for (b, k) in state.sorted_terms() {
        write_bits(&mut w, b)?;
        write_complex(&mut w, k)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_state_binary_from(r: &mut impl Read) -> Result<(SparseState, StateMeta)> {
    let h: StateHeader = read_binary_header(r, STATE_MAGIC)?;
    if h.kind != StateKind::Binary {
        return Err(Error::parse(0, "binary state files hold binary-form states only"));
    }
    let count = read_u64(r)? as usize;
    let mut s = SparseState::with_capacity(h.num_qubits, count.min(1 << 24));
    for _ in 0..count {
        let b: BitString = read_bits(r, h.num_qubits)?;
        s.add(b, read_complex(r)?)?;
    }
    check_header(&h, count)?;
    Ok((s, StateMeta::from_header(&h)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_text_round_trip() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = SingleQubitKet::new(Complex64::new(h, 0.0), Complex64::new(0.0, h));
        let mut g = GeneralState::new(2);
        g.push(Complex64::new(0.6, 0.0), &[plus, SingleQubitKet::ONE]).unwrap();
        g.push(Complex64::new(0.0, 0.8), &[SingleQubitKet::ZERO, plus]).unwrap();
        let mut buf = Vec::new();
        write_general_state_to(&mut buf, &g, &StateMeta::default()).unwrap();
        let (back, _) = read_state_from(buf.as_slice()).unwrap();
        let QubitState::General(back) = back else { panic!("kind lost") };
        assert_eq!(back.len(), 2);
        for j in 0..2 {
            assert_eq!(back.coeff(j), g.coeff(j));
            assert_eq!(back.factors(j), g.factors(j));
        }
    }

    #[test]
    fn duplicate_label_is_rejected() {
        let text = "#state {\"format_version\":1,\"num_qubits\":2}\n01 1 0\n01 1 0\n";
        assert!(matches!(read_state_from(text.as_bytes()), Err(Error::Parse { line: 3, .. })));
    }
}
