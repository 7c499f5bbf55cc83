//! Analysis outputs (mutual information, sweeps, one-body RDMs) and small
//! auxiliary inputs (occupation lists, observables).
//!
//! Numbers are printed in shortest round-trip form.

use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::codec::{create_writer, data_lines, open_reader, parse_f64};
use crate::active::{EntropySweep, SelectionMethod};
use crate::error::{Error, Result};
use crate::fermion::PauliLetter;
use crate::info::{MutualInformationMatrix, ObservableSum, OneBodyRdm, PauliTerm};

/// Square CSV: a header row of qubit indices, then one row per qubit.
pub fn write_mi_csv(w: &mut impl Write, mi: &MutualInformationMatrix) -> Result<()> {
    let n = mi.size();
    let head: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    writeln!(w, "{}", head.join(","))?;
    for i in 0..n {
        let row: Vec<String> = mi.row(i).iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn read_mi_csv(r: impl BufRead) -> Result<MutualInformationMatrix> {
    let mut lines = r.lines().enumerate();
    let n = match lines.next() {
        Some((_, l)) => l?.split(',').filter(|t| !t.trim().is_empty()).count(),
        None => return Err(Error::parse(1, "empty CSV")),
    };
    let mut values = Vec::with_capacity(n * n);
    for (i, l) in lines {
        let l = l?;
        if l.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = l.split(',').map(|t| parse_f64(t.trim(), i + 1)).collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::parse(i + 1, format!("expected {n} columns, found {}", row.len())));
        }
        values.extend(row);
    }
    MutualInformationMatrix::from_values(n, values)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiReport {
    pub mapping: Option<String>,
    pub num_qubits: usize,
    pub chi: usize,
    /// `nats` or `bits`.
    pub units: String,
    pub values: Vec<Vec<f64>>,
}

impl MiReport {
    pub fn new(mi: &MutualInformationMatrix, mapping: Option<String>, chi: usize, units: &str) -> Self {
        Self {
            mapping,
            num_qubits: mi.size(),
            chi,
            units: units.to_string(),
            values: (0..mi.size()).map(|i| mi.row(i).to_vec()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub method: SelectionMethod,
    pub size: usize,
    pub von_neumann: f64,
    pub shannon: f64,
    pub selection: Vec<usize>,
}

pub fn sweep_records(sweep: &EntropySweep) -> Vec<SweepRecord> {
    (0..sweep.sizes.len())
        .map(|k| SweepRecord {
            method: sweep.method,
            size: sweep.sizes[k],
            von_neumann: sweep.von_neumann[k],
            shannon: sweep.shannon[k],
            selection: sweep.selections[k].clone(),
        })
        .collect()
}

/// Flat table; the selection column lists indices separated by spaces.
pub fn write_sweep_csv(w: &mut impl Write, sweep: &EntropySweep) -> Result<()> {
    writeln!(w, "method,size,von_neumann,shannon,selection")?;
    for r in sweep_records(sweep) {
        let sel: Vec<String> = r.selection.iter().map(|q| q.to_string()).collect();
        writeln!(
            w,
            "{},{},{},{},{}",
            r.method,
            r.size,
            r.von_neumann,
            r.shannon,
            sel.join(" ")
        )?;
    }
    Ok(())
}

pub fn write_json<T: Serialize>(w: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

pub fn write_json_file<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let mut w = create_writer(path.as_ref())?;
    write_json(&mut w, value)?;
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneBodyRdmReport {
    pub mapping: String,
    pub num_modes: usize,
    pub trace: f64,
    pub real: Vec<Vec<f64>>,
    pub imag: Vec<Vec<f64>>,
    /// Natural occupations, descending.
    pub noon: Vec<f64>,
    /// `paired` or `spin_orbital`.
    pub pairing: String,
}

impl OneBodyRdmReport {
    pub fn new(rdm: &OneBodyRdm, mapping: &str, noon: Vec<f64>, pairing: &str) -> Self {
        let n = rdm.dim();
        let part = |f: fn(Complex64) -> f64| (0..n).map(|i| (0..n).map(|j| f(rdm.matrix[(i, j)])).collect()).collect();
        Self {
            mapping: mapping.to_string(),
            num_modes: n,
            trace: rdm.trace(),
            real: part(|z| z.re),
            imag: part(|z| z.im),
            noon,
            pairing: pairing.to_string(),
        }
    }
}

/// Whitespace- or comma-separated numbers; `#` starts a comment line.
pub fn read_occupations(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    read_occupations_from(open_reader(path.as_ref())?)
}

pub fn read_occupations_from(r: impl BufRead) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in data_lines(r, 1) {
        let (ln, line) = item?;
        for t in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            out.push(parse_f64(t, ln)?);
        }
    }
    Ok(out)
}

/// Observable file: one term per line, `re im letters`.
///
/// `letters` is either a dense string of `num_qubits` characters from
/// `IXYZ` (qubit 0 first) or sparse tokens such as `X0 Z3`; an empty
/// `letters` is the identity.
pub fn read_observable(path: impl AsRef<Path>, num_qubits: usize) -> Result<ObservableSum> {
    read_observable_from(open_reader(path.as_ref())?, num_qubits)
}

pub fn read_observable_from(r: impl BufRead, num_qubits: usize) -> Result<ObservableSum> {
    let mut obs = ObservableSum::new(num_qubits);
    for item in data_lines(r, 1) {
        let (ln, line) = item?;
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() < 2 {
            return Err(Error::parse(ln, "expected 're im letters'"));
        }
        let c = Complex64::new(parse_f64(tok[0], ln)?, parse_f64(tok[1], ln)?);
        let rest = &tok[2..];
        let dense = rest.len() == 1 && rest[0].len() == num_qubits && rest[0].chars().all(|ch| PauliLetter::from_char(ch).is_some());
        let term = if dense {
            let letters: Vec<PauliLetter> = rest[0].chars().filter_map(PauliLetter::from_char).collect();
            PauliTerm::from_dense(c, &letters)
        } else {
            let letters = rest
                .iter()
                .map(|t| {
                    let mut chars = t.chars();
                    let l = chars.next().and_then(PauliLetter::from_char);
                    let q = chars.as_str().parse::<usize>().ok();
                    match (l, q) {
                        (Some(l), Some(q)) => Ok((q, l)),
                        _ => Err(Error::parse(ln, format!("bad Pauli token {t:?}"))),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            PauliTerm::new(c, letters)
        }
        .map_err(|e| Error::parse(ln, e.to_string()))?;
        obs.push(term).map_err(|e| Error::parse(ln, e.to_string()))?;
    }
    Ok(obs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mi_csv_round_trip() {
        let mi = MutualInformationMatrix::from_values(2, vec![0.0, 1.3862943611198906, 1.3862943611198906, 0.0]).unwrap();
        let mut buf = Vec::new();
        write_mi_csv(&mut buf, &mi).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "0,1\n0,1.3862943611198906\n1.3862943611198906,0\n");
        assert_eq!(read_mi_csv(buf.as_slice()).unwrap(), mi);
    }

    #[test]
    fn observable_forms() {
        let o = read_observable_from("# comment\n1 0 ZII\n0.5 0 X0 Y2\n2 0\n".as_bytes(), 3).unwrap();
        assert_eq!(o.len(), 3);
        assert_eq!(o.terms()[0].letters(), &[(0, PauliLetter::Z)]);
        assert_eq!(o.terms()[1].letter(2), PauliLetter::Y);
        assert!(o.terms()[2].letters().is_empty());
        assert!(matches!(read_observable_from("1 0 X5\n".as_bytes(), 3), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn occupations_parse() {
        assert_eq!(read_occupations_from("# noon\n2.0, 1.5\n0.5 0\n".as_bytes()).unwrap(), vec![2.0, 1.5, 0.5, 0.0]);
    }
}
