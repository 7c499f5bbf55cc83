//! Mapping file: one Majorana string per line, `γ_0` first.
//!
//! ```text
//! # mapping parity
//! +XXX
//! +YXX
//! ...
//! ```
//!
//! Each line is a phase prefix (`+`, `-`, `+i`, `-i`) and one letter per
//! qubit. Other `#` lines are comments. A `# mapping <name>` line names the
//! mapping; a built-in name is honored only when the strings match it.

use std::io::{BufRead, Write};
use std::path::Path;

use super::codec::{create_writer, open_reader};
use crate::error::{Error, Result};
use crate::fermion::{FermionMapping, MajoranaString, MappingKind};

pub fn read_mapping(path: impl AsRef<Path>) -> Result<FermionMapping> {
    let fallback = path
        .as_ref()
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "custom".into());
    read_mapping_from(open_reader(path.as_ref())?, &fallback)
}

/// `default_name` labels the mapping when the file does not name it.
pub fn read_mapping_from(r: impl BufRead, default_name: &str) -> Result<FermionMapping> {
    let mut name: Option<String> = None;
    let mut gammas = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if let Some(c) = t.strip_prefix('#') {
            if let Some(n) = c.trim().strip_prefix("mapping ") {
                name = Some(n.trim().to_string());
            }
            continue;
        }
        if t.is_empty() {
            continue;
        }
        let g: MajoranaString = t.parse().map_err(|e| Error::parse(i + 1, format!("{e}")))?;
        if let Some(first) = gammas.first() {
            let first: &MajoranaString = first;
            if first.len() != g.len() {
                return Err(Error::parse(
                    i + 1,
                    format!("string has {} letters, expected {}", g.len(), first.len()),
                ));
            }
        }
        gammas.push(g);
    }
    let name = name.unwrap_or_else(|| default_name.to_string());
    if let Ok(builtin) = FermionMapping::by_name(&name, gammas.len() / 2) {
        if builtin.gammas() == gammas.as_slice() {
            return Ok(builtin);
        }
    }
    FermionMapping::new(gammas, MappingKind::Custom(name))
}

pub fn write_mapping(mapping: &FermionMapping, path: impl AsRef<Path>) -> Result<()> {
    let mut w = create_writer(path.as_ref())?;
    write_mapping_to(&mut w, mapping)?;
    w.flush()?;
    Ok(())
}

pub fn write_mapping_to(w: &mut impl Write, mapping: &FermionMapping) -> Result<()> {
    writeln!(w, "# mapping {}", mapping.name())?;
    writeln!(w, "# {} modes; line 2j+1 is γ_2j, line 2j+2 is γ_2j+1", mapping.num_modes())?;
    for g in mapping.gammas() {
        writeln!(w, "{g}")?;
    }
    Ok(())
}
