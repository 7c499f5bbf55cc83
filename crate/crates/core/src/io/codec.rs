//! Shared text and little-endian binary primitives.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::bitstate::BitString;
use crate::error::{Error, Result};

/// 17 significant digits: enough for an exact `f64` round trip. Negative
/// zero is written as zero so equal values always print identically.
pub(crate) fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub(crate) fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("not a number: {tok:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

pub(crate) fn parse_bits(tok: &str, width: usize, line: usize) -> Result<BitString> {
    if tok.len() != width {
        return Err(Error::parse(
            line,
            format!("bitstring {tok:?} has length {}, header says {width}", tok.len()),
        ));
    }
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid bitstring {tok:?}")))
}

/// Splits `#<tag> {json}` into its JSON payload.
pub(crate) fn parse_header<T: DeserializeOwned>(line: &str, tag: &str) -> Result<T> {
    let prefix = format!("#{tag}");
    let json = line
        .trim_end()
        .strip_prefix(&prefix)
        .ok_or_else(|| Error::parse(1, format!("expected a '{prefix} {{...}}' header line")))?;
    serde_json::from_str(json.trim()).map_err(|e| Error::parse(1, format!("bad header: {e}")))
}

pub(crate) fn write_header<T: Serialize>(w: &mut impl Write, tag: &str, header: &T) -> Result<()> {
    let json = serde_json::to_string(header).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    writeln!(w, "#{tag} {json}")?;
    Ok(())
}

pub(crate) fn open_reader(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

pub(crate) fn create_writer(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// True when the stream starts with `magic`; nothing is consumed.
pub(crate) fn starts_with(r: &mut impl BufRead, magic: &[u8]) -> Result<bool> {
    Ok(r.fill_buf()?.starts_with(magic))
}

/// Non-empty, non-comment lines after the header, with 1-based line numbers.
pub(crate) fn data_lines<R: BufRead>(r: R, first_line: usize) -> impl Iterator<Item = Result<(usize, String)>> {
    r.lines().enumerate().filter_map(move |(i, l)| match l {
        Err(e) => Some(Err(e.into())),
        Ok(s) => {
            let t = s.trim();
            if t.is_empty() || t.starts_with('#') {
                None
            } else {
                Some(Ok((i + first_line, t.to_string())))
            }
        }
    })
}

pub(crate) fn write_u32(w: &mut impl Write, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub(crate) fn write_u64(w: &mut impl Write, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub(crate) fn write_f64(w: &mut impl Write, v: f64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub(crate) fn write_complex(w: &mut impl Write, z: Complex64) -> Result<()> {
    write_f64(w, z.re)?;
    write_f64(w, z.im)
}

pub(crate) fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub(crate) fn read_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

pub(crate) fn read_complex(r: &mut impl Read) -> Result<Complex64> {
    Ok(Complex64::new(read_f64(r)?, read_f64(r)?))
}

pub(crate) fn write_bits(w: &mut impl Write, b: &BitString) -> Result<()> {
    for &word in b.words() {
        write_u64(w, word)?;
    }
    Ok(())
}

pub(crate) fn read_bits(r: &mut impl Read, width: usize) -> Result<BitString> {
    let words = width.div_ceil(64);
    let mut buf = Vec::with_capacity(words);
    for _ in 0..words {
        buf.push(read_u64(r)?);
    }
    BitString::from_words(width, &buf)
}

/// `magic`, then a length-prefixed JSON header.
pub(crate) fn write_binary_header<T: Serialize>(w: &mut impl Write, magic: &[u8; 4], header: &T) -> Result<()> {
    let json = serde_json::to_vec(header).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    w.write_all(magic)?;
    write_u32(w, json.len() as u32)?;
    w.write_all(&json)?;
    Ok(())
}

pub(crate) fn read_binary_header<T: DeserializeOwned>(r: &mut impl Read, magic: &[u8; 4]) -> Result<T> {
    let mut m = [0u8; 4];
    r.read_exact(&mut m)?;
    if &m != magic {
        return Err(Error::parse(0, format!("bad magic {m:?}, expected {magic:?}")));
    }
    let len = read_u32(r)? as usize;
    let mut json = vec![0u8; len];
    r.read_exact(&mut json)?;
    serde_json::from_slice(&json).map_err(|e| Error::parse(0, format!("bad binary header: {e}")))
}
