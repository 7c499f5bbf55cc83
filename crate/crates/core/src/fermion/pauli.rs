use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bitstate::{BitString, SingleQubitKet};
use crate::error::{Error, Result};

/// Power of `i`: one of `+1, +i, -1, -i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(power: u8) -> Self {
        Phase(power % 4)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    #[inline]
    fn xz(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    /// Flips the computational-basis bit.
    #[inline]
    pub fn flips(self) -> bool {
        matches!(self, PauliLetter::X | PauliLetter::Y)
    }

    /// `σ|b⟩ = phase · |b'⟩`; returns `(phase, b')`.
    #[inline]
    pub fn act(self, bit: bool) -> (Phase, bool) {
        match self {
            PauliLetter::I => (Phase::ONE, bit),
            PauliLetter::X => (Phase::ONE, !bit),
            PauliLetter::Y => (if bit { Phase::MINUS_I } else { Phase::I }, !bit),
            PauliLetter::Z => (if bit { Phase::MINUS_ONE } else { Phase::ONE }, bit),
        }
    }

    /// Single-qubit product `self · rhs = phase · letter`.
    pub fn product(self, rhs: PauliLetter) -> (Phase, PauliLetter) {
        use PauliLetter::*;
        match (self, rhs) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, X) => (Phase::MINUS_I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, Y) => (Phase::MINUS_I, X),
            (Z, X) => (Phase::I, Y),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }

    pub fn matrix(self) -> Mat2 {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        Mat2(match self {
            PauliLetter::I => [[l, o], [o, l]],
            PauliLetter::X => [[o, l], [l, o]],
            PauliLetter::Y => [[o, -i], [i, o]],
            PauliLetter::Z => [[l, o], [o, -l]],
        })
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// Dense 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        PauliLetter::I.matrix()
    }

    pub fn scale(self, s: Complex64) -> Self {
        let m = self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn apply(&self, ket: &SingleQubitKet) -> SingleQubitKet {
        let m = self.0;
        SingleQubitKet::new(
            m[0][0] * ket.c0 + m[0][1] * ket.c1,
            m[1][0] * ket.c0 + m[1][1] * ket.c1,
        )
    }
}

impl std::ops::Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

/// Signed Pauli string `phase · σ_0 ⊗ … ⊗ σ_{N-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MajoranaString {
    pub phase: Phase,
    pub letters: Vec<PauliLetter>,
}

impl MajoranaString {
    pub fn new(phase: Phase, letters: Vec<PauliLetter>) -> Self {
        Self { phase, letters }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Phase::ONE, vec![PauliLetter::I; n])
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Hermitian iff the phase is real.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Two Pauli strings anticommute iff they differ non-trivially on an odd
    /// number of qubits.
    pub fn anticommutes(&self, other: &MajoranaString) -> bool {
        let clashes = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| {
                let (ax, az) = a.xz();
                let (bx, bz) = b.xz();
                (ax & bz) ^ (az & bx)
            })
            .count();
        clashes % 2 == 1
    }

    /// Number of qubits on which the two strings carry different letters.
    pub fn letter_distance(&self, other: &MajoranaString) -> usize {
        self.letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| a != b)
            .count()
    }

    pub fn x_mask(&self) -> BitString {
        let flags: Vec<bool> = self.letters.iter().map(|l| l.flips()).collect();
        BitString::from_bools(&flags)
    }

    /// `P|bits⟩ = phase · |bits'⟩`.
    pub fn act(&self, bits: &BitString) -> (Phase, BitString) {
        let mut phase = self.phase;
        let mut out = bits.clone();
        for (q, letter) in self.letters.iter().enumerate() {
            let (p, b) = letter.act(bits.get(q));
            phase = phase * p;
            out.set(q, b);
        }
        (phase, out)
    }
}

impl Mul for &MajoranaString {
    type Output = MajoranaString;

    fn mul(self, rhs: &MajoranaString) -> MajoranaString {
        let mut phase = self.phase * rhs.phase;
        let letters = self
            .letters
            .iter()
            .zip(&rhs.letters)
            .map(|(a, b)| {
                let (p, l) = a.product(*b);
                phase = phase * p;
                l
            })
            .collect();
        MajoranaString { phase, letters }
    }
}

impl fmt::Display for MajoranaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase)?;
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for MajoranaString {
    type Err = Error;

    /// Accepts a phase prefix (`+`, `-`, `+i`, `-i`) followed by letters from
    /// `IXYZ`; whitespace between prefix and letters is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::ONE, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else {
            return Err(Error::InvalidArgument(format!(
                "Majorana string {s:?} lacks a phase prefix"
            )));
        };
        let letters = rest
            .trim()
            .chars()
            .map(|c| {
                PauliLetter::from_char(c).ok_or_else(|| {
                    Error::InvalidArgument(format!("invalid Pauli letter {c:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::InvalidArgument("empty Pauli string".into()));
        }
        Ok(Self { phase, letters })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PauliLetter::*;

    fn mat_mul(a: Mat2, b: Mat2) -> Mat2 {
        let mut out = [[Complex64::default(); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a.0[r][0] * b.0[0][c] + a.0[r][1] * b.0[1][c];
            }
        }
        Mat2(out)
    }

    #[test]
    fn letter_products_match_matrices() {
        for a in [I, X, Y, Z] {
            for b in [I, X, Y, Z] {
                let (p, l) = a.product(b);
                let expected = mat_mul(a.matrix(), b.matrix());
                assert_eq!(l.matrix().scale(p.to_complex()), expected, "{a:?}{b:?}");
            }
        }
    }

    #[test]
    fn action_matches_matrices() {
        for l in [I, X, Y, Z] {
            for bit in [false, true] {
                let (p, out) = l.act(bit);
                let col = l.matrix().apply(&SingleQubitKet::basis(bit));
                assert_eq!(col.amplitude(out), p.to_complex());
                assert_eq!(col.amplitude(!out), Complex64::default());
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let s: MajoranaString = "-iZZY".parse().unwrap();
        assert_eq!(s.phase, Phase::MINUS_I);
        assert_eq!(s.letters, vec![Z, Z, Y]);
        assert_eq!(s.to_string(), "-iZZY");
        let t: MajoranaString = "+ XI".parse().unwrap();
        assert_eq!(t.to_string(), "+XI");
        assert!("ZZ".parse::<MajoranaString>().is_err());
        assert!("+ZQ".parse::<MajoranaString>().is_err());
    }

    #[test]
    fn anticommutation_rule() {
        let a: MajoranaString = "+XI".parse().unwrap();
        let b: MajoranaString = "+ZX".parse().unwrap();
        let c: MajoranaString = "+ZZ".parse().unwrap();
        assert!(a.anticommutes(&b));
        assert!(a.anticommutes(&c));
        assert!(b.anticommutes(&c));
        let d: MajoranaString = "+XX".parse().unwrap();
        let e: MajoranaString = "+ZZ".parse().unwrap();
        assert!(!d.anticommutes(&e));
    }

    #[test]
    fn string_product_tracks_phase() {
        let a: MajoranaString = "+XZ".parse().unwrap();
        let b: MajoranaString = "+YZ".parse().unwrap();
        let p = &a * &b;
        assert_eq!(p.to_string(), "+iZI");
    }
}
