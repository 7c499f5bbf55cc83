use std::fmt;

use num_complex::Complex64;

use super::pauli::{Mat2, MajoranaString, PauliLetter, Phase};
use crate::bitstate::BitString;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MappingKind {
    JordanWigner,
    Parity,
    Custom(String),
}

impl MappingKind {
    pub fn name(&self) -> &str {
        match self {
            MappingKind::JordanWigner => "jordan_wigner",
            MappingKind::Parity => "parity",
            MappingKind::Custom(name) => name,
        }
    }
}

impl fmt::Display for MappingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fermion-to-qubit encoding given by two Majorana strings per mode.
///
/// Mode `j` (0-based) owns `gammas[2j]` and `gammas[2j + 1]`, with
/// `a†_j = (gammas[2j] - i gammas[2j + 1]) / 2`. Construction checks that all
/// strings are Hermitian, pairwise anticommute, and that every annihilator
/// kills `|0…0⟩`.
#[derive(Clone, Debug)]
pub struct FermionMapping {
    num_modes: usize,
    gammas: Vec<MajoranaString>,
    kind: MappingKind,
}

/// A creation operator written as a sum of one or two product operators.
///
/// Each product is a coefficient and the list of non-identity single-qubit
/// factors.
#[derive(Clone, Debug)]
pub(crate) struct CreationOperator {
    pub products: Vec<(Complex64, Vec<(usize, Mat2)>)>,
}

impl FermionMapping {
    pub fn new(gammas: Vec<MajoranaString>, kind: MappingKind) -> Result<Self> {
        if gammas.is_empty() || !gammas.len().is_multiple_of(2) {
            return Err(Error::InvalidMapping(format!(
                "expected an even, nonzero number of Majorana strings, got {}",
                gammas.len()
            )));
        }
        let num_modes = gammas.len() / 2;
        let mapping = Self {
            num_modes,
            gammas,
            kind,
        };
        mapping.validate()?;
        Ok(mapping)
    }

    /// Jordan-Wigner: `gammas[2j] = Z_0…Z_{j-1} X_j`, `gammas[2j+1] = Z_0…Z_{j-1} Y_j`.
    pub fn jordan_wigner(num_modes: usize) -> Self {
        let mut gammas = Vec::with_capacity(2 * num_modes);
        for j in 0..num_modes {
            for last in [PauliLetter::X, PauliLetter::Y] {
                let letters = (0..num_modes)
                    .map(|m| match m.cmp(&j) {
                        std::cmp::Ordering::Less => PauliLetter::Z,
                        std::cmp::Ordering::Equal => last,
                        std::cmp::Ordering::Greater => PauliLetter::I,
                    })
                    .collect();
                gammas.push(MajoranaString::new(Phase::ONE, letters));
            }
        }
        Self {
            num_modes,
            gammas,
            kind: MappingKind::JordanWigner,
        }
    }

    /// Parity mapping: qubit `m` stores the occupation parity of modes `0..=m`.
    ///
    /// `gammas[2j] = Z_{j-1} X_j X_{j+1}…`, `gammas[2j+1] = Y_j X_{j+1}…`, i.e. the
    /// Jordan-Wigner strings conjugated by the ascending CNOT chain.
    pub fn parity(num_modes: usize) -> Self {
        let mut gammas = Vec::with_capacity(2 * num_modes);
        for j in 0..num_modes {
            let even = (0..num_modes)
                .map(|m| {
                    if m + 1 == j {
                        PauliLetter::Z
                    } else if m >= j {
                        PauliLetter::X
                    } else {
                        PauliLetter::I
                    }
                })
                .collect();
            let odd = (0..num_modes)
                .map(|m| match m.cmp(&j) {
                    std::cmp::Ordering::Less => PauliLetter::I,
                    std::cmp::Ordering::Equal => PauliLetter::Y,
                    std::cmp::Ordering::Greater => PauliLetter::X,
                })
                .collect();
            gammas.push(MajoranaString::new(Phase::ONE, even));
            gammas.push(MajoranaString::new(Phase::ONE, odd));
        }
        Self {
            num_modes,
            gammas,
            kind: MappingKind::Parity,
        }
    }

    pub fn by_name(name: &str, num_modes: usize) -> Result<Self> {
        match name {
            "jw" | "jordan_wigner" | "jordan-wigner" => Ok(Self::jordan_wigner(num_modes)),
            "parity" => Ok(Self::parity(num_modes)),
            other => Err(Error::InvalidMapping(format!("unknown mapping {other:?}"))),
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_modes;
        for (a, g) in self.gammas.iter().enumerate() {
            if g.len() != n {
                return Err(Error::InvalidMapping(format!(
                    "string {a} has {} letters, expected {n}",
                    g.len()
                )));
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidMapping(format!(
                    "string {a} ({g}) is not Hermitian"
                )));
            }
        }
        for a in 0..self.gammas.len() {
            for b in a + 1..self.gammas.len() {
                if !self.gammas[a].anticommutes(&self.gammas[b]) {
                    return Err(Error::InvalidMapping(format!(
                        "strings {a} ({}) and {b} ({}) do not anticommute",
                        self.gammas[a], self.gammas[b]
                    )));
                }
            }
        }
        for j in 0..n {
            if !self.annihilates_vacuum(j) {
                return Err(Error::InvalidMapping(format!(
                    "annihilator of mode {j} does not annihilate |0…0⟩"
                )));
            }
        }
        Ok(())
    }

    /// `a_j |0…0⟩ = 0` with `a_j = (γ_{2j} + i γ_{2j+1}) / 2`.
    fn annihilates_vacuum(&self, mode: usize) -> bool {
        let vacuum = BitString::zeros(self.num_modes);
        let (p1, b1) = self.gammas[2 * mode].act(&vacuum);
        let (p2, b2) = self.gammas[2 * mode + 1].act(&vacuum);
        b1 == b2 && Phase::I * p2 == Phase::MINUS_ONE * p1
    }

    #[inline]
    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn kind(&self) -> &MappingKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        self.kind.name()
    }

    pub fn gammas(&self) -> &[MajoranaString] {
        &self.gammas
    }

    /// `(γ_{2j}, γ_{2j+1})` for mode `j`.
    pub fn majorana_pair(&self, mode: usize) -> Result<(&MajoranaString, &MajoranaString)> {
        self.check_mode(mode)?;
        Ok((&self.gammas[2 * mode], &self.gammas[2 * mode + 1]))
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.num_modes {
            return Err(Error::IndexOutOfRange {
                index: mode,
                len: self.num_modes,
            });
        }
        Ok(())
    }

    /// Number of qubits on which the two Majorana strings of `mode` differ.
    ///
    /// Always at least one, since the pair anticommutes. A distance of one lets
    /// the creation operator contract into a single product of single-qubit
    /// operators.
    pub fn hamming_distance(&self, mode: usize) -> Result<usize> {
        let (a, b) = self.majorana_pair(mode)?;
        Ok(a.letter_distance(b))
    }

    pub fn hamming_distances(&self) -> Vec<usize> {
        (0..self.num_modes)
            .map(|j| self.gammas[2 * j].letter_distance(&self.gammas[2 * j + 1]))
            .collect()
    }

    /// `a†_j` as one contracted product (distance one) or two split products.
    pub(crate) fn creation_operator(&self, mode: usize) -> CreationOperator {
        let (g1, g2) = (&self.gammas[2 * mode], &self.gammas[2 * mode + 1]);
        let half = Complex64::new(0.5, 0.0);
        let minus_half_i = Complex64::new(0.0, -0.5);
        let factors = |g: &MajoranaString, skip: Option<usize>| -> Vec<(usize, Mat2)> {
            g.letters
                .iter()
                .enumerate()
                .filter(|(m, l)| **l != PauliLetter::I && Some(*m) != skip)
                .map(|(m, l)| (m, l.matrix()))
                .collect()
        };
        if g1.letter_distance(g2) == 1 {
            let p = g1
                .letters
                .iter()
                .zip(&g2.letters)
                .position(|(a, b)| a != b)
                .expect("distance one");
            let combined = g1.letters[p].matrix().scale(g1.phase.to_complex() * half)
                + g2.letters[p].matrix().scale(g2.phase.to_complex() * minus_half_i);
            let mut ops = factors(g1, Some(p));
            let at = ops.partition_point(|(m, _)| *m < p);
            ops.insert(at, (p, combined));
            CreationOperator {
                products: vec![(Complex64::new(1.0, 0.0), ops)],
            }
        } else {
            CreationOperator {
                products: vec![
                    (g1.phase.to_complex() * half, factors(g1, None)),
                    (g2.phase.to_complex() * minus_half_i, factors(g2, None)),
                ],
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jw_strings() {
        let m = FermionMapping::jordan_wigner(3);
        let text: Vec<String> = m.gammas().iter().map(|g| g.to_string()).collect();
        assert_eq!(text, ["+XII", "+YII", "+ZXI", "+ZYI", "+ZZX", "+ZZY"]);
        assert!(m.validate().is_ok());
    }

    #[test]
    fn parity_strings() {
        let m = FermionMapping::parity(3);
        let text: Vec<String> = m.gammas().iter().map(|g| g.to_string()).collect();
        assert_eq!(text, ["+XXX", "+YXX", "+ZXX", "+IYX", "+IZX", "+IIY"]);
        assert!(m.validate().is_ok());
    }

    #[test]
    fn hamming_distances() {
        assert_eq!(FermionMapping::jordan_wigner(5).hamming_distances(), vec![1; 5]);
        assert_eq!(FermionMapping::parity(5).hamming_distances(), vec![1, 2, 2, 2, 2]);
        assert!(FermionMapping::parity(5).hamming_distance(5).is_err());
    }

    #[test]
    fn rejects_identical_pair() {
        let g: MajoranaString = "+X".parse().unwrap();
        let err = FermionMapping::new(vec![g.clone(), g], MappingKind::Custom("bad".into()));
        assert!(matches!(err, Err(Error::InvalidMapping(_))));
    }

    #[test]
    fn rejects_swapped_pair_vacuum() {
        // Y,X anticommute but (Y + iX)|0⟩ ≠ 0
        let gammas = vec!["+Y".parse().unwrap(), "+X".parse().unwrap()];
        assert!(FermionMapping::new(gammas, MappingKind::Custom("swap".into())).is_err());
        let ok = vec!["+X".parse().unwrap(), "+Y".parse().unwrap()];
        assert!(FermionMapping::new(ok, MappingKind::Custom("jw1".into())).is_ok());
    }

    #[test]
    fn rejects_non_hermitian() {
        let gammas = vec!["+iX".parse().unwrap(), "+Y".parse().unwrap()];
        assert!(FermionMapping::new(gammas, MappingKind::Custom("c".into())).is_err());
    }
}
