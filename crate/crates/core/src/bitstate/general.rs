use num_complex::Complex64;

use super::{BitString, SparseState};
use crate::error::{Error, Result};

/// Unnormalized single-qubit ket `c0|0⟩ + c1|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitKet {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl SingleQubitKet {
    pub const ZERO: Self = Self {
        c0: Complex64::new(1.0, 0.0),
        c1: Complex64::new(0.0, 0.0),
    };
    pub const ONE: Self = Self {
        c0: Complex64::new(0.0, 0.0),
        c1: Complex64::new(1.0, 0.0),
    };

    pub fn new(c0: Complex64, c1: Complex64) -> Self {
        Self { c0, c1 }
    }

    pub fn basis(bit: bool) -> Self {
        if bit {
            Self::ONE
        } else {
            Self::ZERO
        }
    }

    /// `⟨self|other⟩`.
    #[inline]
    pub fn inner(&self, other: &SingleQubitKet) -> Complex64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    #[inline]
    pub fn amplitude(&self, bit: bool) -> Complex64 {
        if bit {
            self.c1
        } else {
            self.c0
        }
    }

    pub fn is_finite(&self) -> bool {
        self.c0.re.is_finite() && self.c0.im.is_finite() && self.c1.re.is_finite() && self.c1.im.is_finite()
    }

    fn support(&self) -> u32 {
        (self.c0 != Complex64::default()) as u32 + (self.c1 != Complex64::default()) as u32
    }
}

/// Qubit wavefunction as a weighted sum of product states.
///
/// Factors are stored contiguously, `num_qubits` per term.
#[derive(Clone, Debug)]
pub struct GeneralState {
    num_qubits: usize,
    coeffs: Vec<Complex64>,
    factors: Vec<SingleQubitKet>,
}

impl GeneralState {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            coeffs: Vec::new(),
            factors: Vec::new(),
        }
    }

    pub fn push(&mut self, coeff: Complex64, factors: &[SingleQubitKet]) -> Result<()> {
        if factors.len() != self.num_qubits {
            return Err(Error::LengthMismatch {
                expected: self.num_qubits,
                found: factors.len(),
            });
        }
        if !coeff.re.is_finite() || !coeff.im.is_finite() || !factors.iter().all(|f| f.is_finite()) {
            return Err(Error::NonFinite);
        }
        self.coeffs.push(coeff);
        self.factors.extend_from_slice(factors);
        Ok(())
    }

    /// One product term per binary term, each factor a basis ket.
    pub fn from_sparse(state: &SparseState) -> Self {
        let n = state.num_qubits();
        let mut out = Self {
            num_qubits: n,
            coeffs: Vec::with_capacity(state.len()),
            factors: Vec::with_capacity(state.len() * n),
        };
        for (bits, amp) in state.iter() {
            out.coeffs.push(amp);
            out.factors.extend((0..n).map(|q| SingleQubitKet::basis(bits.get(q))));
        }
        out
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of product terms (χ).
    #[inline]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs[j]
    }

    #[inline]
    pub fn factors(&self, j: usize) -> &[SingleQubitKet] {
        &self.factors[j * self.num_qubits..(j + 1) * self.num_qubits]
    }

    pub fn terms(&self) -> impl Iterator<Item = (Complex64, &[SingleQubitKet])> + '_ {
        (0..self.len()).map(move |j| (self.coeffs[j], self.factors(j)))
    }

    /// Number of binary terms the expansion would touch before merging.
    pub fn expansion_size(&self) -> u128 {
        self.terms()
            .map(|(_, f)| {
                f.iter().try_fold(1u128, |acc, k| acc.checked_mul(k.support() as u128))
                    .unwrap_or(u128::MAX)
            })
            .fold(0u128, |a, b| a.saturating_add(b))
    }

    /// Expands every product into computational-basis terms.
    ///
    /// Fails with [`Error::ExpansionOverflow`] when more than `cap` binary terms
    /// would be generated.
    pub fn expand_to_binary(&self, cap: u64) -> Result<SparseState> {
        let required = self.expansion_size();
        if required > cap as u128 {
            return Err(Error::ExpansionOverflow { required, cap });
        }
        let n = self.num_qubits;
        let mut out = SparseState::with_capacity(n, required as usize);
        let zero = Complex64::default();
        let mut frontier: Vec<(BitString, Complex64)> = Vec::new();
        let mut next: Vec<(BitString, Complex64)> = Vec::new();
        for (coeff, factors) in self.terms() {
            frontier.clear();
            frontier.push((BitString::zeros(n), coeff));
            for (q, ket) in factors.iter().enumerate() {
                next.clear();
                for (bits, amp) in frontier.drain(..) {
                    if ket.c1 != zero {
                        let mut b1 = bits.clone();
                        b1.set(q, true);
                        next.push((b1, amp * ket.c1));
                    }
                    if ket.c0 != zero {
                        next.push((bits, amp * ket.c0));
                    }
                }
                std::mem::swap(&mut frontier, &mut next);
                if frontier.is_empty() {
                    break;
                }
            }
            for (bits, amp) in frontier.drain(..) {
                out.add(bits, amp)?;
            }
        }
        out.prune();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_state_expands_to_one_term() {
        let mut g = GeneralState::new(2);
        g.push(Complex64::new(1.0, 0.0), &[SingleQubitKet::ONE, SingleQubitKet::ZERO])
            .unwrap();
        let s = g.expand_to_binary(16).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.amplitude(&"10".parse().unwrap()), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn plus_plus_fans_out() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = SingleQubitKet::new(Complex64::new(h, 0.0), Complex64::new(h, 0.0));
        let mut g = GeneralState::new(2);
        g.push(Complex64::new(1.0, 0.0), &[plus, plus]).unwrap();
        let s = g.expand_to_binary(4).unwrap();
        assert_eq!(s.len(), 4);
        for label in ["00", "01", "10", "11"] {
            let a = s.amplitude(&label.parse().unwrap());
            assert!((a.re - 0.5).abs() < 1e-15 && a.im.abs() < 1e-15);
        }
    }

    #[test]
    fn overflow_reports_required_count() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = SingleQubitKet::new(Complex64::new(h, 0.0), Complex64::new(h, 0.0));
        let mut g = GeneralState::new(3);
        g.push(Complex64::new(1.0, 0.0), &[plus, plus, plus]).unwrap();
        match g.expand_to_binary(7) {
            Err(Error::ExpansionOverflow { required, cap }) => {
                assert_eq!(required, 8);
                assert_eq!(cap, 7);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn push_checks_factor_count() {
        let mut g = GeneralState::new(2);
        assert!(g.push(Complex64::new(1.0, 0.0), &[SingleQubitKet::ZERO]).is_err());
    }
}
