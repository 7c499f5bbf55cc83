use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::bitstate::{BitString, GeneralState, SingleQubitKet, SparseState};
use crate::error::{Error, Result};
use crate::fermion::{MajoranaString, PauliLetter};

/// `o_k · ⊗_m O_{k,m}` with identity on every qubit not listed.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coefficient: Complex64,
    /// Non-identity letters, strictly ascending by qubit.
    letters: Vec<(usize, PauliLetter)>,
}

impl PauliTerm {
    /// Identity letters are dropped; a qubit listed twice is an error.
    pub fn new(
        coefficient: Complex64,
        letters: impl IntoIterator<Item = (usize, PauliLetter)>,
    ) -> Result<Self> {
        if !coefficient.re.is_finite() || !coefficient.im.is_finite() {
            return Err(Error::NonFinite);
        }
        let mut letters: Vec<(usize, PauliLetter)> = letters
            .into_iter()
            .filter(|(_, l)| *l != PauliLetter::I)
            .collect();
        letters.sort_unstable_by_key(|(q, _)| *q);
        if let Some(w) = letters.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(format!(
                "qubit {} appears twice in a Pauli term",
                w[0].0
            )));
        }
        Ok(Self {
            coefficient,
            letters,
        })
    }

    /// From one letter per qubit, qubit 0 first.
    pub fn from_dense(coefficient: Complex64, letters: &[PauliLetter]) -> Result<Self> {
        Self::new(coefficient, letters.iter().copied().enumerate())
    }

    /// Absorbs the string's phase into the coefficient.
    pub fn from_majorana(coefficient: Complex64, string: &MajoranaString) -> Result<Self> {
        Self::from_dense(coefficient * string.phase.to_complex(), &string.letters)
    }

    pub fn letters(&self) -> &[(usize, PauliLetter)] {
        &self.letters
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        match self.letters.binary_search_by_key(&q, |(i, _)| *i) {
            Ok(k) => self.letters[k].1,
            Err(_) => PauliLetter::I,
        }
    }

    /// Highest qubit touched.
    pub fn max_qubit(&self) -> Option<usize> {
        self.letters.last().map(|(q, _)| *q)
    }

    /// Dense letter string of width `n`.
    pub fn dense_string(&self, n: usize) -> String {
        (0..n).map(|q| self.letter(q).as_char()).collect()
    }
}

/// `O = Σ_k o_k P_k` over `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSum {
    num_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl ObservableSum {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(num_qubits: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        let mut o = Self::new(num_qubits);
        for t in terms {
            o.push(t)?;
        }
        Ok(o)
    }

    pub fn push(&mut self, term: PauliTerm) -> Result<()> {
        if let Some(q) = term.max_qubit() {
            if q >= self.num_qubits {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    len: self.num_qubits,
                });
            }
        }
        self.terms.push(term);
        Ok(())
    }

    /// Appends all terms of `other`.
    pub fn extend(&mut self, other: &ObservableSum) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::LengthMismatch {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        self.terms.extend(other.terms.iter().cloned());
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges terms with equal letters; each merged coefficient must be real
    /// within `tol`, since bare Pauli strings are Hermitian and independent.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let mut merged: BTreeMap<&[(usize, PauliLetter)], Complex64> = BTreeMap::new();
        for t in &self.terms {
            *merged.entry(t.letters()).or_default() += t.coefficient;
        }
        merged.values().all(|c| c.im.abs() <= tol)
    }
}

struct Masks {
    flip: BitString,
    sign: BitString,
    /// `i^{#Y}`
    y_phase: Complex64,
}

impl Masks {
    fn new(term: &PauliTerm, n: usize) -> Self {
        let mut flip = BitString::zeros(n);
        let mut sign = BitString::zeros(n);
        let mut ny = 0u32;
        for &(q, l) in term.letters() {
            match l {
                PauliLetter::X => flip.set(q, true),
                PauliLetter::Y => {
                    flip.set(q, true);
                    sign.set(q, true);
                    ny += 1;
                }
                PauliLetter::Z => sign.set(q, true),
                PauliLetter::I => {}
            }
        }
        Self {
            flip,
            sign,
            y_phase: Complex64::new(0.0, 1.0).powu(ny),
        }
    }
}

/// `⟨ψ|O|ψ⟩` for a binary-form state.
///
/// `P|b⟩ = i^{#Y} (-1)^{|b ∧ (Y∪Z)|} |b ⊕ x⟩`, so each term costs one
/// lookup per stored amplitude.
pub fn expectation(state: &SparseState, observable: &ObservableSum) -> Result<Complex64> {
    let n = state.num_qubits();
    if observable.num_qubits() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: observable.num_qubits(),
        });
    }
    let mut total = Complex64::default();
    for term in observable.terms() {
        let m = Masks::new(term, n);
        let diagonal = m.flip.is_zero();
        let mut acc = Complex64::default();
        for (b, k) in state.iter() {
            let bra = if diagonal {
                k
            } else {
                let mut target = b.clone();
                target.xor_assign(&m.flip);
                match state.get(&target) {
                    Some(a) => a,
                    None => continue,
                }
            };
            let v = bra.conj() * k;
            if b.and_count_ones(&m.sign) % 2 == 1 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        total += term.coefficient * m.y_phase * acc;
    }
    Ok(total)
}

/// `⟨ψ|O|ψ⟩` for a general-form state:
/// `Σ_k o_k Σ_{j,j'} λ*_{j'} λ_j Π_m ⟨ψ_{j',m}|O_{k,m}|ψ_{j,m}⟩`.
pub fn expectation_general(state: &GeneralState, observable: &ObservableSum) -> Result<Complex64> {
    let n = state.num_qubits();
    if observable.num_qubits() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: observable.num_qubits(),
        });
    }
    let mut total = Complex64::default();
    let mut moved: Vec<SingleQubitKet> = vec![SingleQubitKet::ZERO; n];
    for term in observable.terms() {
        let mut acc = Complex64::default();
        for (lambda, factors) in state.terms() {
            moved.copy_from_slice(factors);
            for &(q, l) in term.letters() {
                moved[q] = l.matrix().apply(&factors[q]);
            }
            for (lambda_p, factors_p) in state.terms() {
                let mut o = lambda_p.conj() * lambda;
                for (bra, ket) in factors_p.iter().zip(&moved) {
                    o *= bra.inner(ket);
                }
                acc += o;
            }
        }
        total += term.coefficient * acc;
    }
    Ok(total)
}
