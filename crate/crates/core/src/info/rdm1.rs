use nalgebra::DMatrix;
use num_complex::Complex64;

use super::observable::{expectation, ObservableSum, PauliTerm};
use crate::bitstate::SparseState;
use crate::error::{Error, Result};
use crate::fermion::{FermionMapping, MappingKind};
use crate::trace::hermitian_eigenvalues;

/// `ρ_ij = ⟨ψ|a†_i a_j|ψ⟩` over spin-orbitals.
#[derive(Clone, Debug)]
pub struct OneBodyRdm {
    pub matrix: DMatrix<Complex64>,
}

impl OneBodyRdm {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Expected electron count.
    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// Spin-orbital occupations `ρ_ii`.
    pub fn occupations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Natural spin-orbital occupations, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// How spin-orbital natural occupations are reported.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SpinPairing {
    /// Consecutive eigenvalues summed into spatial occupations in `[0, 2]`.
    #[default]
    Paired,
    /// Raw spin-orbital eigenvalues in `[0, 1]`.
    SpinOrbital,
}

/// One-body RDM of an encoded state.
///
/// Jordan-Wigner states use the closed form `a_j|b⟩ = (-1)^{|b below j|} |b - j⟩`
/// directly on the labels; other mappings expand `a†_i a_j` into four
/// Majorana products and evaluate them as Pauli expectations.
pub fn one_body_rdm(state: &SparseState, mapping: &FermionMapping) -> Result<OneBodyRdm> {
    let n = mapping.num_modes();
    if state.num_qubits() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: state.num_qubits(),
        });
    }
    match mapping.kind() {
        MappingKind::JordanWigner => Ok(jw_rdm(state)),
        _ => majorana_rdm(state, mapping),
    }
}

fn jw_rdm(state: &SparseState) -> OneBodyRdm {
    let n = state.num_qubits();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (b, k) in state.iter() {
        for j in b.ones() {
            let mut c = b.clone();
            c.set(j, false);
            let sj = b.count_ones_below(j) % 2;
            for i in 0..n {
                if c.get(i) {
                    continue;
                }
                let si = c.count_ones_below(i) % 2;
                let mut d = c.clone();
                d.set(i, true);
                if let Some(a) = state.get(&d) {
                    let v = a.conj() * k;
                    if (si + sj) % 2 == 1 {
                        m[(i, j)] -= v;
                    } else {
                        m[(i, j)] += v;
                    }
                }
            }
        }
    }
    OneBodyRdm { matrix: m }
}

fn majorana_rdm(state: &SparseState, mapping: &FermionMapping) -> Result<OneBodyRdm> {
    let n = mapping.num_modes();
    let q = Complex64::new(0.25, 0.0);
    let iq = Complex64::new(0.0, 0.25);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        let (gi0, gi1) = mapping.majorana_pair(i)?;
        for j in i..n {
            let (gj0, gj1) = mapping.majorana_pair(j)?;
            // a†_i a_j = ¼(γ_2i - iγ_2i+1)(γ_2j + iγ_2j+1)
            let obs = ObservableSum::from_terms(
                n,
                [
                    PauliTerm::from_majorana(q, &(gi0 * gj0))?,
                    PauliTerm::from_majorana(iq, &(gi0 * gj1))?,
                    PauliTerm::from_majorana(-iq, &(gi1 * gj0))?,
                    PauliTerm::from_majorana(q, &(gi1 * gj1))?,
                ],
            )?;
            let v = expectation(state, &obs)?;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
        m[(i, i)].im = 0.0;
    }
    Ok(OneBodyRdm { matrix: m })
}

/// Natural-orbital occupation numbers, descending.
///
/// Under [`SpinPairing::Paired`] the sorted spin-orbital eigenvalues are
/// summed two at a time into spatial occupations.
pub fn noon(rdm: &OneBodyRdm, pairing: SpinPairing) -> Result<Vec<f64>> {
    let mut ev = rdm.eigenvalues();
    ev.reverse();
    match pairing {
        SpinPairing::SpinOrbital => Ok(ev),
        SpinPairing::Paired => {
            if ev.len() % 2 == 1 {
                return Err(Error::InvalidArgument(format!(
                    "{} spin-orbitals cannot be paired",
                    ev.len()
                )));
            }
            Ok(ev.chunks_exact(2).map(|p| p[0] + p[1]).collect())
        }
    }
}
