use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::bitstate::{BitString, SparseState};
use crate::error::{Error, Result};
use crate::trace::{direct_trace, hermitian_eigenvalues, QubitSubset, ReducedDensityMatrix};

/// Eigenvalues below this are treated as exact zeros before taking logs.
pub const EIGENVALUE_CLAMP: f64 = 1e-12;

/// Eigenvalues below this reject the matrix as not positive semi-definite.
pub const PSD_TOLERANCE: f64 = 1e-8;

/// `-Σ λ ln λ` over a spectrum, in nats.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigenvalues {
        if !l.is_finite() {
            return Err(Error::NonFinite);
        }
        if l < -PSD_TOLERANCE {
            return Err(Error::NotPsd(l));
        }
        if l > EIGENVALUE_CLAMP {
            s -= l * l.ln();
        }
    }
    Ok(s.max(0.0))
}

/// `-tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &ReducedDensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&hermitian_eigenvalues(&rho.matrix))
}

/// `-Σ p ln p` of a probability vector; entries `≤ 0` contribute nothing.
pub fn shannon_of_probabilities(p: impl IntoIterator<Item = f64>) -> f64 {
    let s: f64 = p
        .into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.ln())
        .sum();
    s.max(0.0)
}

/// Entropy of the computational-basis measurement on `A`.
///
/// `p(a) = Σ_{i : i_A = a} |k_i|²`, the diagonal of `ρ_A`, built straight
/// from the amplitudes without forming the matrix.
pub fn shannon_entropy(state: &SparseState, keep: &QubitSubset) -> Result<f64> {
    check_width(state, keep)?;
    if keep.is_empty() {
        return Ok(0.0);
    }
    let gather = keep.gather();
    let mut marginal: FxHashMap<BitString, f64> = FxHashMap::default();
    for (bits, amp) in state.iter() {
        *marginal.entry(gather.apply(bits)).or_default() += amp.norm_sqr();
    }
    Ok(shannon_of_probabilities(marginal.into_values()))
}

/// von Neumann entropy of `ρ_A` for a pure state.
///
/// Traces onto whichever of `A` and its complement is smaller; both sides
/// share the nonzero spectrum.
pub fn subsystem_entropy(state: &SparseState, keep: &QubitSubset) -> Result<f64> {
    check_width(state, keep)?;
    if keep.is_empty() {
        return Ok(0.0);
    }
    let other = keep.complement();
    if other.is_empty() {
        // ρ = |ψ⟩⟨ψ| has the single nonzero eigenvalue ‖ψ‖²
        return entropy_of_spectrum(&[state.norm_sqr()]);
    }
    let side = if other.len() < keep.len() {
        &other
    } else {
        keep
    };
    von_neumann_entropy(&direct_trace(state, side)?)
}

/// `S(ρ_q)` for every qubit `q`.
pub fn single_qubit_entropies(state: &SparseState) -> Result<Vec<f64>> {
    let n = state.num_qubits();
    (0..n)
        .into_par_iter()
        .map(|q| von_neumann_entropy(&direct_trace(state, &QubitSubset::single(n, q)?)?))
        .collect()
}

fn check_width(state: &SparseState, keep: &QubitSubset) -> Result<()> {
    if keep.num_qubits() != state.num_qubits() {
        return Err(Error::LengthMismatch {
            expected: state.num_qubits(),
            found: keep.num_qubits(),
        });
    }
    Ok(())
}
