use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::entropy::von_neumann_entropy;
use crate::bitstate::SparseState;
use crate::error::{Error, Result};
use crate::trace::{direct_trace, mixed_trace, QubitSubset};

/// Symmetric matrix of pairwise mutual informations `I(i, j)`, nats.
///
/// The diagonal is exactly zero by convention.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutualInformationMatrix {
    size: usize,
    values: Vec<f64>,
}

impl MutualInformationMatrix {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            values: vec![0.0; size * size],
        }
    }

    /// From row-major values; checks shape, symmetry and a zero diagonal.
    pub fn from_values(size: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != size * size {
            return Err(Error::LengthMismatch {
                expected: size * size,
                found: values.len(),
            });
        }
        for i in 0..size {
            if values[i * size + i] != 0.0 {
                return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                if values[i * size + j] != values[j * size + i] {
                    return Err(Error::InvalidArgument(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { size, values })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    fn set_pair(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.size + j] = v;
        self.values[j * self.size + i] = v;
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.size..(i + 1) * self.size]
    }

    /// Largest off-diagonal entry.
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Same matrix in another logarithm base (`factor = 1/ln 2` for bits).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            size: self.size,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

/// `I(i, j) = S(ρ_i) + S(ρ_j) - S(ρ_ij)` in nats.
///
/// One direct trace gives `ρ_ij`; the single-qubit marginals are reduced
/// from it.
pub fn mutual_information(state: &SparseState, i: usize, j: usize) -> Result<f64> {
    let n = state.num_qubits();
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "mutual information needs two distinct qubits, got ({i}, {j})"
        )));
    }
    let pair = QubitSubset::pair(n, i, j)?;
    let rho_ij = direct_trace(state, &pair)?;
    let rho_i = mixed_trace(&rho_ij, &QubitSubset::single(n, i)?)?;
    let rho_j = mixed_trace(&rho_ij, &QubitSubset::single(n, j)?)?;
    Ok(von_neumann_entropy(&rho_i)? + von_neumann_entropy(&rho_j)? - von_neumann_entropy(&rho_ij)?)
}

/// All `N(N-1)/2` pairs, in parallel. Assembly is by pair index, so the
/// result does not depend on the schedule.
pub fn mutual_information_matrix(state: &SparseState) -> Result<MutualInformationMatrix> {
    let n = state.num_qubits();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| mutual_information(state, i, j))
        .collect::<Result<_>>()?;
    let mut m = MutualInformationMatrix::zeros(n);
    for (&(i, j), v) in pairs.iter().zip(values) {
        m.set_pair(i, j, v);
    }
    Ok(m)
}
