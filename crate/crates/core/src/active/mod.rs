//! Active-space selection and entropy-versus-size sweeps.
//!
//! `MaxEntropy` ranks qubits by their single-qubit von Neumann entropy computed
//! from the supplied wavefunction; no DMRG pre-run is involved.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitstate::SparseState;
use crate::error::{Error, Result};
use crate::fermion::OrbitalOrdering;
use crate::info::{shannon_entropy, single_qubit_entropies, subsystem_entropy};
use crate::trace::QubitSubset;

/// Tolerance on NOON occupations outside `[0, 2]` and on negative entropies.
const RANGE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMethod {
    Fermi,
    Noon,
    MaxEntropy,
}

impl SelectionMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SelectionMethod::Fermi => "fermi",
            SelectionMethod::Noon => "noon",
            SelectionMethod::MaxEntropy => "max_entropy",
        }
    }
}

impl fmt::Display for SelectionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SelectionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fermi" => Ok(SelectionMethod::Fermi),
            "noon" => Ok(SelectionMethod::Noon),
            "max_entropy" | "max-entropy" | "entropy" => Ok(SelectionMethod::MaxEntropy),
            other => Err(Error::InvalidArgument(format!("unknown selection method {other:?}"))),
        }
    }
}

/// Selections for a list of sizes under one method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub method: SelectionMethod,
    pub sizes: Vec<usize>,
    /// One ascending index list per size.
    pub selections: Vec<Vec<usize>>,
    /// Per-orbital ranking score; empty for `Fermi`.
    pub scores: Vec<f64>,
}

/// Spin-orbitals `n - s/2 .. n + s/2 - 1`, shifted to stay inside `[0, N)`.
///
/// Odd `s` puts the extra orbital above the Fermi level.
pub fn select_fermi(num_spin_orbitals: usize, num_electrons: usize, size: usize) -> Result<Vec<usize>> {
    if size > num_spin_orbitals {
        return Err(size_error(size, num_spin_orbitals));
    }
    let start = num_electrons
        .saturating_sub(size / 2)
        .min(num_spin_orbitals - size);
    Ok((start..start + size).collect())
}

/// Indices of the `size` largest scores, ties to the lower index, returned ascending.
fn top_by_score(scores: &[f64], size: usize) -> Result<Vec<usize>> {
    if size > scores.len() {
        return Err(size_error(size, scores.len()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut out = order[..size].to_vec();
    out.sort_unstable();
    Ok(out)
}

pub fn select_max_entropy(single_orbital_entropies: &[f64], size: usize) -> Result<Vec<usize>> {
    if let Some(e) = single_orbital_entropies
        .iter()
        .find(|e| !e.is_finite() || **e < -RANGE_TOLERANCE)
    {
        return Err(Error::InvalidArgument(format!("invalid orbital entropy {e}")));
    }
    top_by_score(single_orbital_entropies, size)
}

/// `min(occ, 2 - occ)`, the distance from the nearer of empty and doubly occupied.
pub fn noon_scores(spatial_occupations: &[f64]) -> Result<Vec<f64>> {
    spatial_occupations
        .iter()
        .map(|&o| {
            if !(-RANGE_TOLERANCE..=2.0 + RANGE_TOLERANCE).contains(&o) {
                Err(Error::InvalidArgument(format!(
                    "spatial occupation {o} outside [0, 2]"
                )))
            } else {
                Ok(o.min(2.0 - o))
            }
        })
        .collect()
}

/// Spatial orbitals whose occupations deviate most from 0 and 2.
pub fn select_noon(spatial_occupations: &[f64], size: usize) -> Result<Vec<usize>> {
    top_by_score(&noon_scores(spatial_occupations)?, size)
}

/// Spin-orbital indices of a spatial selection, ascending.
pub fn expand_spatial(spatial: &[usize], ordering: OrbitalOrdering, num_spin_orbitals: usize) -> Vec<usize> {
    let mut out: Vec<usize> = spatial
        .iter()
        .flat_map(|&p| {
            let (a, b) = ordering.spin_pair(p, num_spin_orbitals);
            [a, b]
        })
        .collect();
    out.sort_unstable();
    out
}

/// Method-specific inputs for a sweep. Sizes always count qubits.
#[derive(Clone, Debug)]
pub enum SweepSpec {
    Fermi { num_electrons: usize },
    /// Scores computed from the state's single-qubit entropies.
    MaxEntropy,
    /// Spatial occupations; each size must be even.
    Noon {
        spatial_occupations: Vec<f64>,
        ordering: OrbitalOrdering,
    },
}

impl SweepSpec {
    pub fn method(&self) -> SelectionMethod {
        match self {
            SweepSpec::Fermi { .. } => SelectionMethod::Fermi,
            SweepSpec::MaxEntropy => SelectionMethod::MaxEntropy,
            SweepSpec::Noon { .. } => SelectionMethod::Noon,
        }
    }
}

/// Qubit selections for each size.
pub fn select(state: &SparseState, spec: &SweepSpec, sizes: &[usize]) -> Result<SelectionResult> {
    let n = state.num_qubits();
    let (selections, scores) = match spec {
        SweepSpec::Fermi { num_electrons } => (
            sizes
                .iter()
                .map(|&s| select_fermi(n, *num_electrons, s))
                .collect::<Result<Vec<_>>>()?,
            Vec::new(),
        ),
        SweepSpec::MaxEntropy => {
            let scores = single_qubit_entropies(state)?;
            (
                sizes
                    .iter()
                    .map(|&s| select_max_entropy(&scores, s))
                    .collect::<Result<Vec<_>>>()?,
                scores,
            )
        }
        SweepSpec::Noon {
            spatial_occupations,
            ordering,
        } => {
            if spatial_occupations.len() * 2 != n {
                return Err(Error::LengthMismatch {
                    expected: n / 2,
                    found: spatial_occupations.len(),
                });
            }
            let scores = noon_scores(spatial_occupations)?;
            let sel = sizes
                .iter()
                .map(|&s| {
                    if s % 2 == 1 {
                        return Err(Error::InvalidArgument(format!(
                            "size {s} is odd; NOON selects whole spatial orbitals"
                        )));
                    }
                    Ok(expand_spatial(&top_by_score(&scores, s / 2)?, *ordering, n))
                })
                .collect::<Result<Vec<_>>>()?;
            (sel, scores)
        }
    };
    Ok(SelectionResult {
        method: spec.method(),
        sizes: sizes.to_vec(),
        selections,
        scores,
    })
}

/// Total entropies of the selected space as it grows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropySweep {
    pub method: SelectionMethod,
    pub sizes: Vec<usize>,
    pub von_neumann: Vec<f64>,
    pub shannon: Vec<f64>,
    pub selections: Vec<Vec<usize>>,
}

impl EntropySweep {
    /// Same sweep in another logarithm base (`factor = 1/ln 2` for bits).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            von_neumann: self.von_neumann.iter().map(|v| v * factor).collect(),
            shannon: self.shannon.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }
}

/// von Neumann and Shannon entropy of each selected space; sizes run in parallel.
pub fn entropy_sweep(state: &SparseState, spec: &SweepSpec, sizes: &[usize]) -> Result<EntropySweep> {
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("sweep sizes must be ascending".into()));
    }
    let sel = select(state, spec, sizes)?;
    let n = state.num_qubits();
    let points: Vec<(f64, f64)> = sel
        .selections
        .par_iter()
        .map(|idx| {
            let keep = QubitSubset::new(n, idx.iter().copied())?;
            Ok((subsystem_entropy(state, &keep)?, shannon_entropy(state, &keep)?))
        })
        .collect::<Result<_>>()?;
    Ok(EntropySweep {
        method: sel.method,
        sizes: sel.sizes,
        von_neumann: points.iter().map(|p| p.0).collect(),
        shannon: points.iter().map(|p| p.1).collect(),
        selections: sel.selections,
    })
}

fn size_error(size: usize, available: usize) -> Error {
    Error::InvalidArgument(format!("size {size} exceeds the {available} available orbitals"))
}
