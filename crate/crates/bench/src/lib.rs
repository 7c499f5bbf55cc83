//! Benchmark fixtures shared by the criterion targets.

use qsparse::scaling::synthetic_state;
use qsparse::{GeneralState, QubitSubset, SparseState};

/// Synthetic state and a one-qubit kept set, the configuration timed by `qsparse bench`.
pub fn fixture(num_qubits: usize, chi: usize) -> (SparseState, GeneralState, QubitSubset) {
    let s = synthetic_state(num_qubits, chi, 7).expect("valid synthetic parameters");
    let g = GeneralState::from_sparse(&s);
    let keep = QubitSubset::new(num_qubits, [0]).expect("qubit 0 exists");
    (s, g, keep)
}
