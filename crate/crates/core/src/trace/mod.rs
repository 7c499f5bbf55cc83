//! Reduced density matrices of sparse pure states.

mod direct;
mod mixed;
mod quadratic;
mod rdm;
mod subset;

pub use direct::{direct_trace, direct_trace_with, RegisterKind};
pub use mixed::mixed_trace;
pub use quadratic::{quadratic_trace, DEFAULT_WORK_BUDGET, MAX_KEPT_QUBITS};
pub use rdm::{hermitian_eigenvalues, ReducedDensityMatrix};
pub use subset::QubitSubset;
