//! Sparse qubit-space wavefunctions.
//!
//! Two forms are supported: the binary form ([`SparseState`]), a map from
//! computational-basis labels to amplitudes, and the general form
//! ([`GeneralState`]), a weighted sum of tensor products of single-qubit kets.
//!
//! Bit convention: fermionic mode `j` (0-based) is qubit `j`; qubit 0 is
//! the leftmost character of a textual label and the least-significant bit of
//! the first packed word.

mod bitstring;
mod general;
mod sparse;

pub use bitstring::{BitGather, BitString, Ones};
pub use general::{GeneralState, SingleQubitKet};
pub use sparse::{SparseState, INGEST_NORM_TOLERANCE, NORMALIZED_TOLERANCE, PRUNE_TOLERANCE};
