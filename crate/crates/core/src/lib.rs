//! Quantum-information analysis of sparse fermionic wavefunctions.
//!
//! Post-Hartree-Fock wavefunctions (CI expansions over Slater determinants)
//! are encoded into qubit space through a fermion-to-qubit mapping and kept
//! sparse. On top of that representation the crate computes partial traces,
//! von Neumann and Shannon entropies, mutual-information matrices, observable
//! expectations, one-body reduced density matrices, and active-space entropy
//! sweeps.
//!
//! The central kernel is [`trace::direct_trace`], a partial trace whose cost
//! grows linearly with the number of stored amplitudes.

pub mod active;
pub mod bitstate;
pub mod error;
pub mod fermion;
pub mod info;
pub mod io;
pub mod scaling;
pub mod trace;

pub use num_complex::Complex64;

pub use active::{EntropySweep, SelectionMethod, SelectionResult};
pub use bitstate::{BitString, GeneralState, SingleQubitKet, SparseState};
pub use error::{Error, Result};
pub use fermion::{FermionMapping, FockWavefunction, MajoranaString, PauliLetter};
pub use info::{MutualInformationMatrix, ObservableSum, OneBodyRdm, PauliTerm};
pub use trace::{QubitSubset, ReducedDensityMatrix};
