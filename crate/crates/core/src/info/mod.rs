//! Entropies, mutual information, observables and one-body density matrices.
//!
//! All entropies are in nats.

mod entropy;
mod mutual;
mod observable;
mod rdm1;

pub use entropy::{
    entropy_of_spectrum, shannon_entropy, shannon_of_probabilities, single_qubit_entropies,
    subsystem_entropy, von_neumann_entropy, EIGENVALUE_CLAMP, PSD_TOLERANCE,
};
pub use mutual::{mutual_information, mutual_information_matrix, MutualInformationMatrix};
pub use observable::{expectation, expectation_general, ObservableSum, PauliTerm};
pub use rdm1::{noon, one_body_rdm, OneBodyRdm, SpinPairing};
