//! Fermion-to-qubit mappings and wavefunction encoding.

mod encode;
mod mapping;
mod pauli;
mod wavefunction;

pub use encode::{
    apply_cnot_chain, ascending_chain, encode, encoding_cost, general_encode, inverse_chain,
    jw_encode, jw_encode_counted, jw_to_parity, parity_to_jw, particle_hole, particle_hole_sign,
    split_count, CnotChain, EncodeStats, EncodingCost,
};
pub use mapping::{FermionMapping, MappingKind};
pub use pauli::{MajoranaString, Mat2, PauliLetter, Phase};
pub use wavefunction::{FockWavefunction, OrbitalOrdering, Vacuum};
