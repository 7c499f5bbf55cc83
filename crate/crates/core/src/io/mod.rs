//! File formats: wavefunctions, qubit states, mappings, density matrices and
//! analysis tables.
//!
//! Text formats start with a `#<tag> {json}` header line. Binary companions
//! start with a four-byte magic and a length-prefixed JSON header; all
//! integers and floats are little-endian.

mod codec;
mod mapping;
mod rdm;
mod state;
mod tables;
mod wavefunction;

pub use mapping::{read_mapping, read_mapping_from, write_mapping, write_mapping_to};
pub use rdm::{
    read_rdm, read_rdm_binary_from, read_rdm_from, write_rdm, write_rdm_binary, write_rdm_to, RdmHeader,
    RDM_MAGIC,
};
pub use state::{
    read_state, read_state_binary_from, read_state_from, write_general_state, write_general_state_to,
    write_state, write_state_binary, write_state_to, QubitState, StateHeader, StateKind, StateMeta,
    STATE_MAGIC,
};
pub use tables::{
    read_mi_csv, read_observable, read_observable_from, read_occupations, read_occupations_from,
    sweep_records, write_json, write_json_file, write_mi_csv, write_sweep_csv, MiReport, OneBodyRdmReport,
    SweepRecord,
};
pub use wavefunction::{
    read_wavefunction, read_wavefunction_binary_from, read_wavefunction_from, read_wavefunction_with_meta,
    write_wavefunction, write_wavefunction_binary, write_wavefunction_to, write_wavefunction_with_meta,
    VacuumKind, WavefunctionHeader, WavefunctionMeta, WAVEFUNCTION_MAGIC,
};
