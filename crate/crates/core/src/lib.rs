//! Exact perturbative expansion of the second-harmonic photon-number
//! distribution for spontaneous second harmonic generation.
//!
//! The expansion is built from elementary processes (alternating blocks of
//! the two interaction vertices) and their pairwise superpositions, drawn as
//! double-sided diagrams. Every coefficient is an exact rational and can be
//! checked against [`oracle::taylor_oracle`], which works directly with the
//! Hamiltonian on the invariant subspace of the input state.

pub mod diagram;
pub mod error;
pub mod fock;
pub mod numeric;
pub mod oracle;
pub mod process;
pub mod series;

pub use diagram::{
    diagram_term, diagram_value, enumerate_pairs, enumerate_processes, probability_term, render_ascii,
    render_latex, DiagramPair, SeriesTerm,
};
pub use error::{Error, Result};
pub use fock::{apply_ladder, falling_factorial, radical_mul, ExactRational, Ladder, Mode, RadicalAmplitude, TwoModeFock};
pub use oracle::{float_evolve, subspace_hamiltonian, taylor_oracle, TridiagonalHamiltonian};
pub use process::{
    apply_process, is_admissible, partial_sums, process_amplitude, sha_factor, shc_factor, PartialSums,
    ProcessVector, Vertex,
};
pub use series::{
    assemble_fock, assemble_mixture, coherent_weights, evaluate, moments, thermal_weights,
    DistributionExpansion, InputDescriptor, InputStateWeights, Moments,
};
