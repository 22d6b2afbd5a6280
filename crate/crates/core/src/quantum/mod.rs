//! Schrödinger-level counterparts: grids, oscillator eigenstates, Hermite
//! expansions, the unitary maps and a split-step propagator.

pub mod eigenstate;
pub mod evolve;
pub mod expansion;
pub mod grid;
pub mod hermite;
pub mod spectral;
pub mod unitary;
pub mod wavefunction;

pub use eigenstate::{transformed_eigenstate, AxialFactor, EigenstateSetup, PhaseLedger, Pipeline, TransformedEigenstate};
pub use evolve::{split_step_evolve, QuantumHamiltonian, SplitStepper};
pub use expansion::{
    eigenfunction_shift_expand, gauss_hermite, hermite_shift_expand, level_matrix, rotate_product_expand,
    rotate_product_expand_with_order, ExpansionCoeffs, RotatedProduct,
};
pub use grid::Grid;
pub use hermite::{alpha, eigenfunction, energy, hermite, hermite_function, EigenLabel};
pub use spectral::Spectral;
pub use unitary::{unitary_qt1, unitary_qt1_inverse, unitary_qt2, Interpolation, MapOptions, ShiftData};
pub use wavefunction::WaveFunction;
