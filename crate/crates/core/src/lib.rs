//! Canonical and unitary equivalences between a charge in a homogeneous
//! electromagnetic field, a driven harmonic oscillator, and a simple harmonic
//! oscillator, together with independent numerical oracles that check each
//! closed-form step.
//!
//! * [`linalg`] and [`propagator`]: cross-product generators, rotations and
//!   exact oscillator propagators.
//! * [`classical`]: Hamiltonians, the rotating-frame and moving-origin maps,
//!   and an RK4 reference integrator.
//! * [`quantum`]: grid wavefunctions, oscillator eigenstates, Hermite
//!   expansions, the unitary maps and a split-step evolution oracle.
//! * [`tdfields`]: time-dependent magnetic fields, their reduction to
//!   oscillators with periodic stiffness, and Floquet analysis.

pub mod classical;
pub mod error;
pub mod linalg;
pub mod propagator;
pub mod quantum;
pub mod tdfields;

pub use error::{Error, Result};
