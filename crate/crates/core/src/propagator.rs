//! Exact propagators of the (planar) harmonic oscillator.

use crate::error::{ensure, Result};
use crate::linalg::{block_diag3, Mat2, Mat6};

/// Mass and angular frequency of an oscillator degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscParams {
    pub mass: f64,
    pub omega: f64,
}

impl OscParams {
    pub fn new(mass: f64, omega: f64) -> Result<Self> {
        ensure(mass.is_finite() && mass > 0.0, "mass", || format!("must be positive, got {mass}"))?;
        ensure(omega.is_finite() && omega >= 0.0, "omega", || {
            format!("must be non-negative, got {omega}")
        })?;
        Ok(Self { mass, omega })
    }

    /// Same mass, no restoring force.
    pub fn free(self) -> Self {
        Self { omega: 0.0, ..self }
    }
}

/// Free-particle block `[[1, t/m], [0, 1]]`.
pub fn free_block(mass: f64, t: f64) -> Mat2 {
    Mat2::new(1.0, t / mass, 0.0, 1.0)
}

/// `U(t)` solving `Q' = P/m, P' = -m ω² Q`.
///
/// At `ω = 0` the analytic free block is returned instead of evaluating
/// `sin(ωt)/ω`.
pub fn propagator_2x2(params: OscParams, t: f64) -> Mat2 {
    let OscParams { mass, omega } = params;
    if omega == 0.0 {
        return free_block(mass, t);
    }
    let (s, c) = (omega * t).sin_cos();
    let mw = mass * omega;
    Mat2::new(c, s / mw, -mw * s, c)
}

/// Block-diagonal 6x6 propagator: oscillators on degrees 1 and 2, free motion
/// along degree 3.
pub fn block_propagator(params: OscParams, t: f64) -> Mat6 {
    let u = propagator_2x2(params, t);
    block_diag3([u, u, free_block(params.mass, t)])
}

/// The Hamiltonian matrix `ℍ₀ = [[0, 1/m], [-m ω², 0]]` of the linear flow.
pub fn hamiltonian_matrix(params: OscParams) -> Mat2 {
    Mat2::new(0.0, 1.0 / params.mass, -params.mass * params.omega.powi(2), 0.0)
}

/// Symmetric energy form `G = diag(m ω², 1/m)`, with `H = ½ ⟨Z, G Z⟩`.
///
/// Related to the Hamiltonian matrix by `ℍ₀ = J G`.
pub fn energy_form(params: OscParams) -> Mat2 {
    Mat2::new(params.mass * params.omega.powi(2), 0.0, 0.0, 1.0 / params.mass)
}
