//! End-to-end check that charge-in-field orbits, pushed through the rotating
//! frame and the moving-origin shift, coincide with simple-oscillator orbits.

use crate::classical::driven::{driven_path, QuadratureSpec};
use crate::classical::hamiltonians::{eval_h1, StaticField};
use crate::classical::maps::{ct1, ct2, CanonicalMap};
use crate::classical::oracle::rk4_trajectory;
use crate::classical::state::PhaseState;
use crate::error::{ensure, Result};
use crate::linalg::rotate_phase;
use crate::propagator::block_propagator;

#[derive(Debug, Clone, Copy)]
pub struct EquivalenceConfig {
    pub dt: f64,
    /// Number of evenly spaced comparison times.
    pub checkpoints: usize,
    /// Number of checkpoints at which the map Jacobians are probed.
    pub symplectic_probes: usize,
    pub quad: QuadratureSpec,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        Self { dt: 1e-4, checkpoints: 200, symplectic_probes: 4, quad: QuadratureSpec::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceSample {
    pub t: f64,
    /// Oracle state in the original coordinates.
    pub original: PhaseState,
    /// Oracle state after both maps.
    pub mapped: PhaseState,
    /// Closed-form simple-oscillator state.
    pub closed_form: PhaseState,
    pub phase: f64,
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub samples: Vec<EquivalenceSample>,
    pub max_deviation: f64,
    pub ct1_symplectic_defect: f64,
    pub ct2_symplectic_defect: f64,
    pub max_abs_phase: f64,
}

pub fn equivalence_report(
    field: &StaticField,
    z0: &PhaseState,
    horizon: f64,
    cfg: &EquivalenceConfig,
) -> Result<EquivalenceReport> {
    ensure(horizon.is_finite() && horizon > 0.0, "horizon", || "horizon must be positive".into())?;
    ensure(cfg.checkpoints > 0, "checkpoints", || "need at least one checkpoint".into())?;
    let rot = ct1(field)?;
    let params = rot.osc_params();
    let shift = ct2(params, rot.rotated_drive(), cfg.quad);

    let steps = (horizon / cfg.dt).ceil().max(1.0) as usize;
    let every = (steps / cfg.checkpoints).max(1);
    let orbit = rk4_trajectory(|z, _| eval_h1(field, &PhaseState(*z)), &z0.0, horizon, cfg.dt, every)?;
    let times: Vec<f64> = orbit.iter().map(|(t, _)| *t).collect();
    let path = driven_path(params, shift.drive(), &times, cfg.quad)?;

    let mut samples = Vec::with_capacity(orbit.len());
    for ((t, z), origin) in orbit.iter().zip(&path) {
        let rotated = PhaseState(rotate_phase(&rot.rotation(*t), z));
        let mapped = rotated - origin.origin;
        let closed_form = PhaseState(block_propagator(params, *t) * z0.0);
        samples.push(EquivalenceSample { t: *t, original: PhaseState(*z), mapped, closed_form, phase: origin.action() });
    }
    let max_deviation = samples.iter().map(|s| s.mapped.distance(&s.closed_form)).fold(0.0, f64::max);
    let max_abs_phase = samples.iter().map(|s| s.phase.abs()).fold(0.0, f64::max);

    let probes = cfg.symplectic_probes.clamp(1, samples.len());
    let stride = samples.len() / probes;
    let mut d1 = 0.0f64;
    let mut d2 = 0.0f64;
    for s in samples.iter().step_by(stride.max(1)).take(probes) {
        d1 = d1.max(rot.symplectic_defect(s.t, &s.original)?);
        let q = rot.forward(s.t, &s.original)?;
        d2 = d2.max(shift.symplectic_defect(s.t, &q)?);
    }

    Ok(EquivalenceReport {
        samples,
        max_deviation,
        ct1_symplectic_defect: d1,
        ct2_symplectic_defect: d2,
        max_abs_phase,
    })
}
