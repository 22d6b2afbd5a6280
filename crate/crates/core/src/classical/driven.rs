//! Driven oscillator: homogeneous/non-homogeneous split of
//! `Z(t) = U(t) Z(0) + ∫₀ᵗ U(t−s) K(s) ds` and the action along the moving
//! origin.
//!
//! The convolution is accumulated as `U(t) ∫₀ᵗ U(−s) K(s) ds` so that a whole
//! path can be produced in one sweep. Every panel is integrated with Simpson's
//! rule.

use nalgebra::Vector6;

use crate::classical::drive::Drive;
use crate::classical::hamiltonians::{lagrangian_h2, lagrangian_h2_by_axis};
use crate::classical::state::PhaseState;
use crate::error::{ensure, Result};
use crate::linalg::Vec3;
use crate::propagator::{block_propagator, free_block, propagator_2x2, OscParams};

/// Resolution of the composite Simpson rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub panels_per_unit_time: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { panels_per_unit_time: 1.0e4 }
    }
}

impl QuadratureSpec {
    pub fn new(panels_per_unit_time: f64) -> Result<Self> {
        ensure(
            panels_per_unit_time.is_finite() && panels_per_unit_time > 0.0,
            "panels_per_unit_time",
            || format!("must be positive, got {panels_per_unit_time}"),
        )?;
        Ok(Self { panels_per_unit_time })
    }

    fn panels(&self, span: f64) -> usize {
        ((span * self.panels_per_unit_time).ceil() as usize).max(1)
    }
}

/// Result of [`solve_driven`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenSolution {
    pub homogeneous: PhaseState,
    pub nonhomogeneous: PhaseState,
}

impl DrivenSolution {
    pub fn total(&self) -> PhaseState {
        self.homogeneous + self.nonhomogeneous
    }
}

/// Moving origin `Z_nh(t)` together with the action accumulated along it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub t: f64,
    pub origin: PhaseState,
    /// Action split by degree of freedom.
    pub action_by_axis: Vec3,
}

impl PathPoint {
    pub fn action(&self) -> f64 {
        self.action_by_axis.sum()
    }

    /// Action of the two oscillator degrees of freedom.
    pub fn planar_action(&self) -> f64 {
        self.action_by_axis.x + self.action_by_axis.y
    }
}

/// Sweeps the non-homogeneous solution forward in time.
#[derive(Debug, Clone)]
pub struct DrivenPath<'a> {
    params: OscParams,
    drive: &'a Drive,
    quad: QuadratureSpec,
    t: f64,
    integral: Vector6<f64>,
    action: Vec3,
}

impl<'a> DrivenPath<'a> {
    pub fn new(params: OscParams, drive: &'a Drive, quad: QuadratureSpec) -> Self {
        Self { params, drive, quad, t: 0.0, integral: Vector6::zeros(), action: Vec3::zeros() }
    }

    fn integrand(&self, s: f64) -> Vector6<f64> {
        let k = self.drive.eval_unchecked(s);
        let u = propagator_2x2(self.params, -s);
        let f = free_block(self.params.mass, -s);
        let a = u.column(1) * k.x;
        let b = u.column(1) * k.y;
        let c = f.column(1) * k.z;
        Vector6::new(a[0], a[1], b[0], b[1], c[0], c[1])
    }

    fn origin_at(&self, s: f64, integral: &Vector6<f64>) -> PhaseState {
        PhaseState(block_propagator(self.params, s) * integral)
    }

    fn lagrangian(&self, s: f64, z: &PhaseState) -> Vec3 {
        let v = z.p() / self.params.mass;
        lagrangian_h2_by_axis(self.params, &self.drive.eval_unchecked(s), &z.q(), &v)
    }

    fn half_step(&mut self, h: f64) -> PhaseState {
        let (a, b) = (self.t, self.t + h);
        let g = self.integrand(a) + self.integrand(0.5 * (a + b)) * 4.0 + self.integrand(b);
        self.integral += g * (h / 6.0);
        self.t = b;
        self.origin_at(b, &self.integral)
    }

    pub fn current(&self) -> PathPoint {
        PathPoint { t: self.t, origin: self.origin_at(self.t, &self.integral), action_by_axis: self.action }
    }

    /// Advance to time `t ≥ current`.
    pub fn advance_to(&mut self, t: f64) -> Result<PathPoint> {
        ensure(t.is_finite() && t >= self.t, "t", || {
            format!("path times must be non-decreasing (at {}, requested {t})", self.t)
        })?;
        self.drive.check_window(self.t, t)?;
        if t == self.t {
            return Ok(self.current());
        }
        let n = self.quad.panels(t - self.t);
        let h = (t - self.t) / n as f64;
        let mut left = self.current().origin;
        for i in 0..n {
            let s0 = self.t;
            let l0 = self.lagrangian(s0, &left);
            let mid = self.half_step(0.5 * h);
            let lm = self.lagrangian(s0 + 0.5 * h, &mid);
            let right = self.half_step(0.5 * h);
            // land exactly on the target time
            if i + 1 == n {
                self.t = t;
            }
            let l1 = self.lagrangian(self.t, &right);
            self.action += (l0 + lm * 4.0 + l1) * (h / 6.0);
            left = right;
        }
        Ok(self.current())
    }
}

/// `U(t) z0 + ∫₀ᵗ U(t−s) K(s) ds`, returned as its homogeneous and
/// non-homogeneous parts.
pub fn solve_driven(
    params: OscParams,
    drive: &Drive,
    z0: &PhaseState,
    t: f64,
    quad: QuadratureSpec,
) -> Result<DrivenSolution> {
    ensure(t.is_finite() && t >= 0.0, "t", || format!("must be non-negative, got {t}"))?;
    let homogeneous = PhaseState(block_propagator(params, t) * z0.0);
    if drive.is_zero() {
        drive.check_window(0.0, t)?;
        return Ok(DrivenSolution { homogeneous, nonhomogeneous: PhaseState::zero() });
    }
    let nonhomogeneous = DrivenPath::new(params, drive, quad).advance_to(t)?.origin;
    Ok(DrivenSolution { homogeneous, nonhomogeneous })
}

/// Moving origin and action at each of the non-decreasing `times`.
pub fn driven_path(params: OscParams, drive: &Drive, times: &[f64], quad: QuadratureSpec) -> Result<Vec<PathPoint>> {
    let mut path = DrivenPath::new(params, drive, quad);
    times.iter().map(|&t| path.advance_to(t)).collect()
}

/// The combination `(m/2)|Q̇|² − (m ω²/2)|Q̄|² + q ⟨Q, E⟩` along the origin,
/// which the action must reproduce as its time derivative.
pub fn action_rate(params: OscParams, drive: &Drive, origin: &PhaseState, t: f64) -> Result<f64> {
    let k: Vec3 = drive.eval(t)?;
    Ok(lagrangian_h2(params, &k, &origin.q(), &(origin.p() / params.mass)))
}
