//! The three classical Hamiltonians: charge in a static field, driven
//! oscillator, simple oscillator.

use crate::classical::drive::{Drive, Sinusoid};
use crate::classical::state::PhaseState;
use crate::error::{ensure, Result};
use crate::linalg::{cross_matrix, rotation_about_z, Vec3, SPEED_OF_LIGHT};
use crate::propagator::OscParams;

/// Static homogeneous magnetic and electric field acting on a charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticField {
    pub b: Vec3,
    pub e: Vec3,
    pub charge: f64,
    pub mass: f64,
}

impl StaticField {
    pub fn new(b: Vec3, e: Vec3, charge: f64, mass: f64) -> Result<Self> {
        ensure(mass.is_finite() && mass > 0.0, "mass", || format!("must be positive, got {mass}"))?;
        ensure(charge.is_finite(), "charge", || "must be finite".into())?;
        ensure(b.iter().chain(e.iter()).all(|v| v.is_finite()), "field", || {
            "field components must be finite".into()
        })?;
        Ok(Self { b, e, charge, mass })
    }

    /// Axial field `B = B3 ẑ`.
    pub fn axial(b3: f64, e: Vec3, charge: f64, mass: f64) -> Result<Self> {
        Self::new(Vec3::new(0.0, 0.0, b3), e, charge, mass)
    }

    /// Cyclotron vector `q B / (m c)`.
    pub fn cyclotron_vector(&self) -> Vec3 {
        self.b * (self.charge / (self.mass * SPEED_OF_LIGHT))
    }

    /// Signed cyclotron frequency about ẑ.
    pub fn cyclotron_frequency(&self) -> f64 {
        self.cyclotron_vector().z
    }

    /// Parameters of the equivalent planar oscillator. Its frequency is half
    /// the cyclotron frequency.
    pub fn osc_params(&self) -> OscParams {
        OscParams { mass: self.mass, omega: 0.5 * self.cyclotron_frequency().abs() }
    }

    /// Rotation of the co-moving frame at time `t`: angle `ω_c t / 2` about ẑ.
    pub fn frame_angle(&self, t: f64) -> f64 {
        0.5 * self.cyclotron_frequency() * t
    }

    /// Force `q R(ω_c t/2) E` felt in the rotating frame, as a sinusoid bank.
    pub fn rotating_drive(&self) -> Drive {
        let k = self.e * self.charge;
        let nu = 0.5 * self.cyclotron_frequency();
        if nu == 0.0 {
            return Drive::Constant(k);
        }
        Drive::Sinusoids(vec![
            Sinusoid { freq: 0.0, cos: Vec3::new(0.0, 0.0, k.z), sin: Vec3::zeros() },
            Sinusoid { freq: nu, cos: Vec3::new(k.x, k.y, 0.0), sin: Vec3::new(-k.y, k.x, 0.0) },
        ])
    }

    /// The rotated electric field `R(ω_c t/2) E`.
    pub fn rotated_e(&self, t: f64) -> Vec3 {
        rotation_about_z(self.frame_angle(t)) * self.e
    }

    /// Vector potential `(q/c) A(x)` in the symmetric gauge `A = ½ B × x`.
    pub fn coupled_potential(&self, x: &Vec3) -> Vec3 {
        cross_matrix(&self.b) * x * (0.5 * self.charge / SPEED_OF_LIGHT)
    }
}

/// `H1 = |p − (q/c) A(x)|² / 2m − q ⟨x, E⟩`.
pub fn eval_h1(field: &StaticField, z: &PhaseState) -> f64 {
    let (x, p) = (z.q(), z.p());
    let kin = p - field.coupled_potential(&x);
    kin.norm_squared() / (2.0 * field.mass) - field.charge * x.dot(&field.e)
}

/// `H2 = |P|²/2m + (m ω²/2)(Q1² + Q2²) − ⟨Q, k(t)⟩`.
pub fn eval_h2(params: OscParams, drive: &Drive, z: &PhaseState, t: f64) -> Result<f64> {
    let k = drive.eval(t)?;
    Ok(eval_h3(params, z) - z.q().dot(&k))
}

/// `H3 = |P|²/2m + (m ω²/2)(Q1² + Q2²)`.
pub fn eval_h3(params: OscParams, z: &PhaseState) -> f64 {
    let (q, p) = (z.q(), z.p());
    p.norm_squared() / (2.0 * params.mass)
        + 0.5 * params.mass * params.omega.powi(2) * (q.x * q.x + q.y * q.y)
}

/// Lagrangian dual to `H2`, evaluated at position `q` and velocity `v`.
pub fn lagrangian_h2(params: OscParams, force: &Vec3, q: &Vec3, v: &Vec3) -> f64 {
    lagrangian_h2_by_axis(params, force, q, v).sum()
}

/// Per-degree-of-freedom terms of [`lagrangian_h2`]; the Lagrangian is separable.
pub fn lagrangian_h2_by_axis(params: OscParams, force: &Vec3, q: &Vec3, v: &Vec3) -> Vec3 {
    let k = 0.5 * params.mass * params.omega.powi(2);
    Vec3::from_fn(|i, _| {
        let stiff = if i < 2 { k } else { 0.0 };
        0.5 * params.mass * v[i] * v[i] - stiff * q[i] * q[i] + q[i] * force[i]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(b3: f64, e: Vec3) -> StaticField {
        StaticField::axial(b3, e, 1.0, 1.0).unwrap()
    }

    #[test]
    fn zero_state_has_zero_energy() {
        let f = field(1.3, Vec3::new(0.2, -0.4, 0.1));
        assert_eq!(eval_h1(&f, &PhaseState::zero()), 0.0);
        assert_eq!(eval_h3(f.osc_params(), &PhaseState::zero()), 0.0);
    }

    #[test]
    fn field_free_is_kinetic() {
        let f = StaticField::axial(0.0, Vec3::zeros(), 1.0, 2.0).unwrap();
        let z = PhaseState::from_qp(Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.5, -1.0, 2.0));
        assert!((eval_h1(&f, &z) - 5.25 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn h2_without_drive_is_h3() {
        let prm = OscParams::new(1.4, 0.6).unwrap();
        let z = PhaseState::from_qp(Vec3::new(0.3, -0.2, 1.0), Vec3::new(0.1, 0.9, -0.5));
        assert_eq!(eval_h2(prm, &Drive::zero(), &z, 2.0).unwrap(), eval_h3(prm, &z));
    }

    #[test]
    fn rejects_nonpositive_mass() {
        assert!(StaticField::axial(1.0, Vec3::zeros(), 1.0, 0.0).is_err());
    }

    #[test]
    fn rotating_drive_matches_rotated_field() {
        let f = StaticField::axial(1.7, Vec3::new(0.3, -0.5, 0.2), 1.5, 0.8).unwrap();
        let d = f.rotating_drive();
        for t in [0.0, 0.4, 3.3] {
            let expect = f.rotated_e(t) * f.charge;
            assert!((d.eval(t).unwrap() - expect).amax() < 1e-14);
        }
    }
}
