//! Time-dependent canonical transformations built from generating functions.

use crate::classical::drive::Drive;
use crate::classical::driven::{action_rate, solve_driven, DrivenPath, PathPoint, QuadratureSpec};
use crate::classical::hamiltonians::StaticField;
use crate::classical::state::PhaseState;
use crate::error::{Error, Result};
use crate::linalg::{fd_jacobian, rotate_phase, rotation_about_z, symplectic_defect, Mat3, Vec3};
use crate::propagator::OscParams;

/// A time-indexed phase-space map with its generating-function phase `A(t)`.
///
/// Every map reduces to the identity at `t = 0`.
pub trait CanonicalMap {
    fn forward(&self, t: f64, z: &PhaseState) -> Result<PhaseState>;
    fn inverse(&self, t: f64, z: &PhaseState) -> Result<PhaseState>;
    /// Phase `A(t)` added to the generating function.
    fn phase(&self, t: f64) -> Result<f64>;

    /// `max |Jᵀ Σ J − Σ|` of the finite-difference Jacobian of `forward`.
    fn symplectic_defect(&self, t: f64, z: &PhaseState) -> Result<f64> {
        // the closure cannot propagate errors; probe once so failures surface here
        self.forward(t, z)?;
        let jac = fd_jacobian(|v| self.forward(t, &PhaseState(*v)).map(|s| s.0).unwrap_or(*v * f64::NAN), &z.0);
        Ok(symplectic_defect(&jac))
    }
}

/// Rotating frame that removes the magnetic field: planar coordinates and
/// momenta are rotated by `ω_c t / 2` about ẑ.
#[derive(Debug, Clone, Copy)]
pub struct Ct1 {
    field: StaticField,
}

/// Build the rotating-frame map for an axial static field.
pub fn ct1(field: &StaticField) -> Result<Ct1> {
    if field.b.x != 0.0 || field.b.y != 0.0 {
        return Err(Error::NonAxialField(field.b.x, field.b.y, field.b.z));
    }
    Ok(Ct1 { field: *field })
}

impl Ct1 {
    pub fn field(&self) -> &StaticField {
        &self.field
    }

    pub fn rotation(&self, t: f64) -> Mat3 {
        rotation_about_z(self.field.frame_angle(t))
    }

    /// Oscillator seen in the rotating frame.
    pub fn osc_params(&self) -> OscParams {
        self.field.osc_params()
    }

    /// Force `q E(t)` with the field rotated into the new frame.
    pub fn rotated_drive(&self) -> Drive {
        self.field.rotating_drive()
    }

    /// `F(x, P, t) = ⟨x, R(t)ᵀ P⟩`.
    pub fn generating_function(&self, x: &Vec3, big_p: &Vec3, t: f64) -> f64 {
        x.dot(&(self.rotation(t).transpose() * big_p))
    }
}

impl CanonicalMap for Ct1 {
    fn forward(&self, t: f64, z: &PhaseState) -> Result<PhaseState> {
        if t == 0.0 {
            return Ok(*z);
        }
        Ok(PhaseState(rotate_phase(&self.rotation(t), &z.0)))
    }

    fn inverse(&self, t: f64, z: &PhaseState) -> Result<PhaseState> {
        if t == 0.0 {
            return Ok(*z);
        }
        Ok(PhaseState(rotate_phase(&self.rotation(t).transpose(), &z.0)))
    }

    fn phase(&self, _t: f64) -> Result<f64> {
        Ok(0.0)
    }
}

/// Shift to the moving origin of a driven oscillator:
/// `ξ = Q − Q_nh(t)`, `η = P − m Q̇_nh(t)`.
#[derive(Debug, Clone)]
pub struct Ct2 {
    params: OscParams,
    drive: Drive,
    quad: QuadratureSpec,
}

pub fn ct2(params: OscParams, drive: Drive, quad: QuadratureSpec) -> Ct2 {
    Ct2 { params, drive, quad }
}

impl Ct2 {
    pub fn params(&self) -> OscParams {
        self.params
    }

    pub fn drive(&self) -> &Drive {
        &self.drive
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        self.quad
    }

    /// `(Q_nh, P_nh)` with `P_nh = m Q̇_nh`.
    pub fn moving_origin(&self, t: f64) -> Result<PhaseState> {
        Ok(solve_driven(self.params, &self.drive, &PhaseState::zero(), t, self.quad)?.nonhomogeneous)
    }

    /// Moving origin and `A(t)` in one sweep.
    pub fn origin_and_phase(&self, t: f64) -> Result<(PhaseState, f64)> {
        let p = self.path_point(t)?;
        Ok((p.origin, p.action()))
    }

    /// Moving origin with the action split per degree of freedom.
    pub fn path_point(&self, t: f64) -> Result<PathPoint> {
        if self.drive.is_zero() {
            self.drive.check_window(0.0, t)?;
            return Ok(PathPoint { t, origin: PhaseState::zero(), action_by_axis: Vec3::zeros() });
        }
        DrivenPath::new(self.params, &self.drive, self.quad).advance_to(t)
    }

    /// Right-hand side of the phase equation, `Ȧ = L(Q_nh, Q̇_nh)`.
    pub fn phase_rate(&self, t: f64) -> Result<f64> {
        action_rate(self.params, &self.drive, &self.moving_origin(t)?, t)
    }

    /// `F(Q, η, t) = ⟨Q − Q_nh, η + m Q̇_nh⟩ + A(t)`.
    pub fn generating_function(&self, q: &Vec3, eta: &Vec3, t: f64) -> Result<f64> {
        let (origin, a) = self.origin_and_phase(t)?;
        Ok((q - origin.q()).dot(&(eta + origin.p())) + a)
    }
}

impl CanonicalMap for Ct2 {
    fn forward(&self, t: f64, z: &PhaseState) -> Result<PhaseState> {
        Ok(*z - self.moving_origin(t)?)
    }

    fn inverse(&self, t: f64, z: &PhaseState) -> Result<PhaseState> {
        Ok(*z + self.moving_origin(t)?)
    }

    fn phase(&self, t: f64) -> Result<f64> {
        Ok(self.origin_and_phase(t)?.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::hamiltonians::{eval_h1, eval_h2, eval_h3};
    use std::f64::consts::PI;

    fn sample_field() -> StaticField {
        StaticField::axial(1.4, Vec3::new(0.3, -0.2, 0.15), 1.1, 0.9).unwrap()
    }

    fn sample_state() -> PhaseState {
        PhaseState::from_qp(Vec3::new(0.4, -1.1, 0.7), Vec3::new(0.9, 0.2, -0.3))
    }

    #[test]
    fn ct1_identity_at_zero() {
        let m = ct1(&sample_field()).unwrap();
        let z = sample_state();
        assert_eq!(m.forward(0.0, &z).unwrap(), z);
        assert_eq!(m.inverse(0.0, &z).unwrap(), z);
    }

    #[test]
    fn ct1_half_turn_negates_plane() {
        let f = StaticField::axial(2.0, Vec3::zeros(), 1.0, 1.0).unwrap();
        let m = ct1(&f).unwrap();
        // ω_c t / 2 = π
        let z = sample_state();
        let out = m.forward(PI, &z).unwrap();
        for i in 0..4 {
            assert!((out.0[i] + z.0[i]).abs() < 1e-14);
        }
        assert_eq!(out.0[4], z.0[4]);
        assert_eq!(out.0[5], z.0[5]);
    }

    #[test]
    fn ct1_rejects_tilted_field() {
        let f = StaticField::new(Vec3::new(0.1, 0.0, 1.0), Vec3::zeros(), 1.0, 1.0).unwrap();
        assert!(matches!(ct1(&f), Err(Error::NonAxialField(..))));
    }

    #[test]
    fn ct1_pullback_of_h1_is_h2() {
        // H2(Q, P, t) = H1(x, p) + ∂F/∂t, the time derivative taken by central differences.
        let f = sample_field();
        let m = ct1(&f).unwrap();
        let drive = m.rotated_drive();
        let prm = m.osc_params();
        let z = sample_state();
        for t in [0.3, 1.7, 4.2] {
            let big = m.forward(t, &z).unwrap();
            let h = 1e-5;
            let dfdt = (m.generating_function(&z.q(), &big.p(), t + h)
                - m.generating_function(&z.q(), &big.p(), t - h))
                / (2.0 * h);
            let lhs = eval_h2(prm, &drive, &big, t).unwrap();
            let rhs = eval_h1(&f, &z) + dfdt;
            assert!((lhs - rhs).abs() < 1e-10, "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn ct2_zero_drive_is_identity() {
        let m = ct2(OscParams::new(1.0, 0.8).unwrap(), Drive::zero(), QuadratureSpec::default());
        let z = sample_state();
        assert_eq!(m.forward(2.0, &z).unwrap(), z);
        assert_eq!(m.phase(2.0).unwrap(), 0.0);
    }

    #[test]
    fn ct2_pullback_of_h2_is_h3() {
        let f = sample_field();
        let prm = f.osc_params();
        let m = ct2(prm, f.rotating_drive(), QuadratureSpec::default());
        let big = sample_state();
        let t = 1.3;
        let new = m.forward(t, &big).unwrap();
        let h = 1e-4;
        let dfdt = (m.generating_function(&big.q(), &new.p(), t + h).unwrap()
            - m.generating_function(&big.q(), &new.p(), t - h).unwrap())
            / (2.0 * h);
        let lhs = eval_h3(prm, &new);
        let rhs = eval_h2(prm, m.drive(), &big, t).unwrap() + dfdt;
        assert!((lhs - rhs).abs() < 1e-8, "{lhs} vs {rhs}");
    }

    #[test]
    fn ct2_phase_obeys_rate_equation() {
        let f = sample_field();
        let m = ct2(f.osc_params(), f.rotating_drive(), QuadratureSpec::default());
        for t in [0.5, 2.0, 5.0] {
            let h = 1e-4;
            let fd = (m.phase(t + h).unwrap() - m.phase(t - h).unwrap()) / (2.0 * h);
            let rate = m.phase_rate(t).unwrap();
            assert!((fd - rate).abs() < 1e-7, "t={t}: {fd} vs {rate}");
        }
    }

    #[test]
    fn forward_inverse_roundtrip() {
        let f = sample_field();
        let m1 = ct1(&f).unwrap();
        let m2 = ct2(f.osc_params(), f.rotating_drive(), QuadratureSpec::new(500.0).unwrap());
        let z = sample_state();
        for t in [0.1, 2.2, 7.5] {
            let back = m1.inverse(t, &m1.forward(t, &z).unwrap()).unwrap();
            assert!(back.distance(&z) < 1e-10);
            let back = m2.inverse(t, &m2.forward(t, &z).unwrap()).unwrap();
            assert!(back.distance(&z) < 1e-10);
        }
    }
}
