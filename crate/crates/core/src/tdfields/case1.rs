//! Magnetic field of fixed direction ẑ and time-dependent magnitude.

use crate::classical::drive::Drive;
use crate::classical::state::PhaseState;
use crate::error::{ensure, Result};
use crate::linalg::{cross_matrix, rotation_about_z, Mat3, Vec3, SPEED_OF_LIGHT};
use crate::tdfields::hill::HillSystem;
use crate::tdfields::signal::Signal;

/// `|p − (m/2) Ω x|² / 2m − q⟨x, E⟩` for the cyclotron vector `w` (`Ω x = w × x`).
pub fn eval_h4(w: &Vec3, e: &Vec3, charge: f64, mass: f64, z: &PhaseState) -> f64 {
    let (x, p) = (z.q(), z.p());
    let kin = p - cross_matrix(w) * x * (0.5 * mass);
    kin.norm_squared() / (2.0 * mass) - charge * x.dot(e)
}

/// `B(t) = B₃(t) ẑ` with electric field `E₀(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedAxisField {
    pub b3: Signal,
    pub e0: Drive,
    pub charge: f64,
    pub mass: f64,
}

impl FixedAxisField {
    pub fn new(b3: Signal, e0: Drive, charge: f64, mass: f64) -> Result<Self> {
        ensure(mass.is_finite() && mass > 0.0, "mass", || format!("must be positive, got {mass}"))?;
        ensure(charge.is_finite(), "charge", || "must be finite".into())?;
        Ok(Self { b3, e0, charge, mass })
    }

    fn scale(&self) -> f64 {
        self.charge / (self.mass * SPEED_OF_LIGHT)
    }

    /// `ω(t) = q B₃(t) / (m c)`.
    pub fn cyclotron_frequency(&self, t: f64) -> f64 {
        self.scale() * self.b3.eval(t)
    }

    /// `A(t) = ∫₀ᵗ ω(s) ds`.
    pub fn rotation_angle(&self, t: f64) -> f64 {
        self.scale() * self.b3.integral(t)
    }

    /// `R(t) = exp(∫₀ᵗ Ω(s) ds)`.
    pub fn rotation(&self, t: f64) -> Mat3 {
        rotation_case1(&self.b3, self.charge, self.mass, t)
    }

    pub fn eval_h4(&self, z: &PhaseState, t: f64) -> Result<f64> {
        let w = Vec3::new(0.0, 0.0, self.cyclotron_frequency(t));
        Ok(eval_h4(&w, &self.e0.eval(t)?, self.charge, self.mass, z))
    }

    /// Planar Hill equation seen in the frame rotating by `A(t)/2`:
    /// `ω²(t) = (ω(t)/2)²`.
    pub fn hill_system(&self, period: f64) -> Result<HillSystem> {
        let s = self.b3.scaled(0.5 * self.scale());
        Ok(HillSystem::new(move |t| s.eval(t).powi(2), period)?.labelled("fixed-axis field"))
    }
}

/// Rotation about ẑ by `A(t) = (q / m c) ∫₀ᵗ B₃(s) ds`.
pub fn rotation_case1(b3: &Signal, charge: f64, mass: f64, t: f64) -> Mat3 {
    rotation_about_z(charge / (mass * SPEED_OF_LIGHT) * b3.integral(t))
}

/// RK4 solution of `Ṙ = Ω(t) R`, `R(0) = I`, the reference for
/// [`rotation_case1`].
pub fn rotation_case1_ode(b3: &Signal, charge: f64, mass: f64, t: f64, dt: f64) -> Result<Mat3> {
    ensure(dt.is_finite() && dt > 0.0, "dt", || format!("must be positive, got {dt}"))?;
    let scale = charge / (mass * SPEED_OF_LIGHT);
    let omega = |s: f64| cross_matrix(&Vec3::new(0.0, 0.0, scale * b3.eval(s)));
    let n = (t.abs() / dt).ceil().max(1.0) as usize;
    let h = t / n as f64;
    let mut r = Mat3::identity();
    for i in 0..n {
        let s = i as f64 * h;
        let k1 = omega(s) * r;
        let k2 = omega(s + 0.5 * h) * (r + k1 * (0.5 * h));
        let k3 = omega(s + 0.5 * h) * (r + k2 * (0.5 * h));
        let k4 = omega(s + h) * (r + k3 * h);
        r += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    Ok(r)
}
