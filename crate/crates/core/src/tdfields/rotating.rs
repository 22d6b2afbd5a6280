//! Magnetic field rotating about ẑ at a constant rate, and the two
//! canonical maps that reduce it to an oscillator with periodic stiffness.

use std::f64::consts::TAU;

use crate::classical::drive::Drive;
use crate::classical::maps::CanonicalMap;
use crate::classical::state::PhaseState;
use crate::error::{ensure, Result};
use crate::linalg::{axial_vector, cross_matrix, exp_antisymmetric, rotate_phase, rotation_about_z, Mat3, Vec3, SPEED_OF_LIGHT};
use crate::tdfields::case1::eval_h4;
use crate::tdfields::hill::VectorHillSystem;

/// `B(t) = R(αt) (B₁, 0, B₃)` with electric field `E₀(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatingField {
    pub b1: f64,
    pub b3: f64,
    pub alpha: f64,
    pub e0: Drive,
    pub charge: f64,
    pub mass: f64,
}

impl RotatingField {
    pub fn new(b1: f64, b3: f64, alpha: f64, e0: Drive, charge: f64, mass: f64) -> Result<Self> {
        ensure(mass.is_finite() && mass > 0.0, "mass", || format!("must be positive, got {mass}"))?;
        ensure([b1, b3, alpha, charge].iter().all(|v| v.is_finite()), "field", || "parameters must be finite".into())?;
        Ok(Self { b1, b3, alpha, e0, charge, mass })
    }

    /// Cyclotron frequencies `(ω₁, ω₃) = q (B₁, B₃) / (m c)`.
    pub fn cyclotron(&self) -> (f64, f64) {
        let s = self.charge / (self.mass * SPEED_OF_LIGHT);
        (s * self.b1, s * self.b3)
    }

    pub fn magnetic_field(&self, t: f64) -> Vec3 {
        rotation_about_z(self.alpha * t) * Vec3::new(self.b1, 0.0, self.b3)
    }

    /// Cyclotron vector `(ω₁ cos αt, ω₁ sin αt, ω₃)`.
    pub fn cyclotron_vector(&self, t: f64) -> Vec3 {
        let (w1, w3) = self.cyclotron();
        let (s, c) = (self.alpha * t).sin_cos();
        Vec3::new(w1 * c, w1 * s, w3)
    }

    /// `Ω₁(t)`, the cross-product matrix of the cyclotron vector.
    pub fn omega1(&self, t: f64) -> Mat3 {
        cross_matrix(&self.cyclotron_vector(t))
    }

    /// Generator `Λ` of the field rotation, `Ṙ(αt) = Λ R(αt)`.
    pub fn lambda(&self) -> Mat3 {
        cross_matrix(&Vec3::new(0.0, 0.0, self.alpha))
    }

    /// Co-rotating frame `R(αt)`.
    pub fn frame(&self, t: f64) -> Mat3 {
        rotation_about_z(self.alpha * t)
    }

    /// Largest entry of `R(−αt) Ω₁(t) R(αt) − Ω₁(0)`.
    pub fn conjugation_defect(&self, t: f64) -> f64 {
        let r = self.frame(t);
        (r.transpose() * self.omega1(t) * r - self.omega1(0.0)).amax()
    }

    /// Largest entry of `Ω̇₁ − [Λ, Ω₁]`, with `Ω̇₁` by central differences.
    pub fn euler_defect(&self, t: f64, h: f64) -> f64 {
        let dot = (self.omega1(t + h) - self.omega1(t - h)) / (2.0 * h);
        let (l, w) = (self.lambda(), self.omega1(t));
        (dot - (l * w - w * l)).amax()
    }

    /// Electric field `−(1/c) ∂A/∂t = −½ Ḃ × x / c` induced by the changing
    /// vector potential. It is part of the dynamics of [`Self::eval_h4`]; it
    /// has nonzero curl, so it cannot be folded into a uniform `E₀`.
    pub fn induced_electric_field(&self, t: f64, x: &Vec3) -> Vec3 {
        let (s, c) = (self.alpha * t).sin_cos();
        let b_dot = Vec3::new(-self.alpha * self.b1 * s, self.alpha * self.b1 * c, 0.0);
        -0.5 * b_dot.cross(x) / SPEED_OF_LIGHT
    }

    pub fn eval_h4(&self, z: &PhaseState, t: f64) -> Result<f64> {
        Ok(eval_h4(&self.cyclotron_vector(t), &self.e0.eval(t)?, self.charge, self.mass, z))
    }

    pub fn ct3(&self) -> Ct3 {
        Ct3 { alpha: self.alpha }
    }
}

/// Passage to the frame co-rotating with the field:
/// `Q = R(−αt) x`, `P = R(−αt) p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ct3 {
    pub alpha: f64,
}

impl Ct3 {
    /// `F(x, P, t) = ⟨x, R(αt) P⟩`.
    pub fn generating_function(&self, x: &Vec3, big_p: &Vec3, t: f64) -> f64 {
        x.dot(&(rotation_about_z(self.alpha * t) * big_p))
    }
}

impl CanonicalMap for Ct3 {
    fn forward(&self, t: f64, z: &PhaseState) -> Result<PhaseState> {
        Ok(PhaseState(rotate_phase(&rotation_about_z(-self.alpha * t), &z.0)))
    }

    fn inverse(&self, t: f64, z: &PhaseState) -> Result<PhaseState> {
        Ok(PhaseState(rotate_phase(&rotation_about_z(self.alpha * t), &z.0)))
    }

    fn phase(&self, _t: f64) -> Result<f64> {
        Ok(0.0)
    }
}

/// Hamiltonian in the co-rotating frame:
/// `H5 = |P|²/2m − ⟨P, M Q⟩ + ½⟨Q, K₀ Q⟩ − q⟨Q, E₁(t)⟩`
/// with `M = ½Ω₁(0) + Λ`, `K₀ = (m/4) Ω₁(0)ᵀ Ω₁(0)` and `E₁(t) = R(−αt) E₀(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct H5 {
    pub mass: f64,
    pub charge: f64,
    pub alpha: f64,
    pub omega1_0: Mat3,
    pub generator: Mat3,
    pub stiffness: Mat3,
    pub e0: Drive,
}

pub fn ct3_reduce(field: &RotatingField) -> H5 {
    let omega1_0 = field.omega1(0.0);
    H5 {
        mass: field.mass,
        charge: field.charge,
        alpha: field.alpha,
        omega1_0,
        generator: omega1_0 * 0.5 + field.lambda(),
        stiffness: omega1_0.transpose() * omega1_0 * (0.25 * field.mass),
        e0: field.e0.clone(),
    }
}

impl H5 {
    /// Axis vector `w` of `M` (`M x = w × x`).
    pub fn rotation_vector(&self) -> Vec3 {
        axial_vector(&self.generator)
    }

    /// Unit axis of the rotation group `exp(tM)`; zero when `M = 0`.
    pub fn axis(&self) -> Vec3 {
        let w = self.rotation_vector();
        if w.norm() == 0.0 { w } else { w.normalize() }
    }

    /// Angular speed `θ = ((ω₁/2)² + (α + ω₃/2)²)^{1/2}` of `exp(tM)`.
    pub fn theta(&self) -> f64 {
        self.rotation_vector().norm()
    }

    /// `E₁(t) = R(−αt) E₀(t)`.
    pub fn e1(&self, t: f64) -> Result<Vec3> {
        Ok(rotation_about_z(-self.alpha * t) * self.e0.eval(t)?)
    }

    pub fn eval(&self, z: &PhaseState, t: f64) -> Result<f64> {
        let (q, p) = (z.q(), z.p());
        Ok(p.norm_squared() / (2.0 * self.mass) - p.dot(&(self.generator * q))
            + 0.5 * q.dot(&(self.stiffness * q))
            - self.charge * q.dot(&self.e1(t)?))
    }

    pub fn ct4(&self) -> Ct4 {
        Ct4 { generator: self.generator }
    }
}

/// Removal of the gyroscopic term: `x' = e^{tM} Q`, `p' = e^{tM} P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ct4 {
    pub generator: Mat3,
}

impl Ct4 {
    pub fn group(&self, t: f64) -> Mat3 {
        exp_antisymmetric(&(self.generator * t))
    }

    /// `F(Q, p', t) = ⟨e^{tM} Q, p'⟩`.
    pub fn generating_function(&self, q: &Vec3, p_new: &Vec3, t: f64) -> f64 {
        (self.group(t) * q).dot(p_new)
    }
}

impl CanonicalMap for Ct4 {
    fn forward(&self, t: f64, z: &PhaseState) -> Result<PhaseState> {
        Ok(PhaseState(rotate_phase(&self.group(t), &z.0)))
    }

    fn inverse(&self, t: f64, z: &PhaseState) -> Result<PhaseState> {
        Ok(PhaseState(rotate_phase(&self.group(-t), &z.0)))
    }

    fn phase(&self, _t: f64) -> Result<f64> {
        Ok(0.0)
    }
}

/// `H6 = |p'|²/2m + ½⟨x', K(t) x'⟩ − q⟨x', e^{tM} E₁(t)⟩` with the rotating
/// stiffness `K(t) = e^{tM} K₀ e^{−tM}`.
#[derive(Debug, Clone, PartialEq)]
pub struct H6 {
    pub h5: H5,
}

pub fn ct4_reduce(h5: &H5) -> H6 {
    H6 { h5: h5.clone() }
}

impl H6 {
    pub fn stiffness(&self, t: f64) -> Mat3 {
        let g = self.h5.ct4().group(t);
        g * self.h5.stiffness * g.transpose()
    }

    /// Period `2π/θ` of the stiffness, `None` when `M = 0`.
    pub fn period(&self) -> Option<f64> {
        let theta = self.h5.theta();
        (theta > 0.0).then(|| TAU / theta)
    }

    pub fn force(&self, t: f64) -> Result<Vec3> {
        Ok(self.h5.ct4().group(t) * self.h5.e1(t)? * self.h5.charge)
    }

    pub fn eval(&self, z: &PhaseState, t: f64) -> Result<f64> {
        let (q, p) = (z.q(), z.p());
        Ok(p.norm_squared() / (2.0 * self.h5.mass) + 0.5 * q.dot(&(self.stiffness(t) * q)) - q.dot(&self.force(t)?))
    }

    /// `ẍ' + K(t) x' / m = 0`. A constant stiffness is given the nominal
    /// period `fallback`.
    pub fn vector_system(&self, fallback: f64) -> Result<VectorHillSystem> {
        let this = self.clone();
        let m = self.h5.mass;
        VectorHillSystem::new(move |t| this.stiffness(t) / m, self.period().unwrap_or(fallback))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::hamiltonians::StaticField;
    use crate::classical::maps::ct1;

    fn field() -> RotatingField {
        RotatingField::new(0.7, 1.9, 0.45, Drive::Constant(Vec3::new(0.1, -0.2, 0.05)), 1.2, 0.9).unwrap()
    }

    fn z() -> PhaseState {
        PhaseState::from_qp(Vec3::new(0.3, -0.8, 0.5), Vec3::new(-0.4, 0.2, 0.9))
    }

    #[test]
    fn omega1_at_zero() {
        let f = field();
        let (w1, w3) = f.cyclotron();
        let expect = Mat3::new(0.0, -w3, 0.0, w3, 0.0, -w1, 0.0, w1, 0.0);
        assert_eq!(f.omega1(0.0), expect);
        assert_eq!(f.omega1(0.3), -f.omega1(0.3).transpose());
    }

    #[test]
    fn conjugation_and_euler() {
        let f = field();
        for t in [0.0, 0.4, 3.3, 10.0] {
            assert!(f.conjugation_defect(t) < 1e-14);
            assert!(f.euler_defect(t, 1e-5) < 1e-9);
        }
    }

    #[test]
    fn literal_conjugation_fails_off_axis() {
        let f = field();
        let t = 1.1;
        let r = f.frame(t);
        assert!((r * f.omega1(t) * r.transpose() - f.omega1(0.0)).amax() > 1e-2);
    }

    #[test]
    fn axial_limit_is_static_generator() {
        let f = RotatingField::new(0.0, 2.0, 0.0, Drive::zero(), 1.0, 1.0).unwrap();
        let s = StaticField::axial(2.0, Vec3::zeros(), 1.0, 1.0).unwrap();
        assert_eq!(f.omega1(2.0), cross_matrix(&s.cyclotron_vector()));
        let h5 = ct3_reduce(&f);
        assert_eq!(h5.generator, f.omega1(0.0) * 0.5);
    }

    #[test]
    fn generator_spectrum_matches_theta() {
        let f = field();
        let h5 = ct3_reduce(&f);
        let (w1, w3) = f.cyclotron();
        let theta = ((w1 / 2.0).powi(2) + (f.alpha + w3 / 2.0).powi(2)).sqrt();
        assert!((h5.theta() - theta).abs() < 1e-15);
        let eig = h5.generator.complex_eigenvalues();
        let mut im: Vec<f64> = eig.iter().map(|l| l.im).collect();
        im.sort_by(f64::total_cmp);
        assert!((im[0] + theta).abs() < 1e-12 && im[1].abs() < 1e-12 && (im[2] - theta).abs() < 1e-12);
        assert_eq!(h5.generator, -h5.generator.transpose());
    }

    #[test]
    fn h5_is_pullback_of_h4() {
        let f = field();
        let h5 = ct3_reduce(&f);
        let c3 = f.ct3();
        let z = z();
        for t in [0.0, 0.7, 2.9] {
            let mapped = c3.forward(t, &z).unwrap();
            let h = 1e-5;
            let dfdt = (c3.generating_function(&z.q(), &mapped.p(), t + h) - c3.generating_function(&z.q(), &mapped.p(), t - h)) / (2.0 * h);
            let lhs = h5.eval(&mapped, t).unwrap();
            let rhs = f.eval_h4(&z, t).unwrap() + dfdt;
            assert!((lhs - rhs).abs() < 1e-9, "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn h6_is_pullback_of_h5() {
        let h5 = ct3_reduce(&field());
        let h6 = ct4_reduce(&h5);
        let c4 = h5.ct4();
        let z = z();
        for t in [0.0, 1.3, 4.0] {
            let mapped = c4.forward(t, &z).unwrap();
            let h = 1e-5;
            let g = |s: f64| c4.generating_function(&z.q(), &mapped.p(), s);
            let dfdt = (g(t + h) - g(t - h)) / (2.0 * h);
            let lhs = h6.eval(&mapped, t).unwrap();
            let rhs = h5.eval(&z, t).unwrap() + dfdt;
            assert!((lhs - rhs).abs() < 1e-9, "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn stiffness_is_psd_and_periodic() {
        let h6 = ct4_reduce(&ct3_reduce(&field()));
        let period = h6.period().unwrap();
        for t in [0.0, 0.3, 1.7, 5.0] {
            let k = h6.stiffness(t);
            assert!((k - k.transpose()).amax() < 1e-14);
            assert!(k.symmetric_eigenvalues().iter().all(|&l| l > -1e-12));
            assert!((h6.stiffness(t + period) - k).amax() < 1e-12);
        }
    }

    #[test]
    fn static_limit_composes_to_rotating_frame() {
        let f = RotatingField::new(0.0, 1.6, 0.0, Drive::zero(), 1.0, 1.3).unwrap();
        let s = StaticField::axial(1.6, Vec3::zeros(), 1.0, 1.3).unwrap();
        let h5 = ct3_reduce(&f);
        let (c3, c4, c1) = (f.ct3(), h5.ct4(), ct1(&s).unwrap());
        for t in [0.4, 2.2] {
            let a = c4.forward(t, &c3.forward(t, &z()).unwrap()).unwrap();
            let b = c1.forward(t, &z()).unwrap();
            assert!(a.distance(&b) < 1e-14);
        }
        let h6 = ct4_reduce(&h5);
        assert!((h6.stiffness(0.0) - h6.stiffness(3.1)).amax() < 1e-14);
    }

    #[test]
    fn induced_field_has_curl() {
        let f = field();
        let e = |x: Vec3| f.induced_electric_field(0.8, &x);
        // ⟨x, E_ind(x)⟩ vanishes, so no scalar potential can represent it
        let x = Vec3::new(0.3, 1.2, -0.7);
        assert!(x.dot(&e(x)).abs() < 1e-15);
        assert!(e(x).norm() > 1e-3);
    }

    #[test]
    fn maps_are_identity_at_zero() {
        let f = field();
        let h5 = ct3_reduce(&f);
        assert_eq!(f.ct3().forward(0.0, &z()).unwrap(), z());
        assert_eq!(h5.ct4().forward(0.0, &z()).unwrap(), z());
    }
}
