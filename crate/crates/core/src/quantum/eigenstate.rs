//! Eigenstates of the simple oscillator carried through both unitary maps,
//! with every global phase kept in a ledger instead of the amplitudes.

use num_complex::Complex64;

use crate::classical::driven::QuadratureSpec;
use crate::classical::hamiltonians::StaticField;
use crate::classical::maps::{ct1, ct2};
use crate::error::{ensure, Result};
use crate::quantum::grid::Grid;
use crate::quantum::hermite::{eigenfunction, energy, EigenLabel};
use crate::quantum::unitary::{apply_shift, shift_data, unitary_qt1, MapOptions};
use crate::quantum::wavefunction::WaveFunction;

/// Which maps to apply to the oscillator eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    /// Moving-origin shift only: a state of the driven oscillator.
    Qt2,
    /// Shift followed by the rotating-frame map: a state of the charge.
    Qt2Qt1,
}

/// Axial plane-wave factor `exp(i (k + p₃/ħ)(x₃ − q₃))`, kept symbolic
/// because it is not square integrable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialFactor {
    /// Wavenumber of the oscillator eigenstate.
    pub k: f64,
    /// Axial moving origin.
    pub q3: f64,
    pub p3: f64,
}

impl AxialFactor {
    pub fn eval(&self, x3: f64, hbar: f64) -> Complex64 {
        Complex64::from_polar(1.0, (self.k + self.p3 / hbar) * (x3 - self.q3))
    }
}

/// Global phases, in radians, accumulated by the transformed eigenstate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseLedger {
    /// `−E_planar t / ħ`.
    pub dynamical_planar: f64,
    /// `−ħ k² t / 2m`.
    pub dynamical_axial: f64,
    /// Action of the planar moving origin over `ħ`.
    pub action_planar: f64,
    /// Action of the axial moving origin over `ħ`.
    pub action_axial: f64,
}

impl PhaseLedger {
    pub fn dynamical(&self) -> f64 {
        self.dynamical_planar + self.dynamical_axial
    }

    pub fn action(&self) -> f64 {
        self.action_planar + self.action_axial
    }

    pub fn planar(&self) -> f64 {
        self.dynamical_planar + self.action_planar
    }

    pub fn total(&self) -> f64 {
        self.dynamical() + self.action()
    }
}

/// A transformed eigenstate: gridded planar profile, symbolic axial factor,
/// and the phase ledger.
#[derive(Debug, Clone)]
pub struct TransformedEigenstate {
    pub profile: WaveFunction,
    pub axial: AxialFactor,
    pub ledger: PhaseLedger,
}

impl TransformedEigenstate {
    /// Planar wavefunction with the planar global phases folded in.
    pub fn planar_state(&self) -> WaveFunction {
        self.profile.with_global_phase(self.ledger.planar())
    }
}

/// Settings for [`transformed_eigenstate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenstateSetup {
    pub grid: Grid,
    pub hbar: f64,
    pub quad: QuadratureSpec,
    pub maps: MapOptions,
}

/// Product eigenstate `φ_{n₁}(x) φ_{n₂}(y)` on a square grid.
pub fn planar_eigenstate(label: EigenLabel, field: &StaticField, grid: Grid, hbar: f64) -> Result<WaveFunction> {
    let params = field.osc_params();
    ensure(params.omega > 0.0, "field", || "the eigenstates need a nonzero magnetic field".into())?;
    ensure(grid.dims() == 2, "grid", || "planar eigenstates need a 2D grid".into())?;
    WaveFunction::from_fn(grid, hbar, |x, y| {
        Complex64::new(eigenfunction(label.n1, params, hbar, x) * eigenfunction(label.n2, params, hbar, y), 0.0)
    })
}

/// Evolve the oscillator eigenstate `label` to time `t` and push it through
/// the chosen maps for the charge in `field`.
pub fn transformed_eigenstate(
    label: EigenLabel,
    t: f64,
    field: &StaticField,
    pipeline: Pipeline,
    setup: &EigenstateSetup,
) -> Result<TransformedEigenstate> {
    ensure(t.is_finite() && t >= 0.0, "t", || format!("must be non-negative, got {t}"))?;
    let params = field.osc_params();
    let hbar = setup.hbar;
    let base = planar_eigenstate(label, field, setup.grid, hbar)?;
    let planar_energy = energy(EigenLabel::planar(label.n1, label.n2), params, hbar);
    let axial_energy = energy(label, params, hbar) - planar_energy;

    let shift_map = ct2(params, field.rotating_drive(), setup.quad);
    let data = shift_data(&shift_map, &setup.grid, t)?;
    let point = shift_map.path_point(t)?;
    let shifted = apply_shift(&base, &data, setup.maps)?;
    let profile = match pipeline {
        Pipeline::Qt2 => shifted,
        Pipeline::Qt2Qt1 => unitary_qt1(&shifted, t, &ct1(field)?, setup.maps)?,
    };
    let (q, p) = (point.origin.q(), point.origin.p());
    Ok(TransformedEigenstate {
        profile,
        axial: AxialFactor { k: label.k, q3: q.z, p3: p.z },
        ledger: PhaseLedger {
            dynamical_planar: -planar_energy * t / hbar,
            dynamical_axial: -axial_energy * t / hbar,
            action_planar: data.action / hbar,
            action_axial: point.action_by_axis.z / hbar,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vec3;

    fn setup(n: usize, x: f64) -> EigenstateSetup {
        EigenstateSetup {
            grid: Grid::square(n, x).unwrap(),
            hbar: 1.0,
            quad: QuadratureSpec::new(2000.0).unwrap(),
            maps: MapOptions::default(),
        }
    }

    #[test]
    fn magnetic_only_has_only_dynamical_phase() {
        let f = StaticField::axial(2.0, Vec3::zeros(), 1.0, 1.0).unwrap();
        let s = setup(64, 8.0);
        let out = transformed_eigenstate(EigenLabel::new(1, 0, 0.7), 1.3, &f, Pipeline::Qt2Qt1, &s).unwrap();
        assert_eq!(out.ledger.action(), 0.0);
        let e = energy(EigenLabel::new(1, 0, 0.7), f.osc_params(), 1.0);
        assert!((out.ledger.dynamical() + e * 1.3).abs() < 1e-12);
        assert!((out.profile.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn ground_state_profile_is_rotation_invariant() {
        let f = StaticField::axial(2.0, Vec3::zeros(), 1.0, 1.0).unwrap();
        let s = setup(64, 8.0);
        let base = planar_eigenstate(EigenLabel::planar(0, 0), &f, s.grid, 1.0).unwrap();
        let out = transformed_eigenstate(EigenLabel::planar(0, 0), 0.9, &f, Pipeline::Qt2Qt1, &s).unwrap();
        assert!(out.profile.distance(&base) < 1e-10);
    }

    #[test]
    fn axial_factor_is_unimodular() {
        let a = AxialFactor { k: 1.2, q3: 0.3, p3: -0.4 };
        assert!((a.eval(2.0, 0.7).norm() - 1.0).abs() < 1e-15);
        assert_eq!(a.eval(0.3, 0.7), Complex64::new(1.0, 0.0));
    }
}
