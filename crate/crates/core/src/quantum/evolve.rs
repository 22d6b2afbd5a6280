//! Strang split-step propagation of grid wavefunctions under the quadratic
//! Hamiltonians, used as the oracle for the unitary maps.

use num_complex::Complex64;

use crate::classical::drive::Drive;
use crate::classical::hamiltonians::StaticField;
use crate::error::{ensure, Error, Result};
use crate::propagator::OscParams;
use crate::quantum::grid::Grid;
use crate::quantum::spectral::Spectral;
use crate::quantum::wavefunction::WaveFunction;

/// Largest phase a time-dependent term may advance per step.
const MAX_PHASE_PER_STEP: f64 = 0.1;

/// Hamiltonians the grid propagator understands.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumHamiltonian {
    /// `P²/2m + (mω²/2)|Q̄|²`.
    H3 { params: OscParams },
    /// `H3 − ⟨Q̄, k(t)⟩`.
    H2 { params: OscParams, drive: Drive },
    /// Planar part of the charge in a static axial field:
    /// `p²/2m − (ω_c/2) L_z + (m ω_c²/8)|x̄|² − q⟨x̄, E⟩`.
    H1Planar { field: StaticField },
}

impl QuantumHamiltonian {
    pub fn mass(&self) -> f64 {
        match self {
            Self::H3 { params } | Self::H2 { params, .. } => params.mass,
            Self::H1Planar { field } => field.mass,
        }
    }

    /// Coefficient `mω²/2` of the isotropic potential.
    fn stiffness(&self) -> f64 {
        let p = match self {
            Self::H3 { params } | Self::H2 { params, .. } => *params,
            Self::H1Planar { field } => field.osc_params(),
        };
        0.5 * p.mass * p.omega * p.omega
    }

    /// Planar force in the linear potential term `−⟨x̄, F(t)⟩`.
    fn force(&self, t: f64) -> [f64; 2] {
        match self {
            Self::H3 { .. } => [0.0; 2],
            Self::H2 { drive, .. } => {
                let k = drive.eval_unchecked(t);
                [k.x, k.y]
            }
            Self::H1Planar { field } => [field.charge * field.e.x, field.charge * field.e.y],
        }
    }

    /// Rate `ω_c/2` of the angular-momentum term.
    fn rotation_rate(&self) -> f64 {
        match self {
            Self::H1Planar { field } => 0.5 * field.cyclotron_frequency(),
            _ => 0.0,
        }
    }

    fn validate(&self, grid: &Grid, t_end: f64) -> Result<()> {
        match self {
            Self::H2 { drive, .. } => drive.check_window(0.0, t_end),
            Self::H1Planar { field } => {
                if field.b.x != 0.0 || field.b.y != 0.0 {
                    return Err(Error::NonAxialField(field.b.x, field.b.y, field.b.z));
                }
                if grid.dims() != 2 {
                    return Err(Error::DimensionMismatch { expected: 2, got: grid.dims() });
                }
                Ok(())
            }
            Self::H3 { .. } => Ok(()),
        }
    }

    /// Shortest time scale of the explicitly time-dependent parts.
    fn time_scale(&self) -> Option<f64> {
        match self {
            Self::H2 { drive, .. } => drive.time_scale(),
            Self::H1Planar { .. } => {
                let r = self.rotation_rate().abs();
                (r > 0.0).then(|| 1.0 / r)
            }
            Self::H3 { .. } => None,
        }
    }

    /// Potential energy at a planar point.
    pub fn potential(&self, t: f64, x: f64, y: f64) -> f64 {
        let f = self.force(t);
        self.stiffness() * (x * x + y * y) - f[0] * x - f[1] * y
    }

    /// `H ψ` at time `t` with spectral derivatives.
    pub fn apply(&self, psi: &WaveFunction, t: f64) -> Result<Vec<Complex64>> {
        let grid = *psi.grid();
        self.validate(&grid, t)?;
        let hbar = psi.hbar();
        let mut sp = Spectral::new(grid);
        let data = psi.amplitudes();
        let lap = sp.laplacian(data);
        let kin = -hbar * hbar / (2.0 * self.mass());
        let mut out: Vec<Complex64> = data
            .iter()
            .zip(&lap)
            .enumerate()
            .map(|(i, (v, l))| {
                let [x, y] = grid.position(i);
                l * kin + v * self.potential(t, x, y)
            })
            .collect();
        let rate = self.rotation_rate();
        if rate != 0.0 {
            // −(ω_c/2) L_z ψ with L_z = −iħ (x ∂_y − y ∂_x)
            let dx = sp.derivative(data, 0);
            let dy = sp.derivative(data, 1);
            for (i, o) in out.iter_mut().enumerate() {
                let [x, y] = grid.position(i);
                let lz = (dy[i] * x - dx[i] * y) * Complex64::new(0.0, -hbar);
                *o -= lz * rate;
            }
        }
        Ok(out)
    }

    /// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩`.
    pub fn expectation(&self, psi: &WaveFunction, t: f64) -> Result<f64> {
        let h = self.apply(psi, t)?;
        let num: Complex64 = psi.amplitudes().iter().zip(&h).map(|(a, b)| a.conj() * b).sum();
        Ok(num.re * psi.grid().cell() / psi.norm_sqr())
    }
}

/// Time-stepping state of the split-step propagator.
#[derive(Debug)]
pub struct SplitStepper {
    hamiltonian: QuantumHamiltonian,
    spectral: Spectral,
    psi: WaveFunction,
    t: f64,
    dt: f64,
}

impl SplitStepper {
    pub fn new(psi0: WaveFunction, hamiltonian: QuantumHamiltonian, dt: f64) -> Result<Self> {
        ensure(dt.is_finite() && dt > 0.0, "dt", || format!("must be positive, got {dt}"))?;
        let grid = *psi0.grid();
        hamiltonian.validate(&grid, 0.0)?;
        if let Some(scale) = hamiltonian.time_scale() {
            if dt > MAX_PHASE_PER_STEP * scale {
                return Err(Error::StepTooCoarse { dt, scale });
            }
        }
        Ok(Self { hamiltonian, spectral: Spectral::new(grid), psi: psi0, t: 0.0, dt })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &WaveFunction {
        &self.psi
    }

    pub fn into_state(self) -> WaveFunction {
        self.psi
    }

    fn potential_phase(&mut self, t: f64, h: f64) {
        let grid = *self.psi.grid();
        let hbar = self.psi.hbar();
        let a = self.hamiltonian.stiffness();
        let f = self.hamiltonian.force(t);
        let coords = grid.coords();
        // the potential is separable, so the phase factors are outer products
        let axis = |force: f64| -> Vec<Complex64> {
            coords
                .iter()
                .map(|&x| Complex64::from_polar(1.0, -(a * x * x - force * x) * h / hbar))
                .collect()
        };
        let px = axis(f[0]);
        let data = self.psi.amplitudes_mut();
        if grid.dims() == 1 {
            data.iter_mut().zip(&px).for_each(|(v, p)| *v *= p);
        } else {
            let py = axis(f[1]);
            let n = grid.points();
            for (iy, row) in data.chunks_mut(n).enumerate() {
                row.iter_mut().zip(&px).for_each(|(v, p)| *v *= p * py[iy]);
            }
        }
    }

    /// One Strang step of length `h`: half potential, kinetic plus rotation,
    /// half potential.
    fn step(&mut self, h: f64) {
        let t0 = self.t;
        self.potential_phase(t0, 0.5 * h);
        let c = self.psi.hbar() * h / (2.0 * self.hamiltonian.mass());
        self.spectral.kinetic_phase(self.psi.amplitudes_mut(), c);
        let rate = self.hamiltonian.rotation_rate();
        if rate != 0.0 {
            // e^{i h (ω_c/2) L_z / ħ} pulls back along R(ω_c h / 2)
            self.spectral.rotate_pullback(self.psi.amplitudes_mut(), rate * h);
        }
        self.potential_phase(t0 + h, 0.5 * h);
        self.t = t0 + h;
    }

    /// Advance to `t`, using equal steps no longer than the configured `dt`.
    pub fn advance_to(&mut self, t: f64) -> Result<&WaveFunction> {
        ensure(t.is_finite() && t >= self.t, "t", || {
            format!("evolution times must be non-decreasing (at {}, requested {t})", self.t)
        })?;
        self.hamiltonian.validate(self.psi.grid(), t)?;
        let span = t - self.t;
        if span > 0.0 {
            let n = (span / self.dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let h = span / n as f64;
            let start = self.t;
            for i in 0..n {
                self.step(h);
                self.t = start + (i + 1) as f64 * h;
            }
            self.t = t;
        }
        if self.psi.amplitudes().iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite { time: self.t });
        }
        Ok(&self.psi)
    }
}

/// Evolve `psi0` from time 0 to `t` with step at most `dt`.
pub fn split_step_evolve(psi0: &WaveFunction, hamiltonian: &QuantumHamiltonian, t: f64, dt: f64) -> Result<WaveFunction> {
    let mut stepper = SplitStepper::new(psi0.clone(), hamiltonian.clone(), dt)?;
    stepper.advance_to(t)?;
    Ok(stepper.into_state())
}
