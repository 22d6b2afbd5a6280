use num_complex::Complex64;

use crate::error::{ensure, Error, Result};
use crate::quantum::grid::Grid;

/// Complex amplitudes on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    amplitudes: Vec<Complex64>,
    hbar: f64,
}

impl WaveFunction {
    pub fn new(grid: Grid, amplitudes: Vec<Complex64>, hbar: f64) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: amplitudes.len() });
        }
        ensure(hbar.is_finite() && hbar > 0.0, "hbar", || format!("must be positive, got {hbar}"))?;
        let psi = Self { grid, amplitudes, hbar };
        ensure(psi.norm().is_finite(), "amplitudes", || "norm is not finite".into())?;
        Ok(psi)
    }

    /// Sample `f(x, y)` at every grid point (`y = 0` on 1D grids).
    pub fn from_fn(grid: Grid, hbar: f64, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let amps = (0..grid.len()).map(|i| {
            let [x, y] = grid.position(i);
            f(x, y)
        });
        Self::new(grid, amps.collect(), hbar)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), self.amplitudes.len());
        Self { grid: self.grid, amplitudes, hbar: self.hbar }
    }

    /// `∫ |ψ|²` by the grid rule.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.cell()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let s = 1.0 / self.norm();
        self.with_amplitudes(self.amplitudes.iter().map(|a| a * s).collect())
    }

    /// `⟨self | other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.grid.cell()
    }

    /// Grid L² distance `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> f64 {
        let s: f64 = self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm_sqr()).sum();
        (s * self.grid.cell()).sqrt()
    }

    /// `⟨x⟩, ⟨y⟩` divided by the norm.
    pub fn mean_position(&self) -> [f64; 2] {
        let mut m = [0.0; 2];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let [x, y] = self.grid.position(i);
            let w = a.norm_sqr();
            m[0] += x * w;
            m[1] += y * w;
        }
        let total: f64 = self.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        [m[0] / total, m[1] / total]
    }

    /// Multiply every amplitude by `e^{iφ}`.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let p = Complex64::from_polar(1.0, phase);
        self.with_amplitudes(self.amplitudes.iter().map(|a| a * p).collect())
    }

    /// Rows `(x[, y], Re ψ, Im ψ, |ψ|²)` for export.
    pub fn rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.amplitudes.iter().enumerate().map(move |(i, a)| {
            let [x, y] = self.grid.position(i);
            let mut row = vec![x];
            if self.grid.dims() == 2 {
                row.push(y);
            }
            row.extend([a.re, a.im, a.norm_sqr()]);
            row
        })
    }
}
