//! FFT-based operations on periodic grids: kinetic propagation, translation,
//! shears and rotations.
//!
//! Rotations use the three-shear factorisation
//! `R(θ) = X(−tan θ/2) Y(sin θ) X(−tan θ/2)` after reducing the angle by exact
//! quarter turns, so every sub-step is a Fourier-exact translation.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::quantum::grid::Grid;

pub struct Spectral {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    transposed: Vec<Complex64>,
    k: Vec<f64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

impl Spectral {
    pub fn new(grid: Grid) -> Self {
        let n = grid.points();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Self {
            grid,
            forward,
            inverse,
            scratch: vec![Complex64::default(); scratch_len],
            transposed: vec![Complex64::default(); grid.len()],
            k: grid.wavenumbers(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    fn transpose(&mut self, data: &mut [Complex64]) {
        let n = self.grid.points();
        for iy in 0..n {
            for ix in 0..n {
                self.transposed[ix * n + iy] = data[iy * n + ix];
            }
        }
        data.copy_from_slice(&self.transposed);
    }

    fn rows(&mut self, data: &mut [Complex64], inverse: bool) {
        let fft = if inverse { &self.inverse } else { &self.forward };
        fft.process_with_scratch(data, &mut self.scratch);
        if inverse {
            let s = 1.0 / self.grid.points() as f64;
            data.iter_mut().for_each(|v| *v *= s);
        }
    }

    /// Forward transform over every axis.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.rows(data, false);
        if self.grid.dims() == 2 {
            self.transpose(data);
            self.rows(data, false);
            self.transpose(data);
        }
    }

    /// Normalised inverse transform over every axis.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.rows(data, true);
        if self.grid.dims() == 2 {
            self.transpose(data);
            self.rows(data, true);
            self.transpose(data);
        }
    }

    /// Multiply by `e^{-i c |k|²}` in Fourier space.
    pub fn kinetic_phase(&mut self, data: &mut [Complex64], c: f64) {
        let n = self.grid.points();
        let phases: Vec<Complex64> = self.k.iter().map(|k| Complex64::from_polar(1.0, -c * k * k)).collect();
        self.forward(data);
        if self.grid.dims() == 1 {
            data.iter_mut().zip(&phases).for_each(|(v, p)| *v *= p);
        } else {
            for iy in 0..n {
                let py = phases[iy];
                for ix in 0..n {
                    data[iy * n + ix] *= phases[ix] * py;
                }
            }
        }
        self.inverse(data);
    }

    /// `⟨ψ| −∇² |ψ⟩ · cell`, i.e. `Σ |k|² |ψ̂|²` with the grid measure.
    pub fn kinetic_moment(&mut self, data: &[Complex64]) -> f64 {
        let n = self.grid.points();
        let mut buf = data.to_vec();
        self.forward(&mut buf);
        let total: f64 = buf
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let k2 = if self.grid.dims() == 1 {
                    self.k[i].powi(2)
                } else {
                    self.k[i % n].powi(2) + self.k[i / n].powi(2)
                };
                k2 * v.norm_sqr()
            })
            .sum();
        total * self.grid.cell() / self.grid.len() as f64
    }

    /// Spectral Laplacian.
    pub fn laplacian(&mut self, data: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.points();
        let mut buf = data.to_vec();
        self.forward(&mut buf);
        for (i, v) in buf.iter_mut().enumerate() {
            let k2 = if self.grid.dims() == 1 {
                self.k[i].powi(2)
            } else {
                self.k[i % n].powi(2) + self.k[i / n].powi(2)
            };
            *v *= -k2;
        }
        self.inverse(&mut buf);
        buf
    }

    /// Spectral partial derivative along `axis` (0 = x, 1 = y).
    pub fn derivative(&mut self, data: &[Complex64], axis: usize) -> Vec<Complex64> {
        let n = self.grid.points();
        let mut buf = data.to_vec();
        self.forward(&mut buf);
        for (i, v) in buf.iter_mut().enumerate() {
            let j = if axis == 0 { i % n } else { i / n };
            // drop the unpaired Nyquist mode
            let k = if j == n / 2 { 0.0 } else { self.k[j] };
            *v *= Complex64::new(0.0, k);
        }
        self.inverse(&mut buf);
        buf
    }

    /// `ψ(x) ← ψ(x + shift(row))` along the contiguous axis, one shift per row.
    fn shift_rows(&mut self, data: &mut [Complex64], shift: impl Fn(usize) -> f64) {
        let n = self.grid.points();
        let rows = data.len() / n;
        for r in 0..rows {
            let s = shift(r);
            if s == 0.0 {
                continue;
            }
            let row = &mut data[r * n..(r + 1) * n];
            self.forward.process_with_scratch(row, &mut self.scratch);
            for (j, v) in row.iter_mut().enumerate() {
                // keep the Nyquist mode real so real functions stay real
                let k = if j == n / 2 { 0.0 } else { self.k[j] };
                *v *= Complex64::from_polar(1.0 / n as f64, k * s);
                if j == n / 2 {
                    *v *= (self.k[j] * s).cos();
                }
            }
            self.inverse.process_with_scratch(row, &mut self.scratch);
        }
    }

    /// Translate: `ψ(x) ← ψ(x + shift)`.
    pub fn translate(&mut self, data: &mut [Complex64], shift: [f64; 2]) {
        self.shift_rows(data, |_| shift[0]);
        if self.grid.dims() == 2 && shift[1] != 0.0 {
            self.transpose(data);
            self.shift_rows(data, |_| shift[1]);
            self.transpose(data);
        }
    }

    /// `ψ(x, y) ← ψ(x + a y, y)`.
    pub fn shear_x(&mut self, data: &mut [Complex64], a: f64) {
        let g = self.grid;
        self.shift_rows(data, |iy| a * g.coord(iy));
    }

    /// `ψ(x, y) ← ψ(x, y + b x)`.
    pub fn shear_y(&mut self, data: &mut [Complex64], b: f64) {
        let g = self.grid;
        self.transpose(data);
        self.shift_rows(data, |ix| b * g.coord(ix));
        self.transpose(data);
    }

    /// `ψ(r) ← ψ(R(π/2) r)`, exact index permutation on the periodic grid.
    pub fn quarter_turn(&mut self, data: &mut [Complex64]) {
        let n = self.grid.points();
        for iy in 0..n {
            for ix in 0..n {
                self.transposed[iy * n + ix] = data[ix * n + (n - iy) % n];
            }
        }
        data.copy_from_slice(&self.transposed);
    }

    /// Pull back along a planar rotation: `ψ(r) ← ψ(R(θ) r)`.
    pub fn rotate_pullback(&mut self, data: &mut [Complex64], theta: f64) {
        assert_eq!(self.grid.dims(), 2, "rotations need a 2D grid");
        let quarters = (theta / FRAC_PI_2).round();
        let rest = theta - quarters * FRAC_PI_2;
        for _ in 0..(quarters.rem_euclid(4.0) as usize) {
            self.quarter_turn(data);
        }
        if rest != 0.0 {
            let a = -(0.5 * rest).tan();
            self.shear_x(data, a);
            self.shear_y(data, rest.sin());
            self.shear_x(data, a);
        }
    }
}
