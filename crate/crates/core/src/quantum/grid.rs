use std::f64::consts::PI;

use crate::error::{ensure, Result};

/// Uniform periodic grid on `[-X, X)` per axis with `N` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dims: usize,
    points: usize,
    half_width: f64,
}

impl Grid {
    pub fn new(dims: usize, points: usize, half_width: f64) -> Result<Self> {
        ensure(dims == 1 || dims == 2, "dims", || format!("must be 1 or 2, got {dims}"))?;
        ensure(points >= 16 && points.is_power_of_two(), "points", || {
            format!("must be a power of two >= 16, got {points}")
        })?;
        ensure(half_width.is_finite() && half_width > 0.0, "half_width", || {
            format!("must be positive, got {half_width}")
        })?;
        Ok(Self { dims, points, half_width })
    }

    pub fn line(points: usize, half_width: f64) -> Result<Self> {
        Self::new(1, points, half_width)
    }

    pub fn square(points: usize, half_width: f64) -> Result<Self> {
        Self::new(2, points, half_width)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// Area (or length) element.
    pub fn cell(&self) -> f64 {
        self.spacing().powi(self.dims as i32)
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dims as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.coord(i)).collect()
    }

    /// FFT-ordered angular wavenumbers.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.points;
        let dk = PI / self.half_width;
        (0..n).map(|j| if j < n / 2 { j as f64 * dk } else { (j as f64 - n as f64) * dk }).collect()
    }

    /// Position of flat index `idx`; 2D grids are row-major with x fastest.
    pub fn position(&self, idx: usize) -> [f64; 2] {
        let n = self.points;
        if self.dims == 1 {
            [self.coord(idx), 0.0]
        } else {
            [self.coord(idx % n), self.coord(idx / n)]
        }
    }

    /// Whether a point lies in the (half-open) box covered by the grid.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let inside = |v: f64| v >= -self.half_width && v < self.half_width;
        inside(x) && (self.dims == 1 || inside(y))
    }
}
