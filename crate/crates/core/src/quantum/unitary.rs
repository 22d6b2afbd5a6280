//! Unitary counterparts of the two canonical maps: a planar rotation of the
//! argument, and a shift to the moving origin with a phase.

use num_complex::Complex64;

use crate::classical::maps::{Ct1, Ct2};
use crate::error::{Error, Result};
use crate::quantum::grid::Grid;
use crate::quantum::spectral::Spectral;
use crate::quantum::wavefunction::WaveFunction;

/// How amplitudes are resampled at off-grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Band-limited resampling through the FFT (shears and translations).
    #[default]
    Spectral,
    /// Bilinear interpolation, zero outside the grid box.
    Bilinear,
}

/// Options shared by the unitary maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapOptions {
    pub interpolation: Interpolation,
    /// Largest fraction of the norm allowed to leave the grid box.
    pub support_tolerance: f64,
}

impl Default for MapOptions {
    fn default() -> Self {
        Self { interpolation: Interpolation::Spectral, support_tolerance: 1e-6 }
    }
}

/// Fraction of `|ψ|²` sitting at points `p` whose preimage `inverse(p)` lies
/// outside the grid box, i.e. mass a pullback cannot see.
pub fn lost_mass(psi: &WaveFunction, inverse: impl Fn(f64, f64) -> [f64; 2]) -> f64 {
    let grid = psi.grid();
    let (mut lost, mut total) = (0.0, 0.0);
    for (i, a) in psi.amplitudes().iter().enumerate() {
        let [x, y] = grid.position(i);
        let w = a.norm_sqr();
        total += w;
        let [u, v] = inverse(x, y);
        if !grid.contains(u, v) {
            lost += w;
        }
    }
    if total == 0.0 { 0.0 } else { lost / total }
}

fn check_support(mass: f64, tolerance: f64) -> Result<()> {
    if mass > tolerance {
        Err(Error::GridSupport { mass, tolerance })
    } else {
        Ok(())
    }
}

/// Bilinear value of the grid function at `(x, y)`; zero outside the box.
fn bilinear(grid: &Grid, data: &[Complex64], x: f64, y: f64) -> Complex64 {
    let n = grid.points();
    let h = grid.spacing();
    let locate = |v: f64| -> Option<(usize, f64)> {
        let s = (v + grid.half_width()) / h;
        if s < 0.0 || s > (n - 1) as f64 {
            return None;
        }
        let i = (s.floor() as usize).min(n - 2);
        Some((i, s - i as f64))
    };
    let Some((ix, fx)) = locate(x) else { return Complex64::default() };
    if grid.dims() == 1 {
        return data[ix] * (1.0 - fx) + data[ix + 1] * fx;
    }
    let Some((iy, fy)) = locate(y) else { return Complex64::default() };
    let at = |i: usize, j: usize| data[j * n + i];
    at(ix, iy) * ((1.0 - fx) * (1.0 - fy))
        + at(ix + 1, iy) * (fx * (1.0 - fy))
        + at(ix, iy + 1) * ((1.0 - fx) * fy)
        + at(ix + 1, iy + 1) * (fx * fy)
}

fn pullback_bilinear(psi: &WaveFunction, map: impl Fn(f64, f64) -> [f64; 2]) -> WaveFunction {
    let grid = *psi.grid();
    let amps = (0..grid.len())
        .map(|i| {
            let [x, y] = grid.position(i);
            let [u, v] = map(x, y);
            bilinear(&grid, psi.amplitudes(), u, v)
        })
        .collect();
    psi.with_amplitudes(amps)
}

/// Resample `ψ` along a planar rotation: `out(r) = ψ(R(θ) r)`.
pub fn rotate_wavefunction(psi: &WaveFunction, theta: f64, opts: MapOptions) -> Result<WaveFunction> {
    let grid = *psi.grid();
    if grid.dims() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: grid.dims() });
    }
    let (s, c) = theta.sin_cos();
    // a point p is seen by the pullback iff Rᵀ p is on the grid
    check_support(lost_mass(psi, |x, y| [c * x + s * y, -s * x + c * y]), opts.support_tolerance)?;
    Ok(match opts.interpolation {
        Interpolation::Spectral => {
            let mut data = psi.amplitudes().to_vec();
            Spectral::new(grid).rotate_pullback(&mut data, theta);
            psi.with_amplitudes(data)
        }
        Interpolation::Bilinear => pullback_bilinear(psi, |x, y| [c * x - s * y, s * x + c * y]),
    })
}

/// Resample `ψ` along a translation: `out(r) = ψ(r + shift)`.
pub fn translate_wavefunction(psi: &WaveFunction, shift: [f64; 2], opts: MapOptions) -> Result<WaveFunction> {
    let grid = *psi.grid();
    let shift = if grid.dims() == 1 { [shift[0], 0.0] } else { shift };
    check_support(lost_mass(psi, |x, y| [x - shift[0], y - shift[1]]), opts.support_tolerance)?;
    Ok(match opts.interpolation {
        Interpolation::Spectral => {
            let mut data = psi.amplitudes().to_vec();
            Spectral::new(grid).translate(&mut data, shift);
            psi.with_amplitudes(data)
        }
        Interpolation::Bilinear => pullback_bilinear(psi, |x, y| [x + shift[0], y + shift[1]]),
    })
}

/// Rotating-frame map: the charge's wavefunction `ψ(t, x) = φ(t, R(ω_c t/2) x)`
/// built from the planar oscillator state `φ`.
pub fn unitary_qt1(phi: &WaveFunction, t: f64, ct: &Ct1, opts: MapOptions) -> Result<WaveFunction> {
    if t == 0.0 {
        return Ok(phi.clone());
    }
    rotate_wavefunction(phi, ct.field().frame_angle(t), opts)
}

/// Inverse of [`unitary_qt1`]: `φ(t, Q) = ψ(t, R(−ω_c t/2) Q)`.
pub fn unitary_qt1_inverse(psi: &WaveFunction, t: f64, ct: &Ct1, opts: MapOptions) -> Result<WaveFunction> {
    if t == 0.0 {
        return Ok(psi.clone());
    }
    rotate_wavefunction(psi, -ct.field().frame_angle(t), opts)
}

/// Data of the shift map at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftData {
    pub q_nh: [f64; 2],
    pub p_nh: [f64; 2],
    /// Action of the gridded degrees of freedom.
    pub action: f64,
}

/// Moving origin and action restricted to the axes covered by `grid`.
pub fn shift_data(ct: &Ct2, grid: &Grid, t: f64) -> Result<ShiftData> {
    let point = ct.path_point(t)?;
    let (q, p) = (point.origin.q(), point.origin.p());
    Ok(if grid.dims() == 1 {
        ShiftData { q_nh: [q.x, 0.0], p_nh: [p.x, 0.0], action: point.action_by_axis.x }
    } else {
        ShiftData { q_nh: [q.x, q.y], p_nh: [p.x, p.y], action: point.planar_action() }
    })
}

/// Moving-origin map: `φ(t, Q) = e^{i(f + A)/ħ} ϕ(t, Q − Q_nh)` with
/// `f = ⟨Q − Q_nh, P_nh⟩`.
///
/// The global factor `e^{iA/ħ}` is applied; [`shift_data`] exposes `A` for
/// callers that keep it in a separate ledger.
pub fn unitary_qt2(varphi: &WaveFunction, t: f64, ct: &Ct2, opts: MapOptions) -> Result<WaveFunction> {
    let data = shift_data(ct, varphi.grid(), t)?;
    let shifted = apply_shift(varphi, &data, opts)?;
    Ok(shifted.with_global_phase(data.action / varphi.hbar()))
}

/// Spatial part of [`unitary_qt2`], without the global phase.
pub fn apply_shift(varphi: &WaveFunction, data: &ShiftData, opts: MapOptions) -> Result<WaveFunction> {
    if data.q_nh == [0.0; 2] && data.p_nh == [0.0; 2] {
        return Ok(varphi.clone());
    }
    let shifted = translate_wavefunction(varphi, [-data.q_nh[0], -data.q_nh[1]], opts)?;
    let grid = *varphi.grid();
    let hbar = varphi.hbar();
    let amps = shifted
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let [x, y] = grid.position(i);
            let f = (x - data.q_nh[0]) * data.p_nh[0] + (y - data.q_nh[1]) * data.p_nh[1];
            a * Complex64::from_polar(1.0, f / hbar)
        })
        .collect();
    Ok(shifted.with_amplitudes(amps))
}

/// Inverse of [`apply_shift`]: `ϕ(ξ) = e^{−i⟨ξ, P_nh⟩/ħ} φ(ξ + Q_nh)`.
pub fn remove_shift(phi: &WaveFunction, data: &ShiftData, opts: MapOptions) -> Result<WaveFunction> {
    let grid = *phi.grid();
    let hbar = phi.hbar();
    let shifted = translate_wavefunction(phi, data.q_nh, opts)?;
    let amps = shifted
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let [x, y] = grid.position(i);
            let f = x * data.p_nh[0] + y * data.p_nh[1];
            a * Complex64::from_polar(1.0, -f / hbar)
        })
        .collect();
    Ok(shifted.with_amplitudes(amps))
}
