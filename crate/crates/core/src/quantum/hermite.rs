//! Hermite polynomials, oscillator eigenfunctions and energies.

use crate::propagator::OscParams;

/// Physicists' Hermite polynomial `Hₙ(x)` by the three-term recurrence.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Polynomial part of the unit-width Hermite function, `hₙ(u) e^{u²/2}`,
/// by the normalised recurrence (stable for large `n`).
pub(crate) fn hermite_function_poly(n: usize, u: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Unit-width Hermite function `hₙ(u)`, orthonormal on the real line.
pub fn hermite_function(n: usize, u: f64) -> f64 {
    hermite_function_poly(n, u) * (-0.5 * u * u).exp()
}

/// Inverse length scale `α = (m ω / ħ)^{1/2}`.
pub fn alpha(params: OscParams, hbar: f64) -> f64 {
    (params.mass * params.omega / hbar).sqrt()
}

/// Normalised oscillator eigenfunction
/// `φₙ(x) = (α / (π^{1/2} 2ⁿ n!))^{1/2} Hₙ(αx) e^{−α²x²/2}`.
///
/// Requires `ω > 0`.
pub fn eigenfunction(n: usize, params: OscParams, hbar: f64, x: f64) -> f64 {
    let a = alpha(params, hbar);
    a.sqrt() * hermite_function(n, a * x)
}

/// Quantum numbers of the planar oscillator plus the axial wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenLabel {
    pub n1: usize,
    pub n2: usize,
    /// Axial wavenumber (momentum / ħ).
    pub k: f64,
}

impl EigenLabel {
    pub fn new(n1: usize, n2: usize, k: f64) -> Self {
        Self { n1, n2, k }
    }

    pub fn planar(n1: usize, n2: usize) -> Self {
        Self { n1, n2, k: 0.0 }
    }
}

/// `E = ħω(n₁ + ½) + ħω(n₂ + ½) + ħ²k²/2m`.
pub fn energy(label: EigenLabel, params: OscParams, hbar: f64) -> f64 {
    let w = hbar * params.omega;
    w * (label.n1 as f64 + 0.5) + w * (label.n2 as f64 + 0.5) + (hbar * label.k).powi(2) / (2.0 * params.mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit polynomials, independent of the recurrence.
    fn explicit(n: usize, x: f64) -> f64 {
        match n {
            0 => 1.0,
            1 => 2.0 * x,
            2 => 4.0 * x * x - 2.0,
            3 => 8.0 * x.powi(3) - 12.0 * x,
            4 => 16.0 * x.powi(4) - 48.0 * x * x + 12.0,
            5 => 32.0 * x.powi(5) - 160.0 * x.powi(3) + 120.0 * x,
            _ => unreachable!(),
        }
    }

    #[test]
    fn low_orders() {
        for x in [-2.3, -0.4, 0.0, 1.5, 3.7] {
            assert_eq!(hermite(0, x), 1.0);
            for n in 0..=5 {
                let e = explicit(n, x);
                assert!((hermite(n, x) - e).abs() <= 1e-12 * (1.0 + e.abs()));
            }
        }
        assert_eq!(hermite(2, 1.5), 7.0);
    }

    #[test]
    fn recurrence_residual() {
        for n in 1..20 {
            for i in 0..=50 {
                let x = -5.0 + 0.2 * i as f64;
                let lhs = hermite(n + 1, x);
                let rhs = 2.0 * x * hermite(n, x) - 2.0 * n as f64 * hermite(n - 1, x);
                let scale = hermite(n + 1, x).abs().max(1.0);
                assert!((lhs - rhs).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn eigenfunction_matches_closed_form() {
        let p = OscParams::new(1.7, 0.6).unwrap();
        let hbar = 0.8;
        let a = alpha(p, hbar);
        for x in [-2.0, -0.3, 0.0, 0.9, 2.5] {
            let g = (a * a / std::f64::consts::PI).powf(0.25) * (-a * a * x * x / 2.0).exp();
            assert!((eigenfunction(0, p, hbar, x) - g).abs() < 1e-14);
            // φ₃ = (α / (√π 2³ 3!))^{1/2} H₃(αx) e^{−α²x²/2}
            let n3 = (a / (std::f64::consts::PI.sqrt() * 48.0)).sqrt();
            let e3 = n3 * explicit(3, a * x) * (-a * a * x * x / 2.0).exp();
            assert!((eigenfunction(3, p, hbar, x) - e3).abs() < 1e-13);
        }
    }

    #[test]
    fn odd_parity() {
        let p = OscParams::new(1.0, 1.0).unwrap();
        for x in [0.1, 0.7, 2.2] {
            assert_eq!(eigenfunction(1, p, 1.0, -x), -eigenfunction(1, p, 1.0, x));
        }
    }

    #[test]
    fn energies() {
        let p = OscParams::new(2.0, 0.7).unwrap();
        let hbar = 1.3;
        assert!((energy(EigenLabel::planar(0, 0), p, hbar) - hbar * 0.7).abs() < 1e-15);
        let k = 0.9;
        let e = energy(EigenLabel::new(1, 2, k), p, hbar);
        assert!((e - (4.0 * hbar * 0.7 + hbar * hbar * k * k / 4.0)).abs() < 1e-14);
        // degeneracy within a level
        let e12 = energy(EigenLabel::new(1, 2, k), p, hbar);
        let e30 = energy(EigenLabel::new(3, 0, k), p, hbar);
        assert!((e12 - e30).abs() < 1e-15);
    }
}
