//! Brute-force reference integrator: classic RK4 on `ż = Σ ∇H`, with the
//! gradient taken by central differences of the Hamiltonian itself.
//!
//! The difference step is `h = 1e-5 (1 + |z|)`. For the quadratic
//! Hamiltonians used here central differences are exact up to roundoff.

use nalgebra::SVector;

use crate::error::{ensure, Error, Result};

fn gradient<const D: usize>(h: &impl Fn(&SVector<f64, D>, f64) -> f64, z: &SVector<f64, D>, t: f64) -> SVector<f64, D> {
    let step = 1e-5 * (1.0 + z.norm());
    SVector::<f64, D>::from_fn(|j, _| {
        let mut zp = *z;
        let mut zm = *z;
        zp[j] += step;
        zm[j] -= step;
        (h(&zp, t) - h(&zm, t)) / (2.0 * step)
    })
}

/// Hamilton's vector field `Σ ∇H` in interleaved layout.
pub fn hamilton_field<const D: usize>(
    h: &impl Fn(&SVector<f64, D>, f64) -> f64,
    z: &SVector<f64, D>,
    t: f64,
) -> SVector<f64, D> {
    let g = gradient(h, z, t);
    SVector::<f64, D>::from_fn(|i, _| if i % 2 == 0 { g[i + 1] } else { -g[i - 1] })
}

fn rk4_step<const D: usize>(
    h: &impl Fn(&SVector<f64, D>, f64) -> f64,
    z: &SVector<f64, D>,
    t: f64,
    dt: f64,
) -> SVector<f64, D> {
    let k1 = hamilton_field(h, z, t);
    let k2 = hamilton_field(h, &(z + k1 * (0.5 * dt)), t + 0.5 * dt);
    let k3 = hamilton_field(h, &(z + k2 * (0.5 * dt)), t + 0.5 * dt);
    let k4 = hamilton_field(h, &(z + k3 * dt), t + dt);
    z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

/// Integrate from `0` to `t` with steps no longer than `dt`, recording the
/// state every `record_every` steps (and always at the end).
pub fn rk4_trajectory<const D: usize>(
    hamiltonian: impl Fn(&SVector<f64, D>, f64) -> f64,
    z0: &SVector<f64, D>,
    t: f64,
    dt: f64,
    record_every: usize,
) -> Result<Vec<(f64, SVector<f64, D>)>> {
    ensure(dt.is_finite() && dt > 0.0, "dt", || format!("must be positive, got {dt}"))?;
    ensure(t.is_finite() && t >= 0.0, "t", || format!("must be non-negative, got {t}"))?;
    let steps = (t / dt).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let every = record_every.max(1);
    let mut z = *z0;
    let mut out = vec![(0.0, z)];
    for n in 0..steps {
        let tn = n as f64 * h;
        z = rk4_step(&hamiltonian, &z, tn, h);
        let tn1 = (n + 1) as f64 * h;
        if !z.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { time: tn1 });
        }
        if (n + 1) % every == 0 || n + 1 == steps {
            out.push((tn1, z));
        }
    }
    Ok(out)
}

/// Final state of [`rk4_trajectory`].
pub fn rk4_oracle<const D: usize>(
    hamiltonian: impl Fn(&SVector<f64, D>, f64) -> f64,
    z0: &SVector<f64, D>,
    t: f64,
    dt: f64,
) -> Result<SVector<f64, D>> {
    let traj = rk4_trajectory(hamiltonian, z0, t, dt, usize::MAX)?;
    Ok(traj.last().expect("trajectory holds the initial state").1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::hamiltonians::eval_h3;
    use crate::classical::state::PhaseState;
    use crate::propagator::{block_propagator, OscParams};
    use nalgebra::{Vector2, Vector6};

    #[test]
    fn free_particle_is_exact() {
        let h = |z: &Vector2<f64>, _t: f64| 0.5 * z[1] * z[1];
        let z = rk4_oracle(h, &Vector2::new(0.5, 1.25), 2.0, 0.1).unwrap();
        // exact up to the roundoff of the difference quotient
        assert!((z[0] - 3.0).abs() < 1e-10, "{}", z[0] - 3.0);
        assert!((z[1] - 1.25).abs() < 1e-10);
    }

    #[test]
    fn oscillator_matches_closed_form() {
        let prm = OscParams::new(1.2, 0.9).unwrap();
        let z0 = Vector6::new(0.3, -0.2, 1.0, 0.5, -0.4, 0.8);
        let z = rk4_oracle(|v, _| eval_h3(prm, &PhaseState(*v)), &z0, 1.0, 1e-4).unwrap();
        let exact = block_propagator(prm, 1.0) * z0;
        assert!((z - exact).amax() <= 1e-8);
    }

    #[test]
    fn blow_up_is_reported() {
        // inverted oscillator with a huge rate overflows quickly
        let h = |z: &Vector2<f64>, _t: f64| 0.5 * z[1] * z[1] - 1e6 * z[0] * z[0];
        let err = rk4_oracle(h, &Vector2::new(1.0, 0.0), 10.0, 0.01).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn rejects_nonpositive_step() {
        let h = |z: &Vector2<f64>, _t: f64| z[1] * z[1];
        assert!(rk4_oracle(h, &Vector2::zeros(), 1.0, 0.0).is_err());
    }
}
