use std::f64::consts::PI;

use nalgebra::Vector6;
use oscequiv::classical::{rk4_trajectory, CanonicalMap, Drive, PhaseState};
use oscequiv::linalg::{rotate_phase, rotation_about_z, Vec3};
use oscequiv::tdfields::{
    ct3_reduce, ct4_reduce, frozen_coefficient_monodromy, hill_monodromy, hill_monodromy_default, mathieu_boundary,
    stability_map, FixedAxisField, HillSystem, RotatingField, Signal, Stability,
};
use proptest::prelude::*;

fn rotating() -> RotatingField {
    RotatingField::new(0.7, 1.1, 0.45, Drive::Constant(Vec3::new(0.1, -0.05, 0.03)), 0.9, 1.2).unwrap()
}

fn start() -> PhaseState {
    PhaseState::from_qp(Vec3::new(0.4, -0.2, 0.3), Vec3::new(-0.1, 0.5, 0.2))
}

#[test]
fn h4_orbit_pulls_back_to_h5_and_h6_orbits() {
    let f = rotating();
    let h5 = ct3_reduce(&f);
    let h6 = ct4_reduce(&h5);
    let (c3, c4) = (f.ct3(), h5.ct4());
    let z0 = start();
    let (horizon, dt, every) = (6.0, 1e-3, 500);
    let o4 = rk4_trajectory(|z, t| f.eval_h4(&PhaseState(*z), t).unwrap(), &z0.0, horizon, dt, every).unwrap();
    let o5 = rk4_trajectory(|z, t| h5.eval(&PhaseState(*z), t).unwrap(), &z0.0, horizon, dt, every).unwrap();
    let o6 = rk4_trajectory(|z, t| h6.eval(&PhaseState(*z), t).unwrap(), &z0.0, horizon, dt, every).unwrap();
    for ((a, b), c) in o4.iter().zip(&o5).zip(&o6) {
        let t = a.0;
        let via3 = c3.forward(t, &PhaseState(a.1)).unwrap();
        assert!(via3.distance(&PhaseState(b.1)) < 1e-9, "t = {t}: {}", via3.distance(&PhaseState(b.1)));
        let via4 = c4.forward(t, &PhaseState(b.1)).unwrap();
        assert!(via4.distance(&PhaseState(c.1)) < 1e-9, "t = {t}");
    }
}

#[test]
fn case2_monodromy_propagates_mapped_orbit() {
    // without electric field one stiffness period of H6 is the linear map M
    let f = RotatingField::new(0.7, 1.1, 0.45, Drive::zero(), 1.0, 1.3).unwrap();
    let h5 = ct3_reduce(&f);
    let h6 = ct4_reduce(&h5);
    let period = h6.period().unwrap();
    let system = h6.vector_system(period).unwrap();
    let mono = system.monodromy(8192, 1e-8);
    let z0 = start();
    let orbit = rk4_trajectory(|z, t| f.eval_h4(&PhaseState(*z), t).unwrap(), &z0.0, period, 1e-4, usize::MAX).unwrap();
    let end = orbit.last().unwrap().1;
    let mapped = h5.ct4().forward(period, &f.ct3().forward(period, &PhaseState(end)).unwrap()).unwrap();
    // the vector system uses velocities, H6 momenta
    let velocities = |z: &Vector6<f64>| Vector6::from_fn(|i, _| if i % 2 == 1 { z[i] / f.mass } else { z[i] });
    let predicted = mono.matrix * velocities(&z0.0);
    assert!((velocities(&mapped.0) - predicted).amax() < 1e-9, "{}", (velocities(&mapped.0) - predicted).amax());
    assert!((mono.det - 1.0).abs() < 1e-10);
}

#[test]
fn case1_rotating_frame_reduces_to_hill() {
    let b3 = Signal::harmonic(1.2, 0.5, 1.7, 0.2);
    let f = FixedAxisField::new(b3.clone(), Drive::zero(), 1.0, 0.8).unwrap();
    let sys = f.hill_system(b3.period().unwrap()).unwrap();
    let z0 = start();
    let orbit = rk4_trajectory(|z, t| f.eval_h4(&PhaseState(*z), t).unwrap(), &z0.0, 8.0, 1e-4, 10_000).unwrap();
    for (t, z) in orbit.iter().skip(1) {
        let frame = rotate_phase(&rotation_about_z(0.5 * f.rotation_angle(*t)), z);
        for axis in 0..2 {
            let (x0, v0) = (z0.0[2 * axis], z0.0[2 * axis + 1] / f.mass);
            let (x, v) = sys.integrate(x0, v0, *t, 1e-4).unwrap();
            assert!((frame[2 * axis] - x).abs() < 1e-9, "t = {t}, axis {axis}");
            assert!((frame[2 * axis + 1] / f.mass - v).abs() < 1e-9);
        }
    }
}

/// Edges of the first Mathieu tongue from the small-q series of the
/// characteristic values `b₁(q)` and `a₁(q)`.
fn first_tongue(q: f64) -> (f64, f64) {
    let b1 = 1.0 - q - q * q / 8.0 + q.powi(3) / 64.0 - q.powi(4) / 1536.0;
    let a1 = 1.0 + q - q * q / 8.0 - q.powi(3) / 64.0 - q.powi(4) / 1536.0;
    (b1, a1)
}

#[test]
fn mathieu_tongue_matches_series() {
    for q in [0.05, 0.1, 0.2] {
        let (b1, a1) = first_tongue(q);
        let lower = mathieu_boundary(q, 0.7, 1.0, 1e-6, 4096).unwrap();
        let upper = mathieu_boundary(q, 1.0, 1.3, 1e-6, 4096).unwrap();
        // the series is truncated after q⁴
        assert!((lower - b1).abs() < 2e-6, "q = {q}: {lower} vs {b1}");
        assert!((upper - a1).abs() < 2e-6, "q = {q}: {upper} vs {a1}");
    }
}

#[test]
fn mathieu_inside_tongue_is_unstable() {
    let r = hill_monodromy_default(&HillSystem::mathieu(1.0, 0.1));
    assert_eq!(r.classification, Stability::Unstable);
    // Floquet exponents are ±μ with μ ≈ q/2 at the tongue centre
    let mu = r.floquet_exponents[0].re.abs();
    assert!((mu - 0.05).abs() < 1e-3, "{mu}");
    assert!((r.floquet_exponents[0].re + r.floquet_exponents[1].re).abs() < 1e-9);
}

#[test]
fn stability_map_is_ordered_and_matches_serial() {
    let a = [0.5, 0.95, 1.0, 1.5];
    let q = [0.0, 0.1];
    let rows = stability_map(|a, q| Ok(HillSystem::mathieu(a, q)), &a, &q, 1024).unwrap();
    assert_eq!(rows.len(), 8);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!((row.param1, row.param2), (a[i / 2], q[i % 2]));
        let serial = hill_monodromy(&HillSystem::mathieu(row.param1, row.param2), PI / 1024.0).unwrap();
        assert_eq!(row.trace, serial.trace);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn constant_trace(omega in 0.1..4.0f64, period in 0.2..5.0f64) {
        let r = hill_monodromy_default(&HillSystem::constant(omega, period).unwrap());
        prop_assert!((r.trace - 2.0 * (omega * period).cos()).abs() < 1e-8);
        prop_assert!((r.det - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rk4_and_frozen_oracles_agree(a in -0.5..3.0f64, q in 0.0..1.0f64) {
        let sys = HillSystem::mathieu(a, q);
        let rk4 = hill_monodromy_default(&sys);
        let frozen = frozen_coefficient_monodromy(&sys, 8192);
        prop_assert!((rk4.trace - frozen.trace).abs() < 1e-5 * rk4.trace.abs().max(1.0));
        prop_assert!((frozen.det - 1.0).abs() < 1e-10);
    }

    #[test]
    fn conjugation_holds_anywhere(b1 in -2.0..2.0f64, b3 in -2.0..2.0f64, alpha in -2.0..2.0f64, t in 0.0..50.0f64) {
        let f = RotatingField::new(b1, b3, alpha, Drive::zero(), 1.0, 1.0).unwrap();
        prop_assert!(f.conjugation_defect(t) < 1e-10);
        prop_assert!(f.euler_defect(t, 1e-5) < 1e-8);
    }

    #[test]
    fn signal_integral_matches_trapezoid(mean in -1.0..1.0f64, amp in 0.0..1.0f64, freq in 0.1..3.0f64, phase in 0.0..6.0f64, t in 0.0..10.0f64) {
        let s = Signal::harmonic(mean, amp, freq, phase);
        let n = 20_000;
        let h = t / n as f64;
        let trap: f64 = (0..n).map(|i| 0.5 * h * (s.eval(i as f64 * h) + s.eval((i + 1) as f64 * h))).sum();
        prop_assert!((s.integral(t) - trap).abs() < 1e-7);
    }
}
