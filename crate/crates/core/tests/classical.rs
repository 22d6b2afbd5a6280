use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use oscequiv::classical::{
    ct1, ct2, equivalence_report, eval_h1, rk4_oracle, rk4_trajectory, CanonicalMap, Drive, EquivalenceConfig,
    PhaseState, QuadratureSpec, StaticField,
};
use oscequiv::linalg::{rotation_about_z, Vec3};
use oscequiv::propagator::{block_propagator, propagator_2x2, OscParams};
use proptest::prelude::*;

/// Lorentz-force motion in closed form: gyration about the guiding centre
/// plus `E × B` drift in the plane, uniform acceleration along ẑ.
fn lorentz_orbit(field: &StaticField, z0: &PhaseState, t: f64) -> Vec3 {
    let (x0, p0) = (z0.q(), z0.p());
    let v0 = (p0 - field.coupled_potential(&x0)) / field.mass;
    let b3 = field.b.z;
    let wc = field.cyclotron_frequency();
    let drift = Vector2::new(field.e.y / b3, -field.e.x / b3);
    let (s, c) = (wc * t).sin_cos();
    let gyro = Matrix2::new(s / wc, (1.0 - c) / wc, -(1.0 - c) / wc, s / wc);
    let planar = Vector2::new(x0.x, x0.y) + drift * t + gyro * (Vector2::new(v0.x, v0.y) - drift);
    let axial = x0.z + v0.z * t + 0.5 * field.charge * field.e.z / field.mass * t * t;
    Vec3::new(planar.x, planar.y, axial)
}

#[test]
fn oracle_matches_lorentz_orbit() {
    let field = StaticField::axial(1.3, Vec3::new(0.2, -0.15, 0.05), 0.9, 1.4).unwrap();
    let z0 = PhaseState::from_qp(Vec3::new(0.5, -0.3, 0.2), Vec3::new(0.1, 0.7, -0.2));
    for t in [0.7, 3.0, 9.5] {
        let z = PhaseState(rk4_oracle(|z, _| eval_h1(&field, &PhaseState(*z)), &z0.0, t, 1e-3).unwrap());
        let exact = lorentz_orbit(&field, &z0, t);
        assert!((z.q() - exact).amax() < 1e-9, "t = {t}: {:?} vs {exact:?}", z.q());
    }
}

#[test]
fn drift_state_moves_in_a_straight_line() {
    // velocity equal to E × B / B² cancels the Lorentz force
    let field = StaticField::axial(2.0, Vec3::new(0.3, 0.0, 0.0), 1.0, 1.0).unwrap();
    let x0 = Vec3::new(0.4, 0.1, 0.0);
    let vd = Vec3::new(0.0, -0.15, 0.0);
    let z0 = PhaseState::from_qp(x0, vd * field.mass + field.coupled_potential(&x0));
    let traj = rk4_trajectory(|z, _| eval_h1(&field, &PhaseState(*z)), &z0.0, 6.0, 1e-3, 500).unwrap();
    for (t, z) in traj {
        assert!((PhaseState(z).q() - (x0 + vd * t)).amax() < 1e-11);
    }
}

#[test]
fn drift_state_maps_to_oscillator_orbit() {
    let field = StaticField::axial(2.0, Vec3::new(0.3, 0.0, 0.0), 1.0, 1.0).unwrap();
    let x0 = Vec3::new(0.4, 0.1, 0.0);
    let z0 = PhaseState::from_qp(x0, Vec3::new(0.0, -0.15, 0.0) + field.coupled_potential(&x0));
    let cfg = EquivalenceConfig { dt: 1e-3, checkpoints: 100, symplectic_probes: 2, quad: QuadratureSpec::default() };
    let rep = equivalence_report(&field, &z0, 2.0 * PI, &cfg).unwrap();
    assert!(rep.max_deviation < 1e-9, "{}", rep.max_deviation);
}

#[test]
fn frozen_propagator_values() {
    let p = OscParams::new(1.0, 1.0).unwrap();
    let u = propagator_2x2(p, PI / 2.0);
    assert!((u - Matrix2::new(0.0, 1.0, -1.0, 0.0)).amax() < 1e-15);
    let p = OscParams::new(2.0, 0.5).unwrap();
    let u = propagator_2x2(p, 1.0);
    let (s, c) = 0.5f64.sin_cos();
    assert!((u - Matrix2::new(c, s, -s, c)).amax() < 1e-15);
    let six = block_propagator(p, 1.0);
    assert_eq!(six[(4, 5)], 0.5);
    assert_eq!(six[(5, 4)], 0.0);
}

#[test]
fn constant_force_moving_origin() {
    // Q_nh(t) = F (1 − cos ωt) / (m ω²) for a constant force
    let p = OscParams::new(1.5, 0.8).unwrap();
    let f = Vec3::new(0.4, -0.2, 0.0);
    let map = ct2(p, Drive::Constant(f), QuadratureSpec::default());
    // the bound is roundoff summed over 10⁴ Simpson panels per unit time
    for t in [0.5, 2.0, 7.0] {
        let origin = map.moving_origin(t).unwrap();
        let expected = f * (1.0 - (p.omega * t).cos()) / (p.mass * p.omega * p.omega);
        assert!((origin.q().x - expected.x).abs() < 1e-10, "t = {t}: {:e}", origin.q().x - expected.x);
        assert!((origin.q().y - expected.y).abs() < 1e-10);
        let momentum = f * (p.omega * t).sin() / p.omega;
        assert!((origin.p().x - momentum.x).abs() < 1e-10);
    }
}

#[test]
fn ct1_is_frame_rotation_at_half_cyclotron_rate() {
    let field = StaticField::axial(-1.2, Vec3::zeros(), 1.0, 0.6).unwrap();
    let m = ct1(&field).unwrap();
    let t = 0.9;
    assert!((m.rotation(t) - rotation_about_z(-t)).amax() < 1e-15);
}

fn small_vec() -> impl Strategy<Value = Vec3> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, c)| Vec3::new(a, b, c))
}

fn field_strategy() -> impl Strategy<Value = StaticField> {
    (0.3..3.0f64, any::<bool>(), small_vec(), 0.3..2.0f64, 0.3..2.0f64).prop_map(|(b, flip, e, q, m)| {
        StaticField::axial(if flip { -b } else { b }, e * 0.5, q, m).unwrap()
    })
}

/// RK4 step with `|ω_c| dt ≤ 0.002`; the strategy reaches `|ω_c| ≈ 20`.
fn oracle_step(field: &StaticField) -> f64 {
    0.002 / field.cyclotron_frequency().abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn maps_round_trip(field in field_strategy(), q in small_vec(), p in small_vec(), t in 0.0..8.0f64) {
        let z = PhaseState::from_qp(q, p);
        let rot = ct1(&field).unwrap();
        let shift = ct2(field.osc_params(), field.rotating_drive(), QuadratureSpec::new(2000.0).unwrap());
        let back = rot.inverse(t, &rot.forward(t, &z).unwrap()).unwrap();
        prop_assert!(back.distance(&z) < 1e-13);
        let back = shift.inverse(t, &shift.forward(t, &z).unwrap()).unwrap();
        prop_assert!(back.distance(&z) < 1e-13);
    }

    #[test]
    fn rotating_frame_preserves_h3_energy_of_magnetic_orbits(field in field_strategy(), q in small_vec(), p in small_vec()) {
        // with E = 0 the rotating-frame image of an H1 orbit is a free oscillator orbit
        let field = StaticField::axial(field.b.z, Vec3::zeros(), field.charge, field.mass).unwrap();
        let z0 = PhaseState::from_qp(q, p);
        let t = 1.7;
        let z = PhaseState(rk4_oracle(|z, _| eval_h1(&field, &PhaseState(*z)), &z0.0, t, oracle_step(&field)).unwrap());
        let mapped = ct1(&field).unwrap().forward(t, &z).unwrap();
        let expected = PhaseState(block_propagator(field.osc_params(), t) * z0.0);
        prop_assert!(mapped.distance(&expected) < 1e-9, "{}", mapped.distance(&expected));
    }

    #[test]
    fn composite_equivalence_short_horizon(field in field_strategy(), q in small_vec(), p in small_vec()) {
        let cfg = EquivalenceConfig { dt: oracle_step(&field), checkpoints: 20, symplectic_probes: 1, quad: QuadratureSpec::new(2000.0).unwrap() };
        let rep = equivalence_report(&field, &PhaseState::from_qp(q, p), 2.0, &cfg).unwrap();
        prop_assert!(rep.max_deviation < 1e-7, "{}", rep.max_deviation);
        prop_assert!(rep.ct1_symplectic_defect < 1e-8);
        prop_assert!(rep.ct2_symplectic_defect < 1e-8);
    }
}
