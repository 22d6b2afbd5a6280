//! Execution of a parsed scenario: each mode runs its pipeline, measures the
//! defects of the invariants it owns, and collects CSV artifacts.

use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use oscequiv::classical::{
    ct1, ct2, equivalence_report, eval_h3, CanonicalMap, Drive, EquivalenceConfig, PhaseState, QuadratureSpec,
    StaticField,
};
use oscequiv::linalg::Vec3;
use oscequiv::propagator::OscParams;
use oscequiv::quantum::{
    eigenfunction, hermite, hermite_shift_expand, level_matrix, rotate_product_expand, split_step_evolve,
    transformed_eigenstate, unitary_qt1, unitary_qt2, EigenLabel, EigenstateSetup, Grid, MapOptions, Pipeline,
    QuantumHamiltonian, WaveFunction,
};
use oscequiv::tdfields::{
    bisect, ct3_reduce, ct4_reduce, frozen_coefficient_monodromy, hill_monodromy, mathieu_boundary, rotation_case1,
    rotation_case1_ode, stability_map, FixedAxisField, HillSystem, RotatingField,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csv::write_table;
use crate::report::{CheckResult, RunReport};
use crate::scenario::{
    Case1Spec, Case2Spec, ClassicalSpec, ExpansionSpec, FieldSpec, HillSpec, HillTemplate, InitialSpec, ModeSpec,
    QuantumSpec, Scenario,
};

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Measure the checks but write nothing.
    pub check_only: bool,
    /// Overrides the scenario's own output directory.
    pub out_dir: Option<PathBuf>,
    /// Multiplies every tolerance.
    pub tolerance_scale: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { check_only: false, out_dir: None, tolerance_scale: 1.0 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("scenario {scenario}: check {check}: {source}")]
    Numerical {
        scenario: String,
        check: String,
        #[source]
        source: oscequiv::Error,
    },
    #[error("scenario {scenario}: writing {}: {source}", path.display())]
    Io {
        scenario: String,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A numerical failure attributed to the check that needed the result.
#[derive(Debug)]
struct Failure {
    check: &'static str,
    source: oscequiv::Error,
}

type Step<T> = Result<T, Failure>;

fn at<T>(check: &'static str, r: oscequiv::Result<T>) -> Step<T> {
    r.map_err(|source| Failure { check, source })
}

struct Artifact {
    file: String,
    header: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Artifact {
    fn new(file: impl Into<String>, header: &[&'static str], rows: Vec<Vec<f64>>) -> Self {
        Self { file: file.into(), header: header.to_vec(), rows }
    }
}

#[derive(Default)]
struct Outcome {
    measured: Vec<(&'static str, f64)>,
    artifacts: Vec<Artifact>,
}

impl Outcome {
    fn measure(&mut self, check: &'static str, value: f64) {
        self.measured.push((check, value));
    }
}

/// Directory that receives the artifacts of `scenario`.
pub fn artifact_dir(scenario: &Scenario, opts: &RunOptions) -> PathBuf {
    let base = opts.out_dir.clone().or_else(|| scenario.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    base.join(&scenario.name)
}

pub fn run(scenario: &Scenario, opts: &RunOptions) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let outcome = match &scenario.spec {
        ModeSpec::ClassicalEquivalence(c) => classical(c, &mut rng),
        ModeSpec::QuantumPipeline(q) => quantum(q),
        ModeSpec::EigenstateExpansion(e) => expansion(e, &mut rng),
        ModeSpec::HillStability(h) => hill(h),
        ModeSpec::Case1(c) => case1(c),
        ModeSpec::Case2(c) => case2(c, &mut rng),
    }
    .map_err(|f| RunError::Numerical { scenario: scenario.name.clone(), check: f.check.into(), source: f.source })?;

    let checks: Vec<CheckResult> = outcome
        .measured
        .iter()
        .map(|(name, value)| CheckResult::new(*name, *value, scenario.tolerance(name) * opts.tolerance_scale))
        .collect();
    let report = RunReport { scenario: scenario.name.clone(), mode: scenario.mode, checks, wall_time: start.elapsed() };

    if !opts.check_only {
        let dir = artifact_dir(scenario, opts);
        let io = |path: &Path, source| RunError::Io { scenario: scenario.name.clone(), path: path.to_path_buf(), source };
        std::fs::create_dir_all(&dir).map_err(|e| io(&dir, e))?;
        for a in &outcome.artifacts {
            let path = dir.join(&a.file);
            write_table(&path, &a.header, &a.rows).map_err(|e| io(&path, e))?;
        }
        let path = dir.join("report.csv");
        std::fs::write(&path, report.to_csv()).map_err(|e| io(&path, e))?;
    }
    Ok(report)
}

fn static_field(f: &FieldSpec) -> oscequiv::Result<StaticField> {
    StaticField::new(f.b, f.e, f.charge, f.mass)
}

fn uniform_vec(rng: &mut ChaCha8Rng, r: f64) -> Vec3 {
    Vec3::new(rng.random_range(-r..r), rng.random_range(-r..r), rng.random_range(-r..r))
}

fn random_state(rng: &mut ChaCha8Rng) -> PhaseState {
    let q = uniform_vec(rng, 1.0);
    let p = uniform_vec(rng, 1.0);
    PhaseState::from_qp(q, p)
}

fn classical(c: &ClassicalSpec, rng: &mut ChaCha8Rng) -> Step<Outcome> {
    const CHECK: &str = "equivalence.deviation";
    let field = at(CHECK, static_field(&c.field))?;
    let wc = field.cyclotron_frequency().abs();
    let horizon = c.horizon.unwrap_or(if wc > 0.0 { 10.0 / wc } else { 10.0 });
    let starts: Vec<PhaseState> = match &c.initial {
        InitialSpec::Explicit { q, p } => vec![PhaseState::from_qp(*q, *p)],
        InitialSpec::Random { samples } => (0..*samples).map(|_| random_state(rng)).collect(),
    };
    let cfg = EquivalenceConfig {
        dt: c.dt,
        checkpoints: c.checkpoints,
        symplectic_probes: 4,
        quad: at(CHECK, QuadratureSpec::new(c.panels_per_unit_time))?,
    };
    let params = field.osc_params();

    let mut out = Outcome::default();
    let (mut dev, mut d1, mut d2, mut phase, mut energy) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (i, z0) in starts.iter().enumerate() {
        let rep = at(CHECK, equivalence_report(&field, z0, horizon, &cfg))?;
        dev = dev.max(rep.max_deviation);
        d1 = d1.max(rep.ct1_symplectic_defect);
        d2 = d2.max(rep.ct2_symplectic_defect);
        phase = phase.max(rep.max_abs_phase);
        let e0 = eval_h3(params, z0);
        for s in &rep.samples {
            energy = energy.max((eval_h3(params, &s.closed_form) - e0).abs() / e0.abs().max(1.0));
        }
        let rows = rep
            .samples
            .iter()
            .map(|s| {
                let mut row = vec![s.t];
                row.extend(s.original.0.iter());
                row.extend(s.mapped.0.iter());
                row.extend(s.closed_form.0.iter());
                row.push(s.phase);
                row
            })
            .collect();
        out.artifacts.push(Artifact::new(
            format!("trajectory_{i:03}.csv"),
            &[
                "t", "x1", "p1", "x2", "p2", "x3", "p3", "Q1", "P1", "Q2", "P2", "Q3", "P3", "Q1_exact", "P1_exact",
                "Q2_exact", "P2_exact", "Q3_exact", "P3_exact", "phase",
            ],
            rows,
        ));
    }
    out.measure("equivalence.deviation", dev);
    out.measure("ct1.symplectic", d1);
    out.measure("ct2.symplectic", d2);
    out.measure("homogeneous.energy", energy);
    if field.e == Vec3::zeros() {
        out.measure("phase_a.zero", phase);
    }
    Ok(out)
}

fn wavefunction_artifact(file: &str, psi: &WaveFunction) -> Artifact {
    Artifact::new(file, &["x", "y", "re", "im", "abs2"], psi.rows().collect())
}

/// Displaced oscillator ground state with mean momentum `p`.
fn coherent_state(grid: Grid, params: OscParams, hbar: f64, c: [f64; 2], p: [f64; 2]) -> oscequiv::Result<WaveFunction> {
    let a2 = params.mass * params.omega / hbar;
    let norm = (a2 / PI).sqrt();
    WaveFunction::from_fn(grid, hbar, |x, y| {
        let r2 = (x - c[0]).powi(2) + (y - c[1]).powi(2);
        Complex64::from_polar(norm * (-0.5 * a2 * r2).exp(), (p[0] * x + p[1] * y) / hbar)
    })
}

fn quantum(q: &QuantumSpec) -> Step<Outcome> {
    const QT2: &str = "qt2.pipeline";
    const QT1: &str = "qt1.pipeline";
    let field = at(QT1, static_field(&q.field))?;
    let params = field.osc_params();
    let grid = at(QT2, Grid::square(q.grid.points, q.grid.half_width))?;
    let psi0 = at(QT2, coherent_state(grid, params, q.grid.hbar, q.center, q.momentum))?;
    let opts = MapOptions::default();
    let (t, dt) = (q.horizon, q.dt);
    let shift = ct2(params, field.rotating_drive(), QuadratureSpec::default());

    let h3 = at(QT2, split_step_evolve(&psi0, &QuantumHamiltonian::H3 { params }, t, dt))?;
    let h2 = at(QT2, split_step_evolve(&psi0, &QuantumHamiltonian::H2 { params, drive: field.rotating_drive() }, t, dt))?;
    let via_h3 = at(QT2, unitary_qt2(&h3, t, &shift, opts))?;
    let h1 = at(QT1, split_step_evolve(&psi0, &QuantumHamiltonian::H1Planar { field }, t, dt))?;
    let via_h2 = at(QT1, unitary_qt1(&h2, t, &at(QT1, ct1(&field))?, opts))?;

    let mut out = Outcome::default();
    out.measure(QT2, via_h3.distance(&h2));
    out.measure(QT1, via_h2.distance(&h1));
    if field.e == Vec3::zeros() {
        out.measure("qt2.identity", via_h3.distance(&h3));
    }
    let n0 = psi0.norm();
    let norm = [&h1, &h2, &h3].iter().map(|p| (p.norm() - n0).abs()).fold(0.0, f64::max);
    out.measure("norm.preservation", norm);
    out.artifacts.push(wavefunction_artifact("psi_h1.csv", &h1));
    out.artifacts.push(wavefunction_artifact("psi_h2.csv", &h2));
    out.artifacts.push(wavefunction_artifact("psi_h3.csv", &h3));
    out.artifacts.push(wavefunction_artifact("psi_qt1_of_h2.csv", &via_h2));
    Ok(out)
}

/// Relative `‖iħ ∂ψ/∂t − Hψ‖ / ‖Hψ‖` with the time derivative by central
/// differences of the transformed eigenstate.
fn schrodinger_residual(label: EigenLabel, t: f64, field: &StaticField, setup: &EigenstateSetup) -> oscequiv::Result<f64> {
    let h = 1e-3;
    let state = |s: f64| transformed_eigenstate(label, s, field, Pipeline::Qt2Qt1, setup).map(|e| e.planar_state());
    let (minus, mid, plus) = (state(t - h)?, state(t)?, state(t + h)?);
    let hpsi = QuantumHamiltonian::H1Planar { field: *field }.apply(&mid, t)?;
    let i_hbar = Complex64::new(0.0, setup.hbar);
    let (mut num, mut den) = (0.0, 0.0);
    for ((a, b), hp) in plus.amplitudes().iter().zip(minus.amplitudes()).zip(&hpsi) {
        num += (i_hbar * (a - b) / (2.0 * h) - hp).norm_sqr();
        den += hp.norm_sqr();
    }
    Ok((num / den).sqrt())
}

fn expansion(e: &ExpansionSpec, rng: &mut ChaCha8Rng) -> Step<Outcome> {
    let mut out = Outcome::default();

    let v: f64 = rng.random_range(-1.0..1.0);
    let us: Vec<f64> = (0..50).map(|i| -3.0 + 6.0 * i as f64 / 49.0).collect();
    let mut residual = 0.0f64;
    let mut rows = Vec::new();
    for n in 0..=e.max_degree {
        let c = hermite_shift_expand(n, v);
        let scale = us.iter().map(|u| hermite(n, u + v).abs()).fold(0.0, f64::max);
        for u in &us {
            let series: f64 = c.iter().map(|(k, ck)| ck * hermite(k, *u)).sum();
            residual = residual.max((series - hermite(n, u + v)).abs() / scale);
        }
        rows.extend(c.iter().map(|(k, ck)| vec![n as f64, k as f64, v, ck]));
    }
    out.measure("hermite.shift", residual);
    out.artifacts.push(Artifact::new("hermite_shift.csv", &["n", "k", "v", "coefficient"], rows));

    let mut ortho = 0.0f64;
    let mut rows = Vec::new();
    for level in 0..=e.max_level {
        let m = at("rotation.orthogonality", level_matrix(level, e.theta))?;
        let gram = m.transpose() * &m;
        ortho = ortho.max((gram - nalgebra::DMatrix::identity(level + 1, level + 1)).amax());
        for i in 0..=level {
            for j in 0..=level {
                rows.push(vec![level as f64, i as f64, j as f64, m[(i, j)]]);
            }
        }
    }
    out.measure("rotation.orthogonality", ortho);
    out.artifacts.push(Artifact::new("rotation_levels.csv", &["level", "row", "col", "entry"], rows));

    let one = at("rotation.one_quantum", rotate_product_expand(1, 0, e.theta))?;
    let (s, c) = e.theta.sin_cos();
    out.measure("rotation.one_quantum", (one.coeffs.get((1, 0)) - c).abs().max((one.coeffs.get((0, 1)) + s).abs()));

    const SPECTRUM: &str = "spectrum.relative";
    let params = at(SPECTRUM, OscParams::new(e.mass, e.omega))?;
    let hbar = e.grid.hbar;
    let grid = at(SPECTRUM, Grid::square(e.grid.points, e.grid.half_width))?;
    let ham = QuantumHamiltonian::H3 { params };
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for total in 0..=e.spectrum_levels {
        for n1 in 0..=total {
            let n2 = total - n1;
            let phi = at(SPECTRUM, WaveFunction::from_fn(grid, hbar, |x, y| {
                Complex64::new(eigenfunction(n1, params, hbar, x) * eigenfunction(n2, params, hbar, y), 0.0)
            }))?;
            let measured = at(SPECTRUM, ham.expectation(&phi, 0.0))?;
            let expected = hbar * params.omega * (total as f64 + 1.0);
            worst = worst.max((measured - expected).abs() / expected);
            rows.push(vec![n1 as f64, n2 as f64, expected, measured]);
        }
    }
    out.measure(SPECTRUM, worst);
    out.artifacts.push(Artifact::new("spectrum.csv", &["n1", "n2", "expected", "measured"], rows));

    if let Some(f) = &e.field {
        const RESIDUAL: &str = "eigenstate.residual";
        let field = at(RESIDUAL, static_field(f))?;
        let setup = EigenstateSetup { grid, hbar, quad: QuadratureSpec::default(), maps: MapOptions::default() };
        let label = EigenLabel::planar(1, 0);
        out.measure(RESIDUAL, at(RESIDUAL, schrodinger_residual(label, e.horizon, &field, &setup))?);
        if field.e == Vec3::zeros() {
            const LEDGER: &str = "ledger.dynamical_only";
            let k_label = EigenLabel::new(1, 0, 0.5);
            let state = at(LEDGER, transformed_eigenstate(k_label, e.horizon, &field, Pipeline::Qt2Qt1, &setup))?;
            let energy = oscequiv::quantum::energy(k_label, field.osc_params(), hbar);
            let defect = state.ledger.action().abs().max((state.ledger.total() + energy * e.horizon / hbar).abs());
            out.measure(LEDGER, defect);
        }
    }
    Ok(out)
}

fn hill(h: &HillSpec) -> Step<Outcome> {
    const DET: &str = "monodromy.det";
    let mut out = Outcome::default();
    let (rows, header) = match &h.template {
        HillTemplate::Mathieu { a, q } => (
            at(DET, stability_map(|a, q| Ok(HillSystem::mathieu(a, q)), &a.values(), &q.values(), h.steps_per_period))?,
            ["a", "q", "trace", "det", "excess"],
        ),
        HillTemplate::Constant { omega, period } => {
            let rows = at(
                DET,
                stability_map(HillSystem::constant, &omega.values(), &[*period], h.steps_per_period),
            )?;
            let trace = rows.iter().map(|r| (r.trace - 2.0 * (r.param1 * r.param2).cos()).abs()).fold(0.0, f64::max);
            out.measure("constant.trace", trace);
            (rows, ["omega", "period", "trace", "det", "excess"])
        }
    };
    out.measure(DET, rows.iter().map(|r| (r.det - 1.0).abs()).fold(0.0, f64::max));
    out.artifacts.push(Artifact::new(
        "stability.csv",
        &header,
        rows.iter().map(|r| vec![r.param1, r.param2, r.trace, r.det, r.trace.abs() - 2.0]).collect(),
    ));

    if let (Some(b), HillTemplate::Mathieu { .. }) = (&h.boundary, &h.template) {
        const BOUNDARY: &str = "mathieu.boundary";
        let rk4 = at(BOUNDARY, mathieu_boundary(b.q, b.lo, b.hi, b.tol, h.steps_per_period))?;
        let excess = |a: f64| frozen_coefficient_monodromy(&HillSystem::mathieu(a, b.q), h.steps_per_period).trace.abs() - 2.0;
        // a finer bracket, so the two bisections do not share their midpoints
        let (lo, hi) = at(BOUNDARY, bisect(excess, b.lo, b.hi, b.tol / 100.0))?;
        let frozen = 0.5 * (lo + hi);
        out.measure(BOUNDARY, (rk4 - frozen).abs());
        out.artifacts.push(Artifact::new("boundary.csv", &["q", "a_rk4", "a_frozen", "tol"], vec![vec![b.q, rk4, frozen, b.tol]]));
    }
    Ok(out)
}

fn case1(c: &Case1Spec) -> Step<Outcome> {
    const ODE: &str = "rotation.ode";
    const DET: &str = "monodromy.det";
    let period = c.b3.period().expect("validated at parse time");
    let mut out = Outcome::default();
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for k in 1..=2 * c.periods {
        let t = 0.5 * period * k as f64;
        let closed = rotation_case1(&c.b3, c.charge, c.mass, t);
        let ode = at(ODE, rotation_case1_ode(&c.b3, c.charge, c.mass, t, c.dt))?;
        let defect = (closed - ode).amax();
        worst = worst.max(defect);
        rows.push(vec![t, closed[(1, 0)].atan2(closed[(0, 0)]), ode[(1, 0)].atan2(ode[(0, 0)]), defect]);
    }
    out.measure(ODE, worst);
    out.artifacts.push(Artifact::new("rotation.csv", &["t", "angle_closed", "angle_ode", "defect"], rows));

    let field = at(DET, FixedAxisField::new(c.b3.clone(), Drive::zero(), c.charge, c.mass))?;
    let sys = at(DET, field.hill_system(period))?;
    let r = at(DET, hill_monodromy(&sys, period / c.steps_per_period as f64))?;
    out.measure(DET, (r.det - 1.0).abs());
    let m = r.matrix;
    out.artifacts.push(Artifact::new(
        "monodromy.csv",
        &["m11", "m12", "m21", "m22", "trace", "det"],
        vec![vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)], r.trace, r.det]],
    ));
    Ok(out)
}

fn case2(c: &Case2Spec, rng: &mut ChaCha8Rng) -> Step<Outcome> {
    const DET: &str = "monodromy.det";
    let field = at("conjugation", RotatingField::new(c.b1, c.b3, c.alpha, Drive::Constant(c.e), c.charge, c.mass))?;
    let h5 = ct3_reduce(&field);
    let h6 = ct4_reduce(&h5);
    let (c3, c4) = (field.ct3(), h5.ct4());
    let probes: Vec<(f64, PhaseState)> = (0..c.probes).map(|_| (rng.random_range(0.0..10.0), random_state(rng))).collect();

    let mut out = Outcome::default();
    let max_over = |f: &dyn Fn(f64, &PhaseState) -> oscequiv::Result<f64>| -> oscequiv::Result<f64> {
        probes.iter().try_fold(0.0f64, |m, (t, z)| Ok(m.max(f(*t, z)?)))
    };
    out.measure("conjugation", at("conjugation", max_over(&|t, _| Ok(field.conjugation_defect(t))))?);
    out.measure("euler", at("euler", max_over(&|t, _| Ok(field.euler_defect(t, 1e-5))))?);
    out.measure("ct3.symplectic", at("ct3.symplectic", max_over(&|t, z| c3.symplectic_defect(t, z)))?);
    out.measure("ct4.symplectic", at("ct4.symplectic", max_over(&|t, z| c4.symplectic_defect(t, z)))?);
    if let Some(p) = h6.period() {
        out.measure(
            "stiffness.period",
            at("stiffness.period", max_over(&|t, _| Ok((h6.stiffness(t + p) - h6.stiffness(t)).amax())))?,
        );
    }

    let system = at(DET, h6.vector_system(TAU))?;
    let mono = system.monodromy(c.steps_per_period, 1e-8);
    out.measure(DET, (mono.det - 1.0).abs());

    if c.b1 == 0.0 {
        const STATIC: &str = "static_limit";
        let rotating = at(STATIC, ct1(&at(STATIC, StaticField::axial(c.b3, c.e, c.charge, c.mass))?))?;
        let defect = at(
            STATIC,
            max_over(&|t, z| Ok(c4.forward(t, &c3.forward(t, z)?)?.distance(&rotating.forward(t, z)?))),
        )?;
        out.measure(STATIC, defect);
    }

    let period = system.period();
    let stiffness_rows = (0..=200)
        .map(|i| {
            let t = period * i as f64 / 200.0;
            let k = h6.stiffness(t);
            let mut row = vec![t];
            row.extend(k.iter());
            row
        })
        .collect();
    out.artifacts.push(Artifact::new(
        "stiffness.csv",
        &["t", "k11", "k21", "k31", "k12", "k22", "k32", "k13", "k23", "k33"],
        stiffness_rows,
    ));
    out.artifacts.push(Artifact::new(
        "multipliers.csv",
        &["re", "im", "abs"],
        mono.multipliers.iter().map(|l| vec![l.re, l.im, l.norm()]).collect(),
    ));
    Ok(out)
}
