//! Hill equations `ẍ + ω²(t) x = k(t)` with periodic `ω²`, their monodromy
//! matrices and Floquet classification.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix6, Vector2};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{ensure, Error, Result};
use crate::linalg::{Mat2, Mat3};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default number of RK4 steps per period.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 4096;

/// Default half-width of the `|trace| = 2` band treated as marginal.
pub const DEFAULT_MARGINAL_TOLERANCE: f64 = 1e-8;

/// `ẍ + ω²(t) x = k(t)` with `ω²` periodic of period `T`.
#[derive(Clone)]
pub struct HillSystem {
    omega_sq: ScalarFn,
    period: f64,
    drive: Option<ScalarFn>,
    label: String,
}

impl fmt::Debug for HillSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HillSystem")
            .field("label", &self.label)
            .field("period", &self.period)
            .field("driven", &self.drive.is_some())
            .finish()
    }
}

impl HillSystem {
    pub fn new(omega_sq: impl Fn(f64) -> f64 + Send + Sync + 'static, period: f64) -> Result<Self> {
        ensure(period.is_finite() && period > 0.0, "period", || format!("must be positive, got {period}"))?;
        Ok(Self { omega_sq: Arc::new(omega_sq), period, drive: None, label: "custom".into() })
    }

    /// `ω² ≡ ω₀²`, integrated over the period `T`.
    pub fn constant(omega0: f64, period: f64) -> Result<Self> {
        let w2 = omega0 * omega0;
        Ok(Self::new(move |_| w2, period)?.labelled(format!("constant omega={omega0}")))
    }

    /// Mathieu form `ω²(t) = a + 2q cos 2t`, period `π`.
    pub fn mathieu(a: f64, q: f64) -> Self {
        Self::new(move |t| a + 2.0 * q * (2.0 * t).cos(), PI)
            .expect("π is a valid period")
            .labelled(format!("mathieu a={a} q={q}"))
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_drive(mut self, drive: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.drive = Some(Arc::new(drive));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn omega_sq(&self, t: f64) -> f64 {
        (self.omega_sq)(t)
    }

    pub fn drive(&self, t: f64) -> f64 {
        self.drive.as_ref().map_or(0.0, |k| k(t))
    }

    /// Largest `|ω²(t + T) − ω²(t)|` over `samples` points of one period.
    pub fn periodicity_defect(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|i| {
                let t = self.period * i as f64 / samples as f64;
                (self.omega_sq(t + self.period) - self.omega_sq(t)).abs()
            })
            .fold(0.0, f64::max)
    }

    fn field(&self, t: f64, y: &Vector2<f64>, driven: bool) -> Vector2<f64> {
        let k = if driven { self.drive(t) } else { 0.0 };
        Vector2::new(y[1], k - self.omega_sq(t) * y[0])
    }

    fn rk4(&self, t: f64, y: &Vector2<f64>, h: f64, driven: bool) -> Vector2<f64> {
        let k1 = self.field(t, y, driven);
        let k2 = self.field(t + 0.5 * h, &(y + k1 * (0.5 * h)), driven);
        let k3 = self.field(t + 0.5 * h, &(y + k2 * (0.5 * h)), driven);
        let k4 = self.field(t + h, &(y + k3 * h), driven);
        y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    }

    /// Integrate the driven equation from `(x0, v0)` at time 0 to `t`.
    pub fn integrate(&self, x0: f64, v0: f64, t: f64, dt: f64) -> Result<(f64, f64)> {
        ensure(dt.is_finite() && dt > 0.0, "dt", || format!("must be positive, got {dt}"))?;
        let n = (t / dt).ceil().max(1.0) as usize;
        let h = t / n as f64;
        let mut y = Vector2::new(x0, v0);
        for i in 0..n {
            y = self.rk4(i as f64 * h, &y, h, true);
            if !y.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFinite { time: (i + 1) as f64 * h });
            }
        }
        Ok((y[0], y[1]))
    }
}

/// Floquet classification of a monodromy matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

impl Stability {
    pub fn from_trace(trace: f64, tolerance: f64) -> Self {
        if !trace.is_finite() {
            Stability::Unstable
        } else if (trace.abs() - 2.0).abs() <= tolerance {
            Stability::Marginal
        } else if trace.abs() < 2.0 {
            Stability::Stable
        } else {
            Stability::Unstable
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Marginal => "marginal",
        }
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One-period map of a Hill equation and its Floquet data.
#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyReport {
    pub matrix: Mat2,
    pub trace: f64,
    pub det: f64,
    pub classification: Stability,
    /// `ln λ / T` for the two eigenvalues `λ` of the monodromy matrix.
    pub floquet_exponents: [Complex64; 2],
    /// Time at which the fundamental solution stopped being finite.
    pub blow_up: Option<f64>,
}

impl MonodromyReport {
    fn from_matrix(matrix: Mat2, period: f64, tolerance: f64) -> Self {
        let trace = matrix.trace();
        let det = matrix.determinant();
        let disc = Complex64::new(trace * trace - 4.0 * det, 0.0).sqrt();
        let lambda = [(trace + disc) / 2.0, (trace - disc) / 2.0];
        Self {
            matrix,
            trace,
            det,
            classification: Stability::from_trace(trace, tolerance),
            floquet_exponents: lambda.map(|l| l.ln() / period),
            blow_up: None,
        }
    }

    fn blown_up(time: f64) -> Self {
        Self {
            matrix: Mat2::from_element(f64::NAN),
            trace: f64::NAN,
            det: f64::NAN,
            classification: Stability::Unstable,
            floquet_exponents: [Complex64::new(f64::INFINITY, 0.0); 2],
            blow_up: Some(time),
        }
    }
}

fn steps_for(period: f64, dt: f64) -> Result<usize> {
    ensure(dt.is_finite() && dt > 0.0, "dt", || format!("must be positive, got {dt}"))?;
    let ratio = period / dt;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::StepMismatch { dt, period });
    }
    Ok(n as usize)
}

/// Monodromy by RK4 on the first-order system with step `dt`, which must
/// divide the period.
pub fn hill_monodromy(sys: &HillSystem, dt: f64) -> Result<MonodromyReport> {
    hill_monodromy_with(sys, dt, DEFAULT_MARGINAL_TOLERANCE)
}

/// [`hill_monodromy`] with `dt = T / 4096`.
pub fn hill_monodromy_default(sys: &HillSystem) -> MonodromyReport {
    hill_monodromy(sys, sys.period() / DEFAULT_STEPS_PER_PERIOD as f64).expect("step divides the period")
}

pub fn hill_monodromy_with(sys: &HillSystem, dt: f64, marginal_tolerance: f64) -> Result<MonodromyReport> {
    let n = steps_for(sys.period(), dt)?;
    let h = sys.period() / n as f64;
    let mut a = Vector2::new(1.0, 0.0);
    let mut b = Vector2::new(0.0, 1.0);
    for i in 0..n {
        let t = i as f64 * h;
        a = sys.rk4(t, &a, h, false);
        b = sys.rk4(t, &b, h, false);
        if !(a.iter().chain(b.iter()).all(|v| v.is_finite())) {
            return Ok(MonodromyReport::blown_up(t + h));
        }
    }
    let m = Mat2::new(a[0], b[0], a[1], b[1]);
    Ok(MonodromyReport::from_matrix(m, sys.period(), marginal_tolerance))
}

/// Exact propagator of `ẍ = −w2 x` over time `h`, for either sign of `w2`.
fn frozen_block(w2: f64, h: f64) -> Mat2 {
    if w2 > 0.0 {
        let w = w2.sqrt();
        let (s, c) = (w * h).sin_cos();
        Mat2::new(c, s / w, -w * s, c)
    } else if w2 < 0.0 {
        let g = (-w2).sqrt();
        let (s, c) = ((g * h).sinh(), (g * h).cosh());
        Mat2::new(c, s / g, g * s, c)
    } else {
        Mat2::new(1.0, h, 0.0, 1.0)
    }
}

/// Brute-force reference monodromy: product of exact propagators with `ω²`
/// frozen at each step midpoint. Second order, exactly area preserving, and
/// independent of the RK4 path.
pub fn frozen_coefficient_monodromy(sys: &HillSystem, steps: usize) -> MonodromyReport {
    let steps = steps.max(1);
    let h = sys.period() / steps as f64;
    let mut m = Mat2::identity();
    for i in 0..steps {
        m = frozen_block(sys.omega_sq((i as f64 + 0.5) * h), h) * m;
    }
    MonodromyReport::from_matrix(m, sys.period(), DEFAULT_MARGINAL_TOLERANCE)
}

/// Locate a sign change of `f` in `[lo, hi]` by bisection until the bracket
/// is narrower than `tol`. Returns the final bracket.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    ensure(tol > 0.0, "tol", || "must be positive".into())?;
    let (mut flo, fhi) = (f(lo), f(hi));
    ensure(flo.signum() != fhi.signum(), "bracket", || {
        format!("no sign change between {lo} (f = {flo:.3e}) and {hi} (f = {fhi:.3e})")
    })?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Edge of a Mathieu instability tongue at fixed `q`: the `a` in `[lo, hi]`
/// where `|trace| − 2` changes sign, to within `tol`.
pub fn mathieu_boundary(q: f64, lo: f64, hi: f64, tol: f64, steps: usize) -> Result<f64> {
    let dt = PI / steps as f64;
    let excess = |a: f64| {
        hill_monodromy(&HillSystem::mathieu(a, q), dt).map(|r| r.trace.abs() - 2.0).unwrap_or(f64::INFINITY)
    };
    let (a, b) = bisect(excess, lo, hi, tol)?;
    Ok(0.5 * (a + b))
}

/// One row of a stability table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRow {
    pub param1: f64,
    pub param2: f64,
    pub trace: f64,
    pub det: f64,
    pub classification: Stability,
}

/// Classify `template(p1, p2)` over the product grid, in parallel. Rows come
/// out in `p1`-major order regardless of scheduling.
pub fn stability_map<F>(template: F, param1: &[f64], param2: &[f64], steps_per_period: usize) -> Result<Vec<StabilityRow>>
where
    F: Fn(f64, f64) -> Result<HillSystem> + Sync,
{
    ensure(steps_per_period >= 1, "steps_per_period", || "must be at least 1".into())?;
    let points: Vec<(f64, f64)> = param1.iter().flat_map(|&a| param2.iter().map(move |&b| (a, b))).collect();
    points
        .par_iter()
        .map(|&(p1, p2)| {
            let sys = template(p1, p2)?;
            let r = hill_monodromy(&sys, sys.period() / steps_per_period as f64)?;
            Ok(StabilityRow { param1: p1, param2: p2, trace: r.trace, det: r.det, classification: r.classification })
        })
        .collect()
}

type MatrixFn = Arc<dyn Fn(f64) -> Mat3 + Send + Sync>;

/// Vector Hill equation `ẍ + S(t) x = 0` with `S` periodic.
#[derive(Clone)]
pub struct VectorHillSystem {
    stiffness: MatrixFn,
    period: f64,
}

impl fmt::Debug for VectorHillSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorHillSystem").field("period", &self.period).finish()
    }
}

/// Monodromy of a [`VectorHillSystem`] in the interleaved layout.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorMonodromy {
    pub matrix: Matrix6<f64>,
    pub det: f64,
    pub multipliers: Vec<Complex64>,
    pub classification: Stability,
}

impl VectorHillSystem {
    pub fn new(stiffness: impl Fn(f64) -> Mat3 + Send + Sync + 'static, period: f64) -> Result<Self> {
        ensure(period.is_finite() && period > 0.0, "period", || format!("must be positive, got {period}"))?;
        Ok(Self { stiffness: Arc::new(stiffness), period })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// `S(t)`, the stiffness divided by the mass.
    pub fn stiffness(&self, t: f64) -> Mat3 {
        (self.stiffness)(t)
    }

    /// Scalar Hill equation for the fixed direction `e`: `ω²(t) = ⟨e, S(t) e⟩`.
    pub fn projected(&self, e: nalgebra::Vector3<f64>) -> HillSystem {
        let e = e.normalize();
        let s = self.stiffness.clone();
        HillSystem::new(move |t| e.dot(&(s(t) * e)), self.period)
            .expect("period already validated")
            .labelled(format!("projection on ({:.3}, {:.3}, {:.3})", e.x, e.y, e.z))
    }

    fn field(&self, t: f64, z: &Matrix6<f64>) -> Matrix6<f64> {
        let s = self.stiffness(t);
        let mut out = Matrix6::zeros();
        for i in 0..3 {
            out.set_row(2 * i, &z.row(2 * i + 1));
            for j in 0..3 {
                let row = z.row(2 * j) * (-s[(i, j)]);
                let cur = out.row(2 * i + 1) + row;
                out.set_row(2 * i + 1, &cur);
            }
        }
        out
    }

    /// 6x6 monodromy by RK4 with `steps` steps per period.
    pub fn monodromy(&self, steps: usize, tolerance: f64) -> VectorMonodromy {
        let steps = steps.max(1);
        let h = self.period / steps as f64;
        let mut z = Matrix6::<f64>::identity();
        for i in 0..steps {
            let t = i as f64 * h;
            let k1 = self.field(t, &z);
            let k2 = self.field(t + 0.5 * h, &(z + k1 * (0.5 * h)));
            let k3 = self.field(t + 0.5 * h, &(z + k2 * (0.5 * h)));
            let k4 = self.field(t + h, &(z + k3 * h));
            z += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        }
        let multipliers: Vec<Complex64> = z.complex_eigenvalues().iter().copied().collect();
        let largest = multipliers.iter().map(|l| l.norm()).fold(0.0, f64::max);
        let classification = if !largest.is_finite() || largest > 1.0 + tolerance.sqrt() {
            Stability::Unstable
        } else if multipliers.iter().all(|l| (l - 1.0).norm() > tolerance.sqrt() && (l + 1.0).norm() > tolerance.sqrt()) {
            Stability::Stable
        } else {
            Stability::Marginal
        };
        VectorMonodromy { det: z.determinant(), matrix: z, multipliers, classification }
    }
}
