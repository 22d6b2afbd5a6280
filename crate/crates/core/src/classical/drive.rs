//! Spatially homogeneous forces `k(t) = q E(t)`.

use crate::error::{ensure, Error, Result};
use crate::linalg::Vec3;

/// One frequency component `cos(ν t) a + sin(ν t) b` of a sinusoid bank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinusoid {
    pub freq: f64,
    pub cos: Vec3,
    pub sin: Vec3,
}

/// Piecewise-linear force table on strictly increasing sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledDrive {
    times: Vec<f64>,
    values: Vec<Vec3>,
}

impl SampledDrive {
    pub fn new(times: Vec<f64>, values: Vec<Vec3>) -> Result<Self> {
        ensure(times.len() >= 2, "times", || "need at least two samples".into())?;
        ensure(times.len() == values.len(), "values", || {
            format!("{} values for {} times", values.len(), times.len())
        })?;
        ensure(times.windows(2).all(|w| w[1] > w[0]), "times", || {
            "sample times must be strictly increasing".into()
        })?;
        ensure(
            times.iter().all(|t| t.is_finite()) && values.iter().all(|v| v.iter().all(|x| x.is_finite())),
            "values",
            || "samples must be finite".into(),
        )?;
        Ok(Self { times, values })
    }

    pub fn window(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().unwrap())
    }

    fn interpolate(&self, t: f64) -> Vec3 {
        let (t0, t1) = self.window();
        let t = t.clamp(t0, t1);
        let i = match self.times.partition_point(|&s| s <= t) {
            0 => 0,
            i if i >= self.times.len() => self.times.len() - 2,
            i => i - 1,
        };
        let (a, b) = (self.times[i], self.times[i + 1]);
        let w = (t - a) / (b - a);
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Drive {
    Constant(Vec3),
    Sinusoids(Vec<Sinusoid>),
    Sampled(SampledDrive),
}

impl Drive {
    pub fn zero() -> Self {
        Drive::Constant(Vec3::zeros())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Drive::Constant(k) => *k == Vec3::zeros(),
            Drive::Sinusoids(bank) => bank.iter().all(|s| s.cos == Vec3::zeros() && s.sin == Vec3::zeros()),
            Drive::Sampled(table) => table.values.iter().all(|v| *v == Vec3::zeros()),
        }
    }

    /// Time interval on which the drive is defined, `None` meaning all times.
    pub fn window(&self) -> Option<(f64, f64)> {
        match self {
            Drive::Sampled(table) => Some(table.window()),
            _ => None,
        }
    }

    pub fn check_window(&self, start: f64, end: f64) -> Result<()> {
        if let Some((a, b)) = self.window() {
            for t in [start, end] {
                if t < a || t > b {
                    return Err(Error::DriveOutOfRange { t, start: a, end: b });
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> Result<Vec3> {
        self.check_window(t, t)?;
        Ok(self.eval_unchecked(t))
    }

    /// Evaluate without the window check; sampled tables clamp to their ends.
    pub fn eval_unchecked(&self, t: f64) -> Vec3 {
        match self {
            Drive::Constant(k) => *k,
            Drive::Sinusoids(bank) => bank.iter().fold(Vec3::zeros(), |acc, s| {
                let (sn, cs) = (s.freq * t).sin_cos();
                acc + s.cos * cs + s.sin * sn
            }),
            Drive::Sampled(table) => table.interpolate(t),
        }
    }

    /// Shortest time scale of the drive (`1/ν` of the fastest component or
    /// the finest sample spacing), `None` for a constant force.
    pub fn time_scale(&self) -> Option<f64> {
        match self {
            Drive::Constant(_) => None,
            Drive::Sinusoids(bank) => bank
                .iter()
                .filter(|s| s.freq != 0.0)
                .map(|s| 1.0 / s.freq.abs())
                .reduce(f64::min),
            Drive::Sampled(table) => table.times.windows(2).map(|w| w[1] - w[0]).reduce(f64::min),
        }
    }
}
