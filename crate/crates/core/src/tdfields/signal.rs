//! Scalar functions of time with closed-form antiderivatives.

use std::f64::consts::TAU;

use crate::error::{ensure, Result};

/// A scalar signal `s(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    Constant(f64),
    /// `mean + amplitude · cos(freq · t + phase)`.
    Harmonic { mean: f64, amplitude: f64, freq: f64, phase: f64 },
    /// Piecewise-linear table, held constant outside its window.
    Sampled { times: Vec<f64>, values: Vec<f64> },
}

impl Signal {
    pub fn harmonic(mean: f64, amplitude: f64, freq: f64, phase: f64) -> Self {
        Signal::Harmonic { mean, amplitude, freq, phase }
    }

    pub fn sampled(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        ensure(times.len() == values.len() && times.len() >= 2, "times", || {
            "need at least two samples and one value per time".into()
        })?;
        ensure(times.windows(2).all(|w| w[0] < w[1]), "times", || "must be strictly increasing".into())?;
        ensure(times.iter().chain(&values).all(|v| v.is_finite()), "values", || "must be finite".into())?;
        Ok(Signal::Sampled { times, values })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Signal::Constant(v) => *v,
            Signal::Harmonic { mean, amplitude, freq, phase } => mean + amplitude * (freq * t + phase).cos(),
            Signal::Sampled { times, values } => {
                let n = times.len();
                if t <= times[0] {
                    return values[0];
                }
                if t >= times[n - 1] {
                    return values[n - 1];
                }
                let i = times.partition_point(|&s| s <= t) - 1;
                let w = (t - times[i]) / (times[i + 1] - times[i]);
                values[i] * (1.0 - w) + values[i + 1] * w
            }
        }
    }

    /// `∫₀ᵗ s(u) du`.
    pub fn integral(&self, t: f64) -> f64 {
        match self {
            Signal::Constant(v) => v * t,
            Signal::Harmonic { mean, amplitude, freq, phase } => {
                let osc = if *freq == 0.0 {
                    amplitude * phase.cos() * t
                } else {
                    amplitude * ((freq * t + phase).sin() - phase.sin()) / freq
                };
                mean * t + osc
            }
            Signal::Sampled { .. } => self.piecewise_integral(0.0, t),
        }
    }

    /// Exact integral of the piecewise-linear interpolant (including the
    /// constant extensions) from `a` to `b`.
    fn piecewise_integral(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return -self.piecewise_integral(b, a);
        }
        let Signal::Sampled { times, .. } = self else { unreachable!() };
        let mut knots: Vec<f64> = vec![a];
        knots.extend(times.iter().copied().filter(|&s| s > a && s < b));
        knots.push(b);
        knots.windows(2).map(|w| 0.5 * (w[1] - w[0]) * (self.eval(w[0]) + self.eval(w[1]))).sum()
    }

    /// Smallest period the signal is known to have, if any.
    pub fn period(&self) -> Option<f64> {
        match self {
            Signal::Harmonic { freq, amplitude, .. } if *freq != 0.0 && *amplitude != 0.0 => Some(TAU / freq.abs()),
            _ => None,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        match self {
            Signal::Constant(v) => Signal::Constant(v * k),
            Signal::Harmonic { mean, amplitude, freq, phase } => {
                Signal::Harmonic { mean: mean * k, amplitude: amplitude * k, freq: *freq, phase: *phase }
            }
            Signal::Sampled { times, values } => {
                Signal::Sampled { times: times.clone(), values: values.iter().map(|v| v * k).collect() }
            }
        }
    }
}
