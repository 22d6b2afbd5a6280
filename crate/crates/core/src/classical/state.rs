use nalgebra::Vector6;

use crate::error::{Error, Result};
use crate::linalg::Vec3;

/// A point in 6-dimensional phase space, interleaved `(Q1, P1, Q2, P2, Q3, P3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState(pub Vector6<f64>);

impl PhaseState {
    pub fn zero() -> Self {
        Self(Vector6::zeros())
    }

    pub fn from_qp(q: Vec3, p: Vec3) -> Self {
        Self(Vector6::new(q.x, p.x, q.y, p.y, q.z, p.z))
    }

    pub fn from_slice(z: &[f64]) -> Result<Self> {
        if z.len() != 6 {
            return Err(Error::DimensionMismatch { expected: 6, got: z.len() });
        }
        Ok(Self(Vector6::from_column_slice(z)))
    }

    pub fn q(&self) -> Vec3 {
        Vec3::new(self.0[0], self.0[2], self.0[4])
    }

    pub fn p(&self) -> Vec3 {
        Vec3::new(self.0[1], self.0[3], self.0[5])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Largest absolute component difference.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).amax()
    }
}

impl std::ops::Add for PhaseState {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl std::ops::Sub for PhaseState {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleaved_layout() {
        let z = PhaseState::from_qp(Vec3::new(1.0, 2.0, 3.0), Vec3::new(4.0, 5.0, 6.0));
        assert_eq!(z.0.as_slice(), &[1.0, 4.0, 2.0, 5.0, 3.0, 6.0]);
        assert_eq!(z.q(), Vec3::new(1.0, 2.0, 3.0));
        assert_eq!(z.p(), Vec3::new(4.0, 5.0, 6.0));
    }

    #[test]
    fn slice_dimension_checked() {
        assert_eq!(
            PhaseState::from_slice(&[0.0; 4]),
            Err(Error::DimensionMismatch { expected: 6, got: 4 })
        );
        assert!(PhaseState::from_slice(&[0.0; 6]).is_ok());
    }
}
