//! Small dense matrices, cross-product generators and rotation helpers.
//!
//! Phase-space vectors use the interleaved layout `(Q1, P1, Q2, P2, Q3, P3)`,
//! so the standard symplectic form is block diagonal with `[[0, 1], [-1, 0]]`
//! on each degree of freedom.

use nalgebra::{Matrix2, Matrix3, SMatrix, SVector, Vector3};

pub type Vec3 = Vector3<f64>;
pub type Mat2 = Matrix2<f64>;
pub type Mat3 = Matrix3<f64>;
pub type Mat6 = SMatrix<f64, 6, 6>;

/// Speed of light in the natural unit system used throughout (`c = 1`).
///
/// Cyclotron frequencies are `q B / (m c)`; the symbol is kept so that the
/// coupling `q A / c` reads as in Gaussian units.
pub const SPEED_OF_LIGHT: f64 = 1.0;

/// The matrix `Ω` with `Ω x = b × x`.
pub fn cross_matrix(b: &Vec3) -> Mat3 {
    Mat3::new(0.0, -b.z, b.y, b.z, 0.0, -b.x, -b.y, b.x, 0.0)
}

/// Proper rotation by `angle` about the z-axis (counter-clockwise).
pub fn rotation_about_z(angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// The 2x2 block exactly as typeset in the source derivation (both
/// off-diagonals `+sin`). Not orthogonal; kept only so tests can document the
/// discrepancy with [`rotation_about_z`].
pub fn printed_rotation_block(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    Mat2::new(c, s, s, c)
}

/// Matrix exponential of an antisymmetric 3x3 generator (Rodrigues formula).
pub fn exp_antisymmetric(generator: &Mat3) -> Mat3 {
    let w = Vec3::new(generator[(2, 1)], generator[(0, 2)], generator[(1, 0)]);
    let theta = w.norm();
    if theta < 1e-300 {
        return Mat3::identity();
    }
    let k = generator / theta;
    Mat3::identity() + k * theta.sin() + k * k * (1.0 - theta.cos())
}

/// Axis vector `w` of an antisymmetric matrix, `A x = w × x`.
pub fn axial_vector(a: &Mat3) -> Vec3 {
    Vec3::new(a[(2, 1)], a[(0, 2)], a[(1, 0)])
}

/// Standard symplectic form for `n` degrees of freedom in interleaved layout.
pub fn symplectic_form<const D: usize>() -> SMatrix<f64, D, D> {
    assert!(D.is_multiple_of(2), "phase space must be even dimensional");
    let mut s = SMatrix::<f64, D, D>::zeros();
    for i in (0..D).step_by(2) {
        s[(i, i + 1)] = 1.0;
        s[(i + 1, i)] = -1.0;
    }
    s
}

/// Central finite-difference Jacobian with step `h = 1e-5 (1 + |z|)`.
pub fn fd_jacobian<const D: usize>(
    f: impl Fn(&SVector<f64, D>) -> SVector<f64, D>,
    z: &SVector<f64, D>,
) -> SMatrix<f64, D, D> {
    let h = 1e-5 * (1.0 + z.norm());
    let mut jac = SMatrix::<f64, D, D>::zeros();
    for j in 0..D {
        let mut zp = *z;
        let mut zm = *z;
        zp[j] += h;
        zm[j] -= h;
        let col = (f(&zp) - f(&zm)) / (2.0 * h);
        jac.set_column(j, &col);
    }
    jac
}

/// Largest entry of `Jᵀ Σ J − Σ`.
pub fn symplectic_defect<const D: usize>(jac: &SMatrix<f64, D, D>) -> f64 {
    let s = symplectic_form::<D>();
    (jac.transpose() * s * jac - s).amax()
}

/// Embed per-degree 2x2 blocks into the interleaved 6x6 layout.
pub fn block_diag3(blocks: [Mat2; 3]) -> Mat6 {
    let mut m = Mat6::zeros();
    for (k, b) in blocks.iter().enumerate() {
        m.fixed_view_mut::<2, 2>(2 * k, 2 * k).copy_from(b);
    }
    m
}

/// Apply a 3x3 rotation to both the position and momentum triples of an
/// interleaved phase vector.
pub fn rotate_phase(r: &Mat3, z: &SVector<f64, 6>) -> SVector<f64, 6> {
    let q = r * Vec3::new(z[0], z[2], z[4]);
    let p = r * Vec3::new(z[1], z[3], z[5]);
    SVector::<f64, 6>::from([q.x, p.x, q.y, p.y, q.z, p.z])
}
