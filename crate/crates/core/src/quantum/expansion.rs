//! Finite expansions: shifted Hermite polynomials and rotated products of
//! oscillator eigenfunctions.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{ensure, Error, Result};
use crate::propagator::OscParams;
use crate::quantum::hermite::{alpha, hermite_function_poly};

/// Coefficients of an expansion in a labelled basis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpansionCoeffs<K: Ord> {
    terms: BTreeMap<K, f64>,
}

impl<K: Ord + Copy> ExpansionCoeffs<K> {
    pub fn get(&self, key: K) -> f64 {
        self.terms.get(&key).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (K, f64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ |c|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum()
    }
}

impl<K: Ord> FromIterator<(K, f64)> for ExpansionCoeffs<K> {
    fn from_iter<I: IntoIterator<Item = (K, f64)>>(iter: I) -> Self {
        Self { terms: iter.into_iter().collect() }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficients `c_k = C(n, k) (2v)^{n−k}` with `Hₙ(u + v) = Σ c_k H_k(u)`.
pub fn hermite_shift_expand(n: usize, v: f64) -> ExpansionCoeffs<usize> {
    (0..=n).map(|k| (k, binomial(n, k) * (2.0 * v).powi((n - k) as i32))).collect()
}

/// Coefficients `d_k` with
/// `φₙ(x + v) = e^{−α²(x v + v²/2)} Σ_k d_k φ_k(x)`,
/// `d_k = (2^k k! / 2ⁿ n!)^{1/2} C(n, k) (2αv)^{n−k}`.
pub fn eigenfunction_shift_expand(n: usize, v: f64, params: OscParams, hbar: f64) -> ExpansionCoeffs<usize> {
    let a = alpha(params, hbar);
    hermite_shift_expand(n, a * v)
        .iter()
        .map(|(k, c)| {
            // (2^k k! / 2^n n!)^{1/2} = Π_{j=k+1}^{n} (2j)^{-1/2}
            let ratio: f64 = (k + 1..=n).map(|j| (2.0 * j as f64).sqrt().recip()).product();
            (k, c * ratio)
        })
        .collect()
}

/// Nodes and weights of `n`-point Gauss–Hermite quadrature (weight `e^{−u²}`),
/// by the Golub–Welsch eigenvalue method.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let jacobi = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], std::f64::consts::PI.sqrt() * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Expansion of a rotated product state over the product basis.
#[derive(Debug, Clone)]
pub struct RotatedProduct {
    /// Coefficients on the level `m₁ + m₂ = k₁ + k₂`.
    pub coeffs: ExpansionCoeffs<(usize, usize)>,
    /// Largest coefficient found off that level.
    pub off_shell: f64,
}

/// `φ_{k₁}((R x)₁) φ_{k₂}((R x)₂) = Σ c_{m₁ m₂} φ_{m₁}(x₁) φ_{m₂}(x₂)` with
/// `R` the planar rotation by `theta`, projected by 2D Gauss–Hermite
/// quadrature of order `k₁ + k₂ + 8`.
///
/// The coefficients do not depend on the oscillator length scale.
pub fn rotate_product_expand(k1: usize, k2: usize, theta: f64) -> Result<RotatedProduct> {
    rotate_product_expand_with_order(k1, k2, theta, k1 + k2 + 8)
}

pub fn rotate_product_expand_with_order(k1: usize, k2: usize, theta: f64, order: usize) -> Result<RotatedProduct> {
    ensure(order >= 1, "order", || "quadrature needs at least one node".into())?;
    ensure(theta.is_finite(), "theta", || "angle must be finite".into())?;
    let level = k1 + k2;
    let (nodes, weights) = gauss_hermite(order);
    let (s, c) = theta.sin_cos();
    let probe = level + 2;

    // tabulate polynomial parts once per node
    let poly = |n: usize, u: f64| hermite_function_poly(n, u);
    let mut coeffs = vec![0.0; (probe + 1) * (probe + 1)];
    for (i, &u1) in nodes.iter().enumerate() {
        for (j, &u2) in nodes.iter().enumerate() {
            let w = weights[i] * weights[j];
            let r1 = c * u1 - s * u2;
            let r2 = s * u1 + c * u2;
            let lhs = w * poly(k1, r1) * poly(k2, r2);
            if lhs == 0.0 {
                continue;
            }
            let p1: Vec<f64> = (0..=probe).map(|m| poly(m, u1)).collect();
            let p2: Vec<f64> = (0..=probe).map(|m| poly(m, u2)).collect();
            for m1 in 0..=probe {
                for m2 in 0..=(probe - m1) {
                    coeffs[m1 * (probe + 1) + m2] += lhs * p1[m1] * p2[m2];
                }
            }
        }
    }

    let mut off_shell = 0.0f64;
    let mut on_shell = Vec::new();
    for m1 in 0..=probe {
        for m2 in 0..=(probe - m1) {
            let v = coeffs[m1 * (probe + 1) + m2];
            if m1 + m2 == level {
                on_shell.push(((m1, m2), v));
            } else {
                off_shell = off_shell.max(v.abs());
            }
        }
    }
    let coeffs: ExpansionCoeffs<(usize, usize)> = on_shell.into_iter().collect();
    let leakage = off_shell.max((coeffs.norm_sqr() - 1.0).abs());
    if leakage > 1e-6 {
        return Err(Error::QuadratureLeakage { leakage });
    }
    Ok(RotatedProduct { coeffs, off_shell })
}

/// Matrix `C[(k₁,k₂)][(m₁,m₂)]` of rotated-product coefficients on the level
/// `k₁ + k₂ = m₁ + m₂ = level`, rows and columns ordered by the first index.
pub fn level_matrix(level: usize, theta: f64) -> Result<DMatrix<f64>> {
    let mut m = DMatrix::zeros(level + 1, level + 1);
    for k1 in 0..=level {
        let r = rotate_product_expand(k1, level - k1, theta)?;
        for (m1, m2) in (0..=level).map(|m1| (m1, level - m1)) {
            m[(k1, m1)] = r.coeffs.get((m1, m2));
        }
    }
    Ok(m)
}
