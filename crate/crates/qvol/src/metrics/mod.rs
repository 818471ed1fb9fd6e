//! The three Fisher metrics on the parameter tetrahedron.
//!
//! `classical` evaluates the Fisher-Rao metric of the Husimi distribution by
//! 4D quadrature; `quantum` provides the Helstrom (symmetric-logarithmic-
//! derivative) metric in closed form and the Wigner-Yanase metric through the
//! Bell spectrum.

mod classical;
mod quantum;

pub use classical::{
    classical_fisher, classical_fisher_raw, classical_fisher_rotated, husimi_norm, husimi_q,
    QuadratureGrid, DEFAULT_METRIC_MARGIN,
};
pub use quantum::{
    delta, quantum_fisher, quantum_fisher_from_sld, rho_partial, sld_operators, wigner_yanase,
    SldTriple,
};

use serde::Serialize;

use crate::linalg::sym_eigenvalues;

/// Symmetric 3x3 metric tensor at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricTensor {
    pub g11: f64,
    pub g22: f64,
    pub g33: f64,
    pub g12: f64,
    pub g13: f64,
    pub g23: f64,
}

impl MetricTensor {
    pub fn identity() -> Self {
        Self {
            g11: 1.0,
            g22: 1.0,
            g33: 1.0,
            g12: 0.0,
            g13: 0.0,
            g23: 0.0,
        }
    }

    pub fn from_matrix(m: [[f64; 3]; 3]) -> Self {
        Self {
            g11: m[0][0],
            g22: m[1][1],
            g33: m[2][2],
            g12: 0.5 * (m[0][1] + m[1][0]),
            g13: 0.5 * (m[0][2] + m[2][0]),
            g23: 0.5 * (m[1][2] + m[2][1]),
        }
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [
            [self.g11, self.g12, self.g13],
            [self.g12, self.g22, self.g23],
            [self.g13, self.g23, self.g33],
        ]
    }

    pub fn det(&self) -> f64 {
        let m = self.matrix();
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Volume density `sqrt(det g)`; NaN if the determinant is negative.
    pub fn sqrt_det(&self) -> f64 {
        self.det().sqrt()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        sym_eigenvalues(self.matrix())[0]
    }

    pub fn max_abs_diff(&self, other: &MetricTensor) -> f64 {
        [
            self.g11 - other.g11,
            self.g22 - other.g22,
            self.g33 - other.g33,
            self.g12 - other.g12,
            self.g13 - other.g13,
            self.g23 - other.g23,
        ]
        .iter()
        .fold(0.0_f64, |acc, d| acc.max(d.abs()))
    }

    /// Congruence transform `O g O^T`.
    pub fn congruence(&self, o: &crate::state::Rotation3) -> MetricTensor {
        let g = self.matrix();
        let mut og = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    og[i][j] += o.m[i][k] * g[k][j];
                }
            }
        }
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j] += og[i][k] * o.m[j][k];
                }
            }
        }
        MetricTensor::from_matrix(out)
    }
}

/// A point of the product phase space: polar angles in `[0, pi)`, azimuthal
/// angles in `[0, 2 pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl PhasePoint {
    pub fn new(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Self {
        Self {
            theta1,
            theta2,
            phi1,
            phi2,
        }
    }
}
