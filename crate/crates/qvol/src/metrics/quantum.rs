//! Quantum Fisher metrics: Helstrom (via symmetric logarithmic derivatives)
//! and Wigner-Yanase. Every state in this family is diagonal in the Bell basis
//! with constant eigenvectors, so both metrics are available in closed form
//! and coincide; the two routes are kept separate so they can check each
//! other.

use crate::error::{Error, Result};
use crate::linalg::{mat4_mul, mat4_trace, Mat4};
use crate::metrics::MetricTensor;
use crate::state::{TVector, BELL_SIGNS};

/// The product of the four tetrahedron face values,
/// `Delta = ((t11+t22)^2 - (1-t33)^2) ((t11-t22)^2 - (1+t33)^2)`;
/// strictly positive inside the tetrahedron, zero on its boundary, and the
/// Helstrom metric satisfies `det g = 1/Delta`.
pub fn delta(t: &TVector) -> f64 {
    let plus = t.t11 + t.t22;
    let minus = t.t11 - t.t22;
    let one_minus = 1.0 - t.t33;
    let one_plus = 1.0 + t.t33;
    (plus * plus - one_minus * one_minus) * (minus * minus - one_plus * one_plus)
}

/// The three symmetric logarithmic derivatives `L_i` solving
/// `d_i rho = (L_i rho + rho L_i) / 2`; real symmetric 4x4 matrices that
/// commute with the state.
#[derive(Debug, Clone, PartialEq)]
pub struct SldTriple {
    pub l1: Mat4,
    pub l2: Mat4,
    pub l3: Mat4,
}

impl SldTriple {
    pub fn get(&self, i: usize) -> &Mat4 {
        match i {
            0 => &self.l1,
            1 => &self.l2,
            2 => &self.l3,
            _ => panic!("SLD index out of range: {i}"),
        }
    }
}

/// Constant derivative matrices `d rho / d t_ii = (s_i x s_i) / 4`.
pub fn rho_partial(i: usize) -> Mat4 {
    let q = 0.25;
    match i {
        0 => [
            [0.0, 0.0, 0.0, q],
            [0.0, 0.0, q, 0.0],
            [0.0, q, 0.0, 0.0],
            [q, 0.0, 0.0, 0.0],
        ],
        1 => [
            [0.0, 0.0, 0.0, -q],
            [0.0, 0.0, q, 0.0],
            [0.0, q, 0.0, 0.0],
            [-q, 0.0, 0.0, 0.0],
        ],
        2 => [
            [q, 0.0, 0.0, 0.0],
            [0.0, -q, 0.0, 0.0],
            [0.0, 0.0, -q, 0.0],
            [0.0, 0.0, 0.0, q],
        ],
        _ => panic!("partial index out of range: {i}"),
    }
}

/// Symmetric logarithmic derivatives of the state at `t`. Fails on the
/// boundary of the tetrahedron where a block denominator vanishes.
pub fn sld_operators(t: &TVector) -> Result<SldTriple> {
    // Outer block couples |00>,|11>; inner block couples |01>,|10>.
    let d_outer = (t.t11 - t.t22).powi(2) - (t.t33 + 1.0).powi(2);
    let d_inner = (t.t11 + t.t22).powi(2) - (t.t33 - 1.0).powi(2);
    if d_outer.abs() < 1e-12 || d_inner.abs() < 1e-12 {
        return Err(Error::SingularState {
            detail: format!(
                "SLD block denominators ({d_outer:.3e}, {d_inner:.3e}) vanish at t = {t:?}"
            ),
        });
    }

    let sym_outer = |diag: f64, off: f64| -> Mat4 {
        [
            [diag, 0.0, 0.0, off],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [off, 0.0, 0.0, diag],
        ]
    };
    let sym_inner = |diag: f64, off: f64| -> Mat4 {
        [
            [0.0, 0.0, 0.0, 0.0],
            [0.0, diag, off, 0.0],
            [0.0, off, diag, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]
    };
    let add = |a: Mat4, b: Mat4| -> Mat4 {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = a[i][j] + b[i][j];
            }
        }
        out
    };

    let l1 = add(
        sym_outer((t.t11 - t.t22) / d_outer, -(t.t33 + 1.0) / d_outer),
        sym_inner((t.t11 + t.t22) / d_inner, (t.t33 - 1.0) / d_inner),
    );
    let l2 = add(
        sym_outer((t.t22 - t.t11) / d_outer, (t.t33 + 1.0) / d_outer),
        sym_inner((t.t11 + t.t22) / d_inner, (t.t33 - 1.0) / d_inner),
    );
    let l3 = add(
        sym_outer(-(t.t33 + 1.0) / d_outer, (t.t11 - t.t22) / d_outer),
        sym_inner((1.0 - t.t33) / d_inner, -(t.t11 + t.t22) / d_inner),
    );
    Ok(SldTriple { l1, l2, l3 })
}

/// Helstrom quantum Fisher metric in closed form, `g = M(t) / Delta(t)` with
/// the cyclic numerator matrix `M`. Fails when `Delta < 1e-24` (boundary).
pub fn quantum_fisher(t: &TVector) -> Result<MetricTensor> {
    let d = delta(t);
    if d < 1e-24 {
        return Err(Error::SingularState {
            detail: format!("Delta = {d:.3e} at t = {t:?}"),
        });
    }
    let norm_sq = t.norm_sq();
    let diag = 1.0 - norm_sq - 2.0 * t.t11 * t.t22 * t.t33;
    let m12 = (1.0 + norm_sq - 2.0 * t.t33 * t.t33) * t.t33 + 2.0 * t.t11 * t.t22;
    let m13 = (1.0 + norm_sq - 2.0 * t.t22 * t.t22) * t.t22 + 2.0 * t.t11 * t.t33;
    let m23 = (1.0 + norm_sq - 2.0 * t.t11 * t.t11) * t.t11 + 2.0 * t.t22 * t.t33;
    Ok(MetricTensor {
        g11: diag / d,
        g22: diag / d,
        g33: diag / d,
        g12: m12 / d,
        g13: m13 / d,
        g23: m23 / d,
    })
}

/// Helstrom metric by its defining trace form,
/// `g_ij = Tr(L_i L_j rho + L_j L_i rho) / 2`; the slow independent route.
pub fn quantum_fisher_from_sld(t: &TVector) -> Result<MetricTensor> {
    let sld = sld_operators(t)?;
    let rho = t.density_matrix().real_part();
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let lij = mat4_mul(sld.get(i), sld.get(j));
            let lji = mat4_mul(sld.get(j), sld.get(i));
            let val = 0.5 * (mat4_trace(&mat4_mul(&lij, &rho)) + mat4_trace(&mat4_mul(&lji, &rho)));
            g[i][j] = val;
            g[j][i] = val;
        }
    }
    Ok(MetricTensor::from_matrix(g))
}

/// Wigner-Yanase metric `g_ij = 4 sum_k (d_i sqrt(lam_k)) (d_j sqrt(lam_k))`,
/// computed through the Bell spectrum (the eigenvectors are constant, so the
/// derivative of `sqrt(rho)` is diagonal in the Bell basis). Coincides with
/// the Helstrom metric on this family. Fails when an eigenvalue drops below
/// `1e-12`.
pub fn wigner_yanase(t: &TVector) -> Result<MetricTensor> {
    let spectrum = t.bell_spectrum();
    if spectrum.min() < 1e-12 {
        return Err(Error::SingularState {
            detail: format!(
                "Bell eigenvalue {:.3e} below 1e-12 at t = {t:?}",
                spectrum.min()
            ),
        });
    }
    let mut g = [[0.0; 3]; 3];
    for (k, lam) in spectrum.lam.iter().enumerate() {
        // d_i sqrt(lam_k) = s_ki / (8 sqrt(lam_k))
        let inv = 1.0 / (8.0 * lam.sqrt());
        let ds = [
            BELL_SIGNS[k][0] * inv,
            BELL_SIGNS[k][1] * inv,
            BELL_SIGNS[k][2] * inv,
        ];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] += 4.0 * ds[i] * ds[j];
            }
        }
    }
    Ok(MetricTensor::from_matrix(g))
}
