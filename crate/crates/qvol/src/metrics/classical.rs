//! Classical Fisher-Rao metric of the Husimi distribution.
//!
//! The Husimi density of a state is, up to the `1/(16 pi^2)` normalization,
//! `q = 1 + t11 b1 + t22 b2 + t33 b3` with the fixed basis functions
//! `b1 = sin(th1) sin(th2) cos(ph1) cos(ph2)`,
//! `b2 = sin(th1) sin(th2) sin(ph1) sin(ph2)`, `b3 = cos(th1) cos(th2)`.
//! Since the density is affine in `t`, its partial derivatives are the basis
//! functions themselves and the metric reduces to weighted Gram integrals
//! `g_ij = int b_i b_j / q dmu`, evaluated on a tensor grid: Gauss-Legendre in
//! `cos th` (the azimuthal average turns the integrand into an analytic
//! function of `cos th`), uniform periodic nodes in `ph`.
//!
//! Reference measure: `dmu = sin(th1) sin(th2) dth1 dth2 dph1 dph2`, under
//! which the Husimi density integrates to exactly 1.

use crate::error::{Error, Result};
use crate::geometry::face_distance;
use crate::metrics::{MetricTensor, PhasePoint};
use crate::state::{Rotation3, TVector};

/// Default interior margin (Euclidean face distance) required by
/// [`classical_fisher`].
pub const DEFAULT_METRIC_MARGIN: f64 = 1e-6;

const SIXTEEN_PI_SQ: f64 = 16.0 * std::f64::consts::PI * std::f64::consts::PI;

/// Husimi density at a phase-space point. Strictly positive for `t` in the
/// interior of the tetrahedron; outside, this is the raw affine value.
pub fn husimi_q(t: &TVector, x: &PhasePoint) -> f64 {
    let (s1, c1) = x.theta1.sin_cos();
    let (s2, c2) = x.theta2.sin_cos();
    let q = 1.0
        + t.t11 * s1 * s2 * x.phi1.cos() * x.phi2.cos()
        + t.t22 * s1 * s2 * x.phi1.sin() * x.phi2.sin()
        + t.t33 * c1 * c2;
    q / SIXTEEN_PI_SQ
}

/// Precomputed tensor-product quadrature nodes and weights.
///
/// Immutable after construction; shared read-only across workers.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    n_theta: usize,
    n_phi: usize,
    /// Gauss-Legendre nodes in `u = cos th` on [-1, 1].
    u: Vec<f64>,
    /// `sin th = sqrt(1 - u^2)` per node.
    s: Vec<f64>,
    /// Gauss-Legendre weights.
    w: Vec<f64>,
    cos_phi: Vec<f64>,
    sin_phi: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 4 {
            return Err(Error::InvalidArgument(format!(
                "quadrature sizes too small: need n_theta >= 2 and n_phi >= 4, got ({n_theta}, {n_phi})"
            )));
        }
        let (u, w) = gauss_legendre(n_theta);
        let s = u.iter().map(|&x| (1.0 - x * x).max(0.0).sqrt()).collect();
        let mut cos_phi = Vec::with_capacity(n_phi);
        let mut sin_phi = Vec::with_capacity(n_phi);
        for j in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            cos_phi.push(phi.cos());
            sin_phi.push(phi.sin());
        }
        Ok(Self {
            n_theta,
            n_phi,
            u,
            s,
            w,
            cos_phi,
            sin_phi,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    /// Total node count of the 4D tensor grid.
    pub fn node_count(&self) -> usize {
        self.n_theta * self.n_theta * self.n_phi * self.n_phi
    }

    /// Deviation of the discrete reference-measure mass from 1.
    pub fn normalization_residual(&self) -> f64 {
        let sum_w: f64 = self.w.iter().sum();
        let mass = sum_w * sum_w * 0.25;
        (mass - 1.0).abs()
    }

    /// Minimum of the (unnormalized) Husimi density over all grid nodes.
    pub fn min_husimi_value(&self, t: &TVector) -> f64 {
        let mut min_q = f64::INFINITY;
        for i1 in 0..self.n_theta {
            for i2 in 0..self.n_theta {
                let st = self.s[i1] * self.s[i2];
                let base = 1.0 + t.t33 * self.u[i1] * self.u[i2];
                for j1 in 0..self.n_phi {
                    let a = st * t.t11 * self.cos_phi[j1];
                    let b = st * t.t22 * self.sin_phi[j1];
                    for j2 in 0..self.n_phi {
                        let q = base + a * self.cos_phi[j2] + b * self.sin_phi[j2];
                        if q < min_q {
                            min_q = q;
                        }
                    }
                }
            }
        }
        min_q
    }
}

/// Quadrature estimate of the Husimi normalization integral; equals 1 up to
/// rounding for every `t`.
pub fn husimi_norm(grid: &QuadratureGrid, t: &TVector) -> f64 {
    let mut norm = 0.0;
    for i1 in 0..grid.n_theta {
        for i2 in 0..grid.n_theta {
            let st = grid.s[i1] * grid.s[i2];
            let base = 1.0 + t.t33 * grid.u[i1] * grid.u[i2];
            let wt = grid.w[i1] * grid.w[i2];
            let mut block = 0.0;
            for j1 in 0..grid.n_phi {
                let a = st * t.t11 * grid.cos_phi[j1];
                let b = st * t.t22 * grid.sin_phi[j1];
                let mut row = 0.0;
                for j2 in 0..grid.n_phi {
                    row += base + a * grid.cos_phi[j2] + b * grid.sin_phi[j2];
                }
                block += row;
            }
            norm += wt * block;
        }
    }
    norm / (4.0 * (grid.n_phi * grid.n_phi) as f64)
}

/// Fisher-Rao metric by quadrature with no domain guard: valid whenever the
/// Husimi density is positive at every node (the whole open cube `|t_ii| < 1`,
/// not just the tetrahedron).
pub fn classical_fisher_raw(grid: &QuadratureGrid, t: &TVector) -> Result<MetricTensor> {
    let mut g11 = 0.0;
    let mut g22 = 0.0;
    let mut g33 = 0.0;
    let mut g12 = 0.0;
    let mut g13 = 0.0;
    let mut g23 = 0.0;
    let mut min_q = f64::INFINITY;

    for i1 in 0..grid.n_theta {
        for i2 in 0..grid.n_theta {
            let st = grid.s[i1] * grid.s[i2];
            let ut = grid.u[i1] * grid.u[i2];
            let base = 1.0 + t.t33 * ut;
            let wt = grid.w[i1] * grid.w[i2];

            let mut s_r = 0.0;
            let mut s_v1 = 0.0;
            let mut s_v2 = 0.0;
            let mut s_v11 = 0.0;
            let mut s_v22 = 0.0;
            let mut s_v12 = 0.0;

            for j1 in 0..grid.n_phi {
                let stc1 = st * grid.cos_phi[j1];
                let sts1 = st * grid.sin_phi[j1];
                let a = t.t11 * stc1;
                let b = t.t22 * sts1;
                for j2 in 0..grid.n_phi {
                    let q = base + a * grid.cos_phi[j2] + b * grid.sin_phi[j2];
                    if q < min_q {
                        min_q = q;
                    }
                    let b1 = stc1 * grid.cos_phi[j2];
                    let b2 = sts1 * grid.sin_phi[j2];
                    let r = 1.0 / q;
                    let v1 = r * b1;
                    let v2 = r * b2;
                    s_r += r;
                    s_v1 += v1;
                    s_v2 += v2;
                    s_v11 += v1 * b1;
                    s_v22 += v2 * b2;
                    s_v12 += v1 * b2;
                }
            }

            g11 += wt * s_v11;
            g22 += wt * s_v22;
            g12 += wt * s_v12;
            g13 += wt * ut * s_v1;
            g23 += wt * ut * s_v2;
            g33 += wt * ut * ut * s_r;
        }
    }

    if min_q.is_nan() || min_q <= 0.0 {
        return Err(Error::NonFiniteIntegrand {
            detail: format!("Husimi density reaches {min_q:.3e} <= 0 on the grid at t = {t:?}"),
        });
    }

    let scale = 1.0 / (4.0 * (grid.n_phi * grid.n_phi) as f64);
    Ok(MetricTensor {
        g11: g11 * scale,
        g22: g22 * scale,
        g33: g33 * scale,
        g12: g12 * scale,
        g13: g13 * scale,
        g23: g23 * scale,
    })
}

/// Fisher-Rao metric at a point strictly inside the tetrahedron.
///
/// Fails with a near-boundary error when the Euclidean face distance does not
/// exceed `margin`, and with a non-finite-integrand error if the density is
/// not positive at every node.
pub fn classical_fisher(grid: &QuadratureGrid, t: &TVector, margin: f64) -> Result<MetricTensor> {
    let distance = face_distance(t);
    if distance <= margin {
        return Err(Error::NearBoundary { distance, margin });
    }
    classical_fisher_raw(grid, t)
}

/// Fisher metric of the reparametrized family `s -> Q_{O s}` at `s = t`,
/// evaluated by quadrature with the rotated basis functions. Used to exercise
/// the congruence identity `g_direct = O^T g(O t) O`.
pub fn classical_fisher_rotated(
    grid: &QuadratureGrid,
    t: &TVector,
    rot: &Rotation3,
    margin: f64,
) -> Result<MetricTensor> {
    let tp = t.rotated(rot);
    let distance = face_distance(&tp);
    if distance <= margin {
        return Err(Error::NearBoundary { distance, margin });
    }

    let mut g = [[0.0_f64; 3]; 3];
    let mut min_q = f64::INFINITY;
    for i1 in 0..grid.n_theta {
        for i2 in 0..grid.n_theta {
            let st = grid.s[i1] * grid.s[i2];
            let ut = grid.u[i1] * grid.u[i2];
            let base = 1.0 + tp.t33 * ut;
            let wt = grid.w[i1] * grid.w[i2];
            let mut block = [[0.0_f64; 3]; 3];
            for j1 in 0..grid.n_phi {
                let stc1 = st * grid.cos_phi[j1];
                let sts1 = st * grid.sin_phi[j1];
                let a = tp.t11 * stc1;
                let b = tp.t22 * sts1;
                for j2 in 0..grid.n_phi {
                    let q = base + a * grid.cos_phi[j2] + b * grid.sin_phi[j2];
                    if q < min_q {
                        min_q = q;
                    }
                    let bas = [stc1 * grid.cos_phi[j2], sts1 * grid.sin_phi[j2], ut];
                    // Rotated basis: bp_i = sum_m O_mi b_m.
                    let mut bp = [0.0; 3];
                    for i in 0..3 {
                        bp[i] =
                            rot.m[0][i] * bas[0] + rot.m[1][i] * bas[1] + rot.m[2][i] * bas[2];
                    }
                    let r = 1.0 / q;
                    for i in 0..3 {
                        for j in i..3 {
                            block[i][j] += r * bp[i] * bp[j];
                        }
                    }
                }
            }
            for i in 0..3 {
                for j in i..3 {
                    g[i][j] += wt * block[i][j];
                }
            }
        }
    }

    if min_q.is_nan() || min_q <= 0.0 {
        return Err(Error::NonFiniteIntegrand {
            detail: format!("Husimi density reaches {min_q:.3e} <= 0 on the grid at t = {tp:?}"),
        });
    }

    let scale = 1.0 / (4.0 * (grid.n_phi * grid.n_phi) as f64);
    for row in &mut g {
        for v in row.iter_mut() {
            *v *= scale;
        }
    }
    g[1][0] = g[0][1];
    g[2][0] = g[0][2];
    g[2][1] = g[1][2];
    Ok(MetricTensor::from_matrix(g))
}

/// Gauss-Legendre nodes and weights on [-1, 1], exactly symmetric about 0.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for k in 0..half {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(n, x);
            let slope = n as f64 * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / slope;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (p, p_prev) = legendre_pair(n, x);
        let pp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
        let wk = 2.0 / ((1.0 - x * x) * pp * pp);
        if n % 2 == 1 && k == half - 1 {
            nodes[k] = 0.0;
            weights[k] = wk;
        } else {
            nodes[k] = x;
            weights[k] = wk;
            nodes[n - 1 - k] = -x;
            weights[n - 1 - k] = wk;
        }
    }
    (nodes, weights)
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}
