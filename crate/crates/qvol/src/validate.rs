//! The runnable invariant suite behind `qvol validate`: every identity the
//! library is built on, checked with measured residuals.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{
    face_distance, in_tetrahedron, sample_tetrahedron, Region, OCTAHEDRON_VOLUME,
    TETRAHEDRON_VOLUME,
};
use crate::linalg::sym_eigenvalues;
use crate::metrics::{
    classical_fisher, classical_fisher_rotated, delta, husimi_norm, quantum_fisher,
    quantum_fisher_from_sld, wigner_yanase, MetricTensor, QuadratureGrid,
};
use crate::state::{SpecialUnitary2, TVector};
use crate::volume::{volume, Integrand, McConfig};
use crate::Result;

/// Options for a validation run.
#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    /// Reduced sample counts, for fast iteration and CI.
    pub quick: bool,
    pub seed: u64,
    /// Test hook: flips the sign of one off-diagonal entry of the closed-form
    /// quantum metric inside the determinant-identity check, which must make
    /// that check fail. Verifies the suite can actually catch a defect.
    pub inject_sign_flip: bool,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            quick: false,
            seed: 7,
            inject_sign_flip: false,
            n_theta: 24,
            n_phi: 32,
        }
    }
}

/// Outcome of a single check. `residual` must stay below `threshold`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &'static str, residual: f64, threshold: f64) -> Self {
        Self {
            name,
            residual,
            threshold,
            passed: residual < threshold,
        }
    }
}

fn interior_point(rng: &mut ChaCha8Rng, min_face_distance: f64) -> TVector {
    loop {
        let t = sample_tetrahedron(rng);
        if face_distance(&t) > min_face_distance {
            return t;
        }
    }
}

/// The 24 parameter isometries induced by local unitaries that keep the
/// correlation matrix diagonal: coordinate permutations composed with an even
/// number of sign flips.
pub fn signed_permutation_isometries() -> Vec<[[f64; 3]; 3]> {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let signs = [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ];
    let mut out = Vec::with_capacity(24);
    for perm in perms {
        for sign in signs {
            let mut m = [[0.0; 3]; 3];
            for i in 0..3 {
                m[i][perm[i]] = sign[i];
            }
            out.push(m);
        }
    }
    out
}

pub fn apply3(m: &[[f64; 3]; 3], t: &TVector) -> TVector {
    let v = t.as_array();
    TVector::new(
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    )
}

/// Runs the whole suite and returns one result per check.
pub fn run_suite(opts: &ValidationOptions) -> Result<Vec<CheckResult>> {
    let grid = QuadratureGrid::new(opts.n_theta, opts.n_phi)?;
    let mut checks = Vec::new();
    let scale = |full: usize, quick: usize| if opts.quick { quick } else { full };

    // Husimi density: quadrature normalization and positivity on the grid.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut max_dev: f64 = 0.0;
        let mut min_density = f64::INFINITY;
        for _ in 0..scale(100, 10) {
            let t = interior_point(&mut rng, 1e-6);
            max_dev = max_dev.max((husimi_norm(&grid, &t) - 1.0).abs());
            min_density = min_density.min(grid.min_husimi_value(&t));
        }
        checks.push(CheckResult::new("husimi-normalization", max_dev, 1e-10));
        checks.push(CheckResult::new(
            "husimi-grid-positivity",
            -min_density,
            0.0,
        ));
    }

    // Classical metric at the maximally mixed state: (1/9) I.
    {
        let g = classical_fisher(&grid, &TVector::new(0.0, 0.0, 0.0), 1e-6)?;
        let mut target = MetricTensor::identity();
        target.g11 = 1.0 / 9.0;
        target.g22 = 1.0 / 9.0;
        target.g33 = 1.0 / 9.0;
        checks.push(CheckResult::new(
            "classical-center-identity",
            g.max_abs_diff(&target),
            1e-8,
        ));
    }

    // Bell spectrum against dense eigendecomposition.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
        let mut max_dev: f64 = 0.0;
        for _ in 0..scale(1000, 100) {
            let t = sample_tetrahedron(&mut rng);
            let spec = t.bell_spectrum().sorted();
            let eig = sym_eigenvalues(t.density_matrix().real_part());
            for k in 0..4 {
                max_dev = max_dev.max((spec[k] - eig[k]).abs());
            }
        }
        checks.push(CheckResult::new("bell-spectrum-oracle", max_dev, 1e-10));
    }

    // Tetrahedron membership must match the spectrum sign on the cube.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(2));
        let mut mismatches = 0usize;
        for _ in 0..scale(10_000, 2_000) {
            let t = TVector::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            if in_tetrahedron(&t) != (t.bell_spectrum().min() >= -1e-14) {
                mismatches += 1;
            }
        }
        checks.push(CheckResult::new(
            "membership-spectrum-equivalence",
            mismatches as f64,
            0.5,
        ));
    }

    // Wigner-Yanase/Helstrom coincidence, determinant identity and the
    // three-route equivalence for the quantum metrics.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(3));
        let mut prop2: f64 = 0.0;
        let mut det_delta: f64 = 0.0;
        let mut routes: f64 = 0.0;
        for _ in 0..scale(1000, 100) {
            let t = interior_point(&mut rng, 0.01);
            let closed = quantum_fisher(&t)?;
            let wy = wigner_yanase(&t)?;
            let traced = quantum_fisher_from_sld(&t)?;
            prop2 = prop2.max(wy.max_abs_diff(&closed));
            routes = routes
                .max(closed.max_abs_diff(&traced))
                .max(wy.max_abs_diff(&traced));
            let mut checked = closed;
            if opts.inject_sign_flip {
                checked.g12 = -checked.g12;
            }
            det_delta = det_delta.max((checked.det() * delta(&t) - 1.0).abs());
        }
        checks.push(CheckResult::new("wigner-yanase-helstrom-identity", prop2, 1e-10));
        checks.push(CheckResult::new("det-delta-identity", det_delta, 1e-10));
        checks.push(CheckResult::new("metric-route-equivalence", routes, 1e-10));
    }

    // Volume densities are invariant under the 24 diagonal-preserving
    // parameter isometries.
    {
        let isometries = signed_permutation_isometries();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(4));
        let mut classical_dev: f64 = 0.0;
        let mut quantum_dev: f64 = 0.0;
        for _ in 0..scale(50, 3) {
            let t = interior_point(&mut rng, 0.1);
            let base_classical = classical_fisher(&grid, &t, 1e-6)?.sqrt_det();
            let base_quantum = quantum_fisher(&t)?.sqrt_det();
            for m in &isometries {
                let tt = apply3(m, &t);
                classical_dev = classical_dev
                    .max((classical_fisher(&grid, &tt, 1e-6)?.sqrt_det() - base_classical).abs());
                quantum_dev =
                    quantum_dev.max((quantum_fisher(&tt)?.sqrt_det() - base_quantum).abs());
            }
        }
        checks.push(CheckResult::new(
            "discrete-symmetry-classical",
            classical_dev,
            1e-7,
        ));
        checks.push(CheckResult::new(
            "discrete-symmetry-quantum",
            quantum_dev,
            1e-7,
        ));
    }

    // Chain-rule congruence for arbitrary rotations.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(5));
        let mut max_dev: f64 = 0.0;
        for _ in 0..scale(10, 2) {
            let rot = SpecialUnitary2::haar(&mut rng).to_rotation()?;
            let t = loop {
                let cand = sample_tetrahedron(&mut rng);
                if cand.norm_sq().sqrt() < 0.5 {
                    break cand;
                }
            };
            let direct = classical_fisher_rotated(&grid, &t, &rot, 1e-6)?;
            let pulled = classical_fisher(&grid, &t.rotated(&rot), 1e-6)?
                .congruence(&rot.transpose());
            max_dev = max_dev.max(direct.max_abs_diff(&pulled));
        }
        checks.push(CheckResult::new("chain-rule-congruence", max_dev, 1e-7));
    }

    // SLD defining equation and commutation with the state.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(6));
        let mut max_dev: f64 = 0.0;
        for _ in 0..scale(100, 20) {
            let t = interior_point(&mut rng, 0.01);
            let sld = crate::metrics::sld_operators(&t)?;
            let rho = t.density_matrix().real_part();
            for i in 0..3 {
                let li = sld.get(i);
                let lr = crate::linalg::mat4_mul(li, &rho);
                let rl = crate::linalg::mat4_mul(&rho, li);
                let target = crate::metrics::rho_partial(i);
                for r in 0..4 {
                    for c in 0..4 {
                        max_dev = max_dev.max((0.5 * (lr[r][c] + rl[r][c]) - target[r][c]).abs());
                        max_dev = max_dev.max((lr[r][c] - rl[r][c]).abs());
                    }
                }
            }
        }
        checks.push(CheckResult::new("sld-equation-residual", max_dev, 1e-10));
    }

    // Positive definiteness away from the boundary.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(7));
        let mut min_eig = f64::INFINITY;
        for _ in 0..scale(200, 40) {
            let t = interior_point(&mut rng, 1e-3);
            min_eig = min_eig.min(quantum_fisher(&t)?.min_eigenvalue());
            min_eig = min_eig.min(wigner_yanase(&t)?.min_eigenvalue());
        }
        for _ in 0..scale(20, 5) {
            let t = interior_point(&mut rng, 1e-3);
            min_eig = min_eig.min(classical_fisher(&grid, &t, 1e-6)?.min_eigenvalue());
        }
        checks.push(CheckResult::new("metric-positive-definite", -min_eig, 0.0));
    }

    // Euclidean volume recovery with the constant integrand.
    {
        let cfg = McConfig {
            samples: scale(1_000_000, 100_000) as u64,
            seed: opts.seed,
            margin: crate::volume::DEFAULT_MC_MARGIN,
        };
        let tetra = volume(Region::Tetrahedron, &Integrand::EuclideanUnit, &cfg)?;
        let octa = volume(Region::Octahedron, &Integrand::EuclideanUnit, &cfg)?;
        let p = OCTAHEDRON_VOLUME / TETRAHEDRON_VOLUME;
        let sigma = TETRAHEDRON_VOLUME * (p * (1.0 - p) / cfg.samples as f64).sqrt();
        let dev_t = (tetra.value - TETRAHEDRON_VOLUME).abs() / sigma;
        let dev_o = (octa.value - OCTAHEDRON_VOLUME).abs() / sigma;
        checks.push(CheckResult::new(
            "euclidean-volume-recovery",
            dev_t.max(dev_o),
            4.0,
        ));
    }

    Ok(checks)
}
