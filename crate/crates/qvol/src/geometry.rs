//! The state tetrahedron, the separability octahedron, purity shells and
//! uniform samplers over each of them.

use rand::RngExt;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::state::TVector;

/// Vertices of the state tetrahedron.
pub const TETRA_VERTICES: [[f64; 3]; 4] = [
    [-1.0, -1.0, -1.0],
    [-1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0],
    [1.0, 1.0, -1.0],
];

/// Euclidean volume of the state tetrahedron.
pub const TETRAHEDRON_VOLUME: f64 = 8.0 / 3.0;
/// Euclidean volume of the separability octahedron (unit l1 ball).
pub const OCTAHEDRON_VOLUME: f64 = 4.0 / 3.0;

/// Integration domain selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Tetrahedron,
    Octahedron,
}

impl Region {
    pub fn contains(&self, t: &TVector) -> bool {
        match self {
            Region::Tetrahedron => in_tetrahedron(t),
            Region::Octahedron => in_octahedron(t),
        }
    }

    pub fn euclidean_volume(&self) -> f64 {
        match self {
            Region::Tetrahedron => TETRAHEDRON_VOLUME,
            Region::Octahedron => OCTAHEDRON_VOLUME,
        }
    }
}

/// The four tetrahedron face values `1 -t11-t22-t33`, `1 -t11+t22+t33`,
/// `1 +t11-t22+t33`, `1 +t11+t22-t33`; all nonnegative exactly on the
/// tetrahedron, and each equals four times one Bell eigenvalue.
pub fn tetra_face_values(t: &TVector) -> [f64; 4] {
    [
        1.0 - t.t11 - t.t22 - t.t33,
        1.0 - t.t11 + t.t22 + t.t33,
        1.0 + t.t11 - t.t22 + t.t33,
        1.0 + t.t11 + t.t22 - t.t33,
    ]
}

/// Signed Euclidean distance from `t` to the nearest tetrahedron face plane;
/// positive inside, negative outside.
pub fn face_distance(t: &TVector) -> f64 {
    let faces = tetra_face_values(t);
    let min = faces.iter().cloned().fold(f64::INFINITY, f64::min);
    min / 3.0_f64.sqrt()
}

/// Closed-region membership in the state tetrahedron.
pub fn in_tetrahedron(t: &TVector) -> bool {
    tetra_face_values(t).iter().all(|&f| f >= 0.0)
}

/// Closed-region membership in the separability octahedron, written as the
/// eight half-space conditions `1 +- t11 +- t22 +- t33 >= 0`.
pub fn in_octahedron(t: &TVector) -> bool {
    for s1 in [-1.0, 1.0] {
        for s2 in [-1.0, 1.0] {
            for s3 in [-1.0, 1.0] {
                if 1.0 + s1 * t.t11 + s2 * t.t22 + s3 * t.t33 < 0.0 {
                    return false;
                }
            }
        }
    }
    true
}

/// A fixed-purity shell: the sphere of radius `sqrt(4P - 1)` in parameter
/// space on which every state has purity `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityShell {
    pub purity: f64,
    pub radius: f64,
}

impl PurityShell {
    pub fn new(purity: f64) -> Result<Self> {
        Ok(Self {
            purity,
            radius: shell_radius(purity)?,
        })
    }

    /// Surface area of the shell, the reference measure for shell estimates.
    pub fn area(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.radius * self.radius
    }
}

/// Radius `sqrt(4P - 1)` of the sphere of purity `P`; rejects `P` outside
/// `[1/4, 1]`.
pub fn shell_radius(purity: f64) -> Result<f64> {
    if !(0.25..=1.0).contains(&purity) {
        return Err(Error::UnphysicalPurity { p: purity });
    }
    Ok((4.0 * purity - 1.0).sqrt())
}

/// Uniform sample from the state tetrahedron via normalized unit-exponential
/// barycentric weights (rejection-free).
pub fn sample_tetrahedron<R: RngExt + ?Sized>(rng: &mut R) -> TVector {
    let mut w = [0.0; 4];
    let mut total = 0.0;
    for wk in &mut w {
        let u: f64 = rng.random();
        *wk = -(1.0 - u).ln();
        total += *wk;
    }
    let mut t = [0.0; 3];
    for (wk, v) in w.iter().zip(TETRA_VERTICES.iter()) {
        let frac = wk / total;
        for i in 0..3 {
            t[i] += frac * v[i];
        }
    }
    TVector::new(t[0], t[1], t[2])
}

/// Uniform sample from the sphere of radius `r` (normalized Gaussian triple).
/// The constant area weight `4 pi r^2` is the caller's responsibility.
pub fn sample_sphere<R: RngExt + ?Sized>(rng: &mut R, radius: f64) -> TVector {
    loop {
        let g: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        if norm > 1e-12 {
            let scale = radius / norm;
            return TVector::new(g[0] * scale, g[1] * scale, g[2] * scale);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cube_point(rng: &mut ChaCha8Rng) -> TVector {
        TVector::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
    }

    #[test]
    fn tetrahedron_membership_examples() {
        assert!(in_tetrahedron(&TVector::new(0.0, 0.0, 0.0)));
        assert!(in_tetrahedron(&TVector::new(1.0, 1.0, -1.0)));
        assert!(!in_tetrahedron(&TVector::new(1.0, 1.0, 1.0)));
        for v in TETRA_VERTICES {
            assert!(in_tetrahedron(&v.into()));
        }
    }

    #[test]
    fn octahedron_membership_examples() {
        assert!(in_octahedron(&TVector::new(0.0, 0.0, 0.0)));
        let entangled = TVector::new(0.9, 0.9, -0.9);
        assert!(!in_octahedron(&entangled));
        assert!(in_tetrahedron(&entangled));
        assert!(in_octahedron(&TVector::new(
            1.0 / 3.0,
            1.0 / 3.0,
            -1.0 / 3.0
        )));
    }

    #[test]
    fn octahedron_is_l1_ball_and_inside_tetrahedron() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100_000 {
            let t = cube_point(&mut rng);
            let l1 = t.t11.abs() + t.t22.abs() + t.t33.abs();
            assert_eq!(in_octahedron(&t), l1 <= 1.0);
            if in_octahedron(&t) {
                assert!(in_tetrahedron(&t));
            }
        }
    }

    #[test]
    fn membership_matches_spectrum_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100_000 {
            let t = cube_point(&mut rng);
            let min_lam = t.bell_spectrum().min();
            assert_eq!(in_tetrahedron(&t), min_lam >= -1e-14);
        }
    }

    #[test]
    fn tetrahedron_sampler_stays_inside_with_zero_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let mut mean = [0.0; 3];
        for _ in 0..n {
            let t = sample_tetrahedron(&mut rng);
            assert!(in_tetrahedron(&t));
            mean[0] += t.t11;
            mean[1] += t.t22;
            mean[2] += t.t33;
        }
        // Per-coordinate variance on the tetrahedron is 1/5, so sigma of the
        // mean is sqrt(0.2/n).
        let tol = 4.0 * (0.2 / n as f64).sqrt();
        for m in mean {
            assert!((m / n as f64).abs() < tol);
        }
    }

    #[test]
    fn octahedron_fraction_of_tetrahedron_samples() {
        // vol(octahedron) / vol(tetrahedron) = (4/3) / (8/3) = 1/2.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 1_000_000;
        let mut hits = 0u64;
        for _ in 0..n {
            if in_octahedron(&sample_tetrahedron(&mut rng)) {
                hits += 1;
            }
        }
        let frac = hits as f64 / n as f64;
        let sigma = (0.5 * 0.5 / n as f64).sqrt();
        assert!((frac - 0.5).abs() < 4.0 * sigma, "fraction {frac}");
    }

    #[test]
    fn euclidean_volumes_by_hit_counting() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 10_000_000;
        let mut tetra = 0u64;
        let mut octa = 0u64;
        for _ in 0..n {
            let t = cube_point(&mut rng);
            if in_tetrahedron(&t) {
                tetra += 1;
            }
            if in_octahedron(&t) {
                octa += 1;
            }
        }
        let nf = n as f64;
        let vol_t = 8.0 * tetra as f64 / nf;
        let vol_o = 8.0 * octa as f64 / nf;
        let p_t = TETRAHEDRON_VOLUME / 8.0;
        let p_o = OCTAHEDRON_VOLUME / 8.0;
        let sig_t = 8.0 * (p_t * (1.0 - p_t) / nf).sqrt();
        let sig_o = 8.0 * (p_o * (1.0 - p_o) / nf).sqrt();
        assert!((vol_t - TETRAHEDRON_VOLUME).abs() < 4.0 * sig_t, "{vol_t}");
        assert!((vol_o - OCTAHEDRON_VOLUME).abs() < 4.0 * sig_o, "{vol_o}");
    }

    #[test]
    fn sphere_sampler_norm_and_region_thresholds() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let inradius = 1.0 / 3.0_f64.sqrt();
        for _ in 0..10_000 {
            let r = inradius - 1e-9;
            let t = sample_sphere(&mut rng, r);
            assert!((t.norm_sq().sqrt() - r).abs() < 1e-12);
            assert!(in_tetrahedron(&t) && in_octahedron(&t));
        }
        for _ in 0..10_000 {
            let t = sample_sphere(&mut rng, 1.0 + 1e-9);
            assert!(!in_octahedron(&t));
        }
        for _ in 0..10_000 {
            let t = sample_sphere(&mut rng, 3.0_f64.sqrt() * (1.0 + 1e-9));
            assert!(!in_tetrahedron(&t));
        }
    }

    #[test]
    fn shell_radius_examples_and_range() {
        assert_eq!(shell_radius(0.25).unwrap(), 0.0);
        assert!((shell_radius(1.0 / 3.0).unwrap() - 1.0 / 3.0_f64.sqrt()).abs() < 1e-15);
        assert!((shell_radius(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            shell_radius(0.2),
            Err(Error::UnphysicalPurity { .. })
        ));
        assert!(matches!(
            shell_radius(1.1),
            Err(Error::UnphysicalPurity { .. })
        ));
    }

    #[test]
    fn face_distance_signs() {
        assert!((face_distance(&TVector::new(0.0, 0.0, 0.0)) - 1.0 / 3.0_f64.sqrt()).abs() < 1e-15);
        assert!(face_distance(&TVector::new(1.0, 1.0, -1.0)).abs() < 1e-15);
        assert!(face_distance(&TVector::new(1.0, 1.0, 1.0)) < 0.0);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn cube() -> impl Strategy<Value = TVector> {
            (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
                .prop_map(|(a, b, c)| TVector::new(a, b, c))
        }

        proptest! {
            #[test]
            fn octahedron_equals_l1_ball_and_nests_in_tetrahedron(t in cube()) {
                let l1 = t.t11.abs() + t.t22.abs() + t.t33.abs();
                prop_assert_eq!(in_octahedron(&t), l1 <= 1.0);
                if in_octahedron(&t) {
                    prop_assert!(in_tetrahedron(&t));
                }
            }

            #[test]
            fn spectrum_is_affine_partition_of_unity(t in cube()) {
                let spec = t.bell_spectrum();
                prop_assert!((spec.sum() - 1.0).abs() < 1e-14);
                prop_assert_eq!(in_tetrahedron(&t), spec.min() >= -1e-14);
            }

            #[test]
            fn face_values_are_four_times_eigenvalues(t in cube()) {
                let faces = tetra_face_values(&t);
                let spec = t.bell_spectrum();
                for (f, lam) in faces.iter().zip(spec.lam.iter()) {
                    prop_assert!((f - 4.0 * lam).abs() < 1e-14);
                }
            }
        }
    }
}
