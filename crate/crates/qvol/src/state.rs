//! Two-qubit states with maximally disordered subsystems.
//!
//! Both reduced states are maximally mixed, so a state is fixed entirely by the
//! diagonal correlation parameters `t = (t11, t22, t33)`. Every such density
//! matrix is diagonal in the Bell basis with eigenvectors independent of `t`,
//! which is what makes the closed-form quantum metrics in [`crate::metrics`]
//! possible.

use rand::RngExt;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{c, mat2_dagger, mat2_det, mat2_mul, mat2_trace, pauli, C64, Mat2};

/// Diagonal correlation parameters `(t11, t22, t33)` of a two-qubit state.
///
/// Any real triple is representable; the triple corresponds to a physical state
/// exactly when it lies in the state tetrahedron (see [`crate::geometry`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TVector {
    pub t11: f64,
    pub t22: f64,
    pub t33: f64,
}

/// Sign patterns of the four Bell eigenvalues: `lam_k = (1 + s_k . t) / 4`,
/// ordered as the Bell states `Psi-`, `Phi-`, `Phi+`, `Psi+`.
pub const BELL_SIGNS: [[f64; 3]; 4] = [
    [-1.0, -1.0, -1.0],
    [-1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0],
    [1.0, 1.0, -1.0],
];

impl TVector {
    pub fn new(t11: f64, t22: f64, t33: f64) -> Self {
        Self { t11, t22, t33 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.t11, self.t22, self.t33]
    }

    pub fn norm_sq(&self) -> f64 {
        self.t11 * self.t11 + self.t22 * self.t22 + self.t33 * self.t33
    }

    /// The 4x4 density matrix of this parameter triple in the canonical
    /// computational basis `|00>, |01>, |10>, |11>`.
    pub fn density_matrix(&self) -> DensityMatrix {
        let d_plus = (1.0 + self.t33) / 4.0;
        let d_minus = (1.0 - self.t33) / 4.0;
        let off_outer = (self.t11 - self.t22) / 4.0;
        let off_inner = (self.t11 + self.t22) / 4.0;
        let z = c(0.0, 0.0);
        let m = [
            [c(d_plus, 0.0), z, z, c(off_outer, 0.0)],
            [z, c(d_minus, 0.0), c(off_inner, 0.0), z],
            [z, c(off_inner, 0.0), c(d_minus, 0.0), z],
            [c(off_outer, 0.0), z, z, c(d_plus, 0.0)],
        ];
        DensityMatrix { m }
    }

    /// Eigenvalues of the density matrix in the fixed Bell-state order
    /// `Psi-`, `Phi-`, `Phi+`, `Psi+` (affine in `t`, not sorted by size).
    pub fn bell_spectrum(&self) -> BellSpectrum {
        let t = self.as_array();
        let mut lam = [0.0; 4];
        for (k, s) in BELL_SIGNS.iter().enumerate() {
            lam[k] = (1.0 + s[0] * t[0] + s[1] * t[1] + s[2] * t[2]) / 4.0;
        }
        BellSpectrum { lam }
    }

    /// Purity `Tr(rho^2) = (1 + |t|^2) / 4`.
    pub fn purity(&self) -> f64 {
        (1.0 + self.norm_sq()) / 4.0
    }

    /// The image `O t` under a rotation of parameter space.
    pub fn rotated(&self, rot: &Rotation3) -> TVector {
        let t = self.as_array();
        let mut out = [0.0; 3];
        for (i, row) in rot.m.iter().enumerate() {
            out[i] = row[0] * t[0] + row[1] * t[1] + row[2] * t[2];
        }
        TVector::new(out[0], out[1], out[2])
    }
}

impl From<[f64; 3]> for TVector {
    fn from(t: [f64; 3]) -> Self {
        TVector::new(t[0], t[1], t[2])
    }
}

/// Dense 4x4 complex density matrix. For this family all entries are real,
/// but the type keeps complex storage so unitary conjugation stays closed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub m: [[C64; 4]; 4],
}

impl DensityMatrix {
    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2] + self.m[3][3]
    }

    /// Largest deviation from Hermiticity, max |M_ij - conj(M_ji)|.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                r = r.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        r
    }

    /// Real part of the matrix; exact for this family, which has no imaginary
    /// entries in the canonical basis.
    pub fn real_part(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.m[i][j].re;
            }
        }
        out
    }

    pub fn purity(&self) -> f64 {
        let mut p = c(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                p += self.m[i][j] * self.m[j][i];
            }
        }
        p.re
    }
}

/// The four Bell-basis eigenvalues of a state, a probability vector when the
/// parameters are physical. Order: `Psi-`, `Phi-`, `Phi+`, `Psi+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSpectrum {
    pub lam: [f64; 4],
}

impl BellSpectrum {
    pub fn sum(&self) -> f64 {
        self.lam.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.lam.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Eigenvalues sorted ascending, for multiset comparisons.
    pub fn sorted(&self) -> [f64; 4] {
        let mut s = self.lam;
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s
    }
}

/// Proper rotation of the three correlation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    pub m: [[f64; 3]; 3],
}

impl Rotation3 {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn from_rows(m: [[f64; 3]; 3]) -> Self {
        Self { m }
    }

    /// Max entry of |O O^T - I|.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let mut dot = 0.0;
                for k in 0..3 {
                    dot += self.m[i][k] * self.m[j][k];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                r = r.max((dot - expect).abs());
            }
        }
        r
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn transpose(&self) -> Rotation3 {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.m[j][i];
            }
        }
        Rotation3 { m: out }
    }
}

/// A 2x2 special-unitary matrix, the local qubit transformations whose induced
/// parameter rotations drive the invariance checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialUnitary2 {
    pub m: Mat2,
}

impl SpecialUnitary2 {
    pub fn identity() -> Self {
        Self {
            m: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        }
    }

    /// Build from a unit quaternion: `U = q0 I + i (q1 s1 + q2 s2 + q3 s3)`.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        let [q0, q1, q2, q3] = q;
        Self {
            m: [
                [c(q0, q3), c(q2, q1)],
                [c(-q2, q1), c(q0, -q3)],
            ],
        }
    }

    /// Haar-distributed element: four standard normals normalized to a unit
    /// quaternion.
    pub fn haar<R: RngExt + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q: [f64; 4] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            let norm = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
            if norm > 1e-12 {
                return Self::from_quaternion([q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm]);
            }
        }
    }

    /// Max of |U^dag U - I| entries and |det U - 1|.
    pub fn unitarity_residual(&self) -> f64 {
        let ud = mat2_dagger(&self.m);
        let prod = mat2_mul(&ud, &self.m);
        let mut r: f64 = (mat2_det(&self.m) - c(1.0, 0.0)).norm();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                r = r.max((prod[i][j] - expect).norm());
            }
        }
        r
    }

    pub fn trace(&self) -> C64 {
        mat2_trace(&self.m)
    }

    /// The SO(3) rotation induced on Bloch vectors,
    /// `O_mn = Tr[s_m U s_n U^dag] / 2`.
    ///
    /// Rejects inputs whose unitarity residual exceeds `1e-10`.
    pub fn to_rotation(&self) -> Result<Rotation3> {
        let residual = self.unitarity_residual();
        if residual > 1e-10 {
            return Err(Error::NotUnitary { residual });
        }
        let ud = mat2_dagger(&self.m);
        let mut o = [[0.0; 3]; 3];
        for (nu, col) in (0..3).map(|nu| (nu, mat2_mul(&mat2_mul(&self.m, &pauli(nu)), &ud))) {
            for mu in 0..3 {
                let prod = mat2_mul(&pauli(mu), &col);
                o[mu][nu] = 0.5 * mat2_trace(&prod).re;
            }
        }
        Ok(Rotation3 { m: o })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigenvalues;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn density_of_origin_is_maximally_mixed() {
        let rho = TVector::new(0.0, 0.0, 0.0).density_matrix();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 0.25 } else { 0.0 };
                assert_close(rho.m[i][j].re, expect, 0.0);
                assert_close(rho.m[i][j].im, 0.0, 0.0);
            }
        }
    }

    #[test]
    fn density_of_vertex_is_bell_projector() {
        // (1,1,-1) is the projector onto (|01> + |10>)/sqrt(2).
        let rho = TVector::new(1.0, 1.0, -1.0).density_matrix();
        let mut expect = [[0.0; 4]; 4];
        expect[1][1] = 0.5;
        expect[1][2] = 0.5;
        expect[2][1] = 0.5;
        expect[2][2] = 0.5;
        for i in 0..4 {
            for j in 0..4 {
                assert_close(rho.m[i][j].re, expect[i][j], 1e-15);
            }
        }
        let eig = sym_eigenvalues(rho.real_part());
        assert_close(eig[3], 1.0, 1e-12);
        assert_close(eig[0], 0.0, 1e-12);
        assert_close(eig[2], 0.0, 1e-12);
    }

    #[test]
    fn density_of_z_aligned_point() {
        let rho = TVector::new(0.0, 0.0, 1.0).density_matrix();
        let expect = [0.5, 0.0, 0.0, 0.5];
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { expect[i] } else { 0.0 };
                assert_close(rho.m[i][j].re, e, 1e-15);
            }
        }
    }

    #[test]
    fn bell_spectrum_trivial_points() {
        let s = TVector::new(0.0, 0.0, 0.0).bell_spectrum();
        assert_eq!(s.lam, [0.25; 4]);

        let s = TVector::new(1.0, 1.0, -1.0).bell_spectrum();
        assert_eq!(s.sorted(), [0.0, 0.0, 0.0, 1.0]);

        let s = TVector::new(0.0, 0.0, 0.5).bell_spectrum();
        assert_eq!(s.sorted(), [0.125, 0.125, 0.375, 0.375]);
    }

    #[test]
    fn bell_spectrum_matches_eigendecomposition() {
        // Oracle: numerical eigenvalues of the density matrix.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 1000 {
            let t = crate::geometry::sample_tetrahedron(&mut rng);
            let spec = t.bell_spectrum().sorted();
            let eig = sym_eigenvalues(t.density_matrix().real_part());
            for k in 0..4 {
                assert_close(spec[k], eig[k], 1e-10);
            }
            checked += 1;
        }
    }

    #[test]
    fn spectrum_sums_to_one_and_purity_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let t = TVector::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let spec = t.bell_spectrum();
            assert_close(spec.sum(), 1.0, 1e-14);
            let sum_sq: f64 = spec.lam.iter().map(|l| l * l).sum();
            assert_close(t.purity(), sum_sq, 1e-12);
            assert_close(t.purity(), t.density_matrix().purity(), 1e-12);
        }
    }

    #[test]
    fn purity_examples() {
        assert_close(TVector::new(0.0, 0.0, 0.0).purity(), 0.25, 0.0);
        assert_close(TVector::new(1.0, 1.0, -1.0).purity(), 1.0, 0.0);
        assert_close(TVector::new(0.0, 0.0, 0.5).purity(), 5.0 / 16.0, 1e-15);
    }

    #[test]
    fn density_positivity_iff_tetrahedron() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10_000 {
            let t = TVector::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let rho = t.density_matrix();
            assert_close(rho.trace().re, 1.0, 1e-12);
            assert!(rho.hermiticity_residual() < 1e-15);
            let min_eig = sym_eigenvalues(rho.real_part())[0];
            assert_eq!(
                min_eig >= -1e-12,
                crate::geometry::in_tetrahedron(&t),
                "t = {t:?}, min eigenvalue {min_eig}"
            );
        }
    }

    #[test]
    fn su2_identity_maps_to_identity_rotation() {
        let o = SpecialUnitary2::identity().to_rotation().unwrap();
        assert_eq!(o.m, Rotation3::identity().m);
    }

    #[test]
    fn su2_quarter_turn_about_z() {
        // U = exp(-i pi s3 / 4): quaternion (cos(pi/4), 0, 0, -sin(pi/4)).
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let u = SpecialUnitary2::from_quaternion([inv_sqrt2, 0.0, 0.0, -inv_sqrt2]);
        let o = u.to_rotation().unwrap();
        let expect = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_close(o.m[i][j], expect[i][j], 1e-14);
            }
        }
    }

    #[test]
    fn su2_half_turn_about_z() {
        // U = i s3: quaternion (0, 0, 0, 1).
        let u = SpecialUnitary2::from_quaternion([0.0, 0.0, 0.0, 1.0]);
        let o = u.to_rotation().unwrap();
        let expect = [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_close(o.m[i][j], expect[i][j], 1e-14);
            }
        }
    }

    #[test]
    fn su2_rejects_non_unitary_input() {
        let mut u = SpecialUnitary2::identity();
        u.m[0][0] = c(1.5, 0.0);
        assert!(matches!(
            u.to_rotation(),
            Err(crate::Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn haar_samples_are_unitary_and_rotations_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let u = SpecialUnitary2::haar(&mut rng);
            assert!(u.unitarity_residual() < 1e-12);
            let o = u.to_rotation().unwrap();
            assert!(o.orthogonality_residual() < 1e-10);
            assert_close(o.det(), 1.0, 1e-10);
        }
    }

    #[test]
    fn haar_moments() {
        // E[Tr U / 2] = 0 and E[|Tr U|^2] = 1 for the Haar measure.
        let n = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut sum_half_trace = 0.0;
        let mut sum_char_sq = 0.0;
        for _ in 0..n {
            let u = SpecialUnitary2::haar(&mut rng);
            let tr = u.trace();
            sum_half_trace += tr.re / 2.0;
            sum_char_sq += tr.norm_sqr();
        }
        let nf = n as f64;
        // Var(q0) = 1/4 and Var(4 q0^2) = 1 on the unit 3-sphere.
        assert_close(sum_half_trace / nf, 0.0, 4.0 * 0.5 / nf.sqrt());
        assert_close(sum_char_sq / nf, 1.0, 4.0 / nf.sqrt());
    }

    #[test]
    fn rotate_t_examples() {
        let t = TVector::new(0.2, 0.3, 0.4);
        assert_eq!(t.rotated(&Rotation3::identity()), t);

        let flip = Rotation3::from_rows([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(t.rotated(&flip), TVector::new(-0.2, -0.3, 0.4));

        let swap = Rotation3::from_rows([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(t.rotated(&swap), TVector::new(0.3, 0.2, 0.4));
    }
}
