//! Precomputed lattice of classical volume densities with trilinear
//! interpolation, replacing the 4D quadrature in the Monte Carlo inner loop.
//!
//! Values are stored on a regular lattice over `[-1, 1]^3` wherever the
//! classical metric is defined, which is the whole open cube (the Husimi
//! density stays positive there), not just the state tetrahedron. Storing the
//! analytic continuation outside the tetrahedron keeps interpolation cells
//! that straddle a face fully usable, so volume estimates do not lose the
//! boundary region. Lattice points on the cube surface, where the metric
//! degenerates, carry a quiet-NaN marker.
//!
//! File format `QVGRID1` (little-endian): 8 magic bytes `"QVGRID1\n"`,
//! `u32` format version (1), `u32` resolution, `u32` n_theta, `u32` n_phi,
//! `f64` margin, then `resolution^3` `f64` values in row-major order with the
//! `t11` index fastest and `t33` slowest.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{classical_fisher_raw, QuadratureGrid};
use crate::state::TVector;

const MAGIC: &[u8; 8] = b"QVGRID1\n";
const FORMAT_VERSION: u32 = 1;

/// Default validity cushion against the cube surface for grid builds.
pub const DEFAULT_BUILD_MARGIN: f64 = 1e-6;

/// Lattice of `sqrt(det g)` values for the classical Fisher-Rao metric.
#[derive(Debug, Clone)]
pub struct SurrogateGrid {
    resolution: u32,
    n_theta: u32,
    n_phi: u32,
    margin: f64,
    values: Vec<f64>,
}

impl SurrogateGrid {
    /// Evaluates the classical volume density on the lattice. Deterministic:
    /// the same inputs always produce the same bytes.
    pub fn build(resolution: u32, n_theta: usize, n_phi: usize, margin: f64) -> Result<Self> {
        if resolution < 9 || resolution.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "surrogate resolution must be odd and >= 9, got {resolution}"
            )));
        }
        if !margin.is_finite() || margin < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "surrogate margin must be finite and nonnegative, got {margin}"
            )));
        }
        let quad = QuadratureGrid::new(n_theta, n_phi)?;
        let n = resolution as usize;
        let spacing = 2.0 / (n - 1) as f64;
        let coord = |i: usize| -1.0 + spacing * i as f64;
        let values: Vec<f64> = (0..n * n * n)
            .into_par_iter()
            .map(|idx| {
                let i1 = idx % n;
                let i2 = (idx / n) % n;
                let i3 = idx / (n * n);
                let t = TVector::new(coord(i1), coord(i2), coord(i3));
                let max_abs = t.t11.abs().max(t.t22.abs()).max(t.t33.abs());
                if 1.0 - max_abs <= margin {
                    return f64::NAN;
                }
                match classical_fisher_raw(&quad, &t) {
                    Ok(g) => {
                        let s = g.sqrt_det();
                        if s.is_finite() {
                            s
                        } else {
                            f64::NAN
                        }
                    }
                    Err(_) => f64::NAN,
                }
            })
            .collect();
        Ok(Self {
            resolution,
            n_theta: n_theta as u32,
            n_phi: n_phi as u32,
            margin,
            values,
        })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn n_theta(&self) -> u32 {
        self.n_theta
    }

    pub fn n_phi(&self) -> u32 {
        self.n_phi
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Lattice spacing `2/(n-1)`.
    pub fn spacing(&self) -> f64 {
        2.0 / (self.resolution - 1) as f64
    }

    /// One cell diagonal: within this face distance of the boundary, cells may
    /// contain unresolved corners and the volume engine treats them as part of
    /// the exclusion band.
    pub fn resolution_band(&self) -> f64 {
        3.0_f64.sqrt() * self.spacing()
    }

    /// Stored value at lattice indices (t11, t22, t33 order).
    pub fn value_at(&self, i1: usize, i2: usize, i3: usize) -> f64 {
        let n = self.resolution as usize;
        self.values[i1 + n * (i2 + n * i3)]
    }

    /// Number of finite lattice values.
    pub fn nodes_computed(&self) -> usize {
        self.values.iter().filter(|v| v.is_finite()).count()
    }

    /// Number of non-finite (skipped boundary) lattice values.
    pub fn nodes_skipped(&self) -> usize {
        self.values.len() - self.nodes_computed()
    }

    /// Trilinear interpolation; `None` when the query leaves the lattice or
    /// any needed cell corner is non-finite.
    pub fn try_interpolate(&self, t: &TVector) -> Option<f64> {
        let n = self.resolution as usize;
        let inv_spacing = (n - 1) as f64 / 2.0;
        let mut idx = [0usize; 3];
        let mut frac = [0.0f64; 3];
        for (axis, &coord) in t.as_array().iter().enumerate() {
            if !(-1.0..=1.0).contains(&coord) {
                return None;
            }
            let pos = (coord + 1.0) * inv_spacing;
            let mut cell = pos.floor() as usize;
            if cell >= n - 1 {
                cell = n - 2;
            }
            idx[axis] = cell;
            frac[axis] = pos - cell as f64;
        }
        let mut corners = [[[0.0f64; 2]; 2]; 2];
        for (dz, plane) in corners.iter_mut().enumerate() {
            for (dy, row) in plane.iter_mut().enumerate() {
                for (dx, corner) in row.iter_mut().enumerate() {
                    let v = self.value_at(idx[0] + dx, idx[1] + dy, idx[2] + dz);
                    if !v.is_finite() {
                        return None;
                    }
                    *corner = v;
                }
            }
        }
        let lerp = |a: f64, b: f64, f: f64| a + f * (b - a);
        let c00 = lerp(corners[0][0][0], corners[0][0][1], frac[0]);
        let c01 = lerp(corners[0][1][0], corners[0][1][1], frac[0]);
        let c10 = lerp(corners[1][0][0], corners[1][0][1], frac[0]);
        let c11 = lerp(corners[1][1][0], corners[1][1][1], frac[0]);
        let c0 = lerp(c00, c01, frac[1]);
        let c1 = lerp(c10, c11, frac[1]);
        Some(lerp(c0, c1, frac[2]))
    }

    /// Strict interpolation: errors with a domain mismatch when a needed cell
    /// corner is non-finite or the point leaves the lattice.
    pub fn interpolate(&self, t: &TVector) -> Result<f64> {
        self.try_interpolate(t)
            .ok_or(Error::SurrogateDomainMismatch { t: t.as_array() })
    }

    /// Writes the `QVGRID1` binary file.
    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let mut write_all = |bytes: &[u8]| w.write_all(bytes).map_err(|e| Error::io(path, e));
        write_all(MAGIC)?;
        write_all(&FORMAT_VERSION.to_le_bytes())?;
        write_all(&self.resolution.to_le_bytes())?;
        write_all(&self.n_theta.to_le_bytes())?;
        write_all(&self.n_phi.to_le_bytes())?;
        write_all(&self.margin.to_le_bytes())?;
        for v in &self.values {
            // Canonical quiet NaN for every non-finite marker.
            let out = if v.is_finite() { *v } else { f64::NAN };
            write_all(&out.to_le_bytes())?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Reads a `QVGRID1` binary file, rejecting unknown magic or version.
    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = BufReader::new(file);
        let bad = |detail: &str| Error::GridFormat {
            path: path.to_path_buf(),
            detail: detail.to_string(),
        };

        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(|e| Error::io(path, e))?;
        if &magic != MAGIC {
            return Err(bad("unrecognized magic bytes"));
        }
        let mut u32_buf = [0u8; 4];
        let mut read_u32 = |r: &mut BufReader<File>| -> Result<u32> {
            r.read_exact(&mut u32_buf).map_err(|e| Error::io(path, e))?;
            Ok(u32::from_le_bytes(u32_buf))
        };
        let version = read_u32(&mut r)?;
        if version != FORMAT_VERSION {
            return Err(bad(&format!("unsupported format version {version}")));
        }
        let resolution = read_u32(&mut r)?;
        if resolution < 9 || resolution.is_multiple_of(2) {
            return Err(bad(&format!("invalid resolution {resolution}")));
        }
        let n_theta = read_u32(&mut r)?;
        let n_phi = read_u32(&mut r)?;
        let mut f64_buf = [0u8; 8];
        r.read_exact(&mut f64_buf).map_err(|e| Error::io(path, e))?;
        let margin = f64::from_le_bytes(f64_buf);

        let n = resolution as usize;
        let count = n * n * n;
        let mut values = Vec::with_capacity(count);
        for _ in 0..count {
            r.read_exact(&mut f64_buf)
                .map_err(|_| bad("truncated value section"))?;
            values.push(f64::from_le_bytes(f64_buf));
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing).map_err(|e| Error::io(path, e))? != 0 {
            return Err(bad("trailing bytes after value section"));
        }
        Ok(Self {
            resolution,
            n_theta,
            n_phi,
            margin,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{face_distance, sample_tetrahedron};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small_grid() -> SurrogateGrid {
        SurrogateGrid::build(9, 8, 12, DEFAULT_BUILD_MARGIN).unwrap()
    }

    #[test]
    fn rejects_bad_resolution() {
        assert!(SurrogateGrid::build(8, 8, 12, 1e-6).is_err());
        assert!(SurrogateGrid::build(7, 8, 12, 1e-6).is_err());
    }

    #[test]
    fn center_node_is_one_twenty_seventh() {
        let g = small_grid();
        let mid = (g.resolution() as usize - 1) / 2;
        let center = g.value_at(mid, mid, mid);
        assert!(
            (center - 1.0 / 27.0).abs() < 1e-12,
            "center value {center}"
        );
    }

    #[test]
    fn cube_surface_nodes_are_nan_and_interior_finite() {
        let g = small_grid();
        let n = g.resolution() as usize;
        for i in 0..n {
            for j in 0..n {
                assert!(g.value_at(0, i, j).is_nan());
                assert!(g.value_at(i, j, n - 1).is_nan());
            }
        }
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                for k in 1..n - 1 {
                    assert!(g.value_at(i, j, k).is_finite());
                }
            }
        }
        assert_eq!(g.nodes_skipped(), n * n * n - (n - 2) * (n - 2) * (n - 2));
    }

    #[test]
    fn interpolation_is_exact_at_lattice_points() {
        let g = small_grid();
        let h = g.spacing();
        for (i, j, k) in [(4usize, 4usize, 4usize), (2, 5, 3), (6, 2, 4)] {
            let t = TVector::new(
                -1.0 + h * i as f64,
                -1.0 + h * j as f64,
                -1.0 + h * k as f64,
            );
            assert_eq!(g.interpolate(&t).unwrap(), g.value_at(i, j, k));
        }
    }

    #[test]
    fn interpolation_center_value_close_to_analytic() {
        let g = small_grid();
        let v = g.interpolate(&TVector::new(0.01, -0.015, 0.02)).unwrap();
        assert!((v - 1.0 / 27.0).abs() / (1.0 / 27.0) < 0.01, "v = {v}");
    }

    #[test]
    fn interpolation_symmetric_under_coordinate_swap() {
        let g = small_grid();
        let a = g.interpolate(&TVector::new(0.21, -0.13, 0.17)).unwrap();
        let b = g.interpolate(&TVector::new(-0.13, 0.21, 0.17)).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn interpolation_rejects_out_of_lattice_and_nan_cells() {
        let g = small_grid();
        assert!(matches!(
            g.interpolate(&TVector::new(1.5, 0.0, 0.0)),
            Err(Error::SurrogateDomainMismatch { .. })
        ));
        // A point in the outermost cell layer sees NaN corners.
        assert!(g.try_interpolate(&TVector::new(0.999, 0.0, 0.0)).is_none());
    }

    #[test]
    fn grid_convergence_between_resolutions() {
        let coarse = small_grid();
        let fine = SurrogateGrid::build(17, 8, 12, DEFAULT_BUILD_MARGIN).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let mut sum_sq = 0.0;
        let count = 100;
        for _ in 0..count {
            let t = loop {
                let cand = sample_tetrahedron(&mut rng);
                if face_distance(&cand) > 0.2 {
                    break cand;
                }
            };
            let a = coarse.interpolate(&t).unwrap();
            let b = fine.interpolate(&t).unwrap();
            sum_sq += ((a - b) / b).powi(2);
        }
        let rms = (sum_sq / count as f64).sqrt();
        assert!(rms < 0.05, "rms relative difference {rms}");
    }

    #[test]
    fn file_round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.qv");
        let g = small_grid();
        g.write(&path).unwrap();
        let back = SurrogateGrid::read(&path).unwrap();
        assert_eq!(g.resolution(), back.resolution());
        assert_eq!(g.n_theta(), back.n_theta());
        assert_eq!(g.n_phi(), back.n_phi());
        assert_eq!(g.margin(), back.margin());
        let n = g.resolution() as usize;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(
                        g.value_at(i, j, k).to_bits(),
                        back.value_at(i, j, k).to_bits()
                    );
                }
            }
        }

        // Rebuild and rewrite: bytes must match exactly.
        let path2 = dir.path().join("grid2.qv");
        small_grid().write(&path2).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&path2).unwrap());
    }

    #[test]
    fn read_rejects_corrupt_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.qv");
        std::fs::write(&path, b"NOTAGRID").unwrap();
        assert!(matches!(
            SurrogateGrid::read(&path),
            Err(Error::GridFormat { .. }) | Err(Error::Io { .. })
        ));

        let missing = dir.path().join("missing.qv");
        assert!(matches!(
            SurrogateGrid::read(&missing),
            Err(Error::Io { .. })
        ));
    }
}
