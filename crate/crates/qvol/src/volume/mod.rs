//! Monte Carlo estimation of Riemannian volumes over the state tetrahedron,
//! the separability octahedron and fixed-purity shells.
//!
//! Sampling is chunked: chunk `c` draws from an independent ChaCha stream
//! derived from `(seed, c)`, chunk statistics are collected in chunk order and
//! merged in a fixed pairwise tree, so results are bitwise independent of the
//! worker count. Octahedron estimates reuse the tetrahedron sample stream and
//! mask by membership, which couples the numerator and denominator of every
//! reported ratio.

mod surrogate;

pub use surrogate::{SurrogateGrid, DEFAULT_BUILD_MARGIN};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    face_distance, in_octahedron, in_tetrahedron, sample_sphere, sample_tetrahedron, PurityShell,
    Region, TETRAHEDRON_VOLUME,
};
use crate::metrics::{classical_fisher, delta, wigner_yanase, QuadratureGrid};
use crate::state::TVector;

/// Smallest accepted sample count.
pub const MIN_SAMPLES: u64 = 1_000;
/// Default interior margin for volume runs: samples closer than this to a
/// tetrahedron face contribute zero (omitted mass is O(sqrt(margin))).
pub const DEFAULT_MC_MARGIN: f64 = 1e-8;

const CHUNK_SAMPLES: u64 = 1 << 16;

/// Monte Carlo run parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub margin: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
            margin: DEFAULT_MC_MARGIN,
        }
    }
}

/// A Monte Carlo integral estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl IntegralEstimate {
    fn exact_zero(seed: u64) -> Self {
        Self {
            value: 0.0,
            std_error: 0.0,
            n_samples: 0,
            seed,
        }
    }
}

/// Volume density `sqrt(det g)` to integrate.
#[derive(Debug, Clone, Copy)]
pub enum Integrand<'a> {
    /// Helstrom metric density `1/sqrt(Delta)` (closed form).
    Sld,
    /// Wigner-Yanase density via the spectral route; numerically equal to
    /// `Sld` but computed through the assembled metric tensor.
    WignerYanase,
    /// Classical Fisher-Rao density by full quadrature at every sample.
    ClassicalDirect { grid: &'a QuadratureGrid },
    /// Classical Fisher-Rao density from a precomputed lattice.
    ClassicalSurrogate { surrogate: &'a SurrogateGrid },
    /// Constant 1: recovers Euclidean volumes, used as a sanity oracle.
    EuclideanUnit,
}

impl Integrand<'_> {
    /// Per-sample contribution. Samples inside the margin band contribute 0.
    fn eval(&self, t: &TVector, margin: f64) -> Result<f64> {
        if let Integrand::EuclideanUnit = self {
            return Ok(1.0);
        }
        if face_distance(t) <= margin {
            return Ok(0.0);
        }
        match self {
            Integrand::Sld => {
                let value = 1.0 / delta(t).sqrt();
                if value.is_finite() {
                    Ok(value)
                } else {
                    Err(Error::NonFiniteIntegrand {
                        detail: format!("1/sqrt(Delta) not finite at t = {t:?}"),
                    })
                }
            }
            Integrand::WignerYanase => {
                let value = wigner_yanase(t)?.sqrt_det();
                if value.is_finite() {
                    Ok(value)
                } else {
                    Err(Error::NonFiniteIntegrand {
                        detail: format!("sqrt(det g) not finite at t = {t:?}"),
                    })
                }
            }
            Integrand::ClassicalDirect { grid } => {
                let value = classical_fisher(grid, t, margin)?.sqrt_det();
                if value.is_finite() {
                    Ok(value)
                } else {
                    Err(Error::NonFiniteIntegrand {
                        detail: format!("sqrt(det g) not finite at t = {t:?}"),
                    })
                }
            }
            Integrand::ClassicalSurrogate { surrogate } => match surrogate.try_interpolate(t) {
                Some(value) => Ok(value),
                // Cells with unresolved corners hug the boundary; treat them
                // as part of the exclusion band up to one cell diagonal.
                None if face_distance(t) <= surrogate.resolution_band() => Ok(0.0),
                None => Err(Error::SurrogateDomainMismatch { t: t.as_array() }),
            },
            Integrand::EuclideanUnit => unreachable!(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    sum_sq: f64,
    n: u64,
}

impl Accumulator {
    fn push(&mut self, value: f64) {
        self.sum += value;
        self.sum_sq += value * value;
        self.n += 1;
    }

    fn merge(self, other: Accumulator) -> Accumulator {
        Accumulator {
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
            n: self.n + other.n,
        }
    }

    fn estimate(&self, reference_volume: f64, seed: u64) -> IntegralEstimate {
        let n = self.n as f64;
        let mean = self.sum / n;
        let variance = if self.n > 1 {
            ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        IntegralEstimate {
            value: reference_volume * mean,
            std_error: reference_volume * (variance / n).sqrt(),
            n_samples: self.n,
            seed,
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn chunk_sizes(samples: u64) -> Vec<u64> {
    let n_chunks = samples.div_ceil(CHUNK_SAMPLES);
    (0..n_chunks)
        .map(|c| CHUNK_SAMPLES.min(samples - c * CHUNK_SAMPLES))
        .collect()
}

/// Fixed-shape pairwise reduction, independent of how chunks were scheduled.
fn reduce_tree(mut stats: Vec<Accumulator>) -> Accumulator {
    if stats.is_empty() {
        return Accumulator::default();
    }
    while stats.len() > 1 {
        stats = stats
            .chunks(2)
            .map(|pair| {
                if pair.len() == 2 {
                    pair[0].merge(pair[1])
                } else {
                    pair[0]
                }
            })
            .collect();
    }
    stats[0]
}

fn check_config(cfg: &McConfig) -> Result<()> {
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            cfg.samples
        )));
    }
    if !cfg.margin.is_finite() || cfg.margin < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "margin must be finite and nonnegative, got {}",
            cfg.margin
        )));
    }
    Ok(())
}

fn first_error<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r?);
    }
    Ok(out)
}

/// Riemannian volume of a region: uniform tetrahedron samples, masked by the
/// region, times the Euclidean reference volume of the sampling domain.
pub fn volume(region: Region, integrand: &Integrand, cfg: &McConfig) -> Result<IntegralEstimate> {
    check_config(cfg)?;
    let results: Vec<Result<Accumulator>> = chunk_sizes(cfg.samples)
        .into_par_iter()
        .enumerate()
        .map(|(chunk, count)| {
            let mut rng = chunk_rng(cfg.seed, chunk as u64);
            let mut acc = Accumulator::default();
            for _ in 0..count {
                let t = sample_tetrahedron(&mut rng);
                let inside = match region {
                    Region::Tetrahedron => true,
                    Region::Octahedron => in_octahedron(&t),
                };
                let f = if inside { integrand.eval(&t, cfg.margin)? } else { 0.0 };
                acc.push(f);
            }
            Ok(acc)
        })
        .collect();
    let stats = reduce_tree(first_error(results)?);
    Ok(stats.estimate(TETRAHEDRON_VOLUME, cfg.seed))
}

/// Volume of the intersection of a region with the fixed-purity sphere
/// (surface measure times `sqrt(det g)`), with empty intersections
/// short-circuited to an exact zero.
pub fn shell_volume(
    purity: f64,
    region: Region,
    integrand: &Integrand,
    cfg: &McConfig,
) -> Result<IntegralEstimate> {
    check_config(cfg)?;
    let shell = PurityShell::new(purity)?;
    if shell_is_empty(&shell, region) {
        return Ok(IntegralEstimate::exact_zero(cfg.seed));
    }
    let results: Vec<Result<Accumulator>> = chunk_sizes(cfg.samples)
        .into_par_iter()
        .enumerate()
        .map(|(chunk, count)| {
            let mut rng = chunk_rng(cfg.seed, chunk as u64);
            let mut acc = Accumulator::default();
            for _ in 0..count {
                let t = sample_sphere(&mut rng, shell.radius);
                let f = if region.contains(&t) {
                    integrand.eval(&t, cfg.margin)?
                } else {
                    0.0
                };
                acc.push(f);
            }
            Ok(acc)
        })
        .collect();
    let stats = reduce_tree(first_error(results)?);
    Ok(stats.estimate(shell.area(), cfg.seed))
}

fn shell_is_empty(shell: &PurityShell, region: Region) -> bool {
    match region {
        // Circumradius of the octahedron is 1.
        Region::Octahedron => shell.radius > 1.0,
        // Circumradius of the tetrahedron is sqrt(3).
        Region::Tetrahedron => shell.radius > 3.0_f64.sqrt(),
    }
}

/// Both shell volumes from one pass over a shared sample set; bitwise
/// identical to two separate `shell_volume` calls at the same seed.
pub fn shell_volume_pair(
    purity: f64,
    integrand: &Integrand,
    cfg: &McConfig,
) -> Result<(IntegralEstimate, IntegralEstimate)> {
    check_config(cfg)?;
    let shell = PurityShell::new(purity)?;
    if shell_is_empty(&shell, Region::Tetrahedron) {
        let zero = IntegralEstimate::exact_zero(cfg.seed);
        return Ok((zero, zero));
    }
    if shell_is_empty(&shell, Region::Octahedron) {
        let tetra = shell_volume(purity, Region::Tetrahedron, integrand, cfg)?;
        return Ok((tetra, IntegralEstimate::exact_zero(cfg.seed)));
    }
    let results: Vec<Result<(Accumulator, Accumulator)>> = chunk_sizes(cfg.samples)
        .into_par_iter()
        .enumerate()
        .map(|(chunk, count)| {
            let mut rng = chunk_rng(cfg.seed, chunk as u64);
            let mut acc_t = Accumulator::default();
            let mut acc_o = Accumulator::default();
            for _ in 0..count {
                let t = sample_sphere(&mut rng, shell.radius);
                let f = if in_tetrahedron(&t) {
                    integrand.eval(&t, cfg.margin)?
                } else {
                    0.0
                };
                acc_t.push(f);
                acc_o.push(if in_octahedron(&t) { f } else { 0.0 });
            }
            Ok((acc_t, acc_o))
        })
        .collect();
    let pairs = first_error(results)?;
    let (tetra, octa): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let area = shell.area();
    Ok((
        reduce_tree(tetra).estimate(area, cfg.seed),
        reduce_tree(octa).estimate(area, cfg.seed),
    ))
}

/// One row of the ratio-versus-purity curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioPoint {
    pub p: f64,
    pub v: f64,
    pub v_stderr: f64,
    pub vs: f64,
    pub vs_stderr: f64,
    /// `V_s(P)/V(P)`; 0 when the separable volume vanishes, `None` (flagged
    /// undefined) when the total volume vanishes.
    pub r: Option<f64>,
}

/// The ratio curve over an ordered purity grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioCurve {
    pub points: Vec<RatioPoint>,
}

/// Runs the coupled shell estimates over a strictly increasing purity grid.
pub fn ratio_curve(integrand: &Integrand, p_grid: &[f64], cfg: &McConfig) -> Result<RatioCurve> {
    if p_grid.is_empty() {
        return Err(Error::InvalidArgument("purity grid is empty".into()));
    }
    if p_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "purity grid must be strictly increasing".into(),
        ));
    }
    let mut points = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let (v, vs) = shell_volume_pair(p, integrand, cfg)?;
        let r = if v.value == 0.0 {
            None
        } else if vs.value == 0.0 {
            Some(0.0)
        } else {
            Some(vs.value / v.value)
        };
        points.push(RatioPoint {
            p,
            v: v.value,
            v_stderr: v.std_error,
            vs: vs.value,
            vs_stderr: vs.std_error,
            r,
        });
    }
    Ok(RatioCurve { points })
}
