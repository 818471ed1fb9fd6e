//! Information geometry of two-qubit states with maximally disordered subsystems.
//!
//! States in this family are fixed by the three diagonal correlation parameters
//! `t = (t11, t22, t33)`; the physical set is a tetrahedron in `t`-space and the
//! separable subset is the unit octahedron inside it. The crate evaluates three
//! Riemannian metrics on that parameter space and integrates their volume
//! elements by Monte Carlo:
//!
//! * the classical Fisher-Rao metric of the Husimi phase-space distribution,
//!   computed by tensor-product quadrature (Gauss-Legendre in `cos θ`, periodic
//!   trapezoid in `φ`),
//! * the Helstrom quantum Fisher metric (symmetric logarithmic derivatives),
//!   available in closed form,
//! * the Wigner-Yanase metric, which coincides with the Helstrom one on this
//!   family and is computed through the spectral route as an independent check.
//!
//! The volume engine provides uniform samplers for the tetrahedron, the
//! octahedron and fixed-purity spheres, deterministic chunked parallel
//! estimation with standard errors, and a precomputed lattice surrogate for the
//! expensive classical metric. Everything is exposed through the `qvol` CLI.
//!
//! ```
//! use qvol::metrics::{quantum_fisher, wigner_yanase};
//! use qvol::volume::{volume, Integrand, McConfig};
//! use qvol::{Region, TVector};
//!
//! // The two quantum metrics coincide on this family.
//! let t = TVector::new(0.2, 0.1, -0.3);
//! let g = quantum_fisher(&t).unwrap();
//! assert!(g.max_abs_diff(&wigner_yanase(&t).unwrap()) < 1e-10);
//!
//! // Monte Carlo volume of the separable set under the Helstrom metric;
//! // the exact value is (4 - pi) pi.
//! let cfg = McConfig { samples: 50_000, seed: 1, margin: 1e-8 };
//! let est = volume(Region::Octahedron, &Integrand::Sld, &cfg).unwrap();
//! let exact = (4.0 - std::f64::consts::PI) * std::f64::consts::PI;
//! assert!((est.value - exact).abs() < 5.0 * est.std_error);
//! ```

// Index-parallel loops over small fixed matrices read better than iterator
// chains here.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod geometry;
pub mod linalg;
pub mod metrics;
pub mod state;
pub mod validate;
pub mod volume;

pub use error::{Error, Result};
pub use geometry::Region;
pub use metrics::{MetricTensor, PhasePoint, QuadratureGrid};
pub use state::{BellSpectrum, DensityMatrix, Rotation3, SpecialUnitary2, TVector};
pub use volume::{IntegralEstimate, Integrand, McConfig, RatioCurve, RatioPoint, SurrogateGrid};
