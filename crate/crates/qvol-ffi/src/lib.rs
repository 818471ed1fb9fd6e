//! C ABI for the qvol library: opaque handles, status codes and a
//! thread-local error message. The header `include/qvol.h` is generated by
//! cbindgen at build time.
//!
//! Conventions:
//! * every fallible call returns a [`QvolStatus`]; outputs go through pointers
//!   that are written only on `Ok`,
//! * handles created by `*_new`/`*_open` must be released with the matching
//!   `*_free`,
//! * `qvol_last_error_message` returns a pointer to a thread-local buffer with
//!   the detail of the most recent failure on this thread; it stays valid
//!   until the next failing call on the same thread.

// The C contract documents pointer validity; callers own the unsafety.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use qvol::geometry::{in_octahedron, in_tetrahedron, shell_radius};
use qvol::metrics::{classical_fisher, delta, quantum_fisher, wigner_yanase, MetricTensor};
use qvol::volume::{shell_volume, volume, Integrand, McConfig};
use qvol::{Error, Region, TVector};

/// Status code of every fallible call. Matches the CLI exit-code classes:
/// 2 argument, 3 numerical domain, 4 I/O; 5 flags a null pointer.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QvolStatus {
    Ok = 0,
    InvalidArgument = 2,
    DomainError = 3,
    IoError = 4,
    NullPointer = 5,
}

/// Which metric a call evaluates.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QvolMetricKind {
    Classical = 0,
    Sld = 1,
    WignerYanase = 2,
}

/// Integration region selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QvolRegion {
    Tetrahedron = 0,
    Octahedron = 1,
}

impl QvolRegion {
    fn region(self) -> Region {
        match self {
            QvolRegion::Tetrahedron => Region::Tetrahedron,
            QvolRegion::Octahedron => Region::Octahedron,
        }
    }
}

/// Opaque quadrature-rule handle for the classical metric.
pub struct QvolQuadrature {
    inner: qvol::QuadratureGrid,
}

/// Opaque precomputed-lattice handle for the classical volume density.
pub struct QvolSurrogate {
    inner: qvol::SurrogateGrid,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(err: &Error) -> QvolStatus {
    let message = err.to_string();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).unwrap_or_default();
    });
    match err.exit_code() {
        2 => QvolStatus::InvalidArgument,
        4 => QvolStatus::IoError,
        _ => QvolStatus::DomainError,
    }
}

fn set_error_message(message: &str, status: QvolStatus) -> QvolStatus {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).unwrap_or_default();
    });
    status
}

/// Detail of the most recent failure on this thread (empty string if none).
#[no_mangle]
pub extern "C" fn qvol_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Purity `(1 + |t|^2)/4` of the state with the given parameters.
#[no_mangle]
pub extern "C" fn qvol_purity(t11: f64, t22: f64, t33: f64) -> f64 {
    TVector::new(t11, t22, t33).purity()
}

/// The quartic `Delta`; the Helstrom volume density is its inverse square
/// root.
#[no_mangle]
pub extern "C" fn qvol_delta(t11: f64, t22: f64, t33: f64) -> f64 {
    delta(&TVector::new(t11, t22, t33))
}

/// Whether the parameters describe a physical state.
#[no_mangle]
pub extern "C" fn qvol_in_tetrahedron(t11: f64, t22: f64, t33: f64) -> bool {
    in_tetrahedron(&TVector::new(t11, t22, t33))
}

/// Whether the parameters describe a separable state.
#[no_mangle]
pub extern "C" fn qvol_in_octahedron(t11: f64, t22: f64, t33: f64) -> bool {
    in_octahedron(&TVector::new(t11, t22, t33))
}

/// The four Bell-basis eigenvalues, written to `out[0..4]` in the order
/// Psi-, Phi-, Phi+, Psi+.
#[no_mangle]
pub extern "C" fn qvol_bell_spectrum(
    t11: f64,
    t22: f64,
    t33: f64,
    out: *mut f64,
) -> QvolStatus {
    if out.is_null() {
        return set_error_message("out is null", QvolStatus::NullPointer);
    }
    let spectrum = TVector::new(t11, t22, t33).bell_spectrum();
    unsafe {
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&spectrum.lam);
    }
    QvolStatus::Ok
}

/// Radius `sqrt(4P - 1)` of the sphere of purity `purity`.
#[no_mangle]
pub extern "C" fn qvol_shell_radius(purity: f64, out: *mut f64) -> QvolStatus {
    if out.is_null() {
        return set_error_message("out is null", QvolStatus::NullPointer);
    }
    match shell_radius(purity) {
        Ok(r) => {
            unsafe { *out = r };
            QvolStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

fn check_finite(t11: f64, t22: f64, t33: f64) -> Option<QvolStatus> {
    if t11.is_finite() && t22.is_finite() && t33.is_finite() {
        None
    } else {
        Some(set_error_message(
            "parameters must be finite",
            QvolStatus::InvalidArgument,
        ))
    }
}

fn write_metric(g: &MetricTensor, out_g: *mut f64, out_sqrt_det: *mut f64) {
    let entries = [g.g11, g.g22, g.g33, g.g12, g.g13, g.g23];
    unsafe {
        std::slice::from_raw_parts_mut(out_g, 6).copy_from_slice(&entries);
        *out_sqrt_det = g.sqrt_det();
    }
}

/// Quantum metric tensor at a point. `out_g[0..6]` receives
/// `(g11, g22, g33, g12, g13, g23)`. `kind` must be Sld or WignerYanase.
#[no_mangle]
pub extern "C" fn qvol_metric_quantum(
    kind: QvolMetricKind,
    t11: f64,
    t22: f64,
    t33: f64,
    out_g: *mut f64,
    out_sqrt_det: *mut f64,
) -> QvolStatus {
    if out_g.is_null() || out_sqrt_det.is_null() {
        return set_error_message("output pointer is null", QvolStatus::NullPointer);
    }
    if let Some(status) = check_finite(t11, t22, t33) {
        return status;
    }
    let t = TVector::new(t11, t22, t33);
    let result = match kind {
        QvolMetricKind::Sld => quantum_fisher(&t),
        QvolMetricKind::WignerYanase => wigner_yanase(&t),
        QvolMetricKind::Classical => {
            return set_error_message(
                "use qvol_metric_classical with a quadrature handle",
                QvolStatus::InvalidArgument,
            )
        }
    };
    match result {
        Ok(g) => {
            write_metric(&g, out_g, out_sqrt_det);
            QvolStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Builds a quadrature rule; returns null when the sizes are invalid.
#[no_mangle]
pub extern "C" fn qvol_quadrature_new(n_theta: u32, n_phi: u32) -> *mut QvolQuadrature {
    match qvol::QuadratureGrid::new(n_theta as usize, n_phi as usize) {
        Ok(inner) => Box::into_raw(Box::new(QvolQuadrature { inner })),
        Err(e) => {
            set_error(&e);
            ptr::null_mut()
        }
    }
}

/// Releases a quadrature handle. Null is accepted and ignored.
#[no_mangle]
pub extern "C" fn qvol_quadrature_free(quadrature: *mut QvolQuadrature) {
    if !quadrature.is_null() {
        drop(unsafe { Box::from_raw(quadrature) });
    }
}

/// Classical Fisher-Rao metric by quadrature at an interior point.
#[no_mangle]
pub extern "C" fn qvol_metric_classical(
    quadrature: *const QvolQuadrature,
    t11: f64,
    t22: f64,
    t33: f64,
    margin: f64,
    out_g: *mut f64,
    out_sqrt_det: *mut f64,
) -> QvolStatus {
    if quadrature.is_null() {
        return set_error_message("quadrature handle is null", QvolStatus::NullPointer);
    }
    if out_g.is_null() || out_sqrt_det.is_null() {
        return set_error_message("output pointer is null", QvolStatus::NullPointer);
    }
    if let Some(status) = check_finite(t11, t22, t33) {
        return status;
    }
    let grid = unsafe { &(*quadrature).inner };
    match classical_fisher(grid, &TVector::new(t11, t22, t33), margin) {
        Ok(g) => {
            write_metric(&g, out_g, out_sqrt_det);
            QvolStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

fn path_from_c(path: *const c_char) -> Result<std::path::PathBuf, QvolStatus> {
    if path.is_null() {
        return Err(set_error_message("path is null", QvolStatus::NullPointer));
    }
    let bytes = unsafe { CStr::from_ptr(path) };
    match bytes.to_str() {
        Ok(s) => Ok(Path::new(s).to_path_buf()),
        Err(_) => Err(set_error_message(
            "path is not valid UTF-8",
            QvolStatus::InvalidArgument,
        )),
    }
}

/// Builds a classical-density lattice and writes it as a `QVGRID1` file.
#[no_mangle]
pub extern "C" fn qvol_surrogate_build(
    resolution: u32,
    n_theta: u32,
    n_phi: u32,
    margin: f64,
    path: *const c_char,
) -> QvolStatus {
    let path = match path_from_c(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    let grid = match qvol::SurrogateGrid::build(resolution, n_theta as usize, n_phi as usize, margin)
    {
        Ok(g) => g,
        Err(e) => return set_error(&e),
    };
    match grid.write(&path) {
        Ok(()) => QvolStatus::Ok,
        Err(e) => set_error(&e),
    }
}

/// Opens a `QVGRID1` file into a surrogate handle.
#[no_mangle]
pub extern "C" fn qvol_surrogate_open(
    path: *const c_char,
    out: *mut *mut QvolSurrogate,
) -> QvolStatus {
    if out.is_null() {
        return set_error_message("out is null", QvolStatus::NullPointer);
    }
    let path = match path_from_c(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match qvol::SurrogateGrid::read(&path) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(QvolSurrogate { inner })) };
            QvolStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Releases a surrogate handle. Null is accepted and ignored.
#[no_mangle]
pub extern "C" fn qvol_surrogate_free(surrogate: *mut QvolSurrogate) {
    if !surrogate.is_null() {
        drop(unsafe { Box::from_raw(surrogate) });
    }
}

/// Lattice points per axis of an open surrogate.
#[no_mangle]
pub extern "C" fn qvol_surrogate_resolution(surrogate: *const QvolSurrogate) -> u32 {
    if surrogate.is_null() {
        return 0;
    }
    unsafe { &(*surrogate).inner }.resolution()
}

/// Trilinear interpolation of the classical volume density.
#[no_mangle]
pub extern "C" fn qvol_surrogate_interpolate(
    surrogate: *const QvolSurrogate,
    t11: f64,
    t22: f64,
    t33: f64,
    out: *mut f64,
) -> QvolStatus {
    if surrogate.is_null() {
        return set_error_message("surrogate handle is null", QvolStatus::NullPointer);
    }
    if out.is_null() {
        return set_error_message("out is null", QvolStatus::NullPointer);
    }
    if let Some(status) = check_finite(t11, t22, t33) {
        return status;
    }
    let grid = unsafe { &(*surrogate).inner };
    match grid.interpolate(&TVector::new(t11, t22, t33)) {
        Ok(v) => {
            unsafe { *out = v };
            QvolStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_volume(
    region: QvolRegion,
    integrand: &Integrand,
    purity: Option<f64>,
    samples: u64,
    seed: u64,
    margin: f64,
    out_value: *mut f64,
    out_std_error: *mut f64,
) -> QvolStatus {
    if out_value.is_null() || out_std_error.is_null() {
        return set_error_message("output pointer is null", QvolStatus::NullPointer);
    }
    let cfg = McConfig {
        samples,
        seed,
        margin,
    };
    let result = match purity {
        None => volume(region.region(), integrand, &cfg),
        Some(p) => shell_volume(p, region.region(), integrand, &cfg),
    };
    match result {
        Ok(estimate) => {
            unsafe {
                *out_value = estimate.value;
                *out_std_error = estimate.std_error;
            }
            QvolStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

fn quantum_integrand(kind: QvolMetricKind) -> Result<Integrand<'static>, QvolStatus> {
    match kind {
        QvolMetricKind::Sld => Ok(Integrand::Sld),
        QvolMetricKind::WignerYanase => Ok(Integrand::WignerYanase),
        QvolMetricKind::Classical => Err(set_error_message(
            "use the *_classical entry point with a surrogate handle",
            QvolStatus::InvalidArgument,
        )),
    }
}

/// Monte Carlo Riemannian volume of a region under a quantum metric.
#[no_mangle]
pub extern "C" fn qvol_volume_quantum(
    region: QvolRegion,
    kind: QvolMetricKind,
    samples: u64,
    seed: u64,
    margin: f64,
    out_value: *mut f64,
    out_std_error: *mut f64,
) -> QvolStatus {
    let integrand = match quantum_integrand(kind) {
        Ok(i) => i,
        Err(status) => return status,
    };
    run_volume(
        region,
        &integrand,
        None,
        samples,
        seed,
        margin,
        out_value,
        out_std_error,
    )
}

/// Monte Carlo Riemannian volume under the classical metric via a surrogate.
#[no_mangle]
pub extern "C" fn qvol_volume_classical(
    region: QvolRegion,
    surrogate: *const QvolSurrogate,
    samples: u64,
    seed: u64,
    margin: f64,
    out_value: *mut f64,
    out_std_error: *mut f64,
) -> QvolStatus {
    if surrogate.is_null() {
        return set_error_message("surrogate handle is null", QvolStatus::NullPointer);
    }
    let grid = unsafe { &(*surrogate).inner };
    run_volume(
        region,
        &Integrand::ClassicalSurrogate { surrogate: grid },
        None,
        samples,
        seed,
        margin,
        out_value,
        out_std_error,
    )
}

/// Volume of the intersection of a region with a fixed-purity shell under a
/// quantum metric.
#[no_mangle]
pub extern "C" fn qvol_shell_volume_quantum(
    purity: f64,
    region: QvolRegion,
    kind: QvolMetricKind,
    samples: u64,
    seed: u64,
    margin: f64,
    out_value: *mut f64,
    out_std_error: *mut f64,
) -> QvolStatus {
    let integrand = match quantum_integrand(kind) {
        Ok(i) => i,
        Err(status) => return status,
    };
    run_volume(
        region,
        &integrand,
        Some(purity),
        samples,
        seed,
        margin,
        out_value,
        out_std_error,
    )
}

/// Shell volume under the classical metric via a surrogate.
#[no_mangle]
pub extern "C" fn qvol_shell_volume_classical(
    purity: f64,
    region: QvolRegion,
    surrogate: *const QvolSurrogate,
    samples: u64,
    seed: u64,
    margin: f64,
    out_value: *mut f64,
    out_std_error: *mut f64,
) -> QvolStatus {
    if surrogate.is_null() {
        return set_error_message("surrogate handle is null", QvolStatus::NullPointer);
    }
    let grid = unsafe { &(*surrogate).inner };
    run_volume(
        region,
        &Integrand::ClassicalSurrogate { surrogate: grid },
        Some(purity),
        samples,
        seed,
        margin,
        out_value,
        out_std_error,
    )
}
