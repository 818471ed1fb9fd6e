//! Exercises the exported C ABI directly: status codes, output contracts,
//! handle lifecycles and the thread-local error message.

use std::ffi::{CStr, CString};
use std::ptr;

use qvol_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qvol_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn scalar_helpers() {
    assert_eq!(qvol_purity(0.0, 0.0, 0.0), 0.25);
    assert_eq!(qvol_delta(0.0, 0.0, 0.0), 1.0);
    assert!(qvol_in_tetrahedron(1.0, 1.0, -1.0));
    assert!(!qvol_in_tetrahedron(1.0, 1.0, 1.0));
    assert!(qvol_in_octahedron(0.2, 0.2, 0.2));
    assert!(!qvol_in_octahedron(0.9, 0.9, -0.9));
}

#[test]
fn bell_spectrum_and_shell_radius() {
    let mut lam = [0.0f64; 4];
    assert_eq!(
        qvol_bell_spectrum(0.0, 0.0, 0.5, lam.as_mut_ptr()),
        QvolStatus::Ok
    );
    lam.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(lam, [0.125, 0.125, 0.375, 0.375]);

    let mut r = 0.0f64;
    assert_eq!(qvol_shell_radius(0.5, &mut r), QvolStatus::Ok);
    assert!((r - 1.0).abs() < 1e-15);

    assert_eq!(qvol_shell_radius(0.1, &mut r), QvolStatus::DomainError);
    assert!(last_error().contains("unphysical purity"));

    assert_eq!(
        qvol_bell_spectrum(0.0, 0.0, 0.0, ptr::null_mut()),
        QvolStatus::NullPointer
    );
}

#[test]
fn quantum_metric_identity_at_origin() {
    let mut g = [0.0f64; 6];
    let mut sqrt_det = 0.0f64;
    assert_eq!(
        qvol_metric_quantum(
            QvolMetricKind::Sld,
            0.0,
            0.0,
            0.0,
            g.as_mut_ptr(),
            &mut sqrt_det
        ),
        QvolStatus::Ok
    );
    assert_eq!(g, [1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
    assert_eq!(sqrt_det, 1.0);

    // Wigner-Yanase agrees with the closed form.
    let mut g_wy = [0.0f64; 6];
    let mut sd_wy = 0.0f64;
    assert_eq!(
        qvol_metric_quantum(
            QvolMetricKind::WignerYanase,
            0.2,
            0.1,
            -0.3,
            g_wy.as_mut_ptr(),
            &mut sd_wy
        ),
        QvolStatus::Ok
    );
    let mut g_sld = [0.0f64; 6];
    let mut sd_sld = 0.0f64;
    assert_eq!(
        qvol_metric_quantum(
            QvolMetricKind::Sld,
            0.2,
            0.1,
            -0.3,
            g_sld.as_mut_ptr(),
            &mut sd_sld
        ),
        QvolStatus::Ok
    );
    for (a, b) in g_wy.iter().zip(g_sld.iter()) {
        assert!((a - b).abs() < 1e-10);
    }

    // Boundary points report a domain error.
    assert_eq!(
        qvol_metric_quantum(
            QvolMetricKind::Sld,
            1.0,
            1.0,
            -1.0,
            g.as_mut_ptr(),
            &mut sqrt_det
        ),
        QvolStatus::DomainError
    );
    assert!(last_error().contains("singular state"));

    // The classical kind needs the quadrature entry point.
    assert_eq!(
        qvol_metric_quantum(
            QvolMetricKind::Classical,
            0.0,
            0.0,
            0.0,
            g.as_mut_ptr(),
            &mut sqrt_det
        ),
        QvolStatus::InvalidArgument
    );

    // Non-finite parameters are rejected instead of propagating NaN.
    assert_eq!(
        qvol_metric_quantum(
            QvolMetricKind::Sld,
            f64::NAN,
            0.0,
            0.0,
            g.as_mut_ptr(),
            &mut sqrt_det
        ),
        QvolStatus::InvalidArgument
    );
}

#[test]
fn classical_metric_through_quadrature_handle() {
    let quad = qvol_quadrature_new(16, 20);
    assert!(!quad.is_null());
    let mut g = [0.0f64; 6];
    let mut sqrt_det = 0.0f64;
    assert_eq!(
        qvol_metric_classical(quad, 0.0, 0.0, 0.0, 1e-6, g.as_mut_ptr(), &mut sqrt_det),
        QvolStatus::Ok
    );
    for diag in &g[..3] {
        assert!((diag - 1.0 / 9.0).abs() < 1e-10);
    }
    assert!((sqrt_det - 1.0 / 27.0).abs() < 1e-10);

    assert_eq!(
        qvol_metric_classical(quad, 1.0, 1.0, -1.0, 1e-6, g.as_mut_ptr(), &mut sqrt_det),
        QvolStatus::DomainError
    );
    qvol_quadrature_free(quad);
    qvol_quadrature_free(ptr::null_mut());

    // Invalid quadrature sizes return a null handle and set the message.
    assert!(qvol_quadrature_new(1, 2).is_null());
    assert!(last_error().contains("quadrature"));
}

#[test]
fn volume_quantum_matches_library_scale() {
    let mut value = 0.0f64;
    let mut std_error = 0.0f64;
    assert_eq!(
        qvol_volume_quantum(
            QvolRegion::Tetrahedron,
            QvolMetricKind::Sld,
            200_000,
            11,
            1e-8,
            &mut value,
            &mut std_error
        ),
        QvolStatus::Ok
    );
    let exact = std::f64::consts::PI * std::f64::consts::PI;
    assert!((value - exact).abs() < 4.0 * std_error, "value {value}");

    assert_eq!(
        qvol_volume_quantum(
            QvolRegion::Tetrahedron,
            QvolMetricKind::Sld,
            10,
            0,
            1e-8,
            &mut value,
            &mut std_error
        ),
        QvolStatus::InvalidArgument
    );
}

#[test]
fn surrogate_lifecycle_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("g.qv").to_str().unwrap()).unwrap();

    assert_eq!(
        qvol_surrogate_build(9, 8, 12, 1e-6, path.as_ptr()),
        QvolStatus::Ok
    );

    let mut handle: *mut QvolSurrogate = ptr::null_mut();
    assert_eq!(qvol_surrogate_open(path.as_ptr(), &mut handle), QvolStatus::Ok);
    assert!(!handle.is_null());
    assert_eq!(qvol_surrogate_resolution(handle), 9);

    let mut v = 0.0f64;
    assert_eq!(
        qvol_surrogate_interpolate(handle, 0.0, 0.0, 0.0, &mut v),
        QvolStatus::Ok
    );
    assert!((v - 1.0 / 27.0).abs() < 1e-12);

    assert_eq!(
        qvol_surrogate_interpolate(handle, 1.5, 0.0, 0.0, &mut v),
        QvolStatus::DomainError
    );
    assert!(last_error().contains("surrogate domain mismatch"));

    let mut value = 0.0f64;
    let mut std_error = 0.0f64;
    assert_eq!(
        qvol_volume_classical(
            QvolRegion::Octahedron,
            handle,
            50_000,
            3,
            1e-8,
            &mut value,
            &mut std_error
        ),
        QvolStatus::Ok
    );
    assert!(value > 0.0 && value < 1.0, "separable volume {value}");

    assert_eq!(
        qvol_shell_volume_classical(
            0.55,
            QvolRegion::Octahedron,
            handle,
            50_000,
            3,
            1e-8,
            &mut value,
            &mut std_error
        ),
        QvolStatus::Ok
    );
    assert_eq!(value, 0.0);

    qvol_surrogate_free(handle);
    qvol_surrogate_free(ptr::null_mut());

    // Opening a missing file is an I/O error.
    let missing = CString::new(dir.path().join("missing.qv").to_str().unwrap()).unwrap();
    let mut h2: *mut QvolSurrogate = ptr::null_mut();
    assert_eq!(
        qvol_surrogate_open(missing.as_ptr(), &mut h2),
        QvolStatus::IoError
    );
    assert!(h2.is_null());

    // Null paths are rejected.
    assert_eq!(
        qvol_surrogate_build(9, 8, 12, 1e-6, ptr::null()),
        QvolStatus::NullPointer
    );
}

#[test]
fn shell_volume_quantum_coupling() {
    let mut v = 0.0f64;
    let mut v_err = 0.0f64;
    let mut vs = 0.0f64;
    let mut vs_err = 0.0f64;
    assert_eq!(
        qvol_shell_volume_quantum(
            0.30,
            QvolRegion::Tetrahedron,
            QvolMetricKind::Sld,
            50_000,
            9,
            1e-8,
            &mut v,
            &mut v_err
        ),
        QvolStatus::Ok
    );
    assert_eq!(
        qvol_shell_volume_quantum(
            0.30,
            QvolRegion::Octahedron,
            QvolMetricKind::Sld,
            50_000,
            9,
            1e-8,
            &mut vs,
            &mut vs_err
        ),
        QvolStatus::Ok
    );
    // Below purity 1/3 the shell sits inside both regions: same samples, same
    // estimates, bit for bit.
    assert_eq!(v.to_bits(), vs.to_bits());
    assert_eq!(v_err.to_bits(), vs_err.to_bits());
}
