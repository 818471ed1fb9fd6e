//! Small fixed-size matrix helpers shared by the state and metric modules.

use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = [[C64; 2]; 2];
pub type Mat4 = [[f64; 4]; 4];

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrices in the standard convention, indexed 0..=2 for x, y, z.
pub fn pauli(i: usize) -> Mat2 {
    match i {
        0 => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        1 => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        2 => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        _ => panic!("pauli index out of range: {i}"),
    }
}

pub fn mat2_identity() -> Mat2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_dagger(a: &Mat2) -> Mat2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn mat2_det(a: &Mat2) -> C64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn mat2_trace(a: &Mat2) -> C64 {
    a[0][0] + a[1][1]
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat4_trace(a: &Mat4) -> f64 {
    a[0][0] + a[1][1] + a[2][2] + a[3][3]
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// returned in ascending order.
pub fn sym_eigenvalues<const N: usize>(mut a: [[f64; N]; N]) -> [f64; N] {
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..N {
            for q in (p + 1)..N {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() < 1e-15 {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cos = 1.0 / (t * t + 1.0).sqrt();
                let sin = t * cos;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = cos * akp - sin * akq;
                    a[k][q] = sin * akp + cos * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = cos * apk - sin * aqk;
                    a[q][k] = sin * apk + cos * aqk;
                }
            }
        }
    }
    let mut eig = [0.0; N];
    for i in 0..N {
        eig[i] = a[i][i];
    }
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}
