//! Lattice-resolution convergence of the classical-density surrogate:
//! doubling the resolution must change interpolated values by under 2% RMS
//! at interior points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qvol::geometry::{face_distance, sample_tetrahedron};
use qvol::volume::SurrogateGrid;

#[test]
fn interpolants_at_17_and_33_agree_within_two_percent_rms() {
    // The lattice error dominates well before the quadrature error at these
    // sizes, so a moderate rule keeps the build fast.
    let coarse = SurrogateGrid::build(17, 12, 16, 1e-6).unwrap();
    let fine = SurrogateGrid::build(33, 12, 16, 1e-6).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let count = 100;
    let mut sum_sq = 0.0;
    for _ in 0..count {
        let t = loop {
            let cand = sample_tetrahedron(&mut rng);
            if face_distance(&cand) > 0.15 {
                break cand;
            }
        };
        let a = coarse.interpolate(&t).unwrap();
        let b = fine.interpolate(&t).unwrap();
        sum_sq += ((a - b) / b).powi(2);
    }
    let rms = (sum_sq / count as f64).sqrt();
    assert!(rms < 0.02, "rms relative difference {rms}");
    println!("surrogate 17 vs 33 rms relative difference: {rms:.5}");
}
