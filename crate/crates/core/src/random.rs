//! Seeded samplers for property tests, acceptance runs and benchmarks.
//!
//! Symplectic matrices are always drawn as words in the generators
//! `J`, `M_L`, `V_P`, so group membership holds up to roundoff.

use nalgebra::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gaussian::GaussianState;
use crate::matrix::{Matrix, PositiveDefiniteMatrix, SymmetricMatrix, Vector};
use crate::symplectic::SymplecticMatrix;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-ish orthogonal matrix from the QR factor of a uniform matrix.
pub fn orthogonal<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let g = Matrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let qr = QR::new(g);
    let (q, r) = qr.unpack();
    let signs = Matrix::from_diagonal(&Vector::from_iterator(
        n,
        (0..n).map(|i| if r[(i, i)] < 0.0 { -1.0 } else { 1.0 }),
    ));
    q * signs
}

/// Symmetric matrix with entries uniform in `[-scale, scale]`.
pub fn symmetric<R: Rng>(rng: &mut R, n: usize, scale: f64) -> SymmetricMatrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-scale..=scale);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymmetricMatrix::new(m).expect("symmetric by construction")
}

/// Positive-definite matrix with eigenvalues uniform in `[lo, hi]`.
pub fn positive_definite<R: Rng>(
    rng: &mut R,
    n: usize,
    lo: f64,
    hi: f64,
) -> PositiveDefiniteMatrix {
    let q = orthogonal(rng, n);
    let d = Matrix::from_diagonal(&Vector::from_iterator(
        n,
        (0..n).map(|_| rng.random_range(lo..=hi)),
    ));
    PositiveDefiniteMatrix::from_matrix(&q * d * q.transpose()).expect("PD by construction")
}

/// Invertible matrix with singular values in `[lo, hi]`.
pub fn invertible<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Matrix {
    let q1 = orthogonal(rng, n);
    let q2 = orthogonal(rng, n);
    let d = Matrix::from_diagonal(&Vector::from_iterator(
        n,
        (0..n).map(|_| rng.random_range(lo..=hi)),
    ));
    q1 * d * q2.transpose()
}

/// Random word of length `1..=max_len` in `J`, `M_L`, `V_P`.
pub fn symplectic_word<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> SymplecticMatrix {
    let len = rng.random_range(1..=max_len.max(1));
    let mut s = SymplecticMatrix::identity(n);
    for _ in 0..len {
        let g = match rng.random_range(0..3) {
            0 => SymplecticMatrix::j(n),
            1 => SymplecticMatrix::m_l(&invertible(rng, n, 0.6, 1.6)).expect("invertible"),
            _ => SymplecticMatrix::v_p(&symmetric(rng, n, 1.0)),
        };
        s = s.compose(&g);
    }
    s
}

/// Phase-space vector with entries uniform in `[-scale, scale]`.
pub fn vector<R: Rng>(rng: &mut R, len: usize, scale: f64) -> Vector {
    Vector::from_iterator(len, (0..len).map(|_| rng.random_range(-scale..=scale)))
}

/// Gaussian state with `X` eigenvalues in `[0.5, 2]`, `|Y_ij| <= 1`, `|z0_i| <= 2`.
pub fn gaussian_state<R: Rng>(rng: &mut R, n: usize, hbar: f64) -> GaussianState {
    let x = positive_definite(rng, n, 0.5, 2.0);
    let y = symmetric(rng, n, 1.0);
    let z0 = vector(rng, 2 * n, 2.0);
    GaussianState::new(hbar, x, y, z0).expect("valid by construction")
}
