//! Seeded random instances.
//!
//! All randomness flows through [`Pcg64`] seeded from a `(seed, stream)`
//! pair, so a trial's instance depends only on its index and never on
//! scheduling order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
pub use rand_pcg::Pcg64;

use crate::matfun::{CMatrix, DensityMatrix, HermitianMatrix};

/// Name of the generator, recorded in reports.
pub const GENERATOR_NAME: &str = "Pcg64 (PCG XSL RR 128/64, rand_pcg 0.9)";

/// Independent generator for trial `stream` of a run seeded with `seed`.
pub fn rng_for(seed: u64, stream: u64) -> Pcg64 {
    // splitmix64 of the stream index decorrelates neighbouring streams
    let mut z = stream.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&z.to_le_bytes());
    bytes[16..24].copy_from_slice(&(!seed).to_le_bytes());
    bytes[24..].copy_from_slice(&stream.to_le_bytes());
    Pcg64::from_seed(bytes)
}

pub fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Matrix of i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    DMatrix::from_fn(n, n, |_, _| standard_complex(rng))
}

/// `(A + A†)/2` for Gaussian `A`, rescaled to unit operator norm.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let a = gaussian_matrix(rng, n);
    let h = HermitianMatrix::hermitian_part(&a);
    let norm = h.op_norm();
    h.scale(1.0 / norm)
}

/// `A A† + ε𝕀` normalized to unit trace, `ε = 10⁻³/n`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let a = gaussian_matrix(rng, n);
    let p = HermitianMatrix::hermitian_part(&(&a * a.adjoint()));
    let p = p.scale(1.0 / p.trace()).shift(1e-3 / n as f64);
    DensityMatrix::normalized(p).expect("shifted Gram matrix is faithful")
}

/// Random diagonal (classical) density matrix.
pub fn random_diagonal_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = raw.iter().sum();
    let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
    DensityMatrix::normalized(HermitianMatrix::from_diagonal(&p)).expect("positive diagonal")
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let a = gaussian_matrix(rng, n);
    let qr = a.qr();
    qr.q()
}
