//! Seeded random quantum objects for property checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::qmatrix::{
    validate_density, validate_hermitian, Complex64, ComplexMatrix, DensityMatrix,
    HermitianOperator, DEFAULT_TOLERANCE,
};

/// Seed used when a definition or caller does not supply one.
pub const DEFAULT_SEED: u64 = 20_021_014;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Hermitian matrix with entries in the unit box.
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> HermitianOperator {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in (i + 1)..n {
            let z = random_complex(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    validate_hermitian(&m, DEFAULT_TOLERANCE).expect("constructed Hermitian")
}

/// `A A† / Tr(A A†)` for a random complex `A`.
pub fn random_density(rng: &mut impl Rng, n: usize) -> DensityMatrix {
    let a =
        ComplexMatrix::new(n, n, (0..n * n).map(|_| random_complex(rng)).collect()).expect("shape");
    let aa = a.multiply(&a.dagger()).expect("square");
    let t = aa.trace().expect("square").re;
    let rho = aa.scale_real(1.0 / t);
    let rho = &rho.scale_real(0.5) + &rho.dagger().scale_real(0.5);
    validate_density(&rho, DEFAULT_TOLERANCE).expect("constructed density matrix")
}

/// Unitary from Gram–Schmidt on the columns of a random complex matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| random_complex(rng)).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            m[(i, j)] = *z;
        }
    }
    m
}

/// Random normalized state vector.
pub fn random_state(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| random_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}
