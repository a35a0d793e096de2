//! Seeded random generation of states, product states, and local unitaries.
//!
//! Amplitudes are drawn as standard complex normals and normalized, which
//! gives the rotation-invariant (Haar-like) distribution on the sphere.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::state::{ProductState, PureState};

/// Deterministic generator for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    // Box-Muller from uniform draws; two independent N(0,1) components.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (-2.0 * u1.ln()).sqrt();
    Complex64::new(r * u2.cos(), r * u2.sin())
}

/// A random normalized pure state on the given local dimensions.
pub fn random_state<R: Rng>(dims: &[usize], rng: &mut R) -> PureState {
    let total: usize = dims.iter().product();
    loop {
        let amps: Vec<Complex64> = (0..total).map(|_| complex_normal(rng)).collect();
        if let Ok(s) = PureState::new(dims.to_vec(), amps) {
            return s;
        }
    }
}

/// A random product state with one normalized local vector per party.
pub fn random_product_state<R: Rng>(dims: &[usize], rng: &mut R) -> ProductState {
    loop {
        let factors: Vec<Vec<Complex64>> = dims
            .iter()
            .map(|&d| (0..d).map(|_| complex_normal(rng)).collect())
            .collect();
        if let Ok(p) = ProductState::new(factors) {
            return p;
        }
    }
}

/// A nonzero random complex coefficient with magnitude in roughly [0.1, 2].
pub fn random_coeff<R: Rng>(rng: &mut R) -> Complex64 {
    let mag: f64 = rng.gen_range(0.1..2.0);
    let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::new(mag * phase.cos(), mag * phase.sin())
}

/// A Haar-random `d x d` unitary via Gram-Schmidt on a complex Gaussian
/// matrix.
pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    loop {
        let g = DMatrix::from_fn(d, d, |_, _| complex_normal(rng));
        if let Some(u) = gram_schmidt(&g) {
            return u;
        }
    }
}

fn gram_schmidt(g: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    let d = g.nrows();
    let mut cols: Vec<DVector<Complex64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = g.column(j).into_owned();
        for u in &cols {
            let proj = u.dotc(&v);
            v -= u * proj;
        }
        let norm = v.norm();
        if norm < 1e-10 {
            return None;
        }
        v /= Complex64::new(norm, 0.0);
        cols.push(v);
    }
    Some(DMatrix::from_columns(&cols))
}
