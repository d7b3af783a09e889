#![allow(dead_code)]

use num_complex::Complex64;
use qcorr::linalg::{tensor_product, ComplexMatrix};
use qcorr::DensityMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let entries = (0..dim * dim).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_entries(dim, entries).unwrap()
}

/// `G G† / tr(G G†)` for a complex Gaussian `G`.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    w.scale_real(1.0 / tr)
}

pub fn random_state(rng: &mut impl Rng) -> DensityMatrix {
    DensityMatrix::new(random_density(rng, 4)).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Haar-ish single-qubit unitary `e^{i a} [[u, -v*], [v, u*]]` from a
/// normalized Gaussian 4-vector.
pub fn random_unitary2(rng: &mut impl Rng) -> ComplexMatrix {
    let u = gaussian(rng);
    let v = gaussian(rng);
    let n = (u.norm_sqr() + v.norm_sqr()).sqrt();
    let (u, v) = (u / n, v / n);
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    ComplexMatrix::from_rows(&[
        [u * phase, -v.conj() * phase],
        [v * phase, u.conj() * phase],
    ])
}

pub fn random_local_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    tensor_product(&random_unitary2(rng), &random_unitary2(rng))
}

/// `Σ_k p_k |k><k| ⊗ rho_k` with `{|k>}` a random orthonormal basis of
/// qubit a.
pub fn random_classical_quantum(rng: &mut impl Rng) -> DensityMatrix {
    let basis = random_unitary2(rng);
    let p: f64 = rng.random_range(0.0..1.0);
    let mut acc = ComplexMatrix::zeros(4);
    for (k, weight) in [(0, p), (1, 1.0 - p)] {
        let proj = ComplexMatrix::outer(&basis.column(k));
        let local = random_density(rng, 2);
        acc = &acc + &tensor_product(&proj, &local).scale_real(weight);
    }
    DensityMatrix::new(acc).unwrap()
}

pub fn bell_phi_plus() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    DensityMatrix::pure(&[Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)]).unwrap()
}
