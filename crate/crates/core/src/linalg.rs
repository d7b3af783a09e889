//! Dense complex matrices for small Hermitian operators.
//!
//! Everything here is sized for single- and two-qubit work (dimension 2, 3
//! or 4). Storage is row-major. The eigensolver is a cyclic complex Jacobi
//! iteration, which is deterministic and accurate to machine precision at
//! these sizes.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{QcorrError, Result};

/// Hermiticity tolerance on `max |A[j][k] - conj(A[k][j])|`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Off-diagonal convergence threshold for the Jacobi sweeps, relative to the
/// Frobenius norm of the input.
pub const JACOBI_TOL: f64 = 1e-14;

/// Sweep limit for the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues of a state in `(-ENTROPY_CLAMP, 0)` are treated as zero.
pub const ENTROPY_CLAMP: f64 = 1e-10;

/// Trace tolerance accepted by [`von_neumann_entropy`].
pub const ENTROPY_TRACE_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    /// Builds a matrix from a row-major entry vector of length `dim²`.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(QcorrError::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (j, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), dim, "row {j} has the wrong length");
            for (k, &z) in row.iter().enumerate() {
                m[(j, k)] = z;
            }
        }
        m
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for j in 0..dim {
            for k in 0..dim {
                m[(j, k)] = v[j] * v[k].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|k| self[(k, k)]).collect()
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim).map(|j| self[(j, k)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m[(j, k)] = self[(k, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m[(j, k)] = self[(k, j)];
            }
        }
        m
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `max_jk |A[j][k] - conj(A[k][j])|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for j in 0..self.dim {
            for k in j..self.dim {
                worst = worst.max((self[(j, k)] - self[(k, j)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() < HERMITIAN_TOL
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Conjugation `U A U†`.
    pub fn conjugate_by(&self, unitary: &Self) -> Self {
        &(unitary * self) * &unitary.adjoint()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.dim {
            for k in 0..self.dim {
                if j != k {
                    acc += self[(j, k)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (j, k): (usize, usize)) -> &Complex64 {
        &self.entries[j * self.dim + k]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (j, k): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[j * self.dim + k]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for j in 0..n {
            for l in 0..n {
                let a = self[(j, l)];
                if a == ZERO {
                    continue;
                }
                for k in 0..n {
                    out[(j, k)] += a * rhs[(l, k)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for j in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|k| {
                    let z = self[(j, k)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Pauli matrices in the basis (|1>, |0>) where |1> is the sigma_z = +1
/// eigenstate, so sigma_z = diag(1, -1).
pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]])
}

/// The three Pauli matrices, indexed 0..3 as x, y, z.
pub fn paulis() -> [ComplexMatrix; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

/// Kronecker product: entry `(i*n + p, j*n + q)` is `A[i][j] * B[p][q]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(m * n);
    for i in 0..m {
        for j in 0..m {
            let aij = a[(i, j)];
            for p in 0..n {
                for q in 0..n {
                    out[(i * n + p, j * n + q)] = aij * b[(p, q)];
                }
            }
        }
    }
    out
}

/// Which qubit of a two-qubit operator to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced 2×2 operator of a 4×4 two-qubit operator.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim != 4 {
        return Err(QcorrError::DimensionMismatch {
            expected: 4,
            got: rho.dim,
        });
    }
    let mut out = ComplexMatrix::zeros(2);
    for j in 0..2 {
        for k in 0..2 {
            out[(j, k)] = match keep {
                Subsystem::A => rho[(2 * j, 2 * k)] + rho[(2 * j + 1, 2 * k + 1)],
                Subsystem::B => rho[(j, k)] + rho[(2 + j, 2 + k)],
            };
        }
    }
    Ok(out)
}

/// Spectrum and column eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenDecomposition {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(f(lambda)) V†`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for j in 0..n {
                let vj = v[(j, k)] * w;
                for l in 0..n {
                    out[(j, l)] += vj * v[(l, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| x)
    }
}

/// Cyclic complex Jacobi eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back ascending. Each eigenvector is rotated so that its
/// first component of largest modulus is real and non-negative. Degenerate
/// eigenvalues keep the order the sweeps produced them in.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigenDecomposition> {
    let deviation = a.hermiticity_deviation();
    if !(deviation < HERMITIAN_TOL) {
        return Err(QcorrError::NotHermitian { deviation });
    }
    let n = a.dim;
    // Work on the exactly Hermitian part.
    let mut work = a.clone();
    for j in 0..n {
        work[(j, j)] = Complex64::new(work[(j, j)].re, 0.0);
        for k in (j + 1)..n {
            let avg = (work[(j, k)] + work[(k, j)].conj()) * 0.5;
            work[(j, k)] = avg;
            work[(k, j)] = avg.conj();
        }
    }
    let mut vecs = ComplexMatrix::identity(n);
    let threshold = JACOBI_TOL * work.frobenius_norm().max(f64::MIN_POSITIVE);

    let mut converged = work.off_diagonal_norm() <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(QcorrError::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut work, &mut vecs, p, q);
            }
        }
        converged = work.off_diagonal_norm() <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|k| work[(k, k)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));

    let mut eigenvectors = ComplexMatrix::zeros(n);
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    for (col, &k) in order.iter().enumerate() {
        let mut v = vecs.column(k);
        fix_phase(&mut v);
        for (j, z) in v.into_iter().enumerate() {
            eigenvectors[(j, col)] = z;
        }
    }
    Ok(HermitianEigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation annihilating `work[(p, q)]`.
///
/// The rotation is `G = diag(1, e^{-i phi}) R(c, s)` on the (p, q) plane,
/// where `phi = arg work[(p, q)]`, which reduces the pivot block to the real
/// symmetric case. `work <- G† work G`, `vecs <- vecs G`.
fn rotate(work: &mut ComplexMatrix, vecs: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = work[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = work[(p, p)].re;
    let aqq = work[(q, q)].re;
    let phase = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = [[g_pp, g_pq], [g_qp, g_qq]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = work.dim;
    // work <- work G (columns p, q)
    for j in 0..n {
        let wp = work[(j, p)];
        let wq = work[(j, q)];
        work[(j, p)] = wp * g_pp + wq * g_qp;
        work[(j, q)] = wp * g_pq + wq * g_qq;
    }
    // work <- G† work (rows p, q)
    for k in 0..n {
        let wp = work[(p, k)];
        let wq = work[(q, k)];
        work[(p, k)] = g_pp.conj() * wp + g_qp.conj() * wq;
        work[(q, k)] = g_pq.conj() * wp + g_qq.conj() * wq;
    }
    work[(p, q)] = ZERO;
    work[(q, p)] = ZERO;
    work[(p, p)] = Complex64::new(work[(p, p)].re, 0.0);
    work[(q, q)] = Complex64::new(work[(q, q)].re, 0.0);

    for j in 0..n {
        let vp = vecs[(j, p)];
        let vq = vecs[(j, q)];
        vecs[(j, p)] = vp * g_pp + vq * g_qp;
        vecs[(j, q)] = vp * g_pq + vq * g_qq;
    }
}

/// Rotates `v` so its first component of (near-)largest modulus is real
/// and non-negative.
fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max - 1e-12)
        .expect("a component attains the maximum");
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[pivot] = Complex64::new(v[pivot].norm(), 0.0);
}

/// Singular values in descending order, by one-sided (Hestenes) Jacobi
/// orthogonalization of the columns. Small singular values come out with
/// absolute error near machine epsilon times the norm.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.dim;
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let norm_sqr = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sqr(&cols[p]);
                let beta = norm_sqr(&cols[q]);
                let gamma: Complex64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = gamma.norm();
                if g <= JACOBI_TOL * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let x = cols[p][k];
                    let y = cols[q][k] * phase;
                    cols[p][k] = x * c - y * s;
                    cols[q][k] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(QcorrError::NoConvergence { sweeps });
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// `V diag(f(lambda)) V†` for Hermitian `a`.
pub fn matrix_function_hermitian<F: Fn(f64) -> f64>(
    a: &ComplexMatrix,
    f: F,
) -> Result<ComplexMatrix> {
    Ok(hermitian_eigen(a)?.apply(f))
}

/// Clamps a spectrum that should be non-negative, rejecting eigenvalues
/// below `-tol`.
pub(crate) fn clamp_spectrum(eigenvalues: &[f64], tol: f64) -> Result<Vec<f64>> {
    eigenvalues
        .iter()
        .map(|&x| {
            if x < -tol || x.is_nan() {
                Err(QcorrError::NotPositive { min_eigenvalue: x })
            } else {
                Ok(x.max(0.0))
            }
        })
        .collect()
}

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
pub fn shannon_entropy_bits(probs: &[f64]) -> f64 {
    let s: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    // -0.0 from a single unit weight
    s.max(0.0)
}

/// Von Neumann entropy `-tr rho log2 rho` in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let trace = rho.trace();
    let deviation = (trace - ONE).norm();
    if !(deviation <= ENTROPY_TRACE_TOL) {
        return Err(QcorrError::NotAState(format!(
            "trace deviates from 1 by {deviation:e}"
        )));
    }
    let eig = hermitian_eigen(rho)?;
    let spectrum = clamp_spectrum(&eig.eigenvalues, ENTROPY_CLAMP).map_err(|e| match e {
        QcorrError::NotPositive { min_eigenvalue } => {
            QcorrError::NotAState(format!("negative eigenvalue {min_eigenvalue:e}"))
        }
        other => other,
    })?;
    Ok(shannon_entropy_bits(&spectrum))
}

/// Trace distance `1/2 ||a - b||_1` between Hermitian matrices.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = a - b;
    let eig = hermitian_eigen(&diff)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}
