//! Correlation quantifiers for two-qubit density matrices: concurrence, the
//! Horodecki Bell-CHSH quantity, measurement-induced disturbance (MID) and
//! geometric quantum discord (GQD).
//!
//! Qubit basis ordering follows [`crate::linalg`]: index 0 of each qubit is
//! the sigma_z = +1 state, so the two-qubit basis is |11>, |10>, |01>, |00>.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QcorrError, Result};
use crate::linalg::{
    clamp_spectrum, hermitian_eigen, partial_trace, paulis, sigma_y, singular_values,
    tensor_product, von_neumann_entropy, ComplexMatrix, Subsystem, HERMITIAN_TOL,
};

/// Trace tolerance of a valid state.
pub const STATE_TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for a valid state.
pub const STATE_EIGEN_TOL: f64 = 1e-10;
/// Eigenvalues of R (and of marginals) in `(-NEGATIVE_CLAMP, 0)` clamp to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-8;
/// Marginal eigenvalue gap below which the computational basis is used for MID.
pub const DEGENERATE_GAP: f64 = 1e-10;

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Checks hermiticity, unit trace and positivity, in that order.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(QcorrError::DimensionMismatch {
                expected: 4,
                got: matrix.dim(),
            });
        }
        let deviation = matrix.hermiticity_deviation();
        if !(deviation < HERMITIAN_TOL) {
            return Err(QcorrError::NotHermitian { deviation });
        }
        let deviation = (matrix.trace() - Complex64::new(1.0, 0.0)).norm();
        if !(deviation <= STATE_TRACE_TOL) {
            return Err(QcorrError::TraceNotOne { deviation });
        }
        let min_eigenvalue = hermitian_eigen(&matrix)?.eigenvalues[0];
        if min_eigenvalue < -STATE_EIGEN_TOL {
            return Err(QcorrError::NotPositive { min_eigenvalue });
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(4).scale_real(0.25))
    }

    /// Normalized projector onto a pure state vector.
    pub fn pure(psi: &[Complex64; 4]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(QcorrError::NotAState("zero state vector".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v))
    }

    /// Qubit exchange `SWAP rho SWAP`.
    pub fn swapped(&self) -> Self {
        const PERM: [usize; 4] = [0, 2, 1, 3];
        let mut out = ComplexMatrix::zeros(4);
        for j in 0..4 {
            for k in 0..4 {
                out[(PERM[j], PERM[k])] = self.0[(j, k)];
            }
        }
        Self(out)
    }

    /// `U rho U†` for a unitary `U`; the result is revalidated.
    pub fn transformed(&self, unitary: &ComplexMatrix) -> Result<Self> {
        Self::new(self.0.conjugate_by(unitary))
    }

    pub fn marginal(&self, keep: Subsystem) -> ComplexMatrix {
        partial_trace(&self.0, keep).expect("density matrices are 4x4")
    }
}

/// Local Bloch vectors and spin correlation matrix of a two-qubit state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlochDecomposition {
    pub x: [f64; 3],
    pub y: [f64; 3],
    /// `t[i][j] = tr[rho sigma_i ⊗ sigma_j]`.
    pub t: [[f64; 3]; 3],
}

impl BlochDecomposition {
    /// `1/4 [I⊗I + Σ x_i σ_i⊗I + Σ y_i I⊗σ_i + Σ t_ij σ_i⊗σ_j]`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2);
        let s = paulis();
        let mut acc = ComplexMatrix::identity(4);
        for i in 0..3 {
            acc = &acc + &tensor_product(&s[i], &id).scale_real(self.x[i]);
            acc = &acc + &tensor_product(&id, &s[i]).scale_real(self.y[i]);
            for j in 0..3 {
                acc = &acc + &tensor_product(&s[i], &s[j]).scale_real(self.t[i][j]);
            }
        }
        acc.scale_real(0.25)
    }

    pub fn x_norm_sqr(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum()
    }

    pub fn t_norm_sqr(&self) -> f64 {
        self.t.iter().flatten().map(|v| v * v).sum()
    }
}

/// Expectation `tr[rho op]`, real part only.
fn expectation(rho: &ComplexMatrix, op: &ComplexMatrix) -> f64 {
    let n = rho.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            acc += rho[(j, k)] * op[(k, j)];
        }
    }
    acc.re
}

pub fn bloch_decompose(rho: &DensityMatrix) -> BlochDecomposition {
    let m = rho.matrix();
    let id = ComplexMatrix::identity(2);
    let s = paulis();
    let mut out = BlochDecomposition {
        x: [0.0; 3],
        y: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        out.x[i] = expectation(m, &tensor_product(&s[i], &id));
        out.y[i] = expectation(m, &tensor_product(&id, &s[i]));
        for j in 0..3 {
            out.t[i][j] = expectation(m, &tensor_product(&s[i], &s[j]));
        }
    }
    out
}

/// Eigenvalues of a real symmetric 3×3 matrix, descending.
fn symmetric_eigenvalues_desc(a: &[[f64; 3]; 3]) -> Result<[f64; 3]> {
    let eig = hermitian_eigen(&ComplexMatrix::from_real_rows(a))?;
    let v = eig.eigenvalues;
    Ok([v[2], v[1], v[0]])
}

fn mat3_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn mat3_transpose(a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

/// Horodecki Bell-CHSH quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellQuantities {
    /// Eigenvalues of `TᵗT`, descending.
    pub u: [f64; 3],
    /// `u[0] + u[1]`; the state violates a CHSH inequality iff `m > 1`.
    pub m: f64,
    /// `max(0, m - 1)`.
    pub violation: f64,
}

pub fn bell_quantities(rho: &DensityMatrix) -> Result<BellQuantities> {
    bell_from_bloch(&bloch_decompose(rho))
}

fn bell_from_bloch(bloch: &BlochDecomposition) -> Result<BellQuantities> {
    let u_mat = mat3_mul(&mat3_transpose(&bloch.t), &bloch.t);
    let u = symmetric_eigenvalues_desc(&u_mat)?;
    let m = u[0] + u[1];
    Ok(BellQuantities {
        u,
        m,
        violation: (m - 1.0).max(0.0),
    })
}

/// Wootters concurrence and the spin-flip roots it is built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcurrenceQuantities {
    /// Square roots of the eigenvalues of `R = rho S rho* S`, descending.
    pub lambdas: [f64; 4],
    pub concurrence: f64,
}

/// Concurrence `max(0, 2 max λ - Σ λ)`.
///
/// `R = rho S rho* S` is not Hermitian, but it is similar to the Hermitian
/// PSD matrix `sqrt(rho) (S rho* S) sqrt(rho)`, so the spectrum is taken from
/// that instead.
pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceQuantities> {
    let m = rho.matrix();
    let flip = tensor_product(&sigma_y(), &sigma_y());
    let flipped = &(&flip * &m.conj()) * &flip;
    let eig = hermitian_eigen(m)?;
    let sqrt_rho = eig.apply(|x| x.max(0.0).sqrt());
    let sqrt_flipped = &(&flip * &sqrt_rho.conj()) * &flip;
    let mut h = &(&sqrt_rho * &flipped) * &sqrt_rho;
    h = (&h + &h.adjoint()).scale_real(0.5);
    if let Some(&bad) = hermitian_eigen(&h)?
        .eigenvalues
        .iter()
        .find(|&&x| x < -NEGATIVE_CLAMP)
    {
        return Err(QcorrError::NumericalFailure(format!(
            "spin-flip matrix has negative eigenvalue {bad:e}"
        )));
    }
    let sv = singular_values(&(&sqrt_rho * &sqrt_flipped))?;
    let mut lambdas = [0.0; 4];
    lambdas.copy_from_slice(&sv);
    let sum: f64 = lambdas.iter().sum();
    let concurrence = (2.0 * lambdas[0] - sum).max(0.0);
    Ok(ConcurrenceQuantities {
        lambdas,
        concurrence,
    })
}

/// Result of the marginal-spectral local measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalProjection {
    pub projected: DensityMatrix,
    /// Marginal spectra, descending, for parties a and b.
    pub marginal_spectra: [[f64; 2]; 2],
    /// Set when a marginal is degenerate and the computational basis is used.
    pub degenerate: [bool; 2],
}

/// Eigenprojectors of a single-qubit marginal ordered by descending
/// eigenvalue, with the computational-basis fallback for a degenerate pair.
fn marginal_projectors(marginal: &ComplexMatrix) -> Result<([ComplexMatrix; 2], [f64; 2], bool)> {
    let eig = hermitian_eigen(marginal)?;
    let spectrum = clamp_spectrum(&eig.eigenvalues, NEGATIVE_CLAMP)?;
    let spectrum = [spectrum[1], spectrum[0]];
    if spectrum[0] - spectrum[1] < DEGENERATE_GAP {
        let p0 = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
        return Ok(([p0, p1], spectrum, true));
    }
    let high = ComplexMatrix::outer(&eig.eigenvector(1));
    let low = ComplexMatrix::outer(&eig.eigenvector(0));
    Ok(([high, low], spectrum, false))
}

/// `Π(rho) = Σ_ij (Π_i^a ⊗ Π_j^b) rho (Π_i^a ⊗ Π_j^b)` with projectors from
/// the spectral resolutions of the two marginals.
pub fn classical_projection(rho: &DensityMatrix) -> Result<ClassicalProjection> {
    let (pa, sa, da) = marginal_projectors(&rho.marginal(Subsystem::A))?;
    let (pb, sb, db) = marginal_projectors(&rho.marginal(Subsystem::B))?;
    let m = rho.matrix();
    let mut acc = ComplexMatrix::zeros(4);
    for a in &pa {
        for b in &pb {
            let p = tensor_product(a, b);
            acc = &acc + &(&(&p * m) * &p);
        }
    }
    Ok(ClassicalProjection {
        projected: DensityMatrix(acc),
        marginal_spectra: [sa, sb],
        degenerate: [da, db],
    })
}

/// Quantum mutual information `S(rho_a) + S(rho_b) - S(rho)` in bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let sa = von_neumann_entropy(&rho.marginal(Subsystem::A))?;
    let sb = von_neumann_entropy(&rho.marginal(Subsystem::B))?;
    let s = von_neumann_entropy(rho.matrix())?;
    Ok(sa + sb - s)
}

/// Measurement-induced disturbance and its ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct MidQuantities {
    pub marginal_spectra: [[f64; 2]; 2],
    pub projected_state: DensityMatrix,
    /// `I(rho)`.
    pub total_mi: f64,
    /// `I(Π(rho))`.
    pub classical_mi: f64,
    /// `total_mi - classical_mi`, unclamped.
    pub mid_raw: f64,
    /// `max(0, mid_raw)`.
    pub mid: f64,
    pub degenerate_marginal: [bool; 2],
}

pub fn mid(rho: &DensityMatrix) -> Result<MidQuantities> {
    let projection = classical_projection(rho)?;
    let total_mi = mutual_information(rho)?;
    // Π(rho) is diagonal in a product eigenbasis, so its mutual information
    // is that of the joint outcome distribution.
    let classical_mi = mutual_information(&projection.projected)?;
    let mid_raw = total_mi - classical_mi;
    Ok(MidQuantities {
        marginal_spectra: projection.marginal_spectra,
        projected_state: projection.projected,
        total_mi,
        classical_mi,
        mid_raw,
        mid: mid_raw.max(0.0),
        degenerate_marginal: projection.degenerate,
    })
}

/// Geometric discord with respect to a measurement on party a.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GqdQuantities {
    /// Largest eigenvalue of `x xᵗ + T Tᵗ`.
    pub k_max: f64,
    pub gqd: f64,
}

pub fn gqd(rho: &DensityMatrix) -> Result<GqdQuantities> {
    gqd_from_bloch(&bloch_decompose(rho))
}

fn gqd_from_bloch(bloch: &BlochDecomposition) -> Result<GqdQuantities> {
    let mut k = mat3_mul(&bloch.t, &mat3_transpose(&bloch.t));
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] += bloch.x[i] * bloch.x[j];
        }
    }
    let k_max = symmetric_eigenvalues_desc(&k)?[0];
    let gqd = 0.25 * (bloch.x_norm_sqr() + bloch.t_norm_sqr() - k_max);
    Ok(GqdQuantities { k_max, gqd })
}

/// All four measures evaluated on one state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub bloch: BlochDecomposition,
    pub bell: BellQuantities,
    pub conc: ConcurrenceQuantities,
    pub mid: MidQuantities,
    pub gqd: GqdQuantities,
}

pub fn full_report(rho: &DensityMatrix) -> Result<MeasureReport> {
    let bloch = bloch_decompose(rho);
    let bell = bell_from_bloch(&bloch)?;
    let gqd = gqd_from_bloch(&bloch)?;
    Ok(MeasureReport {
        bell,
        conc: concurrence(rho)?,
        mid: mid(rho)?,
        gqd,
        bloch,
    })
}
