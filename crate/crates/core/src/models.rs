//! Two-site spin models and their thermal states.
//!
//! Basis convention: indices 0..3 are |1,1>, |1,0>, |0,1>, |0,0>, with |1>
//! the sigma_z = +1 eigenstate. This is the Kronecker ordering of the Pauli
//! matrices in [`crate::linalg`], and every closed-form matrix element below
//! depends on it.
//!
//! Closed-form states are evaluated with all Boltzmann exponents shifted by
//! their maximum so that low temperatures never overflow. The shift cancels
//! in the normalized state.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QcorrError, Result};
use crate::linalg::{
    hermitian_eigen, sigma_x, sigma_y, sigma_z, tensor_product, trace_distance, ComplexMatrix,
};
use crate::measures::DensityMatrix;

/// Trace distance below which analytic and oracle states agree.
pub const CROSS_VALIDATION_TOL: f64 = 1e-10;

/// Parameters of `H = 1/2 [J(σxσx + σyσy) + Jz σzσz + (B+b) σz⊗1 + (B-b) 1⊗σz]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XxzParams {
    pub j: f64,
    pub jz: f64,
    pub field: f64,
    pub inhomogeneity: f64,
    pub temperature: f64,
}

/// Parameters of `H = J/2 [σ1·σ2 + D (σ1 × σ2)_z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XxxDmParams {
    pub j: f64,
    pub d: f64,
    pub temperature: f64,
}

fn check_temperature(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(QcorrError::DomainError(format!(
            "temperature must be positive and finite, got {t}"
        )))
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(QcorrError::DomainError(format!(
            "{name} must be finite, got {v}"
        )))
    }
}

impl XxzParams {
    pub fn validate(&self) -> Result<()> {
        check_finite("J", self.j)?;
        check_finite("Jz", self.jz)?;
        check_finite("B", self.field)?;
        check_finite("b", self.inhomogeneity)?;
        check_temperature(self.temperature)
    }
}

impl XxxDmParams {
    pub fn validate(&self) -> Result<()> {
        check_finite("J", self.j)?;
        check_finite("D", self.d)?;
        check_temperature(self.temperature)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Xxz,
    XxxDm,
}

/// A model Hamiltonian as a 4×4 Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    pub matrix: ComplexMatrix,
    pub label: ModelKind,
}

pub fn xxz_hamiltonian(p: &XxzParams) -> HamiltonianSpec {
    let (sx, sy, sz) = (sigma_x(), sigma_y(), sigma_z());
    let id = ComplexMatrix::identity(2);
    let flip_flop = &tensor_product(&sx, &sx) + &tensor_product(&sy, &sy);
    let mut h = flip_flop.scale_real(p.j);
    h = &h + &tensor_product(&sz, &sz).scale_real(p.jz);
    h = &h + &tensor_product(&sz, &id).scale_real(p.field + p.inhomogeneity);
    h = &h + &tensor_product(&id, &sz).scale_real(p.field - p.inhomogeneity);
    HamiltonianSpec {
        matrix: h.scale_real(0.5),
        label: ModelKind::Xxz,
    }
}

pub fn xxx_dm_hamiltonian(p: &XxxDmParams) -> HamiltonianSpec {
    let s = [sigma_x(), sigma_y(), sigma_z()];
    let mut h = ComplexMatrix::zeros(4);
    for sigma in &s {
        h = &h + &tensor_product(sigma, sigma);
    }
    let cross_z = &tensor_product(&s[0], &s[1]) - &tensor_product(&s[1], &s[0]);
    h = &h + &cross_z.scale_real(p.d);
    HamiltonianSpec {
        matrix: h.scale_real(0.5 * p.j),
        label: ModelKind::XxxDm,
    }
}

/// Thermal state `exp(-H/T) / Z` from the eigendecomposition of `H`.
///
/// Energies are shifted by the ground energy before exponentiating.
pub fn gibbs_state(h: &HamiltonianSpec, temperature: f64) -> Result<DensityMatrix> {
    check_temperature(temperature)?;
    let eig = hermitian_eigen(&h.matrix)?;
    let ground = eig.eigenvalues[0];
    let weights: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&e| (-(e - ground) / temperature).exp())
        .collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(QcorrError::Overflow(format!(
            "non-finite Boltzmann weight at T = {temperature}"
        )));
    }
    let z: f64 = weights.iter().sum();
    let rho = eig.apply(|e| (-(e - ground) / temperature).exp() / z);
    DensityMatrix::new(rho)
}

/// Closed-form ingredients of the XXZ thermal state.
///
/// `s` and `Z` carry a common factor `exp(-log_scale)`: the physical values
/// are `s_scaled * exp(log_scale)` and `z_scaled * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XxzThermalIntermediates {
    /// `sqrt(b² + J²)`.
    pub eta: f64,
    /// `cosh(eta/T)`.
    pub m: f64,
    /// `b sinh(eta/T) / eta`, zero when `b = 0`.
    pub n: f64,
    pub s_scaled: f64,
    pub z_scaled: f64,
    pub log_scale: f64,
}

impl XxzThermalIntermediates {
    /// `e^{Jz/(2T)} J sinh(eta/T) / eta`.
    pub fn s(&self) -> f64 {
        self.s_scaled * self.log_scale.exp()
    }

    /// Partition function.
    pub fn partition_function(&self) -> f64 {
        self.z_scaled * self.log_scale.exp()
    }
}

/// `sinh(x)/x · (1/T)` evaluated as `sinh(eta/T)/eta` times `e^{shift}`
/// without forming huge intermediates; `eta = 0` gives the limit `1/T`.
fn scaled_sinh_over(eta: f64, t: f64, shift: f64) -> f64 {
    let x = eta / t;
    if eta == 0.0 {
        return shift.exp() / t;
    }
    // sinh(x) e^{shift} = 1/2 e^{x + shift} (1 - e^{-2x})
    0.5 * (x + shift).exp() * (-(-2.0 * x).exp_m1()) / eta
}

fn exponent_guard(exponents: &[f64]) -> Result<f64> {
    let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(QcorrError::Overflow(format!(
            "non-finite Boltzmann exponent {max}"
        )));
    }
    Ok(max)
}

pub fn xxz_thermal_analytic(p: &XxzParams) -> Result<(DensityMatrix, XxzThermalIntermediates)> {
    p.validate()?;
    let t = p.temperature;
    let (j, jz, field, b) = (p.j, p.jz, p.field, p.inhomogeneity);
    let eta = b.hypot(j);

    // log weights of |11>, |00> and the central block prefactor e^{Jz/2T} e^{±eta/T}
    let a11 = -(jz + 2.0 * field) / (2.0 * t);
    let a00 = -(jz - 2.0 * field) / (2.0 * t);
    let central = jz / (2.0 * t);
    let top = exponent_guard(&[a11, a00, central + eta / t])?;
    let shift = central - top;

    let w11 = (a11 - top).exp();
    let w00 = (a00 - top).exp();
    // e^{Jz/2T} m  and  e^{Jz/2T} sinh(eta/T)/eta, both times e^{-top}
    let em = 0.5 * ((shift + eta / t).exp() + (shift - eta / t).exp());
    let esh = scaled_sinh_over(eta, t, shift);
    let en = if b == 0.0 { 0.0 } else { b * esh };
    let s_scaled = j * esh;

    let z_scaled = w11 + w00 + 2.0 * em;
    if !(z_scaled > 0.0) || !z_scaled.is_finite() {
        return Err(QcorrError::Overflow(format!(
            "partition function {z_scaled}"
        )));
    }

    let mut rho = ComplexMatrix::zeros(4);
    rho[(0, 0)] = Complex64::new(w11 / z_scaled, 0.0);
    rho[(1, 1)] = Complex64::new((em - en) / z_scaled, 0.0);
    rho[(2, 2)] = Complex64::new((em + en) / z_scaled, 0.0);
    rho[(3, 3)] = Complex64::new(w00 / z_scaled, 0.0);
    rho[(1, 2)] = Complex64::new(-s_scaled / z_scaled, 0.0);
    rho[(2, 1)] = Complex64::new(-s_scaled / z_scaled, 0.0);

    let n = if b == 0.0 {
        0.0
    } else {
        b * (eta / t).sinh() / eta
    };
    let intermediates = XxzThermalIntermediates {
        eta,
        m: (eta / t).cosh(),
        n,
        s_scaled,
        z_scaled,
        log_scale: top,
    };
    Ok((DensityMatrix::new(rho)?, intermediates))
}

/// Closed-form ingredients of the XXX+DM thermal state, all exponentials
/// carrying the common factor `exp(-log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XxxDmThermalIntermediates {
    /// `2J sqrt(1 + D²)`.
    pub delta: f64,
    pub z_scaled: f64,
    /// `e^{(J+δ)/2T}` scaled.
    pub l_plus_scaled: f64,
    /// `e^{(J-δ)/2T}` scaled.
    pub l_minus_scaled: f64,
    /// `1 + e^{δ/T}`.
    pub m_plus: f64,
    /// `-1 + e^{δ/T}`.
    pub m_minus: f64,
    /// Phase of the |1,0><0,1| coupling, `arctan(D)`.
    pub theta: f64,
    pub log_scale: f64,
}

impl XxxDmThermalIntermediates {
    pub fn partition_function(&self) -> f64 {
        self.z_scaled * self.log_scale.exp()
    }

    pub fn l_plus(&self) -> f64 {
        self.l_plus_scaled * self.log_scale.exp()
    }

    pub fn l_minus(&self) -> f64 {
        self.l_minus_scaled * self.log_scale.exp()
    }
}

pub fn xxx_dm_thermal_analytic(
    p: &XxxDmParams,
) -> Result<(DensityMatrix, XxxDmThermalIntermediates)> {
    p.validate()?;
    let t = p.temperature;
    let j = p.j;
    let delta = 2.0 * j * (1.0 + p.d * p.d).sqrt();
    let theta = p.d.atan();

    let a_end = -j / (2.0 * t);
    let a_plus = (j + delta) / (2.0 * t);
    let a_minus = (j - delta) / (2.0 * t);
    let top = exponent_guard(&[a_end, a_plus, a_minus])?;

    let w_end = (a_end - top).exp();
    let l_plus = (a_plus - top).exp();
    let l_minus = (a_minus - top).exp();
    // L₋M₊/2 = (L₊ + L₋)/2 and L₋M₋/2 = (L₊ - L₋)/2
    let diag = 0.5 * (l_plus + l_minus);
    let coherence = 0.5 * (l_plus - l_minus);
    let z_scaled = 2.0 * w_end + l_plus + l_minus;
    if !(z_scaled > 0.0) || !z_scaled.is_finite() {
        return Err(QcorrError::Overflow(format!(
            "partition function {z_scaled}"
        )));
    }

    let phase = Complex64::from_polar(1.0, theta);
    let mut rho = ComplexMatrix::zeros(4);
    rho[(0, 0)] = Complex64::new(w_end / z_scaled, 0.0);
    rho[(3, 3)] = Complex64::new(w_end / z_scaled, 0.0);
    rho[(1, 1)] = Complex64::new(diag / z_scaled, 0.0);
    rho[(2, 2)] = Complex64::new(diag / z_scaled, 0.0);
    rho[(1, 2)] = -phase * (coherence / z_scaled);
    rho[(2, 1)] = -phase.conj() * (coherence / z_scaled);

    let e_delta = (delta / t).exp();
    let intermediates = XxxDmThermalIntermediates {
        delta,
        z_scaled,
        l_plus_scaled: l_plus,
        l_minus_scaled: l_minus,
        m_plus: 1.0 + e_delta,
        m_minus: -1.0 + e_delta,
        theta,
        log_scale: top,
    };
    Ok((DensityMatrix::new(rho)?, intermediates))
}

/// Closed-form geometric discord of the zero-field XXX thermal state,
/// `1 / (2 (1 - 2 coth(J/T))²)`.
pub fn eq1_gqd_xxx(j: f64, temperature: f64) -> Result<f64> {
    check_temperature(temperature)?;
    if j == 0.0 || !j.is_finite() {
        return Err(QcorrError::DomainError(format!(
            "closed-form XXX discord needs finite nonzero J, got {j}"
        )));
    }
    let coth = 1.0 / (j / temperature).tanh();
    let denom = 1.0 - 2.0 * coth;
    Ok(1.0 / (2.0 * denom * denom))
}

/// A single model evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelPoint {
    Xxz(XxzParams),
    XxxDm(XxxDmParams),
}

impl ModelPoint {
    pub fn hamiltonian(&self) -> HamiltonianSpec {
        match self {
            ModelPoint::Xxz(p) => xxz_hamiltonian(p),
            ModelPoint::XxxDm(p) => xxx_dm_hamiltonian(p),
        }
    }

    pub fn temperature(&self) -> f64 {
        match self {
            ModelPoint::Xxz(p) => p.temperature,
            ModelPoint::XxxDm(p) => p.temperature,
        }
    }

    /// Thermal state from the closed form.
    pub fn thermal_state(&self) -> Result<DensityMatrix> {
        match self {
            ModelPoint::Xxz(p) => xxz_thermal_analytic(p).map(|(rho, _)| rho),
            ModelPoint::XxxDm(p) => xxx_dm_thermal_analytic(p).map(|(rho, _)| rho),
        }
    }

    /// Thermal state from diagonalizing the Hamiltonian.
    pub fn gibbs_oracle(&self) -> Result<DensityMatrix> {
        gibbs_state(&self.hamiltonian(), self.temperature())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossValidation {
    pub point: ModelPoint,
    pub trace_distance: f64,
    pub pass: bool,
}

/// Trace distance between the closed-form and Gibbs-oracle thermal states.
pub fn cross_validate(point: &ModelPoint) -> Result<CrossValidation> {
    let analytic = point.thermal_state()?;
    let oracle = point.gibbs_oracle()?;
    let d = trace_distance(analytic.matrix(), oracle.matrix())?;
    Ok(CrossValidation {
        point: *point,
        trace_distance: d,
        pass: d < CROSS_VALIDATION_TOL,
    })
}

/// `n` evenly spaced points over `[lo, hi]` (inclusive).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Points of the oracle-equivalence grid: (J, Jz, B, b) on a 5⁴ grid over
/// [-2, 2]⁴ and (J, D) on a 5² grid over [-2, 2]², each at T ∈ {0.1, 0.5, 2}.
pub fn validation_grid() -> Vec<ModelPoint> {
    let axis = linspace(-2.0, 2.0, 5);
    let temps = [0.1, 0.5, 2.0];
    let mut points = Vec::new();
    for &temperature in &temps {
        for &j in &axis {
            for &jz in &axis {
                for &field in &axis {
                    for &inhomogeneity in &axis {
                        points.push(ModelPoint::Xxz(XxzParams {
                            j,
                            jz,
                            field,
                            inhomogeneity,
                            temperature,
                        }));
                    }
                }
            }
        }
        for &j in &axis {
            for &d in &axis {
                points.push(ModelPoint::XxxDm(XxxDmParams { j, d, temperature }));
            }
        }
    }
    points
}
