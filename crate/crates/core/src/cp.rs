//! Complete-positivity decisions for diagonal affine maps.
//!
//! For a unital map the Choi matrix is diagonal in the `|Φ_{s,t}⟩` basis and
//! its spectrum is the μ-vector `μ = (F ⊗ F†)^{⊗n} λ / d^n`, so positivity is a
//! sign test on a Fourier transform of λ. With a displacement the spectrum
//! has no closed form and the Choi matrix is diagonalized numerically.

use serde::{Deserialize, Serialize};

use crate::channel::{choi, require_valid, AffineChannel};
use crate::error::{Error, Result};
use crate::linalg::{dagger, hermitian_eigenvalues, kron_power_matvec, tensor, ComplexMatrix, C64, DEFAULT_EIGEN_TOL};
use crate::pauli::{check_dimension, joint_dim, qft, PauliString};

/// Default half-width of the boundary band around a zero margin.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Largest imaginary residue in μ accepted before it is discarded.
pub const MU_IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Cp,
    NotCp,
    Boundary,
}

impl Verdict {
    pub fn from_margin(margin: f64, tolerance: f64) -> Self {
        if margin >= tolerance {
            Verdict::Cp
        } else if margin <= -tolerance {
            Verdict::NotCp
        } else {
            Verdict::Boundary
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Cp => "cp",
            Verdict::NotCp => "not_cp",
            Verdict::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "qft-spectral")]
    QftSpectral,
    #[serde(rename = "choi-eigen")]
    ChoiEigen,
    #[serde(rename = "sufficient-bound")]
    SufficientBound,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::QftSpectral => "qft-spectral",
            Method::ChoiEigen => "choi-eigen",
            Method::SufficientBound => "sufficient-bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpReport {
    pub verdict: Verdict,
    pub method: Method,
    /// Ascending.
    #[serde(with = "crate::io::sig12_vec")]
    pub spectrum: Vec<f64>,
    #[serde(with = "crate::io::sig12_f64")]
    pub margin: f64,
    #[serde(with = "crate::io::sig12_f64")]
    pub tolerance: f64,
}

impl CpReport {
    pub fn from_spectrum(method: Method, mut spectrum: Vec<f64>, tolerance: f64) -> Self {
        spectrum.sort_by(f64::total_cmp);
        let margin = spectrum.first().copied().unwrap_or(f64::INFINITY);
        CpReport {
            verdict: Verdict::from_margin(margin, tolerance),
            method,
            spectrum,
            margin,
            tolerance,
        }
    }

    /// True for `Cp` and `Boundary`.
    pub fn admits_cp(&self) -> bool {
        self.verdict != Verdict::NotCp
    }
}

fn lambda_conjugate_defect(lambda: &[C64], d: usize, n: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for (k, z) in lambda.iter().enumerate() {
        let neg = PauliString::from_linear(k, d, n)?.neg().linear();
        worst = worst.max((lambda[neg] - z.conj()).norm());
    }
    Ok(worst)
}

/// `F ⊗ F†` on one qudit's `d²` Pauli labels.
pub fn fourier_pair(d: usize) -> Result<ComplexMatrix> {
    let f = qft(d)?;
    Ok(tensor(&f, &dagger(&f)))
}

/// Choi spectrum of the unital map `E(π_i) = λ_i π_i`, in label order (s, t).
pub fn mu_vector(lambda: &[C64], d: usize, n: usize) -> Result<Vec<f64>> {
    check_dimension(d)?;
    let len = joint_dim(d * d, n);
    if lambda.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: lambda.len(),
        });
    }
    let defect = lambda_conjugate_defect(lambda, d, n)?;
    if defect > MU_IMAG_TOL {
        return Err(Error::InvalidChannel(format!(
            "lambda violates the conjugate-pair constraint by {defect:.3e}; mu would be complex"
        )));
    }
    let scale = 1.0 / joint_dim(d, n) as f64;
    let transformed = kron_power_matvec(&fourier_pair(d)?, lambda, n)?;
    let mut mu = Vec::with_capacity(len);
    for z in transformed {
        let z = z * scale;
        if z.im.abs() > MU_IMAG_TOL {
            return Err(Error::InvalidChannel(format!(
                "mu has imaginary residue {:.3e}",
                z.im
            )));
        }
        mu.push(z.re);
    }
    Ok(mu)
}

pub fn check_cp_qft(ch: &AffineChannel) -> Result<CpReport> {
    check_cp_qft_with(ch, DEFAULT_TOLERANCE)
}

pub fn check_cp_qft_with(ch: &AffineChannel, tolerance: f64) -> Result<CpReport> {
    require_valid(ch)?;
    if !ch.is_unital() {
        return Err(Error::NonUnital);
    }
    let mu = mu_vector(ch.lambda(), ch.d(), ch.n())?;
    Ok(CpReport::from_spectrum(Method::QftSpectral, mu, tolerance))
}

pub fn check_cp_choi(ch: &AffineChannel) -> Result<CpReport> {
    check_cp_choi_with(ch, DEFAULT_TOLERANCE)
}

pub fn check_cp_choi_with(ch: &AffineChannel, tolerance: f64) -> Result<CpReport> {
    let cm = choi(ch)?;
    let spectrum = hermitian_eigenvalues(cm.matrix(), DEFAULT_EIGEN_TOL)?;
    Ok(CpReport::from_spectrum(Method::ChoiEigen, spectrum, tolerance))
}

/// Outcome of the displacement-norm test `‖c‖ ≤ μ_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementBound {
    #[serde(with = "crate::io::sig12_f64")]
    pub mu_min: f64,
    #[serde(with = "crate::io::sig12_f64")]
    pub c_norm: f64,
    /// When true the map is certainly CP; when false nothing is concluded.
    pub applies: bool,
}

pub fn sufficient_displacement_bound(ch: &AffineChannel) -> Result<DisplacementBound> {
    require_valid(ch)?;
    if ch.n() != 1 {
        return Err(Error::Unsupported(
            "displacement bound is defined for a single qudit".into(),
        ));
    }
    let mu = mu_vector(ch.lambda(), ch.d(), 1)?;
    let mu_min = mu.iter().copied().fold(f64::INFINITY, f64::min);
    let c_norm = ch.displacement_norm();
    Ok(DisplacementBound {
        mu_min,
        c_norm,
        applies: c_norm <= mu_min,
    })
}

/// `λ₀₀ = 1`, every other axis scaled by `p`.
pub fn depolarizing_channel(d: usize, p: f64) -> Result<AffineChannel> {
    depolarizing_channel_n(d, 1, p)
}

pub fn depolarizing_channel_n(d: usize, n: usize, p: f64) -> Result<AffineChannel> {
    check_dimension(d)?;
    let mut lambda = vec![C64::new(p, 0.0); joint_dim(d * d, n)];
    lambda[0] = C64::new(1.0, 0.0);
    AffineChannel::new(d, n, lambda, None)
}

/// `(−1/(d²−1), 1)`.
pub fn depolarizing_cp_range(d: usize) -> Result<(f64, f64)> {
    check_dimension(d)?;
    Ok((-1.0 / (d * d - 1) as f64, 1.0))
}

/// Fidelity `d/(d²−1)` of the extremal depolarizing map as an approximate
/// universal NOT.
pub fn unot_fidelity(d: usize) -> Result<f64> {
    check_dimension(d)?;
    Ok(d as f64 / (d * d - 1) as f64)
}

/// The four qubit values `λ₀₀ ± λ₀₁ ± λ₁₀ ± λ₁₁`, ordered as the μ labels
/// (0,0), (0,1), (1,0), (1,1). Each must be nonnegative for CP.
pub fn qubit_inequalities(lambda: &[C64]) -> Result<[f64; 4]> {
    if lambda.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: lambda.len(),
        });
    }
    if let Some(z) = lambda.iter().find(|z| z.im != 0.0) {
        return Err(Error::InvalidChannel(format!(
            "qubit lambda must be real, found imaginary part {:.3e}",
            z.im
        )));
    }
    if (lambda[0].re - 1.0).abs() > crate::channel::CHANNEL_TOL {
        return Err(Error::InvalidChannel(format!(
            "lambda_00 must be 1, got {}",
            lambda[0].re
        )));
    }
    let [l0, a, b, c] = [lambda[0].re, lambda[1].re, lambda[2].re, lambda[3].re];
    Ok([
        l0 + a + b + c,
        l0 - a + b - c,
        l0 + a - b - c,
        l0 - a - b + c,
    ])
}
