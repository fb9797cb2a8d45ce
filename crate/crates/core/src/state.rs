//! Density matrices and their generalized Bloch vectors `r_i = tr(π_i† ρ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{pairs_to_complex, ComplexPair};
use crate::linalg::{min_eigenvalue, ComplexMatrix, C64};
use crate::pauli::{check_dimension, joint_dim, omega_pow, pauli_sum, pauli_traces, PauliString};

pub const STATE_TOL: f64 = 1e-10;
/// Smallest eigenvalue tolerated in a valid state.
pub const PSD_TOL: f64 = -1e-9;

fn check_shape(d: usize, n: usize) -> Result<()> {
    check_dimension(d)?;
    if n == 0 {
        return Err(Error::InvalidState("qudit count must be positive".into()));
    }
    Ok(())
}

/// Validated state of `n` qudits of local dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    d: usize,
    n: usize,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, d: usize, n: usize) -> Result<Self> {
        check_shape(d, n)?;
        let dim = joint_dim(d, n);
        if mat.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: mat.dim(),
            });
        }
        let defect = mat.hermitian_defect();
        if defect > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max asymmetry {defect:.3e})"
            )));
        }
        let tr = mat.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace is {:.6}{:+.6}i, expected 1",
                tr.re, tr.im
            )));
        }
        let lo = min_eigenvalue(&mat)?;
        if lo < PSD_TOL {
            return Err(Error::NotAState(lo));
        }
        Ok(DensityMatrix { mat, d, n })
    }

    /// `|ψ⟩⟨ψ|` for a nonzero vector, normalized on the way in.
    pub fn pure(psi: &[C64], d: usize, n: usize) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&unit, &unit)?, d, n)
    }

    pub fn maximally_mixed(d: usize, n: usize) -> Result<Self> {
        check_shape(d, n)?;
        let dim = joint_dim(d, n);
        Self::new(
            ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
            d,
            n,
        )
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }
}

/// Coefficient vector of length `d^{2n}` in the Pauli-string basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedBlochVector {
    coeffs: Vec<C64>,
    d: usize,
    n: usize,
}

impl GeneralizedBlochVector {
    /// Checks only the length; use [`is_valid_bloch`] for the state conditions.
    pub fn new(coeffs: Vec<C64>, d: usize, n: usize) -> Result<Self> {
        check_shape(d, n)?;
        let len = joint_dim(d * d, n);
        if coeffs.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: coeffs.len(),
            });
        }
        Ok(GeneralizedBlochVector { coeffs, d, n })
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest violation of `r_i* = ω^{−Σp_k q_k} r_{−i}`.
    pub fn hermiticity_defect(&self) -> f64 {
        conjugate_pair_defect(&self.coeffs, self.d, self.n)
    }
}

/// Largest violation of `v_i* = ω^{−Σp_k q_k} v_{−i}`, the condition for
/// `Σ v_i π_i` to be Hermitian.
pub(crate) fn conjugate_pair_defect(v: &[C64], d: usize, n: usize) -> f64 {
    let mut worst = 0.0_f64;
    for (k, z) in v.iter().enumerate() {
        let Ok(label) = PauliString::from_linear(k, d, n) else {
            return f64::INFINITY;
        };
        let partner = v[label.neg().linear()];
        let phase = omega_pow(d, -(label.adjoint_phase_exponent() as i64));
        worst = worst.max((z.conj() - phase * partner).norm());
    }
    worst
}

pub fn bloch_from_density(rho: &DensityMatrix) -> GeneralizedBlochVector {
    let coeffs = pauli_traces(&rho.mat, rho.d, rho.n).expect("shape checked at construction");
    GeneralizedBlochVector {
        coeffs,
        d: rho.d,
        n: rho.n,
    }
}

/// `ρ = (Σ r_i π_i)/d^n` without any validity check.
pub(crate) fn operator_from_bloch(r: &GeneralizedBlochVector) -> ComplexMatrix {
    let dim = joint_dim(r.d, r.n);
    pauli_sum(&r.coeffs, r.d, r.n)
        .expect("length checked at construction")
        .scale(C64::new(1.0 / dim as f64, 0.0))
}

pub fn density_from_bloch(r: &GeneralizedBlochVector) -> Result<DensityMatrix> {
    if (r.coeffs[0] - C64::new(1.0, 0.0)).norm() > STATE_TOL {
        return Err(Error::InvalidState(format!(
            "r00 must be 1, got {:.6}{:+.6}i",
            r.coeffs[0].re, r.coeffs[0].im
        )));
    }
    let defect = r.hermiticity_defect();
    if defect > STATE_TOL {
        return Err(Error::InvalidState(format!(
            "Hermiticity constraint violated by {defect:.3e}"
        )));
    }
    let mut mat = operator_from_bloch(r);
    // The constraint holds to STATE_TOL; remove the residue before validation.
    let dim = mat.dim();
    for i in 0..dim {
        mat[(i, i)].im = 0.0;
        for j in (i + 1)..dim {
            let z = (mat[(i, j)] + mat[(j, i)].conj()) * 0.5;
            mat[(i, j)] = z;
            mat[(j, i)] = z.conj();
        }
    }
    DensityMatrix::new(mat, r.d, r.n)
}

/// Result of [`is_valid_bloch`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlochValidity {
    pub valid: bool,
    pub min_eigenvalue: Option<f64>,
    pub diagnostics: Vec<String>,
}

pub fn is_valid_bloch(r: &GeneralizedBlochVector) -> BlochValidity {
    let mut diagnostics = Vec::new();
    if (r.coeffs[0] - C64::new(1.0, 0.0)).norm() > STATE_TOL {
        diagnostics.push("r00≠1".to_string());
    }
    let defect = r.hermiticity_defect();
    if defect > STATE_TOL {
        diagnostics.push(format!("hermiticity constraint violated ({defect:.3e})"));
    }
    let mut lo = None;
    if defect <= STATE_TOL {
        match min_eigenvalue(&operator_from_bloch(r)) {
            Ok(x) => {
                lo = Some(x);
                if x < PSD_TOL {
                    diagnostics.push(format!("not positive semidefinite (min eigenvalue {x:.3e})"));
                }
            }
            Err(e) => diagnostics.push(e.to_string()),
        }
    }
    BlochValidity {
        valid: diagnostics.is_empty(),
        min_eigenvalue: lo,
        diagnostics,
    }
}

/// On-disk state format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub d: usize,
    #[serde(default = "one")]
    pub n: usize,
    #[serde(with = "crate::io::sig12_pairs")]
    pub bloch: Vec<ComplexPair>,
}

fn one() -> usize {
    1
}

impl StateFile {
    pub fn to_bloch(&self) -> Result<GeneralizedBlochVector> {
        GeneralizedBlochVector::new(pairs_to_complex(&self.bloch), self.d, self.n)
    }

    pub fn from_bloch(r: &GeneralizedBlochVector) -> Self {
        StateFile {
            d: r.d,
            n: r.n,
            bloch: crate::io::complex_to_pairs(&r.coeffs),
        }
    }
}
