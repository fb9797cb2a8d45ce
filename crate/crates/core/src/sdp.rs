//! Feasibility of `A + diag(D) ⪰ 0` and one-parameter λ searches.
//!
//! In the `|Φ_{s,t}⟩` basis the Choi matrix of a displaced map splits into a
//! fixed part coming from `c` and a diagonal part equal to the μ-vector of λ.
//! Deciding CP is then a diagonal-shift feasibility problem. The searches here
//! only need minimum eigenvalues and bisection; there is no general SDP solver.
//!
//! The CP set is convex in λ (the Choi matrix is affine in λ), so along any
//! real ray the feasible parameters form a single interval and bisection
//! finds its end.

use serde::{Deserialize, Serialize};

use crate::channel::{require_valid, simultaneous_diagonalizer, AffineChannel};
use crate::cp::{check_cp_choi, fourier_pair, mu_vector, Verdict, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::{dagger, kron_power_matvec, matmul, min_eigenvalue, tensor, ComplexMatrix, C64, HERMITIAN_TOL};
use crate::pauli::{check_dimension, joint_dim, PauliString};

/// Margins at or above `−FEASIBILITY_TOL` count as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
pub const BISECTION_WIDTH: f64 = 1e-8;
pub const MAX_BISECTION_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityProblem {
    fixed_part: ComplexMatrix,
    diag_shift: Vec<f64>,
}

impl FeasibilityProblem {
    pub fn new(fixed_part: ComplexMatrix, diag_shift: Vec<f64>) -> Result<Self> {
        if diag_shift.len() != fixed_part.dim() {
            return Err(Error::DimensionMismatch {
                expected: fixed_part.dim(),
                found: diag_shift.len(),
            });
        }
        let defect = fixed_part.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(FeasibilityProblem {
            fixed_part,
            diag_shift,
        })
    }

    pub fn fixed_part(&self) -> &ComplexMatrix {
        &self.fixed_part
    }

    pub fn diag_shift(&self) -> &[f64] {
        &self.diag_shift
    }

    pub fn with_shift(&self, diag_shift: Vec<f64>) -> Result<Self> {
        Self::new(self.fixed_part.clone(), diag_shift)
    }

    /// `fixed_part + diag(diag_shift)`.
    pub fn assembled(&self) -> ComplexMatrix {
        let mut m = self.fixed_part.clone();
        for (i, &x) in self.diag_shift.iter().enumerate() {
            m[(i, i)] += C64::new(x, 0.0);
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    /// Minimum eigenvalue of the assembled matrix.
    pub margin: f64,
}

pub fn feasible(p: &FeasibilityProblem) -> Result<Feasibility> {
    let margin = min_eigenvalue(&p.assembled())?;
    Ok(Feasibility {
        feasible: margin >= -FEASIBILITY_TOL,
        margin,
    })
}

/// Smallest `t` with `a + t·I ⪰ 0`.
pub fn max_uniform_shift(a: &ComplexMatrix) -> Result<f64> {
    Ok(0.0 - min_eigenvalue(a)?)
}

/// Trace-normalized Choi matrix of a single-qudit map in the `|Φ_{s,t}⟩`
/// basis: fixed part `U†(I ⊗ c·σ)U / d²`, shift `μ = diag((F ⊗ F†)λ) / d`.
pub fn displacement_problem(ch: &AffineChannel) -> Result<FeasibilityProblem> {
    require_valid(ch)?;
    if ch.n() != 1 {
        return Err(Error::Unsupported(
            "displacement problems are defined for a single qudit".into(),
        ));
    }
    let d = ch.d();
    let u = simultaneous_diagonalizer(d)?;
    let lifted = tensor(&ComplexMatrix::identity(d), &ch.displacement_operator());
    let mut fixed = matmul(&matmul(&dagger(&u), &lifted)?, &u)?.scale(C64::new(1.0 / (d * d) as f64, 0.0));
    // U is unitary only to rounding; restore exact Hermiticity.
    let dim = fixed.dim();
    for i in 0..dim {
        fixed[(i, i)].im = 0.0;
        for j in (i + 1)..dim {
            let z = (fixed[(i, j)] + fixed[(j, i)].conj()) * 0.5;
            fixed[(i, j)] = z;
            fixed[(j, i)] = z.conj();
        }
    }
    FeasibilityProblem::new(fixed, mu_vector(ch.lambda(), d, 1)?)
}

/// Inverse of [`mu_vector`]: `λ = d^n (F† ⊗ F)^{⊗n} μ`.
pub fn lambda_from_mu(mu: &[f64], d: usize, n: usize) -> Result<Vec<C64>> {
    check_dimension(d)?;
    let len = joint_dim(d * d, n);
    if mu.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: mu.len(),
        });
    }
    let inverse = dagger(&fourier_pair(d)?);
    let as_complex: Vec<C64> = mu.iter().map(|&x| C64::new(x, 0.0)).collect();
    let scale = joint_dim(d, n) as f64;
    Ok(kron_power_matvec(&inverse, &as_complex, n)?
        .into_iter()
        .map(|z| z * scale)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayResult {
    /// Largest parameter known to keep the map CP.
    pub t_max: f64,
    pub iterations: usize,
    /// Final `(feasible, infeasible)` bracket.
    pub bracket: (f64, f64),
    pub margin_at_t_max: f64,
}

/// Ray-scan wire format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayScanRecord {
    #[serde(with = "crate::io::sig12_f64")]
    pub t_max: f64,
    pub iterations: usize,
    #[serde(with = "crate::io::sig12_f64")]
    pub margin: f64,
}

impl From<&RayResult> for RayScanRecord {
    fn from(r: &RayResult) -> Self {
        RayScanRecord {
            t_max: r.t_max,
            iterations: r.iterations,
            margin: r.margin_at_t_max,
        }
    }
}

/// Checks that `direction` keeps the conjugate-pair constraint and leaves
/// `λ₀₀` fixed.
pub fn validate_direction(direction: &[C64], d: usize, n: usize) -> Result<()> {
    let len = joint_dim(d * d, n);
    if direction.len() != len {
        return Err(Error::InvalidDirection(format!(
            "expected {len} components, found {}",
            direction.len()
        )));
    }
    if direction[0].norm() > HERMITIAN_TOL {
        return Err(Error::InvalidDirection(
            "component (0,0) must be zero to preserve trace".into(),
        ));
    }
    for (k, z) in direction.iter().enumerate() {
        let neg = PauliString::from_linear(k, d, n)?.neg().linear();
        let defect = (direction[neg] - z.conj()).norm();
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidDirection(format!(
                "components {k} and {neg} must be complex conjugates (defect {defect:.3e})"
            )));
        }
    }
    Ok(())
}

/// Minimum Choi eigenvalue of `base` with `λ ← λ + t·direction`.
pub fn ray_margin(base: &AffineChannel, direction: &[C64], t: f64) -> Result<f64> {
    let lambda = base
        .lambda()
        .iter()
        .zip(direction)
        .map(|(l, v)| l + v * t)
        .collect();
    Ok(check_cp_choi(&base.with_lambda(lambda)?)?.margin)
}

/// Bisects for the last CP point of `λ(t) = base.λ + t·direction` inside
/// `[t_lo, t_hi]`. The bracket is verified first: CP (or boundary) at
/// `t_lo`, strictly negative Choi margin at `t_hi`.
pub fn max_ray_parameter(
    base: &AffineChannel,
    direction: &[C64],
    t_lo: f64,
    t_hi: f64,
) -> Result<RayResult> {
    require_valid(base)?;
    validate_direction(direction, base.d(), base.n())?;
    if !(t_lo.is_finite() && t_hi.is_finite() && t_lo < t_hi) {
        return Err(Error::InvalidBracket(format!(
            "need finite t_lo < t_hi, got [{t_lo}, {t_hi}]"
        )));
    }
    let lo_margin = ray_margin(base, direction, t_lo)?;
    if Verdict::from_margin(lo_margin, DEFAULT_TOLERANCE) == Verdict::NotCp {
        return Err(Error::InvalidBracket(format!(
            "map is not CP at t_lo = {t_lo} (margin {lo_margin:.3e})"
        )));
    }
    let hi_margin = ray_margin(base, direction, t_hi)?;
    if hi_margin >= 0.0 {
        return Err(Error::InvalidBracket(format!(
            "map is still CP at t_hi = {t_hi} (margin {hi_margin:.3e})"
        )));
    }

    let (mut lo, mut hi) = (t_lo, t_hi);
    let mut margin_lo = lo_margin;
    let mut iterations = 0;
    while hi - lo >= BISECTION_WIDTH && iterations < MAX_BISECTION_STEPS {
        let mid = lo + 0.5 * (hi - lo);
        let m = ray_margin(base, direction, mid)?;
        if m >= 0.0 {
            lo = mid;
            margin_lo = m;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(RayResult {
        t_max: lo,
        iterations,
        bracket: (lo, hi),
        margin_at_t_max: margin_lo,
    })
}
