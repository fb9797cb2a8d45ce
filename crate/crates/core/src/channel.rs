//! Affine maps `r ↦ diag(λ) r + c·r₀₀` on generalized Bloch vectors.
//!
//! The unital case (`c = 0`) scales each Pauli axis, `E(π_i) = λ_i π_i`.
//! A displacement `c` adds `c·σ` to the image of the identity. Displacements
//! are only defined for a single qudit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{complex_to_pairs, pairs_to_complex, ComplexPair};
use crate::linalg::{hermitian_eigensystem, matmul, dagger, ComplexMatrix, C64, DEFAULT_EIGEN_TOL};
use crate::pauli::{check_dimension, joint_dim, omega_pow, pauli_sum, pauli_traces, sigma, PauliIndex, PauliString};
use crate::state::{conjugate_pair_defect, operator_from_bloch, DensityMatrix, GeneralizedBlochVector, PSD_TOL};

pub const CHANNEL_TOL: f64 = 1e-10;
/// Choi eigenvalues at or below this are dropped from the Kraus form.
pub const KRAUS_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineChannel {
    d: usize,
    n: usize,
    lambda: Vec<C64>,
    c: Vec<C64>,
}

impl AffineChannel {
    /// Checks the vector lengths; see [`validate`] for the channel conditions.
    pub fn new(d: usize, n: usize, lambda: Vec<C64>, c: Option<Vec<C64>>) -> Result<Self> {
        check_dimension(d)?;
        if n == 0 {
            return Err(Error::InvalidChannel("qudit count must be positive".into()));
        }
        let len = joint_dim(d * d, n);
        if lambda.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: lambda.len(),
            });
        }
        let c = c.unwrap_or_else(|| vec![C64::new(0.0, 0.0); len]);
        if c.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: c.len(),
            });
        }
        Ok(AffineChannel { d, n, lambda, c })
    }

    pub fn from_real(d: usize, lambda: &[f64], c: Option<&[f64]>) -> Result<Self> {
        let to_c = |v: &[f64]| v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>();
        Self::new(d, 1, to_c(lambda), c.map(to_c))
    }

    pub fn identity(d: usize, n: usize) -> Result<Self> {
        check_dimension(d)?;
        Self::new(d, n, vec![C64::new(1.0, 0.0); joint_dim(d * d, n)], None)
    }

    /// `λ = e₀`: every state goes to `I/d^n`.
    pub fn fully_depolarizing(d: usize, n: usize) -> Result<Self> {
        check_dimension(d)?;
        let mut lambda = vec![C64::new(0.0, 0.0); joint_dim(d * d, n)];
        lambda[0] = C64::new(1.0, 0.0);
        Self::new(d, n, lambda, None)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `d^n`.
    pub fn hilbert_dim(&self) -> usize {
        joint_dim(self.d, self.n)
    }

    pub fn lambda(&self) -> &[C64] {
        &self.lambda
    }

    pub fn displacement(&self) -> &[C64] {
        &self.c
    }

    pub fn is_unital(&self) -> bool {
        self.c.iter().all(|z| z.norm() == 0.0)
    }

    pub fn displacement_norm(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn with_lambda(&self, lambda: Vec<C64>) -> Result<Self> {
        Self::new(self.d, self.n, lambda, Some(self.c.clone()))
    }

    pub fn with_displacement(&self, c: Vec<C64>) -> Result<Self> {
        Self::new(self.d, self.n, self.lambda.clone(), Some(c))
    }

    /// `c·σ` as a matrix.
    pub fn displacement_operator(&self) -> ComplexMatrix {
        pauli_sum(&self.c, self.d, self.n).expect("length checked at construction")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelDiagnostics {
    pub checks: Vec<Check>,
}

impl ChannelDiagnostics {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn validate(ch: &AffineChannel) -> ChannelDiagnostics {
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| checks.push(Check { name, passed, detail });

    let l0 = ch.lambda[0];
    push(
        "trace_preserving",
        (l0 - C64::new(1.0, 0.0)).norm() <= CHANNEL_TOL,
        format!("lambda_00 = {:.6}{:+.6}i", l0.re, l0.im),
    );

    let mut worst = 0.0_f64;
    for (k, z) in ch.lambda.iter().enumerate() {
        let label = PauliString::from_linear(k, ch.d, ch.n).expect("in range");
        worst = worst.max((ch.lambda[label.neg().linear()] - z.conj()).norm());
    }
    push(
        "lambda_conjugate_pairs",
        worst <= CHANNEL_TOL,
        format!("max |lambda(-p,-q) - conj lambda(p,q)| = {worst:.3e}"),
    );

    let c0 = ch.c[0].norm();
    push(
        "displacement_origin",
        c0 <= CHANNEL_TOL,
        format!("|c_00| = {c0:.3e}"),
    );

    let defect = conjugate_pair_defect(&ch.c, ch.d, ch.n);
    push(
        "displacement_hermitian",
        defect <= CHANNEL_TOL,
        format!("c.sigma Hermiticity defect = {defect:.3e}"),
    );

    let single = ch.n == 1 || ch.is_unital();
    push(
        "displacement_single_qudit",
        single,
        if single {
            "ok".to_string()
        } else {
            format!("displacement given for n = {}; only n = 1 supported", ch.n)
        },
    );

    ChannelDiagnostics { checks }
}

pub(crate) fn require_valid(ch: &AffineChannel) -> Result<()> {
    let diag = validate(ch);
    if diag.passed() {
        return Ok(());
    }
    let names: Vec<String> = diag
        .failures()
        .map(|c| format!("{} ({})", c.name, c.detail))
        .collect();
    Err(Error::InvalidChannel(names.join("; ")))
}

/// Image of a state; may fail positivity when the channel is not CP.
#[derive(Debug, Clone)]
pub struct ChannelOutput {
    pub bloch: GeneralizedBlochVector,
    pub matrix: ComplexMatrix,
    pub min_eigenvalue: f64,
    /// `false` flags a non-PSD image.
    pub positive: bool,
}

impl ChannelOutput {
    pub fn into_state(self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix, self.bloch.d(), self.bloch.n())
    }
}

/// `r′_i = λ_i r_i + c_i r₀₀`.
pub fn apply(ch: &AffineChannel, rho: &DensityMatrix) -> Result<ChannelOutput> {
    if rho.d() != ch.d {
        return Err(Error::DimensionMismatch {
            expected: ch.d,
            found: rho.d(),
        });
    }
    if rho.n() != ch.n {
        return Err(Error::DimensionMismatch {
            expected: ch.n,
            found: rho.n(),
        });
    }
    require_valid(ch)?;
    let r = crate::state::bloch_from_density(rho);
    let r00 = r.coeffs()[0];
    let mapped: Vec<C64> = r
        .coeffs()
        .iter()
        .zip(&ch.lambda)
        .zip(&ch.c)
        .map(|((ri, li), ci)| li * ri + ci * r00)
        .collect();
    let bloch = GeneralizedBlochVector::new(mapped, ch.d, ch.n)?;
    let mut matrix = operator_from_bloch(&bloch);
    let dim = matrix.dim();
    for i in 0..dim {
        matrix[(i, i)].im = 0.0;
        for j in (i + 1)..dim {
            let z = (matrix[(i, j)] + matrix[(j, i)].conj()) * 0.5;
            matrix[(i, j)] = z;
            matrix[(j, i)] = z.conj();
        }
    }
    let min_eigenvalue = crate::linalg::min_eigenvalue(&matrix)?;
    Ok(ChannelOutput {
        bloch,
        matrix,
        min_eigenvalue,
        positive: min_eigenvalue >= PSD_TOL,
    })
}

/// Linear extension of the channel to an arbitrary operator on `d^n` levels.
pub fn apply_to_operator(ch: &AffineChannel, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = ch.hilbert_dim();
    let coeffs = pauli_traces(a, ch.d, ch.n)?;
    let a00 = coeffs[0];
    let mapped: Vec<C64> = coeffs
        .iter()
        .zip(&ch.lambda)
        .zip(&ch.c)
        .map(|((ai, li), ci)| li * ai + ci * a00)
        .collect();
    Ok(pauli_sum(&mapped, ch.d, ch.n)?.scale(C64::new(1.0 / dim as f64, 0.0)))
}

/// `(I ⊗ E)(|α⟩⟨α|)` with the reference system as the major tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    mat: ComplexMatrix,
    d: usize,
    n: usize,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Wraps an arbitrary `d^{2n}`-dimensional operator.
    pub fn from_matrix(mat: ComplexMatrix, d: usize, n: usize) -> Result<Self> {
        check_dimension(d)?;
        let dim = joint_dim(d, 2 * n);
        if mat.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: mat.dim(),
            });
        }
        Ok(ChoiMatrix { mat, d, n })
    }
}

/// `[I ⊗ c·σ + Σ_i λ_i π_{p,−q} ⊗ π_{p,q}] / d^{2n}`.
pub fn choi(ch: &AffineChannel) -> Result<ChoiMatrix> {
    require_valid(ch)?;
    let dim = ch.hilbert_dim();
    let big = dim * dim;
    let norm = 1.0 / big as f64;
    let mut mat = ComplexMatrix::zeros(big);
    for (k, &lam) in ch.lambda.iter().enumerate() {
        if lam.norm() == 0.0 {
            continue;
        }
        let sys = PauliString::from_linear(k, ch.d, ch.n)?;
        let reference = sys.conj_q().monomial();
        let system = sys.monomial();
        let weight = lam * norm;
        for (cr, &(rr, zr)) in reference.iter().enumerate() {
            for (cs, &(rs, zs)) in system.iter().enumerate() {
                mat[(rr * dim + rs, cr * dim + cs)] += weight * zr * zs;
            }
        }
    }
    if !ch.is_unital() {
        let csig = ch.displacement_operator();
        for r in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    mat[(r * dim + i, r * dim + j)] += csig[(i, j)] * norm;
                }
            }
        }
    }
    Ok(ChoiMatrix {
        mat,
        d: ch.d,
        n: ch.n,
    })
}

/// `|Φ_{s,t}⟩ = d^{−1/2} Σ_k |k⟩ ⊗ σ_{t,s}|k⟩`, listed at position `s·d + t`.
pub fn choi_eigenvectors(d: usize) -> Result<Vec<Vec<C64>>> {
    check_dimension(d)?;
    let norm = 1.0 / (d as f64).sqrt();
    let mut out = Vec::with_capacity(d * d);
    for s in 0..d {
        for t in 0..d {
            let mut v = vec![C64::new(0.0, 0.0); d * d];
            let op = sigma(PauliIndex::new(t, s, d)?);
            for k in 0..d {
                for i in 0..d {
                    v[k * d + i] = op[(i, k)] * norm;
                }
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// Unitary whose columns are the `|Φ_{s,t}⟩`; it diagonalizes every
/// `σ_{m,−n} ⊗ σ_{m,n}` at once.
pub fn simultaneous_diagonalizer(d: usize) -> Result<ComplexMatrix> {
    let vecs = choi_eigenvectors(d)?;
    let dim = d * d;
    let mut u = ComplexMatrix::zeros(dim);
    for (col, v) in vecs.iter().enumerate() {
        for (row, z) in v.iter().enumerate() {
            u[(row, col)] = *z;
        }
    }
    Ok(u)
}

/// Eigenvalue of `σ_{m,−n} ⊗ σ_{m,n}` on `|Φ_{s,t}⟩`: `ω^{nt − sm}`.
pub fn choi_group_eigenvalue(d: usize, mn: PauliIndex, s: usize, t: usize) -> C64 {
    omega_pow(d, (mn.q() * t) as i64 - (s * mn.p()) as i64)
}

#[derive(Debug, Clone)]
pub struct KrausDecomposition {
    pub operators: Vec<ComplexMatrix>,
    /// `‖Σ A_k† A_k − I‖_max`.
    pub completeness_residual: f64,
}

impl KrausDecomposition {
    /// `Σ A_k ρ A_k†`.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.dim());
        for a in &self.operators {
            out = &out + &(&(a * rho) * &dagger(a));
        }
        out
    }
}

/// Operator-sum form from the Choi spectrum: `A_k[i][j] = √(D μ_k) v_k[j·D + i]`,
/// each `A_k` rotated so its first nonzero entry is real and positive.
pub fn kraus_from_choi(cm: &ChoiMatrix) -> Result<KrausDecomposition> {
    let dim = joint_dim(cm.d, cm.n);
    let es = hermitian_eigensystem(&cm.mat, DEFAULT_EIGEN_TOL)?;
    if es.values[0] < PSD_TOL {
        return Err(Error::NotCp(es.values[0]));
    }
    let mut operators = Vec::new();
    // Largest weights first.
    for k in (0..es.values.len()).rev() {
        let mu = es.values[k];
        if mu <= KRAUS_CUTOFF {
            continue;
        }
        let amp = (dim as f64 * mu).sqrt();
        let mut a = ComplexMatrix::zeros(dim);
        for j in 0..dim {
            for i in 0..dim {
                a[(i, j)] = es.vectors[(j * dim + i, k)] * amp;
            }
        }
        let lead = a
            .as_slice()
            .iter()
            .copied()
            .find(|z| z.norm() > 1e-12)
            .unwrap_or(C64::new(1.0, 0.0));
        operators.push(a.scale(lead.conj() / lead.norm()));
    }
    let mut sum = ComplexMatrix::zeros(dim);
    for a in &operators {
        sum = &sum + &matmul(&dagger(a), a)?;
    }
    let completeness_residual = sum.max_diff(&ComplexMatrix::identity(dim));
    Ok(KrausDecomposition {
        operators,
        completeness_residual,
    })
}

/// On-disk channel format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub d: usize,
    #[serde(default = "one")]
    pub n: usize,
    #[serde(with = "crate::io::sig12_pairs")]
    pub lambda: Vec<ComplexPair>,
    #[serde(default, with = "crate::io::sig12_opt_pairs")]
    pub c: Option<Vec<ComplexPair>>,
}

fn one() -> usize {
    1
}

impl ChannelFile {
    pub fn to_channel(&self) -> Result<AffineChannel> {
        AffineChannel::new(
            self.d,
            self.n,
            pairs_to_complex(&self.lambda),
            self.c.as_deref().map(pairs_to_complex),
        )
    }

    pub fn from_channel(ch: &AffineChannel) -> Self {
        ChannelFile {
            d: ch.d,
            n: ch.n,
            lambda: complex_to_pairs(&ch.lambda),
            c: (!ch.is_unital()).then(|| complex_to_pairs(&ch.c)),
        }
    }
}
