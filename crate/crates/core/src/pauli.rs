//! Generalized Pauli (Weyl–Heisenberg) basis `σ_{p,q} = X^p Z^q` on a qudit.
//!
//! `X|k⟩ = |k+1 mod d⟩` and `Z|k⟩ = ω^k |k⟩` with `ω = exp(−2πi/d)`. Group
//! products are tracked with integer phase exponents so that the algebra is
//! exact; floating point only enters when a matrix is materialized.
//!
//! Every vector indexed by Pauli labels (λ, r, μ, c) uses the linear position
//! `p·d + q`. Multi-qudit labels concatenate the per-factor positions with the
//! first factor most significant.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{dagger, tensor, ComplexMatrix, C64};

pub(crate) fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

/// `ω = exp(−2πi/d)`.
pub fn omega(d: usize) -> Result<C64> {
    check_dimension(d)?;
    Ok(omega_pow(d, 1))
}

/// `ω^k` for an integer exponent, reduced mod `d` first.
///
/// Quarter turns come out exact so that `d ∈ {2, 4}` phases carry no rounding.
pub fn omega_pow(d: usize, k: i64) -> C64 {
    let k = k.rem_euclid(d as i64) as usize;
    if (4 * k).is_multiple_of(d) {
        return match (4 * k) / d {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, -1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, 1.0),
        };
    }
    C64::from_polar(1.0, -2.0 * PI * k as f64 / d as f64)
}

/// Label `(p, q)` of `σ_{p,q}` on a `d`-level system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliIndex {
    p: usize,
    q: usize,
    d: usize,
}

impl PauliIndex {
    pub fn new(p: usize, q: usize, d: usize) -> Result<Self> {
        check_dimension(d)?;
        if p >= d || q >= d {
            return Err(Error::InvalidIndex { p, q, d });
        }
        Ok(PauliIndex { p, q, d })
    }

    /// Reduces arbitrary integers mod `d`.
    pub fn wrapping(p: i64, q: i64, d: usize) -> Result<Self> {
        check_dimension(d)?;
        let m = d as i64;
        Ok(PauliIndex {
            p: p.rem_euclid(m) as usize,
            q: q.rem_euclid(m) as usize,
            d,
        })
    }

    pub fn from_linear(k: usize, d: usize) -> Result<Self> {
        Self::new(k / d.max(1), k % d.max(1), d)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn linear(&self) -> usize {
        self.p * self.d + self.q
    }

    /// `(−p, −q)` mod `d`.
    pub fn neg(&self) -> Self {
        PauliIndex {
            p: (self.d - self.p) % self.d,
            q: (self.d - self.q) % self.d,
            d: self.d,
        }
    }

    /// `(p, −q)` mod `d`, the reference-side label in the Choi expansion.
    pub fn conj_q(&self) -> Self {
        PauliIndex {
            p: self.p,
            q: (self.d - self.q) % self.d,
            d: self.d,
        }
    }

    /// All `d²` labels in linear order.
    pub fn all(d: usize) -> impl Iterator<Item = PauliIndex> {
        (0..d * d).map(move |k| PauliIndex {
            p: k / d,
            q: k % d,
            d,
        })
    }
}

/// `ω^{phase_exponent} · σ_{index}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliProduct {
    pub phase_exponent: usize,
    pub index: PauliIndex,
}

impl PauliProduct {
    pub fn phase(&self) -> C64 {
        omega_pow(self.index.d, self.phase_exponent as i64)
    }

    pub fn matrix(&self) -> ComplexMatrix {
        sigma(self.index).scale(self.phase())
    }
}

/// Cyclic shift `X`.
pub fn shift(d: usize) -> Result<ComplexMatrix> {
    check_dimension(d)?;
    let mut m = ComplexMatrix::zeros(d);
    for k in 0..d {
        m[((k + 1) % d, k)] = C64::new(1.0, 0.0);
    }
    Ok(m)
}

/// Clock `Z = diag(1, ω, …, ω^{d−1})`.
pub fn clock(d: usize) -> Result<ComplexMatrix> {
    check_dimension(d)?;
    let mut m = ComplexMatrix::zeros(d);
    for k in 0..d {
        m[(k, k)] = omega_pow(d, k as i64);
    }
    Ok(m)
}

/// Matrix of `X^p Z^q`: column `k` holds `ω^{qk}` in row `k + p`.
pub fn sigma(idx: PauliIndex) -> ComplexMatrix {
    let d = idx.d;
    let mut m = ComplexMatrix::zeros(d);
    for k in 0..d {
        m[((k + idx.p) % d, k)] = omega_pow(d, (idx.q * k) as i64);
    }
    m
}

/// `σ_a σ_b = ω^{b.p · a.q} σ_{a+b}`.
pub fn multiply_indices(a: PauliIndex, b: PauliIndex) -> Result<PauliProduct> {
    if a.d != b.d {
        return Err(Error::DimensionMismatch {
            expected: a.d,
            found: b.d,
        });
    }
    let d = a.d;
    Ok(PauliProduct {
        phase_exponent: (b.p * a.q) % d,
        index: PauliIndex {
            p: (a.p + b.p) % d,
            q: (a.q + b.q) % d,
            d,
        },
    })
}

/// `σ_a† = ω^{a.p · a.q} σ_{−a}`.
pub fn adjoint_index(a: PauliIndex) -> PauliProduct {
    PauliProduct {
        phase_exponent: (a.p * a.q) % a.d,
        index: a.neg(),
    }
}

/// Quantum Fourier transform with `F[k][j] = exp(2πi·jk/d)/√d = ω^{−jk}/√d`.
pub fn qft(d: usize) -> Result<ComplexMatrix> {
    check_dimension(d)?;
    let norm = 1.0 / (d as f64).sqrt();
    let mut f = ComplexMatrix::zeros(d);
    for k in 0..d {
        for j in 0..d {
            f[(k, j)] = omega_pow(d, -((j * k) as i64)) * norm;
        }
    }
    Ok(f)
}

/// Coefficients `tr(σ_{p,q}† A)/d` of `A` in the Pauli basis, linear order.
pub fn expand(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let d = a.dim();
    check_dimension(d)?;
    let mut out = Vec::with_capacity(d * d);
    for idx in PauliIndex::all(d) {
        // tr(σ† A) = Σ_k conj(σ[k+p][k]) A[k+p][k]
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..d {
            let row = (k + idx.p) % d;
            acc += omega_pow(d, (idx.q * k) as i64).conj() * a[(row, k)];
        }
        out.push(acc / d as f64);
    }
    Ok(out)
}

/// `Σ coeff_{p,q} σ_{p,q}`, the inverse of [`expand`].
pub fn reconstruct(coeffs: &[C64], d: usize) -> Result<ComplexMatrix> {
    check_dimension(d)?;
    if coeffs.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: coeffs.len(),
        });
    }
    let mut m = ComplexMatrix::zeros(d);
    for idx in PauliIndex::all(d) {
        let z = coeffs[idx.linear()];
        if z.re == 0.0 && z.im == 0.0 {
            continue;
        }
        for k in 0..d {
            m[((k + idx.p) % d, k)] += z * omega_pow(d, (idx.q * k) as i64);
        }
    }
    Ok(m)
}

/// Tensor product of local Pauli labels, `π = σ_{a₁} ⊗ … ⊗ σ_{a_N}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    factors: Vec<PauliIndex>,
}

impl PauliString {
    pub fn new(factors: Vec<PauliIndex>) -> Result<Self> {
        let d = factors
            .first()
            .map(|f| f.d)
            .ok_or(Error::InvalidIndex { p: 0, q: 0, d: 0 })?;
        if let Some(bad) = factors.iter().find(|f| f.d != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.d,
            });
        }
        Ok(PauliString { factors })
    }

    /// Splits a linear position in `0..d^{2n}` into `n` local labels.
    pub fn from_linear(mut k: usize, d: usize, n: usize) -> Result<Self> {
        check_dimension(d)?;
        let local = d * d;
        if n == 0 || k >= local.pow(n as u32) {
            return Err(Error::InvalidIndex { p: k, q: 0, d });
        }
        let mut factors = vec![PauliIndex { p: 0, q: 0, d }; n];
        for slot in factors.iter_mut().rev() {
            *slot = PauliIndex::from_linear(k % local, d)?;
            k /= local;
        }
        Ok(PauliString { factors })
    }

    pub fn factors(&self) -> &[PauliIndex] {
        &self.factors
    }

    pub fn d(&self) -> usize {
        self.factors[0].d
    }

    pub fn linear(&self) -> usize {
        let local = self.d() * self.d();
        self.factors.iter().fold(0, |acc, f| acc * local + f.linear())
    }

    pub fn neg(&self) -> Self {
        PauliString {
            factors: self.factors.iter().map(PauliIndex::neg).collect(),
        }
    }

    pub fn conj_q(&self) -> Self {
        PauliString {
            factors: self.factors.iter().map(PauliIndex::conj_q).collect(),
        }
    }

    /// `Σ p_k q_k mod d`; `π† = ω^{this} π_{−i,−j}`.
    pub fn adjoint_phase_exponent(&self) -> usize {
        let d = self.d();
        self.factors.iter().map(|f| f.p * f.q).sum::<usize>() % d
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = sigma(self.factors[0]);
        for f in &self.factors[1..] {
            m = tensor(&m, &sigma(*f));
        }
        m
    }

    /// Every Pauli string has one nonzero per column; entry `k` is
    /// `(row, value)` for column `k`.
    pub fn monomial(&self) -> Vec<(usize, C64)> {
        let d = self.d();
        let mut cols = vec![(0usize, 0i64)];
        for f in &self.factors {
            cols = cols
                .into_iter()
                .flat_map(|(row, exp)| {
                    (0..d).map(move |k| (row * d + (k + f.p) % d, exp + (f.q * k) as i64))
                })
                .collect();
        }
        cols.into_iter()
            .map(|(row, exp)| (row, omega_pow(d, exp)))
            .collect()
    }
}

/// `d^n`, the Hilbert-space dimension of `n` qudits.
pub(crate) fn joint_dim(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

/// Pauli-basis coefficients `tr(π† A)` for an operator on `n` qudits,
/// unnormalized (the Bloch-vector convention).
pub(crate) fn pauli_traces(a: &ComplexMatrix, d: usize, n: usize) -> Result<Vec<C64>> {
    let dim = joint_dim(d, n);
    if a.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: a.dim(),
        });
    }
    if n == 1 {
        return Ok(expand(a)?.into_iter().map(|z| z * d as f64).collect());
    }
    let total = joint_dim(d * d, n);
    (0..total)
        .map(|k| {
            let pi = PauliString::from_linear(k, d, n)?;
            let pd = dagger(&pi.matrix());
            Ok((&pd * a).trace())
        })
        .collect()
}

/// `Σ coeff_i π_i` for `n` qudits.
pub(crate) fn pauli_sum(coeffs: &[C64], d: usize, n: usize) -> Result<ComplexMatrix> {
    let total = joint_dim(d * d, n);
    if coeffs.len() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: coeffs.len(),
        });
    }
    if n == 1 {
        return reconstruct(coeffs, d);
    }
    let mut m = ComplexMatrix::zeros(joint_dim(d, n));
    for (k, z) in coeffs.iter().enumerate() {
        if z.norm() == 0.0 {
            continue;
        }
        let pi = PauliString::from_linear(k, d, n)?;
        m = &m + &pi.matrix().scale(*z);
    }
    Ok(m)
}
