//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use qcp_core::channel::AffineChannel;
use qcp_core::linalg::{ComplexMatrix, C64};
use qcp_core::pauli::{expand, PauliString};
use qcp_core::sdp::lambda_from_mu;
use qcp_core::state::DensityMatrix;
use rand::rngs::StdRng;
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn vector_len(d: usize, n: usize) -> usize {
    (d * d).pow(n as u32)
}

/// λ with `λ₀ = 1` and `λ_{−i} = λ_i*`, entries drawn from the unit box.
/// Most samples are not CP.
pub fn random_constrained_lambda(rng: &mut StdRng, d: usize, n: usize, scale: f64) -> Vec<C64> {
    let len = vector_len(d, n);
    let mut lam = vec![c(0.0, 0.0); len];
    lam[0] = c(1.0, 0.0);
    for k in 1..len {
        let neg = PauliString::from_linear(k, d, n).unwrap().neg().linear();
        if neg < k {
            continue;
        }
        if neg == k {
            lam[k] = c(scale * rng.gen_range(-1.0..1.0), 0.0);
        } else {
            let z = c(scale * rng.gen_range(-1.0..1.0), scale * rng.gen_range(-1.0..1.0));
            lam[k] = z;
            lam[neg] = z.conj();
        }
    }
    lam
}

/// Nonnegative weights summing to one, skewed by an exponent so that some
/// samples sit close to the boundary.
pub fn random_simplex(rng: &mut StdRng, len: usize, floor: f64) -> Vec<f64> {
    let shape = rng.gen_range(0.5..3.0);
    let mut w: Vec<f64> = (0..len)
        .map(|_| -(rng.gen_range(f64::EPSILON..1.0f64)).ln() * shape + floor)
        .collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// λ of a random CP unital map, built from a random Choi spectrum.
pub fn random_cp_lambda(rng: &mut StdRng, d: usize, n: usize) -> Vec<C64> {
    let mu = random_simplex(rng, vector_len(d, n), 0.0);
    lambda_from_mu(&mu, d, n).unwrap()
}

pub fn random_hermitian(rng: &mut StdRng, dim: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        a[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    a
}

/// Displacement coefficients of a random traceless Hermitian operator,
/// rescaled to Euclidean norm `norm`.
pub fn random_displacement(rng: &mut StdRng, d: usize, norm: f64) -> Vec<C64> {
    let mut h = random_hermitian(rng, d);
    let shift = h.trace() / d as f64;
    for i in 0..d {
        h[(i, i)] -= shift;
    }
    let mut cv: Vec<C64> = expand(&h).unwrap().into_iter().map(|z| z * d as f64).collect();
    cv[0] = c(0.0, 0.0);
    let current = cv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    cv.iter_mut().for_each(|z| *z *= norm / current);
    cv
}

pub fn random_unit_vector(rng: &mut StdRng, dim: usize) -> Vec<C64> {
    // Gaussian components by Box-Muller give a uniform direction.
    let mut v: Vec<C64> = (0..dim)
        .map(|_| {
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            let r = (-2.0 * u1.ln()).sqrt();
            let th = 2.0 * std::f64::consts::PI * u2;
            c(r * th.cos(), r * th.sin())
        })
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

pub fn random_pure_state(rng: &mut StdRng, d: usize, n: usize) -> DensityMatrix {
    let psi = random_unit_vector(rng, d.pow(n as u32));
    DensityMatrix::pure(&psi, d, n).unwrap()
}

/// Random mixed state: a random convex mixture of pure projectors.
pub fn random_state(rng: &mut StdRng, d: usize, n: usize) -> DensityMatrix {
    let dim = d.pow(n as u32);
    let weights = random_simplex(rng, dim, 0.0);
    let mut rho = ComplexMatrix::zeros(dim);
    for w in weights {
        let psi = random_unit_vector(rng, dim);
        let proj = ComplexMatrix::outer(&psi, &psi).unwrap();
        rho = &rho + &proj.scale(c(w, 0.0));
    }
    DensityMatrix::new(rho, d, n).unwrap()
}

/// Random single-qudit channel whose displacement obeys the sufficient bound.
pub fn random_bounded_nonunital(rng: &mut StdRng, d: usize) -> AffineChannel {
    let mu = random_simplex(rng, d * d, 0.05);
    let mu_min = mu.iter().cloned().fold(f64::INFINITY, f64::min);
    let lam = lambda_from_mu(&mu, d, 1).unwrap();
    let norm = mu_min * rng.gen_range(0.0..1.0);
    AffineChannel::new(d, 1, lam, Some(random_displacement(rng, d, norm))).unwrap()
}

/// Vector orthogonal to `psi`, normalized.
pub fn random_orthogonal(rng: &mut StdRng, psi: &[C64]) -> Vec<C64> {
    let mut v = random_unit_vector(rng, psi.len());
    let overlap: C64 = psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
    for (x, a) in v.iter_mut().zip(psi) {
        *x -= overlap * a;
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn max_sorted_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    sorted(a.to_vec())
        .iter()
        .zip(sorted(b.to_vec()).iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
