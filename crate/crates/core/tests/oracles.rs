mod common;

use common::*;
use proptest::prelude::*;
use qcp_core::channel::{apply, choi, kraus_from_choi, validate, AffineChannel, ChannelFile};
use qcp_core::cp::{
    check_cp_choi, check_cp_qft, mu_vector, sufficient_displacement_bound, Verdict,
};
use qcp_core::linalg::{hermitian_eigenvalues, tensor, ComplexMatrix};
use qcp_core::pauli::PauliString;
use qcp_core::sdp::{displacement_problem, feasible, lambda_from_mu, max_ray_parameter, ray_margin};
use qcp_core::state::{bloch_from_density, density_from_bloch, DensityMatrix, GeneralizedBlochVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn unital_equivalence(d: usize, n: usize, samples: usize, tol: f64, seed: u64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut not_cp = 0;
    for i in 0..samples {
        // alternate between generic (mostly non-CP) and CP samples
        let lam = if i % 2 == 0 {
            random_constrained_lambda(&mut rng, d, n, 1.0)
        } else {
            random_cp_lambda(&mut rng, d, n)
        };
        let ch = AffineChannel::new(d, n, lam, None).unwrap();
        let q = check_cp_qft(&ch).unwrap();
        let k = check_cp_choi(&ch).unwrap();
        assert!(max_sorted_diff(&q.spectrum, &k.spectrum) <= tol, "d={d} n={n} sample {i}");
        assert_eq!(q.verdict, k.verdict, "d={d} n={n} sample {i}");
        let total: f64 = q.spectrum.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
        if q.verdict == Verdict::NotCp {
            not_cp += 1;
        } else {
            // necessary condition Σλ ≥ 0
            let sum: f64 = ch.lambda().iter().map(|z| z.re).sum();
            assert!(sum >= -1e-9);
        }
    }
    assert!(not_cp > 0 && not_cp < samples);
}

#[test]
fn qft_and_choi_agree_single_qudit() {
    for d in 2..=5 {
        unital_equivalence(d, 1, 500, 1e-9, 10 + d as u64);
    }
}

#[test]
fn qft_and_choi_agree_two_qubits() {
    unital_equivalence(2, 2, 500, 1e-9, 20);
}

#[test]
fn qft_and_choi_agree_two_qutrits() {
    unital_equivalence(3, 2, 120, 1e-9, 21);
}

#[test]
fn displacement_problem_matches_choi_verdict() {
    let mut rng = StdRng::seed_from_u64(30);
    for d in 2..=4 {
        for i in 0..80 {
            let mu = random_simplex(&mut rng, d * d, 0.0);
            let lam = lambda_from_mu(&mu, d, 1).unwrap();
            // spread displacement sizes around the CP boundary
            let norm = rng.gen_range(0.0..2.0) * mu.iter().cloned().fold(f64::INFINITY, f64::min)
                + if i % 3 == 0 { rng.gen_range(0.0..0.5) } else { 0.0 };
            let ch = AffineChannel::new(d, 1, lam, Some(random_displacement(&mut rng, d, norm))).unwrap();
            let f = feasible(&displacement_problem(&ch).unwrap()).unwrap();
            let k = check_cp_choi(&ch).unwrap();
            assert!((f.margin - k.margin).abs() < 1e-9);
            if k.verdict != Verdict::Boundary {
                assert_eq!(f.feasible, k.admits_cp(), "d={d} i={i}");
            }
        }
    }
}

#[test]
fn sufficient_bound_never_contradicted() {
    let mut rng = StdRng::seed_from_u64(31);
    for d in 2..=4 {
        for _ in 0..400 {
            let ch = random_bounded_nonunital(&mut rng, d);
            let bound = sufficient_displacement_bound(&ch).unwrap();
            assert!(bound.applies);
            assert_ne!(check_cp_choi(&ch).unwrap().verdict, Verdict::NotCp);
            assert!(feasible(&displacement_problem(&ch).unwrap()).unwrap().feasible);
        }
    }
}

#[test]
fn kraus_matches_affine_action() {
    let mut rng = StdRng::seed_from_u64(32);
    for d in 2..=3 {
        for i in 0..40 {
            let ch = if i % 2 == 0 {
                AffineChannel::new(d, 1, random_cp_lambda(&mut rng, d, 1), None).unwrap()
            } else {
                random_bounded_nonunital(&mut rng, d)
            };
            let kraus = kraus_from_choi(&choi(&ch).unwrap()).unwrap();
            assert!(kraus.completeness_residual < 1e-9);
            for _ in 0..5 {
                let rho = random_state(&mut rng, d, 1);
                let direct = apply(&ch, &rho).unwrap();
                assert!(kraus.apply(rho.matrix()).max_diff(&direct.matrix) < 1e-9);
            }
        }
    }
}

#[test]
fn kraus_on_product_channel() {
    let mut rng = StdRng::seed_from_u64(33);
    let lam = random_cp_lambda(&mut rng, 2, 2);
    let ch = AffineChannel::new(2, 2, lam, None).unwrap();
    let kraus = kraus_from_choi(&choi(&ch).unwrap()).unwrap();
    assert!(kraus.completeness_residual < 1e-9);
    let rho = random_state(&mut rng, 2, 2);
    assert!(kraus.apply(rho.matrix()).max_diff(&apply(&ch, &rho).unwrap().matrix) < 1e-9);
}

#[test]
fn product_of_depolarizers_spectrum() {
    // λ of a product map is the tensor product of the factors' λ vectors
    let a = qcp_core::cp::depolarizing_channel(2, 0.3).unwrap();
    let b = qcp_core::cp::depolarizing_channel(2, -0.2).unwrap();
    let lam = qcp_core::linalg::tensor_vec(a.lambda(), b.lambda());
    let ch = AffineChannel::new(2, 2, lam, None).unwrap();
    let mu_a = mu_vector(a.lambda(), 2, 1).unwrap();
    let mu_b = mu_vector(b.lambda(), 2, 1).unwrap();
    let expected: Vec<f64> = mu_a.iter().flat_map(|x| mu_b.iter().map(move |y| x * y)).collect();
    let got = mu_vector(ch.lambda(), 2, 2).unwrap();
    for (x, y) in got.iter().zip(&expected) {
        assert!((x - y).abs() < 1e-12);
    }
    let ca = choi(&a).unwrap();
    let cb = choi(&b).unwrap();
    // Choi of the product, reordered, has the same spectrum as the factors' tensor
    let prod = tensor(ca.matrix(), cb.matrix());
    let s1 = hermitian_eigenvalues(&prod, 1e-12).unwrap();
    let s2 = hermitian_eigenvalues(choi(&ch).unwrap().matrix(), 1e-12).unwrap();
    assert!(max_sorted_diff(&s1, &s2) < 1e-10);
}

#[test]
fn rays_agree_with_grid_scan() {
    let mut rng = StdRng::seed_from_u64(34);
    for _ in 0..5 {
        let d = 2;
        let base = random_bounded_nonunital(&mut rng, d);
        let mut dir = random_constrained_lambda(&mut rng, d, 1, 1.0);
        dir[0] = common::c(0.0, 0.0);
        let r = max_ray_parameter(&base, &dir, 0.0, 10.0).unwrap();
        assert!(r.margin_at_t_max.abs() <= 1e-8);
        assert!(ray_margin(&base, &dir, r.t_max - 1e-7).unwrap() >= -1e-9);
        assert!(ray_margin(&base, &dir, r.t_max + 1e-7).unwrap() < 0.0);
        // coarse scan then refine
        let mut t = 0.0;
        while ray_margin(&base, &dir, t + 1e-3).unwrap() >= 0.0 {
            t += 1e-3;
        }
        let mut fine = t;
        while ray_margin(&base, &dir, fine + 1e-6).unwrap() >= 0.0 {
            fine += 1e-6;
        }
        assert!((fine - r.t_max).abs() < 2e-6);
    }
}

#[test]
fn ray_feasible_set_is_convex() {
    let mut rng = StdRng::seed_from_u64(35);
    for d in 2..=3 {
        let base = AffineChannel::new(d, 1, random_cp_lambda(&mut rng, d, 1), None).unwrap();
        let mut dir = random_constrained_lambda(&mut rng, d, 1, 1.0);
        dir[0] = common::c(0.0, 0.0);
        let r = max_ray_parameter(&base, &dir, 0.0, 50.0).unwrap();
        for k in 0..=20 {
            let t = r.t_max * k as f64 / 20.0;
            assert!(ray_margin(&base, &dir, t).unwrap() >= -1e-9);
        }
    }
}

#[test]
fn channel_file_round_trip() {
    let mut rng = StdRng::seed_from_u64(36);
    let ch = random_bounded_nonunital(&mut rng, 3);
    let json = serde_json::to_string(&ChannelFile::from_channel(&ch)).unwrap();
    let back: ChannelFile = serde_json::from_str(&json).unwrap();
    let ch2 = back.to_channel().unwrap();
    for (a, b) in ch.lambda().iter().zip(ch2.lambda()) {
        assert!((a - b).norm() < 1e-11);
    }
    assert_eq!(serde_json::to_string(&ChannelFile::from_channel(&ch2)).unwrap(), json);
}

fn arb_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bloch_norm_bounds(seed in arb_seed(), d in 2usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let rho = random_state(&mut rng, d, 1);
        let r = bloch_from_density(&rho);
        let norm = r.norm();
        prop_assert!(norm >= 1.0 - 1e-9);
        prop_assert!(norm <= (d as f64).sqrt() + 1e-9);
        prop_assert!((rho.purity() - norm * norm / d as f64).abs() < 1e-9);
        let back = density_from_bloch(&r).unwrap();
        prop_assert!(back.matrix().max_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn pure_states_sit_on_the_outer_sphere(seed in arb_seed(), d in 2usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let r = bloch_from_density(&random_pure_state(&mut rng, d, 1));
        prop_assert!((r.norm() - (d as f64).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn constraint_closed_under_real_combinations(seed in arb_seed(), d in 2usize..=4, t in -3.0f64..3.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = bloch_from_density(&random_state(&mut rng, d, 1));
        let b = bloch_from_density(&random_state(&mut rng, d, 1));
        let sum: Vec<_> = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x + y).collect();
        let scaled: Vec<_> = a.coeffs().iter().map(|x| x * t).collect();
        prop_assert!(GeneralizedBlochVector::new(sum, d, 1).unwrap().hermiticity_defect() < 1e-12);
        prop_assert!(GeneralizedBlochVector::new(scaled, d, 1).unwrap().hermiticity_defect() < 1e-12);
    }

    #[test]
    fn trace_preserved_for_any_valid_channel(seed in arb_seed(), d in 2usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let lam = random_constrained_lambda(&mut rng, d, 1, 1.0);
        let size = rng.gen_range(0.0..1.0);
        let cv = random_displacement(&mut rng, d, size);
        let ch = AffineChannel::new(d, 1, lam, Some(cv)).unwrap();
        prop_assert!(validate(&ch).passed());
        let out = apply(&ch, &random_state(&mut rng, d, 1)).unwrap();
        prop_assert!((out.matrix.trace().re - 1.0).abs() < 1e-10);
        prop_assert!(out.matrix.trace().im.abs() < 1e-10);
    }

    #[test]
    fn unital_maps_fix_the_maximally_mixed_state(seed in arb_seed(), d in 2usize..=4, n in 1usize..=2) {
        let mut rng = StdRng::seed_from_u64(seed);
        let ch = AffineChannel::new(d, n, random_constrained_lambda(&mut rng, d, n, 1.0), None).unwrap();
        let mixed = DensityMatrix::maximally_mixed(d, n).unwrap();
        let out = apply(&ch, &mixed).unwrap();
        prop_assert!(out.matrix.max_diff(mixed.matrix()) < 1e-12);
    }

    #[test]
    fn choi_is_affine_in_lambda(seed in arb_seed(), d in 2usize..=4, w in 0.0f64..1.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let l1 = random_constrained_lambda(&mut rng, d, 1, 1.0);
        let l2 = random_constrained_lambda(&mut rng, d, 1, 1.0);
        let blend: Vec<_> = l1.iter().zip(&l2).map(|(a, b)| a * w + b * (1.0 - w)).collect();
        let c1 = choi(&AffineChannel::new(d, 1, l1, None).unwrap()).unwrap();
        let c2 = choi(&AffineChannel::new(d, 1, l2, None).unwrap()).unwrap();
        let cb = choi(&AffineChannel::new(d, 1, blend, None).unwrap()).unwrap();
        let mix = &c1.matrix().scale(common::c(w, 0.0)) + &c2.matrix().scale(common::c(1.0 - w, 0.0));
        prop_assert!(cb.matrix().max_diff(&mix) < 1e-12);
    }

    #[test]
    fn cp_verdicts_respect_conjugate_axes(seed in arb_seed(), d in 2usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let ch = AffineChannel::new(d, 1, random_cp_lambda(&mut rng, d, 1), None).unwrap();
        prop_assert!(check_cp_qft(&ch).unwrap().admits_cp());
        for k in 0..d * d {
            let neg = PauliString::from_linear(k, d, 1).unwrap().neg().linear();
            prop_assert!((ch.lambda()[neg] - ch.lambda()[k].conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn lambda_mu_inverse(seed in arb_seed(), d in 2usize..=4, n in 1usize..=2) {
        let mut rng = StdRng::seed_from_u64(seed);
        let lam = random_constrained_lambda(&mut rng, d, n, 1.0);
        let mu = mu_vector(&lam, d, n).unwrap();
        let back = lambda_from_mu(&mu, d, n).unwrap();
        for (a, b) in back.iter().zip(&lam) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn raising_diag_shift_keeps_feasibility(seed in arb_seed(), d in 2usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let ch = random_bounded_nonunital(&mut rng, d);
        let p = displacement_problem(&ch).unwrap();
        let before = feasible(&p).unwrap();
        let raised: Vec<f64> = p.diag_shift().iter().map(|x| x + rng.gen_range(0.0..0.1)).collect();
        let after = feasible(&p.with_shift(raised).unwrap()).unwrap();
        prop_assert!(after.margin >= before.margin - 1e-12);
        prop_assert!(!before.feasible || after.feasible);
    }

    #[test]
    fn hermitian_input_spectrum_is_real_and_traced(seed in arb_seed(), dim in 2usize..=12) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a: ComplexMatrix = random_hermitian(&mut rng, dim);
        let vals = hermitian_eigenvalues(&a, 1e-12).unwrap();
        let total: f64 = vals.iter().sum();
        prop_assert!((total - a.trace().re).abs() < 1e-9 * dim as f64);
    }
}
