//! Self-checks of the oracle routes: MC against exact Gaussian moments, the
//! pair marginal against sample covariance, and the radial quadrature against
//! closed forms and MC.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use ecg_core::{pair_product, quadratic_moment, quartic_moment, EcgBasisFunction, PairProduct};
use matkit::{block_quadratic, dot, Matrix, PairCoupling, SpdMatrix};
use mc_oracle::{
    marginal_pair_density, mc_expectation, radial_expectation, OracleError, OracleMethod,
};
use quad_engine::{erf, QuadratureSpec};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_spd(rng: &mut impl Rng, n: usize) -> SpdMatrix {
    let mut l = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, rng.gen_range(-0.6..0.6));
        }
        l.set(i, i, rng.gen_range(0.4..1.6));
    }
    SpdMatrix::from_matrix(l.mul(&l.transpose()).unwrap().symmetrized()).unwrap()
}

fn random_fecg(rng: &mut impl Rng, n: usize) -> EcgBasisFunction {
    let a = random_spd(rng, n);
    let s: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-0.8..0.8)).collect();
    EcgBasisFunction::new(a, s).unwrap()
}

fn random_product(rng: &mut impl Rng, n: usize) -> PairProduct {
    pair_product(&random_fecg(rng, n), &random_fecg(rng, n)).unwrap()
}

fn random_ecg_product(rng: &mut impl Rng, n: usize) -> PairProduct {
    let bra = EcgBasisFunction::ecg(random_spd(rng, n)).unwrap();
    let ket = EcgBasisFunction::ecg(random_spd(rng, n)).unwrap();
    pair_product(&bra, &ket).unwrap()
}

/// Per-axis variance and mean length of the pair vector, derived directly
/// from the cached product moments.
fn pair_sigma_mu(pp: &PairProduct, coupling: &PairCoupling) -> (f64, f64) {
    let c = pp.inv_a_kl().scale(0.5);
    let sigma_sq = coupling.trace_with(&c).unwrap();
    let mu_vec = coupling.apply_block(pp.mean());
    let mu_sq: f64 = match *coupling {
        PairCoupling::Inter { i, .. } => (0..3).map(|c| mu_vec[3 * i + c].powi(2)).sum(),
        PairCoupling::Single { p, .. } => (0..3).map(|c| mu_vec[3 * p + c].powi(2)).sum(),
    };
    (sigma_sq.sqrt(), mu_sq.sqrt())
}

#[test]
fn constant_integrand_reproduces_overlap_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for n in 1..4 {
        let pp = random_product(&mut rng, n);
        let est = mc_expectation(&pp, |_| 1.0, 1_000, 7).unwrap();
        assert_relative_eq!(est.value, pp.overlap(), max_relative = 1e-15);
        assert_abs_diff_eq!(est.std_error, 0.0, epsilon = 1e-12 * pp.overlap());
        assert_eq!(est.samples, 1_000);
        assert_eq!(est.method, OracleMethod::Mc);
    }
}

#[test]
fn centered_quadratic_matches_gaussian_moment() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for n in 1..4 {
        let pp = random_product(&mut rng, n);
        let a_kl = pp.a_kl().matrix().clone();
        let mean = pp.mean().to_vec();
        let f = move |r: &[f64]| {
            let d: Vec<f64> = r.iter().zip(&mean).map(|(ri, mi)| ri - mi).collect();
            block_quadratic(&a_kl, &d, &d)
        };
        let est = mc_expectation(&pp, f, 100_000, 11).unwrap();
        let exact = 1.5 * n as f64 * pp.overlap();
        assert!(
            (est.value - exact).abs() <= 3.0 * est.std_error,
            "n={n}: {} vs {} (3σ = {})",
            est.value,
            exact,
            3.0 * est.std_error
        );
        assert!(est.std_error > 0.0);
    }
}

#[test]
fn seeded_runs_are_bit_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let pp = random_product(&mut rng, 2);
    let f = |r: &[f64]| dot(r, r);
    let first = mc_expectation(&pp, f, 10_000, 42).unwrap();
    let second = mc_expectation(&pp, f, 10_000, 42).unwrap();
    assert_eq!(first.value.to_bits(), second.value.to_bits());
    assert_eq!(first.std_error.to_bits(), second.std_error.to_bits());

    let other = mc_expectation(&pp, f, 10_000, 43).unwrap();
    assert_ne!(first.value.to_bits(), other.value.to_bits());
}

#[test]
fn non_finite_samples_and_empty_budgets_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let pp = random_product(&mut rng, 2);

    let err = mc_expectation(&pp, |_| f64::INFINITY, 100, 1).unwrap_err();
    assert!(matches!(err, OracleError::NonFiniteSample { index: 0 }));

    let err = mc_expectation(&pp, |r| (r[0] - 10.0).ln(), 10_000, 1).unwrap_err();
    assert!(matches!(err, OracleError::NonFiniteSample { .. }));

    let err = mc_expectation(&pp, |_| 1.0, 0, 1).unwrap_err();
    assert!(matches!(err, OracleError::InvalidRequest { .. }));
}

#[test]
fn marginal_fixture_for_unit_pair() {
    let bra = EcgBasisFunction::ecg(SpdMatrix::identity(2)).unwrap();
    let ket = EcgBasisFunction::ecg(SpdMatrix::identity(2)).unwrap();
    let pp = pair_product(&bra, &ket).unwrap();
    let u = PairCoupling::inter(0, 1, 2).unwrap();
    let w = PairCoupling::single(0, 2).unwrap();

    let marginal = marginal_pair_density(&pp, &u, &w).unwrap();
    assert_relative_eq!(marginal.covariance.get(0, 0), 0.5, max_relative = 1e-15);
    assert_relative_eq!(marginal.covariance.get(1, 1), 0.25, max_relative = 1e-15);
    assert_relative_eq!(marginal.covariance.get(0, 1), 0.25, max_relative = 1e-15);
    assert_eq!(marginal.covariance.get(0, 1), marginal.covariance.get(1, 0));
    assert_eq!(marginal.mean_u, [0.0; 3]);
    assert_eq!(marginal.mean_w, [0.0; 3]);
}

#[test]
fn marginal_covariance_matches_sample_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut cases = vec![(
        pair_product(
            &EcgBasisFunction::ecg(SpdMatrix::identity(2)).unwrap(),
            &EcgBasisFunction::ecg(SpdMatrix::identity(2)).unwrap(),
        )
        .unwrap(),
        1_000_000usize,
    )];
    for _ in 0..3 {
        cases.push((random_product(&mut rng, 2), 200_000));
    }

    for (case, (pp, samples)) in cases.iter().enumerate() {
        let u = PairCoupling::inter(0, 1, 2).unwrap();
        let w = PairCoupling::single(0, 2).unwrap();
        let marginal = marginal_pair_density(pp, &u, &w).unwrap();
        let s_kl = pp.overlap();

        let entries = [
            (u, u, marginal.mean_u, marginal.mean_u, marginal.covariance.get(0, 0)),
            (w, w, marginal.mean_w, marginal.mean_w, marginal.covariance.get(1, 1)),
            (u, w, marginal.mean_u, marginal.mean_w, marginal.covariance.get(0, 1)),
        ];
        for (ca, cb, mean_a, mean_b, expected) in entries {
            let f = move |r: &[f64]| {
                let ua = ca.apply_block(r);
                let wb = cb.apply_block(r);
                let a3 = pair_components(&ca, &ua);
                let b3 = pair_components(&cb, &wb);
                (0..3).map(|c| (a3[c] - mean_a[c]) * (b3[c] - mean_b[c])).sum::<f64>()
            };
            let est = mc_expectation(pp, f, *samples, 17).unwrap();
            let sample_cov = est.value / s_kl / 3.0;
            let sigma = est.std_error / s_kl / 3.0;
            assert!(
                (sample_cov - expected).abs() <= 4.0 * sigma,
                "case {case}: sample {} vs exact {} (4σ = {})",
                sample_cov,
                expected,
                4.0 * sigma
            );
        }
    }
}

/// Extracts the pair vector's own 3 components from an `apply_block` image.
fn pair_components(coupling: &PairCoupling, image: &[f64]) -> [f64; 3] {
    let anchor = match *coupling {
        PairCoupling::Inter { i, .. } => i,
        PairCoupling::Single { p, .. } => p,
    };
    [image[3 * anchor], image[3 * anchor + 1], image[3 * anchor + 2]]
}

#[test]
fn diagonal_product_leaves_distinct_particles_uncorrelated() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..10 {
        let d1: f64 = rng.gen_range(0.3..2.0);
        let d2: f64 = rng.gen_range(0.3..2.0);
        let a = SpdMatrix::from_rows(&[vec![d1, 0.0], vec![0.0, d2]]).unwrap();
        let bra = EcgBasisFunction::ecg(a.clone()).unwrap();
        let ket = EcgBasisFunction::ecg(a).unwrap();
        let pp = pair_product(&bra, &ket).unwrap();

        let u = PairCoupling::single(0, 2).unwrap();
        let w = PairCoupling::single(1, 2).unwrap();
        let marginal = marginal_pair_density(&pp, &u, &w).unwrap();
        assert_eq!(marginal.covariance.get(0, 1), 0.0);
        assert_eq!(marginal.covariance.get(1, 0), 0.0);
    }
}

#[test]
fn identical_couplings_are_degenerate() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let pp = random_product(&mut rng, 2);
    let u = PairCoupling::inter(0, 1, 2).unwrap();
    let err = marginal_pair_density(&pp, &u, &u).unwrap_err();
    assert!(matches!(err, OracleError::DegenerateMarginal));

    let wrong_dim = PairCoupling::single(0, 3).unwrap();
    let err = marginal_pair_density(&pp, &u, &wrong_dim).unwrap_err();
    assert!(matches!(err, OracleError::InvalidRequest { .. }));
}

#[test]
fn marginal_swaps_cleanly_with_its_arguments() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let pp = random_product(&mut rng, 3);
    let u = PairCoupling::inter(0, 2, 3).unwrap();
    let w = PairCoupling::single(1, 3).unwrap();

    let forward = marginal_pair_density(&pp, &u, &w).unwrap();
    let swapped = marginal_pair_density(&pp, &w, &u).unwrap();
    assert_eq!(forward.covariance.get(0, 0), swapped.covariance.get(1, 1));
    assert_eq!(forward.covariance.get(1, 1), swapped.covariance.get(0, 0));
    assert_eq!(forward.covariance.get(0, 1), swapped.covariance.get(0, 1));
    assert_eq!(forward.mean_u, swapped.mean_w);
    assert_eq!(forward.mean_w, swapped.mean_u);
}

#[test]
fn radial_constant_reproduces_overlap() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let spec = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        ..QuadratureSpec::default()
    };
    for n in 2..4 {
        for shifted in [false, true] {
            let pp = if shifted {
                random_product(&mut rng, n)
            } else {
                random_ecg_product(&mut rng, n)
            };
            let coupling = PairCoupling::inter(0, 1, n).unwrap();
            let est = radial_expectation(&pp, &coupling, |_| 1.0, &spec).unwrap();
            assert_relative_eq!(est.value, pp.overlap(), max_relative = 1e-12);
            assert_eq!(est.samples, 0);
            assert_eq!(est.method, OracleMethod::Radial);
        }
    }
}

#[test]
fn radial_second_moment_matches_closed_form_and_quadratic_moment() {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let spec = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        ..QuadratureSpec::default()
    };
    for _ in 0..8 {
        let n = rng.gen_range(2..4);
        let pp = random_product(&mut rng, n);
        let coupling = if rng.gen_bool(0.5) {
            PairCoupling::inter(0, 1, n).unwrap()
        } else {
            PairCoupling::single(0, n).unwrap()
        };
        let est = radial_expectation(&pp, &coupling, |rho| rho * rho, &spec).unwrap();

        let (sigma, mu) = pair_sigma_mu(&pp, &coupling);
        let closed = pp.overlap() * (3.0 * sigma * sigma + mu * mu);
        assert_relative_eq!(est.value, closed, max_relative = 1e-10);

        let moment = quadratic_moment(&pp, &coupling.dense(), &vec![0.0; 3 * n]).unwrap();
        assert_relative_eq!(est.value, moment, max_relative = 1e-10);
    }
}

#[test]
fn radial_inverse_distance_matches_erf_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let spec = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        ..QuadratureSpec::default()
    };
    for _ in 0..8 {
        let n = rng.gen_range(2..4);
        let pp = random_product(&mut rng, n);
        let coupling = PairCoupling::inter(0, 1, n).unwrap();
        let est = radial_expectation(&pp, &coupling, |rho| 1.0 / rho, &spec).unwrap();

        let (sigma, mu) = pair_sigma_mu(&pp, &coupling);
        let closed = if mu > 1e-6 * sigma {
            pp.overlap() * erf(mu / (sigma * 2.0f64.sqrt())) / mu
        } else {
            pp.overlap() * (2.0 / PI).sqrt() / sigma
        };
        assert_relative_eq!(est.value, closed, max_relative = 1e-10);
    }

    let pp = random_ecg_product(&mut rng, 2);
    let coupling = PairCoupling::inter(0, 1, 2).unwrap();
    let est = radial_expectation(&pp, &coupling, |rho| 1.0 / rho, &spec).unwrap();
    let (sigma, _) = pair_sigma_mu(&pp, &coupling);
    assert_relative_eq!(
        est.value,
        pp.overlap() * (2.0 / PI).sqrt() / sigma,
        max_relative = 1e-10
    );
}

#[test]
fn radial_inverse_square_matches_central_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(112);
    let spec = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        ..QuadratureSpec::default()
    };
    for _ in 0..8 {
        let n = rng.gen_range(2..4);
        let pp = random_ecg_product(&mut rng, n);
        let coupling = if rng.gen_bool(0.5) {
            PairCoupling::inter(0, 1, n).unwrap()
        } else {
            PairCoupling::single(1, n).unwrap()
        };
        let est =
            radial_expectation(&pp, &coupling, |rho| 1.0 / (rho * rho), &spec).unwrap();
        let a = coupling.trace_with(pp.inv_a_kl()).unwrap();
        assert_relative_eq!(est.value, 2.0 * pp.overlap() / a, max_relative = 1e-10);
    }
}

#[test]
fn radial_and_mc_agree_when_both_apply() {
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    let spec = QuadratureSpec::default();
    for _ in 0..4 {
        let pp = random_product(&mut rng, 2);
        let coupling = PairCoupling::inter(0, 1, 2).unwrap();

        let inv_r = radial_expectation(&pp, &coupling, |rho| 1.0 / rho, &spec).unwrap();
        let mc_inv_r = mc_expectation(
            &pp,
            |r| {
                let d: f64 = (0..3).map(|c| (r[c] - r[3 + c]).powi(2)).sum();
                1.0 / d.sqrt()
            },
            200_000,
            29,
        )
        .unwrap();
        assert!(
            (inv_r.value - mc_inv_r.value).abs() <= 4.0 * mc_inv_r.std_error,
            "1/ρ: {} vs {} (4σ = {})",
            inv_r.value,
            mc_inv_r.value,
            4.0 * mc_inv_r.std_error
        );

        let rho_sq = radial_expectation(&pp, &coupling, |rho| rho * rho, &spec).unwrap();
        let mc_rho_sq = mc_expectation(
            &pp,
            |r| (0..3).map(|c| (r[c] - r[3 + c]).powi(2)).sum::<f64>(),
            200_000,
            31,
        )
        .unwrap();
        assert!(
            (rho_sq.value - mc_rho_sq.value).abs() <= 4.0 * mc_rho_sq.std_error,
            "ρ²: {} vs {} (4σ = {})",
            rho_sq.value,
            mc_rho_sq.value,
            4.0 * mc_rho_sq.std_error
        );
    }
}

#[test]
fn mc_validates_quadratic_and_quartic_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(114);
    for _ in 0..6 {
        let n = rng.gen_range(1..3);
        let pp = random_product(&mut rng, n);
        let u = random_spd(&mut rng, n).matrix().clone();
        let w = random_spd(&mut rng, n).matrix().clone();
        let p: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let q: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-0.5..0.5)).collect();

        let quad_exact = quadratic_moment(&pp, &u, &p).unwrap();
        let quartic_exact = quartic_moment(&pp, &u, &p, &w, &q).unwrap();

        let (fu, fw) = (u.clone(), w.clone());
        let (fp, fq) = (p.clone(), q.clone());
        let quad_mc = mc_expectation(
            &pp,
            {
                let (u, p) = (fu.clone(), fp.clone());
                move |r: &[f64]| {
                    let d: Vec<f64> = r.iter().zip(&p).map(|(ri, pi)| ri - pi).collect();
                    block_quadratic(&u, &d, &d)
                }
            },
            200_000,
            57,
        )
        .unwrap();
        assert!(
            (quad_mc.value - quad_exact).abs() <= 4.0 * quad_mc.std_error,
            "quadratic: {} vs {} (4σ = {})",
            quad_mc.value,
            quad_exact,
            4.0 * quad_mc.std_error
        );

        let quartic_mc = mc_expectation(
            &pp,
            move |r: &[f64]| {
                let du: Vec<f64> = r.iter().zip(&fp).map(|(ri, pi)| ri - pi).collect();
                let dw: Vec<f64> = r.iter().zip(&fq).map(|(ri, qi)| ri - qi).collect();
                block_quadratic(&fu, &du, &du) * block_quadratic(&fw, &dw, &dw)
            },
            200_000,
            59,
        )
        .unwrap();
        assert!(
            (quartic_mc.value - quartic_exact).abs() <= 4.0 * quartic_mc.std_error,
            "quartic: {} vs {} (4σ = {})",
            quartic_mc.value,
            quartic_exact,
            4.0 * quartic_mc.std_error
        );
    }
}

#[test]
fn closed_forms_sit_inside_five_sigma_on_a_hundred_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(115);
    let mut hits = 0;
    let total = 100;
    for trial in 0..total {
        let n = rng.gen_range(1..3);
        let pp = random_product(&mut rng, n);
        let u = random_spd(&mut rng, n).matrix().clone();
        let p: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let exact = quadratic_moment(&pp, &u, &p).unwrap();

        let est = mc_expectation(
            &pp,
            {
                let (u, p) = (u.clone(), p.clone());
                move |r: &[f64]| {
                    let d: Vec<f64> = r.iter().zip(&p).map(|(ri, pi)| ri - pi).collect();
                    block_quadratic(&u, &d, &d)
                }
            },
            20_000,
            1_000 + trial,
        )
        .unwrap();
        if (est.value - exact).abs() <= 5.0 * est.std_error {
            hits += 1;
        }
    }
    assert!(hits >= 95, "only {hits}/{total} instances inside 5σ");
}
