//! Pair-product identities, overlap fixtures against quadrature oracles, and
//! the Gaussian moment formulas.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use ecg_core::{pair_product, quadratic_moment, quartic_moment, EcgBasisFunction};
use matkit::{block_apply, block_quadratic, dot, Matrix, SpdMatrix};
use quad_engine::{integrate, QuadratureSpec, Transform};
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

/// ∫_ℝ f(x) dx by folding onto the half line.
fn real_line_integral(f: impl Fn(f64) -> f64) -> f64 {
    let spec = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        transform: Transform::RationalInfinite,
        ..QuadratureSpec::default()
    };
    integrate(|x| f(x) + f(-x), 0.0, f64::INFINITY, &spec)
        .unwrap()
        .value
}

#[test]
fn opposite_shift_pair_fixture() {
    let a = SpdMatrix::from_rows(&[vec![1.0]]).unwrap();
    let bra = EcgBasisFunction::new(a.clone(), vec![1.0, 0.0, 0.0]).unwrap();
    let ket = EcgBasisFunction::new(a, vec![-1.0, 0.0, 0.0]).unwrap();
    let pp = pair_product(&bra, &ket).unwrap();

    assert_relative_eq!(pp.a_kl().get(0, 0), 2.0);
    for &e in pp.e_kl() {
        assert_abs_diff_eq!(e, 0.0, epsilon = 1e-15);
    }
    assert_relative_eq!(pp.eta_kl(), 2.0);
    assert_relative_eq!(pp.gamma_kl(), -2.0, max_relative = 1e-14);
    assert_relative_eq!(
        pp.overlap(),
        (-2.0f64).exp() * PI.powf(1.5) * 2.0f64.powf(-1.5),
        max_relative = 1e-13
    );
}

#[test]
fn zero_shift_pair_has_no_linear_part() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let n = rng.gen_range(1..4);
        let bra = EcgBasisFunction::ecg(random_spd(&mut rng, n)).unwrap();
        let ket = EcgBasisFunction::ecg(random_spd(&mut rng, n)).unwrap();
        let pp = pair_product(&bra, &ket).unwrap();
        assert!(pp.e_kl().iter().all(|&e| e == 0.0));
        assert_eq!(pp.eta_kl(), 0.0);
        assert_eq!(pp.gamma_kl(), 0.0);
        assert!(pp.mean().iter().all(|&m| m == 0.0));
    }
}

#[test]
fn product_reconstructs_pointwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..10 {
        let n = rng.gen_range(1..4);
        let bra = random_fecg(&mut rng, n);
        let ket = random_fecg(&mut rng, n);
        let pp = pair_product(&bra, &ket).unwrap();
        for _ in 0..20 {
            let r: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let direct = bra.value(&r) * ket.value(&r);
            let quad = block_quadratic(pp.a_kl().matrix(), &r, &r);
            let reconstructed = (-pp.eta_kl()).exp() * (-quad + 2.0 * dot(pp.e_kl(), &r)).exp();
            assert_relative_eq!(direct, reconstructed, max_relative = 1e-12);
        }
    }
}

#[test]
fn overlap_fixtures() {
    let single = EcgBasisFunction::ecg(SpdMatrix::from_rows(&[vec![1.0]]).unwrap()).unwrap();
    let pp = pair_product(&single, &single).unwrap();
    assert_relative_eq!(
        pp.overlap(),
        PI.powf(1.5) * 2.0f64.powf(-1.5),
        max_relative = 1e-14
    );
    assert_relative_eq!(pp.overlap(), 1.96870, max_relative = 1e-5);

    let two = EcgBasisFunction::ecg(SpdMatrix::identity(2)).unwrap();
    let pp2 = pair_product(&two, &two).unwrap();
    assert_relative_eq!(pp2.overlap(), PI.powi(3) / 8.0, max_relative = 1e-14);
    assert_relative_eq!(pp2.overlap(), 3.87578, max_relative = 1e-5);
}

#[test]
fn overlap_matches_axis_factorized_quadrature() {
    // For n = 1 the 3-D overlap integral factorizes per Cartesian axis.
    let cases = [
        (1.0, 1.0, [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]),
        (0.7, 1.3, [0.4, -0.2, 0.9], [0.1, 0.5, -0.3]),
        (2.0, 0.5, [0.0, 0.0, 0.0], [0.6, 0.6, 0.6]),
    ];
    for (alpha, beta, sk, sl) in cases {
        let bra =
            EcgBasisFunction::new(SpdMatrix::from_rows(&[vec![alpha]]).unwrap(), sk.to_vec())
                .unwrap();
        let ket =
            EcgBasisFunction::new(SpdMatrix::from_rows(&[vec![beta]]).unwrap(), sl.to_vec())
                .unwrap();
        let pp = pair_product(&bra, &ket).unwrap();
        let mut oracle = 1.0;
        for c in 0..3 {
            oracle *= real_line_integral(|x| {
                (-alpha * (x - sk[c]) * (x - sk[c]) - beta * (x - sl[c]) * (x - sl[c])).exp()
            });
        }
        assert_relative_eq!(pp.overlap(), oracle, max_relative = 1e-11);
    }
}

#[test]
fn overlap_is_symmetric_positive_and_cauchy_schwarz() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..100 {
        let n = rng.gen_range(1..4);
        let k = random_fecg(&mut rng, n);
        let l = random_fecg(&mut rng, n);
        let s_kl = pair_product(&k, &l).unwrap().overlap();
        let s_lk = pair_product(&l, &k).unwrap().overlap();
        let s_kk = pair_product(&k, &k).unwrap().overlap();
        let s_ll = pair_product(&l, &l).unwrap().overlap();
        assert_relative_eq!(s_kl, s_lk, max_relative = 1e-13);
        assert!(s_kk > 0.0 && s_ll > 0.0);
        assert!(s_kl * s_kl <= s_kk * s_ll * (1.0 + 1e-12));
    }
}

#[test]
fn moments_solve_the_linear_system() {
    let diag = EcgBasisFunction::ecg(SpdMatrix::identity(2)).unwrap();
    let pp = pair_product(&diag, &diag).unwrap();
    let mom = pp.moments();
    assert!(mom.mean.iter().all(|&m| m == 0.0));
    for i in 0..2 {
        for j in 0..2 {
            let expect = if i == j { 0.25 } else { 0.0 };
            assert_relative_eq!(mom.covariance_factor.get(i, j), expect, epsilon = 1e-15);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..50 {
        let n = rng.gen_range(1..4);
        let bra = random_fecg(&mut rng, n);
        let ket = random_fecg(&mut rng, n);
        let pp = pair_product(&bra, &ket).unwrap();
        let residual = block_apply(pp.a_kl().matrix(), pp.mean());
        for (lhs, rhs) in residual.iter().zip(pp.e_kl()) {
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }
}

#[test]
fn quadratic_moment_fixtures() {
    let half = EcgBasisFunction::ecg(SpdMatrix::scaled_identity(2, 0.5)).unwrap();
    let pp = pair_product(&half, &half).unwrap();
    let value = quadratic_moment(&pp, &Matrix::identity(2), &[0.0; 6]).unwrap();
    assert_relative_eq!(value, 3.0 * pp.overlap(), max_relative = 1e-13);

    let zero = quadratic_moment(&pp, &Matrix::zeros(2), &[0.0; 6]).unwrap();
    assert_eq!(zero, 0.0);
}

#[test]
fn quadratic_moment_matches_axis_factorized_quadrature() {
    // n = 1, U = [u]: ∫ u|r−p|² φφ factorizes into three 1-D moments.
    let alpha = 0.8;
    let beta = 1.1;
    let sk = [0.3, -0.1, 0.2];
    let sl = [-0.2, 0.4, 0.0];
    let p = [0.1, 0.1, -0.3];
    let u = 1.7;
    let bra = EcgBasisFunction::new(SpdMatrix::from_rows(&[vec![alpha]]).unwrap(), sk.to_vec())
        .unwrap();
    let ket = EcgBasisFunction::new(SpdMatrix::from_rows(&[vec![beta]]).unwrap(), sl.to_vec())
        .unwrap();
    let pp = pair_product(&bra, &ket).unwrap();
    let value = quadratic_moment(&pp, &Matrix::from_rows(&[vec![u]]).unwrap(), &p).unwrap();

    let weight = |c: usize, x: f64| {
        (-alpha * (x - sk[c]) * (x - sk[c]) - beta * (x - sl[c]) * (x - sl[c])).exp()
    };
    let mut norms = [0.0; 3];
    let mut seconds = [0.0; 3];
    for c in 0..3 {
        norms[c] = real_line_integral(|x| weight(c, x));
        seconds[c] = real_line_integral(|x| (x - p[c]) * (x - p[c]) * weight(c, x));
    }
    let oracle = u
        * (seconds[0] * norms[1] * norms[2]
            + norms[0] * seconds[1] * norms[2]
            + norms[0] * norms[1] * seconds[2]);
    assert_relative_eq!(value, oracle, max_relative = 1e-10);
}

#[test]
fn virial_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..100 {
        let n = rng.gen_range(1..4);
        let bra = random_fecg(&mut rng, n);
        let ket = random_fecg(&mut rng, n);
        let pp = pair_product(&bra, &ket).unwrap();
        let value = quadratic_moment(&pp, pp.a_kl().matrix(), pp.mean()).unwrap();
        assert_relative_eq!(
            value,
            1.5 * n as f64 * pp.overlap(),
            max_relative = 1e-12
        );
    }
}

#[test]
fn quartic_moment_fixtures() {
    let half = EcgBasisFunction::ecg(SpdMatrix::scaled_identity(2, 0.5)).unwrap();
    let pp = pair_product(&half, &half).unwrap();
    let id = Matrix::identity(2);
    let zero6 = [0.0; 6];
    let value = quartic_moment(&pp, &id, &zero6, &id, &zero6).unwrap();
    assert_relative_eq!(value, 12.0 * pp.overlap(), max_relative = 1e-13);

    let zero = quartic_moment(&pp, &id, &zero6, &Matrix::zeros(2), &zero6).unwrap();
    assert_eq!(zero, 0.0);
}

#[test]
fn quartic_moment_matches_radial_moment_identity() {
    // n = 1: E[(u|X+v|²)²] = u²(15σ⁴ + 10σ²|v|² + |v|⁴) for X ~ N(0, σ²I₃).
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..50 {
        let alpha = rng.gen_range(0.4..1.5);
        let beta = rng.gen_range(0.4..1.5);
        let s: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let bra = EcgBasisFunction::new(
            SpdMatrix::from_rows(&[vec![alpha]]).unwrap(),
            s.clone(),
        )
        .unwrap();
        let ket = EcgBasisFunction::ecg(SpdMatrix::from_rows(&[vec![beta]]).unwrap()).unwrap();
        let pp = pair_product(&bra, &ket).unwrap();

        let u = rng.gen_range(0.5..2.0);
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p: Vec<f64> = pp.mean().iter().zip(&v).map(|(m, vi)| m - vi).collect();
        let u_mat = Matrix::from_rows(&[vec![u]]).unwrap();
        let value = quartic_moment(&pp, &u_mat, &p, &u_mat, &p).unwrap();

        let sigma2 = 0.5 / (alpha + beta);
        let v2 = dot(&v, &v);
        let expect =
            pp.overlap() * u * u * (15.0 * sigma2 * sigma2 + 10.0 * sigma2 * v2 + v2 * v2);
        assert_relative_eq!(value, expect, max_relative = 1e-12);
    }
}

#[test]
fn quartic_moment_is_symmetric_in_its_two_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..50 {
        let n = rng.gen_range(1..4);
        let bra = random_fecg(&mut rng, n);
        let ket = random_fecg(&mut rng, n);
        let pp = pair_product(&bra, &ket).unwrap();
        let u = random_spd(&mut rng, n);
        let w = random_spd(&mut rng, n);
        let p: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let q: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let uw = quartic_moment(&pp, u.matrix(), &p, w.matrix(), &q).unwrap();
        let wu = quartic_moment(&pp, w.matrix(), &q, u.matrix(), &p).unwrap();
        assert_relative_eq!(uw, wu, max_relative = 1e-12);
    }
}

#[test]
fn global_translation_leaves_products_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    for _ in 0..50 {
        let n = rng.gen_range(1..4);
        let bra = random_fecg(&mut rng, n);
        let ket = random_fecg(&mut rng, n);
        let d: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();

        let shift = |f: &EcgBasisFunction| {
            let s: Vec<f64> = f
                .s()
                .iter()
                .enumerate()
                .map(|(idx, v)| v + d[idx % 3])
                .collect();
            EcgBasisFunction::new(f.a().clone(), s).unwrap()
        };
        let pp = pair_product(&bra, &ket).unwrap();
        let pp_shifted = pair_product(&shift(&bra), &shift(&ket)).unwrap();
        assert_relative_eq!(pp.overlap(), pp_shifted.overlap(), max_relative = 1e-10);
        assert_relative_eq!(
            pp.gamma_kl(),
            pp_shifted.gamma_kl(),
            max_relative = 1e-9,
            epsilon = 1e-11
        );

        let u = random_spd(&mut rng, n);
        let p: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let p_shifted: Vec<f64> = p
            .iter()
            .enumerate()
            .map(|(idx, v)| v + d[idx % 3])
            .collect();
        let direct = quadratic_moment(&pp, u.matrix(), &p).unwrap();
        let moved = quadratic_moment(&pp_shifted, u.matrix(), &p_shifted).unwrap();
        assert_relative_eq!(direct, moved, max_relative = 1e-10);
    }
}

#[test]
fn electron_count_mismatch_is_rejected() {
    let one = EcgBasisFunction::ecg(SpdMatrix::identity(1)).unwrap();
    let two = EcgBasisFunction::ecg(SpdMatrix::identity(2)).unwrap();
    assert!(pair_product(&one, &two).is_err());
}
