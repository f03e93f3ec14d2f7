//! Lower-bound formulas against hand arithmetic, algebraic orderings, and
//! synthetic spectral models with planted exact spectra, where the sandwich
//! E_lower ≤ E_exact ≤ E_ritz can be asserted outright.

use approx::assert_relative_eq;
use matkit::Matrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use spectral_bounds::{
    bounds_report, rayleigh_and_variance, solve_generalized, stevenson, temple, weinstein,
    BetaSource, SpectralError, SpectralMatrices,
};

fn from_rows(rows: &[&[f64]]) -> Matrix {
    let mut m = Matrix::zeros(rows.len());
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m.set(i, j, *v);
        }
    }
    m
}

/// Model with planted diagonal spectrum `d` seen through basis columns `b`:
/// S = BᵀB, H = BᵀDB, and H² = BᵀD²B is exact in the model.
fn spectral_model(b: &[Vec<f64>], d: &[f64]) -> SpectralMatrices {
    let nb = b.len();
    let gram = |weight: &dyn Fn(usize) -> f64| {
        let mut g = Matrix::zeros(nb);
        for i in 0..nb {
            for j in 0..nb {
                let mut v = 0.0;
                for (k, bik) in b[i].iter().enumerate() {
                    v += bik * weight(k) * b[j][k];
                }
                g.set(i, j, v);
            }
        }
        g
    };
    let s = gram(&|_| 1.0);
    let h = gram(&|k| d[k]);
    let h2 = gram(&|k| d[k] * d[k]);
    let eig = solve_generalized(&h, &s).unwrap();
    SpectralMatrices {
        h,
        s,
        h2,
        ground_vector: eig.vectors.into_iter().next().unwrap(),
        ritz_values: eig.values,
    }
}

#[test]
fn formula_fixtures_match_hand_arithmetic() {
    assert_relative_eq!(weinstein(1.0, 0.01).unwrap(), 0.9, max_relative = 1e-15);
    assert_relative_eq!(temple(1.0, 0.01, 2.0).unwrap(), 0.99, max_relative = 1e-15);
    let two_by_two_ground = 1.5 - 0.26f64.sqrt();
    assert!(temple(1.0, 0.01, 2.0).unwrap() <= two_by_two_ground);
    assert_relative_eq!(
        stevenson(1.0, 0.01, 1.5).unwrap(),
        two_by_two_ground,
        max_relative = 1e-15
    );

    assert_eq!(weinstein(2.5, 0.0).unwrap(), 2.5);
    assert_eq!(temple(2.5, 0.0, 3.0).unwrap(), 2.5);
    assert_eq!(stevenson(2.5, 0.0, 2.5).unwrap(), 2.5);
}

#[test]
fn stevenson_at_alpha_equal_e_is_weinstein() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..500 {
        let e = rng.gen_range(-5.0..5.0);
        let sigma2 = rng.gen_range(0.0..2.0);
        assert_relative_eq!(
            stevenson(e, sigma2, e).unwrap(),
            weinstein(e, sigma2).unwrap(),
            epsilon = 1e-14
        );
    }
}

#[test]
fn temple_orderings_follow_the_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    for _ in 0..1000 {
        let e = rng.gen_range(-5.0..5.0);
        let sigma = rng.gen_range(1e-6..1.5);
        let gap = rng.gen_range(1e-3..4.0);
        let beta = e + sigma + gap;
        let t = temple(e, sigma * sigma, beta).unwrap();
        let w = weinstein(e, sigma * sigma).unwrap();
        assert!(t > w, "beta - E = {} > sigma = {sigma} but {t} <= {w}", sigma + gap);

        let beta_higher = beta + rng.gen_range(0.1..2.0);
        assert!(temple(e, sigma * sigma, beta_higher).unwrap() >= t);

        let alpha = rng.gen_range(e..e + 3.0);
        let alpha_higher = alpha + rng.gen_range(0.0..2.0);
        let s_low = stevenson(e, sigma * sigma, alpha).unwrap();
        let s_high = stevenson(e, sigma * sigma, alpha_higher).unwrap();
        assert!(s_high >= s_low - 1e-14);
    }
}

#[test]
fn rayleigh_variance_matches_the_two_by_two_model() {
    let h = from_rows(&[&[1.0, 0.1], &[0.1, 2.0]]);
    let h2 = from_rows(&[&[1.01, 0.3], &[0.3, 4.01]]);
    let m = SpectralMatrices {
        s: Matrix::identity(2),
        h: h.clone(),
        h2,
        ritz_values: vec![1.5 - 0.26f64.sqrt(), 1.5 + 0.26f64.sqrt()],
        ground_vector: vec![1.0, 0.0],
    };
    let (e, sigma2) = rayleigh_and_variance(&m, &[1.0, 0.0]).unwrap();
    assert_relative_eq!(e, 1.0, max_relative = 1e-15);
    assert_relative_eq!(sigma2, 0.01, max_relative = 1e-12);

    let (e2, s2) = rayleigh_and_variance(&m, &[2.0, 0.0]).unwrap();
    assert_relative_eq!(e, e2, max_relative = 1e-15);
    assert_relative_eq!(sigma2, s2, max_relative = 1e-12);

    assert!(matches!(
        rayleigh_and_variance(&m, &[0.0, 0.0]),
        Err(SpectralError::ZeroVector)
    ));

    // The exact ground eigenvector of the planted model has zero variance.
    let model = spectral_model(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[1.0, 2.0]);
    let (e, sigma2) = rayleigh_and_variance(&model, &model.ground_vector).unwrap();
    assert_relative_eq!(e, 1.0, max_relative = 1e-12);
    assert!(sigma2.abs() <= 1e-12);
}

#[test]
fn reports_clamp_roundoff_but_reject_real_negative_variance() {
    let near = SpectralMatrices {
        s: Matrix::identity(1),
        h: from_rows(&[&[1.0]]),
        h2: from_rows(&[&[1.0 - 5e-10]]),
        ritz_values: vec![1.0],
        ground_vector: vec![1.0],
    };
    let report = bounds_report(&near, None, None).unwrap();
    assert_eq!(report.variance, 0.0);
    assert!(report.variance_clamped);
    assert_eq!(report.weinstein_lb, report.energy_upper);
    assert!(!report.temple_valid);
    assert!(report.temple_lb.is_none());
    assert!(report.beta.is_nan());

    let bad = SpectralMatrices {
        s: Matrix::identity(1),
        h: from_rows(&[&[1.0]]),
        h2: from_rows(&[&[1.0 - 5e-9]]),
        ritz_values: vec![1.0],
        ground_vector: vec![1.0],
    };
    assert!(matches!(
        bounds_report(&bad, None, None),
        Err(SpectralError::NegativeVariance { .. })
    ));

    assert!(matches!(
        weinstein(1.0, -1e-3),
        Err(SpectralError::NegativeVariance { .. })
    ));
    assert!(matches!(
        temple(1.0, 0.01, 0.5),
        Err(SpectralError::BetaNotAboveE { .. })
    ));

    // A user-supplied beta below E downgrades Temple instead of failing.
    let model = spectral_model(&[vec![1.0, 0.2], vec![0.3, 1.0]], &[1.0, 2.0]);
    let report = bounds_report(&model, Some(0.5), None).unwrap();
    assert!(!report.temple_valid);
    assert_eq!(report.beta_source, BetaSource::UserSupplied);
}

#[test]
fn congruence_pencils_keep_the_bounds_ordered() {
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    for trial in 0..1000 {
        let n = 5;
        let mut d: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..4.0)).collect();
        d.sort_by(f64::total_cmp);
        while d[1] - d[0] < 0.3 {
            d[1] += 0.3;
            d.sort_by(f64::total_cmp);
        }
        let b: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| if i == k { 1.0 } else { 0.0 } + rng.gen_range(-0.3..0.3))
                    .collect()
            })
            .collect();
        let m = spectral_model(&b, &d);
        let scale = d.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
        assert!(
            m.ritz_values[0] >= d[0] - 1e-10 * scale,
            "trial {trial}: Ritz {} below exact {}",
            m.ritz_values[0],
            d[0]
        );
        let report = bounds_report(&m, Some(d[1]), Some(m.ritz_values[0])).unwrap();
        assert!(report.weinstein_lb <= d[0] + 1e-10 * scale);
        let temple_lb = report.temple_lb.unwrap();
        assert!(temple_lb <= d[0] + 1e-10 * scale);
        assert!(temple_lb <= report.energy_upper);
        let stevenson_lb = report.stevenson_lb.unwrap();
        assert!(stevenson_lb <= d[0] + 1e-10 * scale);
    }
}

#[test]
fn truncated_spectral_models_keep_the_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let mut weinstein_applicable = 0;
    for trial in 0..300 {
        let m_dim = 6;
        let e1 = rng.gen_range(-3.0..-2.0);
        let gap = rng.gen_range(1.5..3.0);
        let mut d = vec![e1, e1 + gap];
        for _ in 2..m_dim {
            d.push(e1 + gap + rng.gen_range(0.1..4.0));
        }
        d.sort_by(f64::total_cmp);
        // Ground-dominant basis columns: the trial energy lands near E1.
        let b: Vec<Vec<f64>> = (0..3)
            .map(|_| {
                (0..m_dim)
                    .map(|k| if k == 0 { 1.0 } else { 0.0 } + 0.3 * rng.gen_range(-1.0..1.0))
                    .collect()
            })
            .collect();
        let m = spectral_model(&b, &d);
        let report = bounds_report(&m, Some(d[1]), None).unwrap();
        let e = report.energy_upper;
        assert!(e >= d[0] - 1e-12, "trial {trial}: upper bound broke");
        assert!(e < d[1], "trial {trial}: trial state too contaminated");

        let temple_lb = report.temple_lb.unwrap();
        assert!(
            temple_lb <= d[0] + 1e-10,
            "trial {trial}: Temple {temple_lb} above exact {}",
            d[0]
        );
        if e < 0.5 * (d[0] + d[1]) {
            weinstein_applicable += 1;
            assert!(
                report.weinstein_lb <= d[0] + 1e-10,
                "trial {trial}: Weinstein {} above exact {}",
                report.weinstein_lb,
                d[0]
            );
        }
    }
    assert!(
        weinstein_applicable >= 270,
        "construction too weak: {weinstein_applicable}/300"
    );
}
