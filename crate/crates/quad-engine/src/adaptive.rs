use crate::kronrod::kronrod15;
use crate::QuadError;

/// Variable change applied before the adaptive rule sees the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transform {
    /// Integrate on the given finite interval as-is.
    #[default]
    None,
    /// x = a + y²: absorbs an (x−a)^{−1/2} singularity at the lower endpoint
    /// of a finite interval.
    SqrtEndpoint,
    /// u = a + w/(1−w): maps [a, ∞) onto the unit interval; the upper bound
    /// must be +∞.
    RationalInfinite,
}

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub transform: Transform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 200,
            transform: Transform::None,
        }
    }
}

impl QuadratureSpec {
    /// Default tolerances with the given transform.
    pub fn with_transform(transform: Transform) -> Self {
        QuadratureSpec {
            transform,
            ..QuadratureSpec::default()
        }
    }
}

/// Converged value with its a-posteriori error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    pub converged: bool,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Integrates f over [a, b] under the spec's transform and tolerances.
///
/// The result satisfies |value − true| ≤ max(rel_tol·|value|, abs_tol)
/// whenever the converged flag is set (up to the reliability of the
/// Gauss–Kronrod estimate). Exhausting the subdivision budget returns
/// [`QuadError::QuadratureFailure`] carrying the best estimate.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult, QuadError> {
    if !(spec.rel_tol > 0.0 && spec.abs_tol > 0.0) {
        return Err(QuadError::InvalidRequest {
            reason: "tolerances must be positive",
        });
    }
    if spec.max_subdivisions == 0 {
        return Err(QuadError::InvalidRequest {
            reason: "max_subdivisions must be at least 1",
        });
    }
    if !a.is_finite() {
        return Err(QuadError::InvalidRequest {
            reason: "lower bound must be finite",
        });
    }

    match spec.transform {
        Transform::None => {
            if !b.is_finite() {
                return Err(QuadError::InvalidRequest {
                    reason: "infinite upper bound requires the rational-infinite transform",
                });
            }
            adaptive(&f, a, b, spec)
        }
        Transform::SqrtEndpoint => {
            if !b.is_finite() {
                return Err(QuadError::InvalidRequest {
                    reason: "sqrt-endpoint transform requires a finite interval",
                });
            }
            if b < a {
                return Err(QuadError::InvalidRequest {
                    reason: "sqrt-endpoint transform requires a ≤ b",
                });
            }
            let g = |y: f64| 2.0 * y * f(a + y * y);
            adaptive(&g, 0.0, (b - a).sqrt(), spec)
        }
        Transform::RationalInfinite => {
            if b != f64::INFINITY {
                return Err(QuadError::InvalidRequest {
                    reason: "rational-infinite transform requires an infinite upper bound",
                });
            }
            let g = |w: f64| {
                let om = 1.0 - w;
                f(a + w / om) / (om * om)
            };
            adaptive(&g, 0.0, 1.0, spec)
        }
    }
}

fn adaptive<F: Fn(f64) -> f64>(
    g: &F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult, QuadError> {
    if lo == hi {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions_used: 0,
            converged: true,
        });
    }

    let (value, error) = kronrod15(g, lo, hi);
    if !value.is_finite() {
        return Err(QuadError::NonFiniteIntegrand {
            segment_start: lo,
            segment_end: hi,
        });
    }
    let mut segments = vec![Segment {
        a: lo,
        b: hi,
        value,
        error,
    }];
    let mut subdivisions = 0;

    loop {
        let total_value: f64 = segments.iter().map(|s| s.value).sum();
        let total_error: f64 = segments.iter().map(|s| s.error).sum();
        let tol = (spec.rel_tol * total_value.abs()).max(spec.abs_tol);

        if total_error <= tol {
            return Ok(QuadratureResult {
                value: total_value,
                error_estimate: total_error,
                subdivisions_used: subdivisions,
                converged: true,
            });
        }

        let splittable = |s: &Segment| {
            let width = s.b - s.a;
            width > 2.0 * f64::EPSILON * (s.a.abs() + s.b.abs()).max(f64::MIN_POSITIVE)
        };
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| splittable(s))
            .max_by(|(_, x), (_, y)| x.error.partial_cmp(&y.error).unwrap());

        let (idx, _) = match worst {
            Some(w) if subdivisions < spec.max_subdivisions => w,
            _ => {
                return Err(QuadError::QuadratureFailure {
                    value: total_value,
                    error_estimate: total_error,
                    subdivisions_used: subdivisions,
                });
            }
        };

        let Segment { a, b, .. } = segments.swap_remove(idx);
        let mid = 0.5 * (a + b);
        for (sa, sb) in [(a, mid), (mid, b)] {
            let (v, e) = kronrod15(g, sa, sb);
            if !v.is_finite() {
                return Err(QuadError::NonFiniteIntegrand {
                    segment_start: sa,
                    segment_end: sb,
                });
            }
            segments.push(Segment {
                a: sa,
                b: sb,
                value: v,
                error: e,
            });
        }
        subdivisions += 1;
    }
}
