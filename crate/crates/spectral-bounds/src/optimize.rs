//! Competitive stochastic optimization of nonlinear Gaussian parameters.

use crate::eigen::solve_generalized;
use crate::matrices::{hs_pair, ExchangeSymmetry};
use crate::SpectralError;
use coulomb_kernels::SystemDefinition;
use ecg_core::EcgBasisFunction;
use matkit::{Matrix, SpdMatrix};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Knobs for basis growth and refinement.
///
/// Candidate matrices are drawn as A = Σᵢ aᵢ eᵢeᵢᵀ + Σᵢ<ⱼ αᵢⱼ Jᵢⱼ with the
/// diagonal exponents aᵢ log-uniform over `exponent_range` and the pair
/// couplings αᵢⱼ log-uniform over `correlation_range`, which keeps every
/// draw positive definite by construction. Shifts are uniform in the cube
/// of half-width `shift_range` (zero keeps the basis non-floating).
#[derive(Debug, Clone)]
pub struct OptimizeConfig {
    /// Basis is grown one function at a time up to this size.
    pub target_size: usize,
    /// Candidates drawn per slot decision.
    pub trials: usize,
    /// Refinement sweeps over all slots after growth.
    pub sweeps: usize,
    pub exponent_range: (f64, f64),
    pub correlation_range: (f64, f64),
    pub shift_range: f64,
    pub exchange: ExchangeSymmetry,
    pub seed: u64,
    pub threads: usize,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            target_size: 30,
            trials: 20,
            sweeps: 3,
            exponent_range: (1e-2, 1e2),
            correlation_range: (1e-2, 1e2),
            shift_range: 0.0,
            exchange: ExchangeSymmetry::None,
            seed: 1,
            threads: 1,
        }
    }
}

/// Optimized basis with the ground Ritz value after every accepted step.
#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub basis: Vec<EcgBasisFunction>,
    /// Ground value at the start, after each growth step, and after each
    /// sweep; nonincreasing throughout.
    pub trace: Vec<f64>,
}

fn log_uniform(rng: &mut ChaCha8Rng, range: (f64, f64)) -> f64 {
    let (lo, hi) = (range.0.ln(), range.1.ln());
    if hi > lo {
        rng.gen_range(lo..hi).exp()
    } else {
        range.0
    }
}

fn draw_candidate(
    rng: &mut ChaCha8Rng,
    n: usize,
    cfg: &OptimizeConfig,
) -> Result<EcgBasisFunction, SpectralError> {
    let mut a = Matrix::zeros(n);
    for i in 0..n {
        a.set(i, i, log_uniform(rng, cfg.exponent_range));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let alpha = log_uniform(rng, cfg.correlation_range);
            a.set(i, i, a.get(i, i) + alpha);
            a.set(j, j, a.get(j, j) + alpha);
            a.set(i, j, a.get(i, j) - alpha);
            a.set(j, i, a.get(j, i) - alpha);
        }
    }
    let s: Vec<f64> = (0..3 * n)
        .map(|_| {
            if cfg.shift_range > 0.0 {
                rng.gen_range(-cfg.shift_range..cfg.shift_range)
            } else {
                0.0
            }
        })
        .collect();
    Ok(EcgBasisFunction::new(SpdMatrix::from_matrix(a)?, s)?)
}

/// Ground Ritz value of the raw pencil, with the overlap renormalized to a
/// unit diagonal first. `Ok(None)` marks a linearly dependent candidate.
fn normalized_ground(s_raw: &Matrix, h_raw: &Matrix) -> Result<Option<f64>, SpectralError> {
    let n = s_raw.dim();
    let scales: Vec<f64> = (0..n).map(|k| 1.0 / s_raw.get(k, k).sqrt()).collect();
    let mut s = Matrix::zeros(n);
    let mut h = Matrix::zeros(n);
    for k in 0..n {
        for l in 0..n {
            let w = scales[k] * scales[l];
            s.set(k, l, s_raw.get(k, l) * w);
            h.set(k, l, h_raw.get(k, l) * w);
        }
    }
    match solve_generalized(&h, &s) {
        Ok(eig) => Ok(Some(eig.values[0])),
        Err(
            SpectralError::OverlapNotPositiveDefinite { .. }
            | SpectralError::EigenFailure
            | SpectralError::Mat(_),
        ) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Columns of S and H coupling `g` (as slot `k`) to the rest of the basis,
/// with the self-pair in position `k`.
fn candidate_columns(
    sys: &SystemDefinition,
    funcs: &[EcgBasisFunction],
    g: &EcgBasisFunction,
    k: usize,
    exchange: ExchangeSymmetry,
) -> Result<(Vec<f64>, Vec<f64>), SpectralError> {
    let mut s_col = vec![0.0; funcs.len()];
    let mut h_col = vec![0.0; funcs.len()];
    for (j, f) in funcs.iter().enumerate() {
        let (s, h) = if j == k {
            hs_pair(sys, g, g, exchange)?
        } else {
            hs_pair(sys, f, g, exchange)?
        };
        s_col[j] = s;
        h_col[j] = h;
    }
    Ok((s_col, h_col))
}

fn with_replaced(s_raw: &Matrix, h_raw: &Matrix, k: usize, s_col: &[f64], h_col: &[f64]) -> (Matrix, Matrix) {
    let mut s = s_raw.clone();
    let mut h = h_raw.clone();
    for j in 0..s_col.len() {
        s.set(k, j, s_col[j]);
        s.set(j, k, s_col[j]);
        h.set(k, j, h_col[j]);
        h.set(j, k, h_col[j]);
    }
    (s, h)
}

/// Evaluates every candidate on up to `threads` workers and returns the
/// index order of ground values; rejected candidates score +∞. Candidates
/// are pre-generated, so the selection is deterministic for a fixed seed
/// whatever the thread count.
fn evaluate_candidates<E>(
    candidates: &[EcgBasisFunction],
    threads: usize,
    eval: E,
) -> Result<Vec<f64>, SpectralError>
where
    E: Fn(&EcgBasisFunction) -> Result<Option<f64>, SpectralError> + Sync,
{
    let workers = threads.max(1).min(candidates.len().max(1));
    let score = |g: &EcgBasisFunction| eval(g).map(|v| v.unwrap_or(f64::INFINITY));
    if workers <= 1 {
        return candidates.iter().map(score).collect();
    }
    let chunk = candidates.len().div_ceil(workers);
    let results: Vec<Result<f64, SpectralError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .chunks(chunk)
            .map(|block| scope.spawn(|| block.iter().map(score).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|handle| handle.join().expect("candidate worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

fn argmin(values: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (idx, &v) in values.iter().enumerate() {
        if v < best.1 {
            best = (idx, v);
        }
    }
    best
}

/// Grows the basis to `cfg.target_size` by competitive selection, then
/// refines every slot for `cfg.sweeps` sweeps, keeping a candidate only
/// when it strictly lowers the ground Ritz value. Linearly dependent
/// candidates are rejected, never fatal.
pub fn stochastic_optimize(
    sys: &SystemDefinition,
    basis: &[EcgBasisFunction],
    cfg: &OptimizeConfig,
) -> Result<OptimizeOutcome, SpectralError> {
    if basis.is_empty() && cfg.target_size == 0 {
        return Err(SpectralError::EmptyBasis);
    }
    let n_el = sys.n_electrons();
    let trials = cfg.trials.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut funcs: Vec<EcgBasisFunction> = basis.to_vec();
    let mut trace = Vec::new();

    let mut s_raw = Matrix::zeros(funcs.len());
    let mut h_raw = Matrix::zeros(funcs.len());
    for k in 0..funcs.len() {
        for l in k..funcs.len() {
            let (s, h) = hs_pair(sys, &funcs[k], &funcs[l], cfg.exchange)?;
            s_raw.set(k, l, s);
            s_raw.set(l, k, s);
            h_raw.set(k, l, h);
            h_raw.set(l, k, h);
        }
    }
    let mut current = if funcs.is_empty() {
        f64::INFINITY
    } else {
        normalized_ground(&s_raw, &h_raw)?.ok_or(SpectralError::OverlapNotPositiveDefinite {
            row: funcs.len() - 1,
        })?
    };
    if funcs.is_empty() {
        trace.clear();
    } else {
        trace.push(current);
    }

    let mut stalled_rounds = 0;
    while funcs.len() < cfg.target_size {
        let candidates: Vec<EcgBasisFunction> = (0..trials)
            .map(|_| draw_candidate(&mut rng, n_el, cfg))
            .collect::<Result<_, _>>()?;
        let scores = evaluate_candidates(&candidates, cfg.threads, |g| {
            let (s_col, h_col) = candidate_columns(sys, &funcs, g, funcs.len(), cfg.exchange)?;
            let (s_g, h_g) = hs_pair(sys, g, g, cfg.exchange)?;
            let grown = funcs.len() + 1;
            let mut s = Matrix::zeros(grown);
            let mut h = Matrix::zeros(grown);
            for k in 0..funcs.len() {
                for l in 0..funcs.len() {
                    s.set(k, l, s_raw.get(k, l));
                    h.set(k, l, h_raw.get(k, l));
                }
            }
            for j in 0..funcs.len() {
                s.set(j, grown - 1, s_col[j]);
                s.set(grown - 1, j, s_col[j]);
                h.set(j, grown - 1, h_col[j]);
                h.set(grown - 1, j, h_col[j]);
            }
            s.set(grown - 1, grown - 1, s_g);
            h.set(grown - 1, grown - 1, h_g);
            normalized_ground(&s, &h)
        })?;
        let (best, value) = argmin(&scores);
        if !value.is_finite() {
            stalled_rounds += 1;
            if stalled_rounds > 1000 {
                return Err(SpectralError::EigenFailure);
            }
            continue;
        }
        stalled_rounds = 0;
        let g = candidates[best].clone();
        let (s_col, h_col) = candidate_columns(sys, &funcs, &g, funcs.len(), cfg.exchange)?;
        let (s_g, h_g) = hs_pair(sys, &g, &g, cfg.exchange)?;
        funcs.push(g);
        let grown = funcs.len();
        let mut s = Matrix::zeros(grown);
        let mut h = Matrix::zeros(grown);
        for k in 0..grown - 1 {
            for l in 0..grown - 1 {
                s.set(k, l, s_raw.get(k, l));
                h.set(k, l, h_raw.get(k, l));
            }
        }
        for j in 0..grown - 1 {
            s.set(j, grown - 1, s_col[j]);
            s.set(grown - 1, j, s_col[j]);
            h.set(j, grown - 1, h_col[j]);
            h.set(grown - 1, j, h_col[j]);
        }
        s.set(grown - 1, grown - 1, s_g);
        h.set(grown - 1, grown - 1, h_g);
        s_raw = s;
        h_raw = h;
        current = value;
        trace.push(current);
    }

    for _ in 0..cfg.sweeps {
        for slot in 0..funcs.len() {
            let candidates: Vec<EcgBasisFunction> = (0..trials)
                .map(|_| draw_candidate(&mut rng, n_el, cfg))
                .collect::<Result<_, _>>()?;
            let scores = evaluate_candidates(&candidates, cfg.threads, |g| {
                let (s_col, h_col) = candidate_columns(sys, &funcs, g, slot, cfg.exchange)?;
                let (s, h) = with_replaced(&s_raw, &h_raw, slot, &s_col, &h_col);
                normalized_ground(&s, &h)
            })?;
            let (best, value) = argmin(&scores);
            if value < current {
                let g = candidates[best].clone();
                let (s_col, h_col) = candidate_columns(sys, &funcs, &g, slot, cfg.exchange)?;
                let (s, h) = with_replaced(&s_raw, &h_raw, slot, &s_col, &h_col);
                funcs[slot] = g;
                s_raw = s;
                h_raw = h;
                current = value;
            }
        }
        if !funcs.is_empty() {
            trace.push(current);
        }
    }

    Ok(OptimizeOutcome {
        basis: funcs,
        trace,
    })
}
