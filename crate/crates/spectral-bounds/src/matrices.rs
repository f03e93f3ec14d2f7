//! Assembly of the overlap, Hamiltonian, and squared-Hamiltonian matrices
//! over a Gaussian basis, with optional electron-exchange symmetrization.

use crate::eigen::solve_generalized;
use crate::SpectralError;
use coulomb_kernels::{assemble_h_element, SystemDefinition};
use ecg_core::{pair_product, EcgBasisFunction};
use hsq_kernels::assemble_h2_element;
use matkit::Matrix;
use quad_engine::QuadratureSpec;

/// Spatial symmetry applied to every matrix element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExchangeSymmetry {
    /// Raw Gaussians as given.
    None,
    /// Two-electron exchange projection: each ket is replaced by
    /// φ + P₁₂φ (up to a constant factor that cancels in the pencil).
    PairSwap,
}

/// Dense pencil data with the Ritz solution attached.
///
/// All three matrices are stored in the overlap-normalized convention
/// S_kk = 1 (every basis function divided by its norm), which leaves the
/// pencil eigenvalues unchanged and keeps the Cholesky factor well scaled.
#[derive(Debug, Clone)]
pub struct SpectralMatrices {
    pub h: Matrix,
    pub s: Matrix,
    pub h2: Matrix,
    pub ritz_values: Vec<f64>,
    pub ground_vector: Vec<f64>,
}

/// The two-electron exchange image P₁₂φ of a basis function.
pub fn exchange_swapped(f: &EcgBasisFunction) -> Result<EcgBasisFunction, SpectralError> {
    if f.n_electrons() != 2 {
        return Err(SpectralError::ExchangeUnsupported {
            n: f.n_electrons(),
        });
    }
    Ok(f.permute(&[1, 0])?)
}

pub(crate) fn hs_pair(
    sys: &SystemDefinition,
    bra: &EcgBasisFunction,
    ket: &EcgBasisFunction,
    exchange: ExchangeSymmetry,
) -> Result<(f64, f64), SpectralError> {
    let mut s = pair_product(bra, ket)?.overlap();
    let mut h = assemble_h_element(sys, bra, ket)?;
    if exchange == ExchangeSymmetry::PairSwap {
        let swapped = exchange_swapped(ket)?;
        s += pair_product(bra, &swapped)?.overlap();
        h += assemble_h_element(sys, bra, &swapped)?;
    }
    Ok((s, h))
}

fn h2_pair(
    sys: &SystemDefinition,
    bra: &EcgBasisFunction,
    ket: &EcgBasisFunction,
    spec: &QuadratureSpec,
    exchange: ExchangeSymmetry,
) -> Result<f64, SpectralError> {
    let mut h2 = assemble_h2_element(sys, bra, ket, spec)?.value;
    if exchange == ExchangeSymmetry::PairSwap {
        let swapped = exchange_swapped(ket)?;
        h2 += assemble_h2_element(sys, bra, &swapped, spec)?.value;
    }
    Ok(h2)
}

/// Evaluates `entry` over the upper triangle k ≤ l on `threads` workers and
/// mirrors the results into a symmetric matrix. Every entry is computed by
/// exactly one worker, so the result is independent of the thread count.
fn symmetric_table<F>(n: usize, threads: usize, entry: F) -> Result<Vec<Matrix>, SpectralError>
where
    F: Fn(usize, usize) -> Result<Vec<f64>, SpectralError> + Sync,
{
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|k| (k..n).map(move |l| (k, l)))
        .collect();
    let workers = threads.max(1).min(pairs.len().max(1));
    let chunk = pairs.len().div_ceil(workers);
    let computed: Vec<(usize, usize, Result<Vec<f64>, SpectralError>)> = if workers <= 1 {
        pairs.iter().map(|&(k, l)| (k, l, entry(k, l))).collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = pairs
                .chunks(chunk)
                .map(|block| {
                    scope.spawn(|| {
                        block
                            .iter()
                            .map(|&(k, l)| (k, l, entry(k, l)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|handle| handle.join().expect("matrix worker panicked"))
                .collect()
        })
    };
    let mut tables = Vec::new();
    for (k, l, result) in computed {
        let values = result?;
        if tables.is_empty() {
            tables = vec![Matrix::zeros(n); values.len()];
        }
        for (table, value) in tables.iter_mut().zip(values) {
            table.set(k, l, value);
            table.set(l, k, value);
        }
    }
    Ok(tables)
}

fn normalize(tables: &mut [Matrix], overlap_index: usize) {
    let n = tables[overlap_index].dim();
    let scales: Vec<f64> = (0..n)
        .map(|k| 1.0 / tables[overlap_index].get(k, k).sqrt())
        .collect();
    for table in tables.iter_mut() {
        for k in 0..n {
            for l in 0..n {
                let weight = scales[k] * scales[l];
                table.set(k, l, table.get(k, l) * weight);
            }
        }
    }
}

/// Overlap and Hamiltonian matrices in the S_kk = 1 convention.
pub fn build_overlap_hamiltonian(
    sys: &SystemDefinition,
    basis: &[EcgBasisFunction],
    threads: usize,
    exchange: ExchangeSymmetry,
) -> Result<(Matrix, Matrix), SpectralError> {
    if basis.is_empty() {
        return Err(SpectralError::EmptyBasis);
    }
    let mut tables = symmetric_table(basis.len(), threads, |k, l| {
        let (s, h) = hs_pair(sys, &basis[k], &basis[l], exchange)?;
        Ok(vec![s, h])
    })?;
    normalize(&mut tables, 0);
    let h = tables.pop().unwrap();
    let s = tables.pop().unwrap();
    Ok((s, h))
}

/// Full pencil data: S, H, and H² matrices plus the Ritz solution.
pub fn build_matrices(
    sys: &SystemDefinition,
    basis: &[EcgBasisFunction],
    spec: &QuadratureSpec,
    threads: usize,
    exchange: ExchangeSymmetry,
) -> Result<SpectralMatrices, SpectralError> {
    if basis.is_empty() {
        return Err(SpectralError::EmptyBasis);
    }
    let mut tables = symmetric_table(basis.len(), threads, |k, l| {
        let (s, h) = hs_pair(sys, &basis[k], &basis[l], exchange)?;
        let h2 = h2_pair(sys, &basis[k], &basis[l], spec, exchange)?;
        Ok(vec![s, h, h2])
    })?;
    normalize(&mut tables, 0);
    let h2 = tables.pop().unwrap();
    let h = tables.pop().unwrap();
    let s = tables.pop().unwrap();
    let eig = solve_generalized(&h, &s)?;
    Ok(SpectralMatrices {
        h,
        s,
        h2,
        ground_vector: eig.vectors.into_iter().next().unwrap(),
        ritz_values: eig.values,
    })
}
