use crate::{EcgBasisFunction, EcgError};

/// Spatially (anti)symmetrized two-electron matrix element:
/// Σ_p ε_p·kernel(bra, P_p ket) over the two permutations, with ε = +1 for
/// the symmetric (singlet) combination and −1 for the antisymmetric one.
///
/// The overall normalization of the symmetrizer is left out; it cancels in
/// every Rayleigh-quotient use because it rescales H, S, and H² alike.
pub fn symmetrized_element<E, F>(
    kernel: F,
    bra: &EcgBasisFunction,
    ket: &EcgBasisFunction,
    parity: f64,
) -> Result<f64, E>
where
    F: Fn(&EcgBasisFunction, &EcgBasisFunction) -> Result<f64, E>,
    E: From<EcgError>,
{
    let n = bra.n_electrons();
    if n != 2 || ket.n_electrons() != 2 {
        return Err(EcgError::UnsupportedElectronCount {
            n: n.max(ket.n_electrons()),
        }
        .into());
    }
    if parity != 1.0 && parity != -1.0 {
        return Err(EcgError::InvalidPermutation {
            n,
            reason: "parity must be +1 or -1",
        }
        .into());
    }
    let direct = kernel(bra, ket)?;
    let swapped = kernel(bra, &ket.permute(&[1, 0])?)?;
    Ok(direct + parity * swapped)
}
