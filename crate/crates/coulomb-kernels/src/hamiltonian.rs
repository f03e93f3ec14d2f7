use ecg_core::{pair_product, EcgBasisFunction, EcgError};

use crate::{inv_r, kinetic, CoulombChannel, KernelError, SystemDefinition};

/// ⟨φ_k|T_e + V_ee + V_ne + V_nn|φ_l⟩ in atomic units: kinetic energy,
/// electron repulsion, nuclear attraction, and the constant internuclear
/// repulsion entering as a scalar multiple of the overlap.
pub fn assemble_h_element(
    sys: &SystemDefinition,
    bra: &EcgBasisFunction,
    ket: &EcgBasisFunction,
) -> Result<f64, KernelError> {
    let n = sys.n_electrons();
    if bra.n_electrons() != n {
        return Err(EcgError::ElectronCountMismatch {
            left: n,
            right: bra.n_electrons(),
        }
        .into());
    }
    let pp = pair_product(bra, ket)?;

    let mut element = kinetic(&pp, bra, ket)?;
    for i in 0..n {
        for j in (i + 1)..n {
            let ch = CoulombChannel::between_electrons(&pp, i, j)?;
            element += inv_r(&pp, &ch)?;
        }
    }
    for nuc in sys.nuclei() {
        for i in 0..n {
            let ch = CoulombChannel::to_nucleus(&pp, i, nuc.position)?;
            element -= nuc.charge * inv_r(&pp, &ch)?;
        }
    }
    element += sys.nuclear_repulsion() * pp.overlap();
    Ok(element)
}
