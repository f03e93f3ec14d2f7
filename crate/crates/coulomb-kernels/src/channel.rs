use ecg_core::PairProduct;
use matkit::{block_apply, block_quadratic, dot, PairCoupling};

use crate::KernelError;

/// One Coulomb direction 1/|u| over a pair product: u = r_i − r_j between
/// electrons, or u = r_p − a from an electron to the nucleus at a.
///
/// The nuclear case works in the frame with the origin moved onto the
/// nucleus. There the product Gaussian keeps its matrix A_kl and overlap S_kl
/// (γ is translation invariant) but its linear part becomes
/// e_a = e_kl − Ā_kl·(1ₙ⊗a) and η_a = η_kl − 2(1ₙ⊗a)ᵀe_kl + (1ₙ⊗a)ᵀĀ_kl(1ₙ⊗a).
/// Electron–electron distances are translation invariant, so their channel
/// keeps the unshifted e_kl, η_kl.
#[derive(Debug, Clone)]
pub struct CoulombChannel {
    coupling: PairCoupling,
    center: Option<[f64; 3]>,
    shifted_e: Vec<f64>,
    shifted_eta: f64,
}

impl CoulombChannel {
    /// Repulsion direction u = r_i − r_j.
    pub fn between_electrons(
        pp: &PairProduct,
        i: usize,
        j: usize,
    ) -> Result<Self, KernelError> {
        let coupling = PairCoupling::inter(i, j, pp.n_electrons())?;
        Ok(CoulombChannel {
            coupling,
            center: None,
            shifted_e: pp.e_kl().to_vec(),
            shifted_eta: pp.eta_kl(),
        })
    }

    /// Attraction direction u = r_p − a for the nucleus at position a.
    pub fn to_nucleus(
        pp: &PairProduct,
        p: usize,
        a: [f64; 3],
    ) -> Result<Self, KernelError> {
        let coupling = PairCoupling::single(p, pp.n_electrons())?;
        if a.iter().any(|x| !x.is_finite()) {
            return Err(KernelError::InvalidSystem {
                reason: "nuclear positions must be finite",
            });
        }
        let n = pp.n_electrons();
        let tiled: Vec<f64> = (0..3 * n).map(|k| a[k % 3]).collect();
        let a_kl_c = block_apply(pp.a_kl().matrix(), &tiled);
        let shifted_e: Vec<f64> = pp
            .e_kl()
            .iter()
            .zip(&a_kl_c)
            .map(|(e, ac)| e - ac)
            .collect();
        let shifted_eta = pp.eta_kl() - 2.0 * dot(&tiled, pp.e_kl())
            + block_quadratic(pp.a_kl().matrix(), &tiled, &tiled);
        Ok(CoulombChannel {
            coupling,
            center: Some(a),
            shifted_e,
            shifted_eta,
        })
    }

    pub fn coupling(&self) -> &PairCoupling {
        &self.coupling
    }

    /// Nuclear position, absent for electron–electron channels.
    pub fn center(&self) -> Option<[f64; 3]> {
        self.center
    }

    /// Linear coefficient e_a of the product Gaussian in the channel frame.
    pub fn shifted_e(&self) -> &[f64] {
        &self.shifted_e
    }

    /// Shift norm η_a of the product Gaussian in the channel frame.
    pub fn shifted_eta(&self) -> f64 {
        self.shifted_eta
    }
}
