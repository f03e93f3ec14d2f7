use coulomb_kernels::{coulomb_quadratic, inv_r, kinetic, CoulombChannel, SystemDefinition};
use ecg_core::{
    laplacian_polynomial, pair_product, quadratic_moment, EcgBasisFunction, EcgError,
    LaplacianTarget,
};
use quad_engine::QuadratureSpec;

use crate::{del4_cross, inv_r_squared, inv_ria_rjb_general, inv_rij_rpa_general, HsqError};

/// One (H²)_kl element with its operator-product breakdown. Term names pair
/// the left and right factors of Ĥ² = (T + V_ee + V_ne + V_nn)², so "t_vee"
/// is ⟨Tφ_k|V_ee·φ_l⟩ and "vee_t" its mirror; potential–potential products
/// commute and their mirrored entries carry equal values by construction.
#[derive(Debug, Clone)]
pub struct H2Element {
    pub value: f64,
    pub terms: [(&'static str, f64); 16],
}

impl H2Element {
    /// Breakdown value for one named term.
    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms
            .iter()
            .find(|(key, _)| *key == name)
            .map(|(_, v)| *v)
    }
}

/// ⟨φ_k|Ĥ²|φ_l⟩ for a two-electron system, assembled from sixteen operator
/// products.
///
/// Kinetic factors act as Laplacian polynomials on their own side (bra
/// polynomial when T is on the left, ket polynomial on the right), so the
/// ordering of each mixed product is kept explicit even though the two
/// orderings agree analytically; comparing them exposes kernel sign errors.
/// The electron–electron and nuclear Coulomb products reduce to the
/// closed-form and one-dimensional kernels of this crate, with the
/// internuclear repulsion V_nn entering as a multiplicative constant.
pub fn assemble_h2_element(
    sys: &SystemDefinition,
    bra: &EcgBasisFunction,
    ket: &EcgBasisFunction,
    q: &QuadratureSpec,
) -> Result<H2Element, HsqError> {
    let n = sys.n_electrons();
    if n != 2 {
        return Err(HsqError::UnsupportedElectronCount { n });
    }
    if bra.n_electrons() != n || ket.n_electrons() != n {
        return Err(EcgError::ElectronCountMismatch {
            left: n,
            right: bra.n_electrons().max(ket.n_electrons()),
        }
        .into());
    }
    let pp = pair_product(bra, ket)?;
    let s = pp.overlap();
    let v_nn = sys.nuclear_repulsion();

    let bra_all = laplacian_polynomial(bra, LaplacianTarget::All)?;
    let ket_all = laplacian_polynomial(ket, LaplacianTarget::All)?;

    let ee = CoulombChannel::between_electrons(&pp, 0, 1)?;
    let mut nuclear = Vec::with_capacity(sys.nuclei().len());
    for nuc in sys.nuclei() {
        let per: Vec<CoulombChannel> = (0..2)
            .map(|p| CoulombChannel::to_nucleus(&pp, p, nuc.position))
            .collect::<Result<_, _>>()?;
        nuclear.push(per);
    }

    let t_t = 0.25
        * (del4_cross(&pp, bra, ket, 0, 0)?
            + del4_cross(&pp, bra, ket, 0, 1)?
            + del4_cross(&pp, bra, ket, 1, 0)?
            + del4_cross(&pp, bra, ket, 1, 1)?);

    let t_vee = -0.5 * coulomb_quadratic(&pp, &ee, &bra_all.u, &bra_all.p, bra_all.c0, q)?;
    let vee_t = -0.5 * coulomb_quadratic(&pp, &ee, &ket_all.u, &ket_all.p, ket_all.c0, q)?;

    let mut t_vne = 0.0;
    let mut vne_t = 0.0;
    for (nuc, chans) in sys.nuclei().iter().zip(&nuclear) {
        for ch in chans {
            t_vne +=
                0.5 * nuc.charge * coulomb_quadratic(&pp, ch, &bra_all.u, &bra_all.p, bra_all.c0, q)?;
            vne_t +=
                0.5 * nuc.charge * coulomb_quadratic(&pp, ch, &ket_all.u, &ket_all.p, ket_all.c0, q)?;
        }
    }

    let t_vnn = -0.5 * v_nn * (quadratic_moment(&pp, &bra_all.u, &bra_all.p)? + bra_all.c0 * s);
    let vnn_t = v_nn * kinetic(&pp, bra, ket)?;

    let vee_vee = inv_r_squared(&pp, 0, 1)?;

    let mut vee_vne = 0.0;
    for nuc in sys.nuclei() {
        for p in 0..2 {
            vee_vne -= nuc.charge * inv_rij_rpa_general(&pp, 0, 1, p, nuc.position, q)?;
        }
    }
    let vne_vee = vee_vne;

    let vee_vnn = v_nn * inv_r(&pp, &ee)?;
    let vnn_vee = vee_vnn;

    let mut vne_vne = 0.0;
    for na in sys.nuclei() {
        for nb in sys.nuclei() {
            for i in 0..2 {
                for j in 0..2 {
                    vne_vne += na.charge
                        * nb.charge
                        * inv_ria_rjb_general(&pp, i, na.position, j, nb.position, q)?;
                }
            }
        }
    }

    let mut vne_vnn = 0.0;
    for (nuc, chans) in sys.nuclei().iter().zip(&nuclear) {
        for ch in chans {
            vne_vnn -= v_nn * nuc.charge * inv_r(&pp, ch)?;
        }
    }
    let vnn_vne = vne_vnn;

    let vnn_vnn = v_nn * v_nn * s;

    let terms = [
        ("t_t", t_t),
        ("t_vee", t_vee),
        ("t_vne", t_vne),
        ("t_vnn", t_vnn),
        ("vee_t", vee_t),
        ("vee_vee", vee_vee),
        ("vee_vne", vee_vne),
        ("vee_vnn", vee_vnn),
        ("vne_t", vne_t),
        ("vne_vee", vne_vee),
        ("vne_vne", vne_vne),
        ("vne_vnn", vne_vnn),
        ("vnn_t", vnn_t),
        ("vnn_vee", vnn_vee),
        ("vnn_vne", vnn_vne),
        ("vnn_vnn", vnn_vnn),
    ];
    let value = terms.iter().map(|(_, v)| v).sum();
    Ok(H2Element { value, terms })
}
