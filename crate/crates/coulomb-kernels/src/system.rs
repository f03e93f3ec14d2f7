use crate::KernelError;

/// One fixed nucleus: charge Z (dimensionless) and position in bohr.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nucleus {
    pub charge: f64,
    pub position: [f64; 3],
}

/// Fixed-nucleus system: electron count plus the nuclear frame the Coulomb
/// terms and the constant internuclear repulsion are built from.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDefinition {
    n_electrons: usize,
    nuclei: Vec<Nucleus>,
}

impl SystemDefinition {
    pub fn new(n_electrons: usize, nuclei: Vec<Nucleus>) -> Result<Self, KernelError> {
        if n_electrons == 0 {
            return Err(KernelError::InvalidSystem {
                reason: "electron count must be at least 1",
            });
        }
        if nuclei.is_empty() {
            return Err(KernelError::InvalidSystem {
                reason: "at least one nucleus is required",
            });
        }
        for nuc in &nuclei {
            if !(nuc.charge > 0.0 && nuc.charge.is_finite()) {
                return Err(KernelError::InvalidSystem {
                    reason: "nuclear charges must be positive and finite",
                });
            }
            if nuc.position.iter().any(|x| !x.is_finite()) {
                return Err(KernelError::InvalidSystem {
                    reason: "nuclear positions must be finite",
                });
            }
        }
        for (a, na) in nuclei.iter().enumerate() {
            for nb in nuclei.iter().skip(a + 1) {
                if distance(na.position, nb.position) == 0.0 {
                    return Err(KernelError::InvalidSystem {
                        reason: "nuclei must sit at distinct positions",
                    });
                }
            }
        }
        Ok(SystemDefinition {
            n_electrons,
            nuclei,
        })
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn nuclei(&self) -> &[Nucleus] {
        &self.nuclei
    }

    /// Constant internuclear energy Σ_{a<b} Z_a·Z_b/|R_a − R_b|; zero for a
    /// single nucleus.
    pub fn nuclear_repulsion(&self) -> f64 {
        let mut sum = 0.0;
        for (a, na) in self.nuclei.iter().enumerate() {
            for nb in self.nuclei.iter().skip(a + 1) {
                sum += na.charge * nb.charge / distance(na.position, nb.position);
            }
        }
        sum
    }
}

fn distance(x: [f64; 3], y: [f64; 3]) -> f64 {
    x.iter()
        .zip(&y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}
