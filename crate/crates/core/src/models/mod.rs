//! Models: a frame with structure constants plus contact data
//! `(η_s, g, I_s)` on the horizontal distribution.

pub mod builtin;
pub mod contact;
pub mod coordinates;
pub mod conformal;
pub mod file;
pub mod gauge;

use std::collections::BTreeMap;

use crate::algebra::Triple;
use crate::calculus::CoframeModel;
use crate::error::PqcError;
use crate::linalg::Matrix;

pub use builtin::{builtin_heisenberg, builtin_l0};
pub use contact::derive_structure_from_contact;
pub use file::{load_model, save_model};
pub use gauge::GaugeTransform;

/// A frame model with contact forms taken from the coframe.
///
/// `eta[s]` is the coframe index carrying `η_{s+1}`; the remaining indices,
/// in increasing order, span the horizontal space on which `metric` and
/// `endo` are expressed. Endomorphisms act on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct PqcModel {
    pub name: String,
    pub n: usize,
    pub frame: CoframeModel,
    pub eta: [usize; 3],
    pub metric: Matrix,
    pub endo: Triple,
    pub metadata: BTreeMap<String, String>,
}

impl PqcModel {
    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Frame indices spanning the horizontal space.
    pub fn horizontal(&self) -> Vec<usize> {
        (0..self.dim()).filter(|a| !self.eta.contains(a)).collect()
    }

    /// Matrix of `dη_s` on horizontal frame pairs: `dη_s(e_a, e_b) = -C^{η_s}_{ab}`.
    pub fn contact_matrix(&self, s: usize) -> Matrix {
        let h = self.horizontal();
        Matrix::from_fn(h.len(), h.len(), |i, j| -self.frame.c(self.eta[s], h[i], h[j]))
    }

    pub fn contact_matrices(&self) -> Triple {
        [self.contact_matrix(0), self.contact_matrix(1), self.contact_matrix(2)]
    }

    /// Shape checks that do not involve the contact axioms.
    pub fn check_shape(&self) -> Result<(), PqcError> {
        if self.n == 0 {
            return Err(PqcError::InvalidModel("n must be at least 1".into()));
        }
        let dim = 4 * self.n + 3;
        if self.dim() != dim {
            return Err(PqcError::InvalidModel(format!(
                "frame has dimension {}, expected 4n+3 = {dim}",
                self.dim()
            )));
        }
        let mut e = self.eta.to_vec();
        e.sort_unstable();
        e.dedup();
        if e.len() != 3 || e.iter().any(|&i| i >= dim) {
            return Err(PqcError::InvalidModel(format!(
                "eta indices {:?} must be three distinct frame indices",
                self.eta.map(|i| i + 1)
            )));
        }
        let h = 4 * self.n;
        if self.metric.rows() != h || self.metric.cols() != h {
            return Err(PqcError::InvalidModel(format!("metric must be {h}x{h}")));
        }
        for (s, m) in self.endo.iter().enumerate() {
            if m.rows() != h || m.cols() != h {
                return Err(PqcError::InvalidModel(format!("I{} must be {h}x{h}", s + 1)));
            }
        }
        Ok(())
    }
}
