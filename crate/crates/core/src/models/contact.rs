//! Recovery of `(g, I_s)` from the three contact matrices `R_s = dη_s|_H`.

use crate::algebra::{check_paraquaternionic, eps_rat, Triple, CYCLIC};
use crate::error::PqcError;
use crate::linalg::Matrix;
use crate::scalar::{frac, int};

/// `I_k = ε_i R_i⁻¹ R_j` for each cyclic `(i,j,k)`; then `g = ½ R_s I_s`,
/// which must agree for all `s`. The result is checked against the
/// paraquaternion relations, metric compatibility and the contact condition.
pub fn derive_structure_from_contact(r: &Triple) -> Result<(Matrix, Triple), PqcError> {
    let h = r[0].rows();
    if h == 0 || !h.is_multiple_of(4) {
        return Err(PqcError::InconsistentContact(format!(
            "horizontal dimension {h} is not a positive multiple of 4"
        )));
    }
    let mut inverses = Vec::with_capacity(3);
    for (s, rs) in r.iter().enumerate() {
        if !rs.is_antisymmetric() {
            return Err(PqcError::InconsistentContact(format!("R{} is not antisymmetric", s + 1)));
        }
        inverses.push(
            rs.inverse()
                .map_err(|_| PqcError::InconsistentContact(format!("R{} is degenerate on H", s + 1)))?,
        );
    }
    let mut endo: Triple = std::array::from_fn(|_| Matrix::zeros(h, h));
    for &(i, j, k) in &CYCLIC {
        endo[k] = (&inverses[i] * &r[j]).scale(&eps_rat(i));
    }
    check_paraquaternionic(&endo).map_err(|e| PqcError::InconsistentContact(e.to_string()))?;

    let half = frac(1, 2);
    let g = (&r[0] * &endo[0]).scale(&half);
    for s in 1..3 {
        if (&r[s] * &endo[s]).scale(&half) != g {
            return Err(PqcError::InconsistentContact(format!(
                "metric recovered from R{} differs from the one recovered from R1",
                s + 1
            )));
        }
    }
    if !g.is_symmetric() {
        return Err(PqcError::InconsistentContact("recovered metric is not symmetric".into()));
    }
    if g.determinant() == int(0) {
        return Err(PqcError::InconsistentContact("recovered metric is degenerate".into()));
    }
    for s in 0..3 {
        // g(I_sX, I_sY) = -ε_s g(X, Y)
        let lhs = &(&endo[s].transpose() * &g) * &endo[s];
        if lhs != g.scale(&-eps_rat(s)) {
            return Err(PqcError::InconsistentContact(format!("I{} is not compatible with g", s + 1)));
        }
        // dη_s(X, Y) = -2ε_s g(I_sX, Y)
        let rhs = (&endo[s].transpose() * &g).scale(&(int(-2) * eps_rat(s)));
        if rhs != r[s] {
            return Err(PqcError::InconsistentContact(format!("contact condition fails for s = {}", s + 1)));
        }
    }
    Ok((g, endo))
}
