//! Splitting of horizontal endomorphisms under the paraquaternionic
//! structure group, and the orthogonal complement of `sp(n) ⊕ sp(1)`.

use num_traits::Zero;

use super::epsilon::{eps, eps_rat, CYCLIC};
use crate::error::PqcError;
use crate::linalg::Matrix;
use crate::scalar::{frac, int, Rat};

/// The triple `(I₁, I₂, I₃)` as matrices acting on column vectors.
pub type Triple = [Matrix; 3];

/// Checks `I_s² = ε_s` and `I_i I_j = -I_j I_i = -ε_k I_k`.
pub fn check_paraquaternionic(i: &Triple) -> Result<(), PqcError> {
    let h = i[0].rows();
    let id = Matrix::identity(h);
    for s in 0..3 {
        if !i[s].is_square() || i[s].rows() != h {
            return Err(PqcError::NotParaquaternionic(format!("I{} has wrong shape", s + 1)));
        }
        if &i[s] * &i[s] != id.scale(&eps_rat(s)) {
            return Err(PqcError::NotParaquaternionic(format!(
                "I{}^2 != {}",
                s + 1,
                eps(s)
            )));
        }
    }
    for &(a, b, c) in &CYCLIC {
        let ab = &i[a] * &i[b];
        if ab != i[c].scale(&-eps_rat(c)) {
            return Err(PqcError::NotParaquaternionic(format!(
                "I{}I{} != -eps_{} I{}",
                a + 1,
                b + 1,
                c + 1,
                c + 1
            )));
        }
        if &i[b] * &i[a] != -&ab {
            return Err(PqcError::NotParaquaternionic(format!(
                "I{} and I{} do not anticommute",
                a + 1,
                b + 1
            )));
        }
    }
    Ok(())
}

/// The four isotypic parts of an endomorphism. Sign labels give the
/// behaviour under conjugation by `I₁, I₂, I₃`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndomorphismDecomposition {
    pub ppp: Matrix,
    pub pmm: Matrix,
    pub mpm: Matrix,
    pub mmp: Matrix,
}

impl EndomorphismDecomposition {
    /// The `[3]` component (commutes with every `I_s`).
    pub fn part3(&self) -> Matrix {
        self.ppp.clone()
    }

    /// The `[-1]` component.
    pub fn part_minus1(&self) -> Matrix {
        &(&self.pmm + &self.mpm) + &self.mmp
    }

    pub fn sum(&self) -> Matrix {
        &self.ppp + &self.part_minus1()
    }
}

/// `ε_s I_s Ψ I_s`, i.e. conjugation of `Ψ` by `I_s`.
fn conjugate(i: &Triple, s: usize, psi: &Matrix) -> Matrix {
    (&(&i[s] * psi) * &i[s]).scale(&eps_rat(s))
}

fn projector(i: &Triple, psi: &Matrix, signs: [i64; 3]) -> Matrix {
    let mut acc = psi.clone();
    for s in 0..3 {
        acc = &acc + &conjugate(i, s, psi).scale(&int(signs[s]));
    }
    acc.scale(&frac(1, 4))
}

pub fn decompose_endomorphism(psi: &Matrix, i: &Triple) -> Result<EndomorphismDecomposition, PqcError> {
    check_paraquaternionic(i)?;
    if !psi.is_square() || psi.rows() != i[0].rows() {
        return Err(PqcError::InvalidModel("endomorphism has wrong shape".into()));
    }
    Ok(EndomorphismDecomposition {
        ppp: projector(i, psi, [1, 1, 1]),
        pmm: projector(i, psi, [1, -1, -1]),
        mpm: projector(i, psi, [-1, 1, -1]),
        mmp: projector(i, psi, [-1, -1, 1]),
    })
}

/// `3Ψ - I₁ΨI₁ - I₂ΨI₂ + I₃ΨI₃`, which vanishes on the `[3]` component.
pub fn casimir_three_residual(psi: &Matrix, i: &Triple) -> Matrix {
    let mut acc = psi.scale(&int(3));
    for s in 0..3 {
        acc = &acc - &conjugate(i, s, psi);
    }
    acc
}

/// `Ψ + I₁ΨI₁ + I₂ΨI₂ - I₃ΨI₃`, which vanishes on the `[-1]` component.
pub fn casimir_minus1_residual(psi: &Matrix, i: &Triple) -> Matrix {
    let mut acc = psi.clone();
    for s in 0..3 {
        acc = &acc + &conjugate(i, s, psi);
    }
    acc
}

/// `⟨A, B⟩ = tr(A B*)` with the metric adjoint `B* = G⁻¹BᵀG`.
pub fn endo_inner(a: &Matrix, b: &Matrix, g: &Matrix, g_inv: &Matrix) -> Rat {
    (&(a * g_inv) * &(&b.transpose() * g)).trace()
}

/// Whether `g(AX, Y) = -g(X, AY)`.
pub fn is_metric_skew(a: &Matrix, g: &Matrix) -> bool {
    (g * a).is_antisymmetric()
}

/// Coefficients `c_s` of the `sp(1)` component `Σ c_s I_s`.
pub fn sp1_coefficients(a: &Matrix, i: &Triple) -> [Rat; 3] {
    let dim = int(a.rows() as i64);
    std::array::from_fn(|s| eps_rat(s) * (a * &i[s]).trace() / &dim)
}

pub fn sp1_component(a: &Matrix, i: &Triple) -> Matrix {
    let c = sp1_coefficients(a, i);
    let mut acc = Matrix::zeros(a.rows(), a.cols());
    for s in 0..3 {
        if !c[s].is_zero() {
            acc = &acc + &i[s].scale(&c[s]);
        }
    }
    acc
}

/// Projection of a metric-skew endomorphism onto `(sp(n) ⊕ sp(1))^⊥`,
/// realised as `A_[-1] - A_sp(1)`.
pub fn sp1_perp_project(a: &Matrix, g: &Matrix, i: &Triple) -> Result<Matrix, PqcError> {
    if !is_metric_skew(a, g) {
        return Err(PqcError::NotSkew);
    }
    let parts = decompose_endomorphism(a, i)?;
    Ok(&parts.part_minus1() - &sp1_component(a, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin::heisenberg_horizontal;

    #[test]
    fn identity_is_pure_three() {
        let (g, i) = heisenberg_horizontal(1);
        let _ = g;
        let d = decompose_endomorphism(&Matrix::identity(4), &i).unwrap();
        assert_eq!(d.part3(), Matrix::identity(4));
        assert!(d.part_minus1().is_zero());
    }

    #[test]
    fn i1_is_pure_minus_one() {
        let (_, i) = heisenberg_horizontal(1);
        let d = decompose_endomorphism(&i[0], &i).unwrap();
        assert!(d.part3().is_zero());
        assert_eq!(d.part_minus1(), i[0]);
        assert_eq!(d.pmm, i[0]);
    }

    #[test]
    fn rejects_bad_triple() {
        let (_, mut i) = heisenberg_horizontal(1);
        i[1] = -&i[1];
        assert!(decompose_endomorphism(&Matrix::identity(4), &i).is_err());
    }

    #[test]
    fn sp1_elements_project_to_zero() {
        let (g, i) = heisenberg_horizontal(2);
        for s in 0..3 {
            let p = sp1_perp_project(&i[s], &g, &i).unwrap();
            assert!(p.is_zero());
        }
    }

    #[test]
    fn non_skew_rejected() {
        let (g, i) = heisenberg_horizontal(1);
        assert_eq!(sp1_perp_project(&Matrix::identity(4), &g, &i), Err(PqcError::NotSkew));
    }
}
