//! The two golden models: the paraquaternionic Heisenberg algebra and the
//! solvable seven-dimensional algebra `l0(c)`.

use std::collections::BTreeMap;

use super::contact::derive_structure_from_contact;
use super::PqcModel;
use crate::algebra::{ParaQuaternion, Triple};
use crate::calculus::{CoframeModel, Form};
use crate::linalg::Matrix;
use crate::scalar::{fmt_rat, frac, int, Rat};

/// `1, r₃, r₁, r₂` in the order of the coordinates `t, x, y, z`.
pub fn block_units() -> [ParaQuaternion; 4] {
    [
        ParaQuaternion::one(),
        ParaQuaternion::unit(2),
        ParaQuaternion::unit(0),
        ParaQuaternion::unit(1),
    ]
}

fn components(p: &ParaQuaternion) -> [Rat; 4] {
    [p.t.clone(), p.x.clone(), p.y.clone(), p.z.clone()]
}

/// Metric and `I_s` on `pQ^n`: `I_s` is left multiplication by `r_s`
/// and `g` is the polarised norm, giving signature `(2n, 2n)`.
pub fn heisenberg_horizontal(n: usize) -> (Matrix, Triple) {
    let h = 4 * n;
    let units = block_units();
    let mut g = Matrix::zeros(h, h);
    let mut endo: Triple = std::array::from_fn(|_| Matrix::zeros(h, h));
    for blk in 0..n {
        let off = 4 * blk;
        for a in 0..4 {
            for b in 0..4 {
                let sum = &units[a] + &units[b];
                let polar = (sum.norm() - units[a].norm() - units[b].norm()) * frac(1, 2);
                g[(off + a, off + b)] = polar;
            }
            for (s, m) in endo.iter_mut().enumerate() {
                let image = &ParaQuaternion::unit(s) * &units[a];
                for (row, v) in components(&image).into_iter().enumerate() {
                    m[(off + row, off + a)] = v;
                }
            }
        }
    }
    (g, endo)
}

pub fn heisenberg_labels(n: usize) -> Vec<String> {
    let mut labels = Vec::with_capacity(4 * n + 3);
    for a in 1..=n {
        for p in ["T", "X", "Y", "Z"] {
            labels.push(format!("{p}{a}"));
        }
    }
    labels.extend(["xi1", "xi2", "xi3"].map(String::from));
    labels
}

/// `dη₁ = 2Σ[T∧Y + X∧Z]`, `dη₂ = 2Σ[T∧Z - X∧Y]`, `dη₃ = 2Σ[T∧X + Y∧Z]`.
pub fn heisenberg_structure_equations(n: usize) -> [Form; 3] {
    let dim = 4 * n + 3;
    let two = int(2);
    let mut out: [Form; 3] = std::array::from_fn(|_| Form::zero(dim, 2));
    for blk in 0..n {
        let (t, x, y, z) = (4 * blk, 4 * blk + 1, 4 * blk + 2, 4 * blk + 3);
        let m = |a, b| Form::monomial(dim, &[a, b]).scale(&two);
        out[0] = &out[0] + &(&m(t, y) + &m(x, z));
        out[1] = &out[1] + &(&m(t, z) - &m(x, y));
        out[2] = &out[2] + &(&m(t, x) + &m(y, z));
    }
    out
}

/// Structure constants from the differentials of the coframe, using
/// `dγ^a(e_b, e_c) = -C^a_{bc}`.
pub fn frame_from_differentials(labels: Vec<String>, differentials: &[Form]) -> CoframeModel {
    let dim = labels.len();
    let mut frame = CoframeModel::abelian(labels);
    for (a, da) in differentials.iter().enumerate() {
        for (ix, v) in da.terms() {
            frame.set_bracket(a, ix[0], ix[1], -v);
        }
    }
    debug_assert_eq!(frame.dim(), dim);
    frame
}

pub fn builtin_heisenberg(n: usize) -> PqcModel {
    assert!(n >= 1, "n must be at least 1");
    let dim = 4 * n + 3;
    let h = 4 * n;
    let eqs = heisenberg_structure_equations(n);
    let mut diffs = vec![Form::zero(dim, 2); dim];
    diffs[h..h + 3].clone_from_slice(&eqs);
    let frame = frame_from_differentials(heisenberg_labels(n), &diffs);
    let (metric, endo) = heisenberg_horizontal(n);
    let mut metadata = BTreeMap::new();
    metadata.insert("family".into(), "heisenberg".into());
    metadata.insert("n".into(), n.to_string());
    PqcModel {
        name: format!("heisenberg-n{n}"),
        n,
        frame,
        eta: [h, h + 1, h + 2],
        metric,
        endo,
        metadata,
    }
}

/// Differentials of `γ¹ … γ⁷` for the solvable algebra with parameter `c`.
pub fn l0_differentials(c: &Rat) -> Vec<Form> {
    let dim = 7;
    let m = |a: usize, b: usize, k: Rat| Form::monomial(dim, &[a - 1, b - 1]).scale(&k);
    let two = int(2);
    vec![
        Form::zero(dim, 2),
        m(3, 4, -c),
        m(2, 4, -c),
        Form::zero(dim, 2),
        &(&m(1, 2, two.clone()) + &m(3, 4, two.clone())) + &m(4, 6, c.clone()),
        &(&m(1, 3, two.clone()) + &m(2, 4, two.clone())) + &m(4, 5, c.clone()),
        &m(1, 4, two.clone()) - &m(2, 3, two),
    ]
}

/// The stated fundamental forms `ω₁ = -(γ¹³+γ²⁴)`, `ω₂ = -(γ¹⁴-γ²³)`,
/// `ω₃ = γ¹²+γ³⁴` on the horizontal frame `e1 … e4`.
pub fn l0_stated_omegas() -> [Matrix; 3] {
    let two_form = |pairs: &[(usize, usize, i64)]| {
        let mut m = Matrix::zeros(4, 4);
        for &(a, b, v) in pairs {
            m[(a - 1, b - 1)] = int(v);
            m[(b - 1, a - 1)] = int(-v);
        }
        m
    };
    [
        two_form(&[(1, 3, -1), (2, 4, -1)]),
        two_form(&[(1, 4, -1), (2, 3, 1)]),
        two_form(&[(1, 2, 1), (3, 4, 1)]),
    ]
}

pub fn builtin_l0(c: &Rat) -> PqcModel {
    let labels: Vec<String> = (1..=7).map(|i| format!("e{i}")).collect();
    let frame = frame_from_differentials(labels, &l0_differentials(c));
    let mut model = PqcModel {
        name: format!("l0-c{}", fmt_rat(c).replace('/', "_")),
        n: 1,
        frame,
        eta: [5, 6, 4],
        metric: Matrix::zeros(4, 4),
        endo: std::array::from_fn(|_| Matrix::zeros(4, 4)),
        metadata: BTreeMap::new(),
    };
    let (metric, endo) = derive_structure_from_contact(&model.contact_matrices())
        .expect("contact data of l0 is consistent for every c");
    // Compare the derived ω_s(X,Y) = g(I_sX,Y) with the stated sign pattern.
    let stated = l0_stated_omegas();
    let mut flips = Vec::new();
    for s in 0..3 {
        let derived = &endo[s].transpose() * &metric;
        if derived != stated[s] {
            flips.push(format!("omega{}", s + 1));
        }
    }
    model.metric = metric;
    model.endo = endo;
    model.metadata.insert("family".into(), "l0".into());
    model.metadata.insert("c".into(), fmt_rat(c));
    model.metadata.insert("g_and_I".into(), "derived from contact matrices".into());
    model.metadata.insert(
        "omega_signs".into(),
        if flips.is_empty() {
            "agree with the stated forms".into()
        } else {
            format!("differ from the stated forms in {}", flips.join(", "))
        },
    );
    debug_assert!(model.metric.rows() == 4 && !model.metric.is_zero());
    model
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::check_paraquaternionic;
    use num_traits::Zero;

    #[test]
    fn horizontal_data_is_paraquaternionic() {
        for n in 1..=3 {
            let (g, i) = heisenberg_horizontal(n);
            check_paraquaternionic(&i).unwrap();
            assert_eq!(g.signature(), (2 * n, 2 * n));
            assert_eq!(g, Matrix::diagonal(&[1, 1, -1, -1].repeat(n).into_iter().map(int).collect::<Vec<_>>()));
        }
    }

    #[test]
    fn i3_sends_t_to_x() {
        let (_, i) = heisenberg_horizontal(1);
        // I₃T = X, I₁T = Y, I₂T = Z
        assert_eq!(i[2].column(0), vec![int(0), int(1), int(0), int(0)]);
        assert_eq!(i[0].column(0), vec![int(0), int(0), int(1), int(0)]);
        assert_eq!(i[1].column(0), vec![int(0), int(0), int(0), int(1)]);
    }

    #[test]
    fn heisenberg_brackets() {
        let m = builtin_heisenberg(1);
        let f = &m.frame;
        // [I₃T, T] = 2ξ₃, [I₁T, I₂T] = -2ξ₃
        assert_eq!(f.bracket_basis(1, 0), vec![0, 0, 0, 0, 0, 0, 2].into_iter().map(int).collect::<Vec<_>>());
        assert_eq!(f.bracket_basis(2, 3), vec![0, 0, 0, 0, 0, 0, -2].into_iter().map(int).collect::<Vec<_>>());
        f.check_jacobi().unwrap();
        let m2 = builtin_heisenberg(2);
        assert!(m2.frame.bracket_basis(0, 4).iter().all(Zero::is_zero));
    }

    #[test]
    fn l0_structure_constants() {
        let m = builtin_l0(&int(3));
        // dγ⁵(e4, e6) = 3
        assert_eq!(*m.frame.c(4, 3, 5), int(-3));
        assert_eq!(m.metadata["omega_signs"], "agree with the stated forms");
        for c in [-2, 0, 1, 3] {
            builtin_l0(&int(c)).frame.check_jacobi().unwrap();
        }
    }
}
