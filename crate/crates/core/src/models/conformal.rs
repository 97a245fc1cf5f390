//! The Heisenberg structure rescaled by `1/t²` on the half space `t > 0`,
//! where `t` is the first horizontal coordinate. The coframe
//! `dt/t, dq/t, Θ_s/t²` has constant structure constants, so this is again a
//! left-invariant model; unlike the Heisenberg algebra it is curved.

use std::collections::BTreeMap;

use super::builtin::{frame_from_differentials, heisenberg_horizontal, heisenberg_labels, heisenberg_structure_equations};
use super::PqcModel;
use crate::calculus::Form;
use crate::scalar::{fmt_rat, int, Rat};

/// `dγ⁰ = 0`, `dγ^b = -c γ⁰∧γ^b` on the other horizontal directions and
/// `dη_s = dη_s^{Heis} - 2c γ⁰∧η_s`. `c = 0` gives the Heisenberg algebra.
pub fn conformal_heisenberg(n: usize, c: &Rat) -> PqcModel {
    assert!(n >= 1, "n must be at least 1");
    let dim = 4 * n + 3;
    let h = 4 * n;
    let eqs = heisenberg_structure_equations(n);
    let mut diffs = vec![Form::zero(dim, 2); dim];
    for (b, d) in diffs.iter_mut().enumerate().take(h).skip(1) {
        *d = Form::monomial(dim, &[0, b]).scale(&-c);
    }
    for s in 0..3 {
        diffs[h + s] = &eqs[s] - &Form::monomial(dim, &[0, h + s]).scale(&(int(2) * c));
    }
    let frame = frame_from_differentials(heisenberg_labels(n), &diffs);
    let (metric, endo) = heisenberg_horizontal(n);
    let mut metadata = BTreeMap::new();
    metadata.insert("family".into(), "conformal-heisenberg".into());
    metadata.insert("n".into(), n.to_string());
    metadata.insert("c".into(), fmt_rat(c));
    PqcModel {
        name: format!("conformal-heisenberg-n{n}-c{}", fmt_rat(c).replace('/', "_")),
        n,
        frame,
        eta: [h, h + 1, h + 2],
        metric,
        endo,
        metadata,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use crate::structure::validate_pqc;

    #[test]
    fn is_a_pqc_lie_algebra() {
        for n in 1..=2 {
            for c in [int(1), frac(-1, 2)] {
                let m = conformal_heisenberg(n, &c);
                m.frame.check_jacobi().unwrap();
                let l = validate_pqc(&m);
                assert!(l.passed(), "{l:?}");
            }
        }
    }

    #[test]
    fn zero_parameter_is_heisenberg() {
        let m = conformal_heisenberg(2, &int(0));
        assert_eq!(m.frame, super::super::builtin_heisenberg(2).frame);
    }
}
