//! Polynomial realisation of the Heisenberg group `pQ^n × Im(pQ)` in real
//! coordinates `(t^a, x^a, y^a, z^a; w1, w2, w3)`.
//!
//! The contact form is `Θ = ½(dw - q dq̄ + dq q̄)` with `q = t + r₃x + r₁y + r₂z`
//! per block, and the left-invariant frame is the `Θ`-dual basis.

use num_traits::Zero;
use serde::Serialize;

use super::builtin::{block_units, builtin_heisenberg, heisenberg_structure_equations};
use crate::algebra::ParaQuaternion;
use crate::calculus::{poly_bracket_check, BracketCheck, Poly, PolyOneForm, PolyVectorField};
use crate::scalar::{frac, int, Rat};

pub fn coordinate_names(n: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(4 * n + 3);
    for a in 1..=n {
        for p in ["t", "x", "y", "z"] {
            names.push(format!("{p}{a}"));
        }
    }
    names.extend(["w1", "w2", "w3"].map(String::from));
    names
}

/// `Θ_s` for `s = 1, 2, 3` as polynomial 1-forms.
pub fn contact_forms(n: usize) -> [PolyOneForm; 3] {
    let nv = 4 * n + 3;
    let units = block_units();
    let mut theta: [PolyOneForm; 3] = std::array::from_fn(|_| PolyOneForm {
        coefficients: vec![Poly::zero(nv); nv],
    });
    for (s, form) in theta.iter_mut().enumerate() {
        form.coefficients[4 * n + s] = Poly::constant(nv, frac(1, 2));
    }
    for blk in 0..n {
        for v in 0..4 {
            for u in 0..4 {
                // coefficient of dv: -½ Σ_u q_u Im(e_u ē_v - e_v ē_u)
                let k: ParaQuaternion =
                    &(&units[u] * &units[v].conj()) - &(&units[v] * &units[u].conj());
                for (s, c) in k.imaginary().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let term = Poly::linear(nv, 4 * blk + u, c * frac(-1, 2));
                    let slot = &mut theta[s].coefficients[4 * blk + v];
                    *slot = &*slot + &term;
                }
            }
        }
    }
    theta
}

/// The `Θ`-dual frame: `F_b = ∂_b - 2 Σ_s Θ_s(∂_b) ∂w_s` and `ξ_s = 2∂w_s`,
/// in the order of the built-in Heisenberg frame.
pub fn derived_frame_fields(n: usize) -> Vec<PolyVectorField> {
    let nv = 4 * n + 3;
    let theta = contact_forms(n);
    let mut fields = Vec::with_capacity(nv);
    for b in 0..4 * n {
        let mut f = PolyVectorField::zero(nv);
        f.coefficients[b] = Poly::constant(nv, int(1));
        for (s, th) in theta.iter().enumerate() {
            f.coefficients[4 * n + s] = th.coefficients[b].scale(&int(-2));
        }
        fields.push(f);
    }
    for s in 0..3 {
        let mut f = PolyVectorField::zero(nv);
        f.coefficients[4 * n + s] = Poly::constant(nv, int(2));
        fields.push(f);
    }
    fields
}

/// The frame with the sign pattern shown alongside the bracket table
/// `[I_iT, I_jT] = -2ξ_k`. Kept for comparison; it does not close on the
/// structure constants of the built-in model.
pub fn bracket_table_frame_fields(n: usize) -> Vec<PolyVectorField> {
    let nv = 4 * n + 3;
    // per horizontal slot: (coordinate, sign) for the w3, w1, w2 components
    let table: [[(usize, i64); 3]; 4] = [
        [(1, 2), (2, 2), (3, 2)],
        [(0, -2), (3, -2), (2, 2)],
        [(3, 2), (0, -2), (1, -2)],
        [(2, -2), (1, 2), (0, -2)],
    ];
    // w3, w1, w2 live at offsets 2, 0, 1 of the vertical block
    let vertical = [2, 0, 1];
    let mut fields = Vec::with_capacity(nv);
    for blk in 0..n {
        for (slot, row) in table.iter().enumerate() {
            let mut f = PolyVectorField::zero(nv);
            f.coefficients[4 * blk + slot] = Poly::constant(nv, int(1));
            for (col, &(coord, k)) in row.iter().enumerate() {
                f.coefficients[4 * n + vertical[col]] = Poly::linear(nv, 4 * blk + coord, int(k));
            }
            fields.push(f);
        }
    }
    for s in 0..3 {
        let mut f = PolyVectorField::zero(nv);
        f.coefficients[4 * n + s] = Poly::constant(nv, int(2));
        fields.push(f);
    }
    fields
}

#[derive(Clone, Debug, Serialize)]
pub struct CoordinateCheck {
    pub n: usize,
    pub brackets: BracketCheck,
    /// `Θ_s(F_b) = δ` pairing failures, as `(s, b)` 1-based.
    pub duality_failures: Vec<(usize, usize)>,
    /// `dΘ_s` components that differ from the frame structure equations.
    pub structure_failures: Vec<String>,
}

impl CoordinateCheck {
    pub fn passed(&self) -> bool {
        self.brackets.passed() && self.duality_failures.is_empty() && self.structure_failures.is_empty()
    }
}

/// Brackets of `fields` against `builtin_heisenberg(n)`, plus the
/// coordinate `dΘ_s` against the built-in `dη_s`.
pub fn heisenberg_coordinate_check_with(n: usize, fields: &[PolyVectorField]) -> CoordinateCheck {
    let model = builtin_heisenberg(n);
    let names = coordinate_names(n);
    let brackets = poly_bracket_check(fields, &model.frame, &names);
    let nv = 4 * n + 3;
    let theta = contact_forms(n);
    let mut duality_failures = Vec::new();
    for (s, th) in theta.iter().enumerate() {
        for (b, f) in fields.iter().enumerate() {
            let want = if b == 4 * n + s { int(1) } else { Rat::zero() };
            if th.pair(f) != Poly::constant(nv, want) {
                duality_failures.push((s + 1, b + 1));
            }
        }
    }
    let eqs = heisenberg_structure_equations(n);
    let mut structure_failures = Vec::new();
    for (s, th) in theta.iter().enumerate() {
        for i in 0..nv {
            for j in i + 1..nv {
                let got = th.d_component(i, j);
                let want = eqs[s].coefficient(&[i, j]);
                if got != Poly::constant(nv, want.clone()) {
                    structure_failures.push(format!(
                        "dTheta{}({},{}) = {} but the frame gives {}",
                        s + 1,
                        names[i],
                        names[j],
                        got.describe(&names),
                        want
                    ));
                }
            }
        }
    }
    CoordinateCheck {
        n,
        brackets,
        duality_failures,
        structure_failures,
    }
}

pub fn heisenberg_coordinate_check(n: usize) -> CoordinateCheck {
    heisenberg_coordinate_check_with(n, &derived_frame_fields(n))
}
