//! Polynomial-coefficient vector fields and 1-forms on a coordinate chart,
//! used to certify frame structure constants by direct differentiation.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::Serialize;

use super::frame::CoframeModel;
use crate::scalar::{fmt_rat, int, Rat};

/// Multivariate polynomial with exact coefficients, keyed by exponent vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// `c · x_var`.
    pub fn linear(nvars: usize, var: usize, c: Rat) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c * int(e[var] as i64));
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn describe(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| if p == 1 { names[i].clone() } else { format!("{}^{p}", names[i]) })
                    .collect();
                if mono.is_empty() {
                    fmt_rat(c)
                } else {
                    format!("{}*{}", fmt_rat(c), mono.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&int(-1))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                // exponents add when monomials multiply
                #[allow(clippy::suspicious_arithmetic_impl)]
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// `Σ_i f_i ∂_i` on a chart with `nvars` coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVectorField {
    pub coefficients: Vec<Poly>,
}

impl PolyVectorField {
    pub fn zero(nvars: usize) -> Self {
        PolyVectorField {
            coefficients: vec![Poly::zero(nvars); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.coefficients.len()
    }

    /// `V(f) = Σ_i V^i ∂_i f`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars());
        for (i, vi) in self.coefficients.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            out = &out + &(vi * &f.derivative(i));
        }
        out
    }

    /// `[V, W]^i = V(W^i) - W(V^i)`.
    pub fn bracket(&self, other: &PolyVectorField) -> PolyVectorField {
        PolyVectorField {
            coefficients: (0..self.nvars())
                .map(|i| &self.apply(&other.coefficients[i]) - &other.apply(&self.coefficients[i]))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> PolyVectorField {
        PolyVectorField {
            coefficients: self.coefficients.iter().map(|p| p.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &PolyVectorField) -> PolyVectorField {
        PolyVectorField {
            coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `Σ_i θ_i dx_i` with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyOneForm {
    pub coefficients: Vec<Poly>,
}

impl PolyOneForm {
    /// `θ(V) = Σ θ_i V^i`.
    pub fn pair(&self, v: &PolyVectorField) -> Poly {
        let n = self.coefficients.len();
        let mut out = Poly::zero(n);
        for i in 0..n {
            out = &out + &(&self.coefficients[i] * &v.coefficients[i]);
        }
        out
    }

    /// Coefficient of `dx_i ∧ dx_j` in `dθ`, i.e. `∂_iθ_j - ∂_jθ_i`.
    pub fn d_component(&self, i: usize, j: usize) -> Poly {
        &self.coefficients[j].derivative(i) - &self.coefficients[i].derivative(j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketMismatch {
    pub pair: (usize, usize),
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketCheck {
    pub pairs_checked: usize,
    pub mismatches: Vec<BracketMismatch>,
}

impl BracketCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `[F_b, F_c]` with `Σ_a C^a_{bc} F_a` for every pair `b < c`.
/// Field `F_a` realises frame vector `e_a`.
pub fn poly_bracket_check(fields: &[PolyVectorField], model: &CoframeModel, names: &[String]) -> BracketCheck {
    assert_eq!(fields.len(), model.dim(), "one field per frame vector");
    let d = model.dim();
    let mut mismatches = Vec::new();
    let mut pairs = 0;
    for b in 0..d {
        for c in b + 1..d {
            pairs += 1;
            let lhs = fields[b].bracket(&fields[c]);
            let mut rhs = PolyVectorField::zero(fields[0].nvars());
            for (a, field) in fields.iter().enumerate() {
                let k = model.c(a, b, c);
                if !k.is_zero() {
                    rhs = rhs.add(&field.scale(k));
                }
            }
            if lhs != rhs {
                let diff: Vec<String> = lhs
                    .coefficients
                    .iter()
                    .zip(&rhs.coefficients)
                    .enumerate()
                    .filter(|(_, (l, r))| l != r)
                    .map(|(i, (l, r))| format!("d/d{}: {}", names[i], (l - r).describe(names)))
                    .collect();
                mismatches.push(BracketMismatch {
                    pair: (b + 1, c + 1),
                    residual: diff.join("; "),
                });
            }
        }
    }
    BracketCheck {
        pairs_checked: pairs,
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_and_product() {
        let x = Poly::linear(2, 0, int(1));
        let y = Poly::linear(2, 1, int(1));
        let p = &(&x * &x) * &y;
        assert_eq!(p.derivative(0), (&x * &y).scale(&int(2)));
        assert_eq!(p.derivative(1), &x * &x);
        assert!(Poly::constant(2, int(3)).derivative(0).is_zero());
    }

    #[test]
    fn bracket_of_coordinate_fields() {
        // [∂x, x∂y] = ∂y
        let mut a = PolyVectorField::zero(2);
        a.coefficients[0] = Poly::constant(2, int(1));
        let mut b = PolyVectorField::zero(2);
        b.coefficients[1] = Poly::linear(2, 0, int(1));
        let br = a.bracket(&b);
        assert_eq!(br.coefficients[1], Poly::constant(2, int(1)));
        assert!(br.coefficients[0].is_zero());
    }
}
