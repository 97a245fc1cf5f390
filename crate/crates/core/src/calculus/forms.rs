//! Constant exterior forms on a frame, stored sparsely by index bitmask.
//!
//! Wedge follows the determinant convention
//! `(α∧β)(X,Y) = α(X)β(Y) - α(Y)β(X)`, so `γ^I` evaluated on the frame
//! vectors `e_I` in increasing order gives 1.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::frame::CoframeModel;
use crate::linalg::Matrix;
use crate::scalar::{fmt_rat, Rat};

pub type Mask = u64;

pub const MAX_DIM: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Mask, Rat>,
}

/// Sign of moving the factors of `b` past those of `a` into sorted order,
/// or `None` if they share an index.
fn merge_sign(a: Mask, b: Mask) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    // Count pairs (x in a, y in b) with x > y.
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> y >> 1).count_ones();
    }
    Some(inversions % 2 == 1)
}

fn indices(mask: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    out
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "frame dimension {dim} exceeds {MAX_DIM}");
        Form {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, value: Rat) -> Self {
        let mut f = Self::zero(dim, 0);
        f.add_term(0, value);
        f
    }

    /// The coframe element `γ^a`.
    pub fn basis(dim: usize, a: usize) -> Self {
        let mut f = Self::zero(dim, 1);
        f.add_term(1 << a, Rat::one());
        f
    }

    /// `γ^{a_1} ∧ … ∧ γ^{a_k}` for an arbitrary index list.
    pub fn monomial(dim: usize, idx: &[usize]) -> Self {
        let mut f = Self::constant(dim, Rat::one());
        for &a in idx {
            f = f.wedge(&Self::basis(dim, a));
        }
        f
    }

    /// A 1-form with the given components.
    pub fn one_form(components: &[Rat]) -> Self {
        let mut f = Self::zero(components.len(), 1);
        for (a, v) in components.iter().enumerate() {
            f.add_term(1 << a, v.clone());
        }
        f
    }

    /// The 2-form with `β(e_a, e_b) = m[a][b]`; `m` must be antisymmetric.
    pub fn two_form(m: &Matrix) -> Self {
        assert!(m.is_antisymmetric(), "two_form needs an antisymmetric matrix");
        let d = m.rows();
        let mut f = Self::zero(d, 2);
        for a in 0..d {
            for b in a + 1..d {
                f.add_term((1 << a) | (1 << b), m[(a, b)].clone());
            }
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Rat)> {
        self.terms.iter().map(|(m, v)| (indices(*m), v))
    }

    pub fn coefficient(&self, idx: &[usize]) -> Rat {
        let mut sorted = idx.to_vec();
        let sign = sort_with_sign(&mut sorted);
        match sign {
            None => Rat::zero(),
            Some(neg) => {
                let mask = sorted.iter().fold(0, |m, &i| m | (1 << i));
                let v = self.terms.get(&mask).cloned().unwrap_or_else(Rat::zero);
                if neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    fn add_term(&mut self, mask: Mask, v: Rat) {
        if v.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Rat::zero);
        *entry += v;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn scale(&self, s: &Rat) -> Form {
        if s.is_zero() {
            return Form::zero(self.dim, self.degree);
        }
        Form {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, v * s)).collect(),
        }
    }

    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.dim, other.dim);
        let mut out = Form::zero(self.dim, self.degree + other.degree);
        for (ma, va) in &self.terms {
            for (mb, vb) in &other.terms {
                if let Some(neg) = merge_sign(*ma, *mb) {
                    let p = va * vb;
                    out.add_term(ma | mb, if neg { -p } else { p });
                }
            }
        }
        out
    }

    /// `ι_v ω`, contraction in the first slot.
    pub fn interior(&self, v: &[Rat]) -> Form {
        assert_eq!(v.len(), self.dim);
        if self.degree == 0 {
            return Form::zero(self.dim, 0);
        }
        let mut out = Form::zero(self.dim, self.degree - 1);
        for (m, c) in &self.terms {
            for (pos, a) in indices(*m).into_iter().enumerate() {
                if v[a].is_zero() {
                    continue;
                }
                let t = c * &v[a];
                out.add_term(m & !(1 << a), if pos % 2 == 1 { -t } else { t });
            }
        }
        out
    }

    pub fn interior_basis(&self, a: usize) -> Form {
        if self.degree == 0 {
            return Form::zero(self.dim, 0);
        }
        let mut out = Form::zero(self.dim, self.degree - 1);
        for (m, c) in &self.terms {
            if m & (1 << a) == 0 {
                continue;
            }
            let pos = (m & ((1 << a) - 1)).count_ones();
            out.add_term(m & !(1 << a), if pos % 2 == 1 { -c } else { c.clone() });
        }
        out
    }

    /// The value of a 0-form.
    pub fn scalar(&self) -> Rat {
        assert_eq!(self.degree, 0);
        self.terms.get(&0).cloned().unwrap_or_else(Rat::zero)
    }

    /// `ω(v_1, …, v_k)`.
    pub fn eval(&self, vs: &[&[Rat]]) -> Rat {
        assert_eq!(vs.len(), self.degree);
        let mut f = self.clone();
        for v in vs {
            f = f.interior(v);
        }
        f.scalar()
    }

    /// `ω(e_{a_1}, …, e_{a_k})`.
    pub fn eval_frame(&self, idx: &[usize]) -> Rat {
        assert_eq!(idx.len(), self.degree);
        self.coefficient(idx)
    }

    /// Drops every term that involves one of the listed indices.
    pub fn restrict_away(&self, excluded: &[usize]) -> Form {
        let mask: Mask = excluded.iter().fold(0, |m, &i| m | (1 << i));
        Form {
            dim: self.dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| *m & mask == 0)
                .map(|(m, v)| (*m, v.clone()))
                .collect(),
        }
    }

    /// Antisymmetric component matrix of a 2-form.
    pub fn to_matrix(&self) -> Matrix {
        assert_eq!(self.degree, 2);
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (mask, v) in &self.terms {
            let ix = indices(*mask);
            m[(ix[0], ix[1])] = v.clone();
            m[(ix[1], ix[0])] = -v;
        }
        m
    }

    pub fn components(&self) -> Vec<Rat> {
        assert_eq!(self.degree, 1);
        (0..self.dim).map(|a| self.coefficient(&[a])).collect()
    }

    pub fn describe(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, v)| {
                let names: Vec<&str> = indices(*m).iter().map(|&i| labels[i].as_str()).collect();
                format!("{}*{}", fmt_rat(v), names.join("^"))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Sorts in place; returns the permutation parity or `None` on a repeat.
fn sort_with_sign(v: &mut [usize]) -> Option<bool> {
    let mut neg = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(neg)
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        assert_eq!((self.dim, self.degree), (rhs.dim, rhs.degree));
        let mut out = self.clone();
        for (m, v) in &rhs.terms {
            out.add_term(*m, v.clone());
        }
        out
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, -v)).collect(),
        }
    }
}

impl std::fmt::Debug for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels: Vec<String> = (0..self.dim).map(|i| format!("g{}", i + 1)).collect();
        write!(f, "Form[{}]({})", self.degree, self.describe(&labels))
    }
}

/// Exterior calculus bound to a frame. Caches `dγ^a`.
pub struct ExteriorCalculus<'m> {
    model: &'m CoframeModel,
    d_basis: Vec<Form>,
}

impl<'m> ExteriorCalculus<'m> {
    pub fn new(model: &'m CoframeModel) -> Self {
        let dim = model.dim();
        let d_basis = (0..dim)
            .map(|a| {
                let mut m = Matrix::zeros(dim, dim);
                for b in 0..dim {
                    for c in 0..dim {
                        m[(b, c)] = -model.c(a, b, c);
                    }
                }
                Form::two_form(&m)
            })
            .collect();
        ExteriorCalculus { model, d_basis }
    }

    pub fn model(&self) -> &CoframeModel {
        self.model
    }

    /// `dγ^a(e_b, e_c) = -C^a_{bc}`.
    pub fn d_basis(&self, a: usize) -> &Form {
        &self.d_basis[a]
    }

    /// Exterior derivative of a constant form, extended from `dγ^a` as a
    /// graded derivation.
    pub fn d(&self, w: &Form) -> Form {
        let dim = w.dim;
        let mut out = Form::zero(dim, w.degree + 1);
        for (mask, c) in &w.terms {
            let ix = indices(*mask);
            for (pos, &a) in ix.iter().enumerate() {
                let before: Mask = ix[..pos].iter().fold(0, |m, &i| m | (1 << i));
                let after: Mask = ix[pos + 1..].iter().fold(0, |m, &i| m | (1 << i));
                let mut prefix = Form::zero(dim, pos);
                prefix.add_term(before, if pos % 2 == 1 { -c } else { c.clone() });
                let mut suffix = Form::zero(dim, ix.len() - pos - 1);
                suffix.add_term(after, Rat::one());
                let term = prefix.wedge(&self.d_basis[a]).wedge(&suffix);
                for (m, v) in term.terms {
                    out.add_term(m, v);
                }
            }
        }
        out
    }

    /// `L_v γ^a = -Σ v^c C^a_{cb} γ^b`, extended as a degree-0 derivation.
    pub fn lie_derivative(&self, v: &[Rat], w: &Form) -> Form {
        let dim = w.dim;
        let ad = self.model.ad(v);
        let mut out = Form::zero(dim, w.degree);
        for (mask, c) in &w.terms {
            let ix = indices(*mask);
            for (pos, &a) in ix.iter().enumerate() {
                for b in 0..dim {
                    let k = &ad[(a, b)];
                    if k.is_zero() {
                        continue;
                    }
                    let mut replaced = ix.clone();
                    replaced[pos] = b;
                    let mut sorted = replaced;
                    if let Some(neg) = sort_with_sign(&mut sorted) {
                        let m = sorted.iter().fold(0, |m, &i| m | (1 << i));
                        let t = -(c * k);
                        out.add_term(m, if neg { -t } else { t });
                    }
                }
            }
        }
        out
    }

    /// `ι_v dω + d ι_v ω`.
    pub fn cartan_lie_derivative(&self, v: &[Rat], w: &Form) -> Form {
        let a = self.d(w).interior(v);
        if w.degree == 0 {
            return a;
        }
        &a + &self.d(&w.interior(v))
    }
}
