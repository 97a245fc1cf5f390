//! Lie-algebra frames with exact structure constants.

use num_traits::Zero;

use crate::error::PqcError;
use crate::linalg::Matrix;
use crate::scalar::{fmt_rat, Rat};

/// A frame `e_0 … e_{dim-1}` with `[e_b, e_c] = Σ_a C^a_{bc} e_a`.
#[derive(Clone, PartialEq, Eq)]
pub struct CoframeModel {
    labels: Vec<String>,
    constants: Vec<Rat>,
}

impl std::fmt::Debug for CoframeModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoframeModel")
            .field("labels", &self.labels)
            .field("nonzero", &self.nonzero_upper().len())
            .finish()
    }
}

impl CoframeModel {
    /// Starts with all brackets zero.
    pub fn abelian(labels: Vec<String>) -> Self {
        let d = labels.len();
        CoframeModel {
            labels,
            constants: vec![Rat::zero(); d * d * d],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        let d = self.dim();
        (a * d + b) * d + c
    }

    /// `C^a_{bc}`.
    #[inline]
    pub fn c(&self, a: usize, b: usize, c: usize) -> &Rat {
        &self.constants[self.idx(a, b, c)]
    }

    /// Sets `C^a_{bc}` and its antisymmetric partner `C^a_{cb}`.
    pub fn set_bracket(&mut self, a: usize, b: usize, c: usize, value: Rat) {
        let i = self.idx(a, b, c);
        let j = self.idx(a, c, b);
        self.constants[j] = -&value;
        self.constants[i] = value;
    }

    /// Builds from `(a, b, c, C^a_{bc})` entries. A pair `(a,b,c)`,
    /// `(a,c,b)` may be listed once or twice; when twice, the values must
    /// be opposite.
    pub fn from_entries(labels: Vec<String>, entries: &[(usize, usize, usize, Rat)]) -> Result<Self, PqcError> {
        let d = labels.len();
        let mut m = Self::abelian(labels);
        let mut seen = vec![false; d * d * d];
        for (a, b, c, v) in entries {
            let (a, b, c) = (*a, *b, *c);
            if a >= d || b >= d || c >= d {
                return Err(PqcError::InvalidModel(format!(
                    "structure constant index ({}, {}, {}) out of range 1..={d}",
                    a + 1,
                    b + 1,
                    c + 1
                )));
            }
            if b == c {
                if !v.is_zero() {
                    return Err(PqcError::NotAntisymmetric { a: a + 1, b: b + 1, c: c + 1 });
                }
                continue;
            }
            let i = m.idx(a, b, c);
            let j = m.idx(a, c, b);
            if seen[i] || seen[j] {
                let prev = &m.constants[i];
                if *prev != *v {
                    return Err(PqcError::NotAntisymmetric { a: a + 1, b: b + 1, c: c + 1 });
                }
                continue;
            }
            seen[i] = true;
            seen[j] = true;
            m.set_bracket(a, b, c, v.clone());
        }
        Ok(m)
    }

    /// Nonzero `(a, b, c, C^a_{bc})` with `b < c`, in lexicographic order.
    pub fn nonzero_upper(&self) -> Vec<(usize, usize, usize, Rat)> {
        let d = self.dim();
        let mut out = Vec::new();
        for a in 0..d {
            for b in 0..d {
                for c in b + 1..d {
                    let v = self.c(a, b, c);
                    if !v.is_zero() {
                        out.push((a, b, c, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn bracket_basis(&self, b: usize, c: usize) -> Vec<Rat> {
        (0..self.dim()).map(|a| self.c(a, b, c).clone()).collect()
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, v: &[Rat], w: &[Rat]) -> Vec<Rat> {
        let d = self.dim();
        let mut out = vec![Rat::zero(); d];
        for b in 0..d {
            if v[b].is_zero() {
                continue;
            }
            for c in 0..d {
                if w[c].is_zero() {
                    continue;
                }
                let f = &v[b] * &w[c];
                for (a, o) in out.iter_mut().enumerate() {
                    let k = self.c(a, b, c);
                    if !k.is_zero() {
                        *o += &f * k;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad_v`: column `b` holds `[v, e_b]`.
    pub fn ad(&self, v: &[Rat]) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for c in 0..d {
            if v[c].is_zero() {
                continue;
            }
            for b in 0..d {
                for a in 0..d {
                    let k = self.c(a, c, b);
                    if !k.is_zero() {
                        m[(a, b)] += &v[c] * k;
                    }
                }
            }
        }
        m
    }

    pub fn check_antisymmetry(&self) -> Result<(), PqcError> {
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                for c in b..d {
                    if *self.c(a, b, c) != -self.c(a, c, b) {
                        return Err(PqcError::NotAntisymmetric { a: a + 1, b: b + 1, c: c + 1 });
                    }
                }
            }
        }
        Ok(())
    }

    /// Cyclic sum `Σ_e C^e_{ab} C^d_{ec} + C^e_{bc} C^d_{ea} + C^e_{ca} C^d_{eb}`.
    pub fn jacobiator(&self, d: usize, a: usize, b: usize, c: usize) -> Rat {
        let mut s = Rat::zero();
        for e in 0..self.dim() {
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                let k = self.c(e, x, y);
                if !k.is_zero() {
                    s += k * self.c(d, e, z);
                }
            }
        }
        s
    }

    /// First Jacobi violation, 1-based indices in the error.
    pub fn check_jacobi(&self) -> Result<(), PqcError> {
        let n = self.dim();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in 0..n {
                        let v = self.jacobiator(d, a, b, c);
                        if !v.is_zero() {
                            return Err(PqcError::JacobiFailure {
                                d: d + 1,
                                a: a + 1,
                                b: b + 1,
                                c: c + 1,
                                value: fmt_rat(&v),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Structure constants in the frame `f_a = Σ_b P[b][a] e_b`.
    pub fn change_frame(&self, p: &Matrix) -> Result<CoframeModel, PqcError> {
        self.change_frame_labeled(p, self.labels.clone())
    }

    pub fn change_frame_labeled(&self, p: &Matrix, labels: Vec<String>) -> Result<CoframeModel, PqcError> {
        let d = self.dim();
        let p_inv = p.inverse()?;
        let mut out = Self::abelian(labels);
        for b in 0..d {
            for c in b + 1..d {
                let fb = p.column(b);
                let fc = p.column(c);
                let br = self.bracket(&fb, &fc);
                let coords = p_inv.mul_vec(&br);
                for (a, v) in coords.into_iter().enumerate() {
                    if !v.is_zero() {
                        out.set_bracket(a, b, c, v);
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn basis_vector(dim: usize, a: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[a] = Rat::from_integer(1.into());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("e{i}")).collect()
    }

    fn heis3() -> CoframeModel {
        let mut m = CoframeModel::abelian(labels(3));
        m.set_bracket(2, 0, 1, int(1));
        m
    }

    #[test]
    fn bracket_is_bilinear_and_antisymmetric() {
        let m = heis3();
        let v = vec![int(1), int(2), int(0)];
        let w = vec![int(3), int(-1), int(5)];
        let vw = m.bracket(&v, &w);
        let wv = m.bracket(&w, &v);
        assert_eq!(vw, vec![int(0), int(0), int(-7)]);
        assert_eq!(wv, vec![int(0), int(0), int(7)]);
    }

    #[test]
    fn jacobi_violation_is_reported() {
        let mut m = CoframeModel::abelian(labels(3));
        m.set_bracket(1, 0, 1, int(1));
        m.set_bracket(0, 1, 2, int(1));
        m.set_bracket(2, 0, 2, int(1));
        assert!(matches!(m.check_jacobi(), Err(PqcError::JacobiFailure { .. })));
    }

    #[test]
    fn antisymmetry_enforced_on_entries() {
        let e = vec![(2, 0, 1, int(1)), (2, 1, 0, int(1))];
        let r = CoframeModel::from_entries(labels(3), &e);
        assert_eq!(r.unwrap_err(), PqcError::NotAntisymmetric { a: 3, b: 2, c: 1 });
        let ok = vec![(2, 0, 1, int(1)), (2, 1, 0, int(-1))];
        assert_eq!(CoframeModel::from_entries(labels(3), &ok).unwrap(), heis3());
    }

    #[test]
    fn frame_change_is_an_isomorphism() {
        let m = heis3();
        let p = Matrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[2, 0, 1]]);
        let m2 = m.change_frame(&p).unwrap();
        m2.check_jacobi().unwrap();
        let back = m2.change_frame(&p.inverse().unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
