//! Structure-group gauge changes: a horizontal `Sp(n,R)` frame change, a
//! constant `SO(1,2)` rotation `η' = Φη` and a positive constant rescale.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PqcModel;
use crate::algebra::{eps_rat, Triple};
use crate::error::PqcError;
use crate::linalg::Matrix;
use crate::scalar::{fmt_rat, int, Rat};

/// `diag(-1, -1, 1)`: the form preserved by `Φ`, i.e. `g(ξ_s, ξ_t) = -ε_s δ_st`.
pub fn vertical_form() -> Matrix {
    Matrix::diagonal(&[int(-1), int(-1), int(1)])
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransform {
    /// Horizontal frame change: new vector `i` is `Σ_j A[j][i]` old vector `j`.
    pub horizontal: Matrix,
    /// `η'_s = rescale · Σ_t Φ[s][t] η_t`.
    pub phi: Matrix,
    pub rescale: Rat,
    pub seed: Option<u64>,
}

/// `(1 - K)⁻¹(1 + K)`, or `None` when `1 - K` is singular.
fn cayley(k: &Matrix) -> Option<Matrix> {
    let id = Matrix::identity(k.rows());
    let inv = (&id - k).inverse().ok()?;
    Some(&inv * &(&id + k))
}

impl GaugeTransform {
    pub fn identity(n: usize) -> Self {
        GaugeTransform {
            horizontal: Matrix::identity(4 * n),
            phi: Matrix::identity(3),
            rescale: int(1),
            seed: None,
        }
    }

    pub fn vertical(n: usize, phi: Matrix) -> Self {
        GaugeTransform {
            phi,
            ..Self::identity(n)
        }
    }

    /// `Φ = Cayley(K S)` for an antisymmetric `S` given by its three upper entries.
    pub fn so12_from(s12: i64, s13: i64, s23: i64) -> Option<Matrix> {
        let s = Matrix::from_i64(&[&[0, s12, s13], &[-s12, 0, s23], &[-s13, -s23, 0]]);
        cayley(&(&vertical_form() * &s))
    }

    /// Seeded random element of the structure group for `model`.
    pub fn random(model: &PqcModel, seed: u64, rescale: Option<Rat>) -> Result<Self, PqcError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = 4 * model.n;
        let g = &model.metric;
        let g_inv = g.inverse()?;
        for _ in 0..64 {
            let m = Matrix::from_fn(h, h, |_, _| int(rng.random_range(-2..=2)));
            // project onto the commutant of I_s, then onto g-skew
            let mut k0 = m.clone();
            for s in 0..3 {
                k0 = &k0 + &(&(&model.endo[s] * &m) * &model.endo[s]).scale(&eps_rat(s));
            }
            let k0 = k0.scale(&Rat::new(1.into(), 4.into()));
            let k = (&k0 - &(&(&g_inv * &k0.transpose()) * g)).scale(&Rat::new(1.into(), 2.into()));
            let Some(a) = cayley(&k) else { continue };
            let s: [i64; 3] = std::array::from_fn(|_| rng.random_range(-2..=2));
            let Some(phi) = Self::so12_from(s[0], s[1], s[2]) else { continue };
            let t = GaugeTransform {
                horizontal: a,
                phi,
                rescale: rescale.clone().unwrap_or_else(Rat::one),
                seed: Some(seed),
            };
            if t.check(model).is_ok() {
                return Ok(t);
            }
        }
        Err(PqcError::NotInStructureGroup(format!("no admissible draw for seed {seed}")))
    }

    pub fn check(&self, model: &PqcModel) -> Result<(), PqcError> {
        let h = 4 * model.n;
        let bad = |m: &str| Err(PqcError::NotInStructureGroup(m.into()));
        if self.horizontal.rows() != h || self.horizontal.cols() != h || self.phi.rows() != 3 || self.phi.cols() != 3 {
            return bad("dimensions do not match the model");
        }
        if !self.rescale.is_positive() {
            return bad("rescale factor must be positive");
        }
        let a = &self.horizontal;
        if &(&a.transpose() * &model.metric) * a != model.metric {
            return bad("horizontal part does not preserve g");
        }
        for (s, i) in model.endo.iter().enumerate() {
            if a * i != i * a {
                return Err(PqcError::NotInStructureGroup(format!(
                    "horizontal part does not commute with I{}",
                    s + 1
                )));
            }
        }
        let k = vertical_form();
        if &(&self.phi * &k) * &self.phi.transpose() != k || self.phi.determinant() != int(1) {
            return bad("phi is not in SO(1,2)");
        }
        Ok(())
    }

    /// Full frame change `P` on the model's frame, block diagonal in `H ⊕ V`.
    pub fn frame_matrix(&self, model: &PqcModel) -> Result<Matrix, PqcError> {
        let dim = model.dim();
        let hor = model.horizontal();
        let vinv = self.phi.scale(&self.rescale).inverse()?;
        let mut p = Matrix::zeros(dim, dim);
        for (i, &hi) in hor.iter().enumerate() {
            for (j, &hj) in hor.iter().enumerate() {
                p[(hi, hj)] = self.horizontal[(i, j)].clone();
            }
        }
        for s in 0..3 {
            for t in 0..3 {
                p[(model.eta[s], model.eta[t])] = vinv[(s, t)].clone();
            }
        }
        Ok(p)
    }

    pub fn apply(&self, model: &PqcModel) -> Result<PqcModel, PqcError> {
        self.check(model)?;
        let p = self.frame_matrix(model)?;
        let frame = model.frame.change_frame_labeled(&p, model.frame.labels().to_vec())?;
        let a = &self.horizontal;
        let a_inv = a.inverse()?;
        let endo: Triple = std::array::from_fn(|s| {
            let mut mixed = Matrix::zeros(a.rows(), a.rows());
            for t in 0..3 {
                let w = &self.phi[(s, t)] * eps_rat(t) * eps_rat(s);
                if !w.is_zero() {
                    mixed = &mixed + &model.endo[t].scale(&w);
                }
            }
            &(&a_inv * &mixed) * a
        });
        let metric = (&(&a.transpose() * &model.metric) * a).scale(&self.rescale);
        let mut metadata = model.metadata.clone();
        metadata.insert("gauge.rescale".into(), fmt_rat(&self.rescale));
        if let Some(seed) = self.seed {
            metadata.insert("gauge.seed".into(), seed.to_string());
        }
        let suffix = match self.seed {
            Some(seed) => format!("-gauge{seed}"),
            None => "-gauge".into(),
        };
        Ok(PqcModel {
            name: format!("{}{suffix}", model.name),
            n: model.n,
            frame,
            eta: model.eta,
            metric,
            endo,
            metadata,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::check_paraquaternionic;
    use crate::models::{builtin_heisenberg, derive_structure_from_contact};

    #[test]
    fn identity_is_identity() {
        let m = builtin_heisenberg(1);
        let out = GaugeTransform::identity(1).apply(&m).unwrap();
        assert_eq!(out.frame, m.frame);
        assert_eq!(out.metric, m.metric);
        assert_eq!(out.endo, m.endo);
    }

    #[test]
    fn random_transforms_keep_contact_data_consistent() {
        for n in 1..=2 {
            let m = builtin_heisenberg(n);
            for seed in 0..4 {
                let t = GaugeTransform::random(&m, seed, None).unwrap();
                let out = t.apply(&m).unwrap();
                check_paraquaternionic(&out.endo).unwrap();
                out.frame.check_jacobi().unwrap();
                let (g, i) = derive_structure_from_contact(&out.contact_matrices()).unwrap();
                assert_eq!(g, out.metric);
                assert_eq!(i, out.endo);
            }
        }
    }

    #[test]
    fn rejects_non_so12() {
        let m = builtin_heisenberg(1);
        let t = GaugeTransform::vertical(1, Matrix::diagonal(&[int(-1), int(1), int(1)]));
        assert!(t.apply(&m).is_err());
    }
}
