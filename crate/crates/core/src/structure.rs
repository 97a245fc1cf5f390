//! The pqc axioms on a model, the Reeb conditions and the adapted frame
//! `(e_1 … e_4n, ξ₁, ξ₂, ξ₃)` in which every later computation runs.

use num_traits::Zero;

use crate::algebra::{eps_rat, Triple, CYCLIC};
use crate::calculus::{CoframeModel, Form};
use crate::check::{eq_matrix, fmt_tuple};
use crate::error::PqcError;
use crate::linalg::Matrix;
use crate::models::PqcModel;
use crate::report::Ledger;
use crate::scalar::{fmt_rat, int, Rat};

pub const DIM7_LABEL: &str = "pqc (dim-7 convention)";

fn paraq_residuals(endo: &Triple) -> Vec<(&'static str, Matrix, Matrix)> {
    let h = endo[0].rows();
    let id = Matrix::identity(h);
    vec![
        ("I1^2 = id", &endo[0] * &endo[0], id.clone()),
        ("I2^2 = id", &endo[1] * &endo[1], id.clone()),
        ("I3^2 = -id", &endo[2] * &endo[2], -&id),
        ("I1 I2 = I3", &endo[0] * &endo[1], endo[2].clone()),
        ("I2 I1 = -I3", &endo[1] * &endo[0], -&endo[2]),
    ]
}

/// Axiom checks with the first failing instance of each family.
pub fn validate_pqc(model: &PqcModel) -> Ledger {
    let mut l = Ledger::new("validation");
    if let Err(e) = model.check_shape() {
        l.check("shape", "dim = 4n+3, g and I_s are 4n x 4n", Err(e.to_string()));
        return l;
    }
    l.check("shape", "dim = 4n+3, g and I_s are 4n x 4n", Ok(()));
    l.check(
        "antisymmetry",
        "C^a_bc = -C^a_cb",
        model.frame.check_antisymmetry().map_err(|e| e.to_string()),
    );
    l.check(
        "jacobi",
        "sum_cyc [[e_a,e_b],e_c] = 0",
        model.frame.check_jacobi().map_err(|e| e.to_string()),
    );
    let labels: Vec<String> = model.horizontal().iter().map(|&i| model.frame.labels()[i].clone()).collect();
    let g = &model.metric;
    l.check(
        "metric-symmetric",
        "g(X,Y) = g(Y,X)",
        eq_matrix("g - g^t", g, &g.transpose(), Some(&labels)),
    );
    let sig = if g.is_symmetric() { Some(g.signature()) } else { None };
    let want = (2 * model.n, 2 * model.n);
    l.check(
        "signature",
        "signature of g on H is (2n, 2n)",
        match sig {
            Some(s) if s == want => Ok(()),
            Some(s) => Err(format!("signature {s:?}, expected {want:?}")),
            None => Err("metric not symmetric".into()),
        },
    );
    let paraq = paraq_residuals(&model.endo)
        .into_iter()
        .map(|(name, lhs, rhs)| eq_matrix(name, &lhs, &rhs, Some(&labels)))
        .collect::<Result<Vec<_>, _>>()
        .map(|_| ());
    l.check("paraq", "I1^2 = I2^2 = id, I3^2 = -id, I1 I2 = -I2 I1 = I3", paraq);
    for s in 0..3 {
        let i = &model.endo[s];
        let lhs = &(&i.transpose() * g) * i;
        let rhs = g.scale(&-eps_rat(s));
        let res = first_pair_mismatch(&lhs, &rhs).map_or(Ok(()), |(a, b)| {
            Err(format!(
                "(s={}, a={}, b={}) at ({}, {}): g(I_s e_a, I_s e_b) = {}, -eps_s g(e_a, e_b) = {}",
                s + 1,
                a + 1,
                b + 1,
                labels[a],
                labels[b],
                fmt_rat(&lhs[(a, b)]),
                fmt_rat(&rhs[(a, b)])
            ))
        });
        l.check(&format!("param.{}", s + 1), "g(I_s X, I_s Y) = -eps_s g(X, Y)", res);
    }
    for s in 0..3 {
        let lhs = model.contact_matrix(s);
        let rhs = (&model.endo[s].transpose() * g).scale(&(int(-2) * eps_rat(s)));
        let res = first_pair_mismatch(&lhs, &rhs).map_or(Ok(()), |(a, b)| {
            Err(format!(
                "(s={}, a={}, b={}) at ({}, {}): d eta_s(X, Y) = {}, -2 eps_s g(I_s X, Y) = {}",
                s + 1,
                a + 1,
                b + 1,
                labels[a],
                labels[b],
                fmt_rat(&lhs[(a, b)]),
                fmt_rat(&rhs[(a, b)])
            ))
        });
        l.check(&format!("ccon.{}", s + 1), "d eta_s(X, Y) = -2 eps_s g(I_s X, Y)", res);
    }
    l
}

fn first_pair_mismatch(a: &Matrix, b: &Matrix) -> Option<(usize, usize)> {
    (0..a.rows()).flat_map(|i| (0..a.cols()).map(move |j| (i, j))).find(|&(i, j)| a[(i, j)] != b[(i, j)])
}

pub fn require_valid(model: &PqcModel) -> Result<(), PqcError> {
    let l = validate_pqc(model);
    let first = l.failures().next().map(|e| format!("{}: {}", e.id, e.witness.clone().unwrap_or_default()));
    match first {
        None => Ok(()),
        Some(msg) => Err(PqcError::ValidationFailed(msg)),
    }
}

/// `ξ_s` as coordinate vectors in the model's frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ReebFrame {
    pub xi: [Vec<Rat>; 3],
    pub label: String,
}

/// `dη_s(v, e_x) = -η_s([v, e_x])` in the model's frame.
fn deta_vec(model: &PqcModel, s: usize, v: &[Rat], x: usize) -> Rat {
    let mut acc = Rat::zero();
    for (a, va) in v.iter().enumerate() {
        if !va.is_zero() {
            acc -= va * model.frame.c(model.eta[s], a, x);
        }
    }
    acc
}

/// Solves `η_s(ξ_t) = δ_st`, `(ξ_s ⌟ dη_s)|H = 0`,
/// `(ξ_j ⌟ dη_i)|H = ε_k (ξ_i ⌟ dη_j)|H` as one exact linear system.
pub fn solve_reeb(model: &PqcModel) -> Result<ReebFrame, PqcError> {
    model.check_shape()?;
    let d = model.dim();
    let hor = model.horizontal();
    let unknowns = 3 * d;
    let u = |t: usize, a: usize| t * d + a;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for s in 0..3 {
        for t in 0..3 {
            let mut r = vec![Rat::zero(); unknowns];
            r[u(t, model.eta[s])] = int(1);
            rows.push(r);
            rhs.push(if s == t { int(1) } else { Rat::zero() });
        }
    }
    let c_eta = |s: usize, a: usize, x: usize| model.frame.c(model.eta[s], a, x).clone();
    for s in 0..3 {
        for &x in &hor {
            let mut r = vec![Rat::zero(); unknowns];
            for a in 0..d {
                r[u(s, a)] = -c_eta(s, a, x);
            }
            rows.push(r);
            rhs.push(Rat::zero());
        }
    }
    for &(i, j, k) in &CYCLIC {
        for &x in &hor {
            let mut r = vec![Rat::zero(); unknowns];
            for a in 0..d {
                r[u(j, a)] -= c_eta(i, a, x);
                r[u(i, a)] += eps_rat(k) * c_eta(j, a, x);
            }
            rows.push(r);
            rhs.push(Rat::zero());
        }
    }
    let m = Matrix::from_fn(rows.len(), unknowns, |i, j| rows[i][j].clone());
    let caveat = if model.n == 1 {
        " (in dimension 7 these conditions are an extra requirement, not automatic)"
    } else {
        ""
    };
    let sol = match m.solve_unique(&rhs) {
        Ok(Some(x)) => x,
        Ok(None) => {
            return Err(PqcError::NoReebSolution(format!(
                "eta_s(xi_t) = delta_st together with the contraction conditions is inconsistent{caveat}"
            )))
        }
        Err(e) => return Err(PqcError::NoReebSolution(format!("solution not unique: {e}"))),
    };
    let xi: [Vec<Rat>; 3] = std::array::from_fn(|t| sol[t * d..(t + 1) * d].to_vec());
    let label = if model.n == 1 { DIM7_LABEL } else { "pqc" };
    Ok(ReebFrame {
        xi,
        label: label.into(),
    })
}

/// Re-checks the Reeb conditions on a solution.
pub fn reeb_ledger(model: &PqcModel, reeb: &ReebFrame) -> Ledger {
    let mut l = Ledger::new("reeb");
    let hor = model.horizontal();
    let labels = model.frame.labels();
    let mut res = Ok(());
    for s in 0..3 {
        for t in 0..3 {
            let v = &reeb.xi[t][model.eta[s]];
            let want = if s == t { int(1) } else { Rat::zero() };
            if *v != want && res.is_ok() {
                res = Err(format!("eta{}(xi{}) = {}", s + 1, t + 1, fmt_rat(v)));
            }
        }
    }
    l.check("xi.dual", "eta_s(xi_t) = delta_st", res);
    let mut res = Ok(());
    'outer: for s in 0..3 {
        for &x in &hor {
            let v = deta_vec(model, s, &reeb.xi[s], x);
            if !v.is_zero() {
                res = Err(format!("d eta{}(xi{}, {}) = {}", s + 1, s + 1, labels[x], fmt_rat(&v)));
                break 'outer;
            }
        }
    }
    l.check("xi.self", "(xi_s _| d eta_s)|H = 0", res);
    let mut res = Ok(());
    'outer2: for &(i, j, k) in &CYCLIC {
        for &x in &hor {
            let lhs = deta_vec(model, i, &reeb.xi[j], x);
            let rhs = eps_rat(k) * deta_vec(model, j, &reeb.xi[i], x);
            if lhs != rhs {
                res = Err(format!(
                    "(i,j,k)=({},{},{}), X={}: d eta_i(xi_j, X) = {}, eps_k d eta_j(xi_i, X) = {}",
                    i + 1,
                    j + 1,
                    k + 1,
                    labels[x],
                    fmt_rat(&lhs),
                    fmt_rat(&rhs)
                ));
                break 'outer2;
            }
        }
    }
    l.check("xi.cross", "(xi_j _| d eta_i)|H = eps_k (xi_i _| d eta_j)|H", res);
    l
}

/// A validated model in its adapted frame: indices `0..4n` are the original
/// horizontal frame vectors, `4n + s` is `ξ_{s+1}`.
#[derive(Clone, Debug)]
pub struct AdaptedModel {
    pub source: PqcModel,
    pub reeb: ReebFrame,
    pub n: usize,
    pub h: usize,
    pub frame: CoframeModel,
    /// `g` on `H`.
    pub metric: Matrix,
    pub metric_inv: Matrix,
    pub endo: Triple,
    /// Extended metric `g|H + g|V` with `g(ξ_s, ξ_t) = -ε_s δ_st`.
    pub g: Matrix,
    pub g_inv: Matrix,
}

impl AdaptedModel {
    pub fn new(model: &PqcModel, reeb: &ReebFrame) -> Result<Self, PqcError> {
        let d = model.dim();
        let hor = model.horizontal();
        let h = hor.len();
        let mut p = Matrix::zeros(d, d);
        for (i, &hi) in hor.iter().enumerate() {
            p[(hi, i)] = int(1);
        }
        for s in 0..3 {
            for a in 0..d {
                p[(a, h + s)] = reeb.xi[s][a].clone();
            }
        }
        let mut labels: Vec<String> = hor.iter().map(|&i| model.frame.labels()[i].clone()).collect();
        labels.extend(["xi1", "xi2", "xi3"].map(String::from));
        let frame = model.frame.change_frame_labeled(&p, labels)?;
        let metric = model.metric.clone();
        let metric_inv = metric.inverse()?;
        let g = Matrix::from_fn(d, d, |a, b| {
            if a < h && b < h {
                metric[(a, b)].clone()
            } else if a == b {
                -eps_rat(a - h)
            } else {
                Rat::zero()
            }
        });
        let g_inv = g.inverse()?;
        Ok(AdaptedModel {
            source: model.clone(),
            reeb: reeb.clone(),
            n: model.n,
            h,
            frame,
            metric,
            metric_inv,
            endo: model.endo.clone(),
            g,
            g_inv,
        })
    }

    /// Validation, Reeb solve and frame change in one step.
    pub fn build(model: &PqcModel) -> Result<Self, PqcError> {
        require_valid(model)?;
        let reeb = solve_reeb(model)?;
        Self::new(model, &reeb)
    }

    pub fn dim(&self) -> usize {
        self.h + 3
    }

    pub fn labels(&self) -> &[String] {
        self.frame.labels()
    }

    pub fn horizontal_labels(&self) -> Vec<String> {
        self.labels()[..self.h].to_vec()
    }

    pub fn xi(&self, s: usize) -> usize {
        self.h + s
    }

    /// `C^a_{bc}` in the adapted frame.
    pub fn c(&self, a: usize, b: usize, c: usize) -> &Rat {
        self.frame.c(a, b, c)
    }

    /// `dη_s(e_a, e_b) = -C^{ξ_s}_{ab}`.
    pub fn deta(&self, s: usize, a: usize, b: usize) -> Rat {
        -self.c(self.xi(s), a, b)
    }

    /// `dη_s` on `H`.
    pub fn contact_matrix(&self, s: usize) -> Matrix {
        Matrix::from_fn(self.h, self.h, |a, b| self.deta(s, a, b))
    }

    /// Horizontal block of `ad(e_a)`: `X ↦ [e_a, X]_H`.
    pub fn ad_h(&self, a: usize) -> Matrix {
        Matrix::from_fn(self.h, self.h, |i, j| self.c(i, a, j).clone())
    }

    /// `L_{ξ_t} I_s = D I_s - I_s D` with `D = ad(ξ_t)|H→H`.
    pub fn lie_endo(&self, t: usize, s: usize) -> Matrix {
        let d = self.ad_h(self.xi(t));
        d.commutator(&self.endo[s])
    }

    /// `ω_s` on `H` as a matrix, `ω_s(X, Y) = g(I_s X, Y)`.
    pub fn omega(&self, s: usize) -> Matrix {
        &self.endo[s].transpose() * &self.metric
    }

    /// `ω_s` as a 2-form on the full adapted frame, vanishing on `V`.
    pub fn omega_form(&self, s: usize) -> Form {
        Form::two_form(&self.embed_h(&self.omega(s)))
    }

    /// Pads an `H × H` matrix with zeros to the full frame.
    pub fn embed_h(&self, m: &Matrix) -> Matrix {
        let d = self.dim();
        Matrix::from_fn(d, d, |a, b| {
            if a < self.h && b < self.h {
                m[(a, b)].clone()
            } else {
                Rat::zero()
            }
        })
    }

    pub fn fmt_ix(&self, ix: &[usize]) -> String {
        fmt_tuple(self.labels(), ix)
    }
}

/// `ω_s(X, Y) = g(I_s X, Y)`, confirmed against `ω_s = dη_s|H / (-2ε_s)`.
pub fn fundamental_forms(am: &AdaptedModel) -> Result<[Matrix; 3], PqcError> {
    let labels = am.horizontal_labels();
    let mut out: [Matrix; 3] = std::array::from_fn(|_| Matrix::zeros(0, 0));
    for s in 0..3 {
        let via_g = am.omega(s);
        let via_d = am.contact_matrix(s).scale(&(Rat::from_integer((-2).into()) * eps_rat(s)).recip());
        eq_matrix(&format!("omega{}: g(I_s X, Y) vs d eta_s / (-2 eps_s)", s + 1), &via_g, &via_d, Some(&labels))
            .map_err(PqcError::ValidationFailed)?;
        out[s] = via_g;
    }
    Ok(out)
}

pub fn structure_ledger(am: &AdaptedModel) -> Ledger {
    let mut l = Ledger::new("structure");
    l.check(
        "thirteen",
        "omega_s = d eta_s|H / (-2 eps_s) = g(I_s ., .)",
        fundamental_forms(am).map(|_| ()).map_err(|e| e.to_string()),
    );
    let sig = am.g.signature();
    let want = (2 * am.n + 1, 2 * am.n + 2);
    l.check(
        "extended-signature",
        "signature of g|H + g|V is (2n+1, 2n+2)",
        if sig == want {
            Ok(())
        } else {
            Err(format!("{sig:?}"))
        },
    );
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{builtin_heisenberg, builtin_l0};
    use crate::scalar::int;

    #[test]
    fn builtins_validate() {
        for n in 1..=3 {
            assert!(validate_pqc(&builtin_heisenberg(n)).passed());
        }
        for c in [-2, 0, 1, 3] {
            let l = validate_pqc(&builtin_l0(&int(c)));
            assert!(l.passed(), "{l:?}");
        }
    }

    #[test]
    fn flipped_metric_entry_fails_param_at_s1_a1() {
        let mut m = builtin_heisenberg(1);
        m.metric[(2, 2)] = int(1);
        let l = validate_pqc(&m);
        let e = l.get("param.1").unwrap();
        assert!(e.failed());
        assert!(e.witness.as_ref().unwrap().starts_with("(s=1, a=1,"), "{e:?}");
    }

    #[test]
    fn heisenberg_reeb_is_central_basis() {
        let m = builtin_heisenberg(2);
        let r = solve_reeb(&m).unwrap();
        for s in 0..3 {
            assert_eq!(r.xi[s], crate::calculus::basis_vector(11, 8 + s));
        }
        assert_eq!(r.label, "pqc");
        assert!(reeb_ledger(&m, &r).passed());
    }

    #[test]
    fn l0_reeb_matches_frame() {
        let m = builtin_l0(&int(3));
        let r = solve_reeb(&m).unwrap();
        // ξ₁ = e6, ξ₂ = e7, ξ₃ = e5
        assert_eq!(r.xi[0], crate::calculus::basis_vector(7, 5));
        assert_eq!(r.xi[1], crate::calculus::basis_vector(7, 6));
        assert_eq!(r.xi[2], crate::calculus::basis_vector(7, 4));
        assert_eq!(r.label, DIM7_LABEL);
    }

    #[test]
    fn perturbed_vertical_constant_has_no_reeb() {
        let mut m = builtin_heisenberg(1);
        // [xi1, T] = xi1 gives d eta_1(xi1, T) = -1, which no horizontal shift of xi1 repairs
        // without breaking the cross condition.
        m.frame.set_bracket(4, 4, 0, int(1));
        assert!(matches!(solve_reeb(&m), Err(PqcError::NoReebSolution(_))));
    }

    #[test]
    fn fundamental_forms_l0() {
        let am = AdaptedModel::build(&builtin_l0(&int(3))).unwrap();
        let w = fundamental_forms(&am).unwrap();
        // ω₃ = γ¹² + γ³⁴
        assert_eq!(w[2][(0, 1)], int(1));
        assert_eq!(w[2][(2, 3)], int(1));
        assert_eq!(w[2][(0, 2)], int(0));
        assert!(structure_ledger(&am).passed());
    }
}
