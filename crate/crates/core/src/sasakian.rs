//! The para 3-Sasakian structure equations checked in a free graded-commutative
//! algebra, the hypersymplectic cone forms, and the flat / pqc-Einstein /
//! 3-Sasakian classifier for frame models.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{eps_rat, CYCLIC};
use crate::calculus::{ExteriorCalculus, Form, Poly};
use crate::check::eq_scalar;
use crate::connection::{build_connection, CanonicalConnection, TorsionData, TorsionParts};
use crate::curvature::{check_flat, scal_differential, CurvatureData, Flatness};
use crate::error::PqcError;
use crate::models::PqcModel;
use crate::report::Ledger;
use crate::scalar::{fmt_rat, int, Rat};
use crate::structure::AdaptedModel;

/// Generator names in normal order: `dt < η₁ < η₂ < η₃ < φ₁ < φ₂ < φ₃`.
pub const GENERATORS: [&str; 7] = ["dt", "eta1", "eta2", "eta3", "phi1", "phi2", "phi3"];
pub const DT: usize = 0;

pub fn eta(s: usize) -> usize {
    1 + s
}

pub fn phi(s: usize) -> usize {
    4 + s
}

fn is_odd(g: usize) -> bool {
    g < 4
}

/// Exponent per generator; odd generators appear at most once.
type Monomial = [u8; 7];

/// Normal-ordered product and whether it picked up a sign; `None` when an
/// odd generator repeats.
fn mono_mul(a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
    let mut out = [0u8; 7];
    for g in 0..7 {
        if is_odd(g) && a[g] + b[g] > 1 {
            return None;
        }
        out[g] = a[g] + b[g];
    }
    // only odd-odd transpositions cost a sign
    let swaps: usize = (0..4)
        .filter(|&gb| b[gb] == 1)
        .map(|gb| (gb + 1..4).filter(|&ga| a[ga] == 1).count())
        .sum();
    Some((out, swaps % 2 == 1))
}

fn t_poly() -> Poly {
    Poly::linear(1, 0, int(1))
}

/// Element of the free graded-commutative algebra on `dt`, `η_s` (degree 1)
/// and `φ_s` (degree 2) with coefficients in `ℚ[t]`, kept in normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalElement {
    terms: BTreeMap<Monomial, Poly>,
}

impl FormalElement {
    pub fn zero() -> Self {
        FormalElement { terms: BTreeMap::new() }
    }

    pub fn coefficient(p: Poly) -> Self {
        let mut e = Self::zero();
        e.add_term([0; 7], p);
        e
    }

    pub fn constant(c: Rat) -> Self {
        Self::coefficient(Poly::constant(1, c))
    }

    /// The coordinate `t` on the cone factor.
    pub fn t() -> Self {
        Self::coefficient(t_poly())
    }

    pub fn generator(g: usize) -> Self {
        let mut m = [0; 7];
        m[g] = 1;
        let mut e = Self::zero();
        e.add_term(m, Poly::constant(1, int(1)));
        e
    }

    fn monomial(m: Monomial) -> Self {
        let mut e = Self::zero();
        e.add_term(m, Poly::constant(1, int(1)));
        e
    }

    fn add_term(&mut self, m: Monomial, p: Poly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => &old + &p,
            None => p,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero();
        for (m, p) in &self.terms {
            out.add_term(*m, p.scale(c));
        }
        out
    }

    /// Whether every term has odd total degree.
    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| (0..4).map(|g| m[g] as usize).sum::<usize>() % 2 == 1)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `d` extended from `rules` as a degree +1 derivation, with `d t = dt`.
    pub fn d(&self, rules: &DgaRules) -> Self {
        let dt = Self::generator(DT);
        let mut out = Self::zero();
        for (m, p) in &self.terms {
            let dp = p.derivative(0);
            if !dp.is_zero() {
                out = &out + &(&Self::coefficient(dp) * &(&dt * &Self::monomial(*m)));
            }
            out = &out + &(&Self::coefficient(p.clone()) * &rules.d_monomial(m));
        }
        out
    }
}

impl fmt::Display for FormalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = vec!["t".to_string()];
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, p)| {
                let gens: Vec<&str> = (0..7).flat_map(|g| std::iter::repeat_n(GENERATORS[g], m[g] as usize)).collect();
                let coef = p.describe(&names);
                if gens.is_empty() {
                    format!("({coef})")
                } else {
                    format!("({coef})*{}", gens.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &FormalElement {
    type Output = FormalElement;
    fn add(self, rhs: &FormalElement) -> FormalElement {
        let mut out = self.clone();
        for (m, p) in &rhs.terms {
            out.add_term(*m, p.clone());
        }
        out
    }
}

impl Sub for &FormalElement {
    type Output = FormalElement;
    fn sub(self, rhs: &FormalElement) -> FormalElement {
        self + &(-rhs)
    }
}

impl Neg for &FormalElement {
    type Output = FormalElement;
    fn neg(self) -> FormalElement {
        self.scale(&int(-1))
    }
}

impl Mul for &FormalElement {
    type Output = FormalElement;
    fn mul(self, rhs: &FormalElement) -> FormalElement {
        let mut out = FormalElement::zero();
        for (ma, pa) in &self.terms {
            for (mb, pb) in &rhs.terms {
                if let Some((m, neg)) = mono_mul(ma, mb) {
                    let p = pa * pb;
                    out.add_term(m, if neg { -&p } else { p });
                }
            }
        }
        out
    }
}

/// Values of `d` on the generators; `d(dt) = 0` always.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgaRules {
    pub d_eta: [FormalElement; 3],
    pub d_phi: [FormalElement; 3],
}

impl DgaRules {
    /// `dη_i = -2ε_iφ_i - 2ε_iη_j∧η_k`, `dφ_i = 2ε_jφ_j∧η_k - 2ε_kφ_k∧η_j`.
    pub fn para_3_sasakian() -> Self {
        let g = FormalElement::generator;
        DgaRules {
            d_eta: std::array::from_fn(|s| {
                let (i, j, k) = CYCLIC[s];
                let e = eps_rat(i) * int(-2);
                &g(phi(i)).scale(&e) + &(&g(eta(j)) * &g(eta(k))).scale(&e)
            }),
            d_phi: std::array::from_fn(|s| {
                let (_, j, k) = CYCLIC[s];
                &(&g(phi(j)) * &g(eta(k))).scale(&(eps_rat(j) * int(2))) - &(&g(phi(k)) * &g(eta(j))).scale(&(eps_rat(k) * int(2)))
            }),
        }
    }

    fn d_generator(&self, g: usize) -> FormalElement {
        match g {
            DT => FormalElement::zero(),
            1..=3 => self.d_eta[g - 1].clone(),
            _ => self.d_phi[g - 4].clone(),
        }
    }

    fn d_monomial(&self, m: &Monomial) -> FormalElement {
        let gens: Vec<usize> = (0..7).flat_map(|g| std::iter::repeat_n(g, m[g] as usize)).collect();
        let product = |gs: &[usize]| {
            gs.iter()
                .fold(FormalElement::constant(int(1)), |acc, &g| &acc * &FormalElement::generator(g))
        };
        let mut out = FormalElement::zero();
        for (pos, &g) in gens.iter().enumerate() {
            let term = &(&product(&gens[..pos]) * &self.d_generator(g)) * &product(&gens[pos + 1..]);
            let odd_prefix = gens[..pos].iter().filter(|&&x| is_odd(x)).count() % 2 == 1;
            out = if odd_prefix { &out - &term } else { &out + &term };
        }
        out
    }
}

/// `F_i = t²(φ_i + η_j∧η_k) + ε_i t η_i∧dt`.
pub fn cone_two_form(s: usize) -> FormalElement {
    let g = FormalElement::generator;
    let (i, j, k) = CYCLIC[s];
    let t = FormalElement::t();
    let t2 = &t * &t;
    let horizontal = &g(phi(i)) + &(&g(eta(j)) * &g(eta(k)));
    &(&t2 * &horizontal) + &(&t * &(&g(eta(i)) * &g(DT))).scale(&eps_rat(i))
}

/// `F = -Σ_s ε_s F_s∧F_s`.
pub fn cone_four_form() -> FormalElement {
    (0..3).fold(FormalElement::zero(), |acc, s| {
        let f = cone_two_form(s);
        &acc - &(&f * &f).scale(&eps_rat(s))
    })
}

/// `Ω = -φ₁∧φ₁ - φ₂∧φ₂ + φ₃∧φ₃`.
pub fn formal_four_form() -> FormalElement {
    (0..3).fold(FormalElement::zero(), |acc, s| {
        let f = FormalElement::generator(phi(s));
        &acc - &(&f * &f).scale(&eps_rat(s))
    })
}

/// `α_i = -2ε_jη_i`, the 3-Sasakian connection forms at `λ = 2`.
pub fn sasakian_alpha(s: usize) -> FormalElement {
    let (i, j, _) = CYCLIC[s];
    FormalElement::generator(eta(i)).scale(&(eps_rat(j) * int(-2)))
}

/// Right side of `dη_i = -2ε_iω_i + η_j∧α_k + ε_jη_k∧α_j + ε_iλη_j∧η_k`.
fn streq_rhs(s: usize, alpha: &[FormalElement; 3], lambda: &Rat) -> FormalElement {
    let g = FormalElement::generator;
    let (i, j, k) = CYCLIC[s];
    let mut out = g(phi(i)).scale(&(eps_rat(i) * int(-2)));
    out = &out + &(&g(eta(j)) * &alpha[k]);
    out = &out + &(&g(eta(k)) * &alpha[j]).scale(&eps_rat(j));
    &out + &(&g(eta(j)) * &g(eta(k))).scale(&(eps_rat(i) * lambda))
}

/// Right side of the `ε_i dω_i` equation with `ρ_s|H = -λω_s`, no mixed
/// Ricci components and `dλ = 0`.
fn str2_rhs(s: usize, alpha: &[FormalElement; 3], lambda: &Rat) -> FormalElement {
    let g = FormalElement::generator;
    let (i, j, k) = CYCLIC[s];
    let rho = |t: usize| g(phi(t)).scale(&-lambda);
    let a = &alpha[k].scale(&-eps_rat(j)) + &g(eta(k)).scale(&(eps_rat(k) * lambda));
    let b = &alpha[j].scale(&eps_rat(i)) - &g(eta(j)).scale(&(eps_rat(j) * lambda));
    let mut out = &(&g(phi(j)) * &a) + &(&g(phi(k)) * &b);
    out = &out - &(&rho(k) * &g(eta(j))).scale(&eps_rat(j));
    &out + &(&rho(j) * &g(eta(k))).scale(&eps_rat(k))
}

fn vanishes(e: &FormalElement) -> Result<(), String> {
    if e.is_zero() {
        Ok(())
    } else {
        Err(format!("nonzero normal form: {e}"))
    }
}

/// Runs every symbolic check with the 3-Sasakian rule set.
pub fn formal_dga_verify() -> Ledger {
    formal_dga_verify_with(&DgaRules::para_3_sasakian())
}

/// The same checks against an arbitrary rule set, so a wrong rule shows up
/// as a residue instead of being absorbed.
pub fn formal_dga_verify_with(rules: &DgaRules) -> Ledger {
    let mut l = Ledger::new("formal-sasakian");
    let g = FormalElement::generator;
    let two = int(2);
    l.check("d2-t", "d(d t) = 0", vanishes(&FormalElement::t().d(rules).d(rules)));
    for s in 0..3 {
        let (i, j, k) = CYCLIC[s];
        l.check(
            &format!("d2-eta{}", i + 1),
            "d(d eta_i) = 0 with d eta_i = -2 eps_i phi_i - 2 eps_i eta_j ^ eta_k",
            vanishes(&g(eta(i)).d(rules).d(rules)),
        );
        l.check(
            &format!("d2-phi{}", i + 1),
            "d(d phi_i) = 0 with d phi_i = 2 eps_j phi_j ^ eta_k - 2 eps_k phi_k ^ eta_j",
            vanishes(&g(phi(i)).d(rules).d(rules)),
        );
        let f = cone_two_form(s);
        let df = f.d(rules);
        let t = FormalElement::t();
        let bracket = &(&g(phi(i)).scale(&two) + &(&g(eta(j)) * &g(eta(k))).scale(&two)) + &g(eta(i)).d(rules).scale(&eps_rat(i));
        let expanded = &(&(&t * &g(DT)) * &bracket) + &(&(&t * &t) * &(&g(phi(i)) + &(&g(eta(j)) * &g(eta(k)))).d(rules));
        l.check(
            &format!("dfcone{}", i + 1),
            "d F_i = t dt ^ (2 phi_i + 2 eta_j ^ eta_k + eps_i d eta_i) + t^2 d(phi_i + eta_j ^ eta_k)",
            vanishes(&(&df - &expanded)),
        );
        l.check(
            &format!("dF{}", i + 1),
            "d F_i = 0 for F_i = t^2 (phi_i + eta_j ^ eta_k) + eps_i t eta_i ^ dt",
            vanishes(&df),
        );
    }
    l.check(
        "dF",
        "d F = 0 for F = -sum_s eps_s F_s ^ F_s, using graded commutativity only",
        vanishes(&cone_four_form().d(rules)),
    );
    l.check(
        "dOmega",
        "d Omega = 0 for Omega = -phi_1 ^ phi_1 - phi_2 ^ phi_2 + phi_3 ^ phi_3",
        vanishes(&formal_four_form().d(rules)),
    );
    let alpha: [FormalElement; 3] = std::array::from_fn(sasakian_alpha);
    for s in 0..3 {
        let (i, _, _) = CYCLIC[s];
        l.check(
            &format!("eta3sas-streq{}", i + 1),
            "alpha_i = -2 eps_j eta_i and lambda = 2 turn d eta_i = -2 eps_i omega_i + eta_j ^ alpha_k + eps_j eta_k ^ alpha_j + eps_i lambda eta_j ^ eta_k into the rule for d eta_i",
            vanishes(&(&streq_rhs(s, &alpha, &two) - &rules.d_eta[i])),
        );
        l.check(
            &format!("eta3sas-str2{}", i + 1),
            "alpha_i = -2 eps_j eta_i, rho_s = -2 omega_s and lambda = 2 turn the eps_i d omega_i equation into the rule for d phi_i",
            vanishes(&(&str2_rhs(s, &alpha, &two) - &rules.d_phi[i].scale(&eps_rat(i)))),
        );
    }
    l
}

/// `16n(n+2)`, the scalar curvature of a para 3-Sasakian structure.
pub fn sasakian_scal_requirement(n: usize) -> Rat {
    let n = n as i64;
    int(16 * n * (n + 2))
}

/// `8n(n+2)λ`.
pub fn scal_from_lambda(n: usize, lambda: &Rat) -> Rat {
    let n = n as i64;
    int(8 * n * (n + 2)) * lambda
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub id: String,
    pub holds: bool,
    pub detail: String,
}

impl Criterion {
    fn new(id: &str, res: Result<String, String>) -> Self {
        let (holds, detail) = match res {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Criterion {
            id: id.into(),
            holds,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EinsteinVerdict {
    pub einstein: bool,
    pub trace_free_ricci: bool,
    pub torsion_vanishes: bool,
    pub scal: Rat,
}

/// `Ric|H = (Scal/4n) g` against `τ = μ = 0`; the two must agree. For
/// `n = 1`, `μ` does not enter the Ricci tensor.
pub fn einstein_check(am: &AdaptedModel, parts: &TorsionParts, curv: &CurvatureData) -> Result<EinsteinVerdict, PqcError> {
    let h = am.h;
    let c = &curv.scal / int(4 * am.n as i64);
    let off = (0..h)
        .flat_map(|x| (0..h).map(move |y| (x, y)))
        .find(|&(x, y)| curv.ric[(x, y)] != &c * &am.metric[(x, y)]);
    let trace_free_ricci = off.is_none();
    let tau_zero = parts.tau.is_zero();
    let mu_zero = am.n == 1 || parts.mu.is_zero();
    let torsion_vanishes = tau_zero && mu_zero;
    if trace_free_ricci != torsion_vanishes {
        let ric = match off {
            Some((x, y)) => format!(
                "Ric - (Scal/4n) g at {} = {}",
                am.fmt_ix(&[x, y]),
                fmt_rat(&(&curv.ric[(x, y)] - &c * &am.metric[(x, y)]))
            ),
            None => "Ric|H is a multiple of g".into(),
        };
        return Err(PqcError::EinsteinInconsistent(format!(
            "{ric}, but tau {} 0 and mu {} 0",
            if tau_zero { "=" } else { "!=" },
            if mu_zero { "=" } else { "!=" }
        )));
    }
    Ok(EinsteinVerdict {
        einstein: trace_free_ricci,
        trace_free_ricci,
        torsion_vanishes,
        scal: curv.scal.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SasakianVerdict {
    pub holds: bool,
    pub criteria: Vec<Criterion>,
}

fn form_diff(lhs: &Form, rhs: &Form, labels: &[String]) -> Result<String, String> {
    let diff = lhs - rhs;
    let first = diff.terms().next().map(|(ix, _)| ix);
    match first {
        None => Ok("holds".into()),
        Some(ix) => {
            let names: Vec<&str> = ix.iter().map(|&a| labels[a].as_str()).collect();
            Err(format!(
                "at ({}): lhs = {}, rhs = {}",
                names.join(", "),
                fmt_rat(&lhs.coefficient(&ix)),
                fmt_rat(&rhs.coefficient(&ix))
            ))
        }
    }
}

/// Checks the 3-Sasakian structure equations, `λ = 2`, `Scal = 16n(n+2)`,
/// `α_i = -2ε_jη_i` and `τ = μ = 0` on a frame model.
pub fn sasakian_check(am: &AdaptedModel, conn: &CanonicalConnection, parts: &TorsionParts, curv: &CurvatureData) -> SasakianVerdict {
    let dim = am.dim();
    let labels = am.labels();
    let ext = ExteriorCalculus::new(&am.frame);
    let eta_f = |s: usize| Form::basis(dim, am.xi(s));
    let omega: [Form; 3] = std::array::from_fn(|s| am.omega_form(s));
    let mut criteria = Vec::new();

    let d_eta = CYCLIC.iter().try_for_each(|&(i, j, k)| {
        let e = eps_rat(i) * int(-2);
        let rhs = &omega[i].scale(&e) + &eta_f(j).wedge(&eta_f(k)).scale(&e);
        form_diff(ext.d_basis(am.xi(i)), &rhs, labels)
            .map(|_| ())
            .map_err(|w| format!("d eta{} {w}", i + 1))
    });
    criteria.push(Criterion::new(
        "d-eta",
        d_eta.map(|_| "d eta_i = -2 eps_i omega_i - 2 eps_i eta_j ^ eta_k".into()),
    ));

    let d_omega = CYCLIC.iter().try_for_each(|&(i, j, k)| {
        let rhs = &omega[j].wedge(&eta_f(k)).scale(&(eps_rat(j) * int(2))) - &omega[k].wedge(&eta_f(j)).scale(&(eps_rat(k) * int(2)));
        form_diff(&ext.d(&omega[i]), &rhs, labels)
            .map(|_| ())
            .map_err(|w| format!("d omega{} {w}", i + 1))
    });
    criteria.push(Criterion::new(
        "d-omega",
        d_omega.map(|_| "d omega_i = 2 eps_j omega_j ^ eta_k - 2 eps_k omega_k ^ eta_j".into()),
    ));

    let lambda_ok = conn.lambda == int(2);
    criteria.push(Criterion::new(
        "lambda",
        if lambda_ok { Ok } else { Err }(format!("lambda = {} (required 2)", fmt_rat(&conn.lambda))),
    ));

    let need = sasakian_scal_requirement(am.n);
    criteria.push(Criterion::new(
        "scal",
        if curv.scal == need { Ok } else { Err }(format!("Scal = {} (required 16n(n+2) = {})", fmt_rat(&curv.scal), fmt_rat(&need))),
    ));

    let alpha = CYCLIC.iter().try_for_each(|&(i, j, _)| {
        let bad = (0..dim).find(|&a| {
            let want = if a == am.xi(i) { eps_rat(j) * int(-2) } else { Rat::zero() };
            conn.alpha[i][a] != want
        });
        match bad {
            None => Ok(()),
            Some(a) => Err(format!("alpha{}({}) = {}", i + 1, labels[a], fmt_rat(&conn.alpha[i][a]))),
        }
    });
    criteria.push(Criterion::new("alpha", alpha.map(|_| "alpha_i = -2 eps_j eta_i".into())));

    let torsion_ok = parts.tau.is_zero() && parts.mu.is_zero();
    criteria.push(Criterion::new(
        "torsion",
        if torsion_ok { Ok } else { Err }(format!(
            "tau {} 0, mu {} 0",
            if parts.tau.is_zero() { "=" } else { "!=" },
            if parts.mu.is_zero() { "=" } else { "!=" }
        )),
    ));

    SasakianVerdict {
        holds: criteria.iter().all(|c| c.holds),
        criteria,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    FlatHeisenberg,
    PqcEinstein,
    Para3SasakianCandidate,
    Generic,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::FlatHeisenberg => "FlatHeisenberg",
            Label::PqcEinstein => "PqcEinstein",
            Label::Para3SasakianCandidate => "Para3SasakianCandidate",
            Label::Generic => "Generic",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationVerdict {
    pub label: Label,
    /// Criteria that fired, always starting with `τ`, `μ`, `λ`, `Scal`.
    pub evidence: Vec<String>,
    pub tau_zero: bool,
    pub mu_zero: bool,
    pub lambda: Rat,
    pub scal: Rat,
}

pub fn classify_data(
    am: &AdaptedModel,
    conn: &CanonicalConnection,
    tors: &TorsionData,
    curv: &CurvatureData,
) -> Result<ClassificationVerdict, PqcError> {
    let p = &tors.parts;
    let zero_or_not = |z: bool| if z { "= 0" } else { "!= 0" };
    let mut evidence = vec![
        format!("tau {}", zero_or_not(p.tau.is_zero())),
        format!("mu {}", zero_or_not(p.mu.is_zero())),
        format!("lambda = {}", fmt_rat(&conn.lambda)),
        format!("Scal = {}", fmt_rat(&curv.scal)),
    ];
    let flat = check_flat(am, curv, tors)?;
    let einstein = einstein_check(am, p, curv)?;
    let sasakian = sasakian_check(am, conn, p, curv);
    if flat == Flatness::FlatHeisenberg {
        evidence.push("flat: R|H = 0, R = 0, T(xi_s, .) = 0".into());
    }
    if einstein.einstein {
        evidence.push("pqc-Einstein: Ric|H = (Scal/4n) g and tau = mu = 0".into());
    }
    let failing: Vec<&str> = sasakian.criteria.iter().filter(|c| !c.holds).map(|c| c.id.as_str()).collect();
    if sasakian.holds {
        evidence.push("para 3-Sasakian structure equations with lambda = 2".into());
    } else {
        evidence.push(format!("para 3-Sasakian criteria failing: {}", failing.join(", ")));
    }
    let label = if flat == Flatness::FlatHeisenberg {
        Label::FlatHeisenberg
    } else if sasakian.holds {
        Label::Para3SasakianCandidate
    } else if einstein.einstein {
        Label::PqcEinstein
    } else {
        Label::Generic
    };
    Ok(ClassificationVerdict {
        label,
        evidence,
        tau_zero: p.tau.is_zero(),
        mu_zero: p.mu.is_zero(),
        lambda: conn.lambda.clone(),
        scal: curv.scal.clone(),
    })
}

/// Runs the pipeline from a raw model up to the verdict.
pub fn classify(model: &PqcModel) -> Result<ClassificationVerdict, PqcError> {
    let am = AdaptedModel::build(model)?;
    let (conn, tors) = build_connection(&am)?;
    let curv = CurvatureData::compute(&am, &conn, &tors);
    classify_data(&am, &conn, &tors, &curv)
}

/// Consistency checks behind the classifier.
pub fn classification_ledger(am: &AdaptedModel, conn: &CanonicalConnection, tors: &TorsionData, curv: &CurvatureData) -> Ledger {
    let mut l = Ledger::new("classification");
    l.check(
        "flat-consistency",
        "R|H = 0 implies R = 0, T(xi_s, .) = 0, Scal = 0",
        check_flat(am, curv, tors).map(|_| ()).map_err(|e| e.to_string()),
    );
    let einstein = einstein_check(am, &tors.parts, curv);
    l.check(
        "einstein-equivalence",
        "Ric|H = (Scal/4n) g iff tau = mu = 0",
        einstein.as_ref().map(|_| ()).map_err(|e| e.to_string()),
    );
    l.check(
        "scal-lambda",
        "Scal = 8n(n+2) lambda",
        eq_scalar("Scal", &curv.scal, &scal_from_lambda(am.n, &conn.lambda)),
    );
    let anchor = "pqc-Einstein with n > 1 implies d Scal = 0 and [xi_s, xi_t] has no horizontal part";
    match einstein {
        Ok(v) if v.einstein && am.n > 1 => {
            let h = am.h;
            let bracket = (0..3)
                .flat_map(|s| (0..3).map(move |t| (s, t)))
                .find_map(|(s, t)| {
                    (0..h)
                        .find(|&x| !am.c(x, am.xi(s), am.xi(t)).is_zero())
                        .map(|x| format!("[xi{}, xi{}] has {} component {}", s + 1, t + 1, am.labels()[x], fmt_rat(am.c(x, am.xi(s), am.xi(t)))))
                });
            let ds = scal_differential(am, curv);
            let res = match (bracket, ds.iter().position(|v| !v.is_zero())) {
                (Some(w), _) => Err(w),
                (None, Some(a)) => Err(format!("d Scal({}) = {}", am.labels()[a], fmt_rat(&ds[a]))),
                (None, None) => Ok(()),
            };
            l.check("einstein-consequences", anchor, res);
        }
        _ => l.skip("einstein-consequences", anchor, "not pqc-Einstein with n > 1"),
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{builtin_heisenberg, builtin_l0, conformal::conformal_heisenberg, GaugeTransform};

    fn g(i: usize) -> FormalElement {
        FormalElement::generator(i)
    }

    #[test]
    fn graded_commutativity() {
        assert_eq!(&g(eta(0)) * &g(eta(1)), -&(&g(eta(1)) * &g(eta(0))));
        assert!((&g(eta(2)) * &g(eta(2))).is_zero());
        assert_eq!(&g(phi(0)) * &g(eta(0)), &g(eta(0)) * &g(phi(0)));
        assert!(!(&g(phi(1)) * &g(phi(1))).is_zero());
        assert_eq!(&g(DT) * &g(eta(0)), -&(&g(eta(0)) * &g(DT)));
    }

    #[test]
    fn every_formal_check_vanishes() {
        let l = formal_dga_verify();
        let bad: Vec<_> = l.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert_eq!(l.entries.len(), 1 + 3 * 4 + 2 + 6);
    }

    #[test]
    fn a_wrong_rule_leaves_a_residue() {
        let mut rules = DgaRules::para_3_sasakian();
        rules.d_eta[0] = g(phi(0)).scale(&int(-2));
        let l = formal_dga_verify_with(&rules);
        let w = l.get("d2-eta1").unwrap().witness.clone().unwrap();
        assert!(w.contains("phi2^eta3") || w.contains("eta3^phi2"), "{w}");
        assert!(l.get("dF1").unwrap().failed());
    }

    #[test]
    fn d_of_t_is_dt() {
        let rules = DgaRules::para_3_sasakian();
        assert_eq!(FormalElement::t().d(&rules), g(DT));
        let t3 = &FormalElement::t() * &(&FormalElement::t() * &FormalElement::t());
        assert_eq!(t3.d(&rules), &(&FormalElement::t() * &FormalElement::t()).scale(&int(3)) * &g(DT));
    }

    #[test]
    fn scal_requirement_matches_both_formulas() {
        for (n, v) in [(1, 48), (2, 128), (3, 240)] {
            assert_eq!(sasakian_scal_requirement(n), int(v));
            assert_eq!(scal_from_lambda(n, &int(2)), int(v));
        }
    }

    fn pipeline(m: &PqcModel) -> (AdaptedModel, CanonicalConnection, TorsionData, CurvatureData) {
        let am = AdaptedModel::build(m).unwrap();
        let (c, t) = build_connection(&am).unwrap();
        let cd = CurvatureData::compute(&am, &c, &t);
        (am, c, t, cd)
    }

    #[test]
    fn heisenberg_is_einstein_but_not_sasakian() {
        let (am, c, t, cd) = pipeline(&builtin_heisenberg(1));
        let e = einstein_check(&am, &t.parts, &cd).unwrap();
        assert!(e.einstein && e.scal.is_zero());
        let s = sasakian_check(&am, &c, &t.parts, &cd);
        assert!(!s.holds);
        let failing: Vec<&str> = s.criteria.iter().filter(|c| !c.holds).map(|c| c.id.as_str()).collect();
        assert!(failing.contains(&"lambda") && failing.contains(&"d-eta"), "{failing:?}");
        assert!(s.criteria.iter().any(|c| c.id == "torsion" && c.holds));
    }

    #[test]
    fn l0_is_einstein_but_not_sasakian() {
        let (am, c, t, cd) = pipeline(&builtin_l0(&int(3)));
        assert!(einstein_check(&am, &t.parts, &cd).unwrap().einstein);
        let s = sasakian_check(&am, &c, &t.parts, &cd);
        assert!(!s.holds);
        assert!(s.criteria.iter().any(|c| c.id == "lambda" && !c.holds));
    }

    #[test]
    fn corrupted_torsion_is_flagged() {
        let (am, _, mut t, cd) = pipeline(&builtin_heisenberg(1));
        t.parts.tau[(0, 0)] = int(1);
        assert!(matches!(einstein_check(&am, &t.parts, &cd), Err(PqcError::EinsteinInconsistent(_))));
    }

    #[test]
    fn curved_model_is_generic() {
        let (am, c, t, cd) = pipeline(&conformal_heisenberg(2, &int(1)));
        let e = einstein_check(&am, &t.parts, &cd).unwrap();
        assert!(!e.einstein);
        let v = classify_data(&am, &c, &t, &cd).unwrap();
        assert_eq!(v.label, Label::Generic);
        assert_eq!(v.evidence[0], "tau != 0");
        assert!(classification_ledger(&am, &c, &t, &cd).passed());
    }

    #[test]
    fn flat_models_classify_as_flat_with_einstein_evidence() {
        let gauged = GaugeTransform::random(&builtin_heisenberg(1), 11, None)
            .unwrap()
            .apply(&builtin_heisenberg(1))
            .unwrap();
        for m in [builtin_heisenberg(1), builtin_heisenberg(2), builtin_l0(&int(3)), gauged] {
            let v = classify(&m).unwrap();
            assert_eq!(v.label, Label::FlatHeisenberg, "{}", m.name);
            assert!(v.evidence.iter().any(|e| e.starts_with("pqc-Einstein")));
            assert_eq!(&v.evidence[..4], ["tau = 0", "mu = 0", "lambda = 0", "Scal = 0"]);
            let (am, c, t, cd) = pipeline(&m);
            let l = classification_ledger(&am, &c, &t, &cd);
            assert!(l.passed(), "{l:#?}");
        }
    }
}
