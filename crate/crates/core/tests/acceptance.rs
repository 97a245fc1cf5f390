//! One line per acceptance criterion; exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_traits::Zero;

use pqc_core::connection::xi_torsion_form;
use pqc_core::curvature::{curvature_ledgers, CurvatureData};
use pqc_core::error::PqcError;
use pqc_core::forms::recover_torsion_from_d_omega;
use pqc_core::models::conformal::conformal_heisenberg;
use pqc_core::models::coordinates::{heisenberg_coordinate_check, heisenberg_coordinate_check_with, bracket_table_frame_fields};
use pqc_core::models::{builtin_heisenberg, builtin_l0, derive_structure_from_contact, GaugeTransform, PqcModel};
use pqc_core::pipeline::Analysis;
use pqc_core::report::Ledger;
use pqc_core::sasakian::{classify_data, formal_dga_verify, sasakian_scal_requirement, scal_from_lambda, Label};
use pqc_core::scalar::{fmt_rat, int, Rat};
use pqc_core::structure::validate_pqc;

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn analyse(m: &PqcModel) -> Result<Analysis, String> {
    Analysis::build(m).map_err(|e| format!("{}: {e}", m.name))
}

fn failures(ls: &[Ledger]) -> Vec<String> {
    ls.iter()
        .flat_map(|l| l.failures().map(move |e| format!("{}/{}: {}", l.suite, e.id, e.witness.clone().unwrap_or_default())))
        .collect()
}

fn flat_heisenberg(n: usize) -> Result<Duration, String> {
    let start = Instant::now();
    let m = builtin_heisenberg(n);
    let a = analyse(&m)?;
    let v = classify_data(&a.am, &a.conn, &a.tors, &a.curv).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let dim = a.am.dim();
    ensure(a.curv.r.is_zero(), || format!("n={n}: R has a nonzero component among all {dim}^4"))?;
    for s in 0..3 {
        ensure(xi_torsion_form(&a.am, &a.tors, s).is_zero(), || format!("n={n}: T(xi{}, X) != 0", s + 1))?;
    }
    ensure(a.tors.parts.tau.is_zero() && a.tors.parts.mu.is_zero(), || format!("n={n}: tau or mu nonzero"))?;
    ensure(a.conn.lambda.is_zero(), || format!("n={n}: lambda = {}", fmt_rat(&a.conn.lambda)))?;
    ensure(a.curv.scal.is_zero(), || format!("n={n}: Scal = {}", fmt_rat(&a.curv.scal)))?;
    ensure(v.label == Label::FlatHeisenberg, || format!("n={n}: classified {}", v.label))?;
    Ok(elapsed)
}

fn criterion_1() -> Outcome {
    let t1 = flat_heisenberg(1)?;
    let t2 = flat_heisenberg(2)?;
    ensure(t1 < Duration::from_secs(1), || format!("n=1 took {:.2} s (limit 1 s)", t1.as_secs_f64()))?;
    ensure(t2 < Duration::from_secs(30), || format!("n=2 took {:.2} s (limit 30 s)", t2.as_secs_f64()))?;
    Ok(format!(
        "R = 0, T(xi, X) = 0, tau = mu = lambda = Scal = 0, FlatHeisenberg for n = 1, 2 ({:.2} s, {:.2} s)",
        t1.as_secs_f64(),
        t2.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    for c in [int(1), int(3)] {
        let m = builtin_l0(&c);
        let a = analyse(&m)?;
        let dim = a.am.dim();
        let hor = m.horizontal();
        // gamma^4 read off the original coordinates of each adapted vector
        let gamma4 = |x: usize| -> Rat {
            if x < a.am.h {
                if hor[x] == 3 {
                    int(1)
                } else {
                    Rat::zero()
                }
            } else {
                a.am.reeb.xi[x - a.am.h][3].clone()
            }
        };
        for x in 0..dim {
            let want = -&c * gamma4(x);
            ensure(a.conn.alpha[1][x] == want, || {
                format!("c={}: alpha2({}) = {}, want {}", fmt_rat(&c), a.am.labels()[x], fmt_rat(&a.conn.alpha[1][x]), fmt_rat(&want))
            })?;
            ensure(a.conn.alpha[0][x].is_zero() && a.conn.alpha[2][x].is_zero(), || {
                format!("c={}: alpha1 or alpha3 nonzero on {}", fmt_rat(&c), a.am.labels()[x])
            })?;
        }
        ensure(a.curv.r.is_zero(), || format!("c={}: R != 0", fmt_rat(&c)))?;
        for s in 0..3 {
            ensure(a.tors.parts.endomorphism(&a.am, s).is_zero(), || format!("c={}: torsion endomorphism T_xi{} != 0", fmt_rat(&c), s + 1))?;
        }
        let moving = (0..dim).any(|p| (0..dim).any(|q| (0..dim).any(|r| !a.conn.gamma(p, q, r).is_zero())));
        ensure(moving, || format!("c={}: every nabla of the frame vanishes", fmt_rat(&c)))?;
    }
    Ok("alpha1 = alpha3 = 0, alpha2 = -c gamma^4, R = 0, torsion endomorphism 0, frame not parallel, c = 1, 3".into())
}

const RICCI_IDENTITIES: [&str; 9] = ["ricci", "ricciformf", "riccitau", "riccizeta", "scaltor", "torv", "vertor", "ricciformv", "ricvert1"];
const SYMMETRIES: [&str; 4] = ["ric-sym", "zeta-sym", "rho-type", "varrho-type"];

/// `Σ g^{ab} ρ_s(I_s e_a, e_b)`.
fn rho_trace(a: &Analysis, s: usize) -> Rat {
    let h = a.am.h;
    let mut acc = Rat::zero();
    for x in 0..h {
        for y in 0..h {
            let w = &a.am.metric_inv[(x, y)];
            if w.is_zero() {
                continue;
            }
            for c in 0..h {
                acc += w * &a.am.endo[s][(c, x)] * &a.curv.rho[s][(c, y)];
            }
        }
    }
    acc
}

fn ricci_identities_on(m: &PqcModel) -> Result<(), String> {
    let a = analyse(m)?;
    let ls = curvature_ledgers(&a.am, &a.conn, &a.curv, &a.tors);
    let ricci = &ls[0];
    for id in RICCI_IDENTITIES.iter().chain(SYMMETRIES.iter()) {
        let e = ricci.get(id).ok_or_else(|| format!("{}: no entry {id}", m.name))?;
        ensure(!e.failed(), || format!("{}: {id} fails: {}", m.name, e.witness.clone().unwrap_or_default()))?;
    }
    let n = a.am.n;
    ensure(a.curv.scal == scal_from_lambda(n, &a.conn.lambda), || format!("{}: Scal != 8n(n+2) lambda", m.name))?;
    for s in 0..3 {
        let rhs = int(2 * (n as i64 + 2)) * rho_trace(&a, s);
        ensure(a.curv.scal == rhs, || {
            format!("{}: Scal = {} but 2(n+2) rho{}(I e_a, e_a) = {}", m.name, fmt_rat(&a.curv.scal), s + 1, fmt_rat(&rhs))
        })?;
    }
    Ok(())
}

fn gauge_family(m: &PqcModel, count: u64) -> Result<Vec<PqcModel>, String> {
    (1..=count)
        .map(|seed| {
            let rescale = if seed % 2 == 0 { Some(int(2)) } else { None };
            GaugeTransform::random(m, seed, rescale)
                .and_then(|t| t.apply(m))
                .map_err(|e| format!("{} seed {seed}: {e}", m.name))
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let bases = [builtin_heisenberg(1), builtin_l0(&int(3))];
    let mut count = 0;
    for b in &bases {
        ricci_identities_on(b)?;
        count += 1;
        for g in gauge_family(b, 20)? {
            ricci_identities_on(&g)?;
            count += 1;
        }
    }
    ricci_identities_on(&builtin_heisenberg(2))?;
    count += 1;
    Ok(format!(
        "nine Ricci identities and four symmetry claims, Scal = 8n(n+2) lambda = 2(n+2) rho_s(I_s e_a, e_a) for s = 1, 2, 3, on {count} models (built-ins and 20 gauge transforms of each)"
    ))
}

fn criterion_4() -> Outcome {
    let mut models = vec![builtin_heisenberg(1), builtin_heisenberg(2), builtin_l0(&int(1)), builtin_l0(&int(3))];
    models.push(conformal_heisenberg(1, &int(1)));
    models.push(conformal_heisenberg(2, &int(1)));
    models.extend(gauge_family(&builtin_heisenberg(1), 3)?);
    for m in &models {
        let a = analyse(m)?;
        let ls = curvature_ledgers(&a.am, &a.conn, &a.curv, &a.tors);
        for (suite, id) in [("bianchi", "bian1"), ("bianchi", "zam"), ("bianchi", "secb"), ("vertical-curvature", "div")] {
            let l = ls.iter().find(|l| l.suite == suite).unwrap();
            let e = l.get(id).ok_or_else(|| format!("{}: no entry {id}", m.name))?;
            ensure(!e.failed(), || format!("{}: {id} fails: {}", m.name, e.witness.clone().unwrap_or_default()))?;
        }
    }
    // one corrupted Christoffel symbol against the model's own torsion; paired
    // with its recomputed torsion any connection satisfies the general identities
    let m = builtin_heisenberg(1);
    let a = analyse(&m)?;
    let mut conn = a.conn.clone();
    conn.perturb(&a.am, 0, 1, 2, &int(1));
    let curv = CurvatureData::compute(&a.am, &conn, &a.tors);
    let caught = failures(&curvature_ledgers(&a.am, &conn, &curv, &a.tors));
    ensure(!caught.is_empty(), || "corrupted Gamma passed every curvature identity".into())?;
    let ids: Vec<&str> = caught.iter().map(|c| c.split(':').next().unwrap_or_default()).collect();
    Ok(format!(
        "bian1, zam, secb, div hold on {} models; a single corrupted Gamma entry trips {}",
        models.len(),
        ids.join(", ")
    ))
}

fn criterion_5() -> Outcome {
    let a = analyse(&builtin_heisenberg(2))?;
    ensure(a.ff.d_big_omega.is_zero(), || "d Omega != 0 on heisenberg n=2".into())?;
    let (tau, mu) = recover_torsion_from_d_omega(&a.am, &a.ff.d_big_omega).map_err(|e| e.to_string())?;
    ensure(tau.is_zero() && mu.is_zero(), || "recovered tau or mu nonzero".into())?;
    ensure(tau == a.tors.parts.tau && mu == a.tors.parts.mu, || "recovery differs from the direct torsion".into())?;
    let curved = analyse(&conformal_heisenberg(2, &int(1)))?;
    let (tau_c, mu_c) = recover_torsion_from_d_omega(&curved.am, &curved.ff.d_big_omega).map_err(|e| e.to_string())?;
    ensure(tau_c == curved.tors.parts.tau && mu_c == curved.tors.parts.mu, || "recovery differs on the curved n=2 model".into())?;
    let n1 = analyse(&builtin_heisenberg(1))?;
    let rejected = recover_torsion_from_d_omega(&n1.am, &n1.ff.d_big_omega);
    ensure(rejected == Err(PqcError::RejectedForN1), || format!("n=1 not rejected: {rejected:?}"))?;
    Ok("d Omega = 0 on heisenberg n=2, recovered tau = mu = 0 equal direct (also on a curved n=2 model), n=1 rejected".into())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let l = formal_dga_verify();
    let elapsed = start.elapsed();
    let bad = failures(std::slice::from_ref(&l));
    ensure(bad.is_empty(), || bad.join("; "))?;
    ensure(elapsed < Duration::from_secs(5), || format!("took {:.2} s (limit 5 s)", elapsed.as_secs_f64()))?;
    Ok(format!(
        "{} symbolic checks reduce to the zero normal form: d^2 = 0, dF_i = 0, dF = 0, d Omega = 0, streq/str2 at lambda = 2 ({:.3} s)",
        l.entries.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_7() -> Outcome {
    for (n, v) in [(1usize, 48i64), (2, 128), (3, 240)] {
        let need = sasakian_scal_requirement(n);
        let via_lambda = scal_from_lambda(n, &int(2));
        ensure(need == int(v) && via_lambda == int(v), || {
            format!("n={n}: 16n(n+2) = {}, 8n(n+2)*2 = {}, expected {v}", fmt_rat(&need), fmt_rat(&via_lambda))
        })?;
    }
    Ok("16n(n+2) = 8n(n+2)*2 = 48, 128, 240 for n = 1, 2, 3".into())
}

fn criterion_8() -> Outcome {
    for n in 1..=2 {
        let c = heisenberg_coordinate_check(n);
        ensure(c.passed(), || format!("n={n}: {c:?}"))?;
    }
    let alt = heisenberg_coordinate_check_with(1, &bracket_table_frame_fields(1));
    println!(
        "  info: the frame fields with the bracket-table sign pattern {} on n=1 ({} bracket mismatches)",
        if alt.passed() { "also close" } else { "do not close" },
        alt.brackets.mismatches.len()
    );
    Ok("polynomial frame fields reproduce the structure constants and d Theta matches the structure equations, n = 1, 2".into())
}

fn criterion_9() -> Outcome {
    let h = builtin_heisenberg(1);
    let (g, i) = derive_structure_from_contact(&h.contact_matrices()).map_err(|e| e.to_string())?;
    ensure(g == h.metric && i == h.endo, || "derived (g, I) differ from the declared heisenberg data".into())?;
    let l0 = builtin_l0(&int(3));
    let (g, i) = derive_structure_from_contact(&l0.contact_matrices()).map_err(|e| e.to_string())?;
    let mut derived = l0.clone();
    derived.metric = g;
    derived.endo = i;
    let v = validate_pqc(&derived);
    ensure(v.passed(), || format!("l0 data fails validation: {:?}", failures(std::slice::from_ref(&v))))?;
    let mut r = h.contact_matrices();
    r[1][(0, 3)] = -&r[1][(0, 3)];
    r[1][(3, 0)] = -&r[1][(3, 0)];
    let rejected = derive_structure_from_contact(&r);
    ensure(matches!(rejected, Err(PqcError::InconsistentContact(_))), || format!("sign-flipped input accepted: {rejected:?}"))?;
    Ok("heisenberg n=1 (g, I) recovered, l0 data validated, sign-flipped d eta2 entry rejected".into())
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("flat Heisenberg pipeline", criterion_1),
        ("l0 golden values", criterion_2),
        ("Ricci identity suite", criterion_3),
        ("Bianchi suite", criterion_4),
        ("four-form recovery", criterion_5),
        ("formal cone computation", criterion_6),
        ("para 3-Sasakian scalar curvature", criterion_7),
        ("coordinate cross-check", criterion_8),
        ("metric and endomorphisms from contact data", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
