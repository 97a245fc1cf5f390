//! A full verification run in dependency order: validation, Reeb frame,
//! connection, curvature, forms, classification. Suites that only read the
//! computed data run concurrently when parallelism is on.

use std::str::FromStr;

use crate::connection::{
    assemble_connection, full_torsion, levi_civita_compare, torsion_tensor_ledger, verify_connection, CanonicalConnection, TorsionData,
};
use crate::curvature::{verify_bianchi, verify_ricci_identities, verify_vertical_curvature, CurvatureData};
use crate::error::PqcError;
use crate::forms::{fundamental_four_form, verify_four_form, verify_structure_equations, FourFormData};
use crate::models::PqcModel;
use crate::report::{Ledger, Report};
use crate::sasakian::{classification_ledger, classify_data};
use crate::scalar::fmt_rat;
use crate::structure::{reeb_ledger, solve_reeb, structure_ledger, validate_pqc, AdaptedModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Ricci,
    Bianchi,
    Structure,
    Forms,
}

impl FromStr for Suite {
    type Err = PqcError;
    fn from_str(s: &str) -> Result<Self, PqcError> {
        match s {
            "all" => Ok(Suite::All),
            "ricci" => Ok(Suite::Ricci),
            "bianchi" => Ok(Suite::Bianchi),
            "structure" => Ok(Suite::Structure),
            "forms" => Ok(Suite::Forms),
            other => Err(PqcError::Parse(format!("unknown suite '{other}' (expected all, ricci, bianchi, structure or forms)"))),
        }
    }
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Ricci => "ricci",
            Suite::Bianchi => "bianchi",
            Suite::Structure => "structure",
            Suite::Forms => "forms",
        }
    }
}

/// Everything computed from a validated model.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub am: AdaptedModel,
    pub conn: CanonicalConnection,
    pub tors: TorsionData,
    pub curv: CurvatureData,
    pub ff: FourFormData,
}

impl Analysis {
    /// Builds the data without checking the connection's defining identities.
    pub fn build(model: &PqcModel) -> Result<Self, PqcError> {
        let am = AdaptedModel::build(model)?;
        Self::from_adapted(am)
    }

    fn from_adapted(am: AdaptedModel) -> Result<Self, PqcError> {
        let (conn, parts) = assemble_connection(&am)?;
        let tors = TorsionData {
            full: full_torsion(&am, &conn),
            parts,
        };
        let curv = CurvatureData::compute(&am, &conn, &tors);
        let ff = fundamental_four_form(&am, &tors.parts);
        Ok(Analysis { am, conn, tors, curv, ff })
    }

    /// Ledgers selected by `suite`, in a fixed order.
    pub fn ledgers(&self, suite: Suite) -> Vec<Ledger> {
        type Job<'a> = Box<dyn Fn() -> Ledger + Send + Sync + 'a>;
        let (am, conn, tors, curv, ff) = (&self.am, &self.conn, &self.tors, &self.curv, &self.ff);
        let mut jobs: Vec<Job> = vec![
            Box::new(|| structure_ledger(am)),
            Box::new(|| verify_connection(am, conn, tors)),
            Box::new(|| torsion_tensor_ledger(am, &tors.parts)),
            Box::new(|| levi_civita_compare(am, conn, tors)),
        ];
        let all = suite == Suite::All;
        if all || suite == Suite::Ricci {
            jobs.push(Box::new(|| verify_ricci_identities(am, conn, curv, tors)));
            jobs.push(Box::new(|| verify_vertical_curvature(am, conn, curv, tors)));
        }
        if all || suite == Suite::Bianchi {
            jobs.push(Box::new(|| verify_bianchi(am, conn, curv, tors)));
        }
        if all || suite == Suite::Structure {
            jobs.push(Box::new(|| verify_structure_equations(am, conn, curv, ff)));
        }
        if all || suite == Suite::Forms {
            jobs.push(Box::new(|| verify_four_form(am, conn, tors, curv, ff)));
        }
        if all {
            jobs.push(Box::new(|| classification_ledger(am, conn, tors, curv)));
        }
        crate::par::map_range(jobs.len(), |i| jobs[i]())
    }
}

fn failed_step(suite: &str, id: &str, anchor: &str, err: &PqcError) -> Ledger {
    let mut l = Ledger::new(suite);
    l.check(id, anchor, Err(err.to_string()));
    l
}

/// Runs the selected suites; a failing prerequisite ends the run with its
/// ledger as the last one in the report.
pub fn verify_model(model: &PqcModel, suite: Suite) -> Report {
    let mut report = Report::new(&format!("verify --suite {}", suite.as_str()), Some(model));
    let validation = validate_pqc(model);
    let valid = validation.passed();
    report.push(validation);
    if !valid {
        return report;
    }
    let reeb = match solve_reeb(model) {
        Ok(r) => r,
        Err(e) => {
            report.push(failed_step("reeb", "reeb-solve", "eta_s(xi_t) = delta_st, (xi_s _| d eta_s)|H = 0, (xi_s _| d eta_t)|H = -(xi_t _| d eta_s)|H", &e));
            return report;
        }
    };
    report.push(reeb_ledger(model, &reeb));
    let analysis = match AdaptedModel::new(model, &reeb).and_then(Analysis::from_adapted) {
        Ok(a) => a,
        Err(e) => {
            report.push(failed_step("connection", "assemble", "canonical connection exists", &e));
            return report;
        }
    };
    for l in analysis.ledgers(suite) {
        report.push(l);
    }
    if suite == Suite::All {
        add_classification(&mut report, &analysis);
    }
    report
}

pub fn add_classification(report: &mut Report, a: &Analysis) {
    match classify_data(&a.am, &a.conn, &a.tors, &a.curv) {
        Ok(v) => {
            report.results.insert("classification".into(), v.label.to_string());
            report.results.insert("evidence".into(), v.evidence.join("; "));
            report.results.insert("lambda".into(), fmt_rat(&v.lambda));
            report.results.insert("scal".into(), fmt_rat(&v.scal));
        }
        Err(e) => {
            report.results.insert("classification".into(), format!("error: {e}"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{builtin_heisenberg, builtin_l0};
    use crate::scalar::int;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::All, Suite::Ricci, Suite::Bianchi, Suite::Structure, Suite::Forms] {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn full_run_on_built_ins_passes() {
        for m in [builtin_heisenberg(1), builtin_l0(&int(1))] {
            let r = verify_model(&m, Suite::All);
            let bad: Vec<_> = r.ledgers.iter().flat_map(|l| l.failures().map(move |e| (l.suite.clone(), e.id.clone()))).collect();
            assert!(r.passed(), "{}: {bad:?}", m.name);
            assert_eq!(r.results["classification"], "FlatHeisenberg");
            let suites: Vec<&str> = r.ledgers.iter().map(|l| l.suite.as_str()).collect();
            assert_eq!(
                suites,
                [
                    "validation",
                    "reeb",
                    "structure",
                    "connection",
                    "torsion",
                    "levi-civita",
                    "ricci",
                    "vertical-curvature",
                    "bianchi",
                    "structure-equations",
                    "forms",
                    "classification"
                ]
            );
        }
    }

    #[test]
    fn parallel_and_sequential_reports_agree() {
        let m = builtin_heisenberg(1);
        let par = verify_model(&m, Suite::All).to_json();
        crate::par::set_parallel(false);
        let seq = verify_model(&m, Suite::All).to_json();
        crate::par::set_parallel(true);
        assert_eq!(par, seq);
    }

    #[test]
    fn invalid_model_stops_after_validation() {
        let mut m = builtin_heisenberg(1);
        m.endo[0] = m.endo[2].clone();
        let r = verify_model(&m, Suite::All);
        assert!(!r.passed());
        assert_eq!(r.ledgers.len(), 1);
        assert_eq!(r.ledgers[0].suite, "validation");
    }
}
