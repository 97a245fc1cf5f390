//! JSON model files. Rationals are `"p/q"` strings and every index is
//! 1-based. Saving then loading gives back an identical model.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PqcModel;
use crate::calculus::CoframeModel;
use crate::error::PqcError;
use crate::linalg::Matrix;
use crate::scalar::{fmt_rat, parse_rat, Rat};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub version: u32,
    pub name: String,
    pub n: usize,
    pub basis: Vec<String>,
    /// `[a, b, c, "C^a_bc"]`
    pub structure_constants: Vec<(usize, usize, usize, String)>,
    /// Frame indices carrying `η₁, η₂, η₃`.
    pub eta: [usize; 3],
    pub metric: Vec<Vec<String>>,
    pub endomorphisms: [Vec<Vec<String>>; 3],
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

fn matrix_to_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| fmt_rat(&m[(i, j)])).collect()).collect()
}

fn matrix_from_strings(rows: &[Vec<String>], what: &str) -> Result<Matrix, PqcError> {
    let n = rows.len();
    let mut m = Matrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(PqcError::InvalidModel(format!(
                "{what}: row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        for (j, s) in row.iter().enumerate() {
            m[(i, j)] = parse_rat(s).map_err(|e| PqcError::Parse(format!("{what}[{}][{}]: {e}", i + 1, j + 1)))?;
        }
    }
    Ok(m)
}

impl ModelFile {
    pub fn from_model(m: &PqcModel) -> Self {
        ModelFile {
            version: FORMAT_VERSION,
            name: m.name.clone(),
            n: m.n,
            basis: m.frame.labels().to_vec(),
            structure_constants: m
                .frame
                .nonzero_upper()
                .into_iter()
                .map(|(a, b, c, v)| (a + 1, b + 1, c + 1, fmt_rat(&v)))
                .collect(),
            eta: m.eta.map(|i| i + 1),
            metric: matrix_to_strings(&m.metric),
            endomorphisms: std::array::from_fn(|s| matrix_to_strings(&m.endo[s])),
            metadata: m.metadata.clone(),
        }
    }

    /// Checks format, antisymmetry, Jacobi and shapes. The pqc axioms are
    /// left to validation.
    pub fn into_model(self) -> Result<PqcModel, PqcError> {
        if self.version != FORMAT_VERSION {
            return Err(PqcError::InvalidModel(format!(
                "unsupported version {}, expected {FORMAT_VERSION}",
                self.version
            )));
        }
        let dim = self.basis.len();
        let mut entries: Vec<(usize, usize, usize, Rat)> = Vec::with_capacity(self.structure_constants.len());
        for (k, (a, b, c, v)) in self.structure_constants.iter().enumerate() {
            if [*a, *b, *c].iter().any(|&i| i == 0 || i > dim) {
                return Err(PqcError::InvalidModel(format!(
                    "structure_constants[{k}]: index ({a}, {b}, {c}) out of range 1..={dim}"
                )));
            }
            let v = parse_rat(v).map_err(|e| PqcError::Parse(format!("structure_constants[{k}]: {e}")))?;
            entries.push((a - 1, b - 1, c - 1, v));
        }
        let frame = CoframeModel::from_entries(self.basis, &entries)?;
        frame.check_jacobi()?;
        if self.eta.iter().any(|&i| i == 0 || i > dim) {
            return Err(PqcError::InvalidModel(format!("eta {:?} out of range 1..={dim}", self.eta)));
        }
        let metric = matrix_from_strings(&self.metric, "metric")?;
        let mut endo: [Matrix; 3] = std::array::from_fn(|_| Matrix::zeros(0, 0));
        for (s, rows) in self.endomorphisms.iter().enumerate() {
            endo[s] = matrix_from_strings(rows, &format!("endomorphisms[{s}]"))?;
        }
        let model = PqcModel {
            name: self.name,
            n: self.n,
            frame,
            eta: self.eta.map(|i| i - 1),
            metric,
            endo,
            metadata: self.metadata,
        };
        model.check_shape()?;
        Ok(model)
    }
}

pub fn model_to_json(m: &PqcModel) -> String {
    let mut s = serde_json::to_string_pretty(&ModelFile::from_model(m)).expect("model file serialises");
    s.push('\n');
    s
}

pub fn model_from_json(text: &str) -> Result<PqcModel, PqcError> {
    let file: ModelFile = serde_json::from_str(text)
        .map_err(|e| PqcError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    file.into_model()
}

pub fn save_model(m: &PqcModel, path: impl AsRef<Path>) -> Result<(), PqcError> {
    std::fs::write(path, model_to_json(m))?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<PqcModel, PqcError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    model_from_json(&text).map_err(|e| match e {
        PqcError::Parse(msg) => PqcError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}
