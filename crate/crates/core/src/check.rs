//! Exact comparison helpers producing human-readable witnesses.

use crate::linalg::Matrix;
use crate::scalar::{fmt_rat, Rat};

pub fn eq_scalar(what: &str, lhs: &Rat, rhs: &Rat) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: lhs = {}, rhs = {}", fmt_rat(lhs), fmt_rat(rhs)))
    }
}

/// First differing entry, named by `labels` when given.
pub fn eq_matrix(what: &str, lhs: &Matrix, rhs: &Matrix, labels: Option<&[String]>) -> Result<(), String> {
    assert_eq!((lhs.rows(), lhs.cols()), (rhs.rows(), rhs.cols()));
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            if lhs[(i, j)] != rhs[(i, j)] {
                let (a, b) = match labels {
                    Some(l) => (l[i].clone(), l[j].clone()),
                    None => ((i + 1).to_string(), (j + 1).to_string()),
                };
                return Err(format!(
                    "{what} at ({a}, {b}): lhs = {}, rhs = {}",
                    fmt_rat(&lhs[(i, j)]),
                    fmt_rat(&rhs[(i, j)])
                ));
            }
        }
    }
    Ok(())
}

pub fn all_ok(results: impl IntoIterator<Item = Result<(), String>>) -> Result<(), String> {
    results.into_iter().collect::<Result<Vec<_>, _>>().map(|_| ())
}

pub fn fmt_tuple(labels: &[String], ix: &[usize]) -> String {
    let names: Vec<&str> = ix.iter().map(|&i| labels[i].as_str()).collect();
    format!("({})", names.join(", "))
}

/// Runs `f` over every index tuple in `extents` and reports the first
/// (row-major) failure, prefixed by `what`.
pub fn sweep<F>(what: &str, extents: &[usize], f: F) -> Result<(), String>
where
    F: Fn(&[usize]) -> Option<String> + Sync + Send,
{
    match crate::par::find_first_tuple(extents, f) {
        Some(w) => Err(format!("{what} at {w}")),
        None => Ok(()),
    }
}

/// `None` when equal, otherwise a witness naming `at`.
pub fn mismatch(at: impl FnOnce() -> String, lhs: &Rat, rhs: &Rat) -> Option<String> {
    (lhs != rhs).then(|| format!("{}: lhs = {}, rhs = {}", at(), fmt_rat(lhs), fmt_rat(rhs)))
}
