use std::path::PathBuf;

use pqc_core::models::{load_model, save_model};
use pqc_core::pipeline::{verify_model, Suite};

fn shipped() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

#[test]
fn shipped_models_round_trip_through_disk() {
    let tmp = tempfile::tempdir().unwrap();
    for f in shipped() {
        let m = load_model(&f).unwrap();
        let out = tmp.path().join(f.file_name().unwrap());
        save_model(&m, &out).unwrap();
        assert_eq!(load_model(&out).unwrap(), m, "{}", f.display());
    }
}

#[test]
fn shipped_models_verify_as_labelled() {
    for f in shipped() {
        let m = load_model(&f).unwrap();
        let r = verify_model(&m, Suite::All);
        let corrupted = f.file_stem().unwrap() == "corrupted";
        assert_eq!(r.passed(), !corrupted, "{}", f.display());
    }
}
