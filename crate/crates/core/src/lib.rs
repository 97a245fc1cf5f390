//! Exact rational engine for paraquaternionic contact structures on
//! left-invariant frame models.

// index loops mirror the component formulas
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod calculus;
pub mod check;
pub mod connection;
pub mod curvature;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod models;
pub mod par;
pub mod pipeline;
pub mod report;
pub mod sasakian;
pub mod scalar;
pub mod structure;

pub use error::PqcError;
pub use scalar::Rat;
