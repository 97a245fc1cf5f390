pub mod decomposition;
pub mod epsilon;
pub mod paraquaternion;

pub use decomposition::{
    check_paraquaternionic, decompose_endomorphism, is_metric_skew, sp1_coefficients, sp1_component, sp1_perp_project, EndomorphismDecomposition, Triple,
};
pub use epsilon::{eps, eps_rat, CYCLIC};
pub use paraquaternion::ParaQuaternion;
