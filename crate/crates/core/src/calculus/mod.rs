pub mod forms;
pub mod frame;
pub mod poly;
pub mod tensor;

pub use forms::{ExteriorCalculus, Form};
pub use frame::{basis_vector, CoframeModel};
pub use poly::{poly_bracket_check, BracketCheck, Poly, PolyOneForm, PolyVectorField};
pub use tensor::Tensor;
