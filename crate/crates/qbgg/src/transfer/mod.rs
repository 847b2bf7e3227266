//! Transfer matrices, Q-operators and the identities among them.

pub mod cases;
pub mod characters;
pub mod checks;
pub mod finite;
pub mod tensor;
pub mod trace;
pub mod twist;
pub mod twisted;

pub use tensor::TensorOperator;
pub use trace::{character_plus, monodromy, q_operator, transfer_plus, Monodromy};
pub use twist::{cartan_twist, conjugation_twist, CartanTwist, TwistSpec};
pub use twisted::Twisted;
