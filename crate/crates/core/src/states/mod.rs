//! Quantum states and normally ordered expectation values.

mod eval;
pub mod expr;
pub mod fock;
mod state;

pub use eval::{expect, expect_detailed, expect_on_mode, expect_product, Expectation};
pub use expr::{Factored, NoExpr, PovmFactor, Response, Term};
pub use fock::{
    cat_parity_check, expect_fock, expect_fock_product, photon_number_distribution, to_fock,
    to_fock_auto,
};
pub use state::{CoherentComponent, Parity, StateSpec};
