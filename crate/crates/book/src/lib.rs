//! The guide in `book/`, one module per chapter, so that `cargo test`
//! runs every listing as a doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/states.md")]
pub mod states {}
#[doc = include_str!("../../../book/src/operations.md")]
pub mod operations {}
#[doc = include_str!("../../../book/src/measurement.md")]
pub mod measurement {}
#[doc = include_str!("../../../book/src/entanglement.md")]
pub mod entanglement {}
#[doc = include_str!("../../../book/src/nonlocality.md")]
pub mod nonlocality {}
#[doc = include_str!("../../../book/src/protocols.md")]
pub mod protocols {}
#[doc = include_str!("../../../book/src/stabilizer.md")]
pub mod stabilizer {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
