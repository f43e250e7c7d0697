//! Exact computation on the moduli of noncommutative tori.
pub mod cli;
pub mod dimension;
pub mod error;
pub mod exact;
pub mod ext;
pub mod halfplane;
pub mod moduli;
pub mod modular;
pub mod verify;

pub use error::{Error, Result};
