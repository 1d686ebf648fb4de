pub mod action;
pub mod algebra;
pub mod error;
pub mod family;
pub mod frame;
pub mod lifting;
pub mod mutants;
pub mod partition;
pub mod presheaf;
pub mod random;
pub mod suite;
pub mod surjection;
pub mod theory;

pub use error::{Error, Result};
