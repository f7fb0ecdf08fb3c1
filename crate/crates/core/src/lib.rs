pub mod battery;
pub mod bdcomplex;
pub mod classify;
pub mod error;
pub mod invariants;
pub mod rootdata;
pub mod torus;
pub mod weyl;
pub mod zchain;

pub use error::{Error, Result};
