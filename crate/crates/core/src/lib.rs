pub mod cremona;
pub mod cubic;
pub mod curve;
pub mod error;
pub mod experiment;
pub mod field;
pub mod fmoduli;
pub mod forms;
pub mod json;
pub mod projgeom;
pub mod rnc;
pub mod sample;
pub mod symprod;

pub use error::{Diagnostics, Error, Result};
