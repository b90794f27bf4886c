pub mod arith;
pub mod classifier;
pub mod curve;
pub mod descriptor;
pub mod error;
pub mod formal_group;
pub mod linalg;
pub mod local_field;
pub mod oracle;
pub mod random;
pub mod residue_field;
pub mod ring;
pub mod series;
pub mod wpoly;

pub use error::{Error, Result};
