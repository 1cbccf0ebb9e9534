//! Exact homological algebra over DG algebras: resolutions, Tor, Poincaré
//! series, constructions and structure detection.
#![allow(clippy::needless_range_loop)]

pub mod constructions;
pub mod corpus;
pub mod detect;
pub mod dga;
pub mod error;
pub mod field;
pub mod graded;
pub mod linalg;
pub mod module;
pub mod resolution;
pub mod ring;
pub mod session;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
