//! Exact homological algebra over finite-dimensional algebras and prime
//! fields: modules, complexes, derived and stable categories, all reduced
//! to linear algebra over `F_p`.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod complexes;
pub mod derived;
pub mod error;
pub mod exactla;
pub mod frobenius;
pub mod io;
pub mod modcat;
pub mod verify;

pub use error::{Error, Result};
