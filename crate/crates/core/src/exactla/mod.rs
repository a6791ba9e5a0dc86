//! Exact dense linear algebra over prime fields.
//!
//! Every higher-level question (Hom-spaces, homotopies, cohomology) is
//! reduced to `rref`, kernels, and solving linear systems here.

mod field;
mod linsys;
mod mat;

pub use field::{Fp, Prime};
pub use linsys::{EqId, LinSys, VarId};
pub use mat::{quotient_structure, Mat};
