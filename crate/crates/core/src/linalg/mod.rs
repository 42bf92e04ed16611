//! Exact linear algebra over the integers and over finite abelian groups.

mod affine;
mod echelon;
mod smith;

pub use affine::{solve_affine, AffineSolutions};
pub use echelon::{Residues, SubgroupEchelon};
pub use smith::{smith_normal_form, IntegerMatrix, SmithForm};
