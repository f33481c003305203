//! Exact ditalgebra reductions, right algebras and generic modules.

pub mod bigraph;
pub mod ditmod;
pub mod fdalg;
pub mod format;
pub mod generic;
pub mod linalg;
pub mod scalars;
pub mod qhbridge;
pub mod reduction;
