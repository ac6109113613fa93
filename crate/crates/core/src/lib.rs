//! Crooked functions over `F_{2^n}`, the Preparata-like codes they define,
//! and the line parallelisms of `PG(n, 2)` induced by their coloring function.

pub mod catalog;
pub mod codes;
pub mod coloring;
pub mod equivalence;
pub mod error;
pub mod formats;
pub mod relaxed;
pub mod geometry;
pub mod gf2;
pub mod vbf;

pub use catalog::FamilySpec;
pub use error::{Error, Result};
pub use gf2::{BinMatrix, FieldCtx, FieldElem};
pub use vbf::{CrookedMethod, Vbf};
