//! Eigenvalue-level sets and the operations on them.

mod eval;
pub mod expr;
pub mod offset;
mod lp;
mod pl;
pub mod point;
pub mod set;

pub use expr::{Expr, Part, Prim};
pub use offset::{boundary_offset, contains, extended_offset, offset_distance, trace_free_samples, Containment};
pub use point::{Layout, Pt};
pub use set::{Class, SetKind, Set, SignedVerdict, Subeq};
