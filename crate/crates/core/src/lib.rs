pub mod catalog;
pub mod cli;
pub mod cone;
pub mod error;
pub mod figure;
pub mod formula;
pub mod ge;
pub mod grid;
pub mod identities;
pub mod solver;
pub mod symmat;
pub mod tol;
pub mod viscosity;

pub use cone::{boundary_offset, contains, Class, Containment, Expr, Layout, Part, Prim, Set, Subeq};
pub use error::{CheckError, ConeError, FigureError, SolveError};
pub use symmat::{eigenvalues, SymMat};
pub use tol::Tolerances;
