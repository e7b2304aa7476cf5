//! Matrix comparison orders, functional calculus and randomized checks of
//! unitarily invariant norm inequalities for operator monotone and operator
//! convex functions.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Jacobi eigensolver, SVD, `|A|`,
//!   Jordan splitting and functional calculus.
//! * [`orders`]: Loewner order, weak majorization `≼` and dominance `≪`.
//! * [`functions`]: catalogues of operator monotone, operator convex and plain
//!   nondecreasing scalar functions, with integral representations.
//! * [`ncpoly`]: noncommutative polynomials `P`, `|P|` and their evaluation.
//! * [`generators`]: seeded ensembles of PSD matrices, pairs and contractions.
//! * [`inequalities`]: one executable predicate per inequality, plus the
//!   counterexample search.
//! * [`suite`]: the deterministic trial runner, reports and witness replay.

pub mod error;
pub mod functions;
pub mod generators;
pub mod inequalities;
pub mod linalg;
pub mod ncpoly;
pub mod orders;
pub mod suite;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, PsdMatrix};
