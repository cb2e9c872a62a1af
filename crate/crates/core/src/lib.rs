//! Primal-dual interior-point solver for conic problems over exotic cones,
//! with extended-formulation rewrites into standard cones.
//!
//! Problems are stated in the primal form
//!
//! ```text
//! min c'x  s.t.  b - A x = 0,  h - G x in K
//! ```
//!
//! where `K` is a product of cones from [`cones::ConeKind`].

pub mod bridges;
pub mod cones;
pub mod interp;
pub mod model;
pub mod solver;

pub use bridges::{ef_cone_dims, extend, map_back, BridgeError, EFMapping, EFOptions, GeomeanMode, L1Mode};
pub use cones::{make_cone, Cone, ConeError, ConeKind};
pub use model::{ConicProblem, ModelError, PrimalDualPoint};
pub use solver::{solve, SolveOptions, SolveResult, Status};
