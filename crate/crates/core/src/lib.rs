//! Linear codes over finite fields, their hulls, and constructions that
//! change the hull dimension of a code by scaling its coordinates.

pub mod codes;
pub mod constructions;
pub mod exec;
pub mod gf;
pub mod matgf;

pub use codes::{CodeError, DualCode, HullReport, LinearCode, ScalingVector, DEFAULT_BUDGET};
pub use exec::Exec;
pub use gf::{Felt, Field, GfError};
pub use matgf::{MatError, MatGF};
