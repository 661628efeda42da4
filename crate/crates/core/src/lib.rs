//! Natural dualities for distributive-lattice-based varieties, used to decide
//! admissibility of clauses and quasi-identities.

pub mod admit;
pub mod algebra;
pub mod construct;
pub mod criteria;
pub mod dot;
pub mod duality;
pub mod error;
pub mod free;
pub mod generators;
pub mod io;
pub mod members;
pub mod membership;
pub mod parse;
pub mod profile;
pub mod random;
pub mod registry;
pub mod satisfy;
pub mod search;
pub mod signature;
pub mod space;
pub mod term;

pub use error::{Error, Result};
pub use signature::{Op, Signature};
