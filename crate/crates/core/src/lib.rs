//! Combinatorics and cohomology rings of toric, Lawrence and toric
//! hyperkähler varieties given by an integer matrix or a quiver.
//!
//! Everything is computed in exact arithmetic. The main entry point is
//! [`GaleDualPair`], from which slices, arrangements, fans and ring
//! presentations are built.

pub mod cohomology;
pub mod error;
pub mod exact;
pub mod fans;
pub mod gale;
pub mod matroid;
pub mod par;
pub mod polyhedra;
pub mod quiver;

pub use error::{Error, Result};
pub use exact::{Int, IntMatrix, MultiPoly, Rat, RatVector};
pub use gale::GaleDualPair;
pub use matroid::LinearMatroid;
pub use quiver::Quiver;

