//! Exact subdivision and homotopy maps of algebraic simplices over a base,
//! symbolic verification of their relations, the faces-of-`[n]` shell complex,
//! and a finite-field laboratory for equi-dimensionality experiments.

pub mod equidimlab;
pub mod error;
pub mod polycore;
pub mod relcheck;
pub mod shell;
pub mod simplexmaps;

pub use error::{Error, Result};
