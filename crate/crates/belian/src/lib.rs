//! A computational engine for homological algebra in pointed,
//! non-additive settings: finite commutative monoids, finite pointed
//! modules over them, chain complexes, the snake lemma and derived
//! functors, exact rational linearization, and pointed sheaves on
//! finite topological spaces including monoid spectra.

pub mod ascent;
pub mod category;
pub mod complex;
pub mod error;
pub mod gen;
pub mod les;
pub mod linalg;
pub mod monoid;
pub mod pmod;
pub mod resolve;
pub mod sheaf;
pub mod snake;
pub mod spectrum;
pub mod topo;

pub use error::{Error, Result};
