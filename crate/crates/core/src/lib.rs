//! Exact mod-p computations in the component Hopf ring with divided powers on
//! the cohomology of extended powers `D_n X`.
//!
//! The additive basis is given by skyline diagrams ([`skyline`]); the four
//! structural operations live in [`hopf`]; the dual homology side (Dyer-Lashof
//! sequences, Nakaoka monomials, pairings) in [`kadl`]; and the stable rings
//! in [`stable`].

pub mod cli;
pub mod coeff;
pub mod error;
pub mod hopf;
pub mod kadl;
pub mod scalars;
pub mod skyline;
pub mod stable;
pub mod verify;

pub use coeff::{CoeffPresentation, FrobeniusChain};
pub use error::{Error, Result};
pub use scalars::{binomial_mod_p, koszul_sign, LinComb, Scalar};
pub use hopf::TensorLinComb;
pub use skyline::{Algebra, Column, Decoration, Element, Grade, Monomial, Solid};
pub use stable::{Flavor, LimitClass, LimitElement, StableGenerator};

/// Library version, part of every cache key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
