//! Exact computation of the Links–Gould two-variable link invariant
//! `LG(q, p)` from braid words and from explicit tangle networks.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod ring;
pub mod rmatrix;
pub mod tangle;
pub mod tensor;

pub use error::{Error, Result};
pub use ring::{LaurentPoly, RingElem, Substitution};
pub use tangle::{lg_invariant, lg_of_network, BraidWord, Chirality};
