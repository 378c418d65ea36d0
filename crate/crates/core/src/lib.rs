//! Construction, evaluation, search, and randomization of quasi-Monte Carlo
//! point sets in base 2.
//!
//! The crate covers rank-1 lattice rules, digital nets over Z₂ (including
//! polynomial lattice rules, Sobol' nets, high-order and interlaced
//! variants), weighted figures of merit with kernel and t-value families,
//! component-by-component searches (plain and FFT-accelerated), the standard
//! net/lattice randomizations, and small reproducible experiments on top of
//! them.

pub mod error;
pub mod fom;
pub mod gf2;
pub mod pointsets;
pub mod randomize;
pub mod weights;
pub mod rng;

pub use error::{Error, Result};
