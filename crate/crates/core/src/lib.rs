//! Unitary designs from smooth paths.
//!
//! - [`qmat`]: dense complex matrices, unitary and Hermitian wrappers, `SU(2)`.
//! - [`sphere`]: closed curves on spheres and spherical-design checks.
//! - [`upath`]: unitary paths built from those curves, in any dimension.
//! - [`design`]: frame potential and twirl tests on sampled ensembles.
//! - [`control`]: single-qubit pulses, noisy propagation and fidelities.

// Negated float comparisons are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod control;
pub mod design;
pub mod error;
pub mod numeric;
pub mod qmat;
pub mod sphere;
pub mod upath;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/designs.md")]
mod book_designs {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/curves.md")]
mod book_curves {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/su2-paths.md")]
mod book_su2_paths {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/higher-dimensions.md")]
mod book_higher_dimensions {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/robust-control.md")]
mod book_robust_control {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/noise-analysis.md")]
mod book_noise_analysis {}
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
