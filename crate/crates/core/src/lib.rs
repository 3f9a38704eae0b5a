//! Computations behind a family of metrics on the connected sum of two real
//! projective 3-spaces whose volume is not bounded by the product of its
//! 1- and 2-systoles.
//!
//! The crate is split along the lines of the construction:
//!
//! - [`arith`]: exact arithmetic in the unit group of the quaternion order
//!   `(-1, p)`, its congruence subgroups, and systole certificates obtained by
//!   trace enumeration.
//! - [`baselines`]: Loewner and Pu ratios for the classical extremal metrics.
//! - [`surgery`]: coordinate charts, gluing and twisting maps, and the blended
//!   metric used to smooth each Dehn surgery.
//! - [`pipeline`]: surgery level bookkeeping, the systole/volume estimate
//!   calculus and the vanishing freedom ratio, plus a discrete covering check.
//! - [`cli`]: argument parsing, result envelopes and serialization.

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod baselines;
pub mod cli;
pub mod error;
pub mod pipeline;
pub mod surgery;

pub use error::{Error, Result};
