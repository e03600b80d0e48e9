//! Tower covers, Bratteli-Vershik systems and rigorous numerics for
//! Fibonacci-like tent maps.
//!
//! For each integer `d >= 2` the cutting times `S_d(k) = S_d(k-1) + S_d(k-d)`
//! define a Fibonacci-like unimodal combinatorics. This crate realizes that
//! combinatorics in the symmetric tent family `T_a(x) = a(1-|x|) - 1`,
//! builds the nested tower covers of the critical omega-limit set, the
//! ordered Bratteli diagram with its Vershik map and interval projection,
//! the unique invariant measure, and the contraction/dimension numerics —
//! each with machine-checkable certificates at desk scale.
//!
//! All orbit geometry is carried by outward-rounded dyadic interval
//! arithmetic ([`real::RInterval`]); integer combinatorics is exact.

pub mod adic;
pub mod chain;
pub mod covers;
pub mod dimension;
pub mod error;
pub mod kneading;
pub mod measure;
pub mod real;
pub mod tent;

pub use error::{Error, Result};
pub use kneading::Combinatorics;
pub use real::{BigReal, RInterval, RSegment, Round, SignClass};
// pub use tent::TentSystem;
