//! Exact-arithmetic library for classical and general dual-feasible functions
//! (DFFs): piecewise-linear representations, automatic maximality and
//! extremality tests, the conversion from minimal Gomory-Johnson functions,
//! and an exact polytope-vertex search for extreme DFFs on refined grids.
//!
//! All mathematical code works over arbitrary-precision rationals; verdicts
//! are exact combinatorial claims, never floating-point approximations.

pub mod compendium;
pub mod complex2d;
pub mod extremality;
pub mod gjlink;
pub mod maximality;
pub mod pwl;
pub mod rational;
pub mod search;

mod linalg;
mod lp;

pub use rational::Rational;
