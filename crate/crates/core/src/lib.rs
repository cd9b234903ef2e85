//! Exact arithmetic for Néron–Severi lattices of polarized K3 surfaces:
//! effectivity and ampleness decision procedures, slice enumeration of divisor
//! classes, numerical ACM/initialized classification tables, 2-elementary
//! lattice invariants with fixed-locus data, and the Ext-dimension bookkeeping
//! for families of semistable bundles built from line-bundle extensions.
//!
//! All computation is exact: arbitrary-precision integers and rationals
//! throughout, with no floating point anywhere.

pub mod classify;
pub mod enumerate;
pub mod extensions;
pub mod geometry;
pub mod lattice;
pub mod matrix;
pub mod two_elementary;
pub mod verify;

pub use geometry::{EffectivityVerdict, SurfaceGeometry, ThreeValued};
pub use lattice::{
    DivisorClass, LatticeError, LatticeSpec, TwoElementaryInvariants, TwoElementaryOutcome,
};
pub use matrix::{Int, IntMatrix, Rat, RatMatrix};
