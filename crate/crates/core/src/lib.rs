//! Finite soft topological spaces and ideal convergence.
//!
//! The crate models soft sets over a finite universe, soft topologies on
//! them, eventually periodic subsets of the naturals, ideals generated by
//! finitely many such sets, and eventually periodic sequences of soft points.
//! On this class every convergence notion (soft, statistical, ideal, ideal
//! star) and every limit or cluster point set is decidable exactly.
//! [`harness`] holds the seeded generators, brute-force oracles and the
//! theorem suite; [`workspace`] is the plain-text file format.

pub mod convergence;
pub mod error;
pub mod harness;
pub mod ideals;
pub mod natset;
pub mod softset;
pub mod syntax;
pub mod topology;
pub mod workspace;

pub use convergence::{EpSoftSeq, Mode};
pub use error::{AxiomViolation, Error, Result};
pub use ideals::Ideal;
pub use natset::{Density, EpSet};
pub use softset::{Context, ParameterSet, PointGraph, SoftPoint, SoftSet, Universe};
pub use topology::SoftTopology;
