//! Exact-arithmetic toolkit for verifying double-plane surface constructions.
//!
//! The library reconstructs a degree-ten plane branch curve with prescribed
//! singularities (an octic times a conic), certifies its singularity
//! configuration and smoothness elsewhere over a finite field, computes the
//! surface invariants of the branched double cover through blow-up
//! intersection theory, and determines the torsion group of the resulting
//! minimal surface. Two examples are covered end to end: the Campedelli-style
//! double plane with torsion Z/2 and the Oort-Peters double plane with
//! torsion Z/4.
//!
//! All arithmetic is exact: arbitrary-precision rationals, the quadratic
//! tower Q(alpha, beta, delta), and prime fields.

pub mod assets;
pub mod checks;
pub mod gbcert;
pub mod linalg;
pub mod mpoly;
pub mod picard;
pub mod report;
pub mod rings;
pub mod singular;
pub mod surfaces;
pub mod torsion;
