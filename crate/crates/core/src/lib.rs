//! Mixed finite elements for incompressible finite elasticity in 2D.
//!
//! The method discretizes the Hu-Washizu form of incompressible
//! hyperelasticity with five fields per element:
//!
//! - displacement `u` in the normal-continuous Raviart-Thomas space,
//! - a facet multiplier `ũ` carrying the tangential displacement trace,
//! - a lifted deformation gradient `F` (element-local, matrix-valued),
//! - the 1st Piola-Kirchhoff stress `P` (element-local after hybridization),
//! - the pressure `p` enforcing `det F = 1` weakly.
//!
//! All stress/strain/pressure unknowns are condensed element-wise, leaving a
//! symmetric positive definite global system on the facet unknowns `(u, ũ)`.
//! A damped quasi-Newton iteration with adaptive load stepping drives the
//! nonlinear solve. The `bench` module reproduces the inflation-of-a-shell
//! convergence study, Cook's membrane, and a pressure-robustness check for
//! the small-strain limit of the method.
//!
//! Element loops (assembly, condensation, postprocessing) run in parallel
//! with rayon when the `parallel` feature is enabled (default). The global
//! scatter is sequential in element order, so results are bit-identical
//! regardless of worker count.

pub mod assembly;
pub mod bench;
pub mod elements;
pub mod geometry;
pub mod linalg;
pub mod material;
pub mod postproc;
pub mod solver;

pub use geometry::{Triangulation, GeometryMap};
pub use material::{MaterialParams, ConstraintKind};
