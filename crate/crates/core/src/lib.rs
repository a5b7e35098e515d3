//! Compilation of bounded continuous classical models into a 4D compact
//! U(1) lattice gauge theory, plus the numerical machinery to verify the
//! mapping at desk scale.
//!
//! The pipeline: a target Hamiltonian over bounded continuous variables is
//! normalized to angles, expanded as a finite Fourier polynomial, and then
//! realized inside a host 4D lattice by driving selected face couplings to
//! infinity (merge rule), to zero (deletion rule) and by gauge fixing edges.
//! Partition functions and observables of both sides are evaluated by dense
//! periodic quadrature, Metropolis Monte Carlo, or an exact character
//! expansion, so the reduction can be checked number-for-number.
//!
//! Modules:
//! - [`complex`]: oriented cell complexes, incidence matrices, edge configs.
//! - [`interactions`]: Fourier polynomials over angle variables and the
//!   coefficient-to-coupling map.
//! - [`gadgets`]: merge/delete/gauge-fix toolkit and the embedding planner.
//! - [`evaluator`]: partition functions, Monte Carlo, inner-product check.
//! - [`models`]: the target-model catalog and the constrained/discrete
//!   reductions.
//! - [`curved`]: the curved-background variant (vierbeins, spin connection,
//!   parallel-transported face variables).

pub mod complex;
pub mod curved;
pub mod error;
pub mod evaluator;
pub mod gadgets;
pub mod interactions;
pub mod models;
pub mod ratmat;
pub mod report;
pub mod special;

pub use error::{Error, Result};
