//! Exact-arithmetic workbench for finite ontological (hidden-variable)
//! models of quantum theory.
//!
//! All probabilities live in the ordered field ℚ(√2) ([`numerics`]). On top
//! of that the crate provides exact pure states and the Born rule
//! ([`hilbert`]), ontic spaces with epistemic states and response functions
//! ([`ontology`]), marginalization and independence checks
//! ([`independence`]), an exact LP engine that either synthesizes response
//! functions or certifies that none exist ([`synthesis`]), and the built-in
//! two-qubit scenario with its non-local toy model ([`scenarios`]).
//!
//! ```
//! use ontic::scenarios::{build_lhv_restriction, build_toy_nlhv_model, pbr_zero_spec};
//! use ontic::synthesis::{build_synthesis_lp, solve_feasibility};
//!
//! let model = build_toy_nlhv_model();
//! let local = build_lhv_restriction(&model).unwrap();
//! let (spec, _) = pbr_zero_spec(&local).unwrap();
//! let result = solve_feasibility(&build_synthesis_lp(&spec).unwrap());
//! assert!(!result.is_feasible());
//! ```

pub mod cli;
pub mod error;
pub mod format;
pub mod hilbert;
pub mod independence;
pub mod numerics;
pub mod ontology;
pub mod scenarios;
pub mod simplex;
pub mod synthesis;

pub use error::{Error, Result};
pub use numerics::{Probability, QSqrt2, Rational};
