//! Term structures, shape classification and limit laws of one-factor affine
//! short-rate models.
//!
//! The entry point is [`AffineParams`], validated into [`ValidatedParams`].
//! From there:
//!
//! - [`solve_term_structure`] integrates the bond-price Riccati equations and
//!   yields bond prices, yields and forward rates at any maturity;
//! - [`shape_boundaries`] and [`classify`] tell whether the yield curve is
//!   normal, humped, inverse or flat for a given short rate;
//! - [`cgf`] and [`limit_moments`] describe the stationary law of the rate;
//! - [`NamedModel`] builds the Vasiček, CIR, jump-CIR and gamma-OU models and
//!   carries their closed forms;
//! - [`simulate_terminal`] samples the rate at a horizon by exact transitions.

// Negated float comparisons are used deliberately so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod affine;
pub mod error;
pub mod limit;
pub mod models;
pub mod montecarlo;
pub mod numerics;
pub mod riccati;
pub mod shape;

pub use affine::{AffineParams, ExtendedReal, JumpSpec, StateSpace, ValidatedParams};
pub use error::{Error, Result};
pub use limit::{
    cgf, jcir_density_peak, jcir_l, jcir_levy_density, jcir_self_decomposable, limit_exists, limit_moments,
    LimitDistribution, LimitExistence,
};
pub use models::{CirParams, GammaOuParams, JcirParams, NamedModel, VasicekParams};
pub use montecarlo::{
    empirical_log_mgf, simulate_terminal, simulate_terminal_with_workers, SampleSummary, SimConfig,
};
pub use riccati::{
    solve_term_structure, solve_transition_exponents, TermStructure, Tolerances, TransitionExponents,
};
pub use shape::{
    b_asymp_lambda_zero, classify, classify_with, forward_hump_location, shape_boundaries,
    yield_hump_location, CurveShape, ShapeBoundaries,
};
