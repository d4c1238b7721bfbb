//! Admissible parameter sets of one-dimensional conservative affine processes.
//!
//! A parameter set `(a, alpha, b, beta, m, mu)` determines the two functions
//!
//! ```text
//! F(u) = a u² + b u + ∫ (e^{uξ} - 1 - u h_F(ξ)) m(dξ)
//! R(u) = α u² + β u + ∫ (e^{uξ} - 1 - u h_R(ξ)) μ(dξ)
//! ```
//!
//! which drive every Riccati equation in this crate. Jump measures are
//! restricted to compound Poisson laws with exponential marks, for which the
//! Laplace parts are rational and the truncation compensators are constants.
//! The truncation function `ξ / (1 + ξ²)` sits in `R` on `[0, ∞)` and in `F`
//! on `ℝ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{brent, integrate_to_infinity};

const COMPENSATOR_ABS_TOL: f64 = 1e-12;

/// State space of the short rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpace {
    NonnegativeReals,
    Reals,
}

impl StateSpace {
    pub fn contains(self, r: f64) -> bool {
        match self {
            StateSpace::NonnegativeReals => r >= 0.0 && r.is_finite(),
            StateSpace::Reals => r.is_finite(),
        }
    }
}

/// Lévy measure of a jump component.
///
/// `CompoundPoissonExp` has density `intensity · jump_rate · exp(-jump_rate ξ)`
/// on `(0, ∞)`, i.e. jumps arrive at rate `intensity` with mean size
/// `1 / jump_rate`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JumpSpec {
    #[default]
    None,
    CompoundPoissonExp {
        intensity: f64,
        jump_rate: f64,
    },
}

impl JumpSpec {
    /// True when the measure is the zero measure.
    pub fn is_zero(&self) -> bool {
        match *self {
            JumpSpec::None => true,
            JumpSpec::CompoundPoissonExp { intensity, .. } => intensity == 0.0,
        }
    }

    /// Supremum of the interval on which the Laplace part is finite.
    pub fn domain_upper(&self) -> f64 {
        match *self {
            JumpSpec::None => f64::INFINITY,
            JumpSpec::CompoundPoissonExp { intensity, jump_rate } => {
                if intensity == 0.0 {
                    f64::INFINITY
                } else {
                    jump_rate
                }
            }
        }
    }

    /// `∫ (e^{uξ} - 1) ν(dξ)`, `+∞` outside the domain.
    pub fn laplace_part(&self, u: f64) -> f64 {
        match *self {
            JumpSpec::None => 0.0,
            JumpSpec::CompoundPoissonExp { intensity, jump_rate } => {
                if intensity == 0.0 {
                    0.0
                } else if u < jump_rate {
                    intensity * u / (jump_rate - u)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Derivative of [`laplace_part`](Self::laplace_part) for `u` inside the domain.
    pub fn laplace_part_prime(&self, u: f64) -> f64 {
        match *self {
            JumpSpec::None => 0.0,
            JumpSpec::CompoundPoissonExp { intensity, jump_rate } => {
                intensity * jump_rate / ((jump_rate - u) * (jump_rate - u))
            }
        }
    }

    /// Limit of the Laplace part as `u → -∞`.
    pub fn laplace_part_at_minus_infinity(&self) -> f64 {
        match *self {
            JumpSpec::None => 0.0,
            JumpSpec::CompoundPoissonExp { intensity, .. } => -intensity,
        }
    }

    /// `∫ ξ / (1 + ξ²) ν(dξ)`, by adaptive quadrature.
    pub fn truncation_mean(&self) -> Result<f64> {
        match *self {
            JumpSpec::None => Ok(0.0),
            JumpSpec::CompoundPoissonExp { intensity, jump_rate } => {
                if intensity == 0.0 {
                    return Ok(0.0);
                }
                let q = integrate_to_infinity(
                    |x| x / (1.0 + x * x) * jump_rate * (-jump_rate * x).exp(),
                    0.0,
                    COMPENSATOR_ABS_TOL,
                    0.0,
                )?;
                Ok(intensity * q.value)
            }
        }
    }

    fn check(&self, field: &'static str) -> Result<()> {
        if let JumpSpec::CompoundPoissonExp { intensity, jump_rate } = *self {
            if !(intensity.is_finite() && intensity >= 0.0) {
                return Err(Error::AdmissibilityViolation {
                    field,
                    reason: format!("intensity must be finite and >= 0, got {intensity}"),
                });
            }
            if !(jump_rate.is_finite() && jump_rate > 0.0) {
                return Err(Error::AdmissibilityViolation {
                    field,
                    reason: format!("jump_rate must be finite and > 0, got {jump_rate}"),
                });
            }
        }
        Ok(())
    }
}

/// A real number or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtendedReal::PosInfinity
        } else {
            ExtendedReal::Finite(x)
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::PosInfinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl std::fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PosInfinity => f.write_str("+inf"),
        }
    }
}

/// Raw parameter tuple; the conservative case `c = γ = 0` is implied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineParams {
    pub state_space: StateSpace,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub m_jumps: JumpSpec,
    #[serde(default)]
    pub mu_jumps: JumpSpec,
}

impl AffineParams {
    pub fn validate(self) -> Result<ValidatedParams> {
        ValidatedParams::new(self)
    }
}

/// Admissible parameters with their jump compensators and quasi-mean-reversion cached.
///
/// Immutable after construction; every evaluation is a pure function.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedParams {
    params: AffineParams,
    // ∫ h_F dm (nonzero only on ℝ) and ∫ h_R dμ (nonzero only on [0, ∞)).
    f_compensator: f64,
    r_compensator: f64,
    lambda: f64,
}

fn violation(field: &'static str, reason: impl Into<String>) -> Error {
    Error::AdmissibilityViolation { field, reason: reason.into() }
}

impl ValidatedParams {
    pub fn new(params: AffineParams) -> Result<Self> {
        for (field, v) in [("a", params.a), ("alpha", params.alpha), ("b", params.b), ("beta", params.beta)] {
            if !v.is_finite() {
                return Err(violation(field, format!("must be finite, got {v}")));
            }
        }
        params.m_jumps.check("m_jumps")?;
        params.mu_jumps.check("mu_jumps")?;
        if params.alpha < 0.0 {
            return Err(violation("alpha", "must be >= 0"));
        }

        match params.state_space {
            StateSpace::NonnegativeReals => {
                if params.a != 0.0 {
                    return Err(violation("a", "must be 0 on the state space [0, inf)"));
                }
                if params.b < 0.0 {
                    return Err(violation("b", "must be >= 0 on the state space [0, inf)"));
                }
            }
            StateSpace::Reals => {
                if params.a < 0.0 {
                    return Err(violation("a", "must be >= 0"));
                }
                if params.alpha != 0.0 {
                    return Err(violation("alpha", "must be 0 on the state space R"));
                }
                if !params.mu_jumps.is_zero() {
                    return Err(violation("mu_jumps", "must be absent on the state space R"));
                }
            }
        }

        let (f_compensator, r_compensator) = match params.state_space {
            StateSpace::NonnegativeReals => (0.0, params.mu_jumps.truncation_mean()?),
            StateSpace::Reals => (params.m_jumps.truncation_mean()?, 0.0),
        };

        let mut vp = ValidatedParams { params, f_compensator, r_compensator, lambda: 0.0 };
        if params.state_space == StateSpace::Reals {
            vp.check_bond_price_condition()?;
        }
        vp.lambda = vp.solve_quasi_mean_reversion()?;
        Ok(vp)
    }

    // On ℝ, F must be finite on (1/β, 0] (β < 0) or (-∞, 0] (otherwise).
    fn check_bond_price_condition(&self) -> Result<()> {
        let beta = self.params.beta;
        let lo = if beta < 0.0 { 1.0 / beta } else { f64::NEG_INFINITY };
        // F is finite exactly on (-∞, domain_upper), which must cover 0.
        if self.f_domain_upper() <= 0.0 {
            return Err(Error::ConditionViolation { lo });
        }
        Ok(())
    }

    pub fn params(&self) -> &AffineParams {
        &self.params
    }

    pub fn state_space(&self) -> StateSpace {
        self.params.state_space
    }

    /// F is finite exactly on `(-∞, f_domain_upper())`.
    pub fn f_domain_upper(&self) -> f64 {
        self.params.m_jumps.domain_upper()
    }

    /// `∫ ξ/(1+ξ²) dm` on ℝ, `∫ ξ/(1+ξ²) dμ` on `[0, ∞)`; the other is zero.
    pub fn compensators(&self) -> (f64, f64) {
        (self.f_compensator, self.r_compensator)
    }

    pub(crate) fn f_unchecked(&self, u: f64) -> f64 {
        let p = &self.params;
        let jump = p.m_jumps.laplace_part(u);
        if jump == f64::INFINITY {
            return f64::INFINITY;
        }
        p.a * u * u + (p.b - self.f_compensator) * u + jump
    }

    pub(crate) fn f_prime_unchecked(&self, u: f64) -> f64 {
        let p = &self.params;
        2.0 * p.a * u + p.b - self.f_compensator + p.m_jumps.laplace_part_prime(u)
    }

    pub(crate) fn r_unchecked(&self, u: f64) -> f64 {
        let p = &self.params;
        p.alpha * u * u + (p.beta - self.r_compensator) * u + p.mu_jumps.laplace_part(u)
    }

    pub(crate) fn r_prime_unchecked(&self, u: f64) -> f64 {
        let p = &self.params;
        2.0 * p.alpha * u + p.beta - self.r_compensator + p.mu_jumps.laplace_part_prime(u)
    }

    /// `F(u)`, `+∞` outside its finiteness domain.
    pub fn f(&self, u: f64) -> ExtendedReal {
        ExtendedReal::from_f64(self.f_unchecked(u))
    }

    /// `F'(u)` for `u` strictly inside the finiteness domain.
    pub fn f_prime(&self, u: f64) -> Result<f64> {
        if !(u < self.f_domain_upper()) {
            return Err(Error::Domain(format!(
                "F' requested at u = {u}, domain is (-inf, {})",
                self.f_domain_upper()
            )));
        }
        Ok(self.f_prime_unchecked(u))
    }

    /// `R(u)` for `u <= 0`.
    pub fn r(&self, u: f64) -> Result<f64> {
        if !(u <= 0.0) {
            return Err(Error::Domain(format!("R requested at u = {u} > 0")));
        }
        Ok(self.r_unchecked(u))
    }

    /// `R'(u)` for `u <= 0`.
    pub fn r_prime(&self, u: f64) -> Result<f64> {
        if !(u <= 0.0) {
            return Err(Error::Domain(format!("R' requested at u = {u} > 0")));
        }
        Ok(self.r_prime_unchecked(u))
    }

    /// `β₀ = β - ∫ h_R dμ`, the asymptotic slope of `R(u) - α u²`.
    pub fn beta_zero(&self) -> f64 {
        self.params.beta - self.r_compensator
    }

    /// Quasi-mean-reversion: the positive solution of `R(-1/λ) = 1`, or 0.
    pub fn quasi_mean_reversion(&self) -> f64 {
        self.lambda
    }

    pub fn f_is_linear(&self) -> bool {
        self.params.a == 0.0 && self.params.m_jumps.is_zero()
    }

    pub fn r_is_linear(&self) -> bool {
        self.params.alpha == 0.0 && self.params.mu_jumps.is_zero()
    }

    pub fn f_is_zero(&self) -> bool {
        self.f_is_linear() && self.params.b == 0.0
    }

    fn solve_quasi_mean_reversion(&self) -> Result<f64> {
        if !(self.params.alpha > 0.0 || self.beta_zero() < 0.0) {
            return Ok(0.0);
        }
        let mut hi = 0.0;
        let mut lo = -1.0;
        while self.r_unchecked(lo) < 1.0 {
            hi = lo;
            lo *= 2.0;
            if !lo.is_finite() {
                return Err(Error::Numerical("R(u) = 1 could not be bracketed".into()));
            }
        }
        let root = brent(|u| self.r_unchecked(u) - 1.0, lo, hi, 0.0, 500)?;
        Ok(-1.0 / root)
    }
}
