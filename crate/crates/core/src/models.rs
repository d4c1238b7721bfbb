//! The Vasiček, CIR, jump-CIR and gamma-OU models with their closed forms.
//!
//! The closed forms are independent of the generic engines and never fall
//! back to them: a quantity without a closed form yields
//! [`Error::NotAvailable`].

use serde::{Deserialize, Serialize};

use crate::affine::{AffineParams, ExtendedReal, JumpSpec, StateSpace, ValidatedParams};
use crate::error::{Error, Result};
use crate::shape::ShapeBoundaries;

/// Tolerance on `Δ = a - νσ²/2` below which the jump-CIR model is treated as `Δ = 0`.
pub const DELTA_TOL: f64 = 1e-12;

/// `dr = λ(θ - r) dt + σ dW` on ℝ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VasicekParams {
    pub lambda: f64,
    pub theta: f64,
    pub sigma: f64,
}

/// `dr = a(θ - r) dt + σ √r dW` on `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CirParams {
    pub a: f64,
    pub theta: f64,
    pub sigma: f64,
}

/// CIR plus compound Poisson jumps of intensity `c` and exponential sizes of rate `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JcirParams {
    pub a: f64,
    pub theta: f64,
    pub sigma: f64,
    pub c: f64,
    pub nu: f64,
}

/// `dr = -λ r dt + dJ`, `J` compound Poisson of intensity `λk` with
/// exponential jumps of mean `θ`; the stationary law is gamma(k, θ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaOuParams {
    pub lambda: f64,
    pub k: f64,
    pub theta: f64,
}

impl JcirParams {
    /// `Δ = a - νσ²/2`.
    pub fn delta(&self) -> f64 {
        self.a - self.nu * self.sigma * self.sigma / 2.0
    }

    fn gamma(&self) -> f64 {
        (self.a * self.a + 2.0 * self.sigma * self.sigma).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "snake_case")]
pub enum NamedModel {
    Vasicek(VasicekParams),
    Cir(CirParams),
    Jcir(JcirParams),
    GammaOu(GammaOuParams),
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn cir_gamma(a: f64, sigma: f64) -> f64 {
    (a * a + 2.0 * sigma * sigma).sqrt()
}

impl NamedModel {
    pub fn name(&self) -> &'static str {
        match self {
            NamedModel::Vasicek(_) => "vasicek",
            NamedModel::Cir(_) => "cir",
            NamedModel::Jcir(_) => "jcir",
            NamedModel::GammaOu(_) => "gamma_ou",
        }
    }

    pub fn check(&self) -> Result<()> {
        match *self {
            NamedModel::Vasicek(p) => {
                positive("lambda", p.lambda)?;
                positive("theta", p.theta)?;
                positive("sigma", p.sigma)
            }
            NamedModel::Cir(p) => {
                positive("a", p.a)?;
                positive("theta", p.theta)?;
                positive("sigma", p.sigma)
            }
            NamedModel::Jcir(p) => {
                positive("a", p.a)?;
                positive("theta", p.theta)?;
                positive("sigma", p.sigma)?;
                positive("c", p.c)?;
                positive("nu", p.nu)
            }
            NamedModel::GammaOu(p) => {
                positive("lambda", p.lambda)?;
                positive("k", p.k)?;
                positive("theta", p.theta)
            }
        }
    }

    pub fn state_space(&self) -> StateSpace {
        match self {
            NamedModel::Vasicek(_) => StateSpace::Reals,
            _ => StateSpace::NonnegativeReals,
        }
    }

    /// The induced raw parameters.
    pub fn affine_params(&self) -> Result<AffineParams> {
        self.check()?;
        let base = AffineParams {
            state_space: self.state_space(),
            a: 0.0,
            alpha: 0.0,
            b: 0.0,
            beta: 0.0,
            m_jumps: JumpSpec::None,
            mu_jumps: JumpSpec::None,
        };
        Ok(match *self {
            NamedModel::Vasicek(p) => {
                AffineParams { a: p.sigma * p.sigma / 2.0, b: p.lambda * p.theta, beta: -p.lambda, ..base }
            }
            NamedModel::Cir(p) => {
                AffineParams { alpha: p.sigma * p.sigma / 2.0, b: p.a * p.theta, beta: -p.a, ..base }
            }
            NamedModel::Jcir(p) => AffineParams {
                alpha: p.sigma * p.sigma / 2.0,
                b: p.a * p.theta,
                beta: -p.a,
                m_jumps: JumpSpec::CompoundPoissonExp { intensity: p.c, jump_rate: p.nu },
                ..base
            },
            NamedModel::GammaOu(p) => AffineParams {
                beta: -p.lambda,
                m_jumps: JumpSpec::CompoundPoissonExp { intensity: p.lambda * p.k, jump_rate: 1.0 / p.theta },
                ..base
            },
        })
    }

    pub fn to_affine(&self) -> Result<ValidatedParams> {
        self.affine_params()?.validate()
    }

    pub fn closed_form_lambda(&self) -> Result<f64> {
        self.check()?;
        Ok(match *self {
            NamedModel::Vasicek(p) => p.lambda,
            NamedModel::Cir(p) => (cir_gamma(p.a, p.sigma) + p.a) / 2.0,
            NamedModel::Jcir(p) => (p.gamma() + p.a) / 2.0,
            NamedModel::GammaOu(p) => p.lambda,
        })
    }

    pub fn closed_form_boundaries(&self) -> Result<ShapeBoundaries> {
        let lambda = self.closed_form_lambda()?;
        let (b_norm, b_asymp, b_inv) = match *self {
            NamedModel::Vasicek(VasicekParams { lambda: l, theta, sigma }) => {
                let s2 = sigma * sigma / (l * l);
                (theta - s2, theta - s2 / 2.0, theta)
            }
            NamedModel::Cir(CirParams { a, theta, sigma }) => {
                let gamma = cir_gamma(a, sigma);
                (a * theta / gamma, 2.0 * a * theta / (gamma + a), theta)
            }
            NamedModel::Jcir(p) => {
                let JcirParams { a, theta, sigma, c, nu } = p;
                let gamma = p.gamma();
                let s2 = sigma * sigma;
                let b_norm = a * theta / gamma + c * nu * s2 * s2 / (gamma * (s2 * nu + gamma - a).powi(2));
                // -F(-1/λ) with 1/λ = 2/(a + γ).
                let b_asymp = 2.0 * a * theta / (a + gamma) + 2.0 * c / (nu * (a + gamma) + 2.0);
                (b_norm, b_asymp, theta + c / (a * nu))
            }
            NamedModel::GammaOu(GammaOuParams { lambda: l, k, theta }) => {
                let s = 1.0 / theta + 1.0 / l;
                ((k / theta) / (s * s), k / s, k * theta)
            }
        };
        Ok(ShapeBoundaries { lambda, b_norm, b_asymp, b_inv: ExtendedReal::Finite(b_inv) })
    }

    /// `B(x)` for the OU-type models.
    #[allow(non_snake_case)]
    pub fn closed_form_B(&self, x: f64) -> Result<f64> {
        self.check()?;
        match *self {
            NamedModel::Vasicek(VasicekParams { lambda, .. })
            | NamedModel::GammaOu(GammaOuParams { lambda, .. }) => Ok(((-lambda * x).exp() - 1.0) / lambda),
            _ => Err(Error::NotAvailable(format!("closed-form B for {}", self.name()))),
        }
    }

    /// `A(x)` for the gamma-OU model.
    #[allow(non_snake_case)]
    pub fn closed_form_A(&self, x: f64) -> Result<f64> {
        match *self {
            NamedModel::GammaOu(GammaOuParams { lambda, k, theta }) => {
                let b = self.closed_form_B(x)?;
                Ok(lambda * k / (theta + lambda) * ((1.0 - theta * b).ln() - theta * x))
            }
            _ => Err(Error::NotAvailable(format!("closed-form A for {}", self.name()))),
        }
    }

    pub fn closed_form_bond_price(&self, r: f64, x: f64) -> Result<f64> {
        Ok((self.closed_form_A(x)? + r * self.closed_form_B(x)?).exp())
    }

    /// Cumulant generating function of the stationary law at `u <= 0`.
    pub fn closed_form_cgf(&self, u: f64) -> Result<f64> {
        self.check()?;
        Ok(match *self {
            NamedModel::Vasicek(VasicekParams { lambda, theta, sigma }) => {
                theta * u + sigma * sigma * u * u / (4.0 * lambda)
            }
            NamedModel::Cir(CirParams { a, theta, sigma }) => {
                let s2 = sigma * sigma;
                -(2.0 * a * theta / s2) * (1.0 - s2 * u / (2.0 * a)).ln()
            }
            NamedModel::Jcir(p) => {
                let JcirParams { a, theta, sigma, c, nu } = p;
                let rho = sigma * sigma / 2.0;
                let delta = p.delta();
                if delta.abs() <= DELTA_TOL {
                    -theta * nu * (1.0 - u / nu).ln() + (c / a) * u / (nu - u)
                } else {
                    (c / delta - a * theta / rho) * (1.0 - rho * u / a).ln()
                        - (c / delta) * (1.0 - u / nu).ln()
                }
            }
            NamedModel::GammaOu(GammaOuParams { k, theta, .. }) => -k * (1.0 - theta * u).ln(),
        })
    }

    /// Mean and variance of the stationary law.
    pub fn closed_form_limit_moments(&self) -> Result<(f64, f64)> {
        self.check()?;
        match *self {
            NamedModel::Vasicek(VasicekParams { lambda, theta, sigma }) => {
                Ok((theta, sigma * sigma / (2.0 * lambda)))
            }
            NamedModel::Cir(CirParams { a, theta, sigma }) => {
                let shape = 2.0 * a * theta / (sigma * sigma);
                let scale = sigma * sigma / (2.0 * a);
                Ok((shape * scale, shape * scale * scale))
            }
            NamedModel::GammaOu(GammaOuParams { k, theta, .. }) => Ok((k * theta, k * theta * theta)),
            NamedModel::Jcir(_) => Err(Error::NotAvailable("closed-form limit moments for jcir".into())),
        }
    }
}
