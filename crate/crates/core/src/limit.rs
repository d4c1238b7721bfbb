//! Stationary (limit) law of the short rate.

use crate::affine::ValidatedParams;
use crate::error::{Error, Result};
use crate::models::{JcirParams, DELTA_TOL};
use crate::numerics::integrate;

const CGF_ABS_TOL: f64 = 1e-10;
const CGF_REL_TOL: f64 = 1e-14;
const VARIANCE_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitExistence {
    Exists,
    DoesNotExist { reason: String },
}

impl LimitExistence {
    pub fn exists(&self) -> bool {
        matches!(self, LimitExistence::Exists)
    }
}

/// Whether `r_t` converges in law as `t → ∞`.
///
/// Requires `R'(0) < 0`; the logarithmic moment condition on the jumps holds
/// for every exponential jump law.
pub fn limit_exists(params: &ValidatedParams) -> LimitExistence {
    if params.r_prime_unchecked(0.0) < 0.0 {
        LimitExistence::Exists
    } else {
        LimitExistence::DoesNotExist { reason: "R'(0) >= 0".into() }
    }
}

fn require_limit(params: &ValidatedParams) -> Result<()> {
    match limit_exists(params) {
        LimitExistence::Exists => Ok(()),
        LimitExistence::DoesNotExist { reason } => {
            Err(Error::Parameter(format!("no limit distribution: {reason}")))
        }
    }
}

/// `κ(u) = ∫_u^0 F(s)/R(s) ds`, the cumulant generating function of the
/// limit law, for `u <= 0`.
pub fn cgf(params: &ValidatedParams, u: f64) -> Result<f64> {
    require_limit(params)?;
    cgf_unchecked(params, u)
}

fn cgf_unchecked(params: &ValidatedParams, u: f64) -> Result<f64> {
    if !(u <= 0.0 && u.is_finite()) {
        return Err(Error::Domain(format!("cgf requested at u = {u}, need finite u <= 0")));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    let at_zero = params.f_prime_unchecked(0.0) / params.r_prime_unchecked(0.0);
    let g = |s: f64| {
        if s == 0.0 {
            at_zero
        } else {
            params.f_unchecked(s) / params.r_unchecked(s)
        }
    };
    Ok(integrate(g, u, 0.0, CGF_ABS_TOL, CGF_REL_TOL)?.value)
}

/// Limit law summarised by its mean, variance and cumulant generating function.
#[derive(Debug, Clone)]
pub struct LimitDistribution {
    params: ValidatedParams,
    pub mean: f64,
    pub variance: f64,
}

impl LimitDistribution {
    pub fn params(&self) -> &ValidatedParams {
        &self.params
    }

    pub fn kappa(&self, u: f64) -> Result<f64> {
        cgf_unchecked(&self.params, u)
    }
}

/// Mean `-F'(0)/R'(0)` and variance `κ''(0-)` of the limit law.
///
/// The variance is a one-sided second difference of `κ` at `0-`,
/// Richardson-extrapolated over three step sizes.
pub fn limit_moments(params: &ValidatedParams) -> Result<LimitDistribution> {
    require_limit(params)?;
    let mean = -params.f_prime_unchecked(0.0) / params.r_prime_unchecked(0.0);

    // D(h) = (κ(0) - 2κ(-h) + κ(-2h)) / h² = κ'' - h κ''' + O(h²)
    let d = |h: f64| -> Result<f64> {
        Ok((-2.0 * cgf_unchecked(params, -h)? + cgf_unchecked(params, -2.0 * h)?) / (h * h))
    };
    let h = VARIANCE_STEP;
    let (d1, d2, d4) = (d(h)?, d(h / 2.0)?, d(h / 4.0)?);
    let (r1, r2) = (2.0 * d2 - d1, 2.0 * d4 - d2);
    let variance = (4.0 * r2 - r1) / 3.0;

    Ok(LimitDistribution { params: params.clone(), mean, variance })
}

fn check_jcir_delta_zero(p: &JcirParams) -> Result<()> {
    crate::models::NamedModel::Jcir(*p).check()?;
    let delta = p.delta();
    if delta.abs() > DELTA_TOL {
        return Err(Error::DeltaNonZero { delta });
    }
    Ok(())
}

/// `l(x) = (θ + (c/a) x) ν e^{-νx}`, the canonical function of the jump-CIR
/// limit law when `Δ = 0`.
pub fn jcir_l(p: &JcirParams, x: f64) -> Result<f64> {
    check_jcir_delta_zero(p)?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x must be > 0, got {x}")));
    }
    Ok((p.theta + p.c / p.a * x) * p.nu * (-p.nu * x).exp())
}

/// Lévy density `l(x)/x` of the jump-CIR limit law when `Δ = 0`.
pub fn jcir_levy_density(p: &JcirParams, x: f64) -> Result<f64> {
    Ok(jcir_l(p, x)? / x)
}

/// True iff the jump-CIR limit law is self-decomposable, i.e. `c <= aθν`.
pub fn jcir_self_decomposable(p: &JcirParams) -> Result<bool> {
    check_jcir_delta_zero(p)?;
    Ok(p.c <= p.a * p.theta * p.nu)
}

/// Maximiser `1/ν - aθ/c` of `l` when it lies in `(0, ∞)`.
pub fn jcir_density_peak(p: &JcirParams) -> Result<Option<f64>> {
    check_jcir_delta_zero(p)?;
    let x = 1.0 / p.nu - p.a * p.theta / p.c;
    Ok((x > 0.0).then_some(x))
}
