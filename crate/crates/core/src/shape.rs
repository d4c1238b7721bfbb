//! Shape of the yield curve as a function of the current short rate.

use crate::affine::{ExtendedReal, ValidatedParams};
use crate::error::{Error, Result};
use crate::numerics::{brent, golden_section_max};
use crate::riccati::{solve_term_structure, TermStructure, Tolerances};

const HUMP_XTOL: f64 = 1e-10;
const FLAT_RTOL: f64 = 1e-12;
const INITIAL_HORIZON: f64 = 50.0;
const MAX_HORIZON: f64 = 3200.0;

/// Short-rate thresholds of the curve shapes and the long-end yield.
///
/// Curves are normal for `r <= b_norm`, inverse for `r >= b_inv` and humped
/// in between; every curve tends to `b_asymp` as the maturity grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeBoundaries {
    pub lambda: f64,
    pub b_norm: f64,
    pub b_asymp: f64,
    pub b_inv: ExtendedReal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveShape {
    Normal,
    Inverse,
    /// The forward curve peaks at maturity `forward_max_x` with value `forward_max_value`.
    Humped {
        forward_max_x: f64,
        forward_max_value: f64,
    },
    Flat,
}

impl CurveShape {
    pub fn name(&self) -> &'static str {
        match self {
            CurveShape::Normal => "normal",
            CurveShape::Inverse => "inverse",
            CurveShape::Humped { .. } => "humped",
            CurveShape::Flat => "flat",
        }
    }
}

pub fn shape_boundaries(params: &ValidatedParams) -> Result<ShapeBoundaries> {
    let lambda = params.quasi_mean_reversion();
    if lambda == 0.0 {
        return Err(Error::LambdaZero);
    }
    let u = -1.0 / lambda;
    let b_norm = -params.f_prime(u)? / params.r_prime(u)?;
    let b_asymp = match params.f(u) {
        ExtendedReal::Finite(v) => -v,
        ExtendedReal::PosInfinity => return Err(Error::Finiteness { max_x: 0.0 }),
    };
    let r0 = params.r_prime(0.0)?;
    let b_inv =
        if r0 < 0.0 { ExtendedReal::Finite(-params.f_prime(0.0)? / r0) } else { ExtendedReal::PosInfinity };
    Ok(ShapeBoundaries { lambda, b_norm, b_asymp, b_inv })
}

/// `lim_{u → -∞} -F(u) + r (1 - R(u))`, the long-end yield when `λ = 0`.
///
/// May be `±∞`. The expression is evaluated for any parameters but is the
/// long-end yield only when the quasi-mean-reversion vanishes.
pub fn b_asymp_lambda_zero(params: &ValidatedParams, r: f64) -> f64 {
    let p = params.params();
    let (f_comp, _) = params.compensators();
    // -F(u) + r(1 - R(u)) = q2 u² + q1 u + q0 + o(1)
    let q2 = -(p.a + r * p.alpha);
    let q1 = -((p.b - f_comp) + r * params.beta_zero());
    let q0 =
        -p.m_jumps.laplace_part_at_minus_infinity() + r * (1.0 - p.mu_jumps.laplace_part_at_minus_infinity());
    if q2 < 0.0 {
        f64::NEG_INFINITY
    } else if q2 > 0.0 {
        f64::INFINITY
    } else if q1 > 0.0 {
        f64::NEG_INFINITY
    } else if q1 < 0.0 {
        f64::INFINITY
    } else {
        q0
    }
}

fn check_classifiable(params: &ValidatedParams, r: f64) -> Result<()> {
    if !params.state_space().contains(r) {
        return Err(Error::Domain(format!("short rate {r} outside the state space")));
    }
    if params.quasi_mean_reversion() == 0.0 {
        return Err(Error::LambdaZero);
    }
    if params.f_is_zero() {
        return Err(Error::DegenerateF);
    }
    Ok(())
}

// Shape of a deterministic model (F and R linear), if it is one.
fn linear_shape(params: &ValidatedParams, r: f64) -> Option<CurveShape> {
    if !(params.f_is_linear() && params.r_is_linear()) {
        return None;
    }
    let p = params.params();
    let level = -p.b / p.beta;
    Some(if (r - level).abs() <= FLAT_RTOL * level.abs() {
        CurveShape::Flat
    } else if p.b + r * p.beta > 0.0 {
        CurveShape::Normal
    } else {
        CurveShape::Inverse
    })
}

fn threshold_shape(bounds: &ShapeBoundaries, r: f64) -> Option<CurveShape> {
    if r <= bounds.b_norm {
        Some(CurveShape::Normal)
    } else if ExtendedReal::Finite(r) >= bounds.b_inv {
        Some(CurveShape::Inverse)
    } else {
        None
    }
}

/// Classifies the yield curve at short rate `r`, solving the term structure
/// as far as needed to locate the forward-rate maximum of a humped curve.
pub fn classify(params: &ValidatedParams, r: f64) -> Result<CurveShape> {
    check_classifiable(params, r)?;
    if let Some(shape) = linear_shape(params, r) {
        return Ok(shape);
    }
    if let Some(shape) = threshold_shape(&shape_boundaries(params)?, r) {
        return Ok(shape);
    }
    let mut x_max = INITIAL_HORIZON;
    loop {
        let ts = solve_term_structure(params, x_max, Tolerances::default())?;
        match humped(&ts, r) {
            Err(Error::HorizonTooShort { .. }) if x_max < MAX_HORIZON => x_max *= 2.0,
            other => return other,
        }
    }
}

/// Classifies the yield curve at short rate `r` on an already solved term structure.
pub fn classify_with(ts: &TermStructure, r: f64) -> Result<CurveShape> {
    let params = ts.params();
    check_classifiable(params, r)?;
    if let Some(shape) = linear_shape(params, r) {
        return Ok(shape);
    }
    if let Some(shape) = threshold_shape(&shape_boundaries(params)?, r) {
        return Ok(shape);
    }
    humped(ts, r)
}

fn humped(ts: &TermStructure, r: f64) -> Result<CurveShape> {
    let x = forward_hump_location(ts, r)?;
    Ok(CurveShape::Humped { forward_max_x: x, forward_max_value: ts.forward(r, x)? })
}

/// Maturity `x*` at which the forward curve of a humped yield curve peaks,
/// the zero of `k(x) = F'(B(x)) + r R'(B(x))`.
pub fn forward_hump_location(ts: &TermStructure, r: f64) -> Result<f64> {
    let params = ts.params();
    check_classifiable(params, r)?;
    let humped =
        linear_shape(params, r).is_none() && threshold_shape(&shape_boundaries(params)?, r).is_none();
    if !humped {
        return Err(Error::NotHumped { r });
    }
    let k = |x: f64| {
        let b = ts.B(x).expect("x within the solved horizon");
        params.f_prime_unchecked(b) + r * params.r_prime_unchecked(b)
    };
    let x_max = ts.x_max();
    if k(0.0) <= 0.0 {
        return Err(Error::NotHumped { r });
    }
    if k(x_max) > 0.0 {
        return Err(Error::HorizonTooShort { x_max });
    }
    Ok(brent(k, 0.0, x_max, HUMP_XTOL, 500)?)
}

/// Maturity and value of the yield-curve maximum, by golden-section search on
/// `[0, x_max]`.
pub fn yield_hump_location(ts: &TermStructure, r: f64) -> Result<(f64, f64)> {
    ts.yield_rate(r, 0.0)?;
    let x = golden_section_max(|x| ts.yield_rate(r, x).unwrap_or(f64::NAN), 0.0, ts.x_max(), 1e-8);
    Ok((x, ts.yield_rate(r, x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{AffineParams, JumpSpec, StateSpace};

    fn cir() -> ValidatedParams {
        AffineParams {
            state_space: StateSpace::NonnegativeReals,
            a: 0.0,
            alpha: 0.125,
            b: 0.03,
            beta: -0.5,
            m_jumps: JumpSpec::None,
            mu_jumps: JumpSpec::None,
        }
        .validate()
        .unwrap()
    }

    fn linear(b: f64, beta: f64) -> ValidatedParams {
        AffineParams {
            state_space: StateSpace::NonnegativeReals,
            a: 0.0,
            alpha: 0.0,
            b,
            beta,
            m_jumps: JumpSpec::None,
            mu_jumps: JumpSpec::None,
        }
        .validate()
        .unwrap()
    }

    #[test]
    fn cir_boundaries() {
        let sb = shape_boundaries(&cir()).unwrap();
        let gamma = (0.25f64 + 0.5).sqrt();
        assert!((sb.b_norm - 0.03 / gamma).abs() < 1e-14);
        assert!((sb.b_asymp - 0.06 / (gamma + 0.5)).abs() < 1e-14);
        assert_eq!(sb.b_inv, ExtendedReal::Finite(0.06));
        assert!((sb.b_norm - 0.034_641_0).abs() < 1e-7);
        assert!((sb.b_asymp - 0.043_923_0).abs() < 1e-7);
    }

    #[test]
    fn cir_classification() {
        let p = cir();
        assert!(matches!(classify(&p, 0.042).unwrap(), CurveShape::Humped { .. }));
        assert_eq!(classify(&p, 0.06).unwrap(), CurveShape::Inverse);
        assert_eq!(classify(&p, 0.03).unwrap(), CurveShape::Normal);
        assert_eq!(classify(&p, 0.07).unwrap(), CurveShape::Inverse);
        assert!(matches!(classify(&p, -0.01), Err(Error::Domain(_))));
    }

    #[test]
    fn forward_peaks_at_hump_location() {
        let p = cir();
        let r = 0.042;
        let ts = solve_term_structure(&p, 50.0, Tolerances::default()).unwrap();
        let x = forward_hump_location(&ts, r).unwrap();
        let d = 1e-3;
        let slope = |x: f64| (ts.forward(r, x + 1e-5).unwrap() - ts.forward(r, x - 1e-5).unwrap()) / 2e-5;
        assert!(slope(x - d) > 0.0 && slope(x + d) < 0.0);
        assert!(matches!(forward_hump_location(&ts, 0.03), Err(Error::NotHumped { .. })));
    }

    #[test]
    fn hump_moves_out_near_b_norm_and_in_near_b_inv() {
        let p = cir();
        let sb = shape_boundaries(&p).unwrap();
        let ts = solve_term_structure(&p, 200.0, Tolerances::default()).unwrap();
        let near_norm: Vec<f64> =
            [1e-3, 1e-4, 1e-5].iter().map(|e| forward_hump_location(&ts, sb.b_norm + e).unwrap()).collect();
        assert!(near_norm.windows(2).all(|w| w[1] > w[0]));
        let near_inv: Vec<f64> =
            [1e-3, 1e-4, 1e-5].iter().map(|e| forward_hump_location(&ts, 0.06 - e).unwrap()).collect();
        assert!(near_inv.windows(2).all(|w| w[1] < w[0]));
        assert!(near_inv[2] < 1e-2);
    }

    #[test]
    fn short_horizon_is_reported() {
        let p = cir();
        let sb = shape_boundaries(&p).unwrap();
        let ts = solve_term_structure(&p, 1.0, Tolerances::default()).unwrap();
        assert!(matches!(forward_hump_location(&ts, sb.b_norm + 1e-4), Err(Error::HorizonTooShort { .. })));
    }

    #[test]
    fn deterministic_shapes() {
        let p = linear(0.02, -0.5);
        assert_eq!(classify(&p, 0.04).unwrap(), CurveShape::Flat);
        assert_eq!(classify(&p, 0.03).unwrap(), CurveShape::Normal);
        assert_eq!(classify(&p, 0.05).unwrap(), CurveShape::Inverse);
    }

    #[test]
    fn refusals() {
        assert_eq!(classify(&linear(0.02, 0.0), 0.01), Err(Error::LambdaZero));
        assert_eq!(shape_boundaries(&linear(0.02, 0.0)), Err(Error::LambdaZero));
        assert_eq!(classify(&linear(0.0, -0.5), 0.01), Err(Error::DegenerateF));
    }

    #[test]
    fn lambda_zero_long_end() {
        assert_eq!(b_asymp_lambda_zero(&linear(0.02, 0.0), 0.03), f64::INFINITY);
        assert_eq!(b_asymp_lambda_zero(&linear(0.0, 0.0), 0.03), 0.03);
        let p = AffineParams {
            state_space: StateSpace::NonnegativeReals,
            a: 0.0,
            alpha: 0.0,
            b: 0.0,
            beta: 0.0,
            m_jumps: JumpSpec::CompoundPoissonExp { intensity: 0.1, jump_rate: 10.0 },
            mu_jumps: JumpSpec::None,
        }
        .validate()
        .unwrap();
        assert!((b_asymp_lambda_zero(&p, 0.03) - 0.13).abs() < 1e-15);
    }

    #[test]
    fn curve_shape_names() {
        assert_eq!(CurveShape::Flat.name(), "flat");
        assert_eq!(CurveShape::Humped { forward_max_x: 1.0, forward_max_value: 0.1 }.name(), "humped");
    }
}
