#![allow(dead_code)]

use affine_yield::{AffineParams, JumpSpec, StateSpace, TermStructure, ValidatedParams};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DIFF_TOL: f64 = 1e-9;

/// Builds a parameter set from ten uniforms in `[0, 1)`.
pub fn params_from_uniforms(u: [f64; 10]) -> AffineParams {
    let jumps = |on: bool, intensity: f64, rate: f64| {
        if on {
            JumpSpec::CompoundPoissonExp { intensity, jump_rate: rate }
        } else {
            JumpSpec::None
        }
    };
    if u[0] < 0.5 {
        AffineParams {
            state_space: StateSpace::NonnegativeReals,
            a: 0.0,
            alpha: ((u[1] - 0.2) / 0.8).max(0.0) * 0.5,
            b: 0.002 + 0.1 * u[2],
            beta: -2.0 + 2.3 * u[3],
            m_jumps: jumps(u[4] >= 0.5, 0.02 + 0.5 * u[5], 5.0 + 45.0 * u[6]),
            mu_jumps: jumps(u[7] >= 0.6, 0.1 + 1.5 * u[8], 1.0 + 19.0 * u[9]),
        }
    } else {
        AffineParams {
            state_space: StateSpace::Reals,
            a: 0.02 * u[1],
            alpha: 0.0,
            b: -0.05 + 0.15 * u[2],
            beta: -(0.05 + 1.95 * u[3]),
            m_jumps: jumps(u[4] >= 0.5, 0.02 + 0.5 * u[5], 5.0 + 45.0 * u[6]),
            mu_jumps: JumpSpec::None,
        }
    }
}

/// Validated parameters with λ > 0, F ≠ 0 and F or R non-linear.
pub fn shape_model(u: [f64; 10]) -> Option<ValidatedParams> {
    let v = params_from_uniforms(u).validate().ok()?;
    let ok = v.quasi_mean_reversion() > 0.0 && !v.f_is_zero() && !(v.f_is_linear() && v.r_is_linear());
    ok.then_some(v)
}

pub fn uniforms<R: Rng>(rng: &mut R) -> [f64; 10] {
    std::array::from_fn(|_| rng.random::<f64>())
}

/// `n` shape models drawn from a seeded generator.
pub fn random_shape_models(seed: u64, n: usize) -> Vec<ValidatedParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::repeat_with(|| shape_model(uniforms(&mut rng))).flatten().take(n).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observed {
    Increasing,
    Decreasing,
    SingleMax,
    Other,
}

/// Monotonicity pattern of a sampled curve, ignoring first differences of
/// magnitude at most [`DIFF_TOL`].
pub fn observed_shape(values: &[f64]) -> Observed {
    let signs: Vec<bool> =
        values.windows(2).map(|w| w[1] - w[0]).filter(|d| d.abs() > DIFF_TOL).map(|d| d > 0.0).collect();
    let ups_to_downs = signs.windows(2).filter(|w| w[0] && !w[1]).count();
    let downs_to_ups = signs.windows(2).filter(|w| !w[0] && w[1]).count();
    match (signs.iter().any(|&s| s), signs.iter().any(|&s| !s)) {
        (_, false) => Observed::Increasing,
        (false, true) => Observed::Decreasing,
        (true, true) if ups_to_downs == 1 && downs_to_ups == 0 => Observed::SingleMax,
        _ => Observed::Other,
    }
}

/// Yields at `n + 1` equally spaced maturities on `[0, x_max]`.
pub fn sampled_yields(ts: &TermStructure, r: f64, x_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| ts.yield_rate(r, x_max * i as f64 / n as f64).unwrap()).collect()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Short rates in the normal, humped and inverse regions of `params`; the
/// humped rate is moved toward `b_inv` until the yield maximum sits at a
/// maturity of at most `visible_within`. `None` marks an empty region.
pub fn region_rates(params: &ValidatedParams, t: f64, visible_within: f64) -> [Option<f64>; 3] {
    use affine_yield::{shape_boundaries, solve_term_structure, yield_hump_location, Tolerances};
    let sb = shape_boundaries(params).unwrap();
    let nonneg = params.state_space() == StateSpace::NonnegativeReals;

    let normal = if nonneg { sb.b_norm * t } else { sb.b_norm - 0.05 * t };
    let inverse = sb.b_inv.finite().map(|b| b + 0.05 * t);

    let hi = sb.b_inv.finite().unwrap_or(f64::INFINITY).min(sb.b_norm + 1.0);
    let ts = solve_term_structure(params, 400.0, Tolerances::default()).unwrap();
    let mut s = 0.3 + 0.6 * t;
    let mut humped = None;
    for _ in 0..60 {
        let r = sb.b_norm + s * (hi - sb.b_norm);
        if r <= sb.b_norm || r >= hi {
            break;
        }
        let (x, _) = yield_hump_location(&ts, r).unwrap();
        if x <= visible_within {
            humped = Some(r);
            break;
        }
        s = 1.0 - 0.5 * (1.0 - s);
    }
    [Some(normal).filter(|r| params.state_space().contains(*r)), humped, inverse]
}
