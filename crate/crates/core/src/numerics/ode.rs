//! Dormand–Prince 5(4) integrator with continuous (dense) output.
//!
//! Accepted steps keep the coefficients of the method's native order-4
//! continuous extension, so the solution can be queried anywhere on the
//! integration range at an accuracy matching the step tolerance.

use thiserror::Error;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    /// The right-hand side stopped being finite; `t` is the last reached time.
    #[error("right-hand side is not finite beyond t = {t}")]
    NonFinite { t: f64 },
    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub initial_step: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_step: 0.25, initial_step: 1e-3 }
    }
}

#[derive(Debug, Clone)]
struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    coeffs: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let s = ((t - self.t0) / self.h).clamp(0.0, 1.0);
        let s1 = 1.0 - s;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        std::array::from_fn(|i| r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i]))))
    }
}

/// Solution of an initial value problem on `[t_start, t_end]`.
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    t_start: f64,
    t_end: f64,
    y_start: [f64; N],
    steps: Vec<DenseStep<N>>,
}

impl<const N: usize> DenseSolution<N> {
    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    /// Interpolated state at `t`, clamped to the integration range.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if t <= self.t_start || self.steps.is_empty() {
            return self.y_start;
        }
        let idx = self.steps.partition_point(|s| s.t0 + s.h < t).min(self.steps.len() - 1);
        self.steps[idx].eval(t)
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn all_finite<const N: usize>(v: &[f64; N]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Integrates `y' = rhs(t, y)` from `(t0, y0)` to `t_end > t0`.
pub fn solve<const N: usize, F>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
) -> Result<DenseSolution<N>, OdeError>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut solution = DenseSolution { t_start: t0, t_end, y_start: y0, steps: Vec::new() };
    if t_end <= t0 {
        solution.t_end = t0;
        return Ok(solution);
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    if !all_finite(&k1) {
        return Err(OdeError::NonFinite { t });
    }
    let mut h = opts.initial_step.min(opts.max_step).min(t_end - t0);
    let h_min = 16.0 * f64::EPSILON * t_end.abs().max(1.0);

    for _ in 0..MAX_STEPS {
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = rhs(t + h, &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = rhs(t + h, &y1);

        let finite = [&k2, &k3, &k4, &k5, &k6, &k7, &y1].iter().all(|v| all_finite(v));
        if !finite {
            h *= 0.25;
            if h < h_min {
                return Err(OdeError::NonFinite { t });
            }
            continue;
        }

        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y1[i].abs());
            err_sq += (e / scale).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            let ydiff: [f64; N] = std::array::from_fn(|i| y1[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
            let coeffs = [
                y,
                ydiff,
                bspl,
                std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]),
                std::array::from_fn(|i| {
                    h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                }),
            ];
            solution.steps.push(DenseStep { t0: t, h, coeffs });
            t = if last { t_end } else { t + h };
            y = y1;
            k1 = k7;
            if last {
                return Ok(solution);
            }
            let factor =
                if err == 0.0 { MAX_FACTOR } else { (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR) };
            h = (h * factor).min(opts.max_step);
        } else {
            h *= (SAFETY * err.powf(-0.2)).max(MIN_FACTOR);
            if h < h_min {
                return Err(OdeError::TooManySteps { t });
            }
        }
    }
    Err(OdeError::TooManySteps { t })
}
