//! Riccati equations of the bond price and of the transition kernel.

use crate::affine::ValidatedParams;
use crate::error::{Error, Result};
use crate::numerics::ode::{self, DenseSolution, OdeOptions};

const LOCAL_TOL_FACTOR: f64 = 0.02;

/// Absolute and relative accuracy targets for `A` and `B`.
///
/// The integrator's local error control runs tighter than these, since
/// local errors accumulate over the steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { abs: 1e-12, rel: 1e-10 }
    }
}

impl Tolerances {
    fn ode_options(self) -> OdeOptions {
        OdeOptions {
            abs_tol: LOCAL_TOL_FACTOR * self.abs,
            rel_tol: LOCAL_TOL_FACTOR * self.rel,
            ..OdeOptions::default()
        }
    }
}

/// Solution `(A, B)` of `A' = F(B)`, `B' = R(B) - 1`, `A(0) = B(0) = 0`
/// on `[0, x_max]`, so that `P(t, t + x) = exp(A(x) + r B(x))`.
#[derive(Debug, Clone)]
pub struct TermStructure {
    params: ValidatedParams,
    x_max: f64,
    tolerances: Tolerances,
    solution: DenseSolution<2>,
}

/// Solves the bond-price equations up to maturity `x_max`.
pub fn solve_term_structure(params: &ValidatedParams, x_max: f64, tol: Tolerances) -> Result<TermStructure> {
    if !(x_max.is_finite() && x_max >= 0.0) {
        return Err(Error::Domain(format!("x_max must be finite and >= 0, got {x_max}")));
    }
    let lambda = params.quasi_mean_reversion();
    if lambda > 0.0 && !params.f(-1.0 / lambda).is_finite() {
        return Err(Error::Finiteness { max_x: 0.0 });
    }
    let solution = ode::solve(
        |_, y: &[f64; 2]| [params.f_unchecked(y[1]), params.r_unchecked(y[1]) - 1.0],
        0.0,
        [0.0, 0.0],
        x_max,
        &tol.ode_options(),
    )?;
    Ok(TermStructure { params: params.clone(), x_max, tolerances: tol, solution })
}

impl TermStructure {
    pub fn params(&self) -> &ValidatedParams {
        &self.params
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if !(x >= 0.0 && x <= self.x_max * (1.0 + 1e-14)) {
            return Err(Error::Domain(format!("maturity {x} outside [0, {}]", self.x_max)));
        }
        Ok(())
    }

    fn check_r(&self, r: f64) -> Result<()> {
        if !self.params.state_space().contains(r) {
            return Err(Error::Domain(format!("short rate {r} outside the state space")));
        }
        Ok(())
    }

    #[allow(non_snake_case)]
    pub fn A(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        Ok(self.solution.eval(x)[0])
    }

    #[allow(non_snake_case)]
    pub fn B(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        Ok(self.solution.eval(x)[1])
    }

    pub fn bond_price(&self, r: f64, x: f64) -> Result<f64> {
        self.check_r(r)?;
        self.check_x(x)?;
        if x == 0.0 {
            return Ok(1.0);
        }
        let [a, b] = self.solution.eval(x);
        Ok((a + r * b).exp())
    }

    /// `Y(r, x) = -(A(x) + r B(x)) / x`, with `Y(r, 0) = r`.
    pub fn yield_rate(&self, r: f64, x: f64) -> Result<f64> {
        self.check_r(r)?;
        self.check_x(x)?;
        if x == 0.0 {
            return Ok(r);
        }
        let [a, b] = self.solution.eval(x);
        Ok(-(a + r * b) / x)
    }

    /// `f(r, x) = -F(B(x)) - r (R(B(x)) - 1)`, with `f(r, 0) = r`.
    pub fn forward(&self, r: f64, x: f64) -> Result<f64> {
        self.check_r(r)?;
        self.check_x(x)?;
        if x == 0.0 {
            return Ok(r);
        }
        let b = self.solution.eval(x)[1];
        Ok(-self.params.f_unchecked(b) - r * (self.params.r_unchecked(b) - 1.0))
    }
}

/// Solutions `(φ, ψ)` of `φ' = F(ψ)`, `ψ' = R(ψ)`, `φ(0) = 0`, `ψ(0) = u`,
/// one per starting point `u`. The transition kernel satisfies
/// `log E[exp(u r_t) | r_0 = x] = φ(t, u) + x ψ(t, u)`.
#[derive(Debug, Clone)]
pub struct TransitionExponents {
    t_max: f64,
    u_grid: Vec<f64>,
    solutions: Vec<DenseSolution<2>>,
}

/// Solves the transition-kernel equations on `[0, t_max]` for every `u` in `u_grid`.
pub fn solve_transition_exponents(
    params: &ValidatedParams,
    t_max: f64,
    u_grid: &[f64],
    tol: Tolerances,
) -> Result<TransitionExponents> {
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(Error::Domain(format!("t_max must be finite and >= 0, got {t_max}")));
    }
    let solutions = u_grid
        .iter()
        .map(|&u| {
            if !(u <= 0.0 && params.f(u).is_finite()) {
                return Err(Error::Domain(format!("u = {u} must be <= 0 and inside the domain of F")));
            }
            Ok(ode::solve(
                |_, y: &[f64; 2]| [params.f_unchecked(y[1]), params.r_unchecked(y[1])],
                0.0,
                [0.0, u],
                t_max,
                &tol.ode_options(),
            )?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransitionExponents { t_max, u_grid: u_grid.to_vec(), solutions })
}

impl TransitionExponents {
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn u_grid(&self) -> &[f64] {
        &self.u_grid
    }

    fn eval(&self, t: f64, index: usize) -> Result<[f64; 2]> {
        let sol = self
            .solutions
            .get(index)
            .ok_or_else(|| Error::Domain(format!("u index {index} out of range")))?;
        if !(t >= 0.0 && t <= self.t_max * (1.0 + 1e-14)) {
            return Err(Error::Domain(format!("time {t} outside [0, {}]", self.t_max)));
        }
        Ok(sol.eval(t))
    }

    /// `φ(t, u_grid[index])`.
    pub fn phi(&self, t: f64, index: usize) -> Result<f64> {
        Ok(self.eval(t, index)?[0])
    }

    /// `ψ(t, u_grid[index])`.
    pub fn psi(&self, t: f64, index: usize) -> Result<f64> {
        Ok(self.eval(t, index)?[1])
    }

    /// `φ(t, u) + x ψ(t, u)` for `u = u_grid[index]`.
    pub fn log_transform(&self, t: f64, index: usize, x: f64) -> Result<f64> {
        let [phi, psi] = self.eval(t, index)?;
        Ok(phi + x * psi)
    }
}
