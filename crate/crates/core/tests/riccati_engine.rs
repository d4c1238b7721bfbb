mod common;

use affine_yield::{
    empirical_log_mgf, simulate_terminal, solve_term_structure, solve_transition_exponents, AffineParams,
    CirParams, Error, JumpSpec, NamedModel, SimConfig, StateSpace, Tolerances,
};
use proptest::prelude::*;

const CIR: NamedModel = NamedModel::Cir(CirParams { a: 0.5, theta: 0.06, sigma: 0.5 });

fn uniforms() -> impl Strategy<Value = [f64; 10]> {
    prop::array::uniform10(0.0..1.0f64)
}

#[test]
fn cir_yield_at_4_2_percent_has_one_interior_maximum() {
    let ts = solve_term_structure(&CIR.to_affine().unwrap(), 25.0, Tolerances::default()).unwrap();
    let y = common::sampled_yields(&ts, 0.042, 25.0, 2000);
    assert_eq!(common::observed_shape(&y), common::Observed::SingleMax);
    let peak = y.iter().cloned().fold(f64::MIN, f64::max);
    assert!(peak > y[0] && peak > y[2000]);
}

#[test]
fn lambda_zero_b_diverges() {
    let p = AffineParams {
        state_space: StateSpace::NonnegativeReals,
        a: 0.0,
        alpha: 0.0,
        b: 0.01,
        beta: 0.2,
        m_jumps: JumpSpec::CompoundPoissonExp { intensity: 0.5, jump_rate: 10.0 },
        mu_jumps: JumpSpec::None,
    }
    .validate()
    .unwrap();
    assert_eq!(p.quasi_mean_reversion(), 0.0);
    let ends: Vec<f64> = [5.0, 10.0, 20.0, 40.0]
        .iter()
        .map(|&x| solve_term_structure(&p, x, Tolerances::default()).unwrap().B(x).unwrap())
        .collect();
    assert!(ends.windows(2).all(|w| w[1] < 2.0 * w[0]));
    assert!(ends[3] < -1e3);
}

#[test]
fn b_approaches_its_limit() {
    let p = CIR.to_affine().unwrap();
    let limit = -1.0 / p.quasi_mean_reversion();
    let gaps: Vec<f64> = [2.0, 4.0, 8.0, 16.0]
        .iter()
        .map(|&x| {
            let ts = solve_term_structure(&p, x, Tolerances::default()).unwrap();
            (ts.B(x).unwrap() - limit).abs()
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn cir_transition_matches_monte_carlo() {
    let p = CIR.to_affine().unwrap();
    let te = solve_transition_exponents(&p, 1.0, &[-1.0], Tolerances::default()).unwrap();
    let theory = te.log_transform(1.0, 0, 0.04).unwrap();
    let cfg = SimConfig { model: CIR, r0: 0.04, horizon: 1.0, n_paths: 100_000, seed: 11 };
    let samples = simulate_terminal(&cfg).unwrap();
    let (est, se) = empirical_log_mgf(&samples, -1.0).unwrap();
    assert!((est - theory).abs() < 3.0 * se, "{est} vs {theory} (se {se})");
}

#[test]
fn transition_psi_moves_toward_zero() {
    let p = CIR.to_affine().unwrap();
    let te = solve_transition_exponents(&p, 10.0, &[-5.0, -0.3], Tolerances::default()).unwrap();
    for j in 0..2 {
        let psi: Vec<f64> = (0..=100).map(|i| te.psi(0.1 * i as f64, j).unwrap()).collect();
        assert!(psi.windows(2).all(|w| w[1] > w[0] && w[1] < 0.0));
    }
}

#[test]
fn transition_rejects_positive_u() {
    let p = CIR.to_affine().unwrap();
    assert!(matches!(
        solve_transition_exponents(&p, 1.0, &[0.5], Tolerances::default()),
        Err(Error::Domain(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn b_decreases_within_its_bounds(u in uniforms()) {
        if let Ok(v) = common::params_from_uniforms(u).validate() {
            prop_assume!(v.quasi_mean_reversion() > 0.0);
            let ts = solve_term_structure(&v, 30.0, Tolerances::default()).unwrap();
            let lower = -1.0 / v.quasi_mean_reversion();
            let mut prev = 0.0;
            for i in 1..=300 {
                let x = 0.1 * i as f64;
                let b = ts.B(x).unwrap();
                // Strict decrease is only observable while B is resolvably above its limit.
                if prev - lower > 1e-9 * lower.abs() {
                    prop_assert!(b < prev);
                    prop_assert!(b > lower);
                    prop_assert!(v.r(b).unwrap() - 1.0 < 0.0);
                } else {
                    prop_assert!(b <= prev && b >= lower * (1.0 + 1e-12));
                    prop_assert!(v.r(b).unwrap() - 1.0 <= 1e-12);
                }
                prev = b;
            }
        }
    }

    #[test]
    fn tolerance_refinement_is_consistent(u in uniforms()) {
        if let Ok(v) = common::params_from_uniforms(u).validate() {
            prop_assume!(v.quasi_mean_reversion() > 0.0);
            let coarse = Tolerances { abs: 1e-9, rel: 1e-8 };
            let fine = Tolerances { abs: 1e-11, rel: 1e-10 };
            let tc = solve_term_structure(&v, 25.0, coarse).unwrap();
            let tf = solve_term_structure(&v, 25.0, fine).unwrap();
            for i in 0..=250 {
                let x = 0.1 * i as f64;
                let (a, b) = (tf.A(x).unwrap(), tf.B(x).unwrap());
                prop_assert!((tc.A(x).unwrap() - a).abs() <= coarse.abs + coarse.rel * a.abs());
                prop_assert!((tc.B(x).unwrap() - b).abs() <= coarse.abs + coarse.rel * b.abs());
            }
        }
    }

    #[test]
    fn forward_identity(u in uniforms(), t in 0.0..1.0f64) {
        if let Ok(v) = common::params_from_uniforms(u).validate() {
            prop_assume!(v.quasi_mean_reversion() > 0.0);
            let r = match v.state_space() {
                StateSpace::Reals => -0.05 + 0.2 * t,
                StateSpace::NonnegativeReals => 0.15 * t,
            };
            let ts = solve_term_structure(&v, 25.0, Tolerances::default()).unwrap();
            let h = 1e-4;
            for i in 1..25 {
                let x = i as f64;
                let y = ts.yield_rate(r, x).unwrap();
                let dy = (ts.yield_rate(r, x + h).unwrap() - ts.yield_rate(r, x - h).unwrap()) / (2.0 * h);
                prop_assert!((ts.forward(r, x).unwrap() - (y + x * dy)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn ou_psi_is_exponential(u in uniforms(), start in -10.0..0.0f64) {
        let mut u = u;
        u[0] = 0.75;
        let v = common::params_from_uniforms(u).validate().unwrap();
        let beta = v.params().beta;
        let te = solve_transition_exponents(&v, 10.0, &[start], Tolerances::default()).unwrap();
        for i in 0..=100 {
            let t = 0.1 * i as f64;
            prop_assert!((te.psi(t, 0).unwrap() - start * (beta * t).exp()).abs() < 1e-9);
        }
    }
}
