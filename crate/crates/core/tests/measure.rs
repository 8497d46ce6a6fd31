use std::f64::consts::PI;

use fockbench::distributions::{binomial_pmf, BinomialParams, MultinomialParams};
use fockbench::fock::{fidelity, Cutoff, OccupationVector, TruncatedBasis};
use fockbench::measure::{
    convergence_study, measure_density, projected_state, projector_fixed_m, resolution_check,
    slicing_check, MeasureSpec, RadialMap,
};
use fockbench::states::{binomial_state, multinomial_state};
use fockbench::{Complex64, Execution};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn density_values() {
    assert!((measure_density(1, &[c(0.0, 0.0)]) - 2.0 / PI).abs() < 1e-15);
    assert!((measure_density(1, &[c(0.0, 0.0), c(0.0, 0.0)]) - 6.0 / (PI * PI)).abs() < 1e-15);
    // (M+1)/(π(1+ρ²)²) at ρ² = 3, M = 2.
    let want = 3.0 / (PI * 16.0);
    assert!((measure_density(2, &[c(1.0, 2.0f64.sqrt())]) - want).abs() < 1e-15);
}

#[test]
fn projector_ranks() {
    let b = TruncatedBasis::new(2, Cutoff::PerMode(5)).unwrap();
    let p = projector_fixed_m(&b, 4).unwrap();
    let rank: f64 = (0..b.len()).map(|i| p.get(i, i).re).sum();
    assert_eq!(rank, 5.0);
    let b = TruncatedBasis::new(3, Cutoff::Shell(3)).unwrap();
    let p = projector_fixed_m(&b, 3).unwrap();
    assert_eq!(p.matmul(&p).unwrap().max_abs_diff(&p).unwrap(), 0.0);
    let rank: f64 = (0..b.len()).map(|i| p.get(i, i).re).sum();
    assert_eq!(rank, 10.0);
}

#[test]
fn projected_state_examples() {
    let b = TruncatedBasis::new(3, Cutoff::Total(3)).unwrap();
    let s = projected_state(3, &[c(0.0, 0.0), c(0.0, 0.0)], &b).unwrap();
    let top = OccupationVector::new(vec![3, 0, 0]);
    assert_eq!(s.amplitude(&top), Some(c(1.0, 0.0)));
    assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    assert!(projected_state(3, &[c(f64::NAN, 0.0), c(0.0, 0.0)], &b).is_err());
    assert!(projected_state(3, &[c(0.0, 0.0)], &b).is_err());
}

#[test]
fn projected_state_matches_binomial() {
    let b = TruncatedBasis::new(1, Cutoff::PerMode(12)).unwrap();
    let shell = TruncatedBasis::new(2, Cutoff::Shell(7)).unwrap();
    for &x in &[0.05, 0.3, 1.0, 2.5, 10.0] {
        for &th in &[0.0, 0.7, -2.0] {
            let xi = Complex64::from_polar(x, th);
            let proj = projected_state(7, &[xi], &shell).unwrap();
            let eta2 = x * x / (1.0 + x * x);
            let bin = binomial_state(&BinomialParams::new(eta2, 7).unwrap(), th, &b).unwrap();
            // Reduce the two-mode shell state to the second mode.
            let mut amps = vec![c(0.0, 0.0); b.len()];
            for (occ, a) in shell.states().iter().zip(proj.amplitudes()) {
                amps[occ.as_slice()[1] as usize] = *a;
            }
            let reduced = fockbench::fock::StateVector::new(b.clone(), amps).unwrap();
            let f = fidelity(&reduced, &bin).unwrap();
            assert!((f - 1.0).abs() < 1e-12, "x={x} th={th} f={f}");
        }
    }
}

#[test]
fn projected_state_matches_multinomial() {
    let shell = TruncatedBasis::new(3, Cutoff::Shell(4)).unwrap();
    let xi = [
        Complex64::from_polar(0.8, 0.4),
        Complex64::from_polar(1.7, -1.1),
    ];
    let s: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
    let eta: Vec<f64> = xi.iter().map(|z| z.norm() / (1.0 + s).sqrt()).collect();
    let ms = multinomial_state(
        &MultinomialParams::new(eta, 4).unwrap(),
        &[0.4, -1.1],
        &shell,
    )
    .unwrap();
    let proj = projected_state(4, &xi, &shell).unwrap();
    assert!((fidelity(&ms, &proj).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn rank_one_resolution() {
    for m in [1, 2, 3] {
        let spec = MeasureSpec::new(1, m, 64).unwrap();
        let rep = resolution_check(&spec, Execution::Parallel).unwrap();
        assert!(rep.passed(1e-8), "{rep:?}");
    }
}

#[test]
fn rank_two_resolution() {
    for m in [1, 2] {
        let spec = MeasureSpec::new(2, m, 24).unwrap();
        let rep = resolution_check(&spec, Execution::Parallel).unwrap();
        assert!(rep.passed(1e-4), "{rep:?}");
    }
}

#[test]
fn execution_policy_is_bitwise_neutral() {
    let spec = MeasureSpec::new(2, 2, 10).unwrap();
    let a = resolution_check(&spec, Execution::Sequential).unwrap();
    let b = resolution_check(&spec, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn high_rank_behind_flag() {
    assert!(MeasureSpec::new(3, 1, 8).is_err());
    let spec = MeasureSpec {
        allow_high_rank: true,
        ..MeasureSpec::new(2, 1, 8).unwrap()
    };
    let spec = MeasureSpec { r: 3, ..spec };
    let rep = resolution_check(&spec, Execution::Parallel).unwrap();
    assert!(rep.passed(1e-10), "{rep:?}");
}

#[test]
fn per_variable_map_converges_monotonically() {
    let spec = MeasureSpec::new(2, 1, 8)
        .unwrap()
        .with_map(RadialMap::PerVariable);
    let study = convergence_study(&spec, &[8, 16, 32], Execution::Parallel).unwrap();
    for w in study.residuals.windows(2) {
        assert!(w[1] < w[0], "{study:?}");
    }
    assert!(study.orders.iter().all(|&p| p > 1.0), "{study:?}");
}

#[test]
fn trace_identity() {
    let spec = MeasureSpec::new(1, 5, 16).unwrap();
    let rep = resolution_check(&spec, Execution::Parallel).unwrap();
    assert!(rep.trace_residual < 1e-12);
    let json = serde_json::to_value(&rep).unwrap();
    for key in ["r", "M", "nodes", "max_entry_residual", "trace_residual"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

#[test]
fn slicing_examples() {
    let rep = slicing_check(&[1.0, 1.0], 2).unwrap();
    assert!(rep.max_relative_error < 1e-12);
    let half = BinomialParams::new(0.5, 2).unwrap();
    assert!((binomial_pmf(&half, 1).unwrap() - 0.5).abs() < 1e-15);
    let rep = slicing_check(&[0.3, 1.1, 0.7], 3).unwrap();
    assert_eq!(rep.shell_size, 10);
    assert!(rep.max_relative_error < 1e-12);
    let rep = slicing_check(&[0.3, 0.0, 0.7], 4).unwrap();
    assert!(rep.max_relative_error < 1e-12);
    let rep = slicing_check(&[0.05, 0.05, 2.9921459627146936], 2).unwrap();
    assert!(rep.max_relative_error < 1e-12);
    let rep = slicing_check(&[0.5, 2.0], 0).unwrap();
    assert_eq!(rep.shell_size, 1);
    assert_eq!(rep.max_relative_error, 0.0);
    assert!(slicing_check(&[0.0, 0.0], 2).is_err());
}

proptest! {
    #[test]
    fn slicing_matches_multinomial(
        a in prop::collection::vec(0.05f64..3.0, 2..5),
        m in 0u32..8,
    ) {
        let rep = slicing_check(&a, m).unwrap();
        prop_assert!(rep.max_relative_error < 1e-12, "{:?}", rep);
    }

    #[test]
    fn projected_state_is_normalized(
        re in prop::collection::vec(-5.0f64..5.0, 2),
        im in prop::collection::vec(-5.0f64..5.0, 2),
        m in 0u32..6,
    ) {
        let shell = TruncatedBasis::new(3, Cutoff::Shell(m)).unwrap();
        let xi: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| c(a, b)).collect();
        let s = projected_state(m, &xi, &shell).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-13);
    }
}
