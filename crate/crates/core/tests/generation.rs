use std::sync::Arc;

use fockbench::algebra::{su11_hp, su2_hp, Constraint, ConstraintSubspace};
use fockbench::distributions::{
    neg_binomial_pmf, BinomialParams, MultinomialParams, NegBinomialParams, NegMultinomialParams,
};
use fockbench::fock::{fidelity, Cutoff, OccupationVector, StateVector, TruncatedBasis};
use fockbench::generation::{
    contraction_check, current_alpha, disentangling_residual_su2, displacement_state,
    dynamical_binomial, dynamical_coherent, exp_form_state, operator_identity_check, sequential_ms,
    sequential_nms, su11_zeta, su2_zeta, CurrentDrive, CurrentSegment, IdentityFactor,
    TwoLevelDrive, DISPLACEMENT_GUARD,
};
use fockbench::states::{
    binomial_state, coherent_state_complex, multinomial_reduced_state, multinomial_state,
    neg_binomial_state, neg_multinomial_state, FamilyParams, StateSpec,
};
use fockbench::{Complex64, Error};

const PATH_TOL: f64 = 1e-8;

fn basis(modes: usize, cutoff: Cutoff) -> Arc<TruncatedBasis> {
    TruncatedBasis::new(modes, cutoff).unwrap()
}

#[test]
fn su11_paths_agree_on_grid() {
    let theta = 0.7;
    for &e2 in &[0.1, 0.3, 0.6] {
        for &m in &[1.0, 2.0, 3.0, 5.0] {
            let p = NegBinomialParams::new(e2, m).unwrap();
            let spec = StateSpec::new(FamilyParams::NegBinomial(p), vec![theta]).unwrap();
            let b = spec.auto_basis(DISPLACEMENT_GUARD).unwrap();
            let series = neg_binomial_state(&p, theta, &b, 1e-12).unwrap();
            let real = su11_hp(&b, m).unwrap();
            let exp = exp_form_state(&real, Complex64::from_polar(p.eta(), theta)).unwrap();
            let disp = displacement_state(&real, su11_zeta(p.eta(), theta)).unwrap();
            assert!(disp.leakage < 1e-8);
            for (x, y) in [(&series, &exp), (&series, &disp.state), (&exp, &disp.state)] {
                let f = fidelity(x, y).unwrap();
                assert!(f >= 1.0 - PATH_TOL, "η²={e2} M={m}: {f}");
            }
        }
    }
}

#[test]
fn su2_paths_agree_on_grid() {
    let theta = -1.1;
    for &e2 in &[0.1, 0.3, 0.6] {
        for &m in &[1u32, 2, 3, 5] {
            let p = BinomialParams::new(e2, m).unwrap();
            let b = basis(1, Cutoff::PerMode(m));
            let series = binomial_state(&p, theta, &b).unwrap();
            let real = su2_hp(&b, m).unwrap();
            let exp = exp_form_state(&real, Complex64::from_polar(p.eta(), theta)).unwrap();
            let disp = displacement_state(&real, su2_zeta(p.eta(), theta)).unwrap();
            for (x, y) in [(&series, &exp), (&series, &disp.state), (&exp, &disp.state)] {
                let f = fidelity(x, y).unwrap();
                assert!(f >= 1.0 - 1e-10, "η²={e2} M={m}: {f}");
            }
        }
    }
}

#[test]
fn displacement_reports_excess_leakage() {
    let b = basis(1, Cutoff::PerMode(6));
    let real = su11_hp(&b, 2.0).unwrap();
    let err = displacement_state(&real, su11_zeta(0.8, 0.0)).unwrap_err();
    assert!(matches!(err, Error::ExcessiveLeakage { .. }));
    assert!(exp_form_state(&real, Complex64::new(1.0, 0.0)).is_err());
}

fn nms_basis(eta2: &[f64], m: f64) -> Arc<TruncatedBasis> {
    StateSpec::real(FamilyParams::NegMultinomial(
        NegMultinomialParams::from_eta2(eta2, m).unwrap(),
    ))
    .auto_basis(DISPLACEMENT_GUARD)
    .unwrap()
}

#[test]
fn sequential_nms_rank_two() {
    let eta2 = [0.2, 0.1];
    let eta: Vec<f64> = eta2.iter().map(|x: &f64| x.sqrt()).collect();
    let thetas = [0.3, -0.5];
    let b = nms_basis(&eta2, 2.0);
    let out = sequential_nms(&eta, &thetas, 2.0, &b).unwrap();
    let p = NegMultinomialParams::from_eta2(&eta2, 2.0).unwrap();
    let direct = neg_multinomial_state(&p, &thetas, &b, 1e-12).unwrap();
    assert!(fidelity(&out.state, &direct).unwrap() >= 1.0 - PATH_TOL);
    assert!(out.leakage < 1e-8);

    // The first factor leaves a negative binomial state in the (0,1) subspace.
    let nb = NegBinomialParams::new(0.3, 2.0).unwrap();
    for (s, a) in b.states().iter().zip(out.intermediate.amplitudes()) {
        let want = if s[1] == 0 {
            neg_binomial_pmf(&nb, u64::from(s[0]))
        } else {
            0.0
        };
        assert!((a.norm_sqr() - want).abs() < 1e-12, "{s}");
    }
}

#[test]
fn sequential_nms_bilinear_form() {
    let eta2 = [0.2, 0.1];
    let eta: Vec<f64> = eta2.iter().map(|x: &f64| x.sqrt()).collect();
    let thetas = [0.0, 0.9];
    let reduced = nms_basis(&eta2, 2.0);
    let k = reduced.max_total();
    let parent = basis(3, Cutoff::Total(1 + 2 * k));
    let out = sequential_nms(&eta, &thetas, 2.0, &parent).unwrap();
    let sub =
        ConstraintSubspace::new(parent, reduced.clone(), Constraint::FixedDifference, 2).unwrap();
    let projected = sub.project_state(&out.state).unwrap();
    let p = NegMultinomialParams::from_eta2(&eta2, 2.0).unwrap();
    let direct = neg_multinomial_state(&p, &thetas, &reduced, 1e-12).unwrap();
    assert!(fidelity(&projected, &direct).unwrap() >= 1.0 - PATH_TOL);
    assert!((projected.norm_sqr() - 1.0).abs() < 1e-10);
}

#[test]
fn sequential_nms_rank_three() {
    let eta2 = [0.1, 0.15, 0.2];
    let eta: Vec<f64> = eta2.iter().map(|x: &f64| x.sqrt()).collect();
    let thetas = [0.2, -0.4, 1.3];
    let b = nms_basis(&eta2, 2.0);
    let out = sequential_nms(&eta, &thetas, 2.0, &b).unwrap();
    let p = NegMultinomialParams::from_eta2(&eta2, 2.0).unwrap();
    let direct = neg_multinomial_state(&p, &thetas, &b, 1e-12).unwrap();
    assert!(fidelity(&out.state, &direct).unwrap() >= 1.0 - PATH_TOL);
}

#[test]
fn sequential_nms_degenerate_second_component() {
    let b = nms_basis(&[0.3, 0.01], 2.0);
    let out = sequential_nms(&[0.3f64.sqrt(), 0.0], &[0.4, 0.0], 2.0, &b).unwrap();
    let nb = NegBinomialParams::new(0.3, 2.0).unwrap();
    let line = basis(1, Cutoff::PerMode(b.max_total()));
    let single = neg_binomial_state(&nb, 0.4, &line, 1e-12).unwrap();
    let mut embedded = StateVector::zeros(b.clone());
    for (n, a) in single.amplitudes().iter().enumerate() {
        let i = b
            .index_of(&OccupationVector::new(vec![n as u32, 0]))
            .unwrap();
        embedded.amplitudes_mut()[i] = *a;
    }
    assert!(fidelity(&out.state, &embedded).unwrap() >= 1.0 - 1e-12);
    assert!(sequential_nms(&[0.0, 0.3], &[0.0, 0.0], 2.0, &b).is_err());
}

#[test]
fn sequential_ms_ranks() {
    let cases: [(&[f64], u32); 3] = [(&[0.3], 3), (&[0.3, 0.2], 2), (&[0.2, 0.25, 0.15], 2)];
    for (eta2, m) in cases {
        let r = eta2.len();
        let eta: Vec<f64> = eta2.iter().map(|x| x.sqrt()).collect();
        let thetas: Vec<f64> = (0..r).map(|k| 0.5 * k as f64 - 0.2).collect();
        let p = MultinomialParams::from_eta2(eta2, m).unwrap();

        let reduced = basis(r, Cutoff::Total(m));
        let out = sequential_ms(&eta, &thetas, m, &reduced).unwrap();
        let direct = multinomial_reduced_state(&p, &thetas, &reduced).unwrap();
        assert!(
            fidelity(&out.state, &direct).unwrap() >= 1.0 - 1e-10,
            "r={r}"
        );

        let shell = basis(r + 1, Cutoff::Shell(m));
        let out = sequential_ms(&eta, &thetas, m, &shell).unwrap();
        let direct = multinomial_state(&p, &thetas, &shell).unwrap();
        assert!(
            fidelity(&out.state, &direct).unwrap() >= 1.0 - 1e-10,
            "r={r}"
        );
    }
}

#[test]
fn two_level_atoms() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let drive = TwoLevelDrive {
        m: 1,
        epsilon: 2.0,
        eta_rate: 0.5,
        theta: 0.0,
        t: std::f64::consts::FRAC_PI_2,
    };
    let b = basis(2, Cutoff::Shell(1));
    let out = dynamical_binomial(&drive, &b).unwrap();
    let mut want = StateVector::zeros(b.clone());
    want.amplitudes_mut()[0] = Complex64::new(h, 0.0);
    want.amplitudes_mut()[1] = Complex64::new(h, 0.0);
    assert!(fidelity(&out.state, &want).unwrap() >= 1.0 - 1e-12);

    for m in [1u32, 3] {
        let drive = TwoLevelDrive {
            m,
            epsilon: 1.3,
            eta_rate: 0.25,
            theta: 0.4,
            t: 2.0,
        };
        let b = basis(2, Cutoff::Shell(m));
        let out = dynamical_binomial(&drive, &b).unwrap();
        let p = MultinomialParams::from_eta2(&[0.5f64.sin().powi(2)], m).unwrap();
        let direct = multinomial_state(&p, &[0.4], &b).unwrap();
        assert!(fidelity(&out.state, &direct).unwrap() >= 1.0 - 1e-10);
        let bp = BinomialParams::new(0.5f64.sin().powi(2), m).unwrap();
        let line = basis(1, Cutoff::PerMode(m));
        let bin = binomial_state(&bp, 0.4, &line).unwrap();
        for (n, a) in bin.amplitudes().iter().enumerate() {
            let got = out
                .state
                .amplitude(&OccupationVector::new(vec![m - n as u32, n as u32]))
                .unwrap();
            assert!((got.norm_sqr() - a.norm_sqr()).abs() < 1e-12);
        }
    }

    let still = TwoLevelDrive {
        m: 3,
        epsilon: 1.0,
        eta_rate: 1.0,
        theta: 0.0,
        t: 0.0,
    };
    let b = basis(2, Cutoff::Shell(3));
    let out = dynamical_binomial(&still, &b).unwrap();
    assert_eq!(
        out.state
            .amplitude(&OccupationVector::new(vec![3, 0]))
            .unwrap()
            .re,
        1.0
    );
}

fn coherent_basis(drive: &CurrentDrive) -> Arc<TruncatedBasis> {
    let a = drive.amplitude_bound().max(0.5);
    let spec = StateSpec::real(FamilyParams::Coherent(
        fockbench::distributions::PoissonParams::new(a * a).unwrap(),
    ));
    spec.auto_basis(DISPLACEMENT_GUARD).unwrap()
}

#[test]
fn classical_current() {
    let still = CurrentDrive {
        omega: 1.0,
        segments: vec![CurrentSegment {
            duration: 2.0,
            j: Complex64::new(0.0, 0.0),
        }],
    };
    let b = coherent_basis(&still);
    let out = dynamical_coherent(&still, &b).unwrap();
    assert!(fidelity(&out.state, &StateVector::vacuum(b).unwrap()).unwrap() >= 1.0 - 1e-15);

    let flat = CurrentDrive {
        omega: 0.0,
        segments: vec![CurrentSegment {
            duration: 1.5,
            j: Complex64::new(0.8, 0.3),
        }],
    };
    let alpha = current_alpha(&flat);
    let want = Complex64::new(0.0, -1.5) * Complex64::new(0.8, 0.3);
    assert!((alpha - want).norm() < 1e-15);
    let b = coherent_basis(&flat);
    let out = dynamical_coherent(&flat, &b).unwrap();
    let coh = coherent_state_complex(alpha, &b, 1e-12).unwrap();
    assert!(fidelity(&out.state, &coh).unwrap() >= 1.0 - 1e-8);

    let seg = |d: f64, re: f64, im: f64| CurrentSegment {
        duration: d,
        j: Complex64::new(re, im),
    };
    let two = CurrentDrive {
        omega: 0.9,
        segments: vec![seg(1.0, 0.7, 0.0), seg(0.8, -0.2, 0.5)],
    };
    let first = CurrentDrive {
        omega: 0.9,
        segments: vec![seg(1.0, 0.7, 0.0)],
    };
    let second = CurrentDrive {
        omega: 0.9,
        segments: vec![seg(1.0, 0.0, 0.0), seg(0.8, -0.2, 0.5)],
    };
    let sum = current_alpha(&first) + current_alpha(&second);
    assert!((current_alpha(&two) - sum).norm() < 1e-15);
    let b = coherent_basis(&two);
    let out = dynamical_coherent(&two, &b).unwrap();
    let coh = coherent_state_complex(current_alpha(&two), &b, 1e-12).unwrap();
    assert!(fidelity(&out.state, &coh).unwrap() >= 1.0 - 1e-8);
    assert!(out.leakage < 1e-8);
}

#[test]
fn contraction_fidelities() {
    let rows = contraction_check(&[10, 100, 1000], 1.0, 0.3).unwrap();
    let frozen = [
        (0.99853128841280150, 0.99891491492523930),
        (0.99998730985400417, 0.99998768493607351),
        (0.99999987481223917, 0.99999987518723999),
    ];
    for (row, (b, n)) in rows.iter().zip(frozen) {
        assert!((row.binomial_fidelity - b).abs() < 1e-12, "{row:?}");
        assert!((row.neg_binomial_fidelity - n).abs() < 1e-12, "{row:?}");
    }
    for w in rows.windows(2) {
        assert!(w[1].binomial_fidelity > w[0].binomial_fidelity);
        assert!(w[1].neg_binomial_fidelity > w[0].neg_binomial_fidelity);
    }
    for row in contraction_check(&[10, 100], 0.0, 0.0).unwrap() {
        assert_eq!(
            (row.binomial_fidelity, row.neg_binomial_fidelity),
            (1.0, 1.0)
        );
    }
    assert!(contraction_check(&[1], 2.0, 0.0).is_err());
}

#[test]
fn ladder_identity_and_disentangling() {
    let plus = operator_identity_check(IdentityFactor::SqrtMPlusN, 3.0, 4).unwrap();
    assert!(plus.max_residual <= 1e-13);
    let minus = operator_identity_check(IdentityFactor::SqrtMMinusN, 3.0, 4).unwrap();
    assert_eq!(minus.rows[4].lhs_norm, 0.0);
    for m in [1u32, 3] {
        for zeta in [
            Complex64::from_polar(0.3, 1.0),
            Complex64::from_polar(1.2, -2.0),
        ] {
            assert!(disentangling_residual_su2(m, zeta).unwrap() <= 1e-12);
        }
    }
}
