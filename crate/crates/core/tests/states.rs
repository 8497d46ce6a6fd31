use fockbench::distributions::{
    moments_from_gf, neg_binomial_gf, neg_binomial_pmf, BinomialParams, MultinomialParams,
    NegBinomialParams, NegMultinomialParams, PoissonParams,
};
use fockbench::fock::{fidelity, Cutoff, OccupationVector, StateVector, TruncatedBasis};
use fockbench::states::{
    multinomial_reduced_state, neg_multinomial_state, number_distribution, number_moments,
    product_coherent_state, quantum_gf, FamilyParams, StateSpec,
};
use fockbench::Complex64;
use proptest::prelude::*;

fn assert_modulus_square(spec: &StateSpec, psi: &StateVector) {
    for (s, a) in psi.basis().states().iter().zip(psi.amplitudes()) {
        let p = spec.pmf(s).unwrap();
        if p > 1e-300 {
            let rel = (a.norm_sqr() - p).abs() / p;
            assert!(
                rel < 1e-12,
                "{:?} at {s}: {} vs {p}",
                spec.family(),
                a.norm_sqr()
            );
        }
    }
}

fn family_grid() -> Vec<StateSpec> {
    let mut out = Vec::new();
    for &e2 in &[0.1, 0.3, 0.6] {
        for &m in &[1u32, 2, 3, 5] {
            let mf = f64::from(m);
            out.push(StateSpec::real(FamilyParams::Coherent(
                PoissonParams::new(e2 * mf).unwrap(),
            )));
            out.push(StateSpec::real(FamilyParams::Binomial(
                BinomialParams::new(e2, m).unwrap(),
            )));
            out.push(StateSpec::real(FamilyParams::NegBinomial(
                NegBinomialParams::new(e2, mf).unwrap(),
            )));
            for r in 1..=2usize {
                let comps = vec![e2 / (r as f64 + 0.5); r];
                out.push(StateSpec::real(FamilyParams::Multinomial(
                    MultinomialParams::from_eta2(&comps, m).unwrap(),
                )));
                out.push(StateSpec::real(FamilyParams::NegMultinomial(
                    NegMultinomialParams::from_eta2(&comps, mf).unwrap(),
                )));
            }
        }
    }
    out
}

#[test]
fn modulus_square_law_on_grid() {
    for spec in family_grid() {
        let psi = spec.build_auto().unwrap();
        assert_modulus_square(&spec, &psi);
        assert!(psi.norm_deficit().abs() < 1e-11);
    }
}

#[test]
fn neg_multinomial_per_mode_cutoff() {
    let p = NegMultinomialParams::from_eta2(&[0.2, 0.1], 2.0).unwrap();
    let spec = StateSpec::real(FamilyParams::NegMultinomial(p.clone()));
    let b = TruncatedBasis::new(2, Cutoff::PerMode(60)).unwrap();
    let psi = neg_multinomial_state(&p, &[0.0, 0.0], &b, 1e-12).unwrap();
    assert_modulus_square(&spec, &psi);
    let small = TruncatedBasis::new(2, Cutoff::PerMode(5)).unwrap();
    assert!(neg_multinomial_state(&p, &[0.0, 0.0], &small, 1e-12).is_err());
}

proptest! {
    #[test]
    fn phase_covariance(e2 in 0.05f64..0.7, m in 0.5f64..6.0, theta in -3.0f64..3.0) {
        let p = FamilyParams::NegBinomial(NegBinomialParams::new(e2, m).unwrap());
        let plain = StateSpec::real(p.clone()).build_auto().unwrap();
        let turned = StateSpec::new(p, vec![theta]).unwrap().build_auto().unwrap();
        for (n, (a, b)) in plain.amplitudes().iter().zip(turned.amplitudes()).enumerate() {
            let want = a * Complex64::from_polar(1.0, n as f64 * theta);
            prop_assert!((b - want).norm() <= 1e-15 * a.norm().max(1e-300) * 4.0);
        }
        let d0 = number_distribution(&plain).probabilities;
        let d1 = number_distribution(&turned).probabilities;
        for (x, y) in d0.iter().zip(&d1) {
            prop_assert!((x - y).abs() <= 1e-15 * x);
        }
    }

    #[test]
    fn multi_mode_phase_invariant_distribution(t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let p = FamilyParams::NegMultinomial(NegMultinomialParams::from_eta2(&[0.2, 0.3], 1.5).unwrap());
        let a = StateSpec::real(p.clone()).build_auto().unwrap();
        let b = StateSpec::new(p, vec![t1, t2]).unwrap().build_auto().unwrap();
        for (x, y) in a.probabilities().iter().zip(b.probabilities()) {
            prop_assert!((x - y).abs() <= 1e-15 * x);
        }
        prop_assert!(b.amplitudes()[0].im == 0.0 && b.amplitudes()[0].re > 0.0);
    }

    #[test]
    fn quantum_gf_matches_closed_form(e2 in 0.05f64..0.7, m in 0.5f64..6.0) {
        let p = NegBinomialParams::new(e2, m).unwrap();
        let psi = StateSpec::real(FamilyParams::NegBinomial(p))
            .with_tail_tol(1e-15)
            .build_auto()
            .unwrap();
        for t in [0.0, 0.5, 1.0] {
            let q = quantum_gf(&psi, t).unwrap();
            let c = neg_binomial_gf(&p, t).unwrap();
            prop_assert!((q - c).abs() < 1e-10, "t={} {} vs {}", t, q, c);
        }
    }

    #[test]
    fn moments_match_state(e2 in 0.05f64..0.7, m in 0.5f64..6.0) {
        let p = NegBinomialParams::new(e2, m).unwrap();
        let psi = StateSpec::real(FamilyParams::NegBinomial(p))
            .with_tail_tol(1e-16)
            .build_auto()
            .unwrap();
        let (mean, var) = number_moments(&psi);
        let mo = moments_from_gf(&p);
        prop_assert!((mean - mo.mean).abs() < 1e-10 * mo.mean.max(1.0));
        prop_assert!((var - mo.variance).abs() < 1e-10 * mo.variance.max(1.0));
    }
}

#[test]
fn number_distribution_of_nbs() {
    let p = NegBinomialParams::new(0.4, 2.5).unwrap();
    let psi = StateSpec::real(FamilyParams::NegBinomial(p))
        .build_auto()
        .unwrap();
    let d = number_distribution(&psi);
    for (n, q) in d.probabilities.iter().enumerate() {
        assert!((q - neg_binomial_pmf(&p, n as u64)).abs() < 1e-12);
    }
    assert!(d.deficit.abs() < 1e-12);
}

#[test]
fn point_mass_distribution() {
    let b = TruncatedBasis::new(2, Cutoff::Total(3)).unwrap();
    let occ = OccupationVector::new(vec![1, 2]);
    let psi = StateVector::number_state(b.clone(), &occ).unwrap();
    let d = number_distribution(&psi);
    let i = b.index_of(&occ).unwrap();
    for (k, q) in d.probabilities.iter().enumerate() {
        assert_eq!(*q, if k == i { 1.0 } else { 0.0 });
    }
}

#[test]
fn multiple_coherent_limit() {
    let alphas = [0.6f64, 0.8];
    let a2: f64 = alphas.iter().map(|a| a * a).sum();
    let coh: Vec<Complex64> = alphas.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    let mut last_nms = 0.0;
    let mut last_ms = 0.0;
    for m in [10u32, 50, 250] {
        let mf = f64::from(m);
        let eta2: Vec<f64> = alphas.iter().map(|a| a * a / (mf + a2)).collect();
        let nms = StateSpec::real(FamilyParams::NegMultinomial(
            NegMultinomialParams::from_eta2(&eta2, mf).unwrap(),
        ))
        .build_auto()
        .unwrap();
        let f_nms = fidelity(&nms, &product_coherent_state(&coh, nms.basis()).unwrap()).unwrap();
        assert!(f_nms > last_nms, "nms M={m}: {f_nms} after {last_nms}");
        last_nms = f_nms;

        let eta2: Vec<f64> = alphas.iter().map(|a| a * a / mf).collect();
        let p = MultinomialParams::from_eta2(&eta2, m).unwrap();
        let b = TruncatedBasis::new(2, Cutoff::Total(m)).unwrap();
        let ms = multinomial_reduced_state(&p, &[0.0, 0.0], &b).unwrap();
        let f_ms = fidelity(&ms, &product_coherent_state(&coh, &b).unwrap()).unwrap();
        assert!(f_ms > last_ms, "ms M={m}: {f_ms} after {last_ms}");
        last_ms = f_ms;
    }
    assert!(last_nms > 0.999 && last_ms > 0.999);
}
