use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;
use swarmprint::combinatorics::{hyperfactorial, log_hyperfactorial, log_superfactorial, superfactorial};
use swarmprint::emission::{
    estimate_emissions, exact_product, ln_big_rational, normalize_to_percentages, ComplexityScore, EmissionInputs,
    NormalizationMode,
};
use swarmprint::{FactorAssignment, HardwareProfile, LogMagnitude, RegionProfile};

fn scores(logs: &[f64]) -> Vec<ComplexityScore> {
    logs.iter()
        .enumerate()
        .map(|(i, v)| ComplexityScore::new(format!("a{i}"), LogMagnitude::from_ln(*v)))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn inputs(np: u64, ni: u64, h: f64, t: f64, b: f64, hours: f64, kw: f64, eta: f64, er: f64) -> EmissionInputs {
    EmissionInputs {
        num_particles: np,
        num_iterations: ni,
        factors: FactorAssignment { hyperparameter: vec![h], topology: vec![t], boundary: vec![b] },
        unit_time_hours: hours,
        hardware: HardwareProfile::new(kw, eta).unwrap(),
        region: RegionProfile::new("T", er).unwrap(),
    }
}

fn ln_kg(i: &EmissionInputs) -> f64 {
    estimate_emissions(i).unwrap().ln_kg_co2().unwrap()
}

#[test]
fn log_forms_track_exact_values() {
    // Independent oracle: ln of a product of small integers, accumulated term by term.
    for n in 0..=200u64 {
        let mut hyper = 0.0f64;
        let mut superf = 0.0f64;
        let mut ln_fact = 0.0f64;
        for i in 1..=n {
            hyper += i as f64 * (i as f64).ln();
            ln_fact += (i as f64).ln();
            superf += ln_fact;
        }
        let rel = |a: f64, b: f64| if b == 0.0 { a.abs() } else { ((a - b) / b).abs() };
        assert!(rel(log_hyperfactorial(n).ln_value(), hyper) < 1e-9, "H({n})");
        assert!(rel(log_superfactorial(n).ln_value(), superf) < 1e-9, "sf({n})");
        if n <= 60 {
            let exact_h = hyperfactorial(n).ln().unwrap();
            let exact_s = superfactorial(n).ln().unwrap();
            assert!(rel(log_hyperfactorial(n).ln_value(), exact_h) < 1e-9);
            assert!(rel(log_superfactorial(n).ln_value(), exact_s) < 1e-9);
        }
    }
}

#[test]
fn exact_and_log_agree_for_small_counts() {
    for np in 1..=30 {
        for ni in [1, 2, 7, 30] {
            let i = inputs(np, ni, 2.0, 1.5, 1.25, 3.0, 0.7, 0.9, 0.45);
            let exact = ln_big_rational(&exact_product(&i)).unwrap();
            assert!((ln_kg(&i) - exact).abs() <= 1e-9 * exact.abs().max(1.0), "np={np} ni={ni}");
        }
    }
}

#[test]
fn large_counts_stay_finite_in_log_domain() {
    let i = inputs(1_000_000, 1_000_000, 1.0, 1.0, 1.0, 72.0, 0.3, 1.0, 0.4);
    let e = estimate_emissions(&i).unwrap();
    assert!(e.ln_kg_co2().unwrap().is_finite());
    assert_eq!(e.kg_co2_exact, None);
}

#[test]
fn brute_force_products_up_to_50() {
    for n in 0..=50u64 {
        let mut h = BigUint::one();
        let mut s = BigUint::one();
        let mut fact = BigUint::one();
        for i in 1..=n {
            h *= BigUint::from(i).pow(i as u32);
            fact *= i;
            s *= &fact;
        }
        assert_eq!(hyperfactorial(n).into_biguint(), h);
        assert_eq!(superfactorial(n).into_biguint(), s);
    }
}

proptest! {
    #[test]
    fn proportional_preserves_rank_and_sums_to_100(logs in prop::collection::vec(0.001f64..1e4, 1..40)) {
        let out = normalize_to_percentages(&scores(&logs), NormalizationMode::Proportional).unwrap();
        let total: f64 = out.iter().map(|s| s.percentage.unwrap()).sum();
        prop_assert!((total - 100.0).abs() < 1e-9);
        for i in 0..logs.len() {
            for j in 0..logs.len() {
                if logs[i] < logs[j] {
                    prop_assert!(out[i].percentage.unwrap() <= out[j].percentage.unwrap());
                }
                if logs[i] == logs[j] {
                    prop_assert_eq!(out[i].percentage, out[j].percentage);
                }
            }
        }
    }

    #[test]
    fn level_grid_is_monotone_and_on_grid(logs in prop::collection::vec(-50.0f64..1e4, 1..40)) {
        let out = normalize_to_percentages(&scores(&logs), NormalizationMode::LevelGrid).unwrap();
        for i in 0..logs.len() {
            let level = out[i].level.unwrap();
            prop_assert!((18..=27).contains(&level));
            let expected = (level as f64 * 100.0 / 343.0 * 100.0).round_ties_even() / 100.0;
            prop_assert_eq!(out[i].percentage, Some(expected));
            for j in 0..logs.len() {
                if logs[i] <= logs[j] {
                    prop_assert!(level <= out[j].level.unwrap());
                }
            }
        }
    }

    #[test]
    fn emissions_grow_with_counts(np in 1u64..400, ni in 1u64..400) {
        let base = inputs(np, ni, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        let more_p = inputs(np + 1, ni, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        let more_i = inputs(np, ni + 1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        prop_assert!(ln_kg(&more_p) >= ln_kg(&base));
        prop_assert!(ln_kg(&more_i) >= ln_kg(&base));
    }

    #[test]
    fn scalars_scale_linearly(
        np in 1u64..60, ni in 1u64..60,
        hours in 0.01f64..1000.0, kw in 0.01f64..10.0, eta in 0.01f64..=1.0, er in 0.01f64..2.0,
        k in 0.1f64..10.0,
    ) {
        let a = inputs(np, ni, 1.0, 1.0, 1.0, hours, kw, eta, er);
        let b = inputs(np, ni, 1.0, 1.0, 1.0, hours * k, kw, eta, er);
        prop_assert!((ln_kg(&b) - ln_kg(&a) - k.ln()).abs() < 1e-9);
        let c = inputs(np, ni, 1.0, 1.0, 1.0, hours, kw, eta, er * k);
        prop_assert!((ln_kg(&c) - ln_kg(&a) - k.ln()).abs() < 1e-9);
    }
}
